#include "gridbus/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "gridbus/errors.hpp"

namespace gridbus {

namespace {

using std::size_t;

// Dormand-Prince 8(5,3) tableau, Hairer's DOP853. The 5th/3rd order error
// weights share one stage support so both estimates come from a single
// fused pass.
constexpr int kDopStages = 12;  // K carries one extra row for f_new
constexpr double kDopC[kDopStages] = {
    0.0,
    0.05260015195876773,
    0.0789002279381516,
    0.1183503419072274,
    0.2816496580927726,
    0.3333333333333333,
    0.25,
    0.3076923076923077,
    0.6512820512820513,
    0.6,
    0.8571428571428571,
    1.0};
constexpr double kDopA[kDopStages][kDopStages] = {
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
     0.0},
    {0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
     0.0, 0.0, 0.0},
    {0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0,
     0.0, 0.0, 0.0, 0.0},
    {0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0,
     0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242,
     0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596,
     -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328,
     -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726,
     27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0,
     0.0},
    {0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843,
     21.230051448181193, 15.279233632882423, -33.28821096898486,
     -0.020331201708508627, 0.0, 0.0, 0.0},
    {-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295,
     -8.149787010746927, -18.52006565999696, 22.739487099350505,
     2.4936055526796523, -3.0467644718982196, 0.0, 0.0},
    {2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625,
     -17.9589318631188, 27.94888452941996, -2.8589982771350235,
     -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0}};
constexpr double kDopB[kDopStages] = {
    0.054293734116568765, 0.0,
    0.0,                  0.0,
    0.0,                  4.450312892752409,
    1.8915178993145003,   -5.801203960010585,
    0.3111643669578199,   -0.1521609496625161,
    0.20136540080403034,  0.04471061572777259};
// Shared sparsity of both error estimators (f_new weight is zero).
constexpr int kDopErrIdx[8] = {0, 5, 6, 7, 8, 9, 10, 11};
constexpr double kDopE3[8] = {-0.18980075407240762, 4.450312892752409,
                              1.8915178993145003,   -5.801203960010585,
                              -0.4226823213237919,  -0.1521609496625161,
                              0.20136540080403034,  0.02265179219836082};
constexpr double kDopE5[8] = {0.01312004499419488,   -1.2251564463762044,
                              -0.4957589496572502,   1.6643771824549864,
                              -0.35032884874997366,  0.3341791187130175,
                              0.08192320648511571,   -0.022355307863886294};

// Dormand-Prince 5(4), the cross-check method.
constexpr int kDp5Stages = 6;
constexpr double kDp5C[kDp5Stages] = {0.0, 0.2, 0.3, 0.8, 0.8888888888888888,
                                      1.0};
constexpr double kDp5A[kDp5Stages][5] = {
    {0.0, 0.0, 0.0, 0.0, 0.0},
    {0.2, 0.0, 0.0, 0.0, 0.0},
    {0.075, 0.225, 0.0, 0.0, 0.0},
    {0.9777777777777777, -3.7333333333333334, 3.5555555555555554, 0.0, 0.0},
    {2.9525986892242035, -11.595793324188385, 9.822892851699436,
     -0.2908093278463649, 0.0},
    {2.8462752525252526, -10.757575757575758, 8.906422717743473,
     0.2784090909090909, -0.2735313036020583}};
constexpr double kDp5B[kDp5Stages] = {0.09114583333333333,  0.0,
                                      0.44923629829290207,  0.6510416666666666,
                                      -0.322376179245283,   0.13095238095238096};
constexpr int kDp5ErrIdx[6] = {0, 2, 3, 4, 5, 6};  // index 6 is f_new
constexpr double kDp5E[6] = {-0.0012326388888888888, 0.0042527702905061394,
                             -0.03697916666666667,   0.05086379716981132,
                             -0.0419047619047619,    0.025};

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

// Processing in flat blocks keeps each accumulation target hot in cache
// while the stage matrices stream through once.
constexpr std::ptrdiff_t kBlock = 1 << 16;

// out = base + sum_j coef[j] * term[j], elementwise over n complex entries.
void combine_into(const cplx* base, const cplx* const* terms,
                  const double* coefs, int nterms, std::ptrdiff_t n,
                  cplx* out) {
  for (std::ptrdiff_t b = 0; b < n; b += kBlock) {
    const std::ptrdiff_t len = std::min(kBlock, n - b);
    Eigen::Map<Eigen::ArrayXcd> o(out + b, len);
    o = Eigen::Map<const Eigen::ArrayXcd>(base + b, len);
    for (int j = 0; j < nterms; ++j)
      o += coefs[j] * Eigen::Map<const Eigen::ArrayXcd>(terms[j] + b, len);
  }
}

double rms_scaled(const cplx* x, const double* scale, std::ptrdiff_t n) {
  double acc = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double m = std::abs(x[i]) / scale[i];
    acc += m * m;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

std::string at_time(double t) {
  std::ostringstream os;
  os << " at t = " << t << " ns";
  return os.str();
}

double min_eigenvalue(const DenseMat& rho) {
  Eigen::MatrixXcd h = 0.5 * (Eigen::MatrixXcd(rho) +
                              Eigen::MatrixXcd(rho).adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

double PulseEnvelope::envelope(double t) const {
  if (amplitude == 0.0) return 0.0;
  const double u = (t - center) / width;
  return amplitude * std::exp(-0.5 * u * u);
}

LindbladProblem::LindbladProblem(const LatticeSpec& spec, const SiteParams& p,
                                 double kappa, double gamma, Frame frame,
                                 double frame_omega)
    : spec_(spec),
      layout_(layout_of(spec)),
      dim_(static_cast<int>(layout_.dim)),
      frame_(frame),
      frame_omega_(frame == Frame::rotating ? frame_omega : 0.0) {
  if (kappa < 0.0 || gamma < 0.0)
    throw ValidationError("decay rates must be non-negative");

  SpMat H = build_jch_hamiltonian(spec_, p);
  if (frame_omega_ != 0.0) H = apply_frame(H, frame_omega_, spec_);

  const std::vector<SpMat> collapse = collapse_operators(spec_, kappa, gamma);
  SpMat G = cplx(0.0, -1.0) * H;
  for (const SpMat& L : collapse) {
    SpMat LL = SpMat(L.adjoint()) * L;
    G = G - cplx(0.5, 0.0) * LL;
    gathers_.push_back(CollapseMap::from_sparse(L));
  }
  G.makeCompressed();
  drift_ = G;
  rebuild_merged();

  photon_diag_.reserve(spec_.sites());
  sz_diag_.reserve(spec_.sites());
  for (int s = 0; s < spec_.sites(); ++s) {
    const std::vector<double> pd = photon_number_diagonal(spec_, s);
    photon_diag_.emplace_back(
        Eigen::Map<const Eigen::VectorXd>(pd.data(), dim_));
    if (layout_.qb_factor[s] >= 0) {
      const std::vector<double> sd = sz_diagonal(spec_, s);
      sz_diag_.emplace_back(
          Eigen::Map<const Eigen::VectorXd>(sd.data(), dim_));
    } else {
      sz_diag_.emplace_back(Eigen::VectorXd::Constant(dim_, -1.0));
    }
  }
}

void LindbladProblem::set_drive(const PulseEnvelope& pulse) {
  if (pulse.site < 0 || pulse.site >= spec_.sites())
    throw ValidationError("drive site out of range");
  if (pulse.amplitude != 0.0 && pulse.width <= 0.0)
    throw ValidationError("pulse width must be positive");
  pulse_ = pulse;
  has_drive_ = pulse.amplitude != 0.0;
  rebuild_merged();
}

double LindbladProblem::carrier_in_frame() const {
  return pulse_.carrier - frame_omega_;
}

void LindbladProblem::rebuild_merged() {
  SpMat A(dim_, dim_), Ad(dim_, dim_);
  if (has_drive_) {
    A = site_annihilator(spec_, pulse_.site);
    Ad = SpMat(A.adjoint());
  }
  // Pattern union; values are filled per channel by lookup afterwards.
  SpMat pattern = drift_;
  if (has_drive_) {
    pattern = pattern + A;
    pattern = pattern + Ad;
  }
  pattern.makeCompressed();

  const int nnz = static_cast<int>(pattern.nonZeros());
  merged_.g_val.assign(nnz, cplx(0.0, 0.0));
  merged_.a_val.assign(nnz, cplx(0.0, 0.0));
  merged_.ad_val.assign(nnz, cplx(0.0, 0.0));
  int k = 0;
  for (int r = 0; r < pattern.outerSize(); ++r) {
    for (SpMat::InnerIterator it(pattern, r); it; ++it, ++k) {
      merged_.g_val[k] = drift_.coeff(it.row(), it.col());
      if (has_drive_) {
        merged_.a_val[k] = A.coeff(it.row(), it.col());
        merged_.ad_val[k] = Ad.coeff(it.row(), it.col());
      }
    }
  }
  work_ = pattern;
  refresh_values(cplx(0.0, 0.0));
}

void LindbladProblem::refresh_values(cplx w) const {
  cplx* v = work_.valuePtr();
  const int nnz = static_cast<int>(work_.nonZeros());
  if (!has_drive_ || w == cplx(0.0, 0.0)) {
    std::memcpy(v, merged_.g_val.data(), sizeof(cplx) * nnz);
    return;
  }
  const cplx cw = cplx(0.0, -1.0) * w;             // -i w  on a
  const cplx cwb = cplx(0.0, -1.0) * std::conj(w); // -i conj(w) on a^dag
  for (int k = 0; k < nnz; ++k)
    v[k] = merged_.g_val[k] + cw * merged_.a_val[k] + cwb * merged_.ad_val[k];
}

void LindbladProblem::rhs(double t, const DenseMat& rho, DenseMat& out) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw ValidationError("state dimension does not match the lattice");
  cplx w(0.0, 0.0);
  if (has_drive_) {
    const double f = pulse_.envelope(t);
    const double delta = carrier_in_frame();
    w = f * std::exp(cplx(0.0, delta * t));
  }
  refresh_values(w);
  if (b_.rows() != dim_) b_.resize(dim_, dim_);
  b_.setZero();
  spmm_acc(cplx(1.0, 0.0), work_, rho, b_);
  out.resize(dim_, dim_);
  assemble_adjoint_sum(b_, out);
  for (const CollapseMap& g : gathers_) g.apply_acc(rho, out);
}

void lindblad_rhs(const SpMat& H, const std::vector<SpMat>& collapse,
                  const DenseMat& rho, DenseMat& out) {
  const int d = static_cast<int>(rho.rows());
  if (rho.cols() != d) throw ValidationError("state must be square");
  if (H.rows() != d || H.cols() != d)
    throw ValidationError("Hamiltonian dimension does not match the state");
  for (const SpMat& L : collapse)
    if (L.rows() != d || L.cols() != d)
      throw ValidationError("collapse operator dimension mismatch");

  SpMat G = cplx(0.0, -1.0) * H;
  for (const SpMat& L : collapse) {
    SpMat LL = SpMat(L.adjoint()) * L;
    G = G - cplx(0.5, 0.0) * LL;
  }
  G.makeCompressed();
  DenseMat b = DenseMat::Zero(d, d);
  spmm_acc(cplx(1.0, 0.0), G, rho, b);
  out.resize(d, d);
  assemble_adjoint_sum(b, out);
  for (const SpMat& L : collapse) {
    DenseMat lr = DenseMat::Zero(d, d);
    spmm_acc(cplx(1.0, 0.0), L, rho, lr);
    out += lr * DenseMat(L.adjoint());
  }
}

SpMat apply_frame(const SpMat& H, double omega, const LatticeSpec& spec) {
  if (!std::isfinite(omega)) throw ValidationError("frame frequency not finite");
  if (omega == 0.0) return H;
  SpMat out = H - cplx(omega, 0.0) * number_operator(spec);
  out.makeCompressed();
  return out;
}

namespace {

SampleRecord make_record(const LindbladProblem& pr, double t,
                         const DenseMat& y) {
  SampleRecord r;
  r.t = t;
  r.trace = trace_of(y).real();
  r.purity = y.squaredNorm();
  r.herm_defect = hermiticity_defect(y);
  const int sites = pr.spec().sites();
  r.photons.resize(sites);
  r.sz.resize(sites);
  for (int s = 0; s < sites; ++s) {
    double np = 0.0, sz = 0.0;
    const Eigen::VectorXd& pd = pr.photon_diagonals()[s];
    const Eigen::VectorXd& sd = pr.sz_diagonals()[s];
    for (int i = 0; i < pr.dimension(); ++i) {
      const double p = y(i, i).real();
      np += pd[i] * p;
      sz += sd[i] * p;
    }
    r.photons[s] = np;
    r.sz[s] = sz;
  }
  return r;
}

}  // namespace

Trajectory integrate(const LindbladProblem& problem, const DenseMat& rho0,
                     double t0, double t1, std::vector<double> sample_times,
                     const IntegratorOptions& opts) {
  const int dim = problem.dimension();
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw ValidationError("initial state dimension does not match the lattice");
  if (!(t1 > t0)) throw ValidationError("integration span must be increasing");
  if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
    throw ValidationError("tolerances must be positive");

  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()),
                     sample_times.end());
  if (!sample_times.empty() &&
      (sample_times.front() < t0 || sample_times.back() > t1))
    throw ValidationError("sample times must lie inside the span");

  const bool dop = opts.method == IntegratorOptions::Method::dop853;
  const int n_stages = dop ? kDopStages : kDp5Stages;
  const int err_order = dop ? 7 : 4;
  const double err_exponent = -1.0 / (err_order + 1);

  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dim) * dim;
  Trajectory traj;
  IntegrationStats& st = traj.stats;

  DenseMat y = rho0;
  DenseMat y_new(dim, dim), y_stage(dim, dim), f_new(dim, dim);
  std::vector<DenseMat> K(n_stages + 1);
  for (auto& k : K) k.setZero(dim, dim);
  Eigen::ArrayXd scale(n);

  auto flat = [](const DenseMat& m) { return m.data(); };

  problem.rhs(t0, y, K[0]);
  ++st.n_rhs;

  const double tr0 = trace_of(y).real();

  double t = t0;
  std::size_t si = 0;
  while (si < sample_times.size() && sample_times[si] <= t0) {
    traj.samples.push_back(make_record(problem, t0, y));
    ++si;
  }

  // Initial step selection, h ~ the scale over which the solution turns.
  double h_abs;
  const double interval = t1 - t0;
  if (opts.first_step > 0.0) {
    h_abs = std::min(opts.first_step, interval);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      scale[i] = opts.atol + std::abs(flat(y)[i]) * opts.rtol;
    const double d0 = rms_scaled(flat(y), scale.data(), n);
    const double d1 = rms_scaled(flat(K[0]), scale.data(), n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, interval);
    y_stage = y + h0 * K[0];
    problem.rhs(t0 + h0, y_stage, f_new);
    ++st.n_rhs;
    y_new = f_new - K[0];
    const double d2 = rms_scaled(flat(y_new), scale.data(), n) / h0;
    double h1;
    if (d1 <= 1e-15 && d2 <= 1e-15)
      h1 = std::max(1e-6, h0 * 1e-3);
    else
      h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / (err_order + 1));
    h_abs = std::min({100.0 * h0, h1, interval, opts.max_step});
  }

  std::vector<const cplx*> term_ptrs(n_stages + 1);
  std::vector<double> term_coefs(n_stages + 1);

  while (t < t1) {
    if (st.n_steps + st.n_rejected >= opts.max_steps)
      throw NumericError("step budget exhausted" + at_time(t));

    const double boundary =
        (si < sample_times.size()) ? sample_times[si] : t1;

    const double min_step =
        10.0 * (std::nextafter(t, std::numeric_limits<double>::infinity()) - t);
    h_abs = std::min(h_abs, opts.max_step);
    if (h_abs < min_step) h_abs = min_step;

    bool accepted = false;
    bool rejected_once = false;
    double t_new = t;
    while (!accepted) {
      if (h_abs < min_step)
        throw NumericError("step size underflow" + at_time(t));

      double h = h_abs;
      t_new = t + h;
      if (t_new > boundary) t_new = boundary;
      h = t_new - t;
      h_abs = h;

      // Stages; K[0] holds the derivative at t.
      for (int s = 1; s < n_stages; ++s) {
        const double* arow = dop ? kDopA[s] : kDp5A[s];
        int nt = 0;
        for (int j = 0; j < s; ++j) {
          if (arow[j] == 0.0) continue;
          term_ptrs[nt] = flat(K[j]);
          term_coefs[nt] = h * arow[j];
          ++nt;
        }
        combine_into(flat(y), term_ptrs.data(), term_coefs.data(), nt, n,
                     y_stage.data());
        problem.rhs(t + (dop ? kDopC[s] : kDp5C[s]) * h, y_stage, K[s]);
        ++st.n_rhs;
      }
      {
        const double* brow = dop ? kDopB : kDp5B;
        int nt = 0;
        for (int j = 0; j < n_stages; ++j) {
          if (brow[j] == 0.0) continue;
          term_ptrs[nt] = flat(K[j]);
          term_coefs[nt] = h * brow[j];
          ++nt;
        }
        combine_into(flat(y), term_ptrs.data(), term_coefs.data(), nt, n,
                     y_new.data());
      }
      problem.rhs(t_new, y_new, K[n_stages]);
      ++st.n_rhs;

      for (std::ptrdiff_t i = 0; i < n; ++i)
        scale[i] = opts.atol +
                   std::max(std::abs(flat(y)[i]), std::abs(flat(y_new)[i])) *
                       opts.rtol;

      double error_norm;
      if (dop) {
        double e5n2 = 0.0, e3n2 = 0.0;
        const cplx* ks[8];
        for (int j = 0; j < 8; ++j) ks[j] = flat(K[kDopErrIdx[j]]);
        for (std::ptrdiff_t i = 0; i < n; ++i) {
          cplx e5(0.0, 0.0), e3(0.0, 0.0);
          for (int j = 0; j < 8; ++j) {
            const cplx kv = ks[j][i];
            e5 += kDopE5[j] * kv;
            e3 += kDopE3[j] * kv;
          }
          const double inv = 1.0 / scale[i];
          e5n2 += std::norm(e5 * inv);
          e3n2 += std::norm(e3 * inv);
        }
        if (e5n2 == 0.0 && e3n2 == 0.0) {
          error_norm = 0.0;
        } else {
          const double denom = e5n2 + 0.01 * e3n2;
          error_norm =
              std::abs(h) * e5n2 / std::sqrt(denom * static_cast<double>(n));
        }
      } else {
        double en2 = 0.0;
        const cplx* ks[6];
        for (int j = 0; j < 6; ++j) ks[j] = flat(K[kDp5ErrIdx[j]]);
        for (std::ptrdiff_t i = 0; i < n; ++i) {
          cplx e(0.0, 0.0);
          for (int j = 0; j < 6; ++j) e += kDp5E[j] * ks[j][i];
          const double m = std::abs(e) / scale[i];
          en2 += m * m;
        }
        error_norm = std::abs(h) * std::sqrt(en2 / static_cast<double>(n));
      }

      if (!std::isfinite(error_norm))
        throw NumericError("non-finite state encountered" + at_time(t));

      if (error_norm < 1.0) {
        double factor =
            (error_norm == 0.0)
                ? kMaxFactor
                : std::min(kMaxFactor,
                           kSafety * std::pow(error_norm, err_exponent));
        if (rejected_once) factor = std::min(1.0, factor);
        h_abs *= factor;
        accepted = true;
      } else {
        h_abs *= std::max(kMinFactor,
                          kSafety * std::pow(error_norm, err_exponent));
        rejected_once = true;
        ++st.n_rejected;
      }
    }

    t = t_new;
    y.swap(y_new);
    K[0].swap(K[n_stages]);  // derivative at the accepted point
    ++st.n_steps;

    const double rhs_tr = std::abs(trace_of(K[0]));
    st.max_rhs_trace = std::max(st.max_rhs_trace, rhs_tr);
    if (rhs_tr > opts.rhs_trace_tol)
      throw NumericError("derivative trace " + std::to_string(rhs_tr) +
                         " exceeds tolerance" + at_time(t));

    double tr = trace_of(y).real();
    st.max_trace_err = std::max(st.max_trace_err, std::abs(tr - tr0));
    if (std::abs(tr - tr0) > opts.trace_tol)
      throw NumericError("trace drift " + std::to_string(std::abs(tr - tr0)) +
                         " exceeds tolerance" + at_time(t));
    if (opts.renormalize_trace && tr != 0.0) {
      y *= (tr0 / tr);
      K[0] *= (tr0 / tr);
    }

    if (si < sample_times.size() && t == sample_times[si]) {
      SampleRecord rec = make_record(problem, t, y);
      st.max_herm_defect = std::max(st.max_herm_defect, rec.herm_defect);
      if (dim <= opts.positivity_sample_dim_cap) {
        const double me = min_eigenvalue(y);
        if (me < -opts.positivity_tol)
          throw NumericError("positivity violation, eigenvalue " +
                             std::to_string(me) + at_time(t));
      }
      traj.samples.push_back(std::move(rec));
      ++si;
    }
  }

  traj.rho_final = y;
  traj.t_final = t;
  st.min_final_eig = min_eigenvalue(y);
  if (st.min_final_eig < -opts.positivity_tol)
    throw NumericError("positivity violation, eigenvalue " +
                       std::to_string(st.min_final_eig) + " in the final state");
  st.max_herm_defect =
      std::max(st.max_herm_defect, hermiticity_defect(y));
  return traj;
}

}  // namespace gridbus
