#include "gridbus/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "gridbus/errors.hpp"

namespace gridbus {

void spmm_acc(cplx alpha, const SpMat& A, const DenseMat& X, DenseMat& Y) {
  const int n = static_cast<int>(A.rows());
  const int d = static_cast<int>(X.cols());
  const int* outer = A.outerIndexPtr();
  const int* inner = A.innerIndexPtr();
  const cplx* vals = A.valuePtr();
  const cplx* xp = X.data();
  cplx* yp = Y.data();

  constexpr int panel = 256;
  for (int c0 = 0; c0 < d; c0 += panel) {
    const int c1 = std::min(d, c0 + panel);
    for (int i = 0; i < n; ++i) {
      cplx* yrow = yp + static_cast<std::size_t>(i) * d;
      for (int k = outer[i]; k < outer[i + 1]; ++k) {
        const cplx w = alpha * vals[k];
        const cplx* xrow = xp + static_cast<std::size_t>(inner[k]) * d;
        for (int c = c0; c < c1; ++c) yrow[c] += w * xrow[c];
      }
    }
  }
}

void assemble_adjoint_sum(const DenseMat& B, DenseMat& out) {
  const int n = static_cast<int>(B.rows());
  out.resize(n, n);
  const cplx* bp = B.data();
  cplx* op = out.data();
  constexpr int blk = 64;
  for (int i0 = 0; i0 < n; i0 += blk) {
    const int i1 = std::min(n, i0 + blk);
    for (int j0 = 0; j0 < n; j0 += blk) {
      const int j1 = std::min(n, j0 + blk);
      for (int i = i0; i < i1; ++i)
        for (int j = j0; j < j1; ++j)
          op[static_cast<std::size_t>(i) * n + j] =
              bp[static_cast<std::size_t>(i) * n + j] +
              std::conj(bp[static_cast<std::size_t>(j) * n + i]);
    }
  }
}

CollapseMap CollapseMap::from_sparse(const SpMat& L) {
  CollapseMap m;
  const int n = static_cast<int>(L.rows());
  const int* outer = L.outerIndexPtr();
  const int* inner = L.innerIndexPtr();
  const cplx* vals = L.valuePtr();
  for (int i = 0; i < n; ++i) {
    const int cnt = outer[i + 1] - outer[i];
    if (cnt == 0) continue;
    if (cnt > 1)
      throw NumericError("CollapseMap: operator has a row with multiple entries");
    m.row.push_back(i);
    m.col.push_back(inner[outer[i]]);
    m.val.push_back(vals[outer[i]]);
  }
  return m;
}

void CollapseMap::apply_acc(const DenseMat& rho, DenseMat& out) const {
  const int d = static_cast<int>(rho.cols());
  const int S = static_cast<int>(row.size());
  const cplx* rp = rho.data();
  cplx* op = out.data();
  for (int s = 0; s < S; ++s) {
    const cplx vs = val[s];
    cplx* orow = op + static_cast<std::size_t>(row[s]) * d;
    const cplx* rrow = rp + static_cast<std::size_t>(col[s]) * d;
    for (int t = 0; t < S; ++t)
      orow[row[t]] += vs * std::conj(val[t]) * rrow[col[t]];
  }
}

cplx trace_of(const DenseMat& m) {
  cplx tr = 0.0;
  for (int i = 0; i < m.rows(); ++i) tr += m(i, i);
  return tr;
}

double hermiticity_defect(const DenseMat& m) {
  double acc = 0.0;
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const cplx d = m(i, j) - std::conj(m(j, i));
      const double a = std::norm(d);
      acc += (i == j) ? a : 2.0 * a;
    }
  return std::sqrt(acc);
}

}  // namespace gridbus
