#include "gridbus/schedule.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>

#include "gridbus/errors.hpp"

namespace gridbus {

namespace {

// Minimum number of conflict-free groups covering every item, where
// conflict[i] is the adjacency bitmask of item i. Exact branch-and-bound
// seeded by the greedy first-fit bound; instances past 24 items keep the
// greedy answer so the worst case stays polynomial.
int min_conflict_rounds(const std::vector<std::uint64_t>& conflict) {
  const int n = static_cast<int>(conflict.size());
  if (n == 0) return 0;
  std::vector<int> color(n, -1);
  int greedy = 0;
  for (int i = 0; i < n; ++i) {
    std::uint64_t busy = 0;
    for (int j = 0; j < i; ++j)
      if ((conflict[i] >> j) & 1) busy |= std::uint64_t{1} << color[j];
    int c = 0;
    while ((busy >> c) & 1) ++c;
    color[i] = c;
    greedy = std::max(greedy, c + 1);
  }
  if (n > 24) return greedy;

  int best = greedy;
  std::vector<std::uint64_t> members;  // per group, bitmask of its items
  std::function<void(int, int)> place = [&](int i, int used) {
    if (used >= best) return;
    if (i == n) {
      best = used;
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (int g = 0; g < used; ++g) {
      if ((members[g] & conflict[i]) == 0) {
        members[g] |= bit;
        place(i + 1, used);
        members[g] &= ~bit;
      }
    }
    if (used + 1 < best) {
      members.push_back(bit);
      place(i + 1, used + 1);
      members.pop_back();
    }
  };
  place(0, 0);
  return best;
}

// N, W, E, S displacement table; X ancillas walk it forward over the
// four steps, Z ancillas walk it backward.
constexpr int kDirRow[4] = {-1, 0, 0, 1};
constexpr int kDirCol[4] = {0, -1, 1, 0};

int x_direction(int step) { return step; }
int z_direction(int step) { return 3 - step; }

FreqSet step_color(int step, int n, int m) {
  int c = 0;
  switch (step) {
    case 0: c = (n + 1) / 2 + m; break;
    case 1: c = n + m / 2; break;
    case 2: c = n + (m + 1) / 2; break;
    case 3: c = n / 2 + m; break;
    default: throw ValidationError("cycle step out of range");
  }
  return (c % 2 == 0) ? FreqSet::r : FreqSet::b;
}

bool adjacent(const CodeLayout& lay, int a, int b) {
  const int dn = std::abs(lay.row(a) - lay.row(b));
  const int dm = std::abs(lay.col(a) - lay.col(b));
  return dn + dm == 1;
}

std::string site_name(const CodeLayout& lay, int s) {
  std::ostringstream os;
  os << "(" << lay.row(s) << "," << lay.col(s) << ")";
  return os.str();
}

}  // namespace

std::vector<int> CodeLayout::neighbors(int s) const {
  std::vector<int> out;
  const int n = row(s), m = col(s);
  for (int d = 0; d < 4; ++d) {
    const int nn = n + kDirRow[d], mm = m + kDirCol[d];
    if (in_bounds(nn, mm)) out.push_back(site(nn, mm));
  }
  return out;
}

CodeLayout build_layout(int N, int M) {
  if (N < 2 || M < 2)
    throw ValidationError("layout requires extent >= 2 on both axes");
  CodeLayout lay;
  lay.rows = N;
  lay.cols = M;
  lay.role.resize(lay.sites());
  lay.idle_freq.resize(lay.sites());
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) {
      const int s = lay.site(n, m);
      const bool odd = (n + m) % 2 != 0;
      lay.role[s] = odd ? SiteRole::ancilla : SiteRole::code;
      lay.idle_freq[s] = odd ? FreqSet::b : FreqSet::r;
    }
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < M; ++m) {
      const int s = lay.site(n, m);
      if (lay.role[s] != SiteRole::ancilla) continue;
      Plaquette p;
      p.type = (n % 2 == 0) ? PlaquetteType::X : PlaquetteType::Z;
      p.ancilla = s;
      p.data = lay.neighbors(s);
      lay.plaquettes.push_back(std::move(p));
    }
  return lay;
}

SyndromeCycle build_syndrome_cycle(const CodeLayout& layout) {
  if (layout.rows < 2 || layout.cols < 2)
    throw ValidationError("degenerate strip has no four-step cycle");
  SyndromeCycle cy;
  cy.steps.resize(4);
  for (int k = 0; k < 4; ++k) {
    CycleStep& st = cy.steps[k];
    st.freq.resize(layout.sites());
    for (int n = 0; n < layout.rows; ++n)
      for (int m = 0; m < layout.cols; ++m)
        st.freq[layout.site(n, m)] = step_color(k, n, m);
    for (const Plaquette& p : layout.plaquettes) {
      const int d =
          p.type == PlaquetteType::X ? x_direction(k) : z_direction(k);
      const int nn = layout.row(p.ancilla) + kDirRow[d];
      const int mm = layout.col(p.ancilla) + kDirCol[d];
      if (!layout.in_bounds(nn, mm)) continue;  // boundary ancilla idles
      st.pairs.push_back({p.ancilla, layout.site(nn, mm)});
    }
  }
  return cy;
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::step_count: return "step_count";
    case ViolationKind::duplicate_qubit: return "duplicate_qubit";
    case ViolationKind::not_adjacent: return "not_adjacent";
    case ViolationKind::bad_roles: return "bad_roles";
    case ViolationKind::pair_freq_mismatch: return "pair_freq_mismatch";
    case ViolationKind::crosstalk: return "crosstalk";
    case ViolationKind::idle_collision: return "idle_collision";
    case ViolationKind::coverage_missing: return "coverage_missing";
    case ViolationKind::coverage_duplicate: return "coverage_duplicate";
  }
  return "unknown";
}

ValidationReport validate_cycle(const CodeLayout& layout,
                                const SyndromeCycle& cycle) {
  ValidationReport rep;
  auto add = [&rep](ViolationKind kind, int step, int a, int b,
                    std::string detail) {
    rep.violations.push_back({kind, step, a, b, std::move(detail)});
  };

  if (cycle.steps.size() != 4)
    add(ViolationKind::step_count, -1, -1, -1,
        "cycle has " + std::to_string(cycle.steps.size()) +
            " steps, expected 4");

  const int S = layout.sites();
  std::map<std::pair<int, int>, int> edge_uses;

  for (int k = 0; k < static_cast<int>(cycle.steps.size()); ++k) {
    const CycleStep& st = cycle.steps[k];
    const bool freq_ok = static_cast<int>(st.freq.size()) == S;
    if (!freq_ok)
      add(ViolationKind::step_count, k, -1, -1,
          "step frequency table has wrong size");

    std::vector<int> uses(S, 0);
    std::vector<int> partner(S, -1);
    for (const StepPair& pr : st.pairs) {
      if (pr.ancilla < 0 || pr.ancilla >= S || pr.data < 0 || pr.data >= S) {
        add(ViolationKind::not_adjacent, k, pr.ancilla, pr.data,
            "site index out of range");
        continue;
      }
      ++uses[pr.ancilla];
      ++uses[pr.data];
      partner[pr.ancilla] = pr.data;
      partner[pr.data] = pr.ancilla;
      ++edge_uses[{pr.ancilla, pr.data}];

      if (!adjacent(layout, pr.ancilla, pr.data))
        add(ViolationKind::not_adjacent, k, pr.ancilla, pr.data,
            site_name(layout, pr.ancilla) + " and " +
                site_name(layout, pr.data) + " are not neighbors");
      if (layout.role[pr.ancilla] != SiteRole::ancilla ||
          layout.role[pr.data] != SiteRole::code)
        add(ViolationKind::bad_roles, k, pr.ancilla, pr.data,
            "pair is not (ancilla, code)");
      if (freq_ok && st.freq[pr.ancilla] != st.freq[pr.data])
        add(ViolationKind::pair_freq_mismatch, k, pr.ancilla, pr.data,
            "intended pair is detuned");
    }
    for (int s = 0; s < S; ++s)
      if (uses[s] > 1)
        add(ViolationKind::duplicate_qubit, k, s, -1,
            site_name(layout, s) + " appears in " + std::to_string(uses[s]) +
                " pairs");

    if (!freq_ok) continue;
    // Crosstalk audit over every lattice edge touching an active qubit.
    for (int s = 0; s < S; ++s) {
      if (uses[s] == 0) continue;
      for (int u : layout.neighbors(s)) {
        if (u == partner[s] && partner[u] == s) continue;
        if (st.freq[u] != st.freq[s]) continue;
        if (uses[u] > 0) {
          if (u > s)  // each active-active edge once
            add(ViolationKind::crosstalk, k, s, u,
                site_name(layout, s) + "-" + site_name(layout, u) +
                    " resonant but not intended");
        } else {
          add(ViolationKind::idle_collision, k, s, u,
              "idle " + site_name(layout, u) + " resonant with active " +
                  site_name(layout, s));
        }
      }
    }
  }

  // Cycle completeness: each (ancilla, neighbor) edge exactly once.
  for (const Plaquette& p : layout.plaquettes)
    for (int d : p.data) {
      const auto it = edge_uses.find({p.ancilla, d});
      const int n_uses = it == edge_uses.end() ? 0 : it->second;
      if (n_uses == 0)
        add(ViolationKind::coverage_missing, -1, p.ancilla, d,
            site_name(layout, p.ancilla) + "-" + site_name(layout, d) +
                " never scheduled");
      else if (n_uses > 1)
        add(ViolationKind::coverage_duplicate, -1, p.ancilla, d,
            site_name(layout, p.ancilla) + "-" + site_name(layout, d) +
                " scheduled " + std::to_string(n_uses) + " times");
    }
  return rep;
}

FoldedLayout fold_layout(const CodeLayout& layout, int f) {
  if (f < 0) throw ValidationError("folding level must be non-negative");
  FoldedLayout out;
  out.f = f;
  out.multiplicity = 1 << f;
  out.res_rows = layout.rows;
  out.res_cols = layout.cols;

  // Track the halvings first so a non-divisible extent fails fast.
  for (int level = 0; level < f; ++level) {
    int& extent = (level % 2 == 0) ? out.res_cols : out.res_rows;
    if (extent % 2 != 0)
      throw ValidationError("fold level " + std::to_string(level + 1) +
                            " needs an even extent, have " +
                            std::to_string(extent));
    extent /= 2;
  }

  out.resonator.resize(layout.sites());
  for (int s = 0; s < layout.sites(); ++s) {
    int n = layout.row(s), m = layout.col(s);
    int rr = layout.rows, cc = layout.cols;
    for (int level = 0; level < f; ++level) {
      if (level % 2 == 0) {
        cc /= 2;
        m %= cc;  // stack far half onto near half
      } else {
        rr /= 2;
        n %= rr;
      }
    }
    out.resonator[s] = n * out.res_cols + m;
  }

  const SyndromeCycle cycle = build_syndrome_cycle(layout);
  out.step_rounds.reserve(cycle.steps.size());
  for (const CycleStep& st : cycle.steps) {
    // Two pairs conflict when they touch a common resonator; a pair may
    // span one resonator by itself (its own coupling). Rounds are the
    // minimum partition into conflict-free groups: exact branch-and-bound
    // up to 24 pairs, greedy first-fit beyond (upper bound only).
    const std::size_t n = st.pairs.size();
    std::vector<std::uint64_t> conflict(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int ra = out.resonator[st.pairs[i].ancilla];
      const int rd = out.resonator[st.pairs[i].data];
      for (std::size_t j = 0; j < i; ++j) {
        const int qa = out.resonator[st.pairs[j].ancilla];
        const int qd = out.resonator[st.pairs[j].data];
        if (qa == ra || qa == rd || qd == ra || qd == rd) {
          conflict[i] |= std::uint64_t{1} << j;
          conflict[j] |= std::uint64_t{1} << i;
        }
      }
    }
    out.step_rounds.push_back(min_conflict_rounds(conflict));
  }
  out.serialization_factor = 0;
  out.depth_multiplier = 1;
  for (int r : out.step_rounds) {
    out.serialization_factor += r;
    out.depth_multiplier = std::max(out.depth_multiplier, r);
  }
  return out;
}

std::string render_cycle_text(const CodeLayout& layout,
                              const SyndromeCycle& cycle) {
  std::ostringstream os;
  for (std::size_t k = 0; k < cycle.steps.size(); ++k) {
    const CycleStep& st = cycle.steps[k];
    os << "step " << (k + 1) << "\n";
    std::vector<char> active(layout.sites(), 0);
    for (const StepPair& pr : st.pairs) {
      if (pr.ancilla >= 0 && pr.ancilla < layout.sites())
        active[pr.ancilla] = 1;
      if (pr.data >= 0 && pr.data < layout.sites()) active[pr.data] = 1;
    }
    for (int n = 0; n < layout.rows; ++n) {
      os << "  ";
      for (int m = 0; m < layout.cols; ++m) {
        const int s = layout.site(n, m);
        char role = '.';
        if (layout.role[s] == SiteRole::ancilla) {
          role = 'Z';
          for (const Plaquette& p : layout.plaquettes)
            if (p.ancilla == s && p.type == PlaquetteType::X) role = 'X';
        }
        const char fr = (static_cast<int>(st.freq.size()) == layout.sites() &&
                         st.freq[s] == FreqSet::r)
                            ? 'r'
                            : 'b';
        os << role << fr << (active[s] ? '*' : ' ');
        if (m + 1 < layout.cols) os << ' ';
      }
      os << "\n";
    }
    for (const StepPair& pr : st.pairs)
      os << "  " << site_name(layout, pr.ancilla) << " -> "
         << site_name(layout, pr.data) << "\n";
  }
  return os.str();
}

}  // namespace gridbus
