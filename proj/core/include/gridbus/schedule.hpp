#pragma once

// Four-step frequency-multiplexed syndrome-extraction cycle on the
// code/ancilla checkerboard, its validator, and code-folding depth
// tradeoffs.
//
// Roles: code qubits on (n+m) even sites, ancillas on (n+m) odd sites.
// Ancilla type alternates by row (X on even rows, Z on odd rows), which
// is a checkerboard on the ancilla sublattice. Each step pairs every
// ancilla with one lattice neighbor (skipped where the neighbor falls
// outside the grid): X ancillas take N, W, E, S in steps 1..4 while Z
// ancillas take the mirrored order S, E, W, N. Within a step the pairs
// form a matching, and over the cycle each ancilla meets its full
// neighbor set exactly once.
//
// Two qubit frequencies (labeled r and b) are reassigned per step so
// that a pair is resonant exactly when intended: the step patterns
//   1: (floor((n+1)/2) + m) mod 2        4: (floor(n/2) + m) mod 2
//   2: (n + floor(m/2)) mod 2            3: (n + floor((m+1)/2)) mod 2
// color every lattice edge bichromatic except the step's own pairs.

#include <string>
#include <vector>

namespace gridbus {

enum class SiteRole { code, ancilla };
enum class FreqSet { r, b };
enum class PlaquetteType { X, Z };

struct Plaquette {
  PlaquetteType type = PlaquetteType::X;
  int ancilla = 0;        // flat site index, row-major
  std::vector<int> data;  // in-bounds lattice neighbors, N/W/E/S order
};

struct CodeLayout {
  int rows = 0, cols = 0;
  std::vector<SiteRole> role;      // per site, row-major
  std::vector<FreqSet> idle_freq;  // checkerboard rest assignment
  std::vector<Plaquette> plaquettes;

  int sites() const { return rows * cols; }
  int site(int n, int m) const { return n * cols + m; }
  int row(int s) const { return s / cols; }
  int col(int s) const { return s % cols; }
  bool in_bounds(int n, int m) const {
    return n >= 0 && n < rows && m >= 0 && m < cols;
  }
  std::vector<int> neighbors(int s) const;
};

// pre: N, M >= 2.
CodeLayout build_layout(int N, int M);

struct StepPair {
  int ancilla = 0;
  int data = 0;
};

struct CycleStep {
  std::vector<StepPair> pairs;
  std::vector<FreqSet> freq;  // per site, this step
};

struct SyndromeCycle {
  std::vector<CycleStep> steps;  // exactly 4 for the unfolded layout
};

// Degenerate strips (extent 1 on either axis) have no valid four-step
// cycle and are rejected.
SyndromeCycle build_syndrome_cycle(const CodeLayout& layout);

enum class ViolationKind {
  step_count,          // cycle does not have exactly 4 steps
  duplicate_qubit,     // qubit appears in two pairs of one step
  not_adjacent,        // paired sites are not lattice neighbors
  bad_roles,           // pair is not (ancilla, code)
  pair_freq_mismatch,  // intended pair detuned
  crosstalk,           // adjacent active-active same-frequency non-pair
  idle_collision,      // active qubit's idle neighbor shares its frequency
  coverage_missing,    // (ancilla, neighbor) edge never scheduled
  coverage_duplicate   // edge scheduled more than once
};

std::string to_string(ViolationKind k);

struct Violation {
  ViolationKind kind = ViolationKind::step_count;
  int step = -1;  // -1 for cycle-level findings
  int site_a = -1;
  int site_b = -1;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Never throws; structural problems come back as violations.
ValidationReport validate_cycle(const CodeLayout& layout,
                                const SyndromeCycle& cycle);

// Folding halves one lattice axis per level, alternating columns then
// rows, by stacking the far half onto the near half (site k maps to
// k mod half). Stacking keeps every lattice-adjacent pair on distinct
// resonators, so intended gates stay schedulable at any level; mirror
// folding would merge partners across the crease.
struct FoldedLayout {
  int f = 0;
  int multiplicity = 1;  // qubits per resonator, 2^f
  int res_rows = 0, res_cols = 0;
  std::vector<int> resonator;  // site -> resonator id, row-major

  // Depth report: per-step minimum rounds so that no resonator serves
  // two different pairs at once. Exact minimum (branch and bound) up to
  // 24 pairs per step; greedy upper bound beyond.
  std::vector<int> step_rounds;
  int depth_multiplier = 1;      // max over steps
  int serialization_factor = 0;  // total rounds across the cycle
};

// pre: the folded axis has even extent at every level up to f.
FoldedLayout fold_layout(const CodeLayout& layout, int f);

// Grid rendering: one block per step, role/frequency per cell, active
// pairs marked.
std::string render_cycle_text(const CodeLayout& layout,
                              const SyndromeCycle& cycle);

}  // namespace gridbus
