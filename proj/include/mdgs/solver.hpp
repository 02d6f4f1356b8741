#ifndef MDGS_SOLVER_HPP
#define MDGS_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdgs/covering.hpp"
#include "mdgs/disorder.hpp"
#include "mdgs/lattice.hpp"

namespace mdgs {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reduction data behind the matching solve: per-edge gain
// g_e = J_u + J_v - J_e, so that H(M) = sum_v J_v - sum_{dimers} g_e,
// and the must-match penalty B > sum_e |g_e| + 1.
class GainGraph {
 public:
  explicit GainGraph(const WeightAssignment& j);

  double gain(std::int32_t e) const { return gains_[e]; }
  double penalty() const { return penalty_; }
  double vertex_weight_sum() const { return vertex_weight_sum_; }
  const std::vector<double>& gains() const { return gains_; }

 private:
  std::vector<double> gains_;
  double penalty_;
  double vertex_weight_sum_;
};

struct SolveResult {
  std::optional<Covering> covering;  // engaged iff feasible
  double energy = 0.0;
  long tie_events = 0;
  bool feasible = false;

  const Covering& covering_ref() const {
    if (!covering) throw SolverError("solve was infeasible; no covering");
    return *covering;
  }
};

// The exact minimum-energy covering, via maximum-weight matching on gains.
SolveResult ground_state(const WeightAssignment& j);

// Brute-force reference: argmin of H over the full enumeration of coverings
// with the documented tie rule. Guarded by enumerate_coverings' size limit;
// independent of the matching path it cross-checks.
SolveResult oracle_ground_state(const WeightAssignment& j);

// Argmin of H over coverings agreeing with xi on its support; infeasible
// constraints are reported through the feasible flag, not an exception.
SolveResult constrained_ground_state(const WeightAssignment& j, const LocalConstraint& xi);

// Energy tolerance used by tie detection: 1e-9 scaled by the instance's
// weight magnitude.
double tie_tolerance(const WeightAssignment& j);

// Compares candidate coverings by energy with the tie rule (lexicographic
// order on the occupied Sigma-index sets); returns true when `a` is strictly
// better, counting detected ties.
bool covering_beats(const Covering& a, double ea, const Covering& b, double eb, double tol,
                    long* tie_events);

// delta H(G, S, xi, xi2) = H(M_{S,xi2}) - H(M_{S,xi}); both constraints must
// share a support and be feasible.
double delta_H(const WeightAssignment& j, const LocalConstraint& xi, const LocalConstraint& xi2);

// Transition point K_{G,x}: the critical weight at x, independent of J_x;
// x sits in the ground state iff J_x <= K_{G,x}. Empty when a single-site
// constraint is infeasible (degenerate explicit graphs only).
std::optional<double> transition_point(const WeightAssignment& j, SigmaIndex x);

// F_G(x) = |K_{G,x} - J_x|.
std::optional<double> flexibility(const WeightAssignment& j, SigmaIndex x);

// O(v) = max over u ~ v of (J_u + J_v - J_uv); negative O(v) forces v to be
// a monomer of the ground state.
double optimality(const WeightAssignment& j, std::int32_t v);

// J_e > J_u + J_v: such an edge is never in a ground state.
bool is_inaccessible(const WeightAssignment& j, std::int32_t e);

// The unique xi in V(S) whose constrained ground state is the global one;
// ties are counted and resolved lexicographically.
LocalConstraint metastate_cell(const WeightAssignment& j, std::span<const SigmaIndex> s,
                               long* tie_events = nullptr);

enum class PathModVerdict { kEmptyBranch, kPathBranch, kSkip, kFail };

struct PathModReport {
  PathModVerdict verdict = PathModVerdict::kSkip;
  std::string detail;
};

// The alternating-path dichotomy: raise the off-path edges to
// inaccessibility (on gauged weights), shift the start vertex's edges by
// eps/2, re-solve, and classify M delta M~ as empty or a path from u_1
// along S stopping before the path's final edge. Unmet preconditions give
// kSkip; any other outcome is kFail.
PathModReport path_modification_check(const WeightAssignment& j,
                                      std::span<const std::int32_t> path_vertices, int j_index,
                                      double eps, std::uint64_t seed,
                                      std::uint32_t sample_index = 0);

}  // namespace mdgs

#endif
