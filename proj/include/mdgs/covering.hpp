#ifndef MDGS_COVERING_HPP
#define MDGS_COVERING_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mdgs/disorder.hpp"
#include "mdgs/lattice.hpp"

namespace mdgs {

struct CoveringError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A monomer-dimer covering: every vertex is a monomer or the endpoint of
// exactly one dimer. Dimers and monomers are stored sorted; the constructor
// validates the full-cover invariants rather than repairing them.
class Covering {
 public:
  Covering(std::shared_ptr<const Lattice> lattice, std::vector<std::int32_t> dimers,
           std::vector<std::int32_t> monomers);
  static Covering all_monomers(std::shared_ptr<const Lattice> lattice);
  // Monomers derived as the vertices left uncovered by the dimer set.
  static Covering from_dimers(std::shared_ptr<const Lattice> lattice,
                              std::vector<std::int32_t> dimers);

  const Lattice& lattice() const { return *lattice_; }
  const std::shared_ptr<const Lattice>& lattice_ptr() const { return lattice_; }
  const std::vector<std::int32_t>& dimers() const { return dimers_; }    // edge ids, ascending
  const std::vector<std::int32_t>& monomers() const { return monomers_; } // vertex ids, ascending

  bool occupied(SigmaIndex x) const;
  bool vertex_is_monomer(std::int32_t v) const { return occupied(v); }
  bool edge_is_dimer(std::int32_t e) const { return occupied(lattice_->edge_sigma(e)); }

  friend bool operator==(const Covering& a, const Covering& b) {
    return a.dimers_ == b.dimers_ && a.monomers_ == b.monomers_;
  }

  // One line per Sigma element: "sigma_index,status".
  void write(std::ostream& out) const;
  static Covering read(std::istream& in, std::shared_ptr<const Lattice> lattice);

 private:
  std::shared_ptr<const Lattice> lattice_;
  std::vector<std::int32_t> dimers_;
  std::vector<std::int32_t> monomers_;
};

// H(M) = sum of J over the monomers and dimers of M.
double energy(const Covering& m, const WeightAssignment& j);

// A partial configuration xi : S -> {0,1} on a finite S subset of Sigma.
class LocalConstraint {
 public:
  LocalConstraint() = default;
  static LocalConstraint single(SigmaIndex x, bool occupied);

  void set(SigmaIndex x, bool occupied);
  std::optional<bool> at(SigmaIndex x) const;
  bool empty() const { return statuses_.empty(); }
  std::size_t size() const { return statuses_.size(); }
  // (site, status) pairs sorted by Sigma index.
  const std::vector<std::pair<SigmaIndex, bool>>& statuses() const { return statuses_; }
  std::vector<SigmaIndex> support() const;

  friend bool operator==(const LocalConstraint&, const LocalConstraint&) = default;

 private:
  std::vector<std::pair<SigmaIndex, bool>> statuses_;
};

// One path or loop of a symmetric difference. Path elements run
// (vertex, edge, ..., edge, vertex); loop elements are edges in cyclic order.
// side[i] is 0 if elements[i] belongs to the first covering, 1 otherwise.
struct SymDiffComponent {
  enum class Kind { kPath, kLoop };
  Kind kind = Kind::kPath;
  std::vector<SigmaIndex> elements;
  std::vector<std::int8_t> side;

  std::size_t size() const { return elements.size(); }
  std::vector<SigmaIndex> side_elements(int which) const;
};

struct SymDiffDecomposition {
  std::vector<SymDiffComponent> components;

  bool empty() const { return components.empty(); }
  std::size_t total_elements() const;
};

// Lemma-style decomposition of M1 delta M2 into disjoint simple paths and
// loops whose elements alternate between the two coverings.
SymDiffDecomposition sym_diff_decompose(const Covering& m1, const Covering& m2);

// Remove the component's elements on M's side and add back the complementary
// side. Swapping twice returns M.
Covering apply_component_swap(const Covering& m, const SymDiffComponent& comp);

// Exhaustive, duplicate-free enumeration of all coverings; guarded to
// |Sigma| <= 40. The callback may return false to stop early.
void enumerate_coverings(const std::shared_ptr<const Lattice>& lattice,
                         const std::function<bool(const Covering&)>& visit);
std::vector<Covering> enumerate_coverings(const std::shared_ptr<const Lattice>& lattice);

// Best-effort constructive witness for the validity of xi: builds a covering
// agreeing with xi on its support, or nullopt when the greedy repair fails.
// Success implies validity; failure implies nothing.
std::optional<Covering> extend_constraint(const std::shared_ptr<const Lattice>& lattice,
                                          const LocalConstraint& xi);

// True iff some covering agrees with xi (decided by the constrained solver's
// feasibility; declared here with the rest of the constraint machinery).
bool is_valid_constraint(const Lattice& lattice, const LocalConstraint& xi);

}  // namespace mdgs

#endif
