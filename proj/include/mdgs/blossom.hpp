#ifndef MDGS_BLOSSOM_HPP
#define MDGS_BLOSSOM_HPP

#include <cstdint>
#include <vector>

namespace mdgs {

struct WeightedEdge {
  std::int32_t u = 0;
  std::int32_t v = 0;
  double weight = 0.0;
};

// Maximum-weight matching on a general graph (Edmonds' blossom method in
// the primal-dual form described by Galil; ported from the van Rantwijk
// implementation). Vertices may stay single: the result maximizes the total
// weight of matched edges, not the cardinality. Returns mate[v] = partner
// vertex or -1. Deterministic for a fixed edge order.
std::vector<std::int32_t> max_weight_matching(std::int32_t num_vertices,
                                              const std::vector<WeightedEdge>& edges);

}  // namespace mdgs

#endif
