#pragma once

#include "mlsn/graph.hpp"

namespace mlsn {

// Neighbourhood overlap of i and j in the given scope. Each node is removed
// from the other's neighbourhood first, so an existing i-j link does not
// inflate the union. Zero when both neighbourhoods are empty.
double jaccard(const MultilayerGraph& g, NodeId i, NodeId j, const Scope& scope);

// Sum over common neighbours z of 1/ln|N(z)|, with N taken in the same scope.
// Common neighbours with |N(z)| <= 1 contribute nothing.
double adamic_adar(const MultilayerGraph& g, NodeId i, NodeId j, const Scope& scope);

std::size_t common_neighbour_count(const MultilayerGraph& g, NodeId i, NodeId j,
                                   const Scope& scope);

}  // namespace mlsn
