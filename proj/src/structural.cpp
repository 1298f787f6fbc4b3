#include "mlsn/structural.hpp"

#include <algorithm>
#include <cmath>

namespace mlsn {

namespace {

void validate(const MultilayerGraph& g, NodeId i, NodeId j, const Scope& scope) {
  if (i == j) throw GraphError("pair features need two distinct nodes");
  if (i >= g.node_count() || j >= g.node_count()) throw GraphError("node id out of range");
  if (scope.kind != Scope::Kind::SingleLayer && g.layer_count() < 2) {
    throw GraphError("global and core scopes need at least two layers");
  }
  if (scope.kind == Scope::Kind::SingleLayer && scope.layer >= g.layer_count()) {
    throw GraphError("layer id out of range");
  }
}

// Merge walk over two sorted lists, calling f for every common element.
template <typename F>
void for_each_common(std::span<const NodeId> a, std::span<const NodeId> b, F&& f) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      f(*ia);
      ++ia;
      ++ib;
    }
  }
}

bool contains(std::span<const NodeId> a, NodeId x) {
  return std::binary_search(a.begin(), a.end(), x);
}

}  // namespace

std::size_t common_neighbour_count(const MultilayerGraph& g, NodeId i, NodeId j,
                                   const Scope& scope) {
  validate(g, i, j, scope);
  std::size_t n = 0;
  for_each_common(g.neighbours(scope, i), g.neighbours(scope, j), [&](NodeId) { ++n; });
  return n;
}

double jaccard(const MultilayerGraph& g, NodeId i, NodeId j, const Scope& scope) {
  validate(g, i, j, scope);
  auto ni = g.neighbours(scope, i);
  auto nj = g.neighbours(scope, j);
  std::size_t common = 0;
  for_each_common(ni, nj, [&](NodeId) { ++common; });
  std::size_t size_i = ni.size() - (contains(ni, j) ? 1 : 0);
  std::size_t size_j = nj.size() - (contains(nj, i) ? 1 : 0);
  const std::size_t uni = size_i + size_j - common;
  if (uni == 0) return 0.0;
  return static_cast<double>(common) / static_cast<double>(uni);
}

double adamic_adar(const MultilayerGraph& g, NodeId i, NodeId j, const Scope& scope) {
  validate(g, i, j, scope);
  double score = 0.0;
  for_each_common(g.neighbours(scope, i), g.neighbours(scope, j), [&](NodeId z) {
    const std::size_t k = g.neighbours(scope, z).size();
    if (k > 1) score += 1.0 / std::log(static_cast<double>(k));
  });
  return score;
}

}  // namespace mlsn
