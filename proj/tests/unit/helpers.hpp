#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mlsn/graph.hpp"

namespace testing {

// Plain edge sets per layer, kept next to the library graph so tests can
// recompute everything from scratch.
struct RawGraph {
  std::size_t n = 0;
  std::vector<std::set<std::pair<std::uint32_t, std::uint32_t>>> layers;

  bool linked(std::size_t l, std::uint32_t a, std::uint32_t b) const {
    if (a > b) std::swap(a, b);
    return layers[l].count({a, b}) > 0;
  }
  std::set<std::uint32_t> nbrs(std::size_t l, std::uint32_t i) const {
    std::set<std::uint32_t> out;
    for (auto [a, b] : layers[l]) {
      if (a == i) out.insert(b);
      if (b == i) out.insert(a);
    }
    return out;
  }
};

inline std::string node(std::size_t k) { return "n" + std::to_string(k); }

inline RawGraph random_raw(std::mt19937_64& rng, std::size_t n, std::size_t layers, double p) {
  RawGraph r;
  r.n = n;
  r.layers.resize(layers);
  std::bernoulli_distribution coin(p);
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) {
        if (coin(rng)) r.layers[l].insert({a, b});
      }
    }
  }
  return r;
}

// Node k of the raw graph becomes dense id k.
inline mlsn::MultilayerGraph to_graph(const RawGraph& r) {
  std::vector<std::string> layer_names;
  for (std::size_t l = 0; l < r.layers.size(); ++l) layer_names.push_back("L" + std::to_string(l));
  std::vector<std::string> nodes;
  for (std::size_t k = 0; k < r.n; ++k) nodes.push_back(node(k));
  std::vector<mlsn::LayerEdgeRecord> edges;
  for (std::size_t l = 0; l < r.layers.size(); ++l) {
    for (auto [a, b] : r.layers[l]) {
      edges.push_back({static_cast<mlsn::LayerId>(l), node(a), node(b)});
    }
  }
  return mlsn::build_graph(layer_names, nodes, edges);
}

}  // namespace testing
