#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mlsn/errors.hpp"

namespace mlsn {

using NodeId = std::uint32_t;
using LayerId = std::uint32_t;

// Undirected edge with a < b.
struct Edge {
  NodeId a = 0;
  NodeId b = 0;

  Edge() = default;
  Edge(NodeId u, NodeId v) : a(u < v ? u : v), b(u < v ? v : u) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphError : public InputError {
 public:
  using InputError::InputError;
};

// Raised by build_graph for a malformed input record; index is the position
// of the record in the edge list.
class RecordError : public GraphError {
 public:
  RecordError(std::size_t index, const std::string& what)
      : GraphError(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct LayerEdgeRecord {
  LayerId layer = 0;
  std::string u;
  std::string v;
};

struct BuildReport {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

enum class EdgeSetKind { Union, Intersection, OnlyIn };

// Which neighbourhood a structural quantity is computed over.
struct Scope {
  enum class Kind { SingleLayer, Global, Core };
  Kind kind = Kind::Global;
  LayerId layer = 0;

  static Scope single(LayerId l) { return {Kind::SingleLayer, l}; }
  static Scope global() { return {Kind::Global, 0}; }
  static Scope core() { return {Kind::Core, 0}; }
};

// Multilayer graph over a shared node universe. Immutable once built: every
// layer stores sorted adjacency lists indexed by dense node id, and the
// global (union) and core (intersection) neighbourhoods are materialized
// alongside so scoped lookups are a span access.
class MultilayerGraph {
 public:
  std::size_t node_count() const { return names_.size(); }
  std::size_t layer_count() const { return layer_names_.size(); }

  const std::string& node_name(NodeId id) const { return names_.at(id); }
  const std::vector<std::string>& node_names() const { return names_; }
  const std::string& layer_name(LayerId l) const { return layer_names_.at(l); }
  const std::vector<std::string>& layer_names() const { return layer_names_; }

  // Throws GraphError for unknown names.
  NodeId node_id(std::string_view name) const;
  LayerId layer_id(std::string_view name) const;
  bool has_node(std::string_view name) const;

  std::span<const NodeId> neighbours(LayerId l, NodeId i) const;
  std::span<const NodeId> neighbours(const Scope& scope, NodeId i) const;
  std::span<const NodeId> global_neighbours(NodeId i) const;
  std::span<const NodeId> core_neighbours(NodeId i) const;

  std::size_t degree(LayerId l, NodeId i) const { return neighbours(l, i).size(); }
  std::size_t global_degree(NodeId i) const { return global_neighbours(i).size(); }
  std::size_t core_degree(NodeId i) const { return core_neighbours(i).size(); }

  bool has_edge(LayerId l, NodeId i, NodeId j) const;
  // Number of layers on which i and j are linked.
  std::size_t multiplicity(NodeId i, NodeId j) const;

  // Sorted edge list of one layer.
  const std::vector<Edge>& edges(LayerId l) const { return edges_.at(l); }
  std::size_t edge_count(LayerId l) const { return edges(l).size(); }

  const BuildReport& report() const { return report_; }

 private:
  friend class GraphBuilder;

  void check_node(NodeId i) const;
  void check_layer(LayerId l) const;

  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::string> layer_names_;
  std::vector<std::vector<Edge>> edges_;
  // adjacency_[l][i], then global_ and core_ indexed by node.
  std::vector<std::vector<std::vector<NodeId>>> adjacency_;
  std::vector<std::vector<NodeId>> global_;
  std::vector<std::vector<NodeId>> core_;
  BuildReport report_;
};

// Incremental construction. Node ids are assigned in first-seen order, so the
// mapping is stable for a given input ordering.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::vector<std::string> layer_names);

  NodeId add_node(std::string_view name);
  // Self-loops are counted and dropped (returns false); duplicates are
  // dropped and counted by build().
  bool add_edge(LayerId layer, NodeId u, NodeId v);
  bool add_edge(LayerId layer, std::string_view u, std::string_view v);

  std::size_t node_count() const { return graph_.names_.size(); }
  LayerId layer_id(std::string_view name) const;

  MultilayerGraph build() &&;

 private:
  MultilayerGraph graph_;
  std::vector<std::vector<Edge>> pending_;
};

MultilayerGraph build_graph(const std::vector<std::string>& layer_names,
                            const std::vector<std::string>& nodes,
                            const std::vector<LayerEdgeRecord>& edges);

// {i,j} for every pair that appears in both directions. Sorted, canonical.
std::vector<std::pair<std::string, std::string>> reciprocal_reduce(
    const std::vector<std::pair<std::string, std::string>>& directed);

// Union, intersection or alpha-minus-beta edge set of two layers.
std::vector<Edge> edge_set(const MultilayerGraph& g, EdgeSetKind kind,
                           LayerId alpha, LayerId beta);

std::vector<NodeId> global_neighbourhood(const MultilayerGraph& g, std::string_view i);
std::vector<NodeId> core_neighbourhood(const MultilayerGraph& g, std::string_view i);

// Core degree over global degree; 0 for a node with no neighbours.
double multiplex_overlap_ratio(const MultilayerGraph& g, NodeId i);

struct DatasetStats {
  std::size_t node_count = 0;
  std::size_t union_edge_count = 0;
  std::size_t multiplex_edge_count = 0;
  // Edges present on exactly that layer. Filled for two-layer graphs only.
  std::vector<std::size_t> exclusive_edge_counts;
  // Edges per node, not 2E/V.
  double mean_global_degree = 0.0;
  double mean_core_degree = 0.0;
};

DatasetStats dataset_stats(const MultilayerGraph& g);

}  // namespace mlsn
