#include "mlsn/graph.hpp"

#include <algorithm>
#include <iterator>
#include <set>

namespace mlsn {

NodeId MultilayerGraph::node_id(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw GraphError("unknown node '" + std::string(name) + "'");
  }
  return it->second;
}

bool MultilayerGraph::has_node(std::string_view name) const {
  return index_.count(std::string(name)) != 0;
}

LayerId MultilayerGraph::layer_id(std::string_view name) const {
  for (LayerId l = 0; l < layer_names_.size(); ++l) {
    if (layer_names_[l] == name) return l;
  }
  throw GraphError("unknown layer '" + std::string(name) + "'");
}

void MultilayerGraph::check_node(NodeId i) const {
  if (i >= names_.size()) {
    throw GraphError("node id " + std::to_string(i) + " out of range");
  }
}

void MultilayerGraph::check_layer(LayerId l) const {
  if (l >= layer_names_.size()) {
    throw GraphError("layer id " + std::to_string(l) + " out of range");
  }
}

std::span<const NodeId> MultilayerGraph::neighbours(LayerId l, NodeId i) const {
  check_layer(l);
  check_node(i);
  return adjacency_[l][i];
}

std::span<const NodeId> MultilayerGraph::global_neighbours(NodeId i) const {
  check_node(i);
  return global_[i];
}

std::span<const NodeId> MultilayerGraph::core_neighbours(NodeId i) const {
  check_node(i);
  return core_[i];
}

std::span<const NodeId> MultilayerGraph::neighbours(const Scope& scope, NodeId i) const {
  switch (scope.kind) {
    case Scope::Kind::SingleLayer:
      return neighbours(scope.layer, i);
    case Scope::Kind::Global:
      return global_neighbours(i);
    case Scope::Kind::Core:
      return core_neighbours(i);
  }
  throw GraphError("bad scope");
}

bool MultilayerGraph::has_edge(LayerId l, NodeId i, NodeId j) const {
  auto adj = neighbours(l, i);
  check_node(j);
  return std::binary_search(adj.begin(), adj.end(), j);
}

std::size_t MultilayerGraph::multiplicity(NodeId i, NodeId j) const {
  std::size_t n = 0;
  for (LayerId l = 0; l < layer_count(); ++l) n += has_edge(l, i, j) ? 1 : 0;
  return n;
}

GraphBuilder::GraphBuilder(std::vector<std::string> layer_names) {
  std::set<std::string> seen;
  for (const auto& name : layer_names) {
    if (name.empty()) throw GraphError("empty layer name");
    if (!seen.insert(name).second) throw GraphError("duplicate layer name '" + name + "'");
  }
  graph_.layer_names_ = std::move(layer_names);
  pending_.resize(graph_.layer_names_.size());
}

LayerId GraphBuilder::layer_id(std::string_view name) const {
  return graph_.layer_id(name);
}

NodeId GraphBuilder::add_node(std::string_view name) {
  if (name.empty()) throw GraphError("empty node id");
  auto [it, inserted] =
      graph_.index_.try_emplace(std::string(name), static_cast<NodeId>(graph_.names_.size()));
  if (inserted) graph_.names_.emplace_back(name);
  return it->second;
}

bool GraphBuilder::add_edge(LayerId layer, NodeId u, NodeId v) {
  graph_.check_layer(layer);
  graph_.check_node(u);
  graph_.check_node(v);
  if (u == v) {
    ++graph_.report_.self_loops;
    return false;
  }
  pending_[layer].emplace_back(u, v);
  return true;
}

bool GraphBuilder::add_edge(LayerId layer, std::string_view u, std::string_view v) {
  graph_.check_layer(layer);
  const NodeId a = add_node(u);
  const NodeId b = add_node(v);
  return add_edge(layer, a, b);
}

namespace {

std::vector<NodeId> sorted_union(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::vector<NodeId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<NodeId> sorted_intersection(const std::vector<NodeId>& a,
                                        const std::vector<NodeId>& b) {
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

MultilayerGraph GraphBuilder::build() && {
  auto& g = graph_;
  const std::size_t n = g.names_.size();
  const std::size_t m = g.layer_names_.size();
  g.edges_.assign(m, {});
  g.adjacency_.assign(m, std::vector<std::vector<NodeId>>(n));
  for (std::size_t l = 0; l < m; ++l) {
    auto& edges = pending_[l];
    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    g.report_.duplicates += static_cast<std::size_t>(std::distance(last, edges.end()));
    edges.erase(last, edges.end());
    for (const Edge& e : edges) {
      g.adjacency_[l][e.a].push_back(e.b);
      g.adjacency_[l][e.b].push_back(e.a);
    }
    for (auto& adj : g.adjacency_[l]) std::sort(adj.begin(), adj.end());
    g.edges_[l] = std::move(edges);
  }
  g.global_.assign(n, {});
  g.core_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    if (m == 0) continue;
    std::vector<NodeId> uni = g.adjacency_[0][i];
    std::vector<NodeId> core = g.adjacency_[0][i];
    for (std::size_t l = 1; l < m; ++l) {
      uni = sorted_union(uni, g.adjacency_[l][i]);
      core = sorted_intersection(core, g.adjacency_[l][i]);
    }
    g.global_[i] = std::move(uni);
    g.core_[i] = std::move(core);
  }
  pending_.clear();
  return std::move(g);
}

MultilayerGraph build_graph(const std::vector<std::string>& layer_names,
                            const std::vector<std::string>& nodes,
                            const std::vector<LayerEdgeRecord>& edges) {
  GraphBuilder builder(layer_names);
  for (const auto& name : nodes) builder.add_node(name);
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const auto& rec = edges[r];
    if (rec.layer >= layer_names.size()) {
      throw RecordError(r, "record " + std::to_string(r) + ": unknown layer id " +
                               std::to_string(rec.layer));
    }
    if (rec.u.empty() || rec.v.empty()) {
      throw RecordError(r, "record " + std::to_string(r) + ": empty node id");
    }
    builder.add_edge(rec.layer, rec.u, rec.v);
  }
  return std::move(builder).build();
}

std::vector<std::pair<std::string, std::string>> reciprocal_reduce(
    const std::vector<std::pair<std::string, std::string>>& directed) {
  std::set<std::pair<std::string_view, std::string_view>> arcs;
  for (const auto& [u, v] : directed) {
    if (u != v) arcs.emplace(u, v);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [u, v] : arcs) {
    if (u < v && arcs.count({v, u})) out.emplace_back(std::string(u), std::string(v));
  }
  return out;
}

std::vector<Edge> edge_set(const MultilayerGraph& g, EdgeSetKind kind, LayerId alpha,
                           LayerId beta) {
  if (alpha >= g.layer_count() || beta >= g.layer_count()) {
    throw GraphError("layer id out of range");
  }
  if (alpha == beta) throw GraphError("edge_set needs two distinct layers");
  const auto& ea = g.edges(alpha);
  const auto& eb = g.edges(beta);
  std::vector<Edge> out;
  switch (kind) {
    case EdgeSetKind::Union:
      std::set_union(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(out));
      break;
    case EdgeSetKind::Intersection:
      std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(),
                            std::back_inserter(out));
      break;
    case EdgeSetKind::OnlyIn:
      std::set_difference(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(out));
      break;
  }
  return out;
}

std::vector<NodeId> global_neighbourhood(const MultilayerGraph& g, std::string_view i) {
  auto span = g.global_neighbours(g.node_id(i));
  return {span.begin(), span.end()};
}

std::vector<NodeId> core_neighbourhood(const MultilayerGraph& g, std::string_view i) {
  auto span = g.core_neighbours(g.node_id(i));
  return {span.begin(), span.end()};
}

double multiplex_overlap_ratio(const MultilayerGraph& g, NodeId i) {
  const std::size_t k_gn = g.global_degree(i);
  if (k_gn == 0) return 0.0;
  return static_cast<double>(g.core_degree(i)) / static_cast<double>(k_gn);
}

DatasetStats dataset_stats(const MultilayerGraph& g) {
  DatasetStats s;
  s.node_count = g.node_count();
  const std::size_t m = g.layer_count();
  if (m == 0) return s;

  std::vector<Edge> uni = g.edges(0);
  std::vector<Edge> inter = g.edges(0);
  for (LayerId l = 1; l < m; ++l) {
    std::vector<Edge> u2, i2;
    std::set_union(uni.begin(), uni.end(), g.edges(l).begin(), g.edges(l).end(),
                   std::back_inserter(u2));
    std::set_intersection(inter.begin(), inter.end(), g.edges(l).begin(), g.edges(l).end(),
                          std::back_inserter(i2));
    uni = std::move(u2);
    inter = std::move(i2);
  }
  s.union_edge_count = uni.size();
  s.multiplex_edge_count = inter.size();
  if (m == 2) {
    s.exclusive_edge_counts = {edge_set(g, EdgeSetKind::OnlyIn, 0, 1).size(),
                               edge_set(g, EdgeSetKind::OnlyIn, 1, 0).size()};
  }
  if (s.node_count > 0) {
    const double n = static_cast<double>(s.node_count);
    s.mean_global_degree = static_cast<double>(s.union_edge_count) / n;
    s.mean_core_degree = static_cast<double>(s.multiplex_edge_count) / n;
  }
  return s;
}

}  // namespace mlsn
