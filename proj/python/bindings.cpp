#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlsn/cli.hpp"
#include "mlsn/evaluation.hpp"
#include "mlsn/io.hpp"
#include "mlsn/structural.hpp"

namespace py = pybind11;
using namespace mlsn;

namespace {

Scope parse_scope(const MultilayerGraph& g, const std::string& s) {
  if (s == "global") return Scope::global();
  if (s == "core") return Scope::core();
  return Scope::single(g.layer_id(s));
}

py::dict stats_dict(const DatasetStats& s) {
  py::dict d;
  d["nodes"] = s.node_count;
  d["union_edges"] = s.union_edge_count;
  d["multiplex_edges"] = s.multiplex_edge_count;
  d["exclusive_edges"] = s.exclusive_edge_counts;
  d["mean_global_degree"] = s.mean_global_degree;
  d["mean_core_degree"] = s.mean_core_degree;
  return d;
}

MultilayerGraph from_edges(const std::vector<std::string>& layers,
                           const std::vector<std::tuple<std::string, std::string, std::string>>& edges) {
  GraphBuilder b(layers);
  for (const auto& [layer, u, v] : edges) b.add_edge(b.layer_id(layer), u, v);
  return std::move(b).build();
}

std::vector<std::string> names_of(const MultilayerGraph& g, const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (auto i : ids) out.push_back(g.node_name(i));
  return out;
}

}  // namespace

PYBIND11_MODULE(_mlsn, m) {
  m.doc() = "Multilayer geo-social link prediction";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DataShapeError>(m, "DataShapeError", PyExc_RuntimeError);

  py::class_<MultilayerGraph>(m, "MultilayerGraph")
      .def_static("from_edges", &from_edges, py::arg("layers"), py::arg("edges"),
                  "Build from (layer, u, v) tuples.")
      .def_static(
          "read",
          [](const std::string& path, std::vector<std::string> layers, std::vector<std::string> reciprocal) {
            EdgeFileOptions opt;
            opt.layers = std::move(layers);
            opt.reciprocal = {reciprocal.begin(), reciprocal.end()};
            return read_edge_file(path, opt);
          },
          py::arg("path"), py::arg("layers") = std::vector<std::string>{"twitter", "foursquare"},
          py::arg("reciprocal") = std::vector<std::string>{})
      .def_property_readonly("node_count", &MultilayerGraph::node_count)
      .def_property_readonly("layers", &MultilayerGraph::layer_names)
      .def("edge_count", [](const MultilayerGraph& g, const std::string& l) { return g.edge_count(g.layer_id(l)); })
      .def("global_neighbourhood",
           [](const MultilayerGraph& g, const std::string& i) { return names_of(g, global_neighbourhood(g, i)); })
      .def("core_neighbourhood",
           [](const MultilayerGraph& g, const std::string& i) { return names_of(g, core_neighbourhood(g, i)); })
      .def("multiplex_overlap_ratio",
           [](const MultilayerGraph& g, const std::string& i) { return multiplex_overlap_ratio(g, g.node_id(i)); })
      .def(
          "jaccard",
          [](const MultilayerGraph& g, const std::string& i, const std::string& j, const std::string& scope) {
            return jaccard(g, g.node_id(i), g.node_id(j), parse_scope(g, scope));
          },
          py::arg("i"), py::arg("j"), py::arg("scope") = "global")
      .def(
          "adamic_adar",
          [](const MultilayerGraph& g, const std::string& i, const std::string& j, const std::string& scope) {
            return adamic_adar(g, g.node_id(i), g.node_id(j), parse_scope(g, scope));
          },
          py::arg("i"), py::arg("j"), py::arg("scope") = "global",
          "scope is 'global', 'core' or a layer name.")
      .def("stats", [](const MultilayerGraph& g) { return stats_dict(dataset_stats(g)); });

  m.def(
      "haversine_km", [](double lat1, double lon1, double lat2, double lon2) {
        return haversine_km({lat1, lon1}, {lat2, lon2});
      },
      py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"));

  m.def(
      "roc_auc",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        const auto roc = roc_auc(scores, labels);
        std::vector<std::tuple<double, double, double>> pts;
        for (const auto& p : roc.points) pts.emplace_back(p.threshold, p.fpr, p.tpr);
        return py::make_tuple(roc.auc, pts);
      },
      py::arg("scores"), py::arg("labels"), "Returns (auc, [(threshold, fpr, tpr), ...]).");

  m.def(
      "cross_validate",
      [](const std::vector<std::vector<double>>& x, const std::vector<int>& y, std::size_t trees,
         std::size_t depth, std::size_t folds, std::uint64_t seed) {
        if (x.size() != y.size()) throw InputError("x and y differ in length");
        Samples s(x.empty() ? 0 : x.front().size());
        for (std::size_t k = 0; k < x.size(); ++k) s.add(x[k], y[k]);
        ForestConfig cfg;
        cfg.n_trees = trees;
        cfg.max_depth = depth;
        cfg.seed = seed;
        CvReport cv;
        {
          py::gil_scoped_release release;
          cv = cross_validate(s, cfg, folds, seed);
        }
        py::dict d;
        d["fold_auc"] = cv.fold_auc;
        d["mean_auc"] = cv.mean_auc;
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("trees") = 45, py::arg("depth") = 25, py::arg("folds") = 10,
      py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "mlsn");
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run one mlsn subcommand; returns (exit_code, stdout, stderr).");
}
