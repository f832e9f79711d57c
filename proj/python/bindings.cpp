// Copyright 2026 The StableGNN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "stable/attack.hpp"
#include "stable/errors.hpp"
#include "stable/graph.hpp"
#include "stable/io.hpp"
#include "stable/pipeline.hpp"
#include "stable/preprocess.hpp"
#include "stable/report.hpp"

namespace py = pybind11;
using namespace stable;

namespace {

using Pairs = std::vector<std::pair<NodeId, NodeId>>;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Pairs to_pairs(const EdgeSet& edges) {
  Pairs out;
  out.reserve(edges.size());
  for (auto e : edges) out.emplace_back(e.u, e.v);
  return out;
}

EdgeSet to_edge_set(const Pairs& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.push_back({u, v});
  return EdgeSet(std::move(edges));
}

Array to_array(const DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw InputError("expected a 2-d array, got " + std::to_string(a.ndim()) + " dimensions");
  return DenseMatrix(a.shape(0), a.shape(1), std::vector<double>(a.data(), a.data() + a.size()));
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw InputError("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

nlohmann::json to_json_doc(const py::object& obj) {
  if (obj.is_none()) return nlohmann::json::object();
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::object from_json_doc(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

PipelineConfig config_of(const py::object& obj) { return PipelineConfig::from_json(to_json_doc(obj)); }

GraphBundle make_bundle(std::size_t num_nodes, const Pairs& edges, const Array& features, const std::vector<int>& labels,
                        const std::vector<NodeId>& train, const std::vector<NodeId>& val,
                        const std::vector<NodeId>& test) {
  GraphBundle b;
  b.features = to_matrix(features);
  if (b.features.rows() != num_nodes) throw InputError("features have " + std::to_string(b.features.rows()) +
                                                       " rows for " + std::to_string(num_nodes) + " nodes");
  if (labels.size() != num_nodes) throw InputError("labels have " + std::to_string(labels.size()) + " entries for " +
                                                   std::to_string(num_nodes) + " nodes");
  b.graph = SparseGraph::undirected(num_nodes, to_edge_set(edges));
  b.labels = make_labels(labels);
  b.split = DataSplit{train, val, test};
  b.split.validate(num_nodes);
  return b;
}

GraphBundle with_edges(const GraphBundle& b, const Pairs& edges) {
  GraphBundle out = b;
  out.graph = SparseGraph::undirected(b.num_nodes(), to_edge_set(edges));
  return out;
}

std::optional<SparseGraph> clean_graph(std::size_t num_nodes, const std::optional<Pairs>& clean) {
  if (!clean) return std::nullopt;
  return SparseGraph::undirected(num_nodes, to_edge_set(*clean));
}

py::dict attack_dict(const AttackResult& r) {
  py::dict d;
  d["edges"] = to_pairs(r.graph.edge_set());
  d["added"] = to_pairs(r.record.added);
  d["removed"] = to_pairs(r.record.removed);
  d["complete"] = r.complete;
  d["warning"] = r.warning;
  return d;
}

}  // namespace

PYBIND11_MODULE(_stable, m) {
  m.doc() = "Robust node classification via contrastive structure refinement";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<GraphBundle>(m, "GraphBundle")
      .def(py::init(&make_bundle), py::arg("num_nodes"), py::arg("edges"), py::arg("features"), py::arg("labels"),
           py::arg("train"), py::arg("val"), py::arg("test"))
      .def_property_readonly("num_nodes", &GraphBundle::num_nodes)
      .def_property_readonly("num_edges", [](const GraphBundle& b) { return b.graph.num_edges(); })
      .def_property_readonly("edges", [](const GraphBundle& b) { return to_pairs(b.graph.edge_set()); })
      .def_property_readonly("features", [](const GraphBundle& b) { return to_array(b.features); })
      .def_property_readonly("labels", [](const GraphBundle& b) { return b.labels.labels; })
      .def_property_readonly("num_classes", [](const GraphBundle& b) { return b.labels.num_classes; })
      .def_property_readonly("train", [](const GraphBundle& b) { return b.split.train; })
      .def_property_readonly("val", [](const GraphBundle& b) { return b.split.val; })
      .def_property_readonly("test", [](const GraphBundle& b) { return b.split.test; })
      .def("with_edges", &with_edges, py::arg("edges"))
      .def("save", [](const GraphBundle& b, const std::filesystem::path& dir) { save_graph_bundle(b, dir); })
      .def_static("load", &load_graph_bundle, py::arg("directory"))
      .def("__eq__", [](const GraphBundle& a, const GraphBundle& b) { return a == b; })
      .def("__repr__", [](const GraphBundle& b) {
        return "<GraphBundle nodes=" + std::to_string(b.num_nodes()) + " edges=" + std::to_string(b.graph.num_edges()) +
               " dim=" + std::to_string(b.features.cols()) + ">";
      });

  m.def(
      "generate_sbm",
      [](std::size_t num_nodes, int num_classes, double p_in, double p_out, std::size_t feature_dim,
         std::size_t on_bits, double flip_noise, std::uint64_t seed) {
        SbmSpec spec;
        spec.num_nodes = num_nodes;
        spec.num_classes = num_classes;
        spec.p_in = p_in;
        spec.p_out = p_out;
        spec.feature_dim = feature_dim;
        spec.on_bits = on_bits;
        spec.flip_noise = flip_noise;
        spec.seed = seed;
        return generate_sbm(spec);
      },
      py::arg("num_nodes") = 300, py::arg("num_classes") = 3, py::arg("p_in") = 0.1, py::arg("p_out") = 0.005,
      py::arg("feature_dim") = 100, py::arg("on_bits") = 10, py::arg("flip_noise") = 0.01, py::arg("seed") = 0);

  m.def(
      "dice_attack",
      [](const GraphBundle& b, double rate, std::uint64_t seed, double add_probability) {
        return attack_dict(dice_attack(b.graph, b.labels, AttackBudget{rate, seed}, add_probability));
      },
      py::arg("bundle"), py::arg("rate"), py::arg("seed") = 0, py::arg("add_probability") = 0.5);

  m.def(
      "random_attack",
      [](const GraphBundle& b, double rate, std::uint64_t seed, double add_probability) {
        return attack_dict(random_attack(b.graph, AttackBudget{rate, seed}, add_probability));
      },
      py::arg("bundle"), py::arg("rate"), py::arg("seed") = 0, py::arg("add_probability") = 0.5);

  m.def(
      "feature_similarity",
      [](const Array& a, const Array& b, const std::string& metric) {
        auto x = to_vector(a);
        auto y = to_vector(b);
        if (x.size() != y.size()) throw InputError("feature vectors differ in length");
        return feature_similarity(x, y, parse_metric(metric));
      },
      py::arg("a"), py::arg("b"), py::arg("metric") = "jaccard");

  m.def(
      "renormalized_adjacency",
      [](std::size_t num_nodes, const Pairs& edges) {
        auto a = renormalized_adjacency(SparseGraph::undirected(num_nodes, to_edge_set(edges)));
        Array out({num_nodes, num_nodes});
        std::fill(out.mutable_data(), out.mutable_data() + out.size(), 0.0);
        auto view = out.mutable_unchecked<2>();
        for (std::size_t r = 0; r < a.rows(); ++r) {
          auto cols = a.row_cols(r);
          auto vals = a.row_values(r);
          for (std::size_t i = 0; i < cols.size(); ++i) view(r, cols[i]) = vals[i];
        }
        return out;
      },
      py::arg("num_nodes"), py::arg("edges"));

  m.def(
      "rough_preprocess",
      [](const GraphBundle& b, const std::string& metric, double t1) {
        auto r = rough_preprocess(b.graph, b.features, parse_metric(metric), t1);
        py::dict d;
        d["edges"] = to_pairs(r.graph.edge_set());
        d["removed"] = to_pairs(r.removed);
        return d;
      },
      py::arg("bundle"), py::arg("metric") = "jaccard", py::arg("t1") = 0.03);

  m.def("default_config", [] { return from_json_doc(PipelineConfig{}.to_json()); });
  m.def("variants", [] {
    std::vector<std::string> names;
    for (auto v : all_variants()) names.push_back(to_string(v));
    return names;
  });

  m.def(
      "run_pipeline",
      [](const GraphBundle& b, const py::object& config, std::uint64_t seed, const std::string& variant,
         const std::optional<Pairs>& clean) {
        auto cfg = config_of(config);
        auto clean_g = clean_graph(b.num_nodes(), clean);
        SeedRun run;
        {
          py::gil_scoped_release release;
          run = run_variant(b, cfg, parse_variant(variant), seed, clean_g ? &*clean_g : nullptr);
        }
        RunResult r;
        r.runs = {run};
        return from_json_doc(to_json(r).at("runs").at(0));
      },
      py::arg("bundle"), py::arg("config") = py::none(), py::arg("seed") = 0, py::arg("variant") = "STABLE",
      py::arg("clean_edges") = py::none());

  m.def(
      "run_experiment",
      [](const GraphBundle& b, const py::object& config, const std::vector<std::uint64_t>& seeds,
         const std::string& variant, const std::optional<Pairs>& clean, bool timing) {
        auto cfg = config_of(config);
        auto clean_g = clean_graph(b.num_nodes(), clean);
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(b, cfg, parse_variant(variant), seeds, clean_g ? &*clean_g : nullptr);
        }
        return from_json_doc(to_json(r, timing));
      },
      py::arg("bundle"), py::arg("config") = py::none(), py::arg("seeds") = std::vector<std::uint64_t>{0},
      py::arg("variant") = "STABLE", py::arg("clean_edges") = py::none(), py::arg("timing") = false);
}
