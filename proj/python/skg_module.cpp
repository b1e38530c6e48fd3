// Python bindings for the core library.

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "skg/errors.hpp"
#include "skg/experiment_harness.hpp"
#include "skg/graph_data.hpp"
#include "skg/rff_features.hpp"
#include "skg/skg_model.hpp"
#include "skg/variance_select.hpp"
#include "skg/weight_analysis.hpp"

namespace py = pybind11;
using namespace skg;

namespace {

// Contribution weights of every earlier step toward the node visited last
// in `order`, with `vectors[order[t]]` the input at step t.
WeightTrace weights_for_order(const RandomFeatureBank& bank,
                              const std::vector<AdjacencyVector>& vectors,
                              const std::vector<std::size_t>& order, double eta) {
  if (order.empty()) fail(ErrorKind::Argument, "order is empty");
  std::vector<FeatureVector> z;
  z.reserve(vectors.size());
  for (const auto& a : vectors) z.push_back(bank.map(a));
  return contribution_weights(build_similarity(z, order, eta), order.size() - 1);
}

template <typename F>
std::string to_text(F&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_skg, m) {
  m.doc() = "Random-feature kernel regression on graphs with kernel variance selection";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      auto cls = py::module_::import("skg").attr("SkgError");
      auto err = cls(to_string(e.kind()), e.what());
      PyErr_SetObject(cls.ptr(), err.ptr());
    }
  });

  py::class_<Graph>(m, "Graph")
      .def(py::init<bool>(), py::arg("directed") = false)
      .def("add_node", &Graph::add_node)
      .def("add_edge", &Graph::add_edge, py::arg("source"), py::arg("target"),
           py::arg("weight") = 1.0)
      .def_property_readonly("directed", &Graph::directed)
      .def_property_readonly("nodes", &Graph::nodes)
      .def("node_count", &Graph::node_count)
      .def("weight", [](const Graph& g, const NodeId& a, const NodeId& b) {
        return g.weight(g.index_of(a), g.index_of(b));
      })
      .def("degree", [](const Graph& g, const NodeId& id) { return g.degree(g.index_of(id)); });

  py::class_<NodeValues>(m, "NodeValues")
      .def(py::init<>())
      .def(py::init([](const std::vector<std::pair<NodeId, double>>& items) {
        NodeValues v;
        for (const auto& [id, value] : items) v.add(id, value);
        return v;
      }))
      .def("add", &NodeValues::add)
      .def("__len__", &NodeValues::size)
      .def("__contains__", &NodeValues::contains)
      .def("__getitem__", &NodeValues::at)
      .def_property_readonly("ids", &NodeValues::ids)
      .def_property_readonly("values", &NodeValues::values);

  m.def("load_graph", &load_graph, py::arg("path"), py::arg("weighted") = false,
        py::arg("directed") = false);
  m.def("parse_graph", &parse_graph, py::arg("text"), py::arg("weighted") = false,
        py::arg("directed") = false);
  m.def("load_node_values", &load_node_values);
  m.def("parse_node_values", &parse_node_values);
  m.def("build_adjacency_vectors",
        [](const Graph& g, const std::vector<NodeId>& sampled,
           const std::vector<NodeId>& referencing) {
          return build_adjacency_vectors(g, sampled, referencing);
        });

  py::class_<PairwiseStats>(m, "PairwiseStats")
      .def_readonly("d_sq_max", &PairwiseStats::d_sq_max)
      .def_readonly("d_sq_min_nonzero", &PairwiseStats::d_sq_min_nonzero)
      .def_readonly("d_l1_max", &PairwiseStats::d_l1_max)
      .def_readonly("pair_count", &PairwiseStats::pair_count)
      .def_readonly("histogram", &PairwiseStats::histogram);
  m.def("pairwise_stats",
        [](const std::vector<AdjacencyVector>& v) { return pairwise_stats(v); });

  m.def("normalize_values",
        [](const std::vector<double>& train, const std::vector<double>& other,
           const std::string& policy) {
          const auto n = normalize_values(train, other, parse_normalization_policy(policy));
          return py::make_tuple(n.scale, n.train, n.other);
        },
        py::arg("train"), py::arg("other") = std::vector<double>{},
        py::arg("policy") = "max-abs");

  m.def("split_sample",
        [](const std::vector<NodeId>& ids, double fraction, std::uint64_t seed) {
          const auto s = split_sample(ids, fraction, seed);
          return py::make_tuple(s.sampled, s.tested);
        },
        py::arg("node_ids"), py::arg("fraction"), py::arg("seed"));

  py::class_<RandomFeatureBank>(m, "RandomFeatureBank")
      .def_static("sample", &RandomFeatureBank::sample, py::arg("sigma_sq"),
                  py::arg("features"), py::arg("dimension"), py::arg("seed"))
      .def_property_readonly("sigma_sq", &RandomFeatureBank::sigma_sq)
      .def_property_readonly("features", &RandomFeatureBank::features)
      .def_property_readonly("dimension", &RandomFeatureBank::dimension)
      .def_property_readonly("seed", &RandomFeatureBank::seed)
      .def_property_readonly("frequencies",
                             [](const RandomFeatureBank& b) {
                               return std::vector<double>(b.frequencies().begin(),
                                                          b.frequencies().end());
                             })
      .def("map", [](const RandomFeatureBank& b, const std::vector<double>& a) {
        return b.map(a);
      })
      .def("to_json", &bank_to_json)
      .def_static("from_json", &bank_from_json)
      .def(py::self == py::self);
  m.def("kernel_exact", [](const std::vector<double>& a, const std::vector<double>& b,
                           double sigma_sq) { return kernel_exact(a, b, sigma_sq); });

  py::class_<TrainingTrace>(m, "TrainingTrace")
      .def_readonly("epochs", &TrainingTrace::epochs)
      .def_readonly("order", &TrainingTrace::order)
      .def_readonly("predictions", &TrainingTrace::predictions)
      .def_readonly("errors", &TrainingTrace::errors);

  py::class_<SkgModel>(m, "SkgModel")
      .def(py::init([](const RandomFeatureBank& bank, double eta) {
             return SkgModel(std::make_shared<const RandomFeatureBank>(bank), eta);
           }),
           py::arg("bank"), py::arg("eta"))
      .def_property_readonly("eta", &SkgModel::eta)
      .def_property_readonly("theta",
                             [](const SkgModel& s) {
                               return std::vector<double>(s.theta().begin(), s.theta().end());
                             })
      .def("predict", [](const SkgModel& s, const std::vector<double>& a) { return s.predict(a); })
      .def("step",
           [](SkgModel& s, const std::vector<double>& a, double y) {
             const auto r = s.step(a, y);
             return py::make_tuple(r.prediction, r.error);
           })
      .def("train",
           [](SkgModel& s, const std::vector<AdjacencyVector>& vectors,
              const std::vector<double>& values, std::size_t epochs, std::uint64_t seed) {
             if (vectors.size() != values.size()) {
               fail(ErrorKind::Argument, "vectors and values differ in length");
             }
             TrainingSet set;
             set.vectors = vectors;
             set.values = values;
             for (std::size_t i = 0; i < vectors.size(); ++i) set.ids.push_back(std::to_string(i));
             if (!vectors.empty()) set.referencing.resize(vectors.front().size());
             return train(s, set, epochs, seed);
           },
           py::arg("vectors"), py::arg("values"), py::arg("epochs"), py::arg("seed"));

  py::enum_<AlphaFlag>(m, "AlphaFlag")
      .value("Ok", AlphaFlag::Ok)
      .value("Adjacent", AlphaFlag::Adjacent)
      .value("Domain", AlphaFlag::Domain);
  py::class_<WeightTrace>(m, "WeightTrace")
      .def_readonly("target", &WeightTrace::target)
      .def_readonly("weights", &WeightTrace::weights)
      .def_readonly("similarities", &WeightTrace::similarities)
      .def_readonly("alpha", &WeightTrace::alpha)
      .def_readonly("alpha_flags", &WeightTrace::alpha_flags)
      .def_readonly("noise_up", &WeightTrace::noise_up)
      .def("weight_sum", &WeightTrace::weight_sum);
  m.def("contribution_weights", &weights_for_order, py::arg("bank"), py::arg("vectors"),
        py::arg("order"), py::arg("eta"));
  m.def("similarity", [](const RandomFeatureBank& bank, const std::vector<double>& a,
                         const std::vector<double>& b, double eta) {
    return similarity(bank, a, b, eta);
  });
  m.def("similarity_approx", &similarity_approx);
  m.def("similarity_conditional_variance", &similarity_conditional_variance);
  m.def("expected_weight_sum", &expected_weight_sum);
  m.def("conformity_alpha", &conformity_alpha);
  m.def("noise_up_theoretical", &noise_up_theoretical);

  m.def("sigma_ed", &sigma_ed, py::arg("d_sq_max"), py::arg("noise_up"), py::arg("eta"));
  m.def("sigma_ce", &sigma_ce, py::arg("d_sq_min_nonzero"), py::arg("noise_up"),
        py::arg("eta"));
  m.def("sigma_da", &sigma_da, py::arg("d_sq_max"), py::arg("closeness"),
        py::arg("first_order") = false);
  m.def("laplacian_diversity", &laplacian_diversity);

  py::class_<SelectOptions>(m, "SelectOptions")
      .def(py::init<>())
      .def_readwrite("eta", &SelectOptions::eta)
      .def_readwrite("features", &SelectOptions::features)
      .def_readwrite("closeness", &SelectOptions::closeness)
      .def_readwrite("first_order_da", &SelectOptions::first_order_da)
      .def_readwrite("refine", &SelectOptions::refine)
      .def_readwrite("epochs", &SelectOptions::epochs)
      .def_readwrite("seed", &SelectOptions::seed);
  py::class_<SelectionReport>(m, "SelectionReport")
      .def_readonly("sample_count", &SelectionReport::sample_count)
      .def_readonly("pair_count", &SelectionReport::pair_count)
      .def_readonly("d_sq_max", &SelectionReport::d_sq_max)
      .def_readonly("d_sq_min_nonzero", &SelectionReport::d_sq_min_nonzero)
      .def_readonly("d_l1_max", &SelectionReport::d_l1_max)
      .def_readonly("noise_up_theoretical", &SelectionReport::noise_up_theoretical)
      .def_readonly("noise_up", &SelectionReport::noise_up)
      .def_property_readonly("noise_up_source",
                             [](const SelectionReport& r) { return to_string(r.noise_up_source); })
      .def_readonly("refine_note", &SelectionReport::refine_note)
      .def_readonly("sigma_sq_ed_initial", &SelectionReport::sigma_sq_ed_initial)
      .def_readonly("sigma_sq_ce", &SelectionReport::sigma_sq_ce)
      .def_readonly("sigma_sq_ed", &SelectionReport::sigma_sq_ed)
      .def_readonly("sigma_sq_da", &SelectionReport::sigma_sq_da)
      .def_readonly("laplacian_b", &SelectionReport::laplacian_b)
      .def("to_json", &report_to_json);
  m.def("select",
        [](const std::vector<AdjacencyVector>& vectors, const SelectOptions& options,
           const std::vector<double>& values, const std::vector<AdjacencyVector>& probes) {
          if (!options.refine) return select(vectors, options);
          if (values.size() != vectors.size()) {
            fail(ErrorKind::Argument, "refinement needs one value per vector");
          }
          TrainingSet set;
          set.vectors = vectors;
          set.values = values;
          set.ids.resize(vectors.size());
          if (!vectors.empty()) set.referencing.resize(vectors.front().size());
          return select(set, options, probes);
        },
        py::arg("vectors"), py::arg("options") = SelectOptions{},
        py::arg("values") = std::vector<double>{},
        py::arg("probes") = std::vector<AdjacencyVector>{});

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("graph", &Dataset::graph)
      .def_readonly("values", &Dataset::values)
      .def_readonly("nodes", &Dataset::nodes);
  m.def("make_dataset", &make_dataset, py::arg("graph"), py::arg("values"),
        py::arg("drop_isolated") = false);

  py::class_<PlantedSpec>(m, "PlantedSpec")
      .def(py::init<>())
      .def_readwrite("nodes", &PlantedSpec::nodes)
      .def_readwrite("communities", &PlantedSpec::communities)
      .def_readwrite("p_in", &PlantedSpec::p_in)
      .def_readwrite("p_out", &PlantedSpec::p_out)
      .def_readwrite("value_noise", &PlantedSpec::value_noise)
      .def_readwrite("seed", &PlantedSpec::seed);
  m.def("make_planted_dataset", &make_planted_dataset, py::arg("spec") = PlantedSpec{});

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("eta", &ExperimentConfig::eta)
      .def_readwrite("features", &ExperimentConfig::features)
      .def_readwrite("epochs", &ExperimentConfig::epochs)
      .def_readwrite("sample_fraction", &ExperimentConfig::sample_fraction)
      .def_readwrite("fixed_split", &ExperimentConfig::fixed_split)
      .def_readwrite("split_seed", &ExperimentConfig::split_seed)
      .def_property(
          "referencing",
          [](const ExperimentConfig& c) {
            return c.referencing == ReferencingPolicy::AllNodes ? "all" : "sampled";
          },
          [](ExperimentConfig& c, const std::string& v) {
            if (v == "all") {
              c.referencing = ReferencingPolicy::AllNodes;
            } else if (v == "sampled") {
              c.referencing = ReferencingPolicy::Sampled;
            } else {
              fail(ErrorKind::Argument, "referencing must be 'sampled' or 'all'");
            }
          })
      .def_property(
          "normalization",
          [](const ExperimentConfig& c) { return to_string(c.normalization); },
          [](ExperimentConfig& c, const std::string& v) {
            c.normalization = parse_normalization_policy(v);
          });

  m.def("gnmse", [](const std::vector<double>& t, const std::vector<double>& p) {
    return gnmse(t, p);
  });
  m.def("run_once",
        [](const Dataset& d, const ExperimentConfig& c, double sigma_sq, std::uint64_t seed) {
          return run_once(d, c, sigma_sq, seed).gnmse;
        },
        py::arg("dataset"), py::arg("config"), py::arg("sigma_sq"), py::arg("seed"));

  py::class_<GnmseResult>(m, "GnmseResult")
      .def_readonly("sigma_sq", &GnmseResult::sigma_sq)
      .def_readonly("gnmse_mean", &GnmseResult::gnmse_mean)
      .def_readonly("gnmse_std", &GnmseResult::gnmse_std)
      .def_readonly("repeats", &GnmseResult::repeats)
      .def_readonly("seeds", &GnmseResult::seeds)
      .def_readonly("is_theoretical_ed", &GnmseResult::is_theoretical_ed);
  m.def("sweep",
        [](const Dataset& d, const ExperimentConfig& c, const std::vector<double>& sigma_sq,
           std::size_t repeats, std::uint64_t base_seed, std::optional<double> theoretical_ed,
           std::size_t jobs) {
          SweepGrid grid;
          grid.sigma_sq = sigma_sq;
          grid.theoretical_ed = theoretical_ed;
          py::gil_scoped_release release;
          return sweep(d, c, grid, repeats, base_seed, jobs);
        },
        py::arg("dataset"), py::arg("config"), py::arg("sigma_sq"), py::arg("repeats"),
        py::arg("base_seed") = 0, py::arg("theoretical_ed") = std::nullopt,
        py::arg("jobs") = 1);
  m.def("sweep_csv", [](const std::vector<GnmseResult>& r) {
    return to_text([&](std::ostream& os) { write_sweep_csv(r, os); });
  });
}
