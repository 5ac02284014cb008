#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcfl/cfl.hpp"
#include "pcfl/core.hpp"
#include "pcfl/dist.hpp"
#include "pcfl/equiv.hpp"
#include "pcfl/errors.hpp"
#include "pcfl/io.hpp"
#include "pcfl/montecarlo.hpp"
#include "pcfl/pragmatic.hpp"
#include "pcfl/tables.hpp"

namespace py = pybind11;
using namespace pcfl;

namespace {

ClusterConfig config_from_kwargs(const std::string& method, double cluster_tol,
                                 std::size_t k_clusters, std::size_t knn_k,
                                 std::uint64_t seed, double laplace_alpha) {
    ClusterConfig cfg;
    if (method == "tol") {
        cfg.method = ClusterMethod::tolerance_link;
    } else if (method == "kmeans") {
        cfg.method = ClusterMethod::kmeans;
    } else {
        throw ConfigError("unknown clustering method '" + method + "'");
    }
    cfg.cluster_tol = cluster_tol;
    cfg.k_clusters = k_clusters;
    cfg.knn_k = knn_k;
    cfg.seed = seed;
    cfg.laplace_alpha = laplace_alpha;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_pcfl, m) {
    m.doc() = "Causal feature learning toolkit";

    py::register_exception<Error>(m, "PcflError", PyExc_ValueError);

    py::enum_<CptKind>(m, "CptKind")
        .value("observational", CptKind::observational)
        .value("interventional", CptKind::interventional);

    py::class_<ValueSpace>(m, "ValueSpace")
        .def(py::init<std::vector<std::string>>())
        .def("__len__", &ValueSpace::size)
        .def("labels", &ValueSpace::labels)
        .def("label", &ValueSpace::label)
        .def("index_of", &ValueSpace::index_of);

    py::class_<Partition>(m, "Partition")
        .def(py::init<std::size_t, std::vector<std::vector<std::size_t>>>())
        .def_static("singletons", &Partition::singletons)
        .def_static("from_labels", &Partition::from_labels)
        .def("classes", &Partition::classes)
        .def("num_classes", &Partition::num_classes)
        .def("class_of", &Partition::class_of)
        .def("class_label", &Partition::class_label)
        .def("space_size", &Partition::space_size)
        .def("__eq__", [](const Partition& a, const Partition& b) { return a == b; });

    py::class_<Cpt>(m, "Cpt")
        .def(py::init<ValueSpace, ValueSpace, std::vector<std::vector<double>>, CptKind>())
        .def("cause_space", &Cpt::cause_space)
        .def("effect_space", &Cpt::effect_space)
        .def("rows", &Cpt::rows)
        .def("row", &Cpt::row)
        .def("at", &Cpt::at)
        .def("kind", &Cpt::kind);

    py::class_<UtilityTable>(m, "UtilityTable")
        .def(py::init<ValueSpace, ValueSpace, std::vector<std::vector<double>>>())
        .def("cause_space", &UtilityTable::cause_space)
        .def("effect_space", &UtilityTable::effect_space)
        .def("values", &UtilityTable::values)
        .def("at", &UtilityTable::at);

    py::class_<SampleSet>(m, "SampleSet")
        .def(py::init<>())
        .def_readwrite("cause_labels", &SampleSet::cause_labels)
        .def_readwrite("effect_labels", &SampleSet::effect_labels)
        .def_readwrite("cause_vectors", &SampleSet::cause_vectors)
        .def_readwrite("effect_vectors", &SampleSet::effect_vectors)
        .def_readwrite("utilities", &SampleSet::utilities)
        .def("__len__", &SampleSet::size)
        .def("validate", &SampleSet::validate);

    py::class_<ConfoundedJoint>(m, "ConfoundedJoint")
        .def(py::init<ValueSpace, ValueSpace, ValueSpace,
                      std::vector<std::vector<std::vector<double>>>,
                      std::vector<std::vector<double>>, std::vector<double>>())
        .def("cause_space", &ConfoundedJoint::cause_space)
        .def("effect_space", &ConfoundedJoint::effect_space)
        .def("confounder_space", &ConfoundedJoint::confounder_space)
        .def("to_json", &ConfoundedJoint::to_json)
        .def_static("from_json", &ConfoundedJoint::from_json);

    py::class_<ExpectedUtilityProfile>(m, "ExpectedUtilityProfile")
        .def_readonly("values", &ExpectedUtilityProfile::values)
        .def_readonly("kind", &ExpectedUtilityProfile::kind)
        .def_readonly("eta", &ExpectedUtilityProfile::eta);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("cause_partition", &PipelineResult::cause_partition)
        .def_readonly("effect_partition", &PipelineResult::effect_partition)
        .def_readonly("coarse_cpt", &PipelineResult::coarse_cpt);

    py::class_<CoarseningResult>(m, "CoarseningResult")
        .def_readonly("cause_space", &CoarseningResult::cause_space)
        .def_readonly("effect_space", &CoarseningResult::effect_space)
        .def_readonly("cause_partition", &CoarseningResult::cause_partition)
        .def_readonly("effect_partition", &CoarseningResult::effect_partition)
        .def_readonly("coarse_cpt", &CoarseningResult::coarse_cpt)
        .def_readonly("cause_statistic", &CoarseningResult::cause_statistic)
        .def_readonly("effect_features", &CoarseningResult::effect_features);

    // exact machinery
    m.def("expected_utilities", &expected_utilities);
    m.def("causal_coarsening", &causal_coarsening, py::arg("cpt"),
          py::arg("tol") = kDefaultTolerance);
    m.def("effect_coarsening", &effect_coarsening, py::arg("cpt"),
          py::arg("tol") = kDefaultTolerance);
    m.def("observational_causal_coarsening", &observational_causal_coarsening, py::arg("cpt"),
          py::arg("tol") = kDefaultTolerance);
    m.def("observational_effect_coarsening", &observational_effect_coarsening, py::arg("cpt"),
          py::arg("tol") = kDefaultTolerance);
    m.def("pragmatic_causal_coarsening", &pragmatic_causal_coarsening, py::arg("cpt"),
          py::arg("util"), py::arg("tol") = kDefaultTolerance);
    m.def("pragmatic_effect_coarsening", &pragmatic_effect_coarsening, py::arg("util"),
          py::arg("tol") = kDefaultTolerance);
    m.def("observational_pragmatic_causal_coarsening",
          &observational_pragmatic_causal_coarsening, py::arg("cpt"), py::arg("util"),
          py::arg("tol") = kDefaultTolerance);
    m.def("pragmatic_pipeline", &pragmatic_pipeline, py::arg("joint"), py::arg("util"),
          py::arg("tol") = kDefaultTolerance);
    m.def("refines", &refines);
    m.def(
        "coarsen_cpt",
        [](const Cpt& cpt, const Partition& cause_part, const Partition& effect_part,
           std::optional<std::vector<double>> marginal) {
            std::vector<double> m_ = marginal ? *marginal
                                              : std::vector<double>(cpt.num_causes(),
                                                                    1.0 / cpt.num_causes());
            return coarsen_cpt(cpt, cause_part, effect_part, m_);
        },
        py::arg("cpt"), py::arg("cause_partition"), py::arg("effect_partition"),
        py::arg("cause_marginal") = py::none());

    // exact joint
    m.def("interventional_cpt", &interventional_cpt);
    m.def("observational_cpt", &observational_cpt);
    m.def("cause_marginal", &cause_marginal);
    m.def("eq_constraint_residual", &eq_constraint_residual);

    // sample-based algorithms
    m.def(
        "run_cfl",
        [](const SampleSet& data, const std::string& method, double cluster_tol,
           std::size_t k_clusters, std::size_t knn_k, std::uint64_t seed,
           double laplace_alpha) {
            const ClusterConfig cfg = config_from_kwargs(method, cluster_tol, k_clusters,
                                                         knn_k, seed, laplace_alpha);
            return data.continuous() ? run_cfl_continuous(data, cfg) : run_cfl(data, cfg);
        },
        py::arg("data"), py::arg("method") = "tol", py::arg("cluster_tol") = 1e-2,
        py::arg("k_clusters") = 2, py::arg("knn_k") = 5, py::arg("seed") = 0,
        py::arg("laplace_alpha") = 0.0);
    m.def(
        "run_pcfl",
        [](const SampleSet& data, const UtilityTable* util, const std::string& method,
           double cluster_tol, std::size_t k_clusters, std::size_t knn_k, std::uint64_t seed,
           double laplace_alpha) {
            const ClusterConfig cfg = config_from_kwargs(method, cluster_tol, k_clusters,
                                                         knn_k, seed, laplace_alpha);
            return data.continuous() ? run_pcfl_continuous(data, cfg)
                                     : run_pcfl(data, cfg, util);
        },
        py::arg("data"), py::arg("util") = nullptr, py::arg("method") = "tol",
        py::arg("cluster_tol") = 1e-2, py::arg("k_clusters") = 2, py::arg("knn_k") = 5,
        py::arg("seed") = 0, py::arg("laplace_alpha") = 0.0);
    m.def("rbf_utility", &rbf_utility, py::arg("y"), py::arg("mean") = 26.0,
          py::arg("bandwidth") = 0.02, py::arg("shift") = -1.0);

    // simulation
    m.def("build_fig1_scm", &build_fig1_scm);
    m.def(
        "sample_dataset",
        [](const ConfoundedJoint& joint, std::size_t n, std::uint64_t seed,
           const UtilityTable* util) {
            std::mt19937_64 rng(seed);
            return sample_dataset(joint, n, rng, util);
        },
        py::arg("joint"), py::arg("n"), py::arg("seed") = 0, py::arg("util") = nullptr);
    m.def(
        "prop2_probe",
        [](std::size_t n_causes, std::size_t n_effects, std::size_t n_confounders,
           std::uint64_t trials, const std::vector<double>& eps_grid, double delta,
           std::uint64_t seed) {
            const Prop2Report report = prop2_probe(
                JointDims{n_causes, n_effects, n_confounders}, trials, eps_grid, delta, seed);
            return report.to_json();
        },
        py::arg("n_causes"), py::arg("n_effects"), py::arg("n_confounders"), py::arg("trials"),
        py::arg("eps_grid"), py::arg("delta") = 1e-6, py::arg("seed") = 0);

    // io
    m.def("parse_samples_csv", &parse_samples_csv);
    m.def("parse_samples_csv_text", &parse_samples_csv_text, py::arg("text"),
          py::arg("name") = "<input>");
    m.def("parse_cpt_csv", &parse_cpt_csv);
    m.def("parse_utility_csv", &parse_utility_csv);
    m.def("emit_samples_csv", &emit_samples_csv);

    // built-in tables
    m.def("smoking_cpt", &tables::smoking_cpt);
    m.def("smoking_utility", &tables::smoking_utility);
    m.def("fig1_cpt", &tables::fig1_cpt);
    m.def("fig1_utility", &tables::fig1_utility);
}
