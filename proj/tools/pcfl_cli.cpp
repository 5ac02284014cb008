// pcfl command-line front end.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pcfl/cfl.hpp"
#include "pcfl/dist.hpp"
#include "pcfl/equiv.hpp"
#include "pcfl/errors.hpp"
#include "pcfl/io.hpp"
#include "pcfl/montecarlo.hpp"
#include "pcfl/pragmatic.hpp"
#include "pcfl/tables.hpp"

namespace {

using namespace pcfl;

struct GlobalOpts {
    std::string format = "text";
    std::string out;
};

void deliver(const GlobalOpts& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_file(g.out, text);
    }
}

std::vector<double> uniform_marginal(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

AnalysisReport coarsening_report(const Cpt& fine, const Partition& cause_part,
                                 const Partition& effect_part,
                                 std::optional<ExpectedUtilityProfile> profile) {
    AnalysisReport report;
    report.cause_space = fine.cause_space();
    report.effect_space = fine.effect_space();
    report.cause_partition = cause_part;
    report.effect_partition = effect_part;
    report.coarse_cpt =
        coarsen_cpt(fine, cause_part, effect_part, uniform_marginal(fine.num_causes()));
    report.eu_profile = std::move(profile);
    return report;
}

int cmd_exact(const GlobalOpts& g, const std::string& cpt_path, const std::string& kind_name,
              const std::string& util_path, const std::string& relation, double tol) {
    const CptKind kind =
        kind_name == "int" ? CptKind::interventional : CptKind::observational;
    const Cpt cpt = parse_cpt_csv(cpt_path, kind);
    std::optional<UtilityTable> util;
    if (!util_path.empty()) util = parse_utility_csv(util_path);
    const bool needs_util = relation == "pc" || relation == "pe" || relation == "opc";
    if (needs_util && !util) {
        throw ConfigError("relation '" + relation + "' requires --util");
    }

    Partition cause_part = Partition::singletons(cpt.num_causes());
    Partition effect_part = Partition::singletons(cpt.num_effects());
    std::optional<ExpectedUtilityProfile> profile;
    if (relation == "c") {
        cause_part = causal_coarsening(cpt, tol);
    } else if (relation == "e") {
        effect_part = effect_coarsening(cpt, tol);
    } else if (relation == "oc") {
        cause_part = observational_causal_coarsening(cpt, tol);
    } else if (relation == "oe") {
        effect_part = observational_effect_coarsening(cpt, tol);
    } else if (relation == "pc") {
        cause_part = pragmatic_causal_coarsening(cpt, *util, tol);
        profile = expected_utilities(cpt, *util);
    } else if (relation == "pe") {
        effect_part = pragmatic_effect_coarsening(*util, tol);
    } else if (relation == "opc") {
        cause_part = observational_pragmatic_causal_coarsening(cpt, *util, tol);
        profile = expected_utilities(cpt, *util);
    } else {
        throw ConfigError("unknown relation '" + relation + "'");
    }
    deliver(g, emit_report(coarsening_report(cpt, cause_part, effect_part, std::move(profile)),
                           parse_format(g.format)));
    return 0;
}

ClusterConfig make_cluster_config(const std::string& method, double cluster_tol,
                                  std::size_t k_clusters, std::size_t knn_k,
                                  std::uint64_t seed) {
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
    return cfg;
}

int emit_coarsening(const GlobalOpts& g, const CoarseningResult& result) {
    AnalysisReport report;
    report.cause_space = result.cause_space;
    report.effect_space = result.effect_space;
    report.cause_partition = result.cause_partition;
    report.effect_partition = result.effect_partition;
    report.coarse_cpt = result.coarse_cpt;
    deliver(g, emit_report(report, parse_format(g.format)));
    return 0;
}

int cmd_cfl(const GlobalOpts& g, const std::string& data_path, const ClusterConfig& cfg) {
    const SampleSet data = parse_samples_csv(data_path);
    const CoarseningResult result =
        data.continuous() ? run_cfl_continuous(data, cfg) : run_cfl(data, cfg);
    return emit_coarsening(g, result);
}

int cmd_pcfl(const GlobalOpts& g, const std::string& data_path, const std::string& util_path,
             const ClusterConfig& cfg) {
    const SampleSet data = parse_samples_csv(data_path);
    std::optional<UtilityTable> util;
    if (!util_path.empty()) util = parse_utility_csv(util_path);
    const CoarseningResult result = data.continuous()
                                        ? run_pcfl_continuous(data, cfg)
                                        : run_pcfl(data, cfg, util ? &*util : nullptr);
    return emit_coarsening(g, result);
}

int cmd_pipeline(const GlobalOpts& g, const std::string& joint_path,
                 const std::string& util_path, double tol) {
    const ConfoundedJoint joint = ConfoundedJoint::from_json(read_file(joint_path));
    const UtilityTable util = parse_utility_csv(util_path);
    const PipelineResult pipeline = pragmatic_pipeline(joint, util, tol);

    AnalysisReport report;
    report.cause_space = joint.cause_space();
    report.effect_space = joint.effect_space();
    report.cause_partition = pipeline.cause_partition;
    report.effect_partition = pipeline.effect_partition;
    report.coarse_cpt = pipeline.coarse_cpt;
    report.eu_profile = expected_utilities(interventional_cpt(joint), util);
    deliver(g, emit_report(report, parse_format(g.format)));
    return 0;
}

int cmd_simulate(const GlobalOpts& g, const std::string& scm, std::size_t n,
                 std::uint64_t seed, bool with_util) {
    if (scm != "fig1") throw ConfigError("unknown SCM '" + scm + "' (expected fig1)");
    const ConfoundedJoint joint = build_fig1_scm();
    const UtilityTable util = tables::fig1_utility();
    std::mt19937_64 rng(seed);
    const SampleSet data = sample_dataset(joint, n, rng, with_util ? &util : nullptr);
    deliver(g, emit_samples_csv(data));
    return 0;
}

int cmd_prop2(const GlobalOpts& g, const std::string& dims_text, std::uint64_t trials,
              const std::string& grid_text, double delta, std::uint64_t seed) {
    JointDims dims;
    {
        std::istringstream stream(dims_text);
        char comma = 0;
        if (!(stream >> dims.n_causes >> comma >> dims.n_effects >> comma >>
              dims.n_confounders)) {
            throw ConfigError("--dims expects m,n,w");
        }
    }
    std::vector<double> grid;
    {
        std::istringstream stream(grid_text);
        std::string field;
        while (std::getline(stream, field, ',')) grid.push_back(std::stod(field));
    }
    const Prop2Report report = prop2_probe(dims, trials, grid, delta, seed);
    const ReportFormat format = parse_format(g.format);
    if (format == ReportFormat::json) {
        deliver(g, report.to_json());
    } else if (format == ReportFormat::csv) {
        deliver(g, report.to_csv());
    } else {
        std::ostringstream out;
        out << "trials = " << report.trials << ", dims = (" << dims.n_causes << ","
            << dims.n_effects << "," << dims.n_confounders << "), seed = " << report.seed
            << "\n";
        out << "eps\tflagged\tviolations\trate\n";
        for (const auto& row : report.rows) {
            out << row.eps << '\t' << row.flagged << '\t' << row.violations << '\t' << row.rate
                << '\n';
        }
        deliver(g, out.str());
    }
    return 0;
}

void print_cpt_comparison(std::ostream& out, const std::string& title, const Cpt& computed,
                          const Cpt* expected) {
    out << title << ":\n";
    for (const auto& l : computed.effect_space().labels()) out << '\t' << l;
    out << '\n';
    out.setf(std::ios::fixed);
    out.precision(4);
    for (std::size_t j = 0; j < computed.num_causes(); ++j) {
        out << computed.cause_space().label(j);
        for (std::size_t i = 0; i < computed.num_effects(); ++i) {
            out << '\t' << computed.at(j, i);
            if (expected) out << " (" << expected->at(j, i) << ")";
        }
        out << '\n';
    }
    out.unsetf(std::ios::fixed);
    out.precision(6);
}

int cmd_demo_smoking(const GlobalOpts& g) {
    const Cpt cpt = tables::smoking_cpt();
    const UtilityTable util = tables::smoking_utility();
    const ExpectedUtilityProfile profile = expected_utilities(cpt, util);
    const Partition pc = pragmatic_causal_coarsening(cpt, util);
    const Partition pe = pragmatic_effect_coarsening(util);
    const Partition cc = causal_coarsening(cpt);
    const Partition ec = effect_coarsening(cpt);

    const ReportFormat format = parse_format(g.format);
    if (format != ReportFormat::text) {
        AnalysisReport report;
        report.cause_space = cpt.cause_space();
        report.effect_space = cpt.effect_space();
        report.cause_partition = pc;
        report.effect_partition = pe;
        report.coarse_cpt = coarsen_cpt(cpt, pc, pe, uniform_marginal(cpt.num_causes()));
        report.eu_profile = profile;
        deliver(g, emit_report(report, format));
        return 0;
    }

    std::ostringstream out;
    out << "smoking decision demo\n";
    print_cpt_comparison(out, "interventional CPT", cpt, nullptr);
    out << "expected utilities (expected 1772.00, 1729.32, 1947.05):";
    out.setf(std::ios::fixed);
    out.precision(2);
    for (std::size_t j = 0; j < profile.values.size(); ++j) {
        out << ' ' << cpt.cause_space().label(j) << '=' << profile.values[j];
    }
    out << "\neta = " << *profile.eta << " (expected 1947.05)\n";
    out.unsetf(std::ios::fixed);
    auto show = [&](const std::string& name, const Partition& part, const ValueSpace& space,
                    const std::string& expected) {
        out << name << ":";
        for (std::size_t c = 0; c < part.num_classes(); ++c) {
            out << " {" << part.class_label(c, space) << "}";
        }
        out << "  (expected " << expected << ")\n";
    };
    show("causal coarsening", cc, cpt.cause_space(), "all singletons");
    show("effect coarsening", ec, cpt.effect_space(), "{[0,49]∨[90,Inf]} merged");
    show("pragmatic causal coarsening", pc, cpt.cause_space(), "{Marlboro∨Other} {Nothing}");
    show("pragmatic effect coarsening", pe, cpt.effect_space(), "all singletons");
    deliver(g, out.str());
    return 0;
}

int cmd_demo_scm(const GlobalOpts& g) {
    const ConfoundedJoint joint = build_fig1_scm();
    const UtilityTable util = tables::fig1_utility();
    const Cpt obs = observational_cpt(joint);
    const Cpt expected_obs = tables::fig1_cpt();

    const Partition oc = observational_causal_coarsening(obs, 1e-6);
    const Partition oe = observational_effect_coarsening(obs, 1e-6);
    const Cpt cfl_coarse = coarsen_cpt(obs, oc, oe, cause_marginal(joint));
    const Cpt cfl_expected = tables::fig1_cfl_expected();

    const Partition opc = observational_pragmatic_causal_coarsening(obs, util, 1e-6);
    const Partition pe = pragmatic_effect_coarsening(util);
    const Cpt pcfl_coarse = coarsen_cpt(obs, opc, pe, cause_marginal(joint));
    const Cpt pcfl_expected = tables::fig1_pcfl_expected();
    const ExpectedUtilityProfile profile = expected_utilities(obs, util);

    const ReportFormat format = parse_format(g.format);
    if (format != ReportFormat::text) {
        AnalysisReport report;
        report.cause_space = obs.cause_space();
        report.effect_space = obs.effect_space();
        report.cause_partition = opc;
        report.effect_partition = pe;
        report.coarse_cpt = pcfl_coarse;
        report.eu_profile = profile;
        deliver(g, emit_report(report, format));
        return 0;
    }

    std::ostringstream out;
    out << "confounded simulation demo (computed vs expected in parens)\n";
    print_cpt_comparison(out, "observational CPT", obs, &expected_obs);
    auto show = [&](const std::string& name, const Partition& part, const ValueSpace& space) {
        out << name << ":";
        for (std::size_t c = 0; c < part.num_classes(); ++c) {
            out << " {" << part.class_label(c, space) << "}";
        }
        out << '\n';
    };
    show("observational causal coarsening", oc, obs.cause_space());
    show("observational effect coarsening", oe, obs.effect_space());
    print_cpt_comparison(out, "coarse observational CPT", cfl_coarse, &cfl_expected);
    show("observational pragmatic causal coarsening", opc, obs.cause_space());
    show("pragmatic effect coarsening", pe, obs.effect_space());
    print_cpt_comparison(out, "pragmatic coarse CPT", pcfl_coarse, &pcfl_expected);
    out << "observational expected utilities:";
    out.setf(std::ios::fixed);
    out.precision(3);
    for (std::size_t j = 0; j < profile.values.size(); ++j) {
        out << ' ' << obs.cause_space().label(j) << '=' << profile.values[j];
    }
    out << '\n';
    deliver(g, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal feature learning toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--format", g.format, "Output format: text, json, or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", g.out, "Write output to this path instead of stdout");

    // exact
    std::string cpt_path, kind_name = "int", util_path, relation;
    double tol = kDefaultTolerance;
    auto* exact = app.add_subcommand("exact", "Closed-form coarsening of a CPT");
    exact->add_option("--cpt", cpt_path, "CPT CSV")->required();
    exact->add_option("--kind", kind_name, "CPT kind: obs or int")
        ->check(CLI::IsMember({"obs", "int"}));
    exact->add_option("--util", util_path, "Utility table CSV");
    exact->add_option("--relation", relation, "c, e, oc, oe, pc, pe, or opc")
        ->required()
        ->check(CLI::IsMember({"c", "e", "oc", "oe", "pc", "pe", "opc"}));
    exact->add_option("--tol", tol, "Equality tolerance");

    // shared clustering flags
    std::string data_path, method = "tol";
    double cluster_tol = 1e-2;
    std::size_t k_clusters = 2, knn_k = 5;
    std::uint64_t seed = 0;
    auto add_cluster_flags = [&](CLI::App* cmd) {
        cmd->add_option("--data", data_path, "Sample CSV")->required();
        cmd->add_option("--method", method, "Clustering method: tol or kmeans")
            ->check(CLI::IsMember({"tol", "kmeans"}));
        cmd->add_option("--cluster-tol", cluster_tol, "Tolerance-link merge threshold");
        cmd->add_option("-k,--k-clusters", k_clusters, "kmeans cluster count");
        cmd->add_option("--knn-k", knn_k, "k for the kNN distance features");
        cmd->add_option("--seed", seed, "RNG seed");
    };
    auto* cfl_cmd = app.add_subcommand("cfl", "Sample-based observational coarsening");
    add_cluster_flags(cfl_cmd);
    std::string pcfl_util_path;
    auto* pcfl_cmd = app.add_subcommand("pcfl", "Sample-based pragmatic coarsening");
    add_cluster_flags(pcfl_cmd);
    pcfl_cmd->add_option("--util", pcfl_util_path, "Utility table CSV");

    // pipeline
    std::string joint_path, pipeline_util_path;
    double pipeline_tol = kDefaultTolerance;
    auto* pipeline = app.add_subcommand("pipeline", "Observational-then-interventional procedure");
    pipeline->add_option("--joint", joint_path, "Confounded joint JSON")->required();
    pipeline->add_option("--util", pipeline_util_path, "Utility table CSV")->required();
    pipeline->add_option("--tol", pipeline_tol, "Equality tolerance");

    // simulate
    std::string scm = "fig1";
    std::size_t n_samples = 1000;
    std::uint64_t sim_seed = 0;
    bool with_util = false;
    auto* simulate = app.add_subcommand("simulate", "Sample a dataset from a built-in SCM");
    simulate->add_option("--scm", scm, "SCM name (fig1)")->required();
    simulate->add_option("-n,--n", n_samples, "Sample count")->required();
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_flag("--with-util", with_util, "Attach utilities to each sample");

    // prop2
    std::string dims_text = "4,4,3", grid_text = "1e-1,1e-2,1e-3,1e-4";
    std::uint64_t trials = 10000, prop2_seed = 0;
    double delta = 1e-6;
    auto* prop2 = app.add_subcommand("prop2", "Random-joint refinement probe");
    prop2->add_option("--dims", dims_text, "m,n,w");
    prop2->add_option("--trials", trials, "Trial count");
    prop2->add_option("--eps-grid", grid_text, "Comma-separated epsilon grid");
    prop2->add_option("--delta", delta, "Maximizer-boundary tolerance");
    prop2->add_option("--seed", prop2_seed, "Master seed");

    // demo
    auto* demo = app.add_subcommand("demo", "Reproduce the worked examples");
    demo->require_subcommand(1);
    auto* demo_smoking = demo->add_subcommand("smoking", "Smoking decision tables");
    auto* demo_scm = demo->add_subcommand("scm", "Confounded simulation tables");

    CLI11_PARSE(app, argc, argv);

    try {
        if (exact->parsed()) {
            return cmd_exact(g, cpt_path, kind_name, util_path, relation, tol);
        }
        const ClusterConfig cfg =
            make_cluster_config(method, cluster_tol, k_clusters, knn_k, seed);
        if (cfl_cmd->parsed()) return cmd_cfl(g, data_path, cfg);
        if (pcfl_cmd->parsed()) return cmd_pcfl(g, data_path, pcfl_util_path, cfg);
        if (pipeline->parsed()) return cmd_pipeline(g, joint_path, pipeline_util_path, pipeline_tol);
        if (simulate->parsed()) return cmd_simulate(g, scm, n_samples, sim_seed, with_util);
        if (prop2->parsed()) return cmd_prop2(g, dims_text, trials, grid_text, delta, prop2_seed);
        if (demo->parsed()) {
            if (demo_smoking->parsed()) return cmd_demo_smoking(g);
            if (demo_scm->parsed()) return cmd_demo_scm(g);
        }
    } catch (const pcfl::Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
    return 0;
}
