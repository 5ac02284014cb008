#include "pcfl/pragmatic.hpp"

#include <algorithm>
#include <cmath>

namespace pcfl {

std::map<std::string, double> regress_conditional_utility(const SampleSet& data) {
    data.validate();
    if (data.continuous()) {
        throw InputError("regress_conditional_utility expects labeled samples");
    }
    if (!data.has_utilities()) throw InputError("sample set carries no utilities");
    std::map<std::string, double> sums;
    std::map<std::string, double> counts;
    for (std::size_t i = 0; i < data.size(); ++i) {
        sums[data.cause_labels[i]] += data.utilities[i];
        counts[data.cause_labels[i]] += 1.0;
    }
    std::map<std::string, double> means;
    for (const auto& [label, total] : sums) means[label] = total / counts[label];
    return means;
}

std::vector<std::vector<double>> effect_utility_profiles(const SampleSet& data,
                                                         const ValueSpace& cause_space,
                                                         const ValueSpace& effect_space,
                                                         const UtilityTable* util) {
    const std::size_t m = cause_space.size();
    const std::size_t n = effect_space.size();
    std::vector<std::vector<double>> profiles(n, std::vector<double>(m, 0.0));
    if (util != nullptr) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t col = util->effect_space().index_of(effect_space.label(i));
            for (std::size_t j = 0; j < m; ++j) {
                profiles[i][j] = util->at(util->cause_space().index_of(cause_space.label(j)), col);
            }
        }
        return profiles;
    }
    data.validate();
    if (!data.has_utilities()) throw InputError("sample set carries no utilities");
    std::vector<std::vector<double>> sums(n, std::vector<double>(m, 0.0));
    std::vector<std::vector<double>> counts(n, std::vector<double>(m, 0.0));
    for (std::size_t r = 0; r < data.size(); ++r) {
        const std::size_t j = cause_space.index_of(data.cause_labels[r]);
        const std::size_t i = effect_space.index_of(data.effect_labels[r]);
        sums[i][j] += data.utilities[r];
        counts[i][j] += 1.0;
    }
    std::string missing;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (counts[i][j] == 0.0) {
                if (!missing.empty()) missing += ", ";
                missing += "(" + cause_space.label(j) + "," + effect_space.label(i) + ")";
            } else {
                profiles[i][j] = sums[i][j] / counts[i][j];
            }
        }
    }
    if (!missing.empty()) {
        throw CoverageError("unobserved cause/effect pairs and no utility table: " + missing);
    }
    return profiles;
}

CoarseningResult run_pcfl(const SampleSet& data, const ClusterConfig& cfg,
                          const UtilityTable* util) {
    data.validate();
    if (data.continuous()) return run_pcfl_continuous(data, cfg);
    if (data.size() == 0) throw InputError("empty sample set");
    if (!data.has_utilities() && util == nullptr) {
        throw InputError("PCFL needs per-sample utilities or a utility table");
    }

    const ValueSpace cause_space(detail::distinct_labels(data.cause_labels));
    const ValueSpace effect_space(detail::distinct_labels(data.effect_labels));

    // attach utilities by table lookup when absent from the samples
    SampleSet working = data;
    if (!working.has_utilities()) {
        working.utilities.reserve(working.size());
        for (std::size_t i = 0; i < working.size(); ++i) {
            working.utilities.push_back(
                util->at(util->cause_space().index_of(working.cause_labels[i]),
                         util->effect_space().index_of(working.effect_labels[i])));
        }
    }

    // line 1: conditional expected utility per cause value
    const auto means = regress_conditional_utility(working);
    std::vector<double> f(cause_space.size());
    std::vector<double> cause_counts(cause_space.size(), 0.0);
    for (const auto& l : working.cause_labels) cause_counts[cause_space.index_of(l)] += 1.0;
    for (std::size_t j = 0; j < cause_space.size(); ++j) f[j] = means.at(cause_space.label(j));

    // line 2: cluster the mean utilities
    std::vector<std::vector<double>> f_points(cause_space.size());
    for (std::size_t j = 0; j < cause_space.size(); ++j) f_points[j] = {f[j]};
    const auto w_labels = cluster(f_points, cfg, &cause_counts);
    Partition cause_partition = Partition::from_labels(w_labels);

    // line 3: utility profiles across cause values, per distinct effect value
    auto g = effect_utility_profiles(working, cause_space, effect_space, util);
    std::vector<double> effect_counts(effect_space.size(), 0.0);
    for (const auto& l : working.effect_labels) effect_counts[effect_space.index_of(l)] += 1.0;

    // line 4: cluster the profiles
    const auto t_labels = cluster(g, cfg, &effect_counts);
    Partition effect_partition = Partition::from_labels(t_labels);

    std::vector<std::size_t> sample_cause_class(working.size());
    std::vector<std::size_t> sample_effect_class(working.size());
    for (std::size_t i = 0; i < working.size(); ++i) {
        sample_cause_class[i] =
            cause_partition.class_of(cause_space.index_of(working.cause_labels[i]));
        sample_effect_class[i] =
            effect_partition.class_of(effect_space.index_of(working.effect_labels[i]));
    }
    Cpt coarse = detail::empirical_coarse_cpt(sample_cause_class, sample_effect_class,
                                              coarse_space(cause_space, cause_partition),
                                              coarse_space(effect_space, effect_partition),
                                              cfg.laplace_alpha);
    return CoarseningResult{cause_space,
                            effect_space,
                            std::move(cause_partition),
                            std::move(effect_partition),
                            std::move(coarse),
                            std::move(f),
                            std::move(g)};
}

CoarseningResult run_pcfl_continuous(const SampleSet& data, const ClusterConfig& cfg) {
    data.validate();
    if (!data.continuous()) throw InputError("run_pcfl_continuous expects vector samples");
    if (!data.has_utilities()) throw InputError("PCFL needs per-sample utilities");
    const std::size_t n = data.size();
    if (cfg.knn_k > n) throw ConfigError("knn_k exceeds the sample count");

    // kNN regression of utility on the cause vectors
    std::vector<std::vector<double>> f(n, std::vector<double>(1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t j = 0; j < n; ++j) {
            double d = 0.0;
            for (std::size_t t = 0; t < data.cause_vectors[i].size(); ++t) {
                const double diff = data.cause_vectors[i][t] - data.cause_vectors[j][t];
                d += diff * diff;
            }
            dist[j] = {d, j};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(cfg.knn_k),
                          dist.end());
        double sum = 0.0;
        for (std::size_t t = 0; t < cfg.knn_k; ++t) sum += data.utilities[dist[t].second];
        f[i][0] = sum / static_cast<double>(cfg.knn_k);
    }

    const auto w_labels = cluster(f, cfg);
    Partition cause_partition = Partition::from_labels(w_labels);

    // per-sample utility stands in for the utility profile: with a utility
    // defined on the effect alone this is exactly the profile value
    std::vector<std::vector<double>> g(n, std::vector<double>(1, 0.0));
    for (std::size_t i = 0; i < n; ++i) g[i][0] = data.utilities[i];
    const auto t_labels = cluster(g, cfg);
    Partition effect_partition = Partition::from_labels(t_labels);

    std::vector<std::string> sample_names(n);
    for (std::size_t i = 0; i < n; ++i) sample_names[i] = "s" + std::to_string(i);
    ValueSpace sample_space(sample_names);
    std::vector<std::string> wnames, tnames;
    for (std::size_t c = 0; c < cause_partition.num_classes(); ++c) {
        wnames.push_back("W" + std::to_string(c));
    }
    for (std::size_t c = 0; c < effect_partition.num_classes(); ++c) {
        tnames.push_back("T" + std::to_string(c));
    }
    Cpt coarse = detail::empirical_coarse_cpt(w_labels, t_labels, ValueSpace(wnames),
                                              ValueSpace(tnames), cfg.laplace_alpha);
    std::vector<double> flat;
    flat.reserve(n);
    for (const auto& v : f) flat.push_back(v.front());
    return CoarseningResult{sample_space,          sample_space,
                            std::move(cause_partition), std::move(effect_partition),
                            std::move(coarse),     std::move(flat),
                            std::move(g)};
}

double rbf_utility(double y, double mean, double bandwidth, double shift) {
    if (!(bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
    if (!std::isfinite(y)) throw InputError("non-finite temperature");
    const double rounded = std::round(y * 10.0) / 10.0;
    const double d = rounded - mean;
    constexpr double pi = 3.14159265358979323846;
    return shift + std::exp(-(d * d) / bandwidth) / std::sqrt(bandwidth * pi);
}

}  // namespace pcfl
