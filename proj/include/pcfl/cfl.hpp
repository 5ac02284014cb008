#ifndef PCFL_CFL_HPP
#define PCFL_CFL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcfl/core.hpp"

namespace pcfl {

enum class ClusterMethod { tolerance_link, kmeans };

struct ClusterConfig {
    ClusterMethod method = ClusterMethod::tolerance_link;
    double cluster_tol = 1e-6;      // tolerance-link merge threshold
    std::size_t k_clusters = 2;     // kmeans cluster count
    std::size_t knn_k = 5;          // k for the kNN distance features
    std::uint64_t seed = 0;         // kmeans initialization seed
    double laplace_alpha = 0.0;     // smoothing for the empirical coarse CPT
};

struct CoarseningResult {
    ValueSpace cause_space;   // distinct observed cause values, first-occurrence order
    ValueSpace effect_space;  // distinct observed effect values, first-occurrence order
    Partition cause_partition;
    Partition effect_partition;
    Cpt coarse_cpt;  // empirical, counts-based
    // Regressed per-cause statistic f (conditional mean, or mean utility for
    // the pragmatic algorithm), indexed like cause_space.
    std::vector<double> cause_statistic;
    // Per-effect feature vectors g, indexed like effect_space.
    std::vector<std::vector<double>> effect_features;
};

// L2-optimal per-group constant: the empirical mean of the numeric effect
// codes per distinct cause label. Equal means are only a heuristic indicator
// of observational causal equivalence.
std::map<std::string, double> regress_conditional_mean(
    const SampleSet& data,
    const std::map<std::string, double>* effect_codes = nullptr);

// Deterministic clustering of points (tolerance-link single linkage, or
// seeded k-means++/Lloyd). Optional weights hold point multiplicities.
std::vector<std::size_t> cluster(const std::vector<std::vector<double>>& points,
                                 const ClusterConfig& cfg,
                                 const std::vector<double>* weights = nullptr);

// g(e_i)[b] = Euclidean distance from e_i to its knn_k-th nearest neighbor
// within cause-cluster b's effect multiset; e_i is excluded from its own
// neighbor list when it belongs to that multiset.
std::vector<std::vector<double>> knn_features(const SampleSet& data,
                                              const std::vector<std::size_t>& cause_cluster,
                                              std::size_t knn_k,
                                              const std::map<std::string, double>* effect_codes =
                                                  nullptr);

// Algorithm-1 CFL on discrete samples: mean regression, cause clustering,
// kNN distance features, effect clustering, and a counts-based coarse CPT.
CoarseningResult run_cfl(const SampleSet& data, const ClusterConfig& cfg,
                         const std::map<std::string, double>* effect_codes = nullptr);

// Continuous-mode CFL over vector-valued samples; partitions are over sample
// indices. Regression is a kNN conditional-mean regressor over cause vectors.
CoarseningResult run_cfl_continuous(const SampleSet& data, const ClusterConfig& cfg);

namespace detail {

// Distinct labels in first-occurrence order.
std::vector<std::string> distinct_labels(const std::vector<std::string>& labels);

// Numeric code per distinct effect label: the user-supplied code, the label
// parsed as a number, or the enumeration order as a fallback.
std::map<std::string, double> resolve_effect_codes(
    const std::vector<std::string>& effect_labels, const std::map<std::string, double>* user);

// Empirical p(T-class | W-class) from counts, optionally Laplace-smoothed.
Cpt empirical_coarse_cpt(const std::vector<std::size_t>& cause_class_per_sample,
                         const std::vector<std::size_t>& effect_class_per_sample,
                         const ValueSpace& coarse_cause, const ValueSpace& coarse_effect,
                         double laplace_alpha);

}  // namespace detail

}  // namespace pcfl

#endif
