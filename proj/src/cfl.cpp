#include "pcfl/cfl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>

namespace pcfl {

namespace detail {

std::vector<std::string> distinct_labels(const std::vector<std::string>& labels) {
    std::vector<std::string> out;
    for (const auto& l : labels) {
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    }
    return out;
}

std::map<std::string, double> resolve_effect_codes(const std::vector<std::string>& effect_labels,
                                                   const std::map<std::string, double>* user) {
    const auto distinct = distinct_labels(effect_labels);
    std::map<std::string, double> codes;
    if (user != nullptr) {
        for (const auto& l : distinct) {
            auto it = user->find(l);
            if (it == user->end()) {
                throw InputError("no numeric code supplied for effect label '" + l + "'");
            }
            codes[l] = it->second;
        }
        return codes;
    }
    bool all_numeric = true;
    for (const auto& l : distinct) {
        char* end = nullptr;
        const double v = std::strtod(l.c_str(), &end);
        if (end == l.c_str() || *end != '\0' || !std::isfinite(v)) {
            all_numeric = false;
            break;
        }
        codes[l] = v;
    }
    if (all_numeric) return codes;
    // enumeration-order fallback
    codes.clear();
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        codes[distinct[i]] = static_cast<double>(i);
    }
    return codes;
}

Cpt empirical_coarse_cpt(const std::vector<std::size_t>& cause_class_per_sample,
                         const std::vector<std::size_t>& effect_class_per_sample,
                         const ValueSpace& coarse_cause, const ValueSpace& coarse_effect,
                         double laplace_alpha) {
    const std::size_t nc = coarse_cause.size();
    const std::size_t ne = coarse_effect.size();
    std::vector<std::vector<double>> counts(nc, std::vector<double>(ne, laplace_alpha));
    for (std::size_t i = 0; i < cause_class_per_sample.size(); ++i) {
        counts[cause_class_per_sample[i]][effect_class_per_sample[i]] += 1.0;
    }
    for (std::size_t a = 0; a < nc; ++a) {
        const double total = std::accumulate(counts[a].begin(), counts[a].end(), 0.0);
        if (total <= 0.0) {
            throw DegenerateClassError("no samples in cause class '" + coarse_cause.label(a) +
                                       "'");
        }
        for (double& v : counts[a]) v /= total;
    }
    return Cpt(coarse_cause, coarse_effect, std::move(counts), CptKind::observational);
}

}  // namespace detail

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

std::vector<std::size_t> canonical_labels(std::vector<std::size_t> labels) {
    std::map<std::size_t, std::size_t> remap;
    for (auto& l : labels) {
        auto [it, inserted] = remap.try_emplace(l, remap.size());
        l = it->second;
    }
    return labels;
}

std::vector<std::size_t> tolerance_link(const std::vector<std::vector<double>>& points,
                                        double tol) {
    UnionFind uf(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (std::sqrt(sq_distance(points[i], points[j])) <= tol) uf.unite(i, j);
        }
    }
    std::vector<std::size_t> labels(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) labels[i] = uf.find(i);
    return canonical_labels(std::move(labels));
}

std::vector<std::size_t> lloyd_kmeans(const std::vector<std::vector<double>>& points,
                                      std::size_t k, std::uint64_t seed,
                                      const std::vector<double>& w) {
    const std::size_t n = points.size();
    const std::size_t dim = points.front().size();

    std::size_t distinct = 0;
    {
        std::vector<std::vector<double>> seen;
        for (const auto& p : points) {
            if (std::find(seen.begin(), seen.end(), p) == seen.end()) seen.push_back(p);
        }
        distinct = seen.size();
    }
    if (k > distinct) {
        throw ConfigError("k_clusters (" + std::to_string(k) + ") exceeds the number of distinct points (" +
                          std::to_string(distinct) + ")");
    }

    // k-means++ seeding
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> centroids;
    {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double wtotal = std::accumulate(w.begin(), w.end(), 0.0);
        double r = unif(rng) * wtotal;
        std::size_t first = 0;
        for (std::size_t i = 0; i < n; ++i) {
            r -= w[i];
            if (r <= 0.0) {
                first = i;
                break;
            }
        }
        centroids.push_back(points[first]);
        std::vector<double> d2(n);
        while (centroids.size() < k) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::max();
                for (const auto& c : centroids) best = std::min(best, sq_distance(points[i], c));
                d2[i] = best * w[i];
                total += d2[i];
            }
            std::size_t pick = 0;
            if (total > 0.0) {
                double r2 = unif(rng) * total;
                for (std::size_t i = 0; i < n; ++i) {
                    r2 -= d2[i];
                    if (r2 <= 0.0) {
                        pick = i;
                        break;
                    }
                }
            } else {
                // all remaining points coincide with a centroid; pick any new one
                for (std::size_t i = 0; i < n; ++i) {
                    if (std::find(centroids.begin(), centroids.end(), points[i]) ==
                        centroids.end()) {
                        pick = i;
                        break;
                    }
                }
            }
            centroids.push_back(points[pick]);
        }
    }

    std::vector<std::size_t> assign(n, 0);
    for (int iter = 0; iter < 200; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double bestd = std::numeric_limits<double>::max();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_distance(points[i], centroids[c]);
                if (d < bestd) {
                    bestd = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<double> mass(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            mass[assign[i]] += w[i];
            for (std::size_t d = 0; d < dim; ++d) sums[assign[i]][d] += w[i] * points[i][d];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (mass[c] <= 0.0) {
                // re-seed an empty cluster at the point farthest from its centroid
                std::size_t far = 0;
                double fard = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = sq_distance(points[i], centroids[assign[i]]);
                    if (d > fard) {
                        fard = d;
                        far = i;
                    }
                }
                centroids[c] = points[far];
                changed = true;
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) centroids[c][d] = sums[c][d] / mass[c];
        }
        if (!changed) break;
    }
    return canonical_labels(std::move(assign));
}

// k-th smallest distance from x to the (1-D) codes in `pool`, optionally
// with one coincident instance of x removed.
double kth_distance_1d(const std::vector<double>& pool, double x, std::size_t k,
                       bool exclude_self, const std::string& cluster_name) {
    std::vector<double> dist;
    dist.reserve(pool.size());
    for (double y : pool) dist.push_back(std::abs(y - x));
    if (exclude_self) {
        auto it = std::find(dist.begin(), dist.end(), 0.0);
        if (it != dist.end()) dist.erase(it);
    }
    if (dist.size() < k) {
        throw InputError("cause cluster '" + cluster_name + "' has only " +
                         std::to_string(dist.size()) + " usable neighbors, need " +
                         std::to_string(k));
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    return dist[k - 1];
}

double kth_distance_vec(const std::vector<std::vector<double>>& pool,
                        const std::vector<double>& x, std::size_t k, bool exclude_self,
                        const std::string& cluster_name) {
    std::vector<double> dist;
    dist.reserve(pool.size());
    for (const auto& y : pool) dist.push_back(sq_distance(x, y));
    if (exclude_self) {
        auto it = std::find(dist.begin(), dist.end(), 0.0);
        if (it != dist.end()) dist.erase(it);
    }
    if (dist.size() < k) {
        throw InputError("cause cluster '" + cluster_name + "' has only " +
                         std::to_string(dist.size()) + " usable neighbors, need " +
                         std::to_string(k));
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    return std::sqrt(dist[k - 1]);
}

}  // namespace

std::map<std::string, double> regress_conditional_mean(
    const SampleSet& data, const std::map<std::string, double>* effect_codes) {
    data.validate();
    if (data.continuous()) {
        throw InputError("regress_conditional_mean expects labeled samples");
    }
    if (data.size() == 0) throw InputError("empty sample set");
    const auto codes = detail::resolve_effect_codes(data.effect_labels, effect_codes);
    std::map<std::string, double> sums;
    std::map<std::string, double> counts;
    for (std::size_t i = 0; i < data.size(); ++i) {
        sums[data.cause_labels[i]] += codes.at(data.effect_labels[i]);
        counts[data.cause_labels[i]] += 1.0;
    }
    std::map<std::string, double> means;
    for (const auto& [label, total] : sums) means[label] = total / counts[label];
    return means;
}

std::vector<std::size_t> cluster(const std::vector<std::vector<double>>& points,
                                 const ClusterConfig& cfg, const std::vector<double>* weights) {
    if (points.empty()) throw InputError("cannot cluster an empty point set");
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) throw ShapeError("clustering points have mixed dimensions");
        for (double v : p) {
            if (!std::isfinite(v)) throw InputError("non-finite clustering point");
        }
    }
    if (weights != nullptr && weights->size() != points.size()) {
        throw ShapeError("weight count does not match point count");
    }
    if (cfg.method == ClusterMethod::tolerance_link) {
        return tolerance_link(points, cfg.cluster_tol);
    }
    std::vector<double> w = weights ? *weights : std::vector<double>(points.size(), 1.0);
    return lloyd_kmeans(points, cfg.k_clusters, cfg.seed, w);
}

std::vector<std::vector<double>> knn_features(const SampleSet& data,
                                              const std::vector<std::size_t>& cause_cluster,
                                              std::size_t knn_k,
                                              const std::map<std::string, double>* effect_codes) {
    data.validate();
    if (cause_cluster.size() != data.size()) {
        throw ShapeError("cause cluster labels do not match sample count");
    }
    if (knn_k < 1) throw ConfigError("knn_k must be at least 1");
    const std::size_t n_clusters =
        1 + *std::max_element(cause_cluster.begin(), cause_cluster.end());

    std::vector<std::vector<double>> features(data.size(), std::vector<double>(n_clusters, 0.0));
    if (data.continuous()) {
        std::vector<std::vector<std::vector<double>>> pools(n_clusters);
        for (std::size_t i = 0; i < data.size(); ++i) {
            pools[cause_cluster[i]].push_back(data.effect_vectors[i]);
        }
        for (std::size_t i = 0; i < data.size(); ++i) {
            for (std::size_t b = 0; b < n_clusters; ++b) {
                features[i][b] = kth_distance_vec(pools[b], data.effect_vectors[i], knn_k,
                                                  cause_cluster[i] == b, std::to_string(b));
            }
        }
        return features;
    }

    const auto codes = detail::resolve_effect_codes(data.effect_labels, effect_codes);
    std::vector<std::vector<double>> pools(n_clusters);
    for (std::size_t i = 0; i < data.size(); ++i) {
        pools[cause_cluster[i]].push_back(codes.at(data.effect_labels[i]));
    }
    // features only depend on (effect code, cluster, excluded-or-not)
    std::map<std::tuple<double, std::size_t, bool>, double> cache;
    auto feature = [&](double x, std::size_t b, bool exclude) {
        auto key = std::make_tuple(x, b, exclude);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, kth_distance_1d(pools[b], x, knn_k, exclude,
                                                    std::to_string(b)))
                     .first;
        }
        return it->second;
    };
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double x = codes.at(data.effect_labels[i]);
        for (std::size_t b = 0; b < n_clusters; ++b) {
            features[i][b] = feature(x, b, cause_cluster[i] == b);
        }
    }
    return features;
}

CoarseningResult run_cfl(const SampleSet& data, const ClusterConfig& cfg,
                         const std::map<std::string, double>* effect_codes) {
    data.validate();
    if (data.continuous()) return run_cfl_continuous(data, cfg);
    if (data.size() == 0) throw InputError("empty sample set");

    const ValueSpace cause_space(detail::distinct_labels(data.cause_labels));
    const ValueSpace effect_space(detail::distinct_labels(data.effect_labels));
    const auto codes = detail::resolve_effect_codes(data.effect_labels, effect_codes);

    // line 1: conditional-mean regression
    const auto means = regress_conditional_mean(data, effect_codes);
    std::vector<double> f(cause_space.size());
    std::vector<double> cause_counts(cause_space.size(), 0.0);
    for (const auto& l : data.cause_labels) cause_counts[cause_space.index_of(l)] += 1.0;
    for (std::size_t j = 0; j < cause_space.size(); ++j) f[j] = means.at(cause_space.label(j));

    // line 2: cluster the distinct f-values, weighted by multiplicity
    std::vector<std::vector<double>> f_points(cause_space.size());
    for (std::size_t j = 0; j < cause_space.size(); ++j) f_points[j] = {f[j]};
    const auto w_labels = cluster(f_points, cfg, &cause_counts);
    Partition cause_partition = Partition::from_labels(w_labels);

    // lines 4-5: kNN distance features against each cluster's effect multiset.
    // Computed per distinct effect value; a value is treated as a member of
    // every cluster in which it occurs, so the self-exclusion convention is
    // applied valuewise.
    std::vector<std::size_t> sample_cluster(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        sample_cluster[i] = cause_partition.class_of(cause_space.index_of(data.cause_labels[i]));
    }
    std::vector<std::vector<double>> pools(cause_partition.num_classes());
    for (std::size_t i = 0; i < data.size(); ++i) {
        pools[sample_cluster[i]].push_back(codes.at(data.effect_labels[i]));
    }
    std::vector<double> effect_counts(effect_space.size(), 0.0);
    for (const auto& l : data.effect_labels) effect_counts[effect_space.index_of(l)] += 1.0;
    std::vector<std::vector<double>> g(effect_space.size(),
                                       std::vector<double>(cause_partition.num_classes(), 0.0));
    for (std::size_t v = 0; v < effect_space.size(); ++v) {
        const double x = codes.at(effect_space.label(v));
        for (std::size_t b = 0; b < cause_partition.num_classes(); ++b) {
            const bool member =
                std::find(pools[b].begin(), pools[b].end(), x) != pools[b].end();
            g[v][b] = kth_distance_1d(pools[b], x, cfg.knn_k, member,
                                      cause_partition.class_label(b, cause_space));
        }
    }

    // line 6: cluster the effect feature vectors
    const auto t_labels = cluster(g, cfg, &effect_counts);
    Partition effect_partition = Partition::from_labels(t_labels);

    // empirical coarse CPT from counts
    std::vector<std::size_t> sample_effect_class(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        sample_effect_class[i] =
            effect_partition.class_of(effect_space.index_of(data.effect_labels[i]));
    }
    Cpt coarse = detail::empirical_coarse_cpt(sample_cluster, sample_effect_class,
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

CoarseningResult run_cfl_continuous(const SampleSet& data, const ClusterConfig& cfg) {
    data.validate();
    if (!data.continuous()) throw InputError("run_cfl_continuous expects vector samples");
    const std::size_t n = data.size();
    if (n == 0) throw InputError("empty sample set");
    if (cfg.knn_k > n) throw ConfigError("knn_k exceeds the sample count");

    // kNN conditional-mean regression over cause vectors
    const std::size_t edim = data.effect_vectors.front().size();
    std::vector<std::vector<double>> f(n, std::vector<double>(edim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t j = 0; j < n; ++j) {
            dist[j] = {sq_distance(data.cause_vectors[i], data.cause_vectors[j]), j};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(cfg.knn_k),
                          dist.end());
        for (std::size_t t = 0; t < cfg.knn_k; ++t) {
            for (std::size_t d = 0; d < edim; ++d) {
                f[i][d] += data.effect_vectors[dist[t].second][d];
            }
        }
        for (double& v : f[i]) v /= static_cast<double>(cfg.knn_k);
    }

    const auto w_labels = cluster(f, cfg);
    Partition cause_partition = Partition::from_labels(w_labels);
    const auto g = knn_features(data, w_labels, cfg.knn_k);
    const auto t_labels = cluster(g, cfg);
    Partition effect_partition = Partition::from_labels(t_labels);

    std::vector<std::string> sample_names(n);
    for (std::size_t i = 0; i < n; ++i) sample_names[i] = "s" + std::to_string(i);
    ValueSpace sample_space(sample_names);
    std::vector<double> flat;  // representative scalar per sample (first component)
    flat.reserve(n);
    for (const auto& v : f) flat.push_back(v.front());
    // short class names; joined sample labels would be unwieldy here
    std::vector<std::string> wnames, tnames;
    for (std::size_t c = 0; c < cause_partition.num_classes(); ++c) {
        wnames.push_back("W" + std::to_string(c));
    }
    for (std::size_t c = 0; c < effect_partition.num_classes(); ++c) {
        tnames.push_back("T" + std::to_string(c));
    }
    Cpt coarse = detail::empirical_coarse_cpt(w_labels, t_labels, ValueSpace(wnames),
                                              ValueSpace(tnames), cfg.laplace_alpha);
    return CoarseningResult{sample_space,          sample_space,
                            std::move(cause_partition), std::move(effect_partition),
                            std::move(coarse),     std::move(flat),
                            g};
}

}  // namespace pcfl
