#include "pcfl/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "pcfl/equiv.hpp"

namespace pcfl {

namespace {

ValueSpace indexed_space(const std::string& prefix, std::size_t n) {
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = prefix + std::to_string(i);
    return ValueSpace(std::move(labels));
}

std::size_t draw_categorical(const std::vector<double>& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double r = unif(rng);
    for (std::size_t i = 0; i < p.size(); ++i) {
        r -= p[i];
        if (r <= 0.0) return i;
    }
    return p.size() - 1;
}

// Gaussian elimination with partial pivoting; a is modified in place.
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) {
            throw SolverError("singular linear system in SCM construction");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri][c] * x[c];
        x[ri] = acc / a[ri][ri];
    }
    return x;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    // splitmix64 step on master + counter
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<double> sample_simplex(std::size_t dim, std::mt19937_64& rng) {
    if (dim == 0) throw ConfigError("simplex dimension must be at least 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> x(dim);
    double total = 0.0;
    for (double& v : x) {
        double u = unif(rng);
        while (u <= 0.0) u = unif(rng);
        v = -std::log(u);
        total += v;
    }
    for (double& v : x) v /= total;
    return x;
}

ConfoundedJoint sample_joint(const JointDims& dims, std::mt19937_64& rng) {
    if (dims.n_causes < 1 || dims.n_effects < 1 || dims.n_confounders < 1) {
        throw ConfigError("joint dimensions must be at least 1");
    }
    const std::size_t m = dims.n_causes;
    const std::size_t n = dims.n_effects;
    const std::size_t w = dims.n_confounders;
    std::vector<std::vector<std::vector<double>>> iota(
        n, std::vector<std::vector<double>>(w, std::vector<double>(m, 0.0)));
    for (std::size_t l = 0; l < w; ++l) {
        for (std::size_t j = 0; j < m; ++j) {
            const auto col = sample_simplex(n, rng);
            for (std::size_t i = 0; i < n; ++i) iota[i][l][j] = col[i];
        }
    }
    std::vector<std::vector<double>> beta(m, std::vector<double>(w, 0.0));
    for (std::size_t l = 0; l < w; ++l) {
        const auto col = sample_simplex(m, rng);
        for (std::size_t j = 0; j < m; ++j) beta[j][l] = col[j];
    }
    std::vector<double> gamma = sample_simplex(w, rng);
    return ConfoundedJoint(indexed_space("c", m), indexed_space("e", n), indexed_space("z", w),
                           std::move(iota), std::move(beta), std::move(gamma));
}

UtilityTable sample_utility(const ValueSpace& cause_space, const ValueSpace& effect_space,
                            std::mt19937_64& rng, double umax) {
    std::uniform_real_distribution<double> unif(0.0, umax);
    std::vector<std::vector<double>> values(cause_space.size(),
                                            std::vector<double>(effect_space.size(), 0.0));
    for (auto& row : values) {
        for (double& v : row) v = unif(rng);
    }
    return UtilityTable(cause_space, effect_space, std::move(values));
}

PlantedTie sample_planted_opc_tie(const JointDims& dims, std::mt19937_64& rng, double umax) {
    if (dims.n_causes < 2) throw ConfigError("planting a tie needs at least two cause values");
    const ConfoundedJoint base = sample_joint(dims, rng);
    const std::size_t m = dims.n_causes;
    const std::size_t n = dims.n_effects;
    const std::size_t w = dims.n_confounders;
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    const std::size_t j = pick(rng);
    std::size_t k = pick(rng);
    while (k == j) k = pick(rng);

    std::vector<std::vector<std::vector<double>>> iota(
        n, std::vector<std::vector<double>>(w, std::vector<double>(m, 0.0)));
    std::vector<std::vector<double>> beta(m, std::vector<double>(w, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < w; ++l) {
            for (std::size_t c = 0; c < m; ++c) {
                iota[i][l][c] = base.iota(i, l, c == k ? j : c);
            }
        }
    }
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t l = 0; l < w; ++l) beta[c][l] = base.beta(c == k ? j : c, l);
    }
    // renormalize the beta columns after the duplication; rows j and k stay
    // identical, which is what forces the exact ties
    for (std::size_t l = 0; l < w; ++l) {
        double sum = 0.0;
        for (std::size_t c = 0; c < m; ++c) sum += beta[c][l];
        for (std::size_t c = 0; c < m; ++c) beta[c][l] /= sum;
    }
    std::vector<double> gamma(w);
    for (std::size_t l = 0; l < w; ++l) gamma[l] = base.gamma(l);

    UtilityTable util = sample_utility(base.cause_space(), base.effect_space(), rng, umax);
    std::vector<std::vector<double>> uvalues = util.values();
    uvalues[k] = uvalues[j];
    return PlantedTie{ConfoundedJoint(base.cause_space(), base.effect_space(),
                                      base.confounder_space(), std::move(iota), std::move(beta),
                                      std::move(gamma)),
                      UtilityTable(base.cause_space(), base.effect_space(), std::move(uvalues)),
                      std::min(j, k), std::max(j, k)};
}

ConfoundedJoint build_fig1_scm() {
    const std::vector<std::string> value_labels = {"-2", "-1", "1", "2"};
    const std::vector<double> cause_codes = {-2.0, -1.0, 1.0, 2.0};
    // reference conditionals at the observed (C, Z1) cells
    const std::vector<std::vector<double>> observed = {
        {.248, .189, .315, .248},
        {.252, .248, .248, .252},
        {.252, .248, .248, .252},
        {.248, .315, .189, .248},
    };
    const std::vector<double> z_of_cause = {0.0, 0.0, 1.0, 1.0};

    // Least-squares fit of log(p_i / p_0) = da_i + c*db_i + z*dg_i over the
    // four observed cells (12 equations, 9 unknowns), via normal equations.
    constexpr std::size_t kUnknowns = 9;
    std::vector<std::vector<double>> ata(kUnknowns, std::vector<double>(kUnknowns, 0.0));
    std::vector<double> atb(kUnknowns, 0.0);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t i = 1; i < 4; ++i) {
            std::vector<double> row(kUnknowns, 0.0);
            row[i - 1] = 1.0;
            row[3 + i - 1] = cause_codes[r];
            row[6 + i - 1] = z_of_cause[r];
            const double y = std::log(observed[r][i] / observed[r][0]);
            for (std::size_t a = 0; a < kUnknowns; ++a) {
                for (std::size_t b = 0; b < kUnknowns; ++b) ata[a][b] += row[a] * row[b];
                atb[a] += row[a] * y;
            }
        }
    }
    const auto x = solve_linear(std::move(ata), std::move(atb));

    auto softmax_cell = [&](double c, double z) {
        std::vector<double> logits = {0.0, 0.0, 0.0, 0.0};
        for (std::size_t i = 1; i < 4; ++i) {
            logits[i] = x[i - 1] + c * x[3 + i - 1] + z * x[6 + i - 1];
        }
        const double mx = *std::max_element(logits.begin(), logits.end());
        double total = 0.0;
        for (double& v : logits) {
            v = std::exp(v - mx);
            total += v;
        }
        for (double& v : logits) v /= total;
        return logits;
    };

    std::vector<std::vector<std::vector<double>>> iota(
        4, std::vector<std::vector<double>>(2, std::vector<double>(4, 0.0)));
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t l = 0; l < 2; ++l) {
            const bool observed_cell = (static_cast<double>(l) == z_of_cause[j]);
            const auto p = observed_cell ? observed[j]
                                         : softmax_cell(cause_codes[j], static_cast<double>(l));
            for (std::size_t i = 0; i < 4; ++i) iota[i][l][j] = p[i];
        }
    }
    // C = f(Z1, Z2) with Z2 ~ Bern(0.5) marginalized out
    std::vector<std::vector<double>> beta = {
        {0.5, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {0.0, 0.5}};
    std::vector<double> gamma = {0.5, 0.5};
    return ConfoundedJoint(ValueSpace(value_labels), ValueSpace(value_labels),
                           ValueSpace({"0", "1"}), std::move(iota), std::move(beta),
                           std::move(gamma));
}

SampleSet sample_dataset(const ConfoundedJoint& joint, std::size_t n, std::mt19937_64& rng,
                         const UtilityTable* util) {
    if (n < 1) throw ConfigError("sample count must be at least 1");
    if (util != nullptr && (!(util->cause_space() == joint.cause_space()) ||
                            !(util->effect_space() == joint.effect_space()))) {
        throw ShapeError("utility table spaces do not match joint");
    }
    SampleSet out;
    out.cause_labels.reserve(n);
    out.effect_labels.reserve(n);
    if (util != nullptr) out.utilities.reserve(n);
    std::vector<double> gamma(joint.num_confounders());
    for (std::size_t l = 0; l < gamma.size(); ++l) gamma[l] = joint.gamma(l);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t z = draw_categorical(gamma, rng);
        std::vector<double> pc(joint.num_causes());
        for (std::size_t j = 0; j < pc.size(); ++j) pc[j] = joint.beta(j, z);
        const std::size_t c = draw_categorical(pc, rng);
        std::vector<double> pe(joint.num_effects());
        for (std::size_t i = 0; i < pe.size(); ++i) pe[i] = joint.iota(i, z, c);
        const std::size_t e = draw_categorical(pe, rng);
        out.cause_labels.push_back(joint.cause_space().label(c));
        out.effect_labels.push_back(joint.effect_space().label(e));
        if (util != nullptr) out.utilities.push_back(util->at(c, e));
    }
    return out;
}

PairProbe probe_pair(const ConfoundedJoint& joint, const UtilityTable& util, std::size_t j,
                     std::size_t k, double eps, double delta) {
    const auto obs = expected_utilities(observational_cpt(joint), util);
    const auto inter = expected_utilities(interventional_cpt(joint), util);
    PairProbe probe;
    probe.opc_flagged = std::abs(obs.values.at(j) - obs.values.at(k)) < eps;
    if (probe.opc_flagged) {
        const double eta = *inter.eta;
        const bool j_max = eta - inter.values.at(j) <= delta;
        const bool k_max = eta - inter.values.at(k) <= delta;
        probe.pc_violation = j_max != k_max;
    }
    return probe;
}

Prop2Report prop2_probe(const JointDims& dims, std::uint64_t trials,
                        const std::vector<double>& eps_grid, double delta, std::uint64_t seed,
                        const UtilitySampler& util_sampler) {
    for (std::size_t i = 1; i < eps_grid.size(); ++i) {
        if (eps_grid[i] >= eps_grid[i - 1]) {
            throw ConfigError("eps grid must be positive and strictly decreasing");
        }
    }
    if (eps_grid.empty() || eps_grid.back() <= 0.0) {
        throw ConfigError("eps grid must be positive and strictly decreasing");
    }
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");

    Prop2Report report;
    report.dims = dims;
    report.trials = trials;
    report.delta = delta;
    report.seed = seed;
    report.rows.resize(eps_grid.size());
    for (std::size_t i = 0; i < eps_grid.size(); ++i) report.rows[i].eps = eps_grid[i];

    for (std::uint64_t t = 0; t < trials; ++t) {
        std::mt19937_64 rng(derive_seed(seed, t));
        const ConfoundedJoint joint = sample_joint(dims, rng);
        const UtilityTable util =
            util_sampler ? util_sampler(joint.cause_space(), joint.effect_space(), rng)
                         : sample_utility(joint.cause_space(), joint.effect_space(), rng);
        const auto obs = expected_utilities(observational_cpt(joint), util);
        const auto inter = expected_utilities(interventional_cpt(joint), util);
        const double eta = *inter.eta;
        for (std::size_t j = 0; j < dims.n_causes; ++j) {
            for (std::size_t k = j + 1; k < dims.n_causes; ++k) {
                const double gap = std::abs(obs.values[j] - obs.values[k]);
                const bool j_max = eta - inter.values[j] <= delta;
                const bool k_max = eta - inter.values[k] <= delta;
                for (auto& row : report.rows) {
                    if (gap < row.eps) {
                        ++row.flagged;
                        if (j_max != k_max) ++row.violations;
                    }
                }
            }
        }
    }
    for (auto& row : report.rows) {
        row.rate = row.flagged == 0
                       ? 0.0
                       : static_cast<double>(row.violations) / static_cast<double>(row.flagged);
    }
    return report;
}

std::string Prop2Report::to_json() const {
    nlohmann::json doc;
    doc["dims"] = {{"causes", dims.n_causes},
                   {"effects", dims.n_effects},
                   {"confounders", dims.n_confounders}};
    doc["trials"] = trials;
    doc["delta"] = delta;
    doc["seed"] = seed;
    doc["note"] =
        "eps-relaxation curve: approximate opc ties vs maximizer-boundary splits; "
        "the exact-tie failure set has Lebesgue measure zero";
    auto& rows_json = doc["rows"];
    rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        rows_json.push_back({{"eps", row.eps},
                             {"flagged", row.flagged},
                             {"violations", row.violations},
                             {"rate", row.rate}});
    }
    return doc.dump(2);
}

std::string Prop2Report::to_csv() const {
    std::ostringstream out;
    out << "eps,flagged,violations,rate\n";
    for (const auto& row : rows) {
        out << row.eps << ',' << row.flagged << ',' << row.violations << ',' << row.rate << '\n';
    }
    return out.str();
}

}  // namespace pcfl
