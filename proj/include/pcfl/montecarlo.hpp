#ifndef PCFL_MONTECARLO_HPP
#define PCFL_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pcfl/core.hpp"
#include "pcfl/dist.hpp"

namespace pcfl {

struct JointDims {
    std::size_t n_causes = 2;
    std::size_t n_effects = 2;
    std::size_t n_confounders = 2;
};

// Counts for one epsilon level of the proposition-2 probe.
struct EpsRow {
    double eps = 0.0;
    std::uint64_t flagged = 0;     // approximate opc-equivalent pairs
    std::uint64_t violations = 0;  // flagged pairs split by the maximizer boundary
    double rate = 0.0;             // violations / flagged (0 when nothing flagged)
};

struct Prop2Report {
    JointDims dims;
    std::uint64_t trials = 0;
    double delta = 1e-6;
    std::uint64_t seed = 0;
    std::vector<EpsRow> rows;

    std::string to_json() const;
    std::string to_csv() const;
};

// Deterministic per-trial seed stream derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

// Uniform draw from the probability simplex (exponential spacings).
std::vector<double> sample_simplex(std::size_t dim, std::mt19937_64& rng);

// Joint with every constituent distribution drawn uniformly from its simplex.
ConfoundedJoint sample_joint(const JointDims& dims, std::mt19937_64& rng);

// i.i.d. uniform utilities on [0, umax].
UtilityTable sample_utility(const ValueSpace& cause_space, const ValueSpace& effect_space,
                            std::mt19937_64& rng, double umax = 10.0);

// Joint + utility with an exact observational-pragmatic tie planted between
// two cause values by duplicating the corresponding iota slab, beta row, and
// utility row (beta columns renormalized afterwards).
struct PlantedTie {
    ConfoundedJoint joint;
    UtilityTable util;
    std::size_t first;
    std::size_t second;
};
PlantedTie sample_planted_opc_tie(const JointDims& dims, std::mt19937_64& rng,
                                  double umax = 10.0);

// The two-binary-confounder simulation network: Z1, Z2 ~ Bern(0.5) determine
// C in {-2,-1,1,2}; E | C, Z1 follows a softmax-linear model fitted so that
// the observed (C, Z1) cells reproduce the reference conditionals, with the
// four unobserved cells filled in from the fitted logits.
ConfoundedJoint build_fig1_scm();

// i.i.d. ancestral sampling (z, then c, then e); utilities attached by table
// lookup when a table is given.
SampleSet sample_dataset(const ConfoundedJoint& joint, std::size_t n, std::mt19937_64& rng,
                         const UtilityTable* util = nullptr);

// Per-pair probe outcome at one epsilon.
struct PairProbe {
    bool opc_flagged = false;  // observational EUs within eps
    bool pc_violation = false; // flagged and split by the eta boundary
};
PairProbe probe_pair(const ConfoundedJoint& joint, const UtilityTable& util, std::size_t j,
                     std::size_t k, double eps, double delta);

using UtilitySampler =
    std::function<UtilityTable(const ValueSpace&, const ValueSpace&, std::mt19937_64&)>;

// Random-joint probe of the measure-zero refinement claim: counts, per eps,
// how many approximately opc-equivalent cause pairs straddle the expected-
// utility maximizer boundary. Trials are seeded independently from `seed`,
// so the report is reproducible and the loop parallelizes.
Prop2Report prop2_probe(const JointDims& dims, std::uint64_t trials,
                        const std::vector<double>& eps_grid, double delta, std::uint64_t seed,
                        const UtilitySampler& util_sampler = nullptr);

}  // namespace pcfl

#endif
