#ifndef PCFL_EQUIV_HPP
#define PCFL_EQUIV_HPP

#include <optional>

#include "pcfl/core.hpp"
#include "pcfl/dist.hpp"

namespace pcfl {

// Per-cause-value expected utilities; eta is the maximum and is only
// meaningful for interventional profiles.
struct ExpectedUtilityProfile {
    std::vector<double> values;
    CptKind kind;
    std::optional<double> eta;
};

// entry j = <utility row j, probability row j>.
ExpectedUtilityProfile expected_utilities(const Cpt& cpt, const UtilityTable& util);

// Cause values merged iff their interventional rows agree entrywise within
// tol (transitively closed). Tolerance-based equality is not transitive, so
// keep tol below half the smallest true row gap.
Partition causal_coarsening(const Cpt& int_cpt, double tol = kDefaultTolerance);

// Effect values merged iff their columns agree under every intervention.
Partition effect_coarsening(const Cpt& int_cpt, double tol = kDefaultTolerance);

// Row test on an observational CPT.
Partition observational_causal_coarsening(const Cpt& obs_cpt, double tol = kDefaultTolerance);

// Column test on an observational CPT.
Partition observational_effect_coarsening(const Cpt& obs_cpt, double tol = kDefaultTolerance);

// Binary quotient: the set of expected-utility maximizers (within tol of
// eta) forms one class, all other values the other.
Partition pragmatic_causal_coarsening(const Cpt& int_cpt, const UtilityTable& util,
                                      double tol = kDefaultTolerance);

// Effect values merged iff their utilities agree under every cause value.
// Probability-independent.
Partition pragmatic_effect_coarsening(const UtilityTable& util, double tol = kDefaultTolerance);

// Cause values merged iff their observational expected utilities agree; no
// reference to the maximum.
Partition observational_pragmatic_causal_coarsening(const Cpt& obs_cpt, const UtilityTable& util,
                                                    double tol = kDefaultTolerance);

struct PipelineResult {
    Partition cause_partition;   // pragmatic causal coarsening, over fine values
    Partition effect_partition;  // pragmatic effect coarsening
    Cpt coarse_cpt;              // interventional CPT over the coarse pair
};

// The observational-then-interventional learning procedure: coarsen by
// observational expected utility, intervene on each coarse value (mixture
// over its members weighted by the fine cause marginal), split into
// maximizers vs the rest, and lift back to fine values.
PipelineResult pragmatic_pipeline(const ConfoundedJoint& joint, const UtilityTable& util,
                                  double tol = kDefaultTolerance);

}  // namespace pcfl

#endif
