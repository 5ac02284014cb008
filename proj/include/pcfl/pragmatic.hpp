#ifndef PCFL_PRAGMATIC_HPP
#define PCFL_PRAGMATIC_HPP

#include "pcfl/cfl.hpp"
#include "pcfl/core.hpp"

namespace pcfl {

// Per-cause-value mean observed utility, the empirical observational
// expected utility. Unlike the conditional-mean heuristic of Algorithm 1,
// equality of these means is exactly observational pragmatic equivalence.
std::map<std::string, double> regress_conditional_utility(const SampleSet& data);

// Utility profile [u(c_1, e), ..., u(c_m, e)] per distinct effect value,
// taken from `util` when supplied, otherwise from the observed per-pair mean
// utilities (every (cause, effect) pair must then be covered).
std::vector<std::vector<double>> effect_utility_profiles(const SampleSet& data,
                                                         const ValueSpace& cause_space,
                                                         const ValueSpace& effect_space,
                                                         const UtilityTable* util = nullptr);

// Algorithm-2 PCFL on (cause, effect, utility) samples.
CoarseningResult run_pcfl(const SampleSet& data, const ClusterConfig& cfg,
                          const UtilityTable* util = nullptr);

// Continuous-mode PCFL: cause clusters from a kNN regression of utility on
// the cause vectors, effect clusters from the per-sample utilities.
CoarseningResult run_pcfl_continuous(const SampleSet& data, const ClusterConfig& cfg);

// Radial-basis utility of a temperature reading: y is rounded to the first
// decimal, then u = shift + exp(-(y* - mean)^2 / bandwidth) / sqrt(bandwidth*pi).
// The exponent is negative so the kernel peaks at `mean` and decays in the
// tails; utilities are independent of the cause value.
double rbf_utility(double y, double mean = 26.0, double bandwidth = 0.02, double shift = -1.0);

}  // namespace pcfl

#endif
