#ifndef PCFL_TABLES_HPP
#define PCFL_TABLES_HPP

#include "pcfl/core.hpp"

namespace pcfl::tables {

// Interventional mortality CPT for the smoking decision example.
inline Cpt smoking_cpt() {
    ValueSpace causes({"Marlboro", "Other", "Nothing"});
    ValueSpace effects({"[0,49]", "[50,69]", "[70,90]", "[90,Inf]"});
    return Cpt(causes, effects,
               {{.026, .25, .698, .026}, {.024, .25, .702, .024}, {.001, .05, .948, .001}},
               CptKind::interventional);
}

// Utilities for the smoking decision.
inline UtilityTable smoking_utility() {
    ValueSpace causes({"Marlboro", "Other", "Nothing"});
    ValueSpace effects({"[0,49]", "[50,69]", "[70,90]", "[90,Inf]"});
    return UtilityTable(causes, effects,
                        {{-950, 1100, 2100, 2150}, {-990, 1050, 2050, 2145},
                         {-1000, 1000, 2000, 2050}});
}

// Observational conditionals of the simulated network.
inline Cpt fig1_cpt() {
    ValueSpace values({"-2", "-1", "1", "2"});
    return Cpt(values, values,
               {{.248, .189, .315, .248},
                {.252, .248, .248, .252},
                {.252, .248, .248, .252},
                {.248, .315, .189, .248}},
               CptKind::observational);
}

// Utility matrix for the simulated network.
inline UtilityTable fig1_utility() {
    ValueSpace values({"-2", "-1", "1", "2"});
    return UtilityTable(values, values, {{1, 2, 2, 4}, {8, 5, 5, 0}, {5, 8, 8, 9}, {4, 2, 2, 1}});
}

// Expected coarse conditionals after the probabilistic cause/effect merges
// ({-1,1} on the cause side, {-2,2} on the effect side), uniform marginal.
inline Cpt fig1_cfl_expected() {
    ValueSpace causes({"-2", "-1∨" "1", "2"});
    ValueSpace effects({"-2∨" "2", "-1", "1"});
    return Cpt(causes, effects,
               {{.496, .189, .315}, {.504, .248, .248}, {.496, .315, .189}},
               CptKind::observational);
}

// Expected coarse conditionals after the pragmatic merges ({-2,2} cause
// side, {-1,1} effect side), uniform marginal.
inline Cpt fig1_pcfl_expected() {
    ValueSpace causes({"-2∨" "2", "-1", "1"});
    ValueSpace effects({"-2", "-1∨" "1", "2"});
    return Cpt(causes, effects,
               {{.248, .504, .248}, {.252, .496, .252}, {.252, .496, .252}},
               CptKind::observational);
}

}  // namespace pcfl::tables

#endif
