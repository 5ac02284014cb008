#include "pcfl/equiv.hpp"

#include <algorithm>
#include <cmath>

namespace pcfl {

namespace {

void require_kind(const Cpt& cpt, CptKind kind, const char* op) {
    if (cpt.kind() != kind) {
        throw KindError(std::string(op) + " requires a " +
                        (kind == CptKind::interventional ? "interventional" : "observational") +
                        " CPT");
    }
}

void require_matching_spaces(const Cpt& cpt, const UtilityTable& util) {
    if (!(cpt.cause_space() == util.cause_space()) ||
        !(cpt.effect_space() == util.effect_space())) {
        throw ShapeError("CPT and utility table are over different value spaces");
    }
}

Partition merge_rows(const Cpt& cpt, double tol) {
    const std::size_t m = cpt.num_causes();
    UnionFind uf(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
            bool equal = true;
            for (std::size_t i = 0; i < cpt.num_effects() && equal; ++i) {
                equal = std::abs(cpt.at(j, i) - cpt.at(k, i)) <= tol;
            }
            if (equal) uf.unite(j, k);
        }
    }
    return uf.to_partition();
}

Partition merge_columns(const std::size_t n_cols, const std::size_t n_rows, double tol,
                        const auto& at) {
    UnionFind uf(n_cols);
    for (std::size_t i = 0; i < n_cols; ++i) {
        for (std::size_t s = i + 1; s < n_cols; ++s) {
            bool equal = true;
            for (std::size_t j = 0; j < n_rows && equal; ++j) {
                equal = std::abs(at(j, i) - at(j, s)) <= tol;
            }
            if (equal) uf.unite(i, s);
        }
    }
    return uf.to_partition();
}

// One class of expected-utility maximizers (within tol of the max), one
// class of everything else.
Partition maximizer_split(const std::vector<double>& eu, double tol) {
    const double eta = *std::max_element(eu.begin(), eu.end());
    std::vector<std::size_t> labels(eu.size());
    for (std::size_t j = 0; j < eu.size(); ++j) {
        labels[j] = (eta - eu[j] <= tol) ? 0 : 1;
    }
    return Partition::from_labels(labels);
}

Partition merge_by_scalar(const std::vector<double>& values, double tol) {
    UnionFind uf(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        for (std::size_t k = j + 1; k < values.size(); ++k) {
            if (std::abs(values[j] - values[k]) <= tol) uf.unite(j, k);
        }
    }
    return uf.to_partition();
}

}  // namespace

ExpectedUtilityProfile expected_utilities(const Cpt& cpt, const UtilityTable& util) {
    require_matching_spaces(cpt, util);
    ExpectedUtilityProfile profile;
    profile.kind = cpt.kind();
    profile.values.resize(cpt.num_causes(), 0.0);
    for (std::size_t j = 0; j < cpt.num_causes(); ++j) {
        double eu = 0.0;
        for (std::size_t i = 0; i < cpt.num_effects(); ++i) {
            eu += util.at(j, i) * cpt.at(j, i);
        }
        profile.values[j] = eu;
    }
    if (cpt.kind() == CptKind::interventional) {
        profile.eta = *std::max_element(profile.values.begin(), profile.values.end());
    }
    return profile;
}

Partition causal_coarsening(const Cpt& int_cpt, double tol) {
    require_kind(int_cpt, CptKind::interventional, "causal_coarsening");
    return merge_rows(int_cpt, tol);
}

Partition effect_coarsening(const Cpt& int_cpt, double tol) {
    require_kind(int_cpt, CptKind::interventional, "effect_coarsening");
    return merge_columns(int_cpt.num_effects(), int_cpt.num_causes(), tol,
                         [&](std::size_t j, std::size_t i) { return int_cpt.at(j, i); });
}

Partition observational_causal_coarsening(const Cpt& obs_cpt, double tol) {
    require_kind(obs_cpt, CptKind::observational, "observational_causal_coarsening");
    return merge_rows(obs_cpt, tol);
}

Partition observational_effect_coarsening(const Cpt& obs_cpt, double tol) {
    require_kind(obs_cpt, CptKind::observational, "observational_effect_coarsening");
    return merge_columns(obs_cpt.num_effects(), obs_cpt.num_causes(), tol,
                         [&](std::size_t j, std::size_t i) { return obs_cpt.at(j, i); });
}

Partition pragmatic_causal_coarsening(const Cpt& int_cpt, const UtilityTable& util, double tol) {
    require_kind(int_cpt, CptKind::interventional, "pragmatic_causal_coarsening");
    const auto profile = expected_utilities(int_cpt, util);
    return maximizer_split(profile.values, tol);
}

Partition pragmatic_effect_coarsening(const UtilityTable& util, double tol) {
    return merge_columns(util.effect_space().size(), util.cause_space().size(), tol,
                         [&](std::size_t j, std::size_t i) { return util.at(j, i); });
}

Partition observational_pragmatic_causal_coarsening(const Cpt& obs_cpt, const UtilityTable& util,
                                                    double tol) {
    require_kind(obs_cpt, CptKind::observational, "observational_pragmatic_causal_coarsening");
    const auto profile = expected_utilities(obs_cpt, util);
    return merge_by_scalar(profile.values, tol);
}

PipelineResult pragmatic_pipeline(const ConfoundedJoint& joint, const UtilityTable& util,
                                  double tol) {
    const Cpt obs = observational_cpt(joint);
    const auto marginal = cause_marginal(joint);
    const Partition opc = observational_pragmatic_causal_coarsening(obs, util, tol);

    // Intervene on each coarse value: a coarse intervention is modeled as a
    // mixture over the merged fine values weighted by their marginals.
    const Cpt fine_int = interventional_cpt(joint);
    std::vector<double> coarse_eu(opc.num_classes(), 0.0);
    for (std::size_t a = 0; a < opc.num_classes(); ++a) {
        const auto& cls = opc.classes()[a];
        double mass = 0.0;
        for (std::size_t j : cls) mass += marginal[j];
        if (mass <= 0.0) {
            throw DegenerateClassError("coarse cause class has zero marginal mass");
        }
        for (std::size_t j : cls) {
            double eu = 0.0;
            for (std::size_t i = 0; i < fine_int.num_effects(); ++i) {
                eu += util.at(j, i) * fine_int.at(j, i);
            }
            coarse_eu[a] += (marginal[j] / mass) * eu;
        }
    }
    const Partition coarse_pc = maximizer_split(coarse_eu, tol);

    // Lift the maximizer split back to fine values.
    std::vector<std::size_t> fine_labels(joint.num_causes());
    for (std::size_t j = 0; j < joint.num_causes(); ++j) {
        fine_labels[j] = coarse_pc.class_of(opc.class_of(j));
    }
    Partition pc = Partition::from_labels(fine_labels);
    Partition pe = pragmatic_effect_coarsening(util, tol);
    Cpt coarse = coarsen_cpt(fine_int, pc, pe, marginal);
    return PipelineResult{std::move(pc), std::move(pe), std::move(coarse)};
}

}  // namespace pcfl
