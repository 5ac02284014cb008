#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pcfl/equiv.hpp"
#include "pcfl/montecarlo.hpp"
#include "pcfl/tables.hpp"

using namespace pcfl;

namespace {

Cpt fig1_as_interventional() {
    const Cpt obs = tables::fig1_cpt();
    return Cpt(obs.cause_space(), obs.effect_space(), obs.rows(), CptKind::interventional);
}

Partition brute_row_partition(const Cpt& cpt, double tol) {
    const std::size_t m = cpt.num_causes();
    std::vector<std::vector<bool>> eq(m, std::vector<bool>(m, false));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            bool same = true;
            for (std::size_t i = 0; i < cpt.num_effects(); ++i) {
                if (std::abs(cpt.at(j, i) - cpt.at(k, i)) > tol) same = false;
            }
            eq[j][k] = same;
        }
    }
    return partition_from_pairs(cpt.cause_space(), eq);
}

UtilityTable scaled(const UtilityTable& util, double a, double b) {
    auto values = util.values();
    for (auto& row : values) {
        for (double& v : row) v = a * v + b;
    }
    return UtilityTable(util.cause_space(), util.effect_space(), std::move(values));
}

std::vector<double> uniform(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

Partition permute(const Partition& part, const std::vector<std::size_t>& perm) {
    // perm maps old index -> new index
    std::vector<std::size_t> labels(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) labels[perm[i]] = part.class_of(i);
    return Partition::from_labels(labels);
}

}  // namespace

TEST_CASE("smoking expected utilities and eta") {
    const auto profile = expected_utilities(tables::smoking_cpt(), tables::smoking_utility());
    REQUIRE(profile.values.size() == 3);
    CHECK(profile.values[0] == doctest::Approx(1772.00).epsilon(1e-12));
    CHECK(profile.values[1] == doctest::Approx(1729.32).epsilon(1e-12));
    CHECK(profile.values[2] == doctest::Approx(1947.05).epsilon(1e-12));
    REQUIRE(profile.eta.has_value());
    CHECK(*profile.eta == doctest::Approx(1947.05).epsilon(1e-12));
    CHECK(profile.kind == CptKind::interventional);
}

TEST_CASE("observational profiles carry no eta") {
    const auto profile = expected_utilities(tables::fig1_cpt(), tables::fig1_utility());
    CHECK_FALSE(profile.eta.has_value());
    CHECK(profile.values[0] == doctest::Approx(2.248).epsilon(1e-12));
    CHECK(profile.values[1] == doctest::Approx(4.496).epsilon(1e-12));
    CHECK(profile.values[2] == doctest::Approx(7.496).epsilon(1e-12));
    CHECK(profile.values[3] == doctest::Approx(2.248).epsilon(1e-12));
}

TEST_CASE("zero utility table gives a zero profile") {
    const Cpt cpt = tables::smoking_cpt();
    UtilityTable zero(cpt.cause_space(), cpt.effect_space(),
                      std::vector<std::vector<double>>(3, std::vector<double>(4, 0.0)));
    for (double v : expected_utilities(cpt, zero).values) CHECK(v == 0.0);
}

TEST_CASE("causal coarsening") {
    SUBCASE("smoking rows all differ") {
        CHECK(causal_coarsening(tables::smoking_cpt()) == Partition::singletons(3));
    }
    SUBCASE("fig1 rows merge the middle values") {
        CHECK(causal_coarsening(fig1_as_interventional()) == Partition(4, {{0}, {1, 2}, {3}}));
    }
    SUBCASE("identical rows collapse to one class") {
        ValueSpace c({"a", "b"});
        ValueSpace e({"x", "y"});
        Cpt cpt(c, e, {{0.4, 0.6}, {0.4, 0.6}}, CptKind::interventional);
        CHECK(causal_coarsening(cpt) == Partition(2, {{0, 1}}));
    }
    SUBCASE("wrong kind is rejected") {
        CHECK_THROWS_AS((void)causal_coarsening(tables::fig1_cpt()), KindError);
    }
}

TEST_CASE("effect coarsening") {
    SUBCASE("smoking merges the extreme age bands") {
        CHECK(effect_coarsening(tables::smoking_cpt()) == Partition(4, {{0, 3}, {1}, {2}}));
    }
    SUBCASE("fig1 merges the extreme values") {
        CHECK(effect_coarsening(fig1_as_interventional()) == Partition(4, {{0, 3}, {1}, {2}}));
    }
    SUBCASE("single-cause CPT with distinct entries stays singleton") {
        Cpt cpt(ValueSpace({"a"}), ValueSpace({"x", "y"}), {{0.3, 0.7}},
                CptKind::interventional);
        CHECK(effect_coarsening(cpt) == Partition::singletons(2));
    }
}

TEST_CASE("observational variants match the row/column tests") {
    const Cpt obs = tables::fig1_cpt();
    CHECK(observational_causal_coarsening(obs) == Partition(4, {{0}, {1, 2}, {3}}));
    CHECK(observational_effect_coarsening(obs) == Partition(4, {{0, 3}, {1}, {2}}));
    CHECK_THROWS_AS((void)observational_causal_coarsening(fig1_as_interventional()), KindError);

    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 100; ++trial) {
        const auto joint = sample_joint(JointDims{4, 3, 2}, rng);
        const Cpt cpt = observational_cpt(joint);
        CHECK(observational_causal_coarsening(cpt, 1e-6) == brute_row_partition(cpt, 1e-6));
    }
}

TEST_CASE("pragmatic causal coarsening splits on the maximizer set") {
    SUBCASE("smoking merges the two smoking options") {
        CHECK(pragmatic_causal_coarsening(tables::smoking_cpt(), tables::smoking_utility()) ==
              Partition(3, {{0, 1}, {2}}));
    }
    SUBCASE("fig1 interventional analog isolates the unique maximizer") {
        CHECK(pragmatic_causal_coarsening(fig1_as_interventional(), tables::fig1_utility()) ==
              Partition(4, {{0, 1, 3}, {2}}));
    }
    SUBCASE("constant utility collapses everything") {
        const Cpt cpt = tables::smoking_cpt();
        UtilityTable constant(cpt.cause_space(), cpt.effect_space(),
                              std::vector<std::vector<double>>(3, std::vector<double>(4, 7.0)));
        CHECK(pragmatic_causal_coarsening(cpt, constant) == Partition(3, {{0, 1, 2}}));
    }
    SUBCASE("at most two classes, always") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 200; ++trial) {
            const auto joint = sample_joint(JointDims{5, 4, 2}, rng);
            const auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
            const auto part = pragmatic_causal_coarsening(interventional_cpt(joint), util);
            CHECK(part.num_classes() <= 2);
            CHECK(part.num_classes() >= 1);
        }
    }
}

TEST_CASE("pragmatic effect coarsening compares utility columns") {
    SUBCASE("smoking utilities keep all four bands apart") {
        const auto part = pragmatic_effect_coarsening(tables::smoking_utility());
        CHECK(part == Partition::singletons(4));
        CHECK(part.class_of(0) != part.class_of(3));
    }
    SUBCASE("fig1 utilities merge the middle effects") {
        CHECK(pragmatic_effect_coarsening(tables::fig1_utility()) ==
              Partition(4, {{0}, {1, 2}, {3}}));
    }
    SUBCASE("constant table collapses") {
        ValueSpace c({"a"});
        ValueSpace e({"x", "y", "z"});
        CHECK(pragmatic_effect_coarsening(UtilityTable(c, e, {{1, 1, 1}})) ==
              Partition(3, {{0, 1, 2}}));
    }
}

TEST_CASE("observational pragmatic causal coarsening merges on equal observational EU") {
    SUBCASE("fig1 ties the two extreme causes") {
        CHECK(observational_pragmatic_causal_coarsening(tables::fig1_cpt(),
                                                        tables::fig1_utility()) ==
              Partition(4, {{0, 3}, {1}, {2}}));
    }
    SUBCASE("random instances match the brute-force pairwise test") {
        std::mt19937_64 rng(808);
        for (int trial = 0; trial < 200; ++trial) {
            const auto joint = sample_joint(JointDims{4, 4, 3}, rng);
            const auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
            const Cpt obs = observational_cpt(joint);
            const auto profile = expected_utilities(obs, util);
            std::vector<std::vector<bool>> eq(4, std::vector<bool>(4));
            for (std::size_t j = 0; j < 4; ++j) {
                for (std::size_t k = 0; k < 4; ++k) {
                    eq[j][k] = std::abs(profile.values[j] - profile.values[k]) <= 1e-9;
                }
            }
            CHECK(observational_pragmatic_causal_coarsening(obs, util) ==
                  partition_from_pairs(obs.cause_space(), eq));
        }
    }
}

TEST_CASE("affine utility changes leave the pragmatic partitions alone") {
    std::mt19937_64 rng(616);
    for (int trial = 0; trial < 100; ++trial) {
        const auto joint = sample_joint(JointDims{4, 3, 2}, rng);
        const auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
        std::uniform_real_distribution<double> amp(0.1, 5.0), off(-10.0, 10.0);
        const UtilityTable shifted = scaled(util, amp(rng), off(rng));
        const Cpt inter = interventional_cpt(joint);
        const Cpt obs = observational_cpt(joint);
        // affine-covariant tolerance keeps the relations identical
        CHECK(pragmatic_causal_coarsening(inter, util, 1e-9) ==
              pragmatic_causal_coarsening(inter, shifted, 1e-9));
        CHECK(pragmatic_effect_coarsening(util, 1e-9) ==
              pragmatic_effect_coarsening(shifted, 1e-9));
        CHECK(observational_pragmatic_causal_coarsening(obs, util, 1e-9) ==
              observational_pragmatic_causal_coarsening(obs, shifted, 1e-9));
    }
}

TEST_CASE("relabeling values permutes the partitions") {
    std::mt19937_64 rng(99);
    const auto joint = sample_joint(JointDims{4, 4, 2}, rng);
    const auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
    const Cpt inter = interventional_cpt(joint);

    std::vector<std::size_t> perm = {2, 0, 3, 1};  // old cause index -> new index
    std::vector<std::string> labels(4);
    std::vector<std::vector<double>> rows(4);
    std::vector<std::vector<double>> uvalues(4);
    for (std::size_t j = 0; j < 4; ++j) {
        labels[perm[j]] = inter.cause_space().label(j);
        rows[perm[j]] = inter.row(j);
        uvalues[perm[j]] = util.row(j);
    }
    const Cpt permuted(ValueSpace(labels), inter.effect_space(), rows, CptKind::interventional);
    const UtilityTable permuted_util(ValueSpace(labels), util.effect_space(), uvalues);

    CHECK(causal_coarsening(permuted) == permute(causal_coarsening(inter), perm));
    CHECK(pragmatic_causal_coarsening(permuted, permuted_util) ==
          permute(pragmatic_causal_coarsening(inter, util), perm));
}

TEST_CASE("expected utility is preserved by the pragmatic effect coarsening") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        const auto joint = sample_joint(JointDims{3, 4, 2}, rng);
        auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
        // force a pe-equivalent pair so the partition is nontrivial
        auto values = util.values();
        for (std::size_t j = 0; j < 3; ++j) values[j][3] = values[j][1];
        util = UtilityTable(joint.cause_space(), joint.effect_space(), values);

        const Cpt inter = interventional_cpt(joint);
        const auto pe = pragmatic_effect_coarsening(util);
        REQUIRE(pe.num_classes() < 4);
        const auto marginal = cause_marginal(joint);
        const Cpt coarse = coarsen_cpt(inter, Partition::singletons(3), pe, marginal);
        const UtilityTable coarse_util =
            coarsen_utility(util, Partition::singletons(3), pe, marginal, &inter);
        const auto fine = expected_utilities(inter, util);
        const auto merged = expected_utilities(coarse, coarse_util);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(fine.values[j] - merged.values[j]) < 1e-9);
        }
    }
}

TEST_CASE("eta is preserved by the pragmatic causal coarsening") {
    std::mt19937_64 rng(1618);
    for (int trial = 0; trial < 100; ++trial) {
        const auto joint = sample_joint(JointDims{4, 3, 2}, rng);
        const auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
        const Cpt inter = interventional_cpt(joint);
        const auto pc = pragmatic_causal_coarsening(inter, util);
        const auto marginal = cause_marginal(joint);
        const Cpt coarse = coarsen_cpt(inter, pc, Partition::singletons(3), marginal);
        const UtilityTable coarse_util =
            coarsen_utility(util, pc, Partition::singletons(3), marginal, &inter);
        const auto fine = expected_utilities(inter, util);
        const auto merged = expected_utilities(coarse, coarse_util);
        CHECK(std::abs(*fine.eta - *merged.eta) < 1e-9);
    }
}

TEST_CASE("coarsening operations are idempotent") {
    const Cpt inter = fig1_as_interventional();
    const auto cp = causal_coarsening(inter);
    const auto ep = effect_coarsening(inter);
    const Cpt coarse = coarsen_cpt(inter, cp, ep, uniform(4));
    CHECK(causal_coarsening(coarse) == Partition::singletons(cp.num_classes()));
    CHECK(effect_coarsening(coarse) == Partition::singletons(ep.num_classes()));
}

TEST_CASE("pragmatic pipeline") {
    SUBCASE("fig1: pipeline agrees with the direct pragmatic partition") {
        const auto joint = build_fig1_scm();
        const auto util = tables::fig1_utility();
        const auto result = pragmatic_pipeline(joint, util, 1e-6);
        const auto direct = pragmatic_causal_coarsening(interventional_cpt(joint), util, 1e-6);
        CHECK(result.cause_partition == direct);
        CHECK(result.effect_partition == pragmatic_effect_coarsening(util));
        CHECK(refines(result.cause_partition,
                      observational_pragmatic_causal_coarsening(observational_cpt(joint), util,
                                                                1e-6)));
        CHECK(result.coarse_cpt.kind() == CptKind::interventional);
    }
    SUBCASE("unconfounded joints reduce to the direct computation") {
        std::mt19937_64 rng(404);
        for (int trial = 0; trial < 50; ++trial) {
            auto joint = sample_joint(JointDims{3, 3, 1}, rng);
            const auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
            const auto result = pragmatic_pipeline(joint, util);
            CHECK(result.cause_partition ==
                  pragmatic_causal_coarsening(interventional_cpt(joint), util));
        }
    }
    SUBCASE("constant utility collapses to a single cell") {
        const auto joint = build_fig1_scm();
        UtilityTable constant(joint.cause_space(), joint.effect_space(),
                              std::vector<std::vector<double>>(4, std::vector<double>(4, 1.0)));
        const auto result = pragmatic_pipeline(joint, constant);
        CHECK(result.cause_partition.num_classes() == 1);
        CHECK(result.effect_partition.num_classes() == 1);
        CHECK(result.coarse_cpt.at(0, 0) == doctest::Approx(1.0));
    }
}
