#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "pcfl/dist.hpp"
#include "pcfl/montecarlo.hpp"
#include "pcfl/tables.hpp"

using namespace pcfl;

namespace {

// Full enumeration of p(c, e, z); everything else is marginalized from it.
struct BruteJoint {
    std::vector<std::vector<std::vector<double>>> p;  // [c][e][z]

    explicit BruteJoint(const ConfoundedJoint& joint)
        : p(joint.num_causes(),
            std::vector<std::vector<double>>(joint.num_effects(),
                                             std::vector<double>(joint.num_confounders()))) {
        for (std::size_t c = 0; c < joint.num_causes(); ++c) {
            for (std::size_t e = 0; e < joint.num_effects(); ++e) {
                for (std::size_t z = 0; z < joint.num_confounders(); ++z) {
                    p[c][e][z] = joint.iota(e, z, c) * joint.beta(c, z) * joint.gamma(z);
                }
            }
        }
    }

    double p_c(std::size_t c) const {
        double total = 0.0;
        for (const auto& row : p[c]) {
            for (double v : row) total += v;
        }
        return total;
    }

    double p_e_given_c(std::size_t e, std::size_t c) const {
        double num = 0.0;
        for (double v : p[c][e]) num += v;
        return num / p_c(c);
    }
};

// Mutilated joint under do(c): z keeps its prior, e follows iota.
double p_e_do_c(const ConfoundedJoint& joint, std::size_t e, std::size_t c) {
    double total = 0.0;
    for (std::size_t z = 0; z < joint.num_confounders(); ++z) {
        total += joint.iota(e, z, c) * joint.gamma(z);
    }
    return total;
}

double obs_eu(const BruteJoint& brute, const UtilityTable& util, std::size_t c) {
    double total = 0.0;
    for (std::size_t e = 0; e < util.effect_space().size(); ++e) {
        total += util.at(c, e) * brute.p_e_given_c(e, c);
    }
    return total;
}

ConfoundedJoint make_unconfounded(std::size_t w) {
    // beta independent of z: C and Z independent
    std::vector<std::vector<std::vector<double>>> iota(
        2, std::vector<std::vector<double>>(w, std::vector<double>(2)));
    for (std::size_t z = 0; z < w; ++z) {
        const double shift = 0.1 * static_cast<double>(z);
        iota[0][z][0] = 0.7 - shift;
        iota[1][z][0] = 0.3 + shift;
        iota[0][z][1] = 0.2 + shift;
        iota[1][z][1] = 0.8 - shift;
    }
    std::vector<std::vector<double>> beta(2, std::vector<double>(w));
    for (std::size_t z = 0; z < w; ++z) {
        beta[0][z] = 0.4;
        beta[1][z] = 0.6;
    }
    std::vector<double> gamma(w, 1.0 / static_cast<double>(w));
    ValueSpace zs(w == 1 ? std::vector<std::string>{"z0"}
                         : std::vector<std::string>{"z0", "z1"});
    return ConfoundedJoint(ValueSpace({"c0", "c1"}), ValueSpace({"e0", "e1"}), zs,
                           std::move(iota), std::move(beta), std::move(gamma));
}

}  // namespace

TEST_CASE("construction validates the simplexes") {
    auto joint = make_unconfounded(2);
    CHECK(joint.num_confounders() == 2);
    // iota column not summing to 1
    std::vector<std::vector<std::vector<double>>> iota(
        2, std::vector<std::vector<double>>(1, std::vector<double>(1)));
    iota[0][0][0] = 0.6;
    iota[1][0][0] = 0.6;
    CHECK_THROWS_AS(ConfoundedJoint(ValueSpace({"c"}), ValueSpace({"e0", "e1"}),
                                    ValueSpace({"z"}), iota, {{1.0}}, {1.0}),
                    InputError);
}

TEST_CASE("single confounder value means no confounding") {
    const auto joint = make_unconfounded(1);
    const Cpt inter = interventional_cpt(joint);
    const Cpt obs = observational_cpt(joint);
    CHECK(inter.kind() == CptKind::interventional);
    CHECK(obs.kind() == CptKind::observational);
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(inter.at(j, i) == doctest::Approx(obs.at(j, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("beta independent of z means observational equals interventional") {
    const auto joint = make_unconfounded(2);
    const Cpt inter = interventional_cpt(joint);
    const Cpt obs = observational_cpt(joint);
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(std::abs(inter.at(j, i) - obs.at(j, i)) < 1e-12);
        }
    }
}

TEST_CASE("degenerate gamma picks out one iota slab") {
    std::vector<std::vector<std::vector<double>>> iota(
        2, std::vector<std::vector<double>>(2, std::vector<double>(1)));
    iota[0][0][0] = 0.9;
    iota[1][0][0] = 0.1;
    iota[0][1][0] = 0.3;
    iota[1][1][0] = 0.7;
    ConfoundedJoint joint(ValueSpace({"c"}), ValueSpace({"e0", "e1"}), ValueSpace({"z0", "z1"}),
                          iota, {{1.0, 1.0}}, {1.0, 0.0});
    const Cpt inter = interventional_cpt(joint);
    CHECK(inter.at(0, 0) == doctest::Approx(0.9));
    CHECK(inter.at(0, 1) == doctest::Approx(0.1));
}

TEST_CASE("random joints match brute-force enumeration") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        const auto joint = sample_joint(JointDims{3, 3, 2}, rng);
        const BruteJoint brute(joint);
        const Cpt inter = interventional_cpt(joint);
        const Cpt obs = observational_cpt(joint);
        const auto marginal = cause_marginal(joint);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(marginal[j] == doctest::Approx(brute.p_c(j)).epsilon(1e-12));
            double isum = 0.0, osum = 0.0;
            for (std::size_t i = 0; i < 3; ++i) {
                CHECK(inter.at(j, i) == doctest::Approx(p_e_do_c(joint, i, j)).epsilon(1e-12));
                CHECK(obs.at(j, i) == doctest::Approx(brute.p_e_given_c(i, j)).epsilon(1e-12));
                isum += inter.at(j, i);
                osum += obs.at(j, i);
            }
            CHECK(isum == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(osum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero cause marginal is rejected by name") {
    std::vector<std::vector<std::vector<double>>> iota(
        2, std::vector<std::vector<double>>(1, std::vector<double>(2)));
    iota[0][0][0] = 0.5;
    iota[1][0][0] = 0.5;
    iota[0][0][1] = 0.5;
    iota[1][0][1] = 0.5;
    ConfoundedJoint joint(ValueSpace({"dead", "alive"}), ValueSpace({"e0", "e1"}),
                          ValueSpace({"z"}), iota, {{0.0}, {1.0}}, {1.0});
    CHECK_NOTHROW((void)interventional_cpt(joint));
    try {
        (void)observational_cpt(joint);
        FAIL("expected a zero-marginal error");
    } catch (const DegenerateClassError& err) {
        CHECK(std::string(err.what()).find("dead") != std::string::npos);
    }
}

TEST_CASE("fig1 construction reproduces the reference tables") {
    const auto joint = build_fig1_scm();
    const auto marginal = cause_marginal(joint);
    for (double v : marginal) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    const Cpt obs = observational_cpt(joint);
    const Cpt expected = tables::fig1_cpt();
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(obs.at(j, i) - expected.at(j, i)) < 1e-9);
        }
    }
}

TEST_CASE("constraint residual basics") {
    std::mt19937_64 rng(777);
    const auto joint = sample_joint(JointDims{3, 4, 2}, rng);

    SUBCASE("identical indices give zero") {
        const auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(eq_constraint_residual(joint, util, j, j)) < 1e-15);
        }
    }
    SUBCASE("constant utility gives zero for all pairs") {
        UtilityTable util(joint.cause_space(), joint.effect_space(),
                          {{3, 3, 3, 3}, {3, 3, 3, 3}, {3, 3, 3, 3}});
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < 3; ++k) {
                CHECK(std::abs(eq_constraint_residual(joint, util, j, k)) < 1e-12);
            }
        }
    }
}

TEST_CASE("constraint residual equals the EU gap scaled by the marginals") {
    std::mt19937_64 rng(424242);
    for (int trial = 0; trial < 200; ++trial) {
        const auto joint = sample_joint(JointDims{3, 3, 2}, rng);
        const auto util = sample_utility(joint.cause_space(), joint.effect_space(), rng);
        const BruteJoint brute(joint);
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < 3; ++k) {
                const double expected = (obs_eu(brute, util, j) - obs_eu(brute, util, k)) *
                                        brute.p_c(j) * brute.p_c(k);
                CHECK(eq_constraint_residual(joint, util, j, k) ==
                      doctest::Approx(expected).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("json round trip") {
    std::mt19937_64 rng(9);
    const auto joint = sample_joint(JointDims{2, 3, 2}, rng);
    const auto back = ConfoundedJoint::from_json(joint.to_json());
    CHECK(back.cause_space() == joint.cause_space());
    CHECK(back.effect_space() == joint.effect_space());
    CHECK(back.confounder_space() == joint.confounder_space());
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t z = 0; z < 2; ++z) {
            for (std::size_t c = 0; c < 2; ++c) {
                CHECK(back.iota(i, z, c) == doctest::Approx(joint.iota(i, z, c)).epsilon(1e-15));
            }
        }
    }
    CHECK_THROWS_AS(ConfoundedJoint::from_json("{not json"), InputError);
}
