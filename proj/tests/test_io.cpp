#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "json.hpp"
#include "pcfl/equiv.hpp"
#include "pcfl/io.hpp"
#include "pcfl/tables.hpp"

using namespace pcfl;

namespace {
const std::string kFixtures = PCFL_FIXTURE_DIR;
}

TEST_CASE("format names") {
    CHECK(parse_format("text") == ReportFormat::text);
    CHECK(parse_format("json") == ReportFormat::json);
    CHECK(parse_format("csv") == ReportFormat::csv);
    CHECK_THROWS_AS((void)parse_format("xml"), ConfigError);
}

TEST_CASE("sample csv parsing") {
    SUBCASE("minimal labeled file") {
        const auto data = parse_samples_csv_text("c,e\nMarlboro,70-90\n");
        REQUIRE(data.size() == 1);
        CHECK(data.cause_labels[0] == "Marlboro");
        CHECK(data.effect_labels[0] == "70-90");
        CHECK_FALSE(data.has_utilities());
    }
    SUBCASE("utilities parse as numbers") {
        const auto data = parse_samples_csv_text("c,e,u\na,x,2.5\n");
        REQUIRE(data.size() == 1);
        CHECK(data.utilities[0] == doctest::Approx(2.5));
    }
    SUBCASE("vector mode") {
        const auto data = parse_samples_csv_text("c_1,c_2,e_1,u\n1.0,2.0,3.0,4.0\n");
        REQUIRE(data.continuous());
        CHECK(data.cause_vectors[0] == std::vector<double>{1.0, 2.0});
        CHECK(data.effect_vectors[0] == std::vector<double>{3.0});
        CHECK(data.utilities[0] == doctest::Approx(4.0));
    }
    SUBCASE("ragged rows name the offending line") {
        try {
            (void)parse_samples_csv_text("c,e\na,x\nb\n", "bad.csv");
            FAIL("expected a parse error");
        } catch (const InputError& err) {
            const std::string what = err.what();
            CHECK(what.find("line 3") != std::string::npos);
            CHECK(what.find("bad.csv") != std::string::npos);
        }
    }
    SUBCASE("bad utility number names the line") {
        try {
            (void)parse_samples_csv_text("c,e,u\na,x,zonk\n");
            FAIL("expected a parse error");
        } catch (const InputError& err) {
            CHECK(std::string(err.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("bad headers are rejected") {
        CHECK_THROWS_AS((void)parse_samples_csv_text("x,y\na,b\n"), InputError);
        CHECK_THROWS_AS((void)parse_samples_csv_text(""), InputError);
        CHECK_THROWS_AS((void)parse_samples_csv_text("c,e\n"), InputError);
    }
}

TEST_CASE("sample csv round trip") {
    SampleSet data;
    data.cause_labels = {"a", "b", "a"};
    data.effect_labels = {"x", "y", "y"};
    data.utilities = {1.5, -2.0, 0.25};
    const auto back = parse_samples_csv_text(emit_samples_csv(data));
    CHECK(back.cause_labels == data.cause_labels);
    CHECK(back.effect_labels == data.effect_labels);
    CHECK(back.utilities == data.utilities);

    SampleSet vec;
    vec.cause_vectors = {{1.25, -3.5}, {0.0, 2.0}};
    vec.effect_vectors = {{9.0}, {-1.0}};
    const auto vback = parse_samples_csv_text(emit_samples_csv(vec));
    CHECK(vback.cause_vectors == vec.cause_vectors);
    CHECK(vback.effect_vectors == vec.effect_vectors);
}

TEST_CASE("matrix fixtures reproduce the embedded tables") {
    const Cpt cpt = parse_cpt_csv(kFixtures + "/smoking_cpt.csv", CptKind::interventional);
    const Cpt expected = tables::smoking_cpt();
    REQUIRE(cpt.num_causes() == 3);
    REQUIRE(cpt.num_effects() == 4);
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(cpt.at(j, i) == doctest::Approx(expected.at(j, i)).epsilon(1e-12));
        }
    }
    const UtilityTable util = parse_utility_csv(kFixtures + "/smoking_util.csv");
    const UtilityTable eutil = tables::smoking_utility();
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(util.at(j, i) == doctest::Approx(eutil.at(j, i)).epsilon(1e-12));
        }
    }
    // the eta computed from the fixtures matches the embedded value
    const Cpt fig_cpt = parse_cpt_csv(kFixtures + "/fig1_cpt.csv", CptKind::observational);
    const UtilityTable fig_util = parse_utility_csv(kFixtures + "/fig1_util.csv");
    const auto profile = expected_utilities(fig_cpt, fig_util);
    CHECK(profile.values[0] == doctest::Approx(2.248).epsilon(1e-12));
}

TEST_CASE("cpt csv stochasticity handling") {
    SUBCASE("tiny row-sum drift is renormalized") {
        const Cpt cpt =
            parse_cpt_csv_text(",x,y\na,0.5000001,0.4999999\n", CptKind::observational);
        CHECK(cpt.at(0, 0) + cpt.at(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("large drift is rejected") {
        CHECK_THROWS_AS(
            (void)parse_cpt_csv_text(",x,y\na,0.6,0.6\n", CptKind::observational),
            InputError);
    }
    SUBCASE("negative probabilities are rejected") {
        CHECK_THROWS_AS(
            (void)parse_cpt_csv_text(",x,y\na,-0.2,1.2\n", CptKind::observational),
            InputError);
    }
    SUBCASE("missing file carries the path") {
        try {
            (void)parse_cpt_csv("/nonexistent/nope.csv", CptKind::observational);
            FAIL("expected an error");
        } catch (const InputError& err) {
            CHECK(std::string(err.what()).find("nope.csv") != std::string::npos);
        }
    }
}

TEST_CASE("report emission") {
    const Cpt cpt = tables::smoking_cpt();
    const UtilityTable util = tables::smoking_utility();
    AnalysisReport report;
    report.cause_space = cpt.cause_space();
    report.effect_space = cpt.effect_space();
    report.cause_partition = pragmatic_causal_coarsening(cpt, util);
    report.effect_partition = pragmatic_effect_coarsening(util);
    report.coarse_cpt = coarsen_cpt(cpt, report.cause_partition, report.effect_partition,
                                    {1.0 / 3, 1.0 / 3, 1.0 / 3});
    report.eu_profile = expected_utilities(cpt, util);

    SUBCASE("text output carries the class labels and eta") {
        const std::string text = emit_report(report, ReportFormat::text);
        CHECK(text.find("Marlboro∨Other") != std::string::npos);
        CHECK(text.find("eta = 1947.05") != std::string::npos);
    }
    SUBCASE("json output is valid and complete") {
        const auto doc = nlohmann::json::parse(emit_report(report, ReportFormat::json));
        CHECK(doc.contains("cause_partition"));
        CHECK(doc.contains("effect_partition"));
        CHECK(doc.contains("coarse_cpt"));
        CHECK(doc.contains("eu_profile"));
        CHECK(doc["cause_partition"][0][0] == "Marlboro");
        CHECK(doc["eta"] == doctest::Approx(1947.05));
    }
    SUBCASE("csv output lists the partitions") {
        const std::string csv = emit_report(report, ReportFormat::csv);
        CHECK(csv.find("cause_partition,") != std::string::npos);
        CHECK(csv.find("eta,1947.05") != std::string::npos);
    }
    SUBCASE("identity partitions print every value") {
        AnalysisReport plain;
        plain.cause_space = cpt.cause_space();
        plain.effect_space = cpt.effect_space();
        plain.cause_partition = Partition::singletons(3);
        plain.effect_partition = Partition::singletons(4);
        const std::string text = emit_report(plain, ReportFormat::text);
        CHECK(text.find("{Nothing}") != std::string::npos);
        CHECK(text.find("{[70,90]}") != std::string::npos);
    }
}
