#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lojex/report.hpp"

#include <fstream>

using namespace lojex;

namespace {

std::string data_path(const std::string& name) {
    return std::string(LOJEX_SOURCE_DIR) + "/data/branches/" + name;
}

std::string golden_path(const std::string& name) {
    return std::string(LOJEX_SOURCE_DIR) + "/tests/golden/" + name;
}

ReportOptions fast_options() {
    ReportOptions opts;
    opts.levels = 10;
    opts.starts = 16;
    opts.zero_sample = 1024;
    opts.flow_starts = 16;
    opts.kl_samples = 2000;
    return opts;
}

// Golden files list JSON-pointer fields with either an exact expected value
// or a numeric value plus tolerance.
void check_against_golden(const json& doc, const std::string& golden_file) {
    std::ifstream in(golden_file);
    REQUIRE_MESSAGE(in.good(), "missing golden file ", golden_file);
    json golden = json::parse(in);
    for (const auto& field : golden.at("fields")) {
        const std::string pointer = field.at("path").get<std::string>();
        INFO("field ", pointer);
        json value;
        try {
            value = doc.at(json::json_pointer(pointer));
        } catch (const json::exception&) {
            FAIL_CHECK("missing field ", pointer);
            continue;
        }
        if (field.contains("equals")) {
            CHECK(value == field.at("equals"));
        } else {
            double expected = field.at("value").get<double>();
            double tol = field.at("tol").get<double>();
            CHECK(std::abs(value.get<double>() - expected) <= tol);
        }
    }
}

}  // namespace

TEST_CASE("bounds subcommand emits the closed-form strings") {
    Assumptions a;
    a.partial_y_nonzero = true;
    json doc = run_bounds_cmd(2, 2, a, std::nullopt);
    CHECK(doc["rho_bounds"]["theorem_2_1"] == "1 - 1/33");
    CHECK(doc["rho_bounds"]["theorem_2_2"] == "1 - 1/4374");
    CHECK(doc["rho_best"] == "theorem_2_1");
    std::string dumped = doc.dump(2);
    CHECK(dumped.find("\"theorem_2_1\": \"1 - 1/33\"") != std::string::npos);
}

TEST_CASE("suffdeg formula subcommand") {
    json doc = run_suffdeg_formula_cmd(2, 2, {});
    CHECK(doc["k"] == "4374");
    CHECK(doc["source"] == "Theorem 1.3");
}

TEST_CASE("suffdeg audit passes with the theorem value and fails for k = 2") {
    json ok = run_suffdeg_audit_cmd(data_path("circle.json"), std::nullopt, 0);
    CHECK(ok["verdict"] == "pass");
    CHECK(ok["beta_hat"].get<double>() == doctest::Approx(1.0).epsilon(0.08));

    json axes = run_suffdeg_audit_cmd(data_path("axes.json"), std::nullopt, 0);
    CHECK(axes["verdict"] == "pass");
    CHECK(axes["beta_hat"].get<double>() == doctest::Approx(3.0).epsilon(0.05));

    json fail = run_suffdeg_audit_cmd(data_path("axes.json"), BigInt(2), 0);
    CHECK(fail["verdict"] == "fail");
}

TEST_CASE("estimate subcommand") {
    json doc = run_estimate_cmd(data_path("circle.json"), std::nullopt, std::nullopt, 10, 16, 0);
    CHECK(doc["rho_hat"].get<double>() == doctest::Approx(0.5).epsilon(0.02));
    CHECK(doc["c_hat"].get<double>() == doctest::Approx(2.0).epsilon(0.01));
    CHECK(doc["positive"]["levels"].size() == 10);
}

TEST_CASE("eliminate subcommand") {
    json doc = run_eliminate_cmd(data_path("circle.json"), SystemCase::interior, std::nullopt,
                                 ElimMethod::resultant, ElimRoute::cross, 12, 10, 16, 0);
    CHECK(doc["Q"] == "u - 4*y");
    CHECK(doc["D"] == 1);
    CHECK(doc["lemma58"] == "1/2");
    REQUIRE(doc["slopes"].size() == 1);
    CHECK(doc["slopes"][0] == "1/2");
    CHECK(doc["residual"].get<double>() <= 1e-6);

    CHECK_THROWS_AS(run_eliminate_cmd(data_path("circle.json"), SystemCase::boundary, std::nullopt,
                                      ElimMethod::resultant, ElimRoute::cross, 12, 10, 16, 0),
                    std::invalid_argument);
}

TEST_CASE("flow subcommand with sandwich check") {
    json doc = run_flow_cmd(data_path("circle.json"), {0.6, 0.8}, 1e-8,
                            std::make_pair(0.5, 2.0), "", 0);
    CHECK(doc["terminal"] == "reached_zero_level");
    CHECK(doc["arc_length"].get<double>() == doctest::Approx(1.0).epsilon(2e-4));
    CHECK(doc["length_bound_check"]["lower_ok"].get<bool>());
    CHECK(doc["length_bound_check"]["upper_ok"].get<bool>());
    // (0.6, 0.8) sits on the boundary of X, so the U region excludes it and
    // the upper bound is reported as informational.
    CHECK_FALSE(doc["length_bound_check"]["in_u_region"].get<bool>());
    CHECK(doc["length_bound_check"].contains("note"));

    json inner = run_flow_cmd(data_path("circle.json"), {0.24, 0.32}, 1e-8,
                              std::make_pair(0.5, 2.0), "", 0);
    CHECK(inner["length_bound_check"]["in_u_region"].get<bool>());
    CHECK(inner["arc_length"].get<double>() == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("report runs the full pipeline on the radial branch") {
    ReportResult res = run_report(data_path("circle.json"), fast_options());
    CHECK(res.exit_code == 0);
    const json& doc = res.doc;
    CHECK(doc["schema"] == 1);
    CHECK(doc["branch"]["d"] == 2);
    CHECK(doc["profile"]["rho_hat"].get<double>() == doctest::Approx(0.5).epsilon(0.02));
    CHECK(doc["elimination"]["interior"]["Q"] == "u - 4*y");
    CHECK(doc["elimination"]["methods_agree"].get<bool>());
    bool found_pass = false;
    for (const auto& v : doc["verdicts"])
        if (v["name"] == "theorem-consistency") found_pass = v["status"] == "pass";
    CHECK(found_pass);
}

TEST_CASE("report is deterministic for a fixed seed") {
    ReportOptions opts = fast_options();
    opts.levels = 8;
    opts.starts = 8;
    opts.zero_sample = 512;
    opts.flow_starts = 8;
    opts.kl_samples = 500;
    ReportResult a = run_report(data_path("circle.json"), opts);
    ReportResult b = run_report(data_path("circle.json"), opts);
    CHECK(a.doc.dump(2) == b.doc.dump(2));
    CHECK(a.exit_code == b.exit_code);
}

TEST_CASE("report JSON round-trips") {
    ReportResult res = run_report(data_path("circle.json"), fast_options());
    std::string text = res.doc.dump();
    json reparsed = json::parse(text);
    CHECK(reparsed == res.doc);
}

TEST_CASE("golden report: circle branch") {
    ReportResult res = run_report(data_path("circle.json"), ReportOptions{});
    check_against_golden(res.doc, golden_path("circle.report.json"));
}

TEST_CASE("golden report: axes branch") {
    ReportResult res = run_report(data_path("axes.json"), ReportOptions{});
    check_against_golden(res.doc, golden_path("axes.report.json"));
}

TEST_CASE("branch spec parsing errors") {
    CHECK_THROWS(branch_from_file(data_path("missing.json")));
    json bad = {{"P", "y - q"}, {"vars", 1}, {"seed_x", {0.0}}, {"seed_y", 0.0}, {"radius", 1.0}};
    CHECK_THROWS_AS(branch_from_spec(branch_spec_from_json(bad)), ParseError);
}

TEST_CASE("rational rendering helpers") {
    CHECK(rational_str(Rational(3, 4)) == "3/4");
    CHECK(rational_str(Rational(5)) == "5");
    CHECK(one_minus_inverse_str(BigInt(33)) == "1 - 1/33");
    CHECK(one_minus_inverse_str(BigInt(1)) == "0");
}
