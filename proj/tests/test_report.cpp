#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "report.hpp"

using namespace rotablue;

namespace {

RecurrenceSolution analyze_text(const char* text, double rho) {
    return analyze(ModelParams{parse_pattern(text), rho});
}

int count_lines(const std::string& text) {
    int lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    return lines;
}

} // namespace

TEST_CASE("solution JSON carries the documented fields") {
    RecurrenceSolution sol = analyze_text("110011", 0.7);
    nlohmann::ordered_json j = solution_to_json(sol);
    CHECK(j["pattern"] == "110011");
    CHECK(j["rho"] == 0.7);
    CHECK(j["p"] == 3);
    CHECK(j["roots"].size() == 3);
    CHECK(j["roots"][0].contains("re"));
    CHECK(j["roots"][0].contains("im"));
    CHECK(j["ds"].size() == 3);
    CHECK(j["a"].size() == 3);
    CHECK(j["r"].size() == 4);
    CHECK(j["r"][0].size() == 6);
    CHECK(j["assumption1"] == "pass");
    CHECK(j["assumption2"] == "pass");
    CHECK(j["variance"].get<double>() == sol.variance);
    CHECK(j["residuals"].contains("root"));
    CHECK(j["residuals"].contains("system"));
    CHECK(j["residuals"].contains("imag"));
}

TEST_CASE("solution JSON round-trips exactly") {
    for (auto [text, rho] : std::vector<std::pair<const char*, double>>{
             {"111111", 0.9}, {"1101101", 0.5}, {"110011", 0.7}, {"1111000000001111", 0.9}}) {
        RecurrenceSolution sol = analyze_text(text, rho);
        nlohmann::ordered_json first = solution_to_json(sol);
        RecurrenceSolution restored = solution_from_json(first.dump());
        nlohmann::ordered_json second = solution_to_json(restored);
        CHECK(first == second);
    }
}

TEST_CASE("a restored solution still drives the estimator") {
    RecurrenceSolution sol = analyze_text("1101101", 0.5);
    RecurrenceSolution restored = solution_from_json(solution_to_json(sol).dump());
    CHECK(restored.complete);
    CHECK(restored.variance == sol.variance);

    RecursiveEstimator estimator(restored);
    Eigen::VectorXd obs = Eigen::VectorXd::Constant(7, -1.25);
    for (int t = 0; t < 12; ++t) CHECK(std::abs(estimator.feed(obs) + 1.25) < 1e-10);
}

TEST_CASE("partial solutions serialize up to the failure point") {
    AnalyzeOptions opts;
    opts.tol_rank = 1.0;
    RecurrenceSolution partial = analyze(ModelParams{parse_pattern("110011"), 0.7}, opts);
    nlohmann::ordered_json j = solution_to_json(partial);
    CHECK(j.contains("roots"));
    CHECK(j.contains("ds"));
    CHECK(j.contains("a"));
    CHECK(j["assumption1"] == "pass");
    CHECK(j["assumption2"] == "fail");
    CHECK_FALSE(j.contains("r"));
    CHECK_FALSE(j.contains("variance"));

    RecurrenceSolution restored = solution_from_json(j.dump());
    CHECK_FALSE(restored.complete);
    CHECK(solution_to_json(restored) == j);
}

TEST_CASE("malformed JSON is rejected") {
    for (const char* text :
         {"{", "[]", "{\"pattern\":\"110011\"}",
          R"({"pattern":"110011","rho":0.7,"p":5,"assumption1":"pass"})"}) {
        bool raised = false;
        try {
            solution_from_json(text);
        } catch (const error& e) {
            raised = (e.code() == errc::invalid_config);
        }
        CHECK(raised);
    }
}

TEST_CASE("solution CSV is one row per weight entry") {
    RecurrenceSolution sol = analyze_text("1101101", 0.5);
    std::string csv = solution_to_csv(sol);
    CHECK(count_lines(csv) == 1 + 3 * 7); // header + (p+1) * N
    std::istringstream stream(csv);
    std::string header;
    std::getline(stream, header);
    CHECK(header == "i,slot,value");
    std::string row;
    std::getline(stream, row);
    CHECK(row.rfind("0,1,", 0) == 0);
    double value = std::stod(row.substr(4));
    CHECK(value == doctest::Approx(sol.r[0](0)).epsilon(1e-15));
}

TEST_CASE("pretty rendering shows the headline numbers") {
    RecurrenceSolution sol = analyze_text("111111", 0.9);
    std::string pretty = solution_to_pretty(sol);
    CHECK(pretty.find("pattern 111111") != std::string::npos);
    CHECK(pretty.find("assumption I  PASS") != std::string::npos);
    CHECK(pretty.find("assumption II PASS") != std::string::npos);
    CHECK(pretty.find("a:  0.794192") != std::string::npos);
    CHECK(pretty.find("variance 0.117564") != std::string::npos);
    CHECK(pretty.find("r_0") != std::string::npos);
    CHECK(pretty.find("r_1") != std::string::npos);
}

TEST_CASE("verification report rendering") {
    VerificationReport rep;
    rep.horizon = 60;
    rep.variance_oracle = 0.20585;
    rep.variance_recursion = 0.20585;
    rep.variance_gap = 1e-12;
    rep.max_weight_gap = 2e-9;
    rep.pass = true;
    rep.detail = "all checks within bounds";

    nlohmann::ordered_json j = verification_to_json(rep);
    CHECK(j["T"] == 60);
    CHECK(j["variance"] == 0.20585);
    CHECK(j["variance_gap"] == 1e-12);
    CHECK(j["max_weight_gap"] == 2e-9);
    CHECK(j["pass"] == true);

    std::string csv = verification_to_csv(rep);
    CHECK(count_lines(csv) == 2);
    CHECK(csv.rfind("T,variance,variance_gap,max_weight_gap,pass\n", 0) == 0);
    CHECK(csv.find("PASS") != std::string::npos);

    std::string pretty = verification_to_pretty(rep);
    CHECK(pretty.find("result PASS") != std::string::npos);

    rep.pass = false;
    rep.detail = "weight_gap (0.01 > 1e-06)";
    CHECK(verification_to_pretty(rep).find("weight_gap") != std::string::npos);
    CHECK(verification_to_csv(rep).find("FAIL") != std::string::npos);
}

TEST_CASE("simulation report rendering") {
    SimulationReport rep;
    rep.replications = 10000;
    rep.theoretical_variance = 0.1176;
    rep.empirical_variance = 0.1181;
    rep.std_error = 0.0017;
    rep.bias = -0.001;
    rep.bias_std_error = 0.003;
    rep.pass = true;
    rep.seed = 1;

    nlohmann::ordered_json j = simulation_to_json(rep);
    CHECK(j["replications"] == 10000);
    CHECK(j["theoretical_variance"] == 0.1176);
    CHECK(j["empirical_variance"] == 0.1181);
    CHECK(j["stderr"] == 0.0017);
    CHECK(j["pass"] == true);
    CHECK(j["seed"] == 1);

    std::string csv = simulation_to_csv(rep);
    CHECK(count_lines(csv) == 2);
    CHECK(csv.rfind("replications,theoretical_variance,empirical_variance,stderr,pass,seed\n",
                    0) == 0);

    std::string pretty = simulation_to_pretty(rep);
    CHECK(pretty.find("result PASS") != std::string::npos);
    CHECK(pretty.find("10000") != std::string::npos);
}
