#include "report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "errors.hpp"
#include "qpoly.hpp"

namespace rotablue {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt6(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string fmt6(cplx z) {
    if (std::abs(z.imag()) < 1e-12) return fmt6(z.real());
    std::ostringstream os;
    os << fmt6(z.real()) << (z.imag() < 0 ? "-" : "+") << fmt6(std::abs(z.imag())) << "i";
    return os.str();
}

ojson complex_array(const std::vector<cplx>& zs) {
    ojson arr = ojson::array();
    for (cplx z : zs) arr.push_back(ojson{{"re", z.real()}, {"im", z.imag()}});
    return arr;
}

std::string pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }

} // namespace

ojson solution_to_json(const RecurrenceSolution& sol) {
    ojson j;
    j["pattern"] = sol.pattern.text();
    j["rho"] = sol.rho;
    j["p"] = sol.pattern.p;
    if (!sol.xs.empty()) j["roots"] = complex_array(sol.xs);
    if (!sol.ds.empty()) j["ds"] = complex_array(sol.ds);
    if (!sol.a.empty()) j["a"] = sol.a;
    if (!sol.r.empty()) {
        ojson rows = ojson::array();
        for (const Eigen::VectorXd& ri : sol.r)
            rows.push_back(std::vector<double>(ri.data(), ri.data() + ri.size()));
        j["r"] = rows;
    }
    if (sol.complete) j["variance"] = sol.variance;
    j["assumption1"] = sol.assumption1.pass ? "pass" : "fail";
    if (!sol.ds.empty()) j["assumption2"] = sol.assumption2.pass ? "pass" : "fail";
    j["residuals"] = ojson{{"root", sol.residuals.root},
                           {"system", sol.residuals.system},
                           {"imag", sol.residuals.imag}};
    return j;
}

RecurrenceSolution solution_from_json(const std::string& text) {
    RecurrenceSolution sol;
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        sol.pattern = parse_pattern(j.at("pattern").get<std::string>());
        sol.rho = j.at("rho").get<double>();
        validate_rho(sol.rho);
        if (j.at("p").get<int>() != sol.pattern.p)
            fail(errc::invalid_config, "p does not match the pattern's gap count");
        sol.qp = build_qp(ModelParams{sol.pattern, sol.rho});
        auto read_complex = [](const nlohmann::json& arr) {
            std::vector<cplx> zs;
            for (const auto& e : arr) zs.emplace_back(e.at("re").get<double>(), e.at("im").get<double>());
            return zs;
        };
        if (j.contains("roots")) sol.xs = read_complex(j["roots"]);
        if (j.contains("ds")) sol.ds = read_complex(j["ds"]);
        if (j.contains("a")) sol.a = j["a"].get<std::vector<double>>();
        if (j.contains("r")) {
            for (const auto& row : j["r"]) {
                auto vals = row.get<std::vector<double>>();
                if (static_cast<int>(vals.size()) != sol.pattern.N)
                    fail(errc::invalid_config, "r row length does not match the pattern");
                sol.r.push_back(Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size()));
            }
        }
        sol.assumption1.pass = j.value("assumption1", "fail") == std::string("pass");
        if (j.contains("assumption2"))
            sol.assumption2.pass = j["assumption2"].get<std::string>() == "pass";
        if (j.contains("variance")) {
            sol.variance = j["variance"].get<double>();
            sol.complete = sol.assumption1.pass && sol.assumption2.pass;
        }
        if (j.contains("residuals")) {
            const auto& res = j["residuals"];
            sol.residuals.root = res.value("root", 0.0);
            sol.residuals.system = res.value("system", 0.0);
            sol.residuals.imag = res.value("imag", 0.0);
        }
    } catch (const nlohmann::json::exception& e) {
        fail(errc::invalid_config, std::string("malformed solution JSON: ") + e.what());
    }
    return sol;
}

std::string solution_to_csv(const RecurrenceSolution& sol) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "i,slot,value\n";
    for (size_t i = 0; i < sol.r.size(); ++i)
        for (int slot = 0; slot < sol.r[i].size(); ++slot)
            os << i << ',' << slot + 1 << ',' << sol.r[i](slot) << '\n';
    return os.str();
}

std::string solution_to_pretty(const RecurrenceSolution& sol) {
    const CascadePattern& pat = sol.pattern;
    std::ostringstream os;
    os << "pattern " << pat.text() << "   N " << pat.N << "   n " << pat.n << "   p " << pat.p
       << "   h " << pat.h << '\n';
    os << "rho " << fmt6(sol.rho) << '\n';
    os << "assumption I  " << pass_word(sol.assumption1.pass);
    if (!sol.assumption1.pass && !sol.assumption1.detail.empty())
        os << "  (" << sol.assumption1.detail << ")";
    os << '\n';
    if (!sol.ds.empty()) {
        os << "assumption II " << pass_word(sol.assumption2.pass);
        if (!sol.assumption2.pass && !sol.assumption2.detail.empty())
            os << "  (" << sol.assumption2.detail << ")";
        os << '\n';
    }
    auto print_complex_row = [&](const char* label, const std::vector<cplx>& zs) {
        os << label;
        for (cplx z : zs) os << "  " << fmt6(z);
        os << '\n';
    };
    if (!sol.xs.empty()) print_complex_row("x:", sol.xs);
    if (!sol.ds.empty()) print_complex_row("d:", sol.ds);
    if (!sol.a.empty()) {
        os << "a:";
        for (double ak : sol.a) os << "  " << fmt6(ak);
        os << '\n';
    }
    if (sol.complete) os << "variance " << fmt6(sol.variance) << '\n';
    os << "residuals  root " << fmt6(sol.residuals.root) << "   system "
       << fmt6(sol.residuals.system) << "   imag " << fmt6(sol.residuals.imag) << '\n';
    if (!sol.r.empty()) {
        os << '\n' << std::setw(6) << "slot";
        for (size_t i = 0; i < sol.r.size(); ++i)
            os << std::setw(12) << ("r_" + std::to_string(i));
        os << '\n';
        for (int slot = 0; slot < pat.N; ++slot) {
            os << std::setw(6) << slot + 1;
            for (const Eigen::VectorXd& ri : sol.r) os << std::setw(12) << fmt6(ri(slot));
            os << '\n';
        }
    }
    return os.str();
}

ojson verification_to_json(const VerificationReport& rep) {
    ojson j;
    j["T"] = rep.horizon;
    j["variance"] = rep.variance_oracle;
    j["variance_gap"] = rep.variance_gap;
    j["max_weight_gap"] = rep.max_weight_gap;
    j["pass"] = rep.pass;
    j["detail"] = rep.detail;
    return j;
}

std::string verification_to_csv(const VerificationReport& rep) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "T,variance,variance_gap,max_weight_gap,pass\n";
    os << rep.horizon << ',' << rep.variance_oracle << ',' << rep.variance_gap << ','
       << rep.max_weight_gap << ',' << pass_word(rep.pass) << '\n';
    return os.str();
}

std::string verification_to_pretty(const VerificationReport& rep) {
    std::ostringstream os;
    os << "horizon T            " << rep.horizon << '\n';
    os << "variance (oracle)    " << fmt6(rep.variance_oracle) << '\n';
    os << "variance (recursion) " << fmt6(rep.variance_recursion) << '\n';
    os << "variance gap         " << fmt6(rep.variance_gap) << '\n';
    os << "max weight gap       " << fmt6(rep.max_weight_gap) << '\n';
    os << "kkt residual         " << fmt6(rep.kkt_residual) << '\n';
    os << "unbiasedness         " << fmt6(rep.unbiasedness) << '\n';
    os << "gap entries          " << fmt6(rep.gap_entries) << '\n';
    os << "lagrange support     " << fmt6(rep.lagrange) << '\n';
    os << "det Gbar             " << fmt6(rep.det_gbar) << '\n';
    os << "Q at roots           " << fmt6(rep.qp_at_roots) << '\n';
    os << "H_m decomposition    " << fmt6(rep.hm_decomposition) << '\n';
    os << "trace identity       " << fmt6(rep.trace_identity) << '\n';
    os << "closed vs unrolled   " << fmt6(rep.closed_vs_unrolled) << '\n';
    os << "variance quad form   " << fmt6(rep.variance_quadform) << '\n';
    os << "result " << pass_word(rep.pass);
    if (!rep.pass) os << "  (" << rep.detail << ")";
    os << '\n';
    return os.str();
}

ojson simulation_to_json(const SimulationReport& rep) {
    ojson j;
    j["replications"] = rep.replications;
    j["theoretical_variance"] = rep.theoretical_variance;
    j["empirical_variance"] = rep.empirical_variance;
    j["stderr"] = rep.std_error;
    j["pass"] = rep.pass;
    j["seed"] = rep.seed;
    return j;
}

std::string simulation_to_csv(const SimulationReport& rep) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "replications,theoretical_variance,empirical_variance,stderr,pass,seed\n";
    os << rep.replications << ',' << rep.theoretical_variance << ',' << rep.empirical_variance
       << ',' << rep.std_error << ',' << pass_word(rep.pass) << ',' << rep.seed << '\n';
    return os.str();
}

std::string simulation_to_pretty(const SimulationReport& rep) {
    std::ostringstream os;
    os << "replications         " << rep.replications << '\n';
    os << "seed                 " << rep.seed << '\n';
    os << "theoretical variance " << fmt6(rep.theoretical_variance) << '\n';
    os << "empirical variance   " << fmt6(rep.empirical_variance) << '\n';
    os << "std error            " << fmt6(rep.std_error) << '\n';
    os << "bias                 " << fmt6(rep.bias) << "  (se " << fmt6(rep.bias_std_error)
       << ")\n";
    os << "result " << pass_word(rep.pass) << '\n';
    return os.str();
}

} // namespace rotablue
