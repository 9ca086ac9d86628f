#include "rotablue/rotablue.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <string_view>
#include <utility>

#include "errors.hpp"
#include "oracle.hpp"
#include "pattern.hpp"
#include "recurrence.hpp"
#include "report.hpp"
#include "simulate.hpp"
#include "verify.hpp"

struct rb_solution {
    rotablue::RecurrenceSolution impl;
};

// The streaming estimator keeps a reference to its solution, so the handle
// owns a private copy; freeing the rb_solution it was built from is safe.
struct rb_estimator {
    rotablue::RecurrenceSolution sol;
    rotablue::RecursiveEstimator impl;

    explicit rb_estimator(const rotablue::RecurrenceSolution& s) : sol(s), impl(sol) {}
};

namespace {

thread_local std::string g_last_error;

rb_status status_from(const rotablue::error& e) {
    using rotablue::errc;
    switch (e.code()) {
        case errc::ok:
            return RB_OK;
        case errc::empty_or_short:
        case errc::bad_char:
        case errc::endpoint_zero:
        case errc::rho_zero:
        case errc::rho_out_of_range:
        case errc::invalid_config:
        case errc::insufficient_history:
            return RB_ERR_ARGUMENT;
        case errc::assumption_one_failed:
        case errc::on_critical_interval:
            return RB_ERR_ASSUMPTION_ONE;
        case errc::assumption_two_failed:
            return RB_ERR_ASSUMPTION_TWO;
        case errc::verification_failed:
            return RB_ERR_VERIFY;
        default:
            return RB_ERR_NUMERIC;
    }
}

template <typename Body>
rb_status guarded(Body&& body) {
    try {
        return body();
    } catch (const rotablue::error& e) {
        g_last_error = std::string(rotablue::errc_name(e.code())) + ": " + e.what();
        return status_from(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RB_ERR_NUMERIC;
    }
}

rb_status null_argument(const char* what) {
    g_last_error = std::string(what) + " must not be NULL";
    return RB_ERR_NULLPTR;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

rotablue::AnalyzeOptions make_options(const rb_options* opts) {
    rotablue::AnalyzeOptions o;
    if (opts) {
        if (opts->tol_root < 0 || opts->tol_rank < 0)
            rotablue::fail(rotablue::errc::invalid_config, "tolerances must be non-negative");
        if (opts->tol_root > 0) o.tol_root = opts->tol_root;
        if (opts->tol_rank > 0) o.tol_rank = opts->tol_rank;
    }
    return o;
}

std::string render_solution(const rotablue::RecurrenceSolution& sol, std::string_view format) {
    if (format == "json") return rotablue::solution_to_json(sol).dump(2) + "\n";
    if (format == "csv") return rotablue::solution_to_csv(sol);
    if (format == "pretty") return rotablue::solution_to_pretty(sol);
    rotablue::fail(rotablue::errc::invalid_config,
                   "unknown format (expected json, csv, or pretty)");
}

// Runs the full pipeline and throws the matching assumption error when the
// solution is only partial (for entry points that need a complete one).
rb_status copy_root(const std::vector<rotablue::cplx>& zs, int m, double* re, double* im) {
    if (m < 1 || m > static_cast<int>(zs.size())) {
        g_last_error = "root index out of range (have " + std::to_string(zs.size()) + ")";
        return RB_ERR_ARGUMENT;
    }
    if (re) *re = zs[static_cast<size_t>(m - 1)].real();
    if (im) *im = zs[static_cast<size_t>(m - 1)].imag();
    return RB_OK;
}

rotablue::RecurrenceSolution analyze_complete(const char* pattern, double rho,
                                              const rb_options* opts) {
    rotablue::ModelParams params{rotablue::parse_pattern(pattern), rho};
    rotablue::RecurrenceSolution sol = rotablue::analyze(params, make_options(opts));
    if (!sol.assumption1.pass)
        rotablue::fail(rotablue::errc::assumption_one_failed, sol.assumption1.detail);
    if (!sol.assumption2.pass)
        rotablue::fail(rotablue::errc::assumption_two_failed, sol.assumption2.detail);
    return sol;
}

} // namespace

extern "C" {

const char* rb_version(void) { return "1.0.0"; }

const char* rb_status_name(rb_status status) {
    switch (status) {
        case RB_OK: return "RB_OK";
        case RB_ERR_ARGUMENT: return "RB_ERR_ARGUMENT";
        case RB_ERR_ASSUMPTION_ONE: return "RB_ERR_ASSUMPTION_ONE";
        case RB_ERR_ASSUMPTION_TWO: return "RB_ERR_ASSUMPTION_TWO";
        case RB_ERR_NUMERIC: return "RB_ERR_NUMERIC";
        case RB_ERR_VERIFY: return "RB_ERR_VERIFY";
        case RB_ERR_NULLPTR: return "RB_ERR_NULLPTR";
    }
    return "RB_ERR_UNKNOWN";
}

const char* rb_last_error(void) { return g_last_error.c_str(); }

rb_status rb_pattern_check(const char* pattern) {
    if (!pattern) return null_argument("pattern");
    return guarded([&] {
        rotablue::parse_pattern(pattern);
        return RB_OK;
    });
}

rb_status rb_pattern_dims(const char* pattern, int* N, int* n, int* p, int* h) {
    if (!pattern) return null_argument("pattern");
    return guarded([&] {
        rotablue::CascadePattern pat = rotablue::parse_pattern(pattern);
        if (N) *N = pat.N;
        if (n) *n = pat.n;
        if (p) *p = pat.p;
        if (h) *h = pat.h;
        return RB_OK;
    });
}

rb_status rb_scheme_expand(const char* scheme, char* buf, size_t buflen) {
    if (!scheme) return null_argument("scheme");
    if (!buf) return null_argument("buf");
    return guarded([&] {
        std::string expanded = rotablue::expand_scheme(scheme);
        if (expanded.size() + 1 > buflen) {
            g_last_error = "buffer too small: need " + std::to_string(expanded.size() + 1) +
                           " bytes for scheme " + scheme;
            return RB_ERR_ARGUMENT;
        }
        std::memcpy(buf, expanded.c_str(), expanded.size() + 1);
        return RB_OK;
    });
}

rb_status rb_analyze(const char* pattern, double rho, const rb_options* opts,
                     rb_solution** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    if (!pattern) return null_argument("pattern");
    return guarded([&] {
        rotablue::ModelParams params{rotablue::parse_pattern(pattern), rho};
        rotablue::RecurrenceSolution sol = rotablue::analyze(params, make_options(opts));
        rb_status status = RB_OK;
        if (!sol.assumption1.pass) {
            g_last_error = "AssumptionOneFailed: " + sol.assumption1.detail;
            status = RB_ERR_ASSUMPTION_ONE;
        } else if (!sol.assumption2.pass) {
            g_last_error = "AssumptionTwoFailed: " + sol.assumption2.detail;
            status = RB_ERR_ASSUMPTION_TWO;
        }
        *out = new rb_solution{std::move(sol)};
        return status;
    });
}

rb_status rb_solution_parse(const char* json_text, rb_solution** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    if (!json_text) return null_argument("json_text");
    return guarded([&] {
        *out = new rb_solution{rotablue::solution_from_json(json_text)};
        return RB_OK;
    });
}

void rb_solution_free(rb_solution* sol) { delete sol; }

rb_status rb_solution_dims(const rb_solution* sol, int* N, int* n, int* p, int* h) {
    if (!sol) return null_argument("sol");
    if (N) *N = sol->impl.pattern.N;
    if (n) *n = sol->impl.pattern.n;
    if (p) *p = sol->impl.pattern.p;
    if (h) *h = sol->impl.pattern.h;
    return RB_OK;
}

int rb_solution_complete(const rb_solution* sol) {
    return sol && sol->impl.complete ? 1 : 0;
}

int rb_solution_assumption(const rb_solution* sol, int which) {
    if (!sol) return -1;
    if (which == 1) return sol->impl.assumption1.pass ? 1 : 0;
    if (which == 2) {
        if (sol->impl.ds.empty()) return -1; // never reached
        return sol->impl.assumption2.pass ? 1 : 0;
    }
    return -1;
}

rb_status rb_solution_variance(const rb_solution* sol, double* out) {
    if (!sol) return null_argument("sol");
    if (!out) return null_argument("out");
    if (!sol->impl.complete) {
        g_last_error = "solution is partial: variance not available";
        return RB_ERR_ARGUMENT;
    }
    *out = sol->impl.variance;
    return RB_OK;
}

rb_status rb_solution_coeff_a(const rb_solution* sol, int k, double* out) {
    if (!sol) return null_argument("sol");
    if (!out) return null_argument("out");
    if (k < 1 || k > static_cast<int>(sol->impl.a.size())) {
        g_last_error = "coefficient index out of range (have " +
                       std::to_string(sol->impl.a.size()) + ")";
        return RB_ERR_ARGUMENT;
    }
    *out = sol->impl.a[static_cast<size_t>(k - 1)];
    return RB_OK;
}

rb_status rb_solution_r(const rb_solution* sol, int i, int slot, double* out) {
    if (!sol) return null_argument("sol");
    if (!out) return null_argument("out");
    if (i < 0 || i >= static_cast<int>(sol->impl.r.size()) || slot < 1 ||
        slot > sol->impl.pattern.N) {
        g_last_error = "weight index out of range";
        return RB_ERR_ARGUMENT;
    }
    *out = sol->impl.r[static_cast<size_t>(i)](slot - 1);
    return RB_OK;
}

rb_status rb_solution_root(const rb_solution* sol, int m, double* re, double* im) {
    if (!sol) return null_argument("sol");
    return copy_root(sol->impl.xs, m, re, im);
}

rb_status rb_solution_unit_root(const rb_solution* sol, int m, double* re, double* im) {
    if (!sol) return null_argument("sol");
    return copy_root(sol->impl.ds, m, re, im);
}

int rb_solution_truncation(const rb_solution* sol) {
    if (!sol || !sol->impl.complete) return -1;
    return rotablue::truncation_length(sol->impl);
}

rb_status rb_solution_render(const rb_solution* sol, const char* format, char** out) {
    if (!sol) return null_argument("sol");
    if (!format) return null_argument("format");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        std::string text = render_solution(sol->impl, format);
        *out = dup_string(text);
        return *out ? RB_OK : RB_ERR_NUMERIC;
    });
}

void rb_string_free(char* text) { std::free(text); }

rb_status rb_estimator_new(const rb_solution* sol, rb_estimator** out) {
    if (!out) return null_argument("out");
    *out = nullptr;
    if (!sol) return null_argument("sol");
    return guarded([&] {
        *out = new rb_estimator(sol->impl);
        return RB_OK;
    });
}

rb_status rb_estimator_feed(rb_estimator* est, const double* occasion, size_t len,
                            double* estimate) {
    if (!est) return null_argument("est");
    if (!occasion) return null_argument("occasion");
    if (!estimate) return null_argument("estimate");
    if (len != static_cast<size_t>(est->sol.pattern.N)) {
        g_last_error = "occasion length " + std::to_string(len) + " does not match N = " +
                       std::to_string(est->sol.pattern.N);
        return RB_ERR_ARGUMENT;
    }
    return guarded([&] {
        Eigen::Map<const Eigen::VectorXd> obs(occasion, static_cast<Eigen::Index>(len));
        *estimate = est->impl.feed(obs);
        return RB_OK;
    });
}

void rb_estimator_free(rb_estimator* est) { delete est; }

rb_status rb_verify(const char* pattern, double rho, int horizon, double corrupt_a1,
                    const rb_options* opts, const char* format, char** report) {
    if (!pattern) return null_argument("pattern");
    if (!format) return null_argument("format");
    if (!report) return null_argument("report");
    *report = nullptr;
    return guarded([&] {
        rotablue::RecurrenceSolution sol = analyze_complete(pattern, rho, opts);
        rotablue::VerificationReport rep = rotablue::run_verification(sol, horizon, corrupt_a1);
        std::string text;
        std::string_view f(format);
        if (f == "json")
            text = rotablue::verification_to_json(rep).dump(2) + "\n";
        else if (f == "csv")
            text = rotablue::verification_to_csv(rep);
        else if (f == "pretty")
            text = rotablue::verification_to_pretty(rep);
        else
            rotablue::fail(rotablue::errc::invalid_config,
                           "unknown format (expected json, csv, or pretty)");
        *report = dup_string(text);
        if (!*report) return RB_ERR_NUMERIC;
        if (!rep.pass) {
            g_last_error = "VerificationFailed: " + rep.detail;
            return RB_ERR_VERIFY;
        }
        return RB_OK;
    });
}

rb_status rb_simulate(const char* pattern, double rho, int occasions, int replications,
                      uint64_t seed, const rb_options* opts, const char* format,
                      char** report) {
    if (!pattern) return null_argument("pattern");
    if (!format) return null_argument("format");
    if (!report) return null_argument("report");
    *report = nullptr;
    return guarded([&] {
        rotablue::RecurrenceSolution sol = analyze_complete(pattern, rho, opts);
        rotablue::PanelConfig cfg;
        cfg.params = rotablue::ModelParams{sol.pattern, sol.rho};
        cfg.occasions = occasions > 0
                            ? occasions
                            : rotablue::truncation_length(sol) + sol.pattern.p + 30;
        cfg.replications = replications;
        cfg.seed = seed;
        rotablue::SimulationReport rep = rotablue::empirical_variance(cfg, sol);
        std::string text;
        std::string_view f(format);
        if (f == "json")
            text = rotablue::simulation_to_json(rep).dump(2) + "\n";
        else if (f == "csv")
            text = rotablue::simulation_to_csv(rep);
        else if (f == "pretty")
            text = rotablue::simulation_to_pretty(rep);
        else
            rotablue::fail(rotablue::errc::invalid_config,
                           "unknown format (expected json, csv, or pretty)");
        *report = dup_string(text);
        if (!*report) return RB_ERR_NUMERIC;
        if (!rep.pass) {
            g_last_error = "VerificationFailed: empirical variance outside 3 standard errors";
            return RB_ERR_VERIFY;
        }
        return RB_OK;
    });
}

} // extern "C"
