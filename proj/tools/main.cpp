#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <rotablue/rotablue.h>

namespace {

// Options shared by every subcommand.
struct Common {
    std::string pattern;
    std::string scheme;
    std::string format;
    std::string out;
    double tol_root = 0.0; // 0 = library default
    double tol_rank = 0.0;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    auto* pat = sub->add_option("--pattern", c.pattern,
                                "Cascade pattern bits, e.g. 110011 (1 = in sample)");
    auto* sch = sub->add_option("--scheme", c.scheme,
                                "Rotation scheme alias a-b-c..., e.g. 4-8-4 or 2-2-2");
    pat->excludes(sch);
    sch->excludes(pat);
    c.format = default_format;
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "pretty"}))
        ->capture_default_str();
    sub->add_option("--out", c.out, "Write the report to this file instead of stdout");
    sub->add_option("--tol-root", c.tol_root, "Root residual tolerance (default 1e-8)");
    sub->add_option("--tol-rank", c.tol_rank, "Rank decision tolerance (default 1e-10)");
}

// Expands --scheme if given and validates the pattern. Returns 0 or the
// process exit code.
int resolve_pattern(Common& c) {
    if (c.pattern.empty() && c.scheme.empty()) {
        std::fprintf(stderr, "error: one of --pattern or --scheme is required\n");
        return 1;
    }
    if (!c.scheme.empty()) {
        char buf[4096];
        if (rb_scheme_expand(c.scheme.c_str(), buf, sizeof buf) != RB_OK) {
            std::fprintf(stderr, "error: %s\n", rb_last_error());
            return 1;
        }
        c.pattern = buf;
    }
    if (rb_pattern_check(c.pattern.c_str()) != RB_OK) {
        std::fprintf(stderr, "error: %s\n", rb_last_error());
        return 1;
    }
    return 0;
}

rb_options make_options(const Common& c) {
    rb_options opts;
    opts.tol_root = c.tol_root;
    opts.tol_rank = c.tol_rank;
    return opts;
}

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    std::ofstream file(out_path);
    if (!file) {
        std::fprintf(stderr, "error: cannot open %s for writing\n", out_path.c_str());
        return 1;
    }
    file << text;
    return 0;
}

int cmd_analyze(Common& c, double rho) {
    if (int rc = resolve_pattern(c)) return rc;
    rb_options opts = make_options(c);
    rb_solution* sol = nullptr;
    rb_status status = rb_analyze(c.pattern.c_str(), rho, &opts, &sol);
    std::string note = rb_last_error();
    if (!sol) {
        std::fprintf(stderr, "error: %s\n", note.c_str());
        return static_cast<int>(status);
    }
    char* text = nullptr;
    rb_status render_status = rb_solution_render(sol, c.format.c_str(), &text);
    if (render_status != RB_OK) {
        std::fprintf(stderr, "error: %s\n", rb_last_error());
        rb_solution_free(sol);
        return static_cast<int>(render_status);
    }
    int write_rc = emit(text, c.out);
    rb_string_free(text);
    rb_solution_free(sol);
    if (write_rc) return write_rc;
    if (status != RB_OK) std::fprintf(stderr, "note: %s\n", note.c_str());
    return static_cast<int>(status);
}

int cmd_verify(Common& c, double rho, int horizon, double corrupt_a1) {
    if (int rc = resolve_pattern(c)) return rc;
    rb_options opts = make_options(c);
    char* report = nullptr;
    rb_status status = rb_verify(c.pattern.c_str(), rho, horizon, corrupt_a1, &opts,
                                 c.format.c_str(), &report);
    std::string note = rb_last_error();
    int write_rc = 0;
    if (report) {
        write_rc = emit(report, c.out);
        rb_string_free(report);
    }
    if (status != RB_OK) std::fprintf(stderr, "error: %s\n", note.c_str());
    if (write_rc && status == RB_OK) return write_rc;
    return static_cast<int>(status);
}

int cmd_simulate(Common& c, double rho, int occasions, long reps, unsigned long long seed) {
    if (int rc = resolve_pattern(c)) return rc;
    rb_options opts = make_options(c);
    char* report = nullptr;
    rb_status status = rb_simulate(c.pattern.c_str(), rho, occasions,
                                   static_cast<int>(reps), seed, &opts, c.format.c_str(),
                                   &report);
    std::string note = rb_last_error();
    int write_rc = 0;
    if (report) {
        write_rc = emit(report, c.out);
        rb_string_free(report);
    }
    if (status != RB_OK) std::fprintf(stderr, "error: %s\n", note.c_str());
    if (write_rc && status == RB_OK) return write_rc;
    return static_cast<int>(status);
}

// Parses "start:stop:step" (commas also accepted) into grid points.
// Every point must satisfy 0 < |rho| < 1.
int parse_grid(const std::string& text, std::vector<double>& grid) {
    std::string norm = text;
    for (char& ch : norm)
        if (ch == ',') ch = ':';
    double start = 0, stop = 0, step = 0;
    char trailing = 0;
    if (std::sscanf(norm.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &trailing) != 3 ||
        step == 0.0) {
        std::fprintf(stderr, "error: --rho-grid expects start:stop:step with step != 0\n");
        return 1;
    }
    double span = (stop - start) / step;
    if (span < -1e-9) {
        std::fprintf(stderr, "error: --rho-grid is empty (step points away from stop)\n");
        return 1;
    }
    long count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) {
        double rho = start + static_cast<double>(i) * step;
        if (std::abs(rho) < 1e-12) {
            std::fprintf(stderr, "error: --rho-grid must not contain 0\n");
            return 1;
        }
        if (std::abs(rho) >= 1.0) {
            std::fprintf(stderr, "error: --rho-grid must stay inside (-1, 1)\n");
            return 1;
        }
        grid.push_back(rho);
    }
    return 0;
}

struct SweepRow {
    double rho = 0.0;
    bool have_solution = false;
    int assumption1 = -1; // 1 pass, 0 fail, -1 not evaluated / error
    int assumption2 = -1;
    bool complete = false;
    double variance = 0.0;
    std::vector<double> a; // empty when unavailable
    std::string error;
};

std::string sweep_csv(const std::vector<SweepRow>& rows, int p) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "rho,p,assumption1,assumption2,variance";
    for (int k = 1; k <= p; ++k) os << ",a_" << k;
    os << '\n';
    auto word = [](int decision) {
        return decision == 1 ? "PASS" : decision == 0 ? "FAIL" : "ERROR";
    };
    for (const SweepRow& row : rows) {
        os << row.rho << ',' << p << ',' << word(row.assumption1) << ','
           << word(row.assumption2) << ',';
        if (row.complete) os << row.variance;
        for (int k = 0; k < p; ++k) {
            os << ',';
            if (k < static_cast<int>(row.a.size())) os << row.a[k];
        }
        os << '\n';
    }
    return os.str();
}

std::string sweep_json(const std::vector<SweepRow>& rows, int p, const std::string& pattern) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    auto word = [](int decision) {
        return decision == 1 ? "pass" : decision == 0 ? "fail" : "error";
    };
    for (const SweepRow& row : rows) {
        nlohmann::ordered_json j;
        j["pattern"] = pattern;
        j["rho"] = row.rho;
        j["p"] = p;
        j["assumption1"] = word(row.assumption1);
        j["assumption2"] = word(row.assumption2);
        if (row.complete) j["variance"] = row.variance;
        if (!row.a.empty()) j["a"] = row.a;
        if (!row.error.empty()) j["error"] = row.error;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::string sweep_pretty(const std::vector<SweepRow>& rows, int p) {
    std::ostringstream os;
    os << std::setprecision(6);
    os << std::setw(8) << "rho" << std::setw(7) << "A-I" << std::setw(7) << "A-II"
       << std::setw(12) << "variance";
    for (int k = 1; k <= p; ++k) os << std::setw(12) << ("a_" + std::to_string(k));
    os << '\n';
    auto word = [](int decision) {
        return decision == 1 ? "PASS" : decision == 0 ? "FAIL" : "ERR";
    };
    for (const SweepRow& row : rows) {
        os << std::setw(8) << row.rho << std::setw(7) << word(row.assumption1) << std::setw(7)
           << word(row.assumption2);
        if (row.complete)
            os << std::setw(12) << row.variance;
        else
            os << std::setw(12) << "-";
        for (int k = 0; k < p; ++k) {
            if (k < static_cast<int>(row.a.size()))
                os << std::setw(12) << row.a[k];
            else
                os << std::setw(12) << "-";
        }
        os << '\n';
    }
    return os.str();
}

int cmd_sweep(Common& c, const std::string& grid_text) {
    if (int rc = resolve_pattern(c)) return rc;
    std::vector<double> grid;
    if (int rc = parse_grid(grid_text, grid)) return rc;
    int p = 0;
    rb_pattern_dims(c.pattern.c_str(), nullptr, nullptr, &p, nullptr);
    rb_options opts = make_options(c);

    std::vector<SweepRow> rows;
    for (double rho : grid) {
        SweepRow row;
        row.rho = rho;
        rb_solution* sol = nullptr;
        rb_status status = rb_analyze(c.pattern.c_str(), rho, &opts, &sol);
        if (sol) {
            row.have_solution = true;
            row.assumption1 = rb_solution_assumption(sol, 1);
            row.assumption2 = rb_solution_assumption(sol, 2);
            row.complete = rb_solution_complete(sol) == 1;
            if (row.complete) rb_solution_variance(sol, &row.variance);
            for (int k = 1; k <= p; ++k) {
                double ak = 0.0;
                if (rb_solution_coeff_a(sol, k, &ak) != RB_OK) break;
                row.a.push_back(ak);
            }
            rb_solution_free(sol);
        } else {
            row.error = rb_last_error();
            std::fprintf(stderr, "note: rho=%g: %s (%s)\n", rho, row.error.c_str(),
                         rb_status_name(status));
        }
        rows.push_back(std::move(row));
    }

    std::string text;
    if (c.format == "csv")
        text = sweep_csv(rows, p);
    else if (c.format == "json")
        text = sweep_json(rows, p, c.pattern);
    else
        text = sweep_pretty(rows, p);
    return emit(text, c.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("rotablue ") + rb_version() +
                 " — optimal recursive estimation for cascade rotation panels"};
    app.require_subcommand(1);
    app.footer("Environment:\n"
               "  ROTABLUE_THREADS   cap the worker threads used for simulation replications\n"
               "\n"
               "Exit codes:\n"
               "  0 success, 1 usage error, 2 assumption I failed, 3 assumption II failed,\n"
               "  4 numerical failure, 5 verification or simulation gate failed");

    Common c_analyze, c_verify, c_simulate, c_sweep;
    double rho_analyze = 0.0, rho_verify = 0.0, rho_simulate = 0.0;
    int horizon = 0, occasions = 0;
    long reps = 10000;
    unsigned long long seed = 1;
    double corrupt_a1 = 0.0;
    std::string grid_text;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Compute the recursion: coefficients, weights, variance");
    add_common(analyze, c_analyze, "pretty");
    analyze->add_option("--rho", rho_analyze, "Autocorrelation, 0 < |rho| < 1")->required();

    CLI::App* verify = app.add_subcommand(
        "verify", "Check the recursion against the finite-horizon solver and identities");
    add_common(verify, c_verify, "pretty");
    verify->add_option("--rho", rho_verify, "Autocorrelation, 0 < |rho| < 1")->required();
    verify->add_option("--horizon", horizon,
                       "Finite-horizon length T (default: picked from the decay rate)");
    verify->add_option("--corrupt-a1", corrupt_a1, "")->group(""); // self-test hook

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo check of the estimator variance on panel data");
    add_common(simulate, c_simulate, "pretty");
    simulate->add_option("--rho", rho_simulate, "Autocorrelation, 0 < |rho| < 1")->required();
    simulate->add_option("--horizon", occasions,
                         "Occasions per replication (default: decay length + 30)");
    simulate->add_option("--reps", reps, "Replications")->capture_default_str();
    simulate->add_option("--seed", seed, "RNG seed")->capture_default_str();

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Analyze a whole rho grid and tabulate the results");
    add_common(sweep, c_sweep, "csv");
    sweep->add_option("--rho-grid", grid_text, "Grid as start:stop:step, e.g. 0.1:0.9:0.1")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (analyze->parsed()) return cmd_analyze(c_analyze, rho_analyze);
    if (verify->parsed()) return cmd_verify(c_verify, rho_verify, horizon, corrupt_a1);
    if (simulate->parsed()) return cmd_simulate(c_simulate, rho_simulate, occasions, reps, seed);
    if (sweep->parsed()) return cmd_sweep(c_sweep, grid_text);
    return 1;
}
