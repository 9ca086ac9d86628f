#include "simulate.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

#include "errors.hpp"

namespace rotablue {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t rng_key(std::uint64_t seed, std::uint64_t replication, std::uint64_t unit) {
    return splitmix64(splitmix64(splitmix64(seed) ^ replication) ^ unit);
}

double rng_uniform(std::uint64_t key, std::uint64_t counter) {
    std::uint64_t raw = splitmix64(key ^ splitmix64(counter ^ 0xd1b54a32d192ed03ULL));
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

double rng_normal(std::uint64_t key, std::uint64_t index) {
    // Box-Muller on a dedicated pair of uniforms per draw; u1 shifted off 0.
    double u1 = 1.0 - rng_uniform(key, 2 * index);
    double u2 = rng_uniform(key, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void validate_config(const PanelConfig& cfg, int bootstrap_len) {
    if (cfg.occasions < bootstrap_len + 10)
        fail(errc::invalid_config,
             "occasions must be at least bootstrap length + 10 = " +
                 std::to_string(bootstrap_len + 10) + ", got " + std::to_string(cfg.occasions));
    if (cfg.replications < 100)
        fail(errc::invalid_config,
             "replications must be >= 100, got " + std::to_string(cfg.replications));
    if (!cfg.mu.empty() && static_cast<int>(cfg.mu.size()) < cfg.occasions)
        fail(errc::invalid_config, "mu sequence shorter than the occasion count");
}

std::vector<double> default_mu(int occasions) {
    std::vector<double> mu(static_cast<size_t>(std::max(occasions, 0)));
    for (int j = 0; j < occasions; ++j) mu[static_cast<size_t>(j)] = std::sin(j / 5.0);
    return mu;
}

Eigen::MatrixXd generate_panel(const PanelConfig& cfg, long replication) {
    const CascadePattern& pat = cfg.params.pattern;
    const int N = pat.N;
    const int O = cfg.occasions;
    const double rho = cfg.params.rho;
    const double innov = std::sqrt(1.0 - rho * rho);
    if (!cfg.mu.empty() && static_cast<int>(cfg.mu.size()) < O)
        fail(errc::invalid_config, "mu sequence shorter than the occasion count");
    const std::vector<double> mu = cfg.mu.empty() ? default_mu(O) : cfg.mu;

    Eigen::MatrixXd panel(O, N);

    // Slot k on occasion t holds unit t + k; unit u participates on occasions
    // u-N+1 .. u. Its AR(1) path starts at entry even when that predates
    // occasion 0, so every unit is equally stationary.
    for (long u = 0; u < static_cast<long>(O) + N - 1; ++u) {
        const std::uint64_t key =
            rng_key(cfg.seed, static_cast<std::uint64_t>(replication), static_cast<std::uint64_t>(u));
        const long entry = u - N + 1;
        double z = 0.0;
        for (int k = 0; k < N; ++k) {
            z = (k == 0) ? rng_normal(key, 0)
                         : rho * z + innov * rng_normal(key, static_cast<std::uint64_t>(k));
            const long t = entry + k;
            if (t < 0 || t >= O) continue;
            panel(t, u - t) = mu[static_cast<size_t>(t)] + z;
        }
    }

    for (int j : pat.gap_positions)
        panel.col(j - 1).setConstant(std::numeric_limits<double>::quiet_NaN());
    return panel;
}

int thread_budget() {
    if (const char* env = std::getenv("ROTABLUE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(std::min<long>(v, 256));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

SimulationReport empirical_variance(const PanelConfig& cfg, const RecurrenceSolution& sol) {
    if (!sol.complete)
        fail(errc::invalid_config, "simulation needs a complete solution (assumptions PASS)");
    validate_config(cfg, sol.pattern.p);

    PanelConfig run = cfg;
    if (run.mu.empty()) run.mu = default_mu(run.occasions);

    const long R = run.replications;
    const int O = run.occasions;
    const int N = sol.pattern.N;
    const double mu_last = run.mu[static_cast<size_t>(O - 1)];

    // Per-replication errors land in a fixed slot each, so the reduction
    // below is identical for any thread count.
    std::vector<double> errors(static_cast<size_t>(R));
    auto run_chunk = [&](long lo, long hi) {
        std::vector<Eigen::VectorXd> data(static_cast<size_t>(O), Eigen::VectorXd::Zero(N));
        for (long rep = lo; rep < hi; ++rep) {
            Eigen::MatrixXd panel = generate_panel(run, rep);
            for (int t = 0; t < O; ++t) data[static_cast<size_t>(t)] = panel.row(t).transpose();
            RecursiveEstimator estimator(sol);
            double estimate = 0.0;
            for (int t = 0; t < O; ++t) estimate = estimator.feed(data[static_cast<size_t>(t)]);
            errors[static_cast<size_t>(rep)] = estimate - mu_last;
        }
    };

    const int threads = std::max(1, std::min<int>(thread_budget(), static_cast<int>(R)));
    if (threads == 1) {
        run_chunk(0, R);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        const long chunk = (R + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            long lo = w * chunk;
            long hi = std::min(R, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_chunk, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }

    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= static_cast<double>(R);
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    const double sample_var = ss / static_cast<double>(R - 1);

    SimulationReport report;
    report.replications = R;
    report.seed = run.seed;
    report.theoretical_variance = sol.variance;
    report.empirical_variance = sample_var;
    // Errors are Gaussian (the estimator is linear in the data), so the
    // sample variance has standard error s^2 sqrt(2/(R-1)).
    report.std_error = sample_var * std::sqrt(2.0 / static_cast<double>(R - 1));
    report.bias = mean;
    report.bias_std_error = std::sqrt(sample_var / static_cast<double>(R));
    report.pass =
        std::abs(sample_var - report.theoretical_variance) < 3.0 * report.std_error;
    return report;
}

} // namespace rotablue
