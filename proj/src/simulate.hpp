#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pattern.hpp"
#include "recurrence.hpp"

namespace rotablue {

// Counter-based normal stream: every draw is a pure function of
// (seed, replication, unit, index), so replications can run on any number of
// threads with bit-identical output.
std::uint64_t rng_key(std::uint64_t seed, std::uint64_t replication, std::uint64_t unit);
double rng_uniform(std::uint64_t key, std::uint64_t counter); // in [0, 1)
double rng_normal(std::uint64_t key, std::uint64_t index);    // standard normal

struct PanelConfig {
    ModelParams params;
    std::vector<double> mu;   // true means; defaulted to sin(j/5) when empty
    int occasions = 0;
    long replications = 0;
    std::uint64_t seed = 0;
};

// Throws InvalidConfig unless occasions >= bootstrap length + 10 and
// replications >= 100.
void validate_config(const PanelConfig& cfg, int bootstrap_len);

// One replication of the rotation panel: occasions x N, entry (t, k) is the
// value of the unit occupying slot k on occasion t. Units follow independent
// stationary unit-variance AR(1) paths (innovation variance 1 - rho^2)
// shifted by mu_t; each occasion the slot-1 unit leaves and a new unit enters
// at slot N. Gap-slot entries are set to NaN: they are masked out of the
// effective sample and the estimator never reads them.
Eigen::MatrixXd generate_panel(const PanelConfig& cfg, long replication);

struct SimulationReport {
    long replications = 0;
    double theoretical_variance = 0.0;
    double empirical_variance = 0.0;
    double std_error = 0.0; // of the sample variance
    double bias = 0.0;
    double bias_std_error = 0.0;
    bool pass = false; // |empirical - theoretical| < 3 * std_error
    std::uint64_t seed = 0;
};

// Sample variance of (estimate - true mean) at the final occasion across
// replications. Replications run in parallel, capped by ROTABLUE_THREADS.
SimulationReport empirical_variance(const PanelConfig& cfg, const RecurrenceSolution& sol);

// Default mean sequence used when cfg.mu is empty: mu_j = sin(j/5).
std::vector<double> default_mu(int occasions);

// Thread cap: ROTABLUE_THREADS when set and positive, else hardware
// concurrency.
int thread_budget();

} // namespace rotablue
