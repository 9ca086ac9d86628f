#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pattern.hpp"
#include "recurrence.hpp"

namespace rotablue {

// Exact minimizer of the truncated variance quadratic form over T occasions
// of history, subject to the unbiasedness and gap constraints. Serves as an
// independent ground truth for the recursion at desk scale.
struct OracleSolution {
    int horizon = 0;
    std::vector<Eigen::VectorXd> weights; // u_0..u_{T-1}, gap slots exactly zero
    double variance = 0.0;                // u^T Q u
    double kkt_residual = 0.0;
    double lambda00 = 0.0;                // first unbiasedness multiplier / -2
};

// Gap-slot variables are eliminated up front, so the KKT system has
// T*n + T unknowns; the solve must satisfy
// ||KKT z - rhs||_inf <= 1e-10 * (1 + ||KKT||_inf ||z||_inf), else SingularKKT.
OracleSolution solve_finite_blue(const ModelParams& params, int T);

// Horizon for validation runs: max(50, 4 * ceil(1/(1 - max|d_m|))).
int default_horizon(const RecurrenceSolution& sol);

struct ComparisonReport {
    int horizon = 0;
    double variance_recursion = 0.0;
    double variance_oracle = 0.0;
    double variance_gap = 0.0;
    double max_weight_gap = 0.0; // entrywise, over i < T - 2p
    bool pass = false;           // weight gap <= 1e-6 and variance gap <= 1e-8
};

ComparisonReport compare_oracle_vs_recursion(const RecurrenceSolution& sol, int T);

} // namespace rotablue
