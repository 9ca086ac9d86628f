#pragma once

#include <string>

#include "oracle.hpp"
#include "recurrence.hpp"

namespace rotablue {

// One verification run: the oracle comparison plus every internal identity
// the construction must satisfy. Each field is the worst residual observed;
// `pass` requires all of them under their stated bounds.
struct VerificationReport {
    int horizon = 0;
    double variance_recursion = 0.0;
    double variance_oracle = 0.0;
    double variance_gap = 0.0;       // <= 1e-8
    double max_weight_gap = 0.0;     // <= 1e-6, interior weights
    double kkt_residual = 0.0;       // <= 1e-10 * scale (checked inside the solve)
    double unbiasedness = 0.0;       // <= 1e-8: |1^T w_0 - 1| and |1^T w_i|
    double gap_entries = 0.0;        // <= 1e-8: closed-form weights at gap slots
    double lagrange = 0.0;           // <= 1e-8: support condition, i = 0..30
    double det_gbar = 0.0;           // <= 1e-8 * (1 + |det H22|) at each d_m
    double qp_at_roots = 0.0;        // <= 1e-8 * max|coeff| at x(d_m)
    double hm_decomposition = 0.0;   // <= 1e-10 entrywise at each d_m
    double trace_identity = 0.0;     // <= 1e-9 at each d_m
    double closed_vs_unrolled = 0.0; // <= 1e-9, i = 0..40
    double variance_quadform = 0.0;  // <= 1e-8
    bool pass = false;
    std::string detail;              // names of the checks that failed
};

// a1_perturbation is a harness self-test hook: it corrupts the leading
// recursion coefficient before the weight comparisons (0 disables it).
VerificationReport run_verification(const RecurrenceSolution& sol, int horizon,
                                    double a1_perturbation = 0.0);

} // namespace rotablue
