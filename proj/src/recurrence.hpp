#pragma once

#include <deque>
#include <vector>

#include <Eigen/Dense>

#include "pattern.hpp"
#include "qpoly.hpp"
#include "roots.hpp"

namespace rotablue {

// Block system in the unit-disk parameters d_m. Shape (p*h + h + 1) x
// (p*(h+1)): one block column per root, one (h+1)-tall top block row of
// Gt(d_m) blocks, then a block diagonal of G(d_m) blocks (h rows each).
struct SMatrix {
    Eigen::MatrixXcd entries;
    int p = 0;
    int h = 0;
};

SMatrix build_s(const CascadePattern& pattern, double rho, const std::vector<cplx>& ds);

// Full column rank p*(h+1), decided by singular values with relative cutoff
// tol_rank * sigma_max.
AssumptionDecision check_assumption_two(const SMatrix& s, double tol_rank = 1e-10);

// Least-squares solution of S c = e1 reshaped to (h+1) x p: row 0 is the
// j = 0 multiplier, rows 1..h follow the gap positions ascending; column m
// belongs to root d_{m+1}. The system is consistent by construction: a
// residual above 1e-8 throws InconsistentSystem. residual_out (optional)
// receives ||S c - e1||.
Eigen::MatrixXcd solve_c(const SMatrix& s, double* residual_out = nullptr);

// a_k = (-1)^{k+1} e_k(d_1..d_p) via expansion of prod (z - d_m); the
// imaginary residue must stay below 1e-8 (ImaginaryResidue otherwise).
std::vector<double> recurrence_coeffs(const std::vector<cplx>& ds,
                                      double* imag_residue_out = nullptr);

// v_i(d) = d^i - sum_{l=1..i} a_l d^{i-l}; v_0 = 1, v_{-1} = 0.
cplx v_poly(int i, cplx d, const std::vector<double>& a);

// The p+1 observation-weight vectors of the recursion,
//   r_i = sum_m (v_i(d_m) I - v_{i-1}(d_m) C^T) M(d_m) y_m,
// where M(d) = D (I - dC), D = (I - C C^T)^{-1} and y_m collects the
// multipliers: c_{0,m} over all slots plus c_{j,m} at each gap slot j.
// Gap entries are verified <= 1e-8 and then zeroed exactly.
std::vector<Eigen::VectorXd> r_vectors(const CascadePattern& pattern, double rho,
                                       const std::vector<cplx>& ds, const Eigen::MatrixXcd& c,
                                       const std::vector<double>& a,
                                       double* imag_residue_out = nullptr);

struct Residuals {
    double root = 0.0;   // max |Q_p(x_m)|
    double system = 0.0; // ||S c - e1||
    double imag = 0.0;   // worst imaginary residue dropped in a and r
};

// Everything the recursion needs, plus the diagnostics that certify it.
// When an assumption fails the later fields stay empty and `complete` is
// false; fields computed before the failure point are still populated.
struct RecurrenceSolution {
    CascadePattern pattern;
    double rho = 0.0;
    RealPolynomial qp;
    std::vector<cplx> xs;
    std::vector<cplx> ds;
    AssumptionDecision assumption1;
    AssumptionDecision assumption2;
    std::vector<double> a;              // length p
    Eigen::MatrixXcd c;                 // (h+1) x p
    std::vector<Eigen::VectorXd> r;     // p+1 vectors in R^N
    double variance = 0.0;              // sum_m c_{0,m}
    Residuals residuals;
    bool complete = false;

    double max_abs_d() const;
};

struct AnalyzeOptions {
    double tol_root = 1e-8;  // root residual bound relative to max|coeff|
    double tol_rank = 1e-10; // singular-value cutoff relative to sigma_max
};

// Full pipeline: Q_p -> roots -> assumption I -> d_m, a -> S -> assumption II
// -> c -> r, variance. Assumption failures return a partial solution;
// residual violations throw.
RecurrenceSolution analyze(const ModelParams& params, const AnalyzeOptions& opts = {});

// Number of weight terms after which the geometric tail drops below 1e-12:
// ceil(log 1e-12 / log max|d_m|), floored at p + 1.
int truncation_length(const RecurrenceSolution& sol);

// Weights w_0..w_{L-1} of the moving-average form of the estimator, unrolled
// from the recursion: w_i = r_i [i <= p] + sum_{m=1..min(i,p)} a_m w_{i-m}.
std::vector<Eigen::VectorXd> unroll_weights(const RecurrenceSolution& sol, int L);

// Same weights along the independent closed-form path:
// w_0 = sum_m M(d_m) y_m, w_i = sum_m d_m^{i-1} (d_m I - C^T) M(d_m) y_m.
Eigen::VectorXd closed_form_weight(const RecurrenceSolution& sol, int i);

// Streaming estimator. Feed one observation vector per occasion (N slots;
// gap slots are ignored). The first p occasions are bootstrapped by direct
// weighting over the available history; afterwards the recursion runs on
// O(p) state.
class RecursiveEstimator {
public:
    explicit RecursiveEstimator(const RecurrenceSolution& sol);
    double feed(const Eigen::VectorXd& obs);
    long occasions_seen() const { return t_; }

private:
    Eigen::VectorXd masked(const Eigen::VectorXd& obs) const;

    const RecurrenceSolution& sol_;
    std::vector<Eigen::VectorXd> bootstrap_weights_; // w_0..w_{p-1}
    std::vector<Eigen::VectorXd> history_;           // only during bootstrap
    std::deque<Eigen::VectorXd> recent_obs_;         // last p+1 observations
    std::deque<double> recent_est_;                  // last p estimates
    long t_ = 0;
};

// Estimates for every occasion of `data` (throws InsufficientHistory when
// fewer than p occasions are supplied).
std::vector<double> estimate_series(const RecurrenceSolution& sol,
                                    const std::vector<Eigen::VectorXd>& data);

// Reference path for tests and verification: estimate at the last occasion of
// `data` by direct truncated weighting with L terms.
double direct_estimate(const RecurrenceSolution& sol, const std::vector<Eigen::VectorXd>& data,
                       int L);

} // namespace rotablue
