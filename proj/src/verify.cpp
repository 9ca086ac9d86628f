#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "qpoly.hpp"

namespace rotablue {

namespace {

// H_m(d): tridiagonal with 1 + rho^2 on the diagonal, -d rho above and
// -rho/d below.
Eigen::MatrixXcd h_matrix(int m, double rho, cplx d) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        H(i, i) = 1.0 + rho * rho;
        if (i + 1 < m) {
            H(i, i + 1) = -d * rho;
            H(i + 1, i) = -rho / d;
        }
    }
    return H;
}

// The bordered matrix whose singularity certifies each d_m: scalar head
// (N-1)(1 - rho d)(1 - rho/d) + 1 - rho^2, borders (1 - rho d)(1 - rho/d),
// and the block diagonal of the H_m(d).
Eigen::MatrixXcd gbar_matrix(const CascadePattern& pat, double rho, cplx d) {
    const int h = pat.h;
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(h + 1, h + 1);
    const cplx border = (1.0 - rho * d) * (1.0 - rho / d);
    G(0, 0) = static_cast<double>(pat.N - 1) * border + (1.0 - rho * rho);
    for (int k = 1; k <= h; ++k) {
        G(0, k) = border;
        G(k, 0) = border;
    }
    int off = 1;
    for (int m : pat.gap_sizes) {
        G.block(off, off, m, m) = h_matrix(m, rho, d);
        off += m;
    }
    return G;
}

} // namespace

VerificationReport run_verification(const RecurrenceSolution& sol, int horizon,
                                    double a1_perturbation) {
    if (!sol.complete)
        fail(errc::invalid_config, "verification needs a complete solution (assumptions PASS)");

    RecurrenceSolution probe = sol;
    if (a1_perturbation != 0.0) probe.a[0] += a1_perturbation;

    const CascadePattern& pat = sol.pattern;
    const int N = pat.N;
    const int p = pat.p;
    const double rho = sol.rho;
    const int T = horizon > 0 ? horizon : default_horizon(sol);

    VerificationReport rep;
    rep.horizon = T;
    rep.variance_recursion = sol.variance;

    // Oracle comparison on the probe's unrolled weights.
    ModelParams params{pat, rho};
    OracleSolution oracle = solve_finite_blue(params, T);
    rep.variance_oracle = oracle.variance;
    rep.variance_gap = std::abs(sol.variance - oracle.variance);
    rep.kkt_residual = oracle.kkt_residual;

    const int unroll_len = std::max({T, 31 + N, 42, truncation_length(sol) + p});
    std::vector<Eigen::VectorXd> w = unroll_weights(probe, unroll_len);
    for (int i = 0; i < T - 2 * p; ++i)
        rep.max_weight_gap =
            std::max(rep.max_weight_gap, (oracle.weights[i] - w[i]).cwiseAbs().maxCoeff());

    // Unbiasedness of the unrolled weights: current occasion sums to one,
    // every past occasion to zero.
    rep.unbiasedness = std::abs(w[0].sum() - 1.0);
    for (int i = 1; i < std::min(unroll_len, std::max(T, 60)); ++i)
        rep.unbiasedness = std::max(rep.unbiasedness, std::abs(w[i].sum()));

    // Gap slots of the closed-form weights (the unrolled path pins them to
    // zero exactly, so check the independent path).
    for (int i = 0; i <= std::min(40, unroll_len - 1); ++i) {
        Eigen::VectorXd cf = closed_form_weight(sol, i);
        for (int j : pat.gap_positions)
            rep.gap_entries = std::max(rep.gap_entries, std::abs(cf(j - 1)));
        rep.closed_vs_unrolled =
            std::max(rep.closed_vs_unrolled, (cf - w[static_cast<size_t>(i)]).cwiseAbs().maxCoeff());
    }

    // Support condition: w_i + sum_k C^k w_{i+k} + sum_k (C^T)^k w_{i-k}
    // must equal lambda_{0,i} 1 + sum_{j in gaps} lambda_{j,i} e_j with
    // lambda_{j,i} = sum_m c_{j,m} d_m^i.
    std::vector<Eigen::MatrixXd> cpow(N);
    {
        Eigen::MatrixXd C = covariance_matrix(params);
        cpow[0] = Eigen::MatrixXd::Identity(N, N);
        for (int k = 1; k < N; ++k) cpow[k] = cpow[k - 1] * C;
    }
    for (int i = 0; i <= 30; ++i) {
        Eigen::VectorXd zeta = w[static_cast<size_t>(i)];
        for (int k = 1; k < N; ++k) {
            if (i + k < unroll_len) zeta += cpow[k] * w[static_cast<size_t>(i + k)];
            if (i - k >= 0) zeta += cpow[k].transpose() * w[static_cast<size_t>(i - k)];
        }
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(N);
        for (int jidx = 0; jidx <= pat.h; ++jidx) {
            cplx lam = 0.0;
            for (int m = 0; m < static_cast<int>(sol.ds.size()); ++m)
                lam += sol.c(jidx, m) * std::pow(sol.ds[m], i);
            if (jidx == 0)
                expected.array() += lam.real();
            else
                expected(pat.gap_positions[jidx - 1] - 1) += lam.real();
        }
        rep.lagrange = std::max(rep.lagrange, (zeta - expected).cwiseAbs().maxCoeff());
    }

    // Per-root singularity certificate and polynomial residual.
    const double coeff_scale = sol.qp.max_abs_coeff();
    for (cplx d : sol.ds) {
        const cplx x = 0.5 * (d + 1.0 / d);
        rep.qp_at_roots = std::max(rep.qp_at_roots, std::abs(sol.qp(x)) / coeff_scale);

        if (pat.h > 0) {
            Eigen::MatrixXcd G = gbar_matrix(pat, rho, d);
            const int h = pat.h;
            cplx det_h22 = G.block(1, 1, h, h).determinant();
            double bound = 1.0 + std::abs(det_h22);
            rep.det_gbar = std::max(rep.det_gbar, std::abs(G.determinant()) / bound);
        } else {
            Eigen::MatrixXcd G = gbar_matrix(pat, rho, d);
            rep.det_gbar = std::max(rep.det_gbar, std::abs(G(0, 0)));
        }

        for (int m : pat.gap_sizes) {
            // H_m(d) = D_m^{-1} R_m D_m with D_m = diag(1, d, ..., d^{m-1}).
            Eigen::MatrixXcd H = h_matrix(m, rho, d);
            Eigen::VectorXcd dm(m);
            for (int i = 0; i < m; ++i) dm(i) = std::pow(d, i);
            Eigen::MatrixXcd rebuilt =
                dm.cwiseInverse().asDiagonal() * r_matrix(m, rho) * dm.asDiagonal();
            rep.hm_decomposition =
                std::max(rep.hm_decomposition, (H - rebuilt).cwiseAbs().maxCoeff());

            // 1^T H_m(d)^{-1} 1 = tr(T_m(x) R_m^{-1}).
            Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(m);
            cplx direct = ones.dot(H.partialPivLu().solve(ones));
            cplx via_trace = trace_polynomial(m, rho)(x);
            rep.trace_identity = std::max(rep.trace_identity, std::abs(direct - via_trace));
        }
    }

    // Variance as the quadratic form of the truncated weight expansion.
    {
        const int L = std::min(unroll_len, std::max(truncation_length(sol) + p, 1));
        double quad = 0.0;
        for (int i = 0; i < L; ++i) {
            quad += w[static_cast<size_t>(i)].squaredNorm();
            for (int k = 1; k < N && i + k < L; ++k)
                quad += 2.0 * w[static_cast<size_t>(i)].dot(cpow[k] * w[static_cast<size_t>(i + k)]);
        }
        rep.variance_quadform = std::abs(quad - sol.variance);
    }

    std::ostringstream failed;
    auto gate = [&](const char* name, double value, double bound) {
        if (!(value <= bound)) failed << name << " (" << value << " > " << bound << ") ";
    };
    gate("weight_gap", rep.max_weight_gap, 1e-6);
    gate("variance_gap", rep.variance_gap, 1e-8);
    gate("unbiasedness", rep.unbiasedness, 1e-8);
    gate("gap_entries", rep.gap_entries, 1e-8);
    gate("lagrange", rep.lagrange, 1e-8);
    gate("det_gbar", rep.det_gbar, 1e-8);
    gate("qp_at_roots", rep.qp_at_roots, 1e-8);
    gate("hm_decomposition", rep.hm_decomposition, 1e-10);
    gate("trace_identity", rep.trace_identity, 1e-9);
    gate("closed_vs_unrolled", rep.closed_vs_unrolled, 1e-9);
    gate("variance_quadform", rep.variance_quadform, 1e-8);
    rep.detail = failed.str();
    rep.pass = rep.detail.empty();
    if (rep.pass) rep.detail = "all checks within bounds";
    return rep;
}

} // namespace rotablue
