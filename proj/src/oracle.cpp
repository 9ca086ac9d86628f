#include "oracle.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace rotablue {

namespace {

constexpr double kKktResidualTol = 1e-10;
constexpr double kWeightGapTol = 1e-6;
constexpr double kVarianceGapTol = 1e-8;

} // namespace

OracleSolution solve_finite_blue(const ModelParams& params, int T) {
    if (T < 1) fail(errc::invalid_config, "oracle horizon must be >= 1");
    validate_rho(params.rho);

    const CascadePattern& pat = params.pattern;
    const int N = pat.N;

    std::vector<int> in_slots;
    for (int k = 0; k < N; ++k)
        if (pat.eps[k] == 1) in_slots.push_back(k);
    const int n = static_cast<int>(in_slots.size());

    // cov(X_{t-i}, X_{t-j}^T) = C^{j-i} for j >= i with C nilpotent, so only
    // lags below N contribute. Powers restricted to in-sample slots give the
    // quadratic-form blocks directly.
    std::vector<Eigen::MatrixXd> cpow_restricted(N);
    {
        Eigen::MatrixXd C = covariance_matrix(params);
        Eigen::MatrixXd power = Eigen::MatrixXd::Identity(N, N);
        for (int k = 0; k < N; ++k) {
            Eigen::MatrixXd block(n, n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) block(a, b) = power(in_slots[a], in_slots[b]);
            cpow_restricted[k] = block;
            power = (power * C).eval();
        }
    }

    const int nv = T * n; // weight variables, gap slots eliminated
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(nv, nv);
    for (int i = 0; i < T; ++i) {
        for (int j = i; j < T && j - i < N; ++j) {
            const Eigen::MatrixXd& block = cpow_restricted[j - i];
            Q.block(i * n, j * n, n, n) = block;
            if (j > i) Q.block(j * n, i * n, n, n) = block.transpose();
        }
    }

    // Constraints: weights on the current occasion sum to one, on every past
    // occasion to zero.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(T, nv);
    for (int i = 0; i < T; ++i)
        for (int a = 0; a < n; ++a) A(i, i * n + a) = 1.0;

    const int dim = nv + T;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim, dim);
    kkt.topLeftCorner(nv, nv) = 2.0 * Q;
    kkt.topRightCorner(nv, T) = A.transpose();
    kkt.bottomLeftCorner(T, nv) = A;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    rhs(nv) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt);
    Eigen::VectorXd z = lu.solve(rhs);

    double scale = 1.0 + kkt.cwiseAbs().rowwise().sum().maxCoeff() * z.cwiseAbs().maxCoeff();
    double residual = (kkt * z - rhs).cwiseAbs().maxCoeff();
    if (!z.allFinite() || residual > kKktResidualTol * scale) {
        std::ostringstream os;
        os << "saddle-point solve residual " << residual << " exceeds " << kKktResidualTol
           << " * scale = " << kKktResidualTol * scale;
        fail(errc::singular_kkt, os.str());
    }

    OracleSolution out;
    out.horizon = T;
    out.kkt_residual = residual;
    out.weights.assign(T, Eigen::VectorXd::Zero(N));
    for (int i = 0; i < T; ++i)
        for (int a = 0; a < n; ++a) out.weights[i](in_slots[a]) = z(i * n + a);
    Eigen::VectorXd u = z.head(nv);
    out.variance = u.dot(Q * u);
    out.lambda00 = -z(nv) / 2.0;
    return out;
}

int default_horizon(const RecurrenceSolution& sol) {
    double maxd = sol.max_abs_d();
    int T = 50;
    if (maxd > 0.0 && maxd < 1.0)
        T = std::max(T, 4 * static_cast<int>(std::ceil(1.0 / (1.0 - maxd))));
    return T;
}

ComparisonReport compare_oracle_vs_recursion(const RecurrenceSolution& sol, int T) {
    if (!sol.complete)
        fail(errc::invalid_config, "oracle comparison needs a complete solution");

    ModelParams params{sol.pattern, sol.rho};
    OracleSolution oracle = solve_finite_blue(params, T);
    std::vector<Eigen::VectorXd> w = unroll_weights(sol, T);

    ComparisonReport report;
    report.horizon = T;
    report.variance_recursion = sol.variance;
    report.variance_oracle = oracle.variance;
    report.variance_gap = std::abs(sol.variance - oracle.variance);

    // The last 2p oracle weights feel the truncation boundary; compare the
    // interior only.
    const int limit = T - 2 * sol.pattern.p;
    double gap = 0.0;
    for (int i = 0; i < limit; ++i)
        gap = std::max(gap, (oracle.weights[i] - w[i]).cwiseAbs().maxCoeff());
    report.max_weight_gap = gap;
    report.pass = gap <= kWeightGapTol && report.variance_gap <= kVarianceGapTol;
    return report;
}

} // namespace rotablue
