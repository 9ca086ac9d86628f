#include "qpoly.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace rotablue {

RealPolynomial::RealPolynomial(std::vector<double> ascending_coeffs)
    : coeffs_(std::move(ascending_coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    trim();
}

void RealPolynomial::trim() {
    double scale = max_abs_coeff();
    if (scale == 0.0) {
        coeffs_.assign(1, 0.0);
        return;
    }
    size_t last = coeffs_.size();
    while (last > 1 && std::abs(coeffs_[last - 1]) <= kCoeffTrimTol * scale) --last;
    coeffs_.resize(last);
}

double RealPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

RealPolynomial RealPolynomial::chebyshev(int k) {
    if (k <= 0) return RealPolynomial({1.0});
    if (k == 1) return RealPolynomial({0.0, 1.0});
    std::vector<double> prev{1.0};       // T_0
    std::vector<double> cur{0.0, 1.0};   // T_1
    for (int j = 2; j <= k; ++j) {
        std::vector<double> next(j + 1, 0.0);
        for (size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
        for (size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return RealPolynomial(std::move(cur));
}

double RealPolynomial::operator()(double x) const {
    double acc = 0.0;
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

std::complex<double> RealPolynomial::operator()(std::complex<double> x) const {
    std::complex<double> acc = 0.0;
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

RealPolynomial RealPolynomial::derivative() const {
    if (coeffs_.size() <= 1) return RealPolynomial({0.0});
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return RealPolynomial(std::move(d));
}

RealPolynomial operator+(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) out[i] += b.coeffs_[i];
    return RealPolynomial(std::move(out));
}

RealPolynomial operator-(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) out[i] -= b.coeffs_[i];
    return RealPolynomial(std::move(out));
}

RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
        for (size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return RealPolynomial(std::move(out));
}

RealPolynomial operator*(double s, const RealPolynomial& a) {
    std::vector<double> out = a.coeffs_;
    for (double& c : out) c *= s;
    return RealPolynomial(std::move(out));
}

Eigen::MatrixXd r_matrix(int m, double rho) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        R(i, i) = 1.0 + rho * rho;
        if (i + 1 < m) {
            R(i, i + 1) = -rho;
            R(i + 1, i) = -rho;
        }
    }
    return R;
}

Eigen::MatrixXd r_matrix_inverse(int m, double rho) {
    // Thomas elimination factored once, then back-substitution per unit
    // vector: O(m^2) total and keeps the tridiagonal structure exact.
    const double diag = 1.0 + rho * rho;
    const double off = -rho;

    std::vector<double> pivot(m);
    pivot[0] = diag;
    for (int i = 1; i < m; ++i) {
        if (std::abs(pivot[i - 1]) < 1e-300)
            fail(errc::singular_r, "tridiagonal pivot collapsed at row " + std::to_string(i));
        pivot[i] = diag - off * off / pivot[i - 1];
    }
    if (std::abs(pivot[m - 1]) < 1e-300)
        fail(errc::singular_r, "tridiagonal pivot collapsed at row " + std::to_string(m));

    Eigen::MatrixXd inv(m, m);
    std::vector<double> y(m), x(m);
    for (int col = 0; col < m; ++col) {
        for (int i = 0; i < m; ++i) {
            double rhs = (i == col) ? 1.0 : 0.0;
            y[i] = rhs - (i > 0 ? off / pivot[i - 1] * y[i - 1] : 0.0);
        }
        for (int i = m - 1; i >= 0; --i)
            x[i] = (y[i] - (i + 1 < m ? off * x[i + 1] : 0.0)) / pivot[i];
        for (int i = 0; i < m; ++i) inv(i, col) = x[i];
    }
    return inv;
}

RealPolynomial trace_polynomial(int m, double rho) {
    const Eigen::MatrixXd inv = r_matrix_inverse(m, rho);

    // tr(T_m(x) R^{-1}) = sum over diagonals: the |i-j| = k entries of R^{-1}
    // all multiply T_k(x), so the trace collapses to a Chebyshev combination.
    RealPolynomial acc = inv.trace() * RealPolynomial::chebyshev(0);
    for (int k = 1; k < m; ++k) {
        double w = 0.0;
        for (int i = 0; i + k < m; ++i) w += inv(i, i + k);
        acc = acc + (2.0 * w) * RealPolynomial::chebyshev(k);
    }
    return acc;
}

RealPolynomial build_qp(const ModelParams& params) {
    const double rho = params.rho;
    const int N = params.pattern.N;

    RealPolynomial alpha({1.0 + rho * rho, -2.0 * rho});
    RealPolynomial qp = static_cast<double>(N - 1) * alpha +
                        RealPolynomial::constant(1.0 - rho * rho);

    if (!params.pattern.gap_sizes.empty()) {
        RealPolynomial trace_sum;
        for (int m : params.pattern.gap_sizes)
            trace_sum = trace_sum + trace_polynomial(m, rho);
        qp = qp - alpha * alpha * trace_sum;
    }
    return qp;
}

} // namespace rotablue
