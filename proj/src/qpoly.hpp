#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "pattern.hpp"

namespace rotablue {

// Dense real polynomial in the monomial basis, coefficients stored ascending.
// Trailing coefficients below 1e-12 relative to the largest magnitude are
// trimmed so degree() is meaningful after cancellation-prone arithmetic.
class RealPolynomial {
public:
    RealPolynomial() : coeffs_{0.0} {}
    explicit RealPolynomial(std::vector<double> ascending_coeffs);

    static RealPolynomial constant(double c) { return RealPolynomial({c}); }
    // Chebyshev polynomial of the first kind, T_0 = 1, T_1 = x,
    // T_{k+1} = 2x T_k - T_{k-1}.
    static RealPolynomial chebyshev(int k);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double max_abs_coeff() const;

    double operator()(double x) const;
    std::complex<double> operator()(std::complex<double> x) const;

    RealPolynomial derivative() const;

    friend RealPolynomial operator+(const RealPolynomial& a, const RealPolynomial& b);
    friend RealPolynomial operator-(const RealPolynomial& a, const RealPolynomial& b);
    friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b);
    friend RealPolynomial operator*(double s, const RealPolynomial& a);

private:
    void trim();
    std::vector<double> coeffs_;
};

// Relative trim / degree-decision tolerance shared by the module.
inline constexpr double kCoeffTrimTol = 1e-12;

// Tridiagonal m x m matrix with 1+rho^2 on the diagonal and -rho off it.
Eigen::MatrixXd r_matrix(int m, double rho);

// Inverse of r_matrix, column by column via tridiagonal solves. Throws
// SingularR if a pivot collapses (cannot happen for 0 < |rho| < 1).
Eigen::MatrixXd r_matrix_inverse(int m, double rho);

// The degree-(m-1) polynomial x -> tr(T_m(x) R_m^{-1}), where T_m(x) is the
// symmetric Toeplitz matrix with entry (i,j) = T_{|i-j|}(x).
RealPolynomial trace_polynomial(int m, double rho);

// Q_p(x) = (N-1)(1+rho^2-2 rho x) + 1-rho^2
//          - (1+rho^2-2 rho x)^2 * sum_j tr(T_{m_j}(x) R_{m_j}^{-1});
// degree equals the pattern coverage p (the trace sum is empty when h = 0).
RealPolynomial build_qp(const ModelParams& params);

} // namespace rotablue
