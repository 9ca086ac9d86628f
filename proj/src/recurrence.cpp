#include "recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace rotablue {

namespace {

constexpr double kSystemResidualTol = 1e-8;
constexpr double kImagResidueTol = 1e-8;
constexpr double kGapEntryTol = 1e-8;

// D = (I - C C^T)^{-1}: diagonal with 1/(1-rho^2) everywhere except the last
// slot, which is 1.
Eigen::VectorXd d_diagonal(int N, double rho) {
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(N, 1.0 / (1.0 - rho * rho));
    diag(N - 1) = 1.0;
    return diag;
}

// y_m = c_{0,m} 1 + sum_{j in gaps} c_{j,m} e_j for column m of c.
Eigen::VectorXcd multiplier_vector(const CascadePattern& pattern, const Eigen::MatrixXcd& c,
                                   int m) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Constant(pattern.N, c(0, m));
    for (int g = 0; g < pattern.h; ++g)
        y(pattern.gap_positions[g] - 1) += c(g + 1, m);
    return y;
}

// M(d) y = D (y - d C y); C shifts entries up by one slot scaled by rho.
Eigen::VectorXcd apply_m(const Eigen::VectorXcd& y, cplx d, double rho,
                         const Eigen::VectorXd& ddiag) {
    const int N = static_cast<int>(y.size());
    Eigen::VectorXcd out(N);
    for (int i = 0; i < N; ++i) {
        cplx v = y(i);
        if (i + 1 < N) v -= d * rho * y(i + 1);
        out(i) = ddiag(i) * v;
    }
    return out;
}

// C^T g: shifts entries down by one slot scaled by rho.
Eigen::VectorXcd apply_ct(const Eigen::VectorXcd& g, double rho) {
    const int N = static_cast<int>(g.size());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(N);
    for (int i = 1; i < N; ++i) out(i) = rho * g(i - 1);
    return out;
}

} // namespace

SMatrix build_s(const CascadePattern& pattern, double rho, const std::vector<cplx>& ds) {
    const int p = static_cast<int>(ds.size());
    const int h = pattern.h;
    const int N = pattern.N;
    const double denom = 1.0 - rho * rho;

    for (int m = 0; m < p; ++m)
        if (std::abs(ds[m]) == 0.0)
            fail(errc::zero_d, "unit-disk parameter d_" + std::to_string(m + 1) +
                                   " is zero; the block system is undefined");

    SMatrix s;
    s.p = p;
    s.h = h;
    s.entries = Eigen::MatrixXcd::Zero(p * h + h + 1, p * (h + 1));

    for (int m = 0; m < p; ++m) {
        const cplx d = ds[m];
        const int col0 = m * (h + 1);

        // Top block Gt(d), (h+1) x (h+1): scalar head, bordered by 1 - d rho,
        // then one upper-bidiagonal block (1 on the diagonal, -d rho above)
        // per gap.
        s.entries(0, col0) = (static_cast<double>(N - 1) * (1.0 - d * rho) + denom) / denom;
        for (int k = 1; k <= h; ++k) {
            s.entries(0, col0 + k) = (1.0 - d * rho) / denom;
            s.entries(k, col0) = (1.0 - d * rho) / denom;
        }
        int off = 1;
        for (int gap : pattern.gap_sizes) {
            for (int i = 0; i < gap; ++i) {
                s.entries(off + i, col0 + off + i) = 1.0 / denom;
                if (i + 1 < gap) s.entries(off + i, col0 + off + i + 1) = -d * rho / denom;
            }
            off += gap;
        }

        // Block-diagonal G(d), h x (h+1) in block row m: first column
        // (1 - d rho)(d - rho), then d * H_gap(d) with H tridiagonal
        // (1 + rho^2 diagonal, -d rho above, -rho/d below).
        const int row0 = h + 1 + m * h;
        for (int k = 0; k < h; ++k)
            s.entries(row0 + k, col0) = (1.0 - d * rho) * (d - rho) / denom;
        off = 0;
        for (int gap : pattern.gap_sizes) {
            for (int i = 0; i < gap; ++i) {
                s.entries(row0 + off + i, col0 + 1 + off + i) = d * (1.0 + rho * rho) / denom;
                if (i + 1 < gap)
                    s.entries(row0 + off + i, col0 + 1 + off + i + 1) = d * (-d * rho) / denom;
                if (i > 0)
                    s.entries(row0 + off + i, col0 + 1 + off + i - 1) = d * (-rho / d) / denom;
            }
            off += gap;
        }
    }
    return s;
}

AssumptionDecision check_assumption_two(const SMatrix& s, double tol_rank) {
    const int expected = s.p * (s.h + 1);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.entries);
    const Eigen::VectorXd& sigma = svd.singularValues();

    int rank = 0;
    double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma(i) > tol_rank * sigma_max) ++rank;

    AssumptionDecision decision;
    if (sigma_max > 0.0 && rank == expected) {
        decision.pass = true;
        std::ostringstream os;
        os << "full rank " << expected << " (sigma_min/sigma_max = "
           << sigma(sigma.size() - 1) / sigma_max << ")";
        decision.detail = os.str();
    } else {
        decision.pass = false;
        std::ostringstream os;
        os << "rank " << rank << " < " << expected << " (cutoff " << tol_rank
           << " * sigma_max = " << tol_rank * sigma_max << ")";
        decision.detail = os.str();
    }
    return decision;
}

Eigen::MatrixXcd solve_c(const SMatrix& s, double* residual_out) {
    const int rows = static_cast<int>(s.entries.rows());
    const int cols = static_cast<int>(s.entries.cols());

    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(rows);
    e1(0) = 1.0;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.entries,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(svd.singularValues().size() - 1) <=
        1e-14 * svd.singularValues()(0))
        fail(errc::rank_deficient, "block system is numerically rank deficient");

    Eigen::VectorXcd flat = svd.solve(e1);
    double residual = (s.entries * flat - e1).norm();
    if (residual_out) *residual_out = residual;
    if (residual > kSystemResidualTol) {
        std::ostringstream os;
        os << "block system residual " << residual << " exceeds " << kSystemResidualTol
           << "; the overdetermined system is not consistent";
        fail(errc::inconsistent_system, os.str());
    }

    // Reshape: variable block m occupies entries m*(h+1) .. m*(h+1)+h.
    const int h = s.h;
    Eigen::MatrixXcd c(h + 1, s.p);
    for (int m = 0; m < s.p; ++m)
        for (int j = 0; j <= h; ++j) c(j, m) = flat(m * (h + 1) + j);
    (void)cols;
    return c;
}

std::vector<double> recurrence_coeffs(const std::vector<cplx>& ds, double* imag_residue_out) {
    const int p = static_cast<int>(ds.size());
    // Expand prod_m (z - d_m), coefficients descending from z^p.
    std::vector<cplx> poly{1.0};
    for (cplx d : ds) {
        std::vector<cplx> next(poly.size() + 1, 0.0);
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= d * poly[i];
        }
        poly = std::move(next);
    }

    double residue = 0.0;
    std::vector<double> a(p);
    for (int k = 1; k <= p; ++k) {
        residue = std::max(residue, std::abs(poly[k].imag()));
        a[k - 1] = -poly[k].real();
    }
    if (imag_residue_out) *imag_residue_out = residue;
    if (residue > kImagResidueTol) {
        std::ostringstream os;
        os << "recursion coefficients have imaginary residue " << residue
           << " (roots are not conjugate-consistent)";
        fail(errc::imaginary_residue, os.str());
    }
    return a;
}

cplx v_poly(int i, cplx d, const std::vector<double>& a) {
    if (i < 0) return 0.0;
    if (i == 0) return 1.0;
    cplx value = std::pow(d, i);
    for (int l = 1; l <= i && l <= static_cast<int>(a.size()); ++l)
        value -= a[l - 1] * std::pow(d, i - l);
    return value;
}

std::vector<Eigen::VectorXd> r_vectors(const CascadePattern& pattern, double rho,
                                       const std::vector<cplx>& ds, const Eigen::MatrixXcd& c,
                                       const std::vector<double>& a, double* imag_residue_out) {
    const int p = static_cast<int>(ds.size());
    const int N = pattern.N;
    const Eigen::VectorXd ddiag = d_diagonal(N, rho);

    std::vector<Eigen::VectorXcd> acc(p + 1, Eigen::VectorXcd::Zero(N));
    for (int m = 0; m < p; ++m) {
        Eigen::VectorXcd y = multiplier_vector(pattern, c, m);
        Eigen::VectorXcd g = apply_m(y, ds[m], rho, ddiag);
        Eigen::VectorXcd ctg = apply_ct(g, rho);
        for (int i = 0; i <= p; ++i)
            acc[i] += v_poly(i, ds[m], a) * g - v_poly(i - 1, ds[m], a) * ctg;
    }

    double residue = 0.0;
    std::vector<Eigen::VectorXd> r(p + 1);
    for (int i = 0; i <= p; ++i) {
        residue = std::max(residue, acc[i].imag().cwiseAbs().maxCoeff());
        r[i] = acc[i].real();
    }
    if (imag_residue_out) *imag_residue_out = residue;
    if (residue > kImagResidueTol)
        fail(errc::imaginary_residue,
             "observation weights have imaginary residue " + std::to_string(residue));

    // Gap entries are zero by construction up to roundoff; pin them exactly.
    for (int i = 0; i <= p; ++i) {
        for (int j : pattern.gap_positions) {
            if (std::abs(r[i](j - 1)) > kGapEntryTol)
                fail(errc::inconsistent_system,
                     "weight r_" + std::to_string(i) + " has a non-zero gap entry at slot " +
                         std::to_string(j));
            r[i](j - 1) = 0.0;
        }
    }
    return r;
}

double RecurrenceSolution::max_abs_d() const {
    double m = 0.0;
    for (cplx d : ds) m = std::max(m, std::abs(d));
    return m;
}

RecurrenceSolution analyze(const ModelParams& params, const AnalyzeOptions& opts) {
    validate_rho(params.rho);

    RecurrenceSolution sol;
    sol.pattern = params.pattern;
    sol.rho = params.rho;
    sol.qp = build_qp(params);
    if (sol.qp.degree() != params.pattern.p)
        fail(errc::no_convergence,
             "assembled polynomial has degree " + std::to_string(sol.qp.degree()) +
                 ", expected coverage " + std::to_string(params.pattern.p));

    sol.xs = find_roots(sol.qp, opts.tol_root);
    double worst_root = 0.0;
    for (cplx x : sol.xs) worst_root = std::max(worst_root, std::abs(sol.qp(x)));
    sol.residuals.root = worst_root;

    sol.assumption1 = check_assumption_one(sol.xs);
    if (!sol.assumption1.pass) return sol;

    RootSpectrum spectrum = make_spectrum(sol.xs);
    sol.ds = spectrum.ds;

    double imag_a = 0.0;
    sol.a = recurrence_coeffs(sol.ds, &imag_a);

    SMatrix s = build_s(params.pattern, params.rho, sol.ds);
    sol.assumption2 = check_assumption_two(s, opts.tol_rank);
    if (!sol.assumption2.pass) return sol;

    sol.c = solve_c(s, &sol.residuals.system);

    // Symmetrize multiplier columns across conjugate root pairs; the
    // least-squares solution already satisfies this up to roundoff.
    for (size_t i = 0; i < spectrum.pairing.size(); ++i) {
        size_t j = static_cast<size_t>(spectrum.pairing[i]);
        if (j != i && sol.ds[i].imag() > 0.0) {
            Eigen::VectorXcd avg = 0.5 * (sol.c.col(i) + sol.c.col(j).conjugate());
            sol.c.col(i) = avg;
            sol.c.col(j) = avg.conjugate();
        }
    }

    double imag_r = 0.0;
    sol.r = r_vectors(params.pattern, params.rho, sol.ds, sol.c, sol.a, &imag_r);
    sol.residuals.imag = std::max(imag_a, imag_r);

    cplx var_sum = 0.0;
    for (int m = 0; m < sol.c.cols(); ++m) var_sum += sol.c(0, m);
    if (std::abs(var_sum.imag()) > kImagResidueTol)
        fail(errc::imaginary_residue,
             "variance has imaginary residue " + std::to_string(std::abs(var_sum.imag())));
    sol.variance = var_sum.real();
    if (!(sol.variance > 0.0) || sol.variance > 1.0) {
        std::ostringstream os;
        os << "variance " << sol.variance << " outside (0, 1]";
        fail(errc::variance_out_of_range, os.str());
    }

    sol.complete = true;
    return sol;
}

int truncation_length(const RecurrenceSolution& sol) {
    double maxd = sol.max_abs_d();
    int L = sol.pattern.p + 1;
    if (maxd > 0.0 && maxd < 1.0) {
        double raw = std::ceil(std::log(1e-12) / std::log(maxd));
        L = std::max(L, static_cast<int>(raw));
    }
    return L;
}

std::vector<Eigen::VectorXd> unroll_weights(const RecurrenceSolution& sol, int L) {
    const int p = sol.pattern.p;
    const int N = sol.pattern.N;
    std::vector<Eigen::VectorXd> w(static_cast<size_t>(std::max(L, 0)));
    for (int i = 0; i < L; ++i) {
        Eigen::VectorXd wi = (i <= p) ? sol.r[i] : Eigen::VectorXd::Zero(N).eval();
        for (int m = 1; m <= std::min(i, p); ++m) wi += sol.a[m - 1] * w[i - m];
        w[i] = std::move(wi);
    }
    return w;
}

Eigen::VectorXd closed_form_weight(const RecurrenceSolution& sol, int i) {
    const int N = sol.pattern.N;
    const Eigen::VectorXd ddiag = d_diagonal(N, sol.rho);

    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(N);
    for (int m = 0; m < static_cast<int>(sol.ds.size()); ++m) {
        const cplx d = sol.ds[m];
        Eigen::VectorXcd y = multiplier_vector(sol.pattern, sol.c, m);
        Eigen::VectorXcd g = apply_m(y, d, sol.rho, ddiag);
        if (i == 0) {
            acc += g;
        } else {
            acc += std::pow(d, i - 1) * (d * g - apply_ct(g, sol.rho));
        }
    }
    if (acc.imag().cwiseAbs().maxCoeff() > kImagResidueTol)
        fail(errc::imaginary_residue, "closed-form weight has imaginary residue");
    return acc.real();
}

RecursiveEstimator::RecursiveEstimator(const RecurrenceSolution& sol) : sol_(sol) {
    if (!sol.complete)
        fail(errc::invalid_config, "estimator needs a complete solution (assumptions PASS)");
    bootstrap_weights_ = unroll_weights(sol, sol.pattern.p);
}

Eigen::VectorXd RecursiveEstimator::masked(const Eigen::VectorXd& obs) const {
    if (obs.size() != sol_.pattern.N)
        fail(errc::invalid_config, "observation vector must have " +
                                       std::to_string(sol_.pattern.N) + " slots");
    Eigen::VectorXd out = obs;
    for (int j : sol_.pattern.gap_positions) out(j - 1) = 0.0;
    return out;
}

double RecursiveEstimator::feed(const Eigen::VectorXd& obs) {
    const int p = sol_.pattern.p;
    Eigen::VectorXd x = masked(obs);

    double estimate;
    if (t_ < p) {
        // Bootstrap by direct weighting over the occasions seen so far.
        history_.push_back(x);
        estimate = 0.0;
        for (long i = 0; i <= t_; ++i)
            estimate += bootstrap_weights_[static_cast<size_t>(i)].dot(
                history_[static_cast<size_t>(t_ - i)]);
    } else {
        history_.clear();
        estimate = 0.0;
        for (int k = 1; k <= p; ++k) estimate += sol_.a[k - 1] * recent_est_[k - 1];
        estimate += sol_.r[0].dot(x);
        for (int k = 1; k <= p; ++k) estimate += sol_.r[k].dot(recent_obs_[k - 1]);
    }

    recent_obs_.push_front(x);
    if (static_cast<int>(recent_obs_.size()) > p) recent_obs_.pop_back();
    recent_est_.push_front(estimate);
    if (static_cast<int>(recent_est_.size()) > p) recent_est_.pop_back();
    ++t_;
    return estimate;
}

std::vector<double> estimate_series(const RecurrenceSolution& sol,
                                    const std::vector<Eigen::VectorXd>& data) {
    if (static_cast<int>(data.size()) < sol.pattern.p)
        fail(errc::insufficient_history,
             "need at least " + std::to_string(sol.pattern.p) + " occasions, got " +
                 std::to_string(data.size()));
    RecursiveEstimator estimator(sol);
    std::vector<double> estimates;
    estimates.reserve(data.size());
    for (const Eigen::VectorXd& obs : data) estimates.push_back(estimator.feed(obs));
    return estimates;
}

double direct_estimate(const RecurrenceSolution& sol, const std::vector<Eigen::VectorXd>& data,
                       int L) {
    std::vector<Eigen::VectorXd> w = unroll_weights(sol, L);
    double estimate = 0.0;
    const long last = static_cast<long>(data.size()) - 1;
    for (long i = 0; i < std::min<long>(L, data.size()); ++i) {
        Eigen::VectorXd x = data[static_cast<size_t>(last - i)];
        for (int j : sol.pattern.gap_positions) x(j - 1) = 0.0;
        estimate += w[static_cast<size_t>(i)].dot(x);
    }
    return estimate;
}

} // namespace rotablue
