#include "roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace rotablue {

namespace {

constexpr double kSegmentTol = 1e-10;    // distance to [-1,1] treated as "on" it
constexpr double kImagSnapTol = 1e-10;   // relative imaginary part snapped to 0
constexpr int kAberthCap = 200;
constexpr int kPolishSteps = 5;

// Distance from a point to the real segment [-1, 1].
double segment_distance(cplx z) {
    double dx = std::max(0.0, std::abs(z.real()) - 1.0);
    return std::hypot(dx, z.imag());
}

std::string fmt(cplx z) {
    std::ostringstream os;
    os << z.real();
    if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

void sort_roots(std::vector<cplx>& zs) {
    std::sort(zs.begin(), zs.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

// Make numerically near-conjugate pairs exactly conjugate and snap near-real
// roots onto the axis. Real coefficients guarantee the pairing exists; the
// adjustments are below every downstream tolerance.
void realize_conjugate_structure(std::vector<cplx>& zs) {
    for (cplx& z : zs)
        if (std::abs(z.imag()) <= kImagSnapTol * (1.0 + std::abs(z))) z = cplx(z.real(), 0.0);

    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < zs.size(); ++i) {
        if (zs[i].imag() > 0) pos.push_back(i);
        else if (zs[i].imag() < 0) neg.push_back(i);
    }
    std::vector<bool> used(zs.size(), false);
    for (size_t i : pos) {
        size_t best = zs.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (size_t j : neg) {
            if (used[j]) continue;
            double dist = std::abs(zs[i] - std::conj(zs[j]));
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        if (best == zs.size()) continue; // odd structure; leave as computed
        used[best] = true;
        cplx avg = 0.5 * (zs[i] + std::conj(zs[best]));
        zs[i] = avg;
        zs[best] = std::conj(avg);
    }
}

} // namespace

std::vector<cplx> find_roots(const RealPolynomial& q, double tol_root) {
    const int deg = q.degree();
    if (deg < 1) fail(errc::invalid_config, "root finding needs degree >= 1");
    const std::vector<double>& c = q.coeffs();
    const double scale = q.max_abs_coeff();

    if (deg == 1) {
        std::vector<cplx> zs{cplx(-c[0] / c[1], 0.0)};
        return zs;
    }

    // Monic normalization for the iteration.
    std::vector<double> mc(c.size());
    for (size_t i = 0; i < c.size(); ++i) mc[i] = c[i] / c[deg];

    auto eval = [&](cplx z, cplx& value, cplx& deriv) {
        value = mc[deg];
        deriv = 0.0;
        for (int i = deg - 1; i >= 0; --i) {
            deriv = deriv * z + value;
            value = value * z + mc[i];
        }
    };

    // Initial guesses on a circle sized by the constant coefficient, with an
    // angular offset so no guess starts on the real axis.
    double r0 = std::pow(std::max(std::abs(mc[0]), 1e-12), 1.0 / deg);
    double cauchy = 0.0;
    for (int i = 0; i < deg; ++i) cauchy = std::max(cauchy, std::abs(mc[i]));
    r0 = std::min(std::max(r0, 1e-3), 1.0 + cauchy);
    std::vector<cplx> zs(deg);
    for (int k = 0; k < deg; ++k) {
        double theta = 2.0 * std::numbers::pi * (k + 0.35) / deg + 0.4;
        zs[k] = r0 * cplx(std::cos(theta), std::sin(theta));
    }

    // Aberth-Ehrlich simultaneous iteration.
    bool converged = false;
    for (int iter = 0; iter < kAberthCap && !converged; ++iter) {
        converged = true;
        for (int k = 0; k < deg; ++k) {
            cplx value, deriv;
            eval(zs[k], value, deriv);
            if (std::abs(value) == 0.0) continue;
            if (std::abs(deriv) == 0.0) {
                zs[k] += 1e-6 * (1.0 + std::abs(zs[k]));
                converged = false;
                continue;
            }
            cplx newton = value / deriv;
            cplx repel = 0.0;
            for (int j = 0; j < deg; ++j)
                if (j != k) repel += 1.0 / (zs[k] - zs[j]);
            cplx denom = 1.0 - newton * repel;
            cplx step = (std::abs(denom) > 1e-14) ? newton / denom : newton;
            zs[k] -= step;
            if (std::abs(step) > 1e-13 * (1.0 + std::abs(zs[k]))) converged = false;
        }
    }
    if (!converged)
        fail(errc::no_convergence,
             "root iteration did not converge within " + std::to_string(kAberthCap) + " sweeps");

    // Newton polish, a few guarded steps per root.
    for (int k = 0; k < deg; ++k) {
        for (int step = 0; step < kPolishSteps; ++step) {
            cplx value, deriv;
            eval(zs[k], value, deriv);
            if (std::abs(deriv) == 0.0) break;
            cplx delta = value / deriv;
            cplx trial = zs[k] - delta;
            cplx tv, td;
            eval(trial, tv, td);
            if (std::abs(tv) >= std::abs(value)) break;
            zs[k] = trial;
            if (std::abs(delta) <= 1e-16 * (1.0 + std::abs(zs[k]))) break;
        }
    }

    realize_conjugate_structure(zs);
    sort_roots(zs);

    double worst = 0.0;
    for (cplx z : zs) worst = std::max(worst, std::abs(q(z)));
    if (worst > tol_root * scale) {
        std::ostringstream os;
        os << "root residual " << worst << " exceeds " << tol_root << " * max|coeff| = "
           << tol_root * scale;
        fail(errc::no_convergence, os.str());
    }
    return zs;
}

cplx d_plus(cplx x) {
    if (segment_distance(x) <= kSegmentTol)
        fail(errc::on_critical_interval,
             "x = " + fmt(x) + " lies on the segment [-1,1]; the unit-disk parameter degenerates");
    cplx s = std::sqrt(x * x - 1.0);
    // The two candidates are x +/- s with product 1; take the larger as d_plus
    // so d_minus = 1/d_plus avoids cancellation.
    cplx big = (std::abs(x + s) >= std::abs(x - s)) ? x + s : x - s;
    if (x.imag() == 0.0 && std::abs(x.real()) > 1.0) big = cplx(big.real(), 0.0);
    return big;
}

cplx d_minus(cplx x) {
    cplx d = 1.0 / d_plus(x);
    if (x.imag() == 0.0) d = cplx(d.real(), 0.0);
    if (std::abs(d) >= 1.0 - 1e-12)
        fail(errc::on_critical_interval,
             "unit-disk parameter for x = " + fmt(x) + " has modulus " +
                 std::to_string(std::abs(d)) + "; x is numerically on [-1,1]");
    return d;
}

AssumptionDecision check_assumption_one(const std::vector<cplx>& xs) {
    AssumptionDecision decision;
    double max_abs = 0.0;
    for (cplx x : xs) max_abs = std::max(max_abs, std::abs(x));
    const double sep_tol = 1e-8 * (1.0 + max_abs);

    std::ostringstream problems;
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = i + 1; j < xs.size(); ++j)
            if (std::abs(xs[i] - xs[j]) <= sep_tol)
                problems << "roots " << i + 1 << " and " << j + 1 << " coincide ("
                         << fmt(xs[i]) << " vs " << fmt(xs[j]) << "); ";
    for (size_t i = 0; i < xs.size(); ++i)
        if (segment_distance(xs[i]) <= kSegmentTol)
            problems << "root " << i + 1 << " = " << fmt(xs[i]) << " lies on [-1,1]; ";

    std::string detail = problems.str();
    if (detail.empty()) {
        decision.pass = true;
        decision.detail = "roots distinct and off [-1,1]";
    } else {
        decision.pass = false;
        decision.detail = detail;
    }
    return decision;
}

RootSpectrum make_spectrum(const std::vector<cplx>& xs) {
    RootSpectrum spectrum;
    spectrum.xs = xs;
    spectrum.ds.resize(xs.size());
    spectrum.pairing.assign(xs.size(), -1);

    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].imag() == 0.0) {
            spectrum.pairing[i] = static_cast<int>(i);
            continue;
        }
        if (spectrum.pairing[i] >= 0) continue;
        size_t best = i;
        double best_dist = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == i || spectrum.pairing[j] >= 0 || xs[j].imag() == 0.0) continue;
            double dist = std::abs(xs[i] - std::conj(xs[j]));
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        spectrum.pairing[i] = static_cast<int>(best);
        spectrum.pairing[best] = static_cast<int>(i);
    }

    for (size_t i = 0; i < xs.size(); ++i) spectrum.ds[i] = d_minus(xs[i]);
    // Exact conjugacy across pairs: recompute the partner from the
    // representative with the positive imaginary part.
    for (size_t i = 0; i < xs.size(); ++i) {
        size_t j = static_cast<size_t>(spectrum.pairing[i]);
        if (j != i && xs[i].imag() > 0.0) spectrum.ds[j] = std::conj(spectrum.ds[i]);
    }
    return spectrum;
}

} // namespace rotablue
