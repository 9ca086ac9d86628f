#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qpoly.hpp"

namespace rotablue {

using cplx = std::complex<double>;

// Outcome of a numeric assumption check. FAIL is a value, not an error:
// callers report it and stop the pipeline at the failure point.
struct AssumptionDecision {
    bool pass = false;
    std::string detail; // reason and offending values when pass == false
};

// All complex roots of q, each polished by Newton steps, snapped to the real
// axis / exact conjugate pairs where appropriate, and sorted ascending by
// (real, imaginary) part. tol_root bounds the accepted residual
// |q(x)| <= tol_root * max|coeff|; exceeding it (or the iteration cap) throws
// NoConvergence.
std::vector<cplx> find_roots(const RealPolynomial& q, double tol_root = 1e-8);

// The two roots of d^2 - 2xd + 1 = 0. d_minus is the one inside the unit
// disk; both throw OnCriticalInterval when x lies within 1e-10 of the real
// segment [-1,1], where the roots meet the unit circle.
cplx d_minus(cplx x);
cplx d_plus(cplx x);

// Distinct roots, none of them on (or within 1e-10 of) the segment [-1,1]:
// pairwise separation must exceed 1e-8 * (1 + max|x|).
AssumptionDecision check_assumption_one(const std::vector<cplx>& xs);

// Roots plus their unit-disk parameters and conjugate pairing.
// pairing[i] == i for real roots, otherwise the index of the conjugate
// partner; ds are exactly conjugate across each pair.
struct RootSpectrum {
    std::vector<cplx> xs;
    std::vector<cplx> ds;
    std::vector<int> pairing;
};

// Requires check_assumption_one(xs) to have passed.
RootSpectrum make_spectrum(const std::vector<cplx>& xs);

} // namespace rotablue
