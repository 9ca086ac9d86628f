#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "roots.hpp"

using namespace rotablue;

namespace {

// Largest-root closed form for the full-overlap pattern:
//   x_1 = (1+rho^2)/(2 rho) + (1-rho^2)/(2 (N-1) rho)
double full_overlap_x1(int N, double rho) {
    return (1 + rho * rho) / (2 * rho) + (1 - rho * rho) / (2 * (N - 1) * rho);
}

// and the matching unit-disk parameter:
//   d_1 = (N + (N-2) rho^2 - sqrt((N + (N-2) rho^2)^2 - 4 (N-1)^2 rho^2))
//         / (2 (N-1) rho)
double full_overlap_d1(int N, double rho) {
    double b = N + (N - 2) * rho * rho;
    return (b - std::sqrt(b * b - 4.0 * (N - 1.0) * (N - 1.0) * rho * rho)) /
           (2.0 * (N - 1.0) * rho);
}

} // namespace

TEST_CASE("roots of the degree-2 characteristic polynomial") {
    ModelParams params{parse_pattern("1101101"), 0.5};
    std::vector<cplx> xs = find_roots(build_qp(params));
    REQUIRE(xs.size() == 2);
    CHECK(xs[0].imag() == 0.0);
    CHECK(xs[1].imag() == 0.0);
    CHECK(std::abs(xs[0].real() - (-2.6211)) < 1e-4);
    CHECK(std::abs(xs[1].real() - 1.3711) < 1e-4);
}

TEST_CASE("full-overlap closed forms") {
    for (auto [N, rho] : std::vector<std::pair<int, double>>{{6, 0.9}, {8, 0.5}, {6, -0.4}}) {
        ModelParams params{parse_pattern(std::string(N, '1')), rho};
        std::vector<cplx> xs = find_roots(build_qp(params));
        REQUIRE(xs.size() == 1);
        CHECK(xs[0].real() == doctest::Approx(full_overlap_x1(N, rho)).epsilon(1e-10));
        CHECK(std::abs(d_minus(xs[0]) - full_overlap_d1(N, rho)) < 1e-10);
    }
}

TEST_CASE("unit-disk parameter") {
    // x = 1.25 factors d^2 - 2.5 d + 1 = (d - 2)(d - 0.5)
    CHECK(std::abs(d_minus(1.25) - 0.5) < 1e-14);
    CHECK(std::abs(d_plus(1.25) - 2.0) < 1e-14);

    // complex pair from the 110011 example at rho = 0.7
    cplx x3(1.13359249914702, 0.0);
    CHECK(std::abs(d_minus(x3) - 0.5997) < 1e-4);
    CHECK(std::abs(d_plus(x3) - 1.6675) < 1e-4);

    for (cplx x : {cplx(1.25, 0.0), cplx(-2.6211, 0.0), cplx(-0.5668, -1.4069),
                   cplx(0.2742, 0.5385), cplx(-30.0, 0.2)}) {
        cplx lo = d_minus(x), hi = d_plus(x);
        CHECK(std::abs(lo * hi - 1.0) < 1e-9);           // product of the two roots is 1
        CHECK(std::abs(lo + hi - 2.0 * x) < 1e-9);       // sum is 2x
        CHECK(std::abs(lo) < 1.0);
        CHECK(std::abs(hi) > 1.0);
    }

    // real x gives real d
    CHECK(d_minus(cplx(3.7, 0.0)).imag() == 0.0);

    // the critical segment is rejected
    for (cplx x : {cplx(0.5, 0.0), cplx(1.0, 0.0), cplx(-1.0, 0.0), cplx(0.999999999999, 0.0)}) {
        bool rejected = false;
        try {
            d_minus(x);
        } catch (const error& e) {
            rejected = (e.code() == errc::on_critical_interval);
        }
        CHECK(rejected);
    }
}

TEST_CASE("assumption I decisions") {
    CHECK(check_assumption_one({cplx(1.3711, 0.0), cplx(-2.6211, 0.0)}).pass);
    CHECK(check_assumption_one({cplx(-0.5668, -1.4069), cplx(-0.5668, 1.4069), cplx(1.1336, 0)})
              .pass);

    // a root inside the segment
    CHECK_FALSE(check_assumption_one({cplx(0.5, 0.0), cplx(2.0, 0.0)}).pass);
    // a root within 1e-10 of the segment boundary
    CHECK_FALSE(check_assumption_one({cplx(1.0 + 1e-11, 0.0), cplx(2.0, 0.0)}).pass);
    // coincident roots
    CHECK_FALSE(check_assumption_one({cplx(1.4, 0.0), cplx(1.4 + 1e-12, 0.0)}).pass);
    // the offending root is named
    AssumptionDecision bad = check_assumption_one({cplx(0.5, 0.0), cplx(2.0, 0.0)});
    CHECK(bad.detail.find("root 1") != std::string::npos);
}

TEST_CASE("degree-2 family keeps real roots off the segment") {
    // every pattern of coverage 2 at every rho should give two real roots
    // with |x| > 1 (observed property of the characteristic polynomial)
    for (const char* text : {"11011", "1101101", "101", "1011011"}) {
        CascadePattern pat = parse_pattern(text);
        for (double rho = -0.95; rho < 1.0; rho += 0.19) {
            if (std::abs(rho) < 1e-9) continue;
            std::vector<cplx> xs = find_roots(build_qp(ModelParams{pat, rho}));
            REQUIRE(xs.size() == 2);
            for (cplx x : xs) {
                CHECK(x.imag() == 0.0);
                CHECK(std::abs(x.real()) > 1.0);
            }
            CHECK(check_assumption_one(xs).pass);
        }
    }
}

TEST_CASE("survey pattern spectrum at rho = 0.9") {
    ModelParams params{parse_pattern("1111000000001111"), 0.9};
    std::vector<cplx> xs = find_roots(build_qp(params));
    REQUIRE(xs.size() == 9);

    std::vector<cplx> expected = {
        {-1.1229859, -0.2345529}, {-1.1229859, 0.2345529}, {-0.5525286, -0.5573502},
        {-0.5525286, 0.5573502},  {0.2742179, -0.5384653}, {0.2742179, 0.5384653},
        {0.8951829, -0.2228712},  {0.8951829, 0.2228712},  {1.0122390, 0.0},
    };
    for (size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(xs[i] - expected[i]) < 1e-4);

    RootSpectrum spectrum = make_spectrum(xs);
    std::vector<cplx> expected_d = {
        {-0.5017925, 0.1894660},  {-0.5017925, -0.1894660}, {-0.2578576, 0.4877238},
        {-0.2578576, -0.4877238}, {0.1412126, 0.5716880},   {0.1412126, -0.5716880},
        {0.5622733, 0.3764197},   {0.5622733, -0.3764197},  {0.8552804, 0.0},
    };
    for (size_t i = 0; i < expected_d.size(); ++i)
        CHECK(std::abs(spectrum.ds[i] - expected_d[i]) < 1e-4);
}

TEST_CASE("spectrum pairing is an exact conjugate involution") {
    std::vector<cplx> xs =
        find_roots(build_qp(ModelParams{parse_pattern("1111000000001111"), 0.9}));
    RootSpectrum spectrum = make_spectrum(xs);
    REQUIRE(spectrum.pairing.size() == xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        int j = spectrum.pairing[i];
        CHECK(spectrum.pairing[static_cast<size_t>(j)] == static_cast<int>(i));
        if (j == static_cast<int>(i)) {
            CHECK(spectrum.ds[i].imag() == 0.0);
        } else {
            // exactly conjugate, not merely approximately
            CHECK(spectrum.ds[i] == std::conj(spectrum.ds[static_cast<size_t>(j)]));
        }
        CHECK(std::abs(spectrum.ds[i]) < 1.0);
    }
}

TEST_CASE("root finder handles scaled and shifted polynomials") {
    // (x-1.5)(x-2.5)(x+3.25) scaled by 7
    RealPolynomial q = 7.0 * (RealPolynomial({-1.5, 1.0}) * RealPolynomial({-2.5, 1.0}) *
                              RealPolynomial({3.25, 1.0}));
    std::vector<cplx> xs = find_roots(q);
    REQUIRE(xs.size() == 3);
    CHECK(std::abs(xs[0] - cplx(-3.25, 0.0)) < 1e-9);
    CHECK(std::abs(xs[1] - cplx(1.5, 0.0)) < 1e-9);
    CHECK(std::abs(xs[2] - cplx(2.5, 0.0)) < 1e-9);

    // residual gate: an impossible tolerance raises NoConvergence
    bool raised = false;
    try {
        find_roots(q, 1e-30);
    } catch (const error& e) {
        raised = (e.code() == errc::no_convergence);
    }
    CHECK(raised);
}
