#include "pattern.hpp"

#include <cmath>

#include "errors.hpp"

namespace rotablue {

std::string CascadePattern::text() const {
    std::string s;
    s.reserve(eps.size());
    for (int b : eps) s.push_back(b ? '1' : '0');
    return s;
}

CascadePattern parse_pattern(std::string_view text) {
    if (text.size() < 2)
        fail(errc::empty_or_short, "pattern must have at least 2 slots, got " +
                                       std::to_string(text.size()));

    CascadePattern pat;
    pat.N = static_cast<int>(text.size());
    pat.eps.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch != '0' && ch != '1')
            fail(errc::bad_char,
                 "pattern may contain only '0' and '1'; found '" + std::string(1, ch) +
                     "' at position " + std::to_string(i + 1),
                 static_cast<long>(i + 1));
        pat.eps.push_back(ch == '1' ? 1 : 0);
    }
    if (pat.eps.front() == 0)
        fail(errc::endpoint_zero, "first slot must be in-sample (pattern starts with '0')", 1);
    if (pat.eps.back() == 0)
        fail(errc::endpoint_zero, "last slot must be in-sample (pattern ends with '0')", pat.N);

    int run = 0;
    for (int j = 0; j < pat.N; ++j) {
        if (pat.eps[j] == 0) {
            pat.gap_positions.push_back(j + 1);
            ++run;
        } else if (run > 0) {
            pat.gap_sizes.push_back(run);
            run = 0;
        }
    }
    pat.h = static_cast<int>(pat.gap_positions.size());
    pat.n = pat.N - pat.h;

    int max_gap = 0;
    for (int m : pat.gap_sizes) max_gap = std::max(max_gap, m);
    pat.p = 1 + max_gap;
    return pat;
}

std::string expand_scheme(std::string_view scheme) {
    if (scheme.empty()) fail(errc::empty_or_short, "empty scheme");
    std::vector<long> runs;
    long value = 0;
    bool have_digit = false;
    for (size_t i = 0; i <= scheme.size(); ++i) {
        char ch = i < scheme.size() ? scheme[i] : '-';
        if (ch >= '0' && ch <= '9') {
            value = value * 10 + (ch - '0');
            have_digit = true;
            if (value > 1000000)
                fail(errc::bad_char, "scheme run length too large", static_cast<long>(i + 1));
        } else if (ch == '-') {
            if (!have_digit)
                fail(errc::bad_char, "scheme must be dash-separated positive integers like 4-8-4",
                     static_cast<long>(i + 1));
            if (value == 0)
                fail(errc::bad_char, "scheme run lengths must be positive", static_cast<long>(i + 1));
            runs.push_back(value);
            value = 0;
            have_digit = false;
        } else {
            fail(errc::bad_char,
                 "scheme may contain only digits and dashes; found '" + std::string(1, ch) + "'",
                 static_cast<long>(i + 1));
        }
    }
    if (runs.size() % 2 == 0)
        fail(errc::endpoint_zero,
             "scheme needs an odd number of runs (it must start and end in-sample)");

    std::string bits;
    for (size_t k = 0; k < runs.size(); ++k)
        bits.append(static_cast<size_t>(runs[k]), k % 2 == 0 ? '1' : '0');
    return bits;
}

void validate_rho(double rho) {
    if (!std::isfinite(rho))
        fail(errc::rho_out_of_range, "rho must be a finite number");
    if (rho == 0.0)
        fail(errc::rho_zero, "rho = 0 is not supported (occasions would be uncorrelated)");
    if (std::abs(rho) >= 1.0)
        fail(errc::rho_out_of_range,
             "rho must satisfy 0 < |rho| < 1, got " + std::to_string(rho));
}

Eigen::MatrixXd covariance_matrix(const ModelParams& params) {
    const int N = params.pattern.N;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) C(i, i + 1) = params.rho;
    return C;
}

} // namespace rotablue
