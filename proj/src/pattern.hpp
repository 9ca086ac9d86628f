#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rotablue {

// A cascade rotation design: a binary vector eps of length N whose ones mark
// the in-sample slots on every occasion. Both endpoints must be in-sample.
// Slot 1 holds the oldest rotation group (it leaves after the current
// occasion), slot N the group that has just entered.
struct CascadePattern {
    std::vector<int> eps;           // N entries, each 0 or 1
    int N = 0;                      // total slots
    int n = 0;                      // in-sample slots (ones)
    int h = 0;                      // gap slots (zeros), h = N - n
    int p = 1;                      // coverage: 1 + size of the largest gap
    std::vector<int> gap_positions; // 1-based indices of the zero slots, ascending
    std::vector<int> gap_sizes;     // maximal zero runs, left to right

    std::string text() const;      // the "0"/"1" string form
};

// Parse a binary pattern string ("110011"). Throws error with code
// EmptyOrShort / BadChar / EndpointZero; BadChar carries the 1-based index.
CascadePattern parse_pattern(std::string_view text);

// Expand an "a-b-c" scheme alias (alternating in/out run lengths, starting
// and ending in-sample) to a pattern string: "2-2-2" -> "110011".
std::string expand_scheme(std::string_view scheme);

// Reject rho = 0 (RhoZero) and |rho| >= 1 (RhoOutOfRange).
void validate_rho(double rho);

struct ModelParams {
    CascadePattern pattern;
    double rho = 0.0;
};

// The one-step covariance of consecutive occasion vectors: rho on the
// superdiagonal, zero elsewhere. Nilpotent: C^N = 0.
Eigen::MatrixXd covariance_matrix(const ModelParams& params);

} // namespace rotablue
