#pragma once

#include <stdexcept>
#include <string>

namespace rotablue {

// Failure classes surfaced by the library. Grouped so the C API / CLI can map
// them onto stable status codes: input validation, assumption violations,
// numerical failures, and verification mismatches.
enum class errc {
    ok = 0,

    // input validation
    empty_or_short,
    bad_char,
    endpoint_zero,
    rho_zero,
    rho_out_of_range,
    invalid_config,
    insufficient_history,

    // assumption violations (also representable as FAIL decisions)
    assumption_one_failed,
    assumption_two_failed,
    on_critical_interval,

    // numerical failures
    no_convergence,
    zero_d,
    singular_r,
    inconsistent_system,
    rank_deficient,
    imaginary_residue,
    variance_out_of_range,
    singular_kkt,

    // verification mismatch
    verification_failed,
};

const char* errc_name(errc code);

// Library exception: carries the failure class, a human-readable message and,
// where it makes sense (parse errors), the offending 1-based index.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& message, long index = -1)
        : std::runtime_error(message), code_(code), index_(index) {}

    errc code() const noexcept { return code_; }
    long index() const noexcept { return index_; }

private:
    errc code_;
    long index_;
};

[[noreturn]] inline void fail(errc code, const std::string& message, long index = -1) {
    throw error(code, message, index);
}

inline const char* errc_name(errc code) {
    switch (code) {
        case errc::ok: return "Ok";
        case errc::empty_or_short: return "EmptyOrShort";
        case errc::bad_char: return "BadChar";
        case errc::endpoint_zero: return "EndpointZero";
        case errc::rho_zero: return "RhoZero";
        case errc::rho_out_of_range: return "RhoOutOfRange";
        case errc::invalid_config: return "InvalidConfig";
        case errc::insufficient_history: return "InsufficientHistory";
        case errc::assumption_one_failed: return "AssumptionOneFailed";
        case errc::assumption_two_failed: return "AssumptionTwoFailed";
        case errc::on_critical_interval: return "OnCriticalInterval";
        case errc::no_convergence: return "NoConvergence";
        case errc::zero_d: return "ZeroD";
        case errc::singular_r: return "SingularR";
        case errc::inconsistent_system: return "InconsistentSystem";
        case errc::rank_deficient: return "RankDeficient";
        case errc::imaginary_residue: return "ImaginaryResidue";
        case errc::variance_out_of_range: return "VarianceOutOfRange";
        case errc::singular_kkt: return "SingularKKT";
        case errc::verification_failed: return "VerificationFailed";
    }
    return "Unknown";
}

} // namespace rotablue
