#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wtail {

// Failure taxonomy shared across the library.  The CLI maps these onto exit
// statuses: input/configuration mistakes versus estimation-domain failures.
enum class errc {
    empty_sample,
    invalid_value,
    bad_k,
    non_positive_tail,
    bad_epsilon,
    integral_diverged,
    degenerate_denominator,
    unknown_model,
    bad_param,
    domain_error,
    inversion_failed,
    degenerate_score,
    bad_spec,
};

constexpr std::string_view errc_name(errc c) noexcept {
    switch (c) {
        case errc::empty_sample: return "EmptySample";
        case errc::invalid_value: return "InvalidValue";
        case errc::bad_k: return "BadK";
        case errc::non_positive_tail: return "NonPositiveTail";
        case errc::bad_epsilon: return "BadEpsilon";
        case errc::integral_diverged: return "IntegralDiverged";
        case errc::degenerate_denominator: return "DegenerateDenominator";
        case errc::unknown_model: return "UnknownModel";
        case errc::bad_param: return "BadParam";
        case errc::domain_error: return "DomainError";
        case errc::inversion_failed: return "InversionFailed";
        case errc::degenerate_score: return "DegenerateScore";
        case errc::bad_spec: return "BadSpec";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace wtail
