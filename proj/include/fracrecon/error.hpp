#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracrecon {

enum class ErrorCode {
    Pole,
    Overflow,
    Domain,
    SingularAtZero,
    TooManyTerms,
    UnknownScenario,
    Parse,
    InvariantViolation,
    DegreeTooHigh,
    IllConditioned,
    LogOfZero,
    DivisionByZero,
    RatioDegenerate,
    NoValidCandidates,
    KernelVanishesAtZero,
    MissingConstant,
    WrongBranch,
    EpsilonOutOfRange,
    NotFound,
    NoConvergence,
    HypothesisViolated,
    InputMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fracrecon
