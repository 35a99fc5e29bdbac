#include "fracrecon/error.hpp"

namespace fracrecon {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Pole: return "PoleError";
        case ErrorCode::Overflow: return "OverflowError";
        case ErrorCode::Domain: return "DomainError";
        case ErrorCode::SingularAtZero: return "SingularAtZero";
        case ErrorCode::TooManyTerms: return "TooManyTerms";
        case ErrorCode::UnknownScenario: return "UnknownScenario";
        case ErrorCode::Parse: return "ParseError";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
        case ErrorCode::IllConditioned: return "IllConditioned";
        case ErrorCode::LogOfZero: return "LogOfZero";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::RatioDegenerate: return "RatioDegenerate";
        case ErrorCode::NoValidCandidates: return "NoValidCandidates";
        case ErrorCode::KernelVanishesAtZero: return "KernelVanishesAtZero";
        case ErrorCode::MissingConstant: return "MissingConstant";
        case ErrorCode::WrongBranch: return "WrongBranch";
        case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::InputMismatch: return "InputMismatch";
    }
    return "Error";
}

}  // namespace fracrecon
