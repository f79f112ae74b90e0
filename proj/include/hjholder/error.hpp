/**
 * @file error.hpp
 * @brief Error kinds raised by the hjholder library
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hjholder {

enum class Errc {
    DomainError,
    InvalidInput,
    EmptyIntersection,
    WindowTooSmall,
    EmptyBoundary,
    SearchFailed,
    CflViolation,
    Blowup,
    GridTooSmall,
    BoundaryOrderingFailed,
    DegenerateData,
    PreconditionFailed,
    Infeasible,
};

inline std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::DomainError: return "DomainError";
        case Errc::InvalidInput: return "InvalidInput";
        case Errc::EmptyIntersection: return "EmptyIntersection";
        case Errc::WindowTooSmall: return "WindowTooSmall";
        case Errc::EmptyBoundary: return "EmptyBoundary";
        case Errc::SearchFailed: return "SearchFailed";
        case Errc::CflViolation: return "CflViolation";
        case Errc::Blowup: return "Blowup";
        case Errc::GridTooSmall: return "GridTooSmall";
        case Errc::BoundaryOrderingFailed: return "BoundaryOrderingFailed";
        case Errc::DegenerateData: return "DegenerateData";
        case Errc::PreconditionFailed: return "PreconditionFailed";
        case Errc::Infeasible: return "Infeasible";
    }
    return "Unknown";
}

/// Exception carrying an error kind; the message is prefixed with the kind name.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what)
        , code_(code)
    {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) raise(code, what);
}

}  // namespace hjholder
