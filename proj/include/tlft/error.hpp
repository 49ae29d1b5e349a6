#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tlft {

using Complex = std::complex<double>;

enum class Errc {
    DomainCut,
    PoleAt,
    DomainRadius,
    DomainError,
    NoConvergence,
    Overflow,
    CoincidentPoints,
    BudgetExceeded,
    DivergentIntegral,
    TruncationFailure,
    HypothesisViolation,
    QuadratureFailure,
    ExtrapolationUnstable,
    GridTooCoarse,
    UsageError,
    IoError,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace tlft
