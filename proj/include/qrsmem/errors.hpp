#pragma once

#include <stdexcept>
#include <string>

namespace qrsmem {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define QRSMEM_ERROR(Name)                                                  \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    }

QRSMEM_ERROR(DivisionByZero);
QRSMEM_ERROR(OutOfRange);
QRSMEM_ERROR(MalformedInteger);
QRSMEM_ERROR(ReducibleModulus);
QRSMEM_ERROR(SingularGram);
QRSMEM_ERROR(DependentBasis);
QRSMEM_ERROR(DimensionMismatch);
QRSMEM_ERROR(TooLarge);
QRSMEM_ERROR(BadParameters);
QRSMEM_ERROR(BasisMismatch);
QRSMEM_ERROR(NoSolutionWithinBound);
QRSMEM_ERROR(Uncovered);
QRSMEM_ERROR(ZeroCoefficient);
QRSMEM_ERROR(InvalidFaultLocation);
QRSMEM_ERROR(DegenerateP);
QRSMEM_ERROR(DivergentRetry);
QRSMEM_ERROR(ReductionFailure);
QRSMEM_ERROR(MissingFractions);
QRSMEM_ERROR(NoBaseline);
QRSMEM_ERROR(ConfigError);
QRSMEM_ERROR(ParseError);

#undef QRSMEM_ERROR

}  // namespace qrsmem
