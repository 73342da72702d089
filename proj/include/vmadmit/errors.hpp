#pragma once

#include <stdexcept>
#include <string>

namespace vmadmit {

/// Invalid model parameters or a malformed configuration document.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state or index outside the domain of the requested operation.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Value iteration exhausted its iteration budget before reaching tolerance.
class NotConverged : public std::runtime_error {
public:
    NotConverged(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The admit region of a converged solution touches the truncation boundary,
/// so values near the cap cannot be trusted. Re-solve with a larger cap.
class CapTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The admit set of some grid row is not a contiguous prefix in n2.
/// Signals a hypothesis violation on the holding cost or a numerical failure.
class NonThresholdStructure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed threshold falls outside its analytic bracket.
class BoundViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two grids with different shapes were compared.
class ShapeMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A departure event was applied in a state with no matching task in service.
class InfeasibleEvent : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training loss became non-finite (typically a too-large learning rate).
class Diverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A recomputed result differs from its embedded reference value.
class GoldenMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace vmadmit
