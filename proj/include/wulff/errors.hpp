#pragma once

#include <stdexcept>
#include <string>

namespace wulff {

// Bad caller input (sizes, parameter ranges, flags).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluation outside a shape's support or an envelope's window.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Quadrature or root-finding that failed to reach its target.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No translate of a finite-support shape passes through both anchors.
class UnreachablePair : public std::runtime_error {
public:
    UnreachablePair(double j, double hj, double k, double hk, const std::string& why)
        : std::runtime_error("no shape translate through (" + std::to_string(j) + ", " +
                             std::to_string(hj) + ") and (" + std::to_string(k) + ", " +
                             std::to_string(hk) + "): " + why),
          j_(j), hj_(hj), k_(k), hk_(hk) {}

    double j() const noexcept { return j_; }
    double hj() const noexcept { return hj_; }
    double k() const noexcept { return k_; }
    double hk() const noexcept { return hk_; }

private:
    double j_, hj_, k_, hk_;
};

}  // namespace wulff
