#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace nlt {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation requested at a point where the kernel is not integrable.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numerical integral or series did not reach its requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error " + format(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }
    double achieved_;
};

}  // namespace nlt
