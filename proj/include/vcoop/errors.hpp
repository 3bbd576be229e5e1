#pragma once

#include <stdexcept>
#include <string>

namespace vcoop {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A truncated series hit its term budget before meeting its tolerance.
class SeriesNotConverged : public std::runtime_error {
public:
    SeriesNotConverged(const std::string& what, double partial_sum, double last_term)
        : std::runtime_error(what + " (partial sum " + std::to_string(partial_sum) +
                             ", last term " + std::to_string(last_term) + ")"),
          partial_sum_(partial_sum), last_term_(last_term) {}

    double partial_sum() const noexcept { return partial_sum_; }
    double last_term() const noexcept { return last_term_; }

private:
    double partial_sum_;
    double last_term_;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The source's utility has no interior stationary point at the asking price.
class NoInteriorOptimum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace vcoop
