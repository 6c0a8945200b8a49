#pragma once

#include <stdexcept>
#include <string>

namespace spinpair {

/// Raised when an input lies outside an operation's domain.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A matrix expected to have X structure carries weight outside the X
/// pattern. Reports the largest offending entry.
class NotXStateError : public DomainError {
  public:
    NotXStateError(const std::string &what, int row, int col, double magnitude)
        : DomainError(what), row_(row), col_(col), magnitude_(magnitude) {}

    [[nodiscard]] int row() const noexcept { return row_; }
    [[nodiscard]] int col() const noexcept { return col_; }
    [[nodiscard]] double magnitude() const noexcept { return magnitude_; }

  private:
    int row_;
    int col_;
    double magnitude_;
};

/// Non-finite or otherwise unusable numerical result.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace spinpair
