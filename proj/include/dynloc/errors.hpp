#pragma once

#include <stdexcept>
#include <string>

namespace dynloc {

/// Failure of a numerical procedure whose inputs were valid: quadrature that
/// does not reach its tolerance, a propagation window that overflows.
class NumericFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class QuadratureFailure : public NumericFailure {
  public:
    QuadratureFailure(const std::string& what, double achieved_error)
        : NumericFailure(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

  private:
    double achieved_error_;
};

class WindowOverflow : public NumericFailure {
  public:
    WindowOverflow(const std::string& what, std::size_t suggested_window)
        : NumericFailure(what), suggested_window_(suggested_window) {}

    std::size_t suggested_window() const noexcept { return suggested_window_; }

  private:
    std::size_t suggested_window_;
};

/// Continuum density reached the edge of the periodic domain.
class WrapAround : public NumericFailure {
  public:
    using NumericFailure::NumericFailure;
};

} // namespace dynloc
