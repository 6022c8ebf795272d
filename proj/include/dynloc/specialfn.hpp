#pragma once

// Bessel functions of the first kind: ordinary integer order, the
// two-dimensional one-parameter family J_n^{p,q}(u, v; z), and the
// infinite-variable J_nu({beta_m}).

#include "dynloc/model.hpp"

#include <complex>
#include <span>
#include <vector>

namespace dynloc {

/// Terms with |J_k(x)| below this are dropped by every truncated sum.
inline constexpr double bessel_tail_threshold = 1e-17;

/// J_nu(x) for integer nu. Power series for |x| < 1, Miller's downward
/// recurrence otherwise. Throws std::domain_error for non-finite x.
double bessel_j(int nu, double x);

/// J_0(x) .. J_{max_order}(x) from a single recurrence pass.
std::vector<double> bessel_j_sequence(double x, int max_order);

/// J_k(x) for all |k| up to the order where the tail drops below
/// bessel_tail_threshold. Evaluates to 0 beyond the cutoff.
class BesselTable {
  public:
    explicit BesselTable(double x);

    double operator()(long k) const noexcept;
    int cutoff() const noexcept { return cutoff_; }
    double argument() const noexcept { return x_; }

  private:
    double x_;
    int cutoff_;
    std::vector<double> values_; // J_0 .. J_cutoff at |x|
    bool negative_;
};

/// sum_k J_{M-qk}(u) J_{N+pk}(v) z^k over the family of `resonance`.
/// Requires a resonant class and |z| = 1 (within 1e-12).
std::complex<double> gen_bessel_2d(const ResonanceClass& resonance, double u, double v, std::complex<double> z);

/// Fourier coefficients of exp(i sum_m beta_m sin(m x)) = sum_nu J_nu e^{i nu x},
/// built by convolving the single-variable expansions.
class MultiBesselSeries {
  public:
    explicit MultiBesselSeries(std::span<const double> betas);

    double operator()(long nu) const noexcept;
    long min_index() const noexcept { return offset_; }
    long max_index() const noexcept { return offset_ + static_cast<long>(values_.size()) - 1; }

  private:
    long offset_ = 0;
    std::vector<double> values_;
};

double inf_var_bessel(int nu, std::span<const double> betas);

/// Large-amplitude estimates of the positive zeros in u of J_n^{1,2}(u, v),
/// smallest first. Uses the n < 2|v| branch when it applies and the
/// n > 2|v|, v < 0 branch otherwise. Throws std::domain_error when
/// 1/2 - n/(4v) <= 0 and std::invalid_argument for v == 0 or n < 0.
std::vector<double> asymptotic_zero_estimates(int n, double v, int j_max);

} // namespace dynloc
