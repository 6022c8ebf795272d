#pragma once

// Thin RAII wrapper over an FFTW in-place complex transform. Plans use
// FFTW_ESTIMATE so results do not depend on planner timing.

#include <complex>
#include <cstddef>
#include <vector>

namespace dynloc::detail {

class FftPlan {
  public:
    explicit FftPlan(std::size_t size);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const noexcept { return size_; }

    /// Unnormalised forward (e^{-2 pi i jk/n}) transform of `buffer()`.
    void forward();
    /// Backward transform including the 1/n normalisation.
    void backward();

    std::complex<double>* buffer() noexcept { return data_; }
    std::complex<double>& operator[](std::size_t i) noexcept { return data_[i]; }

  private:
    std::size_t size_;
    std::complex<double>* data_;
    void* forward_plan_;
    void* backward_plan_;
};

} // namespace dynloc::detail
