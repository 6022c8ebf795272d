#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace dynloc::detail {

namespace {

// The FFTW planner is not thread safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

FftPlan::FftPlan(std::size_t size) : size_(size), data_(nullptr), forward_plan_(nullptr), backward_plan_(nullptr) {
    std::lock_guard lock(planner_mutex());
    auto* raw = fftw_alloc_complex(size);
    if (raw == nullptr) {
        throw std::bad_alloc();
    }
    data_ = reinterpret_cast<std::complex<double>*>(raw);
    const int n = static_cast<int>(size);
    forward_plan_ = fftw_plan_dft_1d(n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_plan_ = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    for (std::size_t i = 0; i < size; ++i) {
        data_[i] = 0.0;
    }
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    fftw_free(data_);
}

void FftPlan::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }

void FftPlan::backward() {
    fftw_execute(static_cast<fftw_plan>(backward_plan_));
    const double scale = 1.0 / static_cast<double>(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        data_[i] *= scale;
    }
}

} // namespace dynloc::detail
