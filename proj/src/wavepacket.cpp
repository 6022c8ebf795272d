#include "dynloc/wavepacket.hpp"

#include "dynloc/errors.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dynloc {

namespace {

using cplx = std::complex<double>;

std::size_t next_pow2(std::size_t n) {
    std::size_t size = 1;
    while (size < n) {
        size <<= 1;
    }
    return size;
}

} // namespace

WavepacketState::WavepacketState(long first_site, std::vector<cplx> amplitudes)
    : first_(first_site), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw std::invalid_argument("WavepacketState: window must contain at least one site");
    }
    for (const cplx& c : amplitudes_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw std::invalid_argument("WavepacketState: amplitudes must be finite");
        }
    }
}

cplx WavepacketState::at(long site) const noexcept {
    if (site < first_ || site > last_site()) {
        return {0.0, 0.0};
    }
    return amplitudes_[static_cast<std::size_t>(site - first_)];
}

double WavepacketState::norm() const noexcept {
    double sum = 0.0;
    for (const cplx& c : amplitudes_) {
        sum += std::norm(c);
    }
    return sum;
}

double WavepacketState::mean() const noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        sum += static_cast<double>(first_ + static_cast<long>(i)) * std::norm(amplitudes_[i]);
    }
    return sum / norm();
}

double WavepacketState::variance() const noexcept {
    const double m = mean();
    double sum = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double x = static_cast<double>(first_ + static_cast<long>(i)) - m;
        sum += x * x * std::norm(amplitudes_[i]);
    }
    return sum / norm();
}

double WavepacketState::edge_amplitude() const noexcept {
    return std::max(std::abs(amplitudes_.front()), std::abs(amplitudes_.back()));
}

WavepacketState gaussian_state(double sigma, double kappa0, long center) {
    if (!std::isfinite(sigma) || !(sigma > 0.0)) {
        throw std::invalid_argument("gaussian_state: sigma must be positive");
    }
    if (!std::isfinite(kappa0)) {
        throw std::invalid_argument("gaussian_state: kappa0 must be finite");
    }
    const long half = std::max(8L, static_cast<long>(std::ceil(12.0 * sigma)));
    std::vector<cplx> c(static_cast<std::size_t>(2 * half + 1));
    double norm = 0.0;
    for (long j = -half; j <= half; ++j) {
        const double x = static_cast<double>(j);
        const cplx value = std::polar(std::exp(-x * x / (4.0 * sigma * sigma)), kappa0 * x);
        c[static_cast<std::size_t>(j + half)] = value;
        norm += std::norm(value);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (cplx& value : c) {
        value *= scale;
    }
    return {center - half, std::move(c)};
}

CoherenceParams coherence_params(const WavepacketState& state) {
    const auto& c = state.amplitudes();
    CoherenceParams out;
    for (std::size_t i = 1; i < c.size(); ++i) {
        const cplx overlap = std::conj(c[i - 1]) * c[i];
        const double l = static_cast<double>(state.first_site() + static_cast<long>(i));
        out.K += overlap;
        out.J += (2.0 * l - 1.0) * overlap;
    }
    for (std::size_t i = 2; i < c.size(); ++i) {
        out.L += std::conj(c[i - 2]) * c[i];
    }
    return out;
}

InitialMoments initial_moments(const WavepacketState& state) {
    return {coherence_params(state), state.mean(), state.variance()};
}

double position_expectation(const InitialMoments& initial, const PhasePair& phases) {
    const double k = std::abs(initial.coherence.K);
    return initial.mean + 2.0 * k * phases.chi_modulus() * std::sin(phases.chi_phase() - initial.coherence.kappa_K());
}

double width_variance(const InitialMoments& initial, const PhasePair& phases) {
    const CoherenceParams& c = initial.coherence;
    const double r = phases.chi_modulus();
    const double phi = phases.chi_phase();
    const double k = std::abs(c.K);
    const double s_kappa = std::sin(phi - c.kappa_K());
    const double quadratic = 1.0 - std::abs(c.L) * std::cos(2.0 * phi - c.nu_L()) - 2.0 * k * k * s_kappa * s_kappa;
    const double linear = std::abs(c.J) * std::sin(phi - c.mu_J()) - 2.0 * initial.mean * k * s_kappa;
    return initial.variance + 2.0 * r * r * quadratic + 2.0 * r * linear;
}

double width_variance_symmetric(const InitialMoments& initial, const PhasePair& phases) {
    const double r = phases.chi_modulus();
    const double phi = phases.chi_phase();
    const double k = initial.coherence.K.real();
    const double l = initial.coherence.L.real();
    const double s = std::sin(phi);
    return initial.variance + 2.0 * r * r * (1.0 - l * std::cos(2.0 * phi) - 2.0 * k * k * s * s);
}

bool reduced_dispersion(const PhasePair& phases, double tol) {
    if (phases.chi_modulus() == 0.0) {
        return false;
    }
    return std::abs(std::cos(2.0 * phases.chi_phase()) + 1.0) <= tol;
}

WavepacketState apply_propagator(const WavepacketState& state, const PhasePair& phases,
                                 const PropagatorOptions& options) {
    const double spread = 2.0 * phases.chi_modulus();
    // J_k(x) is below 1e-20 once k exceeds x by a few multiples of x^{1/3}.
    const auto extension = static_cast<long>(std::ceil(spread + 16.0 * std::cbrt(spread) + 30.0));
    const std::size_t needed = state.size() + 2 * static_cast<std::size_t>(extension);
    const std::size_t n = next_pow2(needed);
    if (n > options.max_window) {
        throw WindowOverflow("propagation window of " + std::to_string(n) + " sites exceeds the cap of " +
                                 std::to_string(options.max_window),
                             n);
    }
    const long first = state.first_site() - extension;

    detail::FftPlan plan(n);
    const auto& c = state.amplitudes();
    for (std::size_t i = 0; i < c.size(); ++i) {
        plan[i + static_cast<std::size_t>(extension)] = c[i];
    }
    plan.forward();
    const double r = phases.chi_modulus();
    const double phi = phases.chi_phase();
    const double dk = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kappa = dk * static_cast<double>(k);
        plan[k] *= std::polar(1.0, -2.0 * r * std::cos(kappa - phi));
    }
    plan.backward();
    for (std::size_t j = 0; j < n; ++j) {
        const double site = static_cast<double>(first + static_cast<long>(j));
        plan[j] *= std::polar(1.0, -phases.eta * site);
    }

    const double edge = std::max(std::abs(plan[0]), std::abs(plan[n - 1]));
    if (edge > options.edge_threshold) {
        throw WindowOverflow("wave packet reached the propagation window edge", 2 * n);
    }
    std::size_t lo = 0;
    std::size_t hi = n;
    while (lo + 1 < hi && std::abs(plan[lo]) < options.trim_threshold) {
        ++lo;
    }
    while (hi > lo + 1 && std::abs(plan[hi - 1]) < options.trim_threshold) {
        --hi;
    }
    std::vector<cplx> out(plan.buffer() + lo, plan.buffer() + hi);
    return {first + static_cast<long>(lo), std::move(out)};
}

WavepacketState evolve(const WavepacketState& state, const LatticeModel& model, const DriveProfile& profile, double t,
                       const std::optional<ResonanceClass>& resonance, const PropagatorOptions& options) {
    return apply_propagator(state, chi(model, profile, t, resonance), options);
}

std::vector<TrajectorySample> sample_trajectory(const WavepacketState& initial, const LatticeModel& model,
                                                const DriveProfile& profile, const std::vector<double>& times,
                                                const std::optional<ResonanceClass>& resonance,
                                                const PropagatorOptions& options) {
    const InitialMoments moments = initial_moments(initial);
    std::vector<TrajectorySample> samples;
    samples.reserve(times.size());
    for (double t : times) {
        const PhasePair phases = chi(model, profile, t, resonance);
        const WavepacketState state = apply_propagator(initial, phases, options);
        samples.push_back({t, state.mean(), state.variance(), state.norm(), position_expectation(moments, phases),
                           width_variance(moments, phases)});
    }
    return samples;
}

} // namespace dynloc
