#pragma once

// Lattice wave packets c_l on a finite site window, their coherence
// parameters, the closed-form mean position and width, and the spectral
// propagator that applies U(t) exactly in one step.

#include "dynloc/model.hpp"
#include "dynloc/phases.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace dynloc {

class WavepacketState {
  public:
    WavepacketState(long first_site, std::vector<std::complex<double>> amplitudes);

    long first_site() const noexcept { return first_; }
    long last_site() const noexcept { return first_ + static_cast<long>(amplitudes_.size()) - 1; }
    std::size_t size() const noexcept { return amplitudes_.size(); }
    const std::vector<std::complex<double>>& amplitudes() const noexcept { return amplitudes_; }

    /// c_l, zero outside the window.
    std::complex<double> at(long site) const noexcept;

    double norm() const noexcept; // sum |c_l|^2
    double mean() const noexcept; // <N>
    double variance() const noexcept;
    /// max(|c_first|, |c_last|)
    double edge_amplitude() const noexcept;

  private:
    long first_;
    std::vector<std::complex<double>> amplitudes_;
};

/// c_l ∝ exp(-(l - center)^2 / (2 sigma)^2 + i kappa0 (l - center)), normalised,
/// on a window of half-width max(8, ceil(12 sigma)).
WavepacketState gaussian_state(double sigma, double kappa0, long center = 0);

struct CoherenceParams {
    std::complex<double> K{0.0, 0.0}; // sum c*_{l-1} c_l
    std::complex<double> L{0.0, 0.0}; // sum c*_{l-2} c_l
    std::complex<double> J{0.0, 0.0}; // sum (2l - 1) c*_{l-1} c_l

    double kappa_K() const noexcept { return std::arg(K); }
    double nu_L() const noexcept { return std::arg(L); }
    double mu_J() const noexcept { return std::arg(J); }
};

CoherenceParams coherence_params(const WavepacketState& state);

/// Everything about the initial state that the closed forms need.
struct InitialMoments {
    CoherenceParams coherence;
    double mean = 0.0;
    double variance = 0.0;
};

InitialMoments initial_moments(const WavepacketState& state);

/// <N>_t = <N>_0 + 2 |K| |chi_t| sin(phi_t - kappa_K)
double position_expectation(const InitialMoments& initial, const PhasePair& phases);

/// Width for an arbitrary initial state:
///   D_t = D_0 + 2|chi|^2 (1 - |L| cos(2 phi - nu) - 2 |K|^2 sin^2(phi - kappa))
///             + 2|chi| (|J| sin(phi - mu) - 2 <N>_0 |K| sin(phi - kappa)).
double width_variance(const InitialMoments& initial, const PhasePair& phases);

/// Real amplitudes symmetric about site 0 (K, L real, J = <N>_0 = 0):
///   D_t = D_0 + 2|chi|^2 (1 - L cos 2phi - 2 K^2 sin^2 phi).
double width_variance_symmetric(const InitialMoments& initial, const PhasePair& phases);

/// True when cos(2 phi_t) = -1 within tol, i.e. chi_t is purely imaginary and
/// the symmetric-packet broadening is smallest.
bool reduced_dispersion(const PhasePair& phases, double tol = 1e-9);

struct PropagatorOptions {
    double edge_threshold = 1e-12;     // max edge amplitude after propagation
    double trim_threshold = 1e-15;     // leading/trailing amplitudes dropped below this
    std::size_t max_window = 1u << 24; // transform length cap
};

/// Apply exp(-i eta N) exp(-i chi K) exp(-i chi^* K^dag) for the given phases.
/// The window grows by the Bessel spread of |chi| on both sides; throws
/// WindowOverflow when that exceeds max_window or the edges stay populated.
WavepacketState apply_propagator(const WavepacketState& state, const PhasePair& phases,
                                 const PropagatorOptions& options = {});

/// U(t) for the drive, with phases from the closed-form chi().
WavepacketState evolve(const WavepacketState& state, const LatticeModel& model, const DriveProfile& profile, double t,
                       const std::optional<ResonanceClass>& resonance = std::nullopt,
                       const PropagatorOptions& options = {});

struct TrajectorySample {
    double t = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    double norm = 0.0;
    double predicted_mean = 0.0;     // closed form
    double predicted_variance = 0.0; // closed form, general initial state
};

/// Observables at each requested time, each from a single application of U(t)
/// to the initial state.
std::vector<TrajectorySample> sample_trajectory(const WavepacketState& initial, const LatticeModel& model,
                                                const DriveProfile& profile, const std::vector<double>& times,
                                                const std::optional<ResonanceClass>& resonance = std::nullopt,
                                                const PropagatorOptions& options = {});

} // namespace dynloc
