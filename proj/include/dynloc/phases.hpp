#pragma once

// Dynamical phases of the product-form propagator
//   U(t) = exp(-i eta_t N) exp(-i chi_t K) exp(-i chi_t^* K^dag),
//   eta_t = int_0^t f,   chi_t = g int_0^t exp(-i eta_tau) dtau,
// and the transport coefficient gamma = 2 chi_T / T of periodic drives.

#include "dynloc/model.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace dynloc {

struct PhasePair {
    double t = 0.0;
    double eta = 0.0;
    std::complex<double> chi{0.0, 0.0};

    double chi_modulus() const noexcept { return std::abs(chi); }
    /// phi_t in chi_t = |chi_t| exp(-i phi_t).
    double chi_phase() const noexcept { return -std::arg(chi); }
};

struct TransportCoefficient {
    std::complex<double> gamma{0.0, 0.0};
    double period = 0.0; // 0 when the drive has no intrinsic period (f = 0)
    bool resonant = false;

    double modulus() const noexcept { return std::abs(gamma); }
    double argument() const noexcept { return std::arg(gamma); }
};

/// Exact antiderivative of f_t with eta_0 = 0.
double eta(const DriveProfile& profile, double t);

/// int_0^t exp(-i f tau) dtau, stable as f*t -> 0.
std::complex<double> phase_integral(double f, double t) noexcept;

/// Closed-form chi_t: Bessel series for mono/bichromatic/Fourier drives,
/// elementary piecewise result with the period recursion for flipped fields.
/// With `resonance` given, terms on the resonance set are integrated exactly
/// as linear growth; otherwise every term goes through phase_integral.
PhasePair chi(const LatticeModel& model, const DriveProfile& profile, double t,
              const std::optional<ResonanceClass>& resonance = std::nullopt);

struct QuadratureResult {
    PhasePair phases;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integration of g exp(-i eta_tau) on panels of at
/// most 1/20 of the fastest phase period. Throws QuadratureFailure when the
/// accumulated error estimate exceeds abs_tol.
QuadratureResult chi_quadrature(const LatticeModel& model, const DriveProfile& profile, double t,
                                double abs_tol = 1e-10);

/// gamma = 2 chi_T / T. Mono, bichromatic and Fourier drives need declared
/// resonance data (std::invalid_argument otherwise); a class with
/// resonant=false yields gamma = 0. Flipped fields take it optionally and
/// otherwise test eta_T against 2*pi*Z.
TransportCoefficient gamma(const LatticeModel& model, const DriveProfile& profile,
                           const std::optional<ResonanceClass>& resonance = std::nullopt);

/// 2 g e^{-i v sin delta} e^{i N delta} J_n^{p,q}(u, v; e^{i p delta}).
std::complex<double> bichromatic_gamma(double g, const ResonanceClass& resonance, double u, double v,
                                       double delta);

/// Same coefficient as a direct sum over all (mu, nu) with p mu + q nu = n.
std::complex<double> bichromatic_gamma_resonant_sum(double g, const ResonanceClass& resonance, double u, double v,
                                                    double delta);

/// epsilon(kappa) = |gamma| cos(kappa d + arg gamma)
double quasienergy(const TransportCoefficient& gamma, double kappa, double d = 1.0);

/// v = -|gamma| sin(kappa d + arg gamma), in sites per unit time.
double transport_velocity(const TransportCoefficient& gamma, double kappa, double d = 1.0);

/// One-parameter family of drives with a real, signed transport amplitude
/// s(x) (|gamma| = |s|), used for nodal-line searches.
struct GammaFamily {
    std::function<double(double)> signed_gamma;
    double coupling = 1.0;
};

/// u -> 2 g J_n^{p,q}(u, v) with delta = 0.
GammaFamily bichromatic_family(const LatticeModel& model, const ResonanceClass& resonance, double v);

/// u -> 2 g J_mu(u)
GammaFamily mono_family(const LatticeModel& model, int mu);

/// x = a f1 T -> gamma e^{i x/2} with f2 fixed by the resonance f0 T = 2 pi n.
GammaFamily flipped_family(const LatticeModel& model, double duty, double period, std::int64_t n);

/// Sign-change zeros of the family on [lo, hi], bisected until the bracket is
/// below tol and |s| < 1e-8 * 2|g| (or the bracket stops shrinking).
std::vector<double> find_localization_zeros(const GammaFamily& family, double lo, double hi, double tol = 1e-8,
                                            int samples = 0);

} // namespace dynloc
