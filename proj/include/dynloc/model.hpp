#pragma once

// Physical parameters of the driven single-band lattice and the number theory
// of its frequencies.
//
// Units: hbar = 1, and drive amplitudes are given in reduced form f = d*F, so
// every field strength is a frequency. The lattice period d only enters when
// converting quasimomenta (kappa*d).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace dynloc {

/// Nearest-neighbour tight-binding lattice, H = g (K + K^dag) + f_t N.
class LatticeModel {
  public:
    /// Coupling g = -G/4 for a band of width G. Any finite g != 0 is accepted.
    static LatticeModel from_coupling(double g, double period = 1.0);
    static LatticeModel from_band_width(double band_width, double period = 1.0);

    double coupling() const noexcept { return g_; }
    double band_width() const noexcept;
    double period() const noexcept { return d_; }

  private:
    LatticeModel(double g, double d) : g_(g), d_(d) {}
    double g_;
    double d_;
};

// Drive profiles. Each one describes f_t; see eta() in phases.hpp for its
// antiderivative.

/// f_t = f0
struct StaticDrive {
    double f0 = 0.0;
};

/// f_t = f0 - f1 cos(omega1 t)
struct MonoDrive {
    double f0 = 0.0;
    double f1 = 0.0;
    double omega1 = 1.0;
};

/// f_t = f0 - f1 cos(omega1 t) - f2 cos(omega2 t + delta)
struct BichromaticDrive {
    double f0 = 0.0;
    double f1 = 0.0;
    double omega1 = 1.0;
    double f2 = 0.0;
    double omega2 = 2.0;
    double delta = 0.0;

    double u() const noexcept { return f1 / omega1; }
    double v() const noexcept { return f2 / omega2; }
};

/// Rectangular field: f1 on [0, aT), f2 on [aT, T), repeated with period T.
struct FlippedDrive {
    double f1 = 1.0;
    double f2 = -1.0;
    double duty = 0.5;   // a, in (0, 1)
    double period = 1.0; // T

    /// Time average a*f1 + (1-a)*f2; derived, never stored.
    double mean_field() const noexcept { return duty * f1 + (1.0 - duty) * f2; }
};

/// Even polychromatic field f_t = f0 - sum_m f_m cos(m omega t), m = 1..M.
struct FourierDrive {
    double f0 = 0.0;
    std::vector<double> harmonics; // harmonics[m-1] = f_m
    double omega = 1.0;
};

using DriveProfile = std::variant<StaticDrive, MonoDrive, BichromaticDrive, FlippedDrive, FourierDrive>;

/// Throws std::invalid_argument when a profile violates its parameter domain.
void validate(const DriveProfile& profile);

/// Instantaneous field f_t.
double field(const DriveProfile& profile, double t);

/// Smallest period of f_t, or nullopt for a static field.
std::optional<double> drive_period(const DriveProfile& profile);

/// Upper bound on |f_t| plus the highest drive frequency; sets quadrature
/// resolution.
double max_phase_rate(const DriveProfile& profile);

std::string_view variant_name(const DriveProfile& profile);

/// Declared arithmetic class of a frequency ratio. Floating point values
/// cannot certify irrationality, so the class is always stated by the caller.
class FrequencyRatio {
  public:
    static FrequencyRatio rational(std::int64_t numerator, std::int64_t denominator);
    static FrequencyRatio incommensurable() { return FrequencyRatio{}; }

    /// Accepts "a/b", "a", or "incommensurable" (also "irrational").
    static FrequencyRatio parse(std::string_view text);

    bool is_rational() const noexcept { return rational_; }
    std::int64_t numerator() const;
    std::int64_t denominator() const;
    std::string to_string() const;

    bool operator==(const FrequencyRatio&) const = default;

  private:
    FrequencyRatio() = default;
    bool rational_ = false;
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// Solution data of the resonance condition n = p*mu + q*nu, with
/// omega2/omega1 = q/p and n = p*omega_B/omega1.
struct ResonanceClass {
    std::int64_t p = 1;
    std::int64_t q = 1;
    std::int64_t n = 0;
    std::int64_t M = 0;
    std::int64_t N = 0;
    bool resonant = false;

    /// (M - q k, N + p k); every member solves p*mu + q*nu = n.
    std::pair<std::int64_t, std::int64_t> member(std::int64_t k) const;
    std::vector<std::pair<std::int64_t, std::int64_t>> members(std::int64_t k_min, std::int64_t k_max) const;
};

/// Extended Euclid on p*M + q*N = n. Non-coprime (p, q) are reduced by their
/// gcd; when gcd does not divide n the class is returned with resonant=false.
/// The canonical representative minimises |M|, ties going to M >= 0.
ResonanceClass solve_diophantine(std::int64_t p, std::int64_t q, std::int64_t n);

/// Resonance omega_B = n*omega for single-frequency drives (mono, Fourier).
ResonanceClass harmonic_resonance(std::int64_t n);

ResonanceClass non_resonant();

enum class TransportClass {
    Localized,
    LocalizedTransportPossible, // measure-zero tuning can still resonate
    Transport,                  // localization possible at Bessel zeros
};

std::string_view to_string(TransportClass verdict);

struct TransportVerdict {
    TransportClass verdict = TransportClass::Localized;
    std::optional<ResonanceClass> resonance; // set for the rational/rational cell
};

/// Bichromatic transport taxonomy from omega2/omega1 and omega_B/omega1.
TransportVerdict classify_transport(const FrequencyRatio& ratio_21, const FrequencyRatio& ratio_b1);

} // namespace dynloc
