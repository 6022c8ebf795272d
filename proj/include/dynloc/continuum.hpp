#pragma once

// Continuum Schrodinger propagation in V(x) = v0 cos x with a flipped force,
// H = p^2/2 + v0 cos x + F(t) x (hbar = m = 1, lattice period d = 2 pi).
// Forces here are physical F; the tight-binding reduced field is f = d F.

#include "dynloc/model.hpp"

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace dynloc::continuum {

inline constexpr double lattice_period = 2.0 * std::numbers::pi;

/// Periodic grid of `periods` lattice cells centred on x = 0.
class Grid {
  public:
    /// Point count periods * points_per_period must be a power of two,
    /// points_per_period >= 8, periods even.
    Grid(std::size_t periods, std::size_t points_per_period, double dt);

    std::size_t periods() const noexcept { return periods_; }
    std::size_t points_per_period() const noexcept { return points_per_period_; }
    std::size_t points() const noexcept { return periods_ * points_per_period_; }
    double dt() const noexcept { return dt_; }
    double length() const noexcept { return static_cast<double>(periods_) * lattice_period; }
    double dx() const noexcept { return lattice_period / static_cast<double>(points_per_period_); }
    double origin() const noexcept { return -0.5 * length(); }
    double x(std::size_t i) const noexcept { return origin() + dx() * static_cast<double>(i); }
    /// Wave number of FFT bin j (standard ordering).
    double k(std::size_t j) const noexcept;
    double k_max() const noexcept { return std::numbers::pi / dx(); }

  private:
    std::size_t periods_;
    std::size_t points_per_period_;
    double dt_;
};

using Field = std::vector<std::complex<double>>;

/// Width of the lowest Bloch band of p^2/2 + v0 cos x: plane waves
/// exp(i(kappa + G)x), |G| <= plane_waves/2, kappa sampled on [0, 1/2].
double band_width(double v0, int plane_waves = 64, int kappa_samples = 65);

/// psi ∝ exp(-(x - x0)^2 / (2s)^2), normalised to int |psi|^2 dx = 1.
Field gaussian_packet(const Grid& grid, double s, double x0);

/// Keep only the lowest-band component of psi for the grid Hamiltonian
/// p^2/2 + v0 cos x, then renormalise.
void project_lowest_band(const Grid& grid, double v0, Field& psi);

/// Unnormalised projection of a velocity-gauge field onto the lowest band of
/// (p - a)^2/2 + v0 cos x.
Field lowest_band_component(const Grid& grid, double v0, const Field& psi, double a);

struct Moments {
    double norm = 0.0;         // int |psi|^2 dx
    double mean_x = 0.0;       // <x>
    double var_x = 0.0;        // <(x - <x>)^2>
    double edge_density = 0.0; // max |psi|^2 at the two domain edges
};

Moments moments(const Grid& grid, const Field& psi);

enum class Gauge {
    Velocity, // (p - a(t))^2/2 + v0 cos x, a = int_0^t F
    Length,   // p^2/2 + v0 cos x + F(t) x
};

/// Observables of the full field and of its lowest-band part, the shuttled
/// packet. Flips at the zone edge excite a small fraction into higher bands,
/// which then runs away from the packet.
struct Sample {
    double t = 0.0;
    Moments full;
    Moments band;
};

/// `a` is the vector potential int_0^t F at time t.
Sample measure(const Grid& grid, double v0, const Field& psi, double t, double a, Gauge gauge);

struct PropagateOptions {
    Gauge gauge = Gauge::Velocity;
    std::size_t sample_stride = 0;   // record every n steps; 0 records start and end only
    double edge_density = 1e-8;      // wrap-around threshold on the lowest-band |psi|^2 at the edge
};

struct Propagation {
    Field psi;
    std::vector<Sample> samples;
};

/// Strang splitting V/2, T, V/2 with the kinetic phase integrated exactly over
/// each step. Throws std::invalid_argument when dt * E_max >= 0.5 and
/// WrapAround when lowest-band density reaches the domain edge.
Propagation split_step_propagate(const Grid& grid, double v0, Field psi, const FlippedDrive& force, std::size_t steps,
                                 const PropagateOptions& options = {});

/// Least-squares slope of the lowest-band <x>/d against t/T_B using the
/// samples taken at multiples of the drive period.
double drift_per_bloch_period(const std::vector<Sample>& samples, double drive_period, double bloch_period);

/// Tight-binding drift in d per T_B for a band of width G (g = -G/4) and a
/// packet at rest in quasimomentum kappa0.
double tight_binding_drift(double band_width, const FlippedDrive& force, double bloch_period, double kappa0 = 0.0);

struct ShuttleConfig {
    double v0 = 0.125;
    double force = 0.0003;         // |F|; the field starts with +F
    double reference_force = 0.0003; // sets T_B = 2 pi / (F d) when force == 0
    double duty = 0.5;             // a
    double period_in_bloch = 1.0;  // T / T_B
    double bloch_periods = 4.0;    // run length in T_B
    double s = 15.0 * std::numbers::pi;
    double start_site = 160.0;     // initial centre in units of d
    std::size_t periods = 512;
    std::size_t points_per_period = 8;
    std::size_t steps_per_bloch = 81920; // dt * E_max = 0.41 on the default grid
    std::size_t samples_per_period = 8;
    bool project = true;
    Gauge gauge = Gauge::Velocity;
};

struct ShuttleResult {
    double band_width = 0.0;
    double bloch_period = 0.0;
    double drift = 0.0;           // measured, d / T_B
    double predicted_drift = 0.0; // tight binding with the measured band width
    double width_growth = 0.0;    // lowest-band sigma_x(end) / sigma_x(0) - 1
    double full_width_growth = 0.0;
    double interband_fraction = 0.0; // weight outside the lowest band at the end
    double norm_error = 0.0;      // max |norm - 1| over the samples
    double full_edge_density = 0.0;
    std::vector<Sample> samples;
};

ShuttleResult run_shuttle(const ShuttleConfig& config);

} // namespace dynloc::continuum
