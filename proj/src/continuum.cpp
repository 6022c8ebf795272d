#include "dynloc/continuum.hpp"

#include "dynloc/errors.hpp"
#include "dynloc/phases.hpp"
#include "fft.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dynloc::continuum {

namespace {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }


// exp(i c m) for m in [0, n) from two exact tables, so every factor has
// unit modulus to rounding regardless of m.
class PhaseRamp {
  public:
    PhaseRamp(double c, std::size_t n) : high_(n / block + 1) {
        for (std::size_t m = 0; m < block; ++m) {
            low_[m] = std::polar(1.0, c * static_cast<double>(m));
        }
        for (std::size_t m = 0; m < high_.size(); ++m) {
            high_[m] = std::polar(1.0, c * static_cast<double>(m * block));
        }
    }
    cplx operator()(std::size_t m) const noexcept { return low_[m % block] * high_[m / block]; }

  private:
    static constexpr std::size_t block = 64;
    std::array<cplx, block> low_{};
    std::vector<cplx> high_;
};

// Flip instants and period boundaries strictly inside (t0, t1).
std::vector<double> flip_points(const FlippedDrive& f, double t0, double t1) {
    std::vector<double> points{t0};
    const double first = std::floor(t0 / f.period);
    for (double k = first;; k += 1.0) {
        const double start = k * f.period;
        if (start >= t1) {
            break;
        }
        for (double edge : {start + f.duty * f.period, start + f.period}) {
            if (edge > t0 && edge < t1) {
                points.push_back(edge);
            }
        }
    }
    points.push_back(t1);
    return points;
}

// int a and int a^2 over [t0, t1], a = int_0^t F piecewise linear: Simpson per
// linear piece is exact for both.
std::pair<double, double> vector_potential_moments(const FlippedDrive& f, double t0, double t1) {
    const auto points = flip_points(f, t0, t1);
    double first = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double lo = points[i];
        const double hi = points[i + 1];
        const double h = hi - lo;
        const double a0 = eta(f, lo);
        const double am = eta(f, 0.5 * (lo + hi));
        const double a1 = eta(f, hi);
        first += h / 6.0 * (a0 + 4.0 * am + a1);
        second += h / 6.0 * (a0 * a0 + 4.0 * am * am + a1 * a1);
    }
    return {first, second};
}

} // namespace

Grid::Grid(std::size_t periods, std::size_t points_per_period, double dt)
    : periods_(periods), points_per_period_(points_per_period), dt_(dt) {
    if (periods < 2 || periods % 2 != 0) {
        throw std::invalid_argument("Grid: the number of lattice periods must be even and >= 2");
    }
    if (points_per_period < 8) {
        throw std::invalid_argument("Grid: need at least 8 points per lattice period");
    }
    if (!is_pow2(periods * points_per_period)) {
        throw std::invalid_argument("Grid: point count must be a power of two");
    }
    if (!std::isfinite(dt) || !(dt > 0.0)) {
        throw std::invalid_argument("Grid: dt must be positive");
    }
}

double Grid::k(std::size_t j) const noexcept {
    const auto n = static_cast<long>(points());
    const auto index = static_cast<long>(j);
    const long signed_index = index < n / 2 ? index : index - n;
    return static_cast<double>(signed_index) * (2.0 * std::numbers::pi / length());
}

double band_width(double v0, int plane_waves, int kappa_samples) {
    if (!std::isfinite(v0) || v0 < 0.0) {
        throw std::invalid_argument("band_width: v0 must be finite and non-negative");
    }
    if (plane_waves < 32) {
        throw std::invalid_argument("band_width: need at least 32 plane waves");
    }
    if (kappa_samples < 2) {
        throw std::invalid_argument("band_width: need at least 2 quasimomentum samples");
    }
    const int half = plane_waves / 2;
    const int size = 2 * half + 1;
    double lowest = std::numeric_limits<double>::infinity();
    double highest = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
    for (int s = 0; s < kappa_samples; ++s) {
        // Reciprocal lattice vector 1 for d = 2 pi; the band is even in kappa.
        const double kappa = 0.5 * static_cast<double>(s) / static_cast<double>(kappa_samples - 1);
        h.setZero();
        for (int i = 0; i < size; ++i) {
            const double k = kappa + static_cast<double>(i - half);
            h(i, i) = 0.5 * k * k;
            if (i + 1 < size) {
                h(i, i + 1) = 0.5 * v0;
                h(i + 1, i) = 0.5 * v0;
            }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
        const double e0 = solver.eigenvalues()(0);
        lowest = std::min(lowest, e0);
        highest = std::max(highest, e0);
    }
    return highest - lowest;
}

Field gaussian_packet(const Grid& grid, double s, double x0) {
    if (!std::isfinite(s) || !(s > 0.0) || !std::isfinite(x0)) {
        throw std::invalid_argument("gaussian_packet: need s > 0 and finite x0");
    }
    Field psi(grid.points());
    double norm = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double y = grid.x(i) - x0;
        psi[i] = std::exp(-y * y / (4.0 * s * s));
        norm += std::norm(psi[i]) * grid.dx();
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (cplx& value : psi) {
        value *= scale;
    }
    return psi;
}

Field lowest_band_component(const Grid& grid, double v0, const Field& psi, double a) {
    if (psi.size() != grid.points()) {
        throw std::invalid_argument("lowest_band_component: field does not match the grid");
    }
    const std::size_t n = grid.points();
    const std::size_t cells = grid.periods();
    const std::size_t bands = grid.points_per_period();
    detail::FftPlan plan(n);
    std::copy(psi.begin(), psi.end(), plan.buffer());
    plan.forward();
    // cos x shifts the wave number by one reciprocal vector, i.e. by `cells`
    // bins (cyclically); the grid origin is a multiple of 2 pi.
    Eigen::MatrixXd h(static_cast<Eigen::Index>(bands), static_cast<Eigen::Index>(bands));
    Eigen::VectorXcd block(static_cast<Eigen::Index>(bands));
    for (std::size_t r = 0; r < cells; ++r) {
        h.setZero();
        for (std::size_t m = 0; m < bands; ++m) {
            const auto i = static_cast<Eigen::Index>(m);
            const double k = grid.k(r + m * cells) - a;
            h(i, i) = 0.5 * k * k;
            const auto next = static_cast<Eigen::Index>((m + 1) % bands);
            h(i, next) += 0.5 * v0;
            h(next, i) += 0.5 * v0;
            block(i) = plan[r + m * cells];
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
        const Eigen::VectorXd ground = solver.eigenvectors().col(0);
        const cplx overlap = ground.cast<cplx>().dot(block);
        for (std::size_t m = 0; m < bands; ++m) {
            plan[r + m * cells] = overlap * ground(static_cast<Eigen::Index>(m));
        }
    }
    plan.backward();
    return Field(plan.buffer(), plan.buffer() + n);
}

void project_lowest_band(const Grid& grid, double v0, Field& psi) {
    Field band = lowest_band_component(grid, v0, psi, 0.0);
    double norm = 0.0;
    for (const cplx& c : band) {
        norm += std::norm(c) * grid.dx();
    }
    if (!(norm > 0.0)) {
        throw NumericFailure("project_lowest_band: state has no lowest-band component");
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        psi[i] = band[i] * scale;
    }
}

Moments moments(const Grid& grid, const Field& psi) {
    double norm = 0.0;
    double first = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double density = std::norm(psi[i]) * grid.dx();
        norm += density;
        first += grid.x(i) * density;
    }
    const double mean = first / norm;
    double second = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double y = grid.x(i) - mean;
        second += y * y * std::norm(psi[i]) * grid.dx();
    }
    const double edge = std::max(std::norm(psi.front()), std::norm(psi.back()));
    return {norm, mean, second / norm, edge};
}

Sample measure(const Grid& grid, double v0, const Field& psi, double t, double a, Gauge gauge) {
    Field velocity_frame = psi;
    if (gauge == Gauge::Length) {
        // psi_velocity = exp(i a x) psi_length
        for (std::size_t i = 0; i < psi.size(); ++i) {
            velocity_frame[i] *= std::polar(1.0, a * grid.x(i));
        }
    }
    Sample sample;
    sample.t = t;
    sample.full = moments(grid, psi);
    sample.band = moments(grid, lowest_band_component(grid, v0, velocity_frame, a));
    return sample;
}

Propagation split_step_propagate(const Grid& grid, double v0, Field psi, const FlippedDrive& force, std::size_t steps,
                                 const PropagateOptions& options) {
    validate(force);
    if (psi.size() != grid.points()) {
        throw std::invalid_argument("split_step_propagate: field does not match the grid");
    }
    const std::size_t n = grid.points();
    const double dt = grid.dt();
    const double dk = 2.0 * std::numbers::pi / grid.length();
    // The velocity-gauge field is kept in the frame shifted by m dk, m = round(a/dk)
    // at the start of each step, so |k - a| never exceeds k_max + dk/2 + |F| dt.
    const double k_top = options.gauge == Gauge::Velocity
                             ? grid.k_max() + 0.5 * dk + std::max(std::abs(force.f1), std::abs(force.f2)) * dt
                             : grid.k_max();
    const double e_max = 0.5 * k_top * k_top + std::abs(v0);
    if (!(dt * e_max < 0.5)) {
        throw std::invalid_argument("split_step_propagate: dt * E_max = " + std::to_string(dt * e_max) +
                                    " violates the stability bound 0.5");
    }

    std::vector<cplx> potential_half(n);
    for (std::size_t i = 0; i < n; ++i) {
        potential_half[i] = std::polar(1.0, -0.5 * dt * v0 * std::cos(grid.x(i)));
    }
    std::vector<cplx> kinetic(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = grid.k(j);
        kinetic[j] = std::polar(1.0, -0.5 * dt * k * k);
    }

    detail::FftPlan plan(n);
    // Stored field = exp(-i m dk x) psi in the velocity gauge.
    long frame = 0;
    std::copy(psi.begin(), psi.end(), plan.buffer());

    Propagation out;
    const auto record = [&](std::size_t step) {
        const double t = dt * static_cast<double>(step);
        const double a = eta(force, t) - (options.gauge == Gauge::Velocity ? frame * dk : 0.0);
        Sample sample = measure(grid, v0, Field(plan.buffer(), plan.buffer() + n), t, a, options.gauge);
        if (sample.band.edge_density > options.edge_density) {
            throw WrapAround("split_step_propagate: lowest-band density " + std::to_string(sample.band.edge_density) +
                             " at the domain edge at t = " + std::to_string(t));
        }
        out.samples.push_back(sample);
    };
    record(0);

    const auto apply_potential = [&](double t0, double t1) {
        if (options.gauge == Gauge::Velocity) {
            for (std::size_t i = 0; i < n; ++i) {
                plan[i] *= potential_half[i];
            }
            return;
        }
        // exp(-i x int F) with int F = a(t1) - a(t0).
        const double c = eta(force, t1) - eta(force, t0);
        const PhaseRamp ramp(-grid.dx() * c, n);
        const cplx offset = std::polar(1.0, -grid.origin() * c);
        for (std::size_t i = 0; i < n; ++i) {
            plan[i] *= potential_half[i] * offset * ramp(i);
        }
    };

    for (std::size_t step = 0; step < steps; ++step) {
        const double t0 = dt * static_cast<double>(step);
        const double t1 = dt * static_cast<double>(step + 1);
        const double tm = 0.5 * (t0 + t1);
        apply_potential(t0, tm);
        plan.forward();
        if (options.gauge == Gauge::Velocity) {
            const long target = std::lround(eta(force, t0) / dk);
            if (target != frame) {
                // phi_new(k) = phi_old(k + (target - frame) dk), an exact bin rotation
                const long rotate = ((target - frame) % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n);
                std::rotate(plan.buffer(), plan.buffer() + rotate, plan.buffer() + n);
                frame = target;
            }
            // exp(-i int (k - r)^2/2) = exp(-i k^2 dt/2) exp(i k R1) exp(-i R2/2), r = a - m dk
            const auto [a1, a2] = vector_potential_moments(force, t0, t1);
            const double shift_k = static_cast<double>(frame) * dk;
            const double r1 = a1 - shift_k * dt;
            const double r2 = a2 - 2.0 * shift_k * a1 + shift_k * shift_k * dt;
            const PhaseRamp ramp(dk * r1, n);
            const cplx global = std::polar(1.0, -0.5 * r2);
            const cplx wrap = std::polar(1.0, -dk * r1 * static_cast<double>(n));
            for (std::size_t j = 0; j < n; ++j) {
                const cplx shift = j < n / 2 ? ramp(j) : ramp(j) * wrap;
                plan[j] *= kinetic[j] * shift * global;
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                plan[j] *= kinetic[j];
            }
        }
        plan.backward();
        apply_potential(tm, t1);
        const std::size_t done = step + 1;
        if ((options.sample_stride != 0 && done % options.sample_stride == 0) ||
            (done == steps && (options.sample_stride == 0 || done % options.sample_stride != 0))) {
            record(done);
        }
    }
    out.psi.assign(plan.buffer(), plan.buffer() + n);
    if (frame != 0) {
        for (std::size_t i = 0; i < n; ++i) {
            out.psi[i] *= std::polar(1.0, static_cast<double>(frame) * dk * grid.x(i));
        }
    }
    return out;
}

double drift_per_bloch_period(const std::vector<Sample>& samples, double drive_period, double bloch_period) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (const Sample& s : samples) {
        const double cycles = s.t / drive_period;
        if (std::abs(cycles - std::round(cycles)) > 1e-9 * std::max(1.0, cycles)) {
            continue;
        }
        const double x = s.t / bloch_period;
        const double y = s.band.mean_x / lattice_period;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) {
        throw std::invalid_argument("drift_per_bloch_period: need samples at two or more period boundaries");
    }
    const double c = static_cast<double>(count);
    return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

double tight_binding_drift(double band_width, const FlippedDrive& force, double bloch_period, double kappa0) {
    const LatticeModel model = LatticeModel::from_band_width(band_width, lattice_period);
    FlippedDrive reduced = force;
    reduced.f1 *= lattice_period;
    reduced.f2 *= lattice_period;
    const TransportCoefficient gam = gamma(model, reduced);
    return transport_velocity(gam, kappa0) * bloch_period;
}

ShuttleResult run_shuttle(const ShuttleConfig& config) {
    if (!(config.force >= 0.0) || !std::isfinite(config.force)) {
        throw std::invalid_argument("run_shuttle: force must be non-negative");
    }
    const double bloch_force = config.force > 0.0 ? config.force : config.reference_force;
    if (!(bloch_force > 0.0) || !std::isfinite(bloch_force)) {
        throw std::invalid_argument("run_shuttle: reference force must be positive");
    }
    if (!(config.period_in_bloch > 0.0) || !(config.bloch_periods > 0.0) || config.samples_per_period == 0) {
        throw std::invalid_argument("run_shuttle: period, duration and sampling must be positive");
    }
    ShuttleResult result;
    result.band_width = band_width(config.v0);
    result.bloch_period = 2.0 * std::numbers::pi / (bloch_force * lattice_period);
    const Grid grid(config.periods, config.points_per_period,
                    result.bloch_period / static_cast<double>(config.steps_per_bloch));
    Field psi = gaussian_packet(grid, config.s, config.start_site * lattice_period);
    if (config.project) {
        project_lowest_band(grid, config.v0, psi);
    }
    const FlippedDrive force{config.force, -config.force, config.duty, config.period_in_bloch * result.bloch_period};
    const double steps_per_period = config.period_in_bloch * static_cast<double>(config.steps_per_bloch);
    const auto stride =
        static_cast<std::size_t>(std::max(1.0, std::round(steps_per_period / static_cast<double>(config.samples_per_period))));
    const auto steps = static_cast<std::size_t>(std::llround(config.bloch_periods * static_cast<double>(config.steps_per_bloch)));
    PropagateOptions options;
    options.gauge = config.gauge;
    options.sample_stride = stride;
    Propagation run = split_step_propagate(grid, config.v0, std::move(psi), force, steps, options);

    result.samples = std::move(run.samples);
    result.drift = drift_per_bloch_period(result.samples, force.period, result.bloch_period);
    result.predicted_drift = tight_binding_drift(result.band_width, force, result.bloch_period);
    const Sample& first = result.samples.front();
    const Sample& last = result.samples.back();
    result.width_growth = std::sqrt(last.band.var_x / first.band.var_x) - 1.0;
    result.full_width_growth = std::sqrt(last.full.var_x / first.full.var_x) - 1.0;
    result.interband_fraction = 1.0 - last.band.norm / last.full.norm;
    for (const Sample& s : result.samples) {
        result.norm_error = std::max(result.norm_error, std::abs(s.full.norm - 1.0));
        result.full_edge_density = std::max(result.full_edge_density, s.full.edge_density);
    }
    return result;
}

} // namespace dynloc::continuum
