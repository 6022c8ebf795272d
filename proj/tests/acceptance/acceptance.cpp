// Acceptance checks, one PASS/FAIL line per criterion.
//   acceptance            run all
//   acceptance 3 7        run criteria 3 and 7
// Exit status is 1 when any selected criterion fails.

#include "dynloc/continuum.hpp"
#include "dynloc/phases.hpp"
#include "dynloc/specialfn.hpp"
#include "dynloc/wavepacket.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/minima.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace dynloc;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [violated]");
    }
};

// Symmetric real amplitudes c_l = c_{-l}.
WavepacketState random_symmetric_state(std::mt19937_64& rng, long half_width) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<cd> c(2 * half_width + 1);
    double norm = 0.0;
    for (long l = 0; l <= half_width; ++l) {
        c[half_width + l] = c[half_width - l] = amp(rng);
    }
    for (auto a : c) {
        norm += std::norm(a);
    }
    for (auto& a : c) {
        a /= std::sqrt(norm);
    }
    return {-half_width, c};
}

struct Drive {
    DriveProfile profile;
    std::optional<ResonanceClass> resonance;
};

// Resonant periodic drives of every variant; all of them have a transport coefficient.
Drive random_resonant(std::mt19937_64& rng, int which) {
    std::uniform_real_distribution<double> amp(-6.0, 6.0), w(0.5, 2.0), ph(-pi, pi), duty(0.05, 0.95);
    std::uniform_int_distribution<std::int64_t> small(1, 5), harmonic(-4, 4);
    switch (which % 4) {
    case 0: {
        const double omega = w(rng);
        const auto n = harmonic(rng);
        return {MonoDrive{n * omega, amp(rng), omega}, harmonic_resonance(n)};
    }
    case 1: {
        const auto r = solve_diophantine(small(rng), small(rng), harmonic(rng));
        if (!r.resonant) {
            return random_resonant(rng, which);
        }
        const double omega1 = w(rng);
        return {BichromaticDrive{r.n * omega1 / r.p, amp(rng), omega1, amp(rng), omega1 * r.q / r.p, ph(rng)}, r};
    }
    case 2: {
        FlippedDrive f{amp(rng), 0.0, duty(rng), 3.0 * w(rng)};
        f.f2 = (2.0 * pi * harmonic(rng) / f.period - f.duty * f.f1) / (1.0 - f.duty);
        return {f, std::nullopt};
    }
    default: {
        const double omega = w(rng);
        const auto n = harmonic(rng);
        return {FourierDrive{n * omega, {amp(rng), amp(rng), amp(rng)}, omega}, harmonic_resonance(n)};
    }
    }
}

// Drives for the propagator check, including an incommensurate bichromatic one.
Drive random_drive(std::mt19937_64& rng, int which) {
    std::uniform_real_distribution<double> amp(-2.5, 2.5), w(0.7, 1.6), ph(-pi, pi), duty(0.2, 0.8);
    const double omega = w(rng);
    switch (which % 5) {
    case 0:
        return {StaticDrive{0.3 * amp(rng)}, std::nullopt};
    case 1:
        return {MonoDrive{omega, amp(rng), omega}, harmonic_resonance(1)};
    case 2:
        return {BichromaticDrive{omega, amp(rng), omega, amp(rng), 2.0 * omega, ph(rng)}, solve_diophantine(1, 2, 1)};
    case 3:
        return {BichromaticDrive{0.2 * amp(rng), amp(rng), omega, amp(rng), 1.618 * omega, ph(rng)}, std::nullopt};
    default:
        return {FlippedDrive{amp(rng), amp(rng), duty(rng), 3.0 * omega}, std::nullopt};
    }
}

Verdict criterion_1() {
    constexpr double zero_target = -6.49, zero_tol = 0.01;
    constexpr double extremum_target = -4.68, extremum_tol = 0.02;
    const auto model = LatticeModel::from_coupling(1.0);
    const auto family = bichromatic_family(model, solve_diophantine(1, 2, 1), 1.0);
    const auto zeros = find_localization_zeros(family, -10.0, 0.0);

    Verdict v;
    double nearest = NAN;
    for (double z : zeros) {
        if (std::isnan(nearest) || std::abs(z - zero_target) < std::abs(nearest - zero_target)) {
            nearest = z;
        }
    }
    v.require(!std::isnan(nearest) && std::abs(nearest - zero_target) <= zero_tol,
              fmt::format("zero u = {:.6f} (target {} +- {})", nearest, zero_target, zero_tol));

    // Extremum of gamma between that zero and the next one towards u = 0.
    double next = 0.0;
    for (double z : zeros) {
        if (z > nearest + 1e-6) {
            next = std::min(next == 0.0 ? z : next, z);
        }
    }
    const auto [u_ext, neg] = boost::math::tools::brent_find_minima(
        [&](double u) { return -std::abs(family.signed_gamma(u)); }, nearest, next, 40);
    v.require(std::abs(u_ext - extremum_target) <= extremum_tol,
              fmt::format("extremum u = {:.6f}, |gamma| = {:.6f} (target {} +- {})", u_ext, -neg, extremum_target,
                          extremum_tol));
    return v;
}

Verdict criterion_2() {
    constexpr double tol = 0.01, agreement = 0.02;
    const double numeric_target[2] = {3.37, 6.75};
    const double estimate_target[2] = {3.38, 6.77};
    const auto model = LatticeModel::from_coupling(1.0);
    const auto zeros = find_localization_zeros(bichromatic_family(model, solve_diophantine(1, 2, 29), -20.0), 0.0, 8.0);
    const auto estimates = asymptotic_zero_estimates(29, -20.0, 2);

    Verdict v;
    v.require(zeros.size() == 2 && estimates.size() == 2,
              fmt::format("{} numeric zeros and {} estimates on (0, 8]", zeros.size(), estimates.size()));
    for (std::size_t j = 0; j < 2 && j < zeros.size() && j < estimates.size(); ++j) {
        v.require(std::abs(zeros[j] - numeric_target[j]) <= tol,
                  fmt::format("numeric {:.5f} (target {} +- {})", zeros[j], numeric_target[j], tol));
        v.require(std::abs(estimates[j] - estimate_target[j]) <= tol,
                  fmt::format("estimate {:.5f} (target {} +- {})", estimates[j], estimate_target[j], tol));
        v.require(std::abs(zeros[j] - estimates[j]) <= agreement,
                  fmt::format("|numeric - estimate| = {:.4f}", std::abs(zeros[j] - estimates[j])));
    }
    return v;
}

Verdict criterion_3() {
    constexpr double tol = 1e-12;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amp(-25.0, 25.0), w(0.2, 3.0), g(-2.0, 2.0);
    double worst = 0.0;
    for (int mu = 0; mu <= 5; ++mu) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto model = LatticeModel::from_coupling(g(rng));
            const double omega = w(rng), f1 = amp(rng);
            const auto got = gamma(model, MonoDrive{mu * omega, f1, omega}, harmonic_resonance(mu)).gamma;
            const double oracle = 2.0 * model.coupling() * boost::math::cyl_bessel_j(static_cast<double>(mu), f1 / omega);
            worst = std::max(worst, std::abs(got - cd(oracle, 0.0)));
        }
    }
    Verdict v;
    v.require(worst <= tol, fmt::format("max |gamma - 2 g J_mu(u)| = {:.2e} over 600 cases (tol {:.0e})", worst, tol));
    return v;
}

Verdict criterion_4() {
    constexpr double tol = 1e-10;
    double worst = 0.0;
    for (double g : {1.0, -0.37}) {
        const auto model = LatticeModel::from_coupling(g);
        for (double f1 : {1e-4, 1e-2, 1.0}) {
            const auto gam = gamma(model, FlippedDrive{f1, -f1, 0.5, 2.0 * pi / f1});
            worst = std::max(worst, std::abs(gam.modulus() / (4.0 * std::abs(g) / pi) - 1.0));
        }
    }
    Verdict v;
    v.require(worst < tol, fmt::format("max relative deviation of |gamma| from 4|g|/pi = {:.2e} (tol {:.0e})", worst, tol));
    return v;
}

Verdict criterion_5() {
    constexpr double obs_tol = 1e-8, norm_tol = 1e-12, chi_tol = 1e-8;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> time(0.5, 40.0), coupling(-1.2, 1.2);
    std::uniform_int_distribution<long> width(3, 30);
    double worst_mean = 0.0, worst_var = 0.0, worst_norm = 0.0, worst_chi = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = random_symmetric_state(rng, width(rng));
        const auto drive = random_drive(rng, trial);
        const auto model = LatticeModel::from_coupling(coupling(rng));
        const double t = time(rng);
        const auto out = evolve(s, model, drive.profile, t, drive.resonance);
        const auto ph = chi(model, drive.profile, t, drive.resonance);

        // Coherence sums and moments taken straight from the amplitudes.
        cd K{0.0, 0.0};
        double L = 0.0, mean0 = 0.0, second0 = 0.0;
        for (long l = s.first_site(); l <= s.last_site(); ++l) {
            K += std::conj(s.at(l - 1)) * s.at(l);
            L += std::real(std::conj(s.at(l - 2)) * s.at(l));
            mean0 += l * std::norm(s.at(l));
            second0 += double(l) * l * std::norm(s.at(l));
        }
        const double var0 = second0 - mean0 * mean0;
        const double x = std::abs(ph.chi), phi = -std::arg(ph.chi);
        const double mean_oracle = mean0 + 2.0 * std::abs(K) * x * std::sin(phi - std::arg(K));
        const double k2 = std::real(K) * std::real(K);
        const double var_oracle =
            var0 + 2.0 * x * x * (1.0 - L * std::cos(2.0 * phi) - 2.0 * k2 * std::sin(phi) * std::sin(phi));

        worst_mean = std::max(worst_mean, std::abs(out.mean() - mean_oracle) / std::max(1.0, std::abs(mean_oracle)));
        worst_var = std::max(worst_var, std::abs(out.variance() - var_oracle) / std::max(1.0, var_oracle));
        worst_norm = std::max(worst_norm, std::abs(out.norm() - 1.0));
        const auto quad = chi_quadrature(model, drive.profile, t, 1e-11);
        worst_chi = std::max(worst_chi, std::abs(quad.phases.chi - ph.chi));
    }
    Verdict v;
    v.require(worst_mean <= obs_tol, fmt::format("<N> {:.2e}", worst_mean));
    v.require(worst_var <= obs_tol, fmt::format("Delta^2 {:.2e}", worst_var));
    v.require(worst_norm <= norm_tol, fmt::format("norm {:.2e}", worst_norm));
    v.require(worst_chi <= chi_tol, fmt::format("chi vs quadrature {:.2e}", worst_chi));
    return v;
}

Verdict criterion_6() {
    constexpr double bound_slack = 1e-12, velocity_tol = 0.01;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> coupling(-2.0, 2.0);
    double worst_gamma = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto model = LatticeModel::from_coupling(coupling(rng));
        const auto drive = random_resonant(rng, trial);
        const double ratio = gamma(model, drive.profile, drive.resonance).modulus() / (2.0 * std::abs(model.coupling()));
        worst_gamma = std::max(worst_gamma, ratio);
    }

    std::uniform_int_distribution<std::int64_t> pq(1, 8), nn(1, 12);
    std::uniform_real_distribution<double> arg(-15.0, 15.0), phase(-pi, pi);
    double worst_j = 0.0;
    for (int done = 0; done < 10000;) {
        const std::int64_t n = (done % 2 ? 1 : -1) * nn(rng);
        const auto r = solve_diophantine(pq(rng), pq(rng), n);
        if (!r.resonant) {
            continue;
        }
        worst_j = std::max(worst_j, std::abs(gen_bessel_2d(r, arg(rng), arg(rng), std::polar(1.0, r.p * phase(rng)))));
        ++done;
    }

    // Displacement over whole periods of wide packets in resonant drives.
    double worst_velocity = 0.0;
    const auto model = LatticeModel::from_coupling(0.5);
    const std::vector<std::pair<Drive, double>> drives{
        {{BichromaticDrive{1.0, 1.3, 1.0, -0.8, 2.0, 0.7}, solve_diophantine(1, 2, 1)}, 2.0 * pi},
        {{FlippedDrive{1.5, -0.5, 0.25, 2.0 * pi}, std::nullopt}, 2.0 * pi},
        {{MonoDrive{2.0, 1.1, 1.0}, harmonic_resonance(2)}, 2.0 * pi},
    };
    for (const auto& [drive, T] : drives) {
        const auto gam = gamma(model, drive.profile, drive.resonance);
        for (int i = 0; i < 24; ++i) {
            const double kappa0 = -pi + 2.0 * pi * i / 24.0;
            const auto s = gaussian_state(12.0, kappa0);
            const double measured = (evolve(s, model, drive.profile, 5.0 * T, drive.resonance).mean() - s.mean()) / (5.0 * T);
            const double predicted = -gam.modulus() * std::sin(kappa0 + gam.argument());
            worst_velocity = std::max(worst_velocity, std::abs(measured - predicted) / gam.modulus());
        }
    }
    Verdict v;
    v.require(worst_gamma <= 1.0 + bound_slack, fmt::format("max |gamma|/2|g| = {:.12f} over 1e4 drives", worst_gamma));
    v.require(worst_j <= 1.0 / std::sqrt(2.0) + bound_slack,
              fmt::format("max |J_n^(p,q)| = {:.12f} over 1e4 samples (bound {:.12f})", worst_j, 1.0 / std::sqrt(2.0)));
    v.require(worst_velocity <= velocity_tol,
              fmt::format("velocity sweep max error {:.2e} |gamma| (tol {})", worst_velocity, velocity_tol));
    return v;
}

Verdict criterion_7() {
    constexpr double excursion_limit = 2.0;
    constexpr double width_limit = 0.01; // growth of Delta^2 relative to Delta^2(0) over 20 periods
    const auto model = LatticeModel::from_coupling(1.0);
    const auto resonance = solve_diophantine(1, 2, 1);
    const DriveProfile drive = BichromaticDrive{1.0, -6.49, 1.0, 2.0, 2.0, 0.0};
    const double T = 2.0 * pi;
    std::vector<double> times;
    for (int k = 0; k <= 4000; ++k) {
        times.push_back(20.0 * T * k / 4000.0);
    }
    Verdict v;
    for (double kappa0 : {0.0, -pi / 2}) {
        const auto s = gaussian_state(10.0, kappa0);
        double excursion = 0.0, widest = 0.0;
        for (const auto& sample : sample_trajectory(s, model, drive, times, resonance)) {
            excursion = std::max(excursion, std::abs(sample.mean - s.mean()));
            widest = std::max(widest, std::abs(sample.variance / s.variance() - 1.0));
        }
        v.require(excursion < excursion_limit,
                  fmt::format("kappa0 = {:.4f}: max |<N>| = {:.4f} (limit {})", kappa0, excursion, excursion_limit));
        v.require(widest < width_limit, fmt::format("max |Delta^2 / Delta^2(0) - 1| = {:.2e}", widest));
    }
    return v;
}

Verdict criterion_8() {
    constexpr double band_target = 0.0741, band_tol = 0.02;
    constexpr double drift_target = -78.0, drift_tol = 0.05;
    constexpr double half_tol = 0.05, width_limit = 0.10, runtime_limit = 600.0;
    const auto start = std::chrono::steady_clock::now();

    Verdict v;
    const double G = continuum::band_width(0.125);
    v.require(std::abs(G / band_target - 1.0) <= band_tol, fmt::format("band width {:.6f}", G));

    continuum::ShuttleConfig half;
    const auto a = continuum::run_shuttle(half);
    v.require(std::abs(a.drift / drift_target - 1.0) <= drift_tol,
              fmt::format("a = 1/2 drift {:.3f} d/T_B (tight binding {:.3f})", a.drift, a.predicted_drift));

    continuum::ShuttleConfig quarter;
    quarter.duty = 0.25;
    quarter.period_in_bloch = 2.0;
    const auto b = continuum::run_shuttle(quarter);
    const double ratio = b.drift / a.drift;
    v.require(std::abs(ratio / 0.5 - 1.0) <= half_tol, fmt::format("a = 1/4 drift {:.3f}, ratio {:.4f}", b.drift, ratio));
    v.require(a.width_growth < width_limit && b.width_growth < width_limit,
              fmt::format("width growth {:.2f}% / {:.2f}%", 100.0 * a.width_growth, 100.0 * b.width_growth));
    v.require(a.norm_error < 1e-9 && b.norm_error < 1e-9,
              fmt::format("norm error {:.1e} / {:.1e}", a.norm_error, b.norm_error));
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(elapsed < runtime_limit, fmt::format("runs took {:.0f} s", elapsed));
    return v;
}

Verdict criterion_9() {
    constexpr double slope_target = -2.0, slope_tol = 0.3;
    const auto model = LatticeModel::from_coupling(1.0);
    // A static field at half its Bloch period: chi = -2i g / f0, purely imaginary.
    const double f0 = 0.1, t = pi / f0;
    const DriveProfile drive = StaticDrive{f0};
    const auto ph = chi(model, drive, t);

    Verdict v;
    v.require(reduced_dispersion(ph), fmt::format("chi = {:.3e}{:+.3e}i", ph.chi.real(), ph.chi.imag()));
    std::vector<double> log_sigma, log_dev, log_dev_half;
    std::string ratios;
    for (double sigma : {10.0, 20.0, 40.0}) {
        const auto s = gaussian_state(sigma, 0.0);
        const double growth = evolve(s, model, drive, t).variance() - s.variance();
        const double ratio = growth * 4.0 * std::pow(sigma, 4) / std::norm(ph.chi);
        ratios += fmt::format("{}{:.6f}", ratios.empty() ? "" : ", ", ratio);
        log_sigma.push_back(std::log(sigma));
        log_dev.push_back(std::log(std::abs(ratio - 1.0)));
        log_dev_half.push_back(std::log(std::abs(ratio - 0.5)));
    }
    auto slope = [&](const std::vector<double>& y) {
        const double n = static_cast<double>(y.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            sx += log_sigma[i];
            sy += y[i];
            sxx += log_sigma[i] * log_sigma[i];
            sxy += log_sigma[i] * y[i];
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    const double s1 = slope(log_dev);
    v.require(std::abs(s1 - slope_target) <= slope_tol,
              fmt::format("ratios at sigma = 10, 20, 40: {}; slope of |ratio - 1| = {:.3f} (target {} +- {}); "
                          "slope of |ratio - 1/2| = {:.3f}",
                          ratios, s1, slope_target, slope_tol, slope(log_dev_half)));
    return v;
}

struct Criterion {
    int id;
    double runtime_limit; // seconds
    std::function<Verdict()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, 5.0, criterion_1},  {2, 5.0, criterion_2},  {3, 1.0, criterion_3},
        {4, 1.0, criterion_4},  {5, 30.0, criterion_5}, {6, 60.0, criterion_6},
        {7, 10.0, criterion_7}, {8, 600.0, criterion_8}, {9, 30.0, criterion_9},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.push_back(std::atoi(argv[i]));
    }
    bool all_pass = true;
    for (const auto& c : criteria) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        v.require(elapsed < c.runtime_limit, fmt::format("{:.2f} s (limit {} s)", elapsed, c.runtime_limit));
        all_pass = all_pass && v.pass;
        fmt::print("{} criterion {}: {}\n", v.pass ? "PASS" : "FAIL", c.id, v.detail);
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
