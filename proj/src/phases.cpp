#include "dynloc/phases.hpp"

#include "dynloc/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dynloc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool nearly(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * std::max(1.0, scale); }

void check_harmonic(const ResonanceClass& r, double f0, double omega, const char* what) {
    if (r.p != 1) {
        throw std::invalid_argument(std::string(what) + " resonance must have p = 1 (omega_B = n omega)");
    }
    const double expected = static_cast<double>(r.n) * omega;
    if (!nearly(f0, expected, std::max(std::abs(f0), std::abs(expected)))) {
        throw std::invalid_argument(std::string(what) + " resonance data inconsistent with f0 = n omega");
    }
}

void check_bichromatic(const ResonanceClass& r, const BichromaticDrive& b) {
    const double p = static_cast<double>(r.p);
    const double q = static_cast<double>(r.q);
    if (!nearly(p * b.omega2, q * b.omega1, q * b.omega1)) {
        throw std::invalid_argument("bichromatic resonance data inconsistent with omega2/omega1 = q/p");
    }
    if (r.resonant) {
        const double n = static_cast<double>(r.n);
        if (!nearly(p * b.f0, n * b.omega1, std::max(std::abs(p * b.f0), std::abs(n * b.omega1)))) {
            throw std::invalid_argument("bichromatic resonance data inconsistent with n = p omega_B / omega1");
        }
    }
}

// sum_{j=0}^{k-1} exp(-i j theta), continuous through theta in 2 pi Z.
cplx geometric_phase_sum(long k, double theta) {
    if (k <= 0) {
        return {0.0, 0.0};
    }
    const double x = 0.5 * theta;
    const double m = std::round(x / std::numbers::pi);
    const double eps = x - m * std::numbers::pi;
    const double kd = static_cast<double>(k);
    double ratio = kd;
    if (eps != 0.0) {
        ratio = std::sin(kd * eps) / std::sin(eps);
    }
    const long mi = static_cast<long>(m);
    const bool odd = (((k - 1) % 2 != 0) && (mi % 2 != 0));
    return std::polar(odd ? -ratio : ratio, -(kd - 1.0) * x);
}

struct FlippedPieces {
    double duty_time; // aT
    double eta_period;
    cplx chi_period;
};

cplx flipped_chi_within(const FlippedDrive& f, double g, double s) {
    const double at = f.duty * f.period;
    if (s <= at) {
        return g * phase_integral(f.f1, s);
    }
    return g * (phase_integral(f.f1, at) + std::polar(1.0, -f.f1 * at) * phase_integral(f.f2, s - at));
}

double flipped_eta_within(const FlippedDrive& f, double s) {
    const double at = f.duty * f.period;
    return s <= at ? f.f1 * s : f.f1 * at + f.f2 * (s - at);
}

FlippedPieces flipped_pieces(const FlippedDrive& f, double g) {
    return {f.duty * f.period, flipped_eta_within(f, f.period), flipped_chi_within(f, g, f.period)};
}

// Split t = k T + s with 0 <= s < T.
std::pair<long, double> split_period(double t, double period) {
    double k = std::floor(t / period);
    double s = t - k * period;
    if (s < 0.0) {
        s += period;
        k -= 1.0;
    } else if (s >= period) {
        s -= period;
        k += 1.0;
    }
    return {static_cast<long>(k), s};
}

std::vector<double> fourier_betas(const FourierDrive& f) {
    std::vector<double> betas(f.harmonics.size());
    for (std::size_t m = 1; m <= f.harmonics.size(); ++m) {
        betas[m - 1] = f.harmonics[m - 1] / (static_cast<double>(m) * f.omega);
    }
    return betas;
}

const ResonanceClass& require_resonance(const std::optional<ResonanceClass>& r, const DriveProfile& profile) {
    if (!r) {
        throw std::invalid_argument("gamma: resonance data required for " + std::string(variant_name(profile)) +
                                    " drive");
    }
    return *r;
}

} // namespace

cplx phase_integral(double f, double t) noexcept {
    const double x = 0.5 * f * t;
    double sinc = 1.0;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    } else {
        sinc = std::sin(x) / x;
    }
    return std::polar(t * sinc, -x);
}

double eta(const DriveProfile& profile, double t) {
    return std::visit(
        overloaded{
            [t](const StaticDrive& s) { return s.f0 * t; },
            [t](const MonoDrive& m) { return m.f0 * t - (m.f1 / m.omega1) * std::sin(m.omega1 * t); },
            [t](const BichromaticDrive& b) {
                return b.f0 * t - b.u() * std::sin(b.omega1 * t) -
                       b.v() * (std::sin(b.omega2 * t + b.delta) - std::sin(b.delta));
            },
            [t](const FlippedDrive& f) {
                const auto [k, s] = split_period(t, f.period);
                return static_cast<double>(k) * flipped_eta_within(f, f.period) + flipped_eta_within(f, s);
            },
            [t](const FourierDrive& f) {
                double value = f.f0 * t;
                for (std::size_t m = 1; m <= f.harmonics.size(); ++m) {
                    const double mw = static_cast<double>(m) * f.omega;
                    value -= f.harmonics[m - 1] / mw * std::sin(mw * t);
                }
                return value;
            },
        },
        profile);
}

PhasePair chi(const LatticeModel& model, const DriveProfile& profile, double t,
              const std::optional<ResonanceClass>& resonance) {
    validate(profile);
    if (!std::isfinite(t) || t < 0.0) {
        throw std::invalid_argument("chi: t must be finite and non-negative");
    }
    const double g = model.coupling();
    const bool exact = resonance && resonance->resonant;
    PhasePair out;
    out.t = t;
    out.eta = eta(profile, t);
    out.chi = std::visit(
        overloaded{
            [&](const StaticDrive& s) { return g * phase_integral(s.f0, t); },
            [&](const MonoDrive& m) {
                const BesselTable ju(m.f1 / m.omega1);
                cplx sum{0.0, 0.0};
                for (long mu = -ju.cutoff(); mu <= ju.cutoff(); ++mu) {
                    const double weight = ju(mu);
                    if (weight == 0.0) {
                        continue;
                    }
                    if (exact && mu == resonance->n) {
                        sum += weight * t;
                    } else {
                        sum += weight * phase_integral(m.f0 - static_cast<double>(mu) * m.omega1, t);
                    }
                }
                return g * sum;
            },
            [&](const BichromaticDrive& b) {
                if (resonance) {
                    check_bichromatic(*resonance, b);
                }
                const BesselTable ju(b.u());
                const BesselTable jv(b.v());
                cplx sum{0.0, 0.0};
                for (long nu = -jv.cutoff(); nu <= jv.cutoff(); ++nu) {
                    const double jnu = jv(nu);
                    if (jnu == 0.0) {
                        continue;
                    }
                    cplx row{0.0, 0.0};
                    for (long mu = -ju.cutoff(); mu <= ju.cutoff(); ++mu) {
                        const double weight = ju(mu);
                        if (weight == 0.0) {
                            continue;
                        }
                        if (exact && resonance->p * mu + resonance->q * nu == resonance->n) {
                            row += weight * t;
                        } else {
                            const double w = b.f0 - static_cast<double>(mu) * b.omega1 - static_cast<double>(nu) * b.omega2;
                            row += weight * phase_integral(w, t);
                        }
                    }
                    sum += jnu * std::polar(1.0, static_cast<double>(nu) * b.delta) * row;
                }
                return g * std::polar(1.0, -b.v() * std::sin(b.delta)) * sum;
            },
            [&](const FlippedDrive& f) {
                const FlippedPieces pieces = flipped_pieces(f, g);
                const auto [k, s] = split_period(t, f.period);
                const double kd = static_cast<double>(k);
                return pieces.chi_period * geometric_phase_sum(k, pieces.eta_period) +
                       std::polar(1.0, -kd * pieces.eta_period) * flipped_chi_within(f, g, s);
            },
            [&](const FourierDrive& f) {
                const auto betas = fourier_betas(f);
                const MultiBesselSeries series(betas);
                cplx sum{0.0, 0.0};
                for (long nu = series.min_index(); nu <= series.max_index(); ++nu) {
                    const double weight = series(nu);
                    if (weight == 0.0) {
                        continue;
                    }
                    if (exact && nu == resonance->n) {
                        sum += weight * t;
                    } else {
                        sum += weight * phase_integral(f.f0 - static_cast<double>(nu) * f.omega, t);
                    }
                }
                return g * sum;
            },
        },
        profile);
    return out;
}

std::complex<double> bichromatic_gamma(double g, const ResonanceClass& r, double u, double v, double delta) {
    if (!r.resonant) {
        return {0.0, 0.0};
    }
    const cplx z = delta == 0.0 ? cplx(1.0, 0.0) : std::polar(1.0, static_cast<double>(r.p) * delta);
    const double prefactor_phase = static_cast<double>(r.N) * delta - v * std::sin(delta);
    return 2.0 * g * std::polar(1.0, prefactor_phase) * gen_bessel_2d(r, u, v, z);
}

std::complex<double> bichromatic_gamma_resonant_sum(double g, const ResonanceClass& r, double u, double v,
                                                    double delta) {
    if (!r.resonant) {
        return {0.0, 0.0};
    }
    const BesselTable ju(u);
    const BesselTable jv(v);
    cplx sum{0.0, 0.0};
    for (long mu = -ju.cutoff(); mu <= ju.cutoff(); ++mu) {
        const long rest = static_cast<long>(r.n) - static_cast<long>(r.p) * mu;
        if (rest % r.q != 0) {
            continue;
        }
        const long nu = rest / static_cast<long>(r.q);
        sum += ju(mu) * jv(nu) * std::polar(1.0, static_cast<double>(nu) * delta);
    }
    return 2.0 * g * std::polar(1.0, -v * std::sin(delta)) * sum;
}

TransportCoefficient gamma(const LatticeModel& model, const DriveProfile& profile,
                           const std::optional<ResonanceClass>& resonance) {
    validate(profile);
    const double g = model.coupling();
    return std::visit(
        overloaded{
            [&](const StaticDrive& s) {
                if (s.f0 == 0.0) {
                    return TransportCoefficient{cplx(2.0 * g, 0.0), 0.0, true};
                }
                return TransportCoefficient{cplx(0.0, 0.0), two_pi / std::abs(s.f0), false};
            },
            [&](const MonoDrive& m) {
                const ResonanceClass& r = require_resonance(resonance, profile);
                const double period = two_pi / m.omega1;
                if (!r.resonant) {
                    return TransportCoefficient{cplx(0.0, 0.0), period, false};
                }
                check_harmonic(r, m.f0, m.omega1, "mono");
                const double j = bessel_j(static_cast<int>(r.n), m.f1 / m.omega1);
                return TransportCoefficient{cplx(2.0 * g * j, 0.0), period, true};
            },
            [&](const BichromaticDrive& b) {
                const ResonanceClass& r = require_resonance(resonance, profile);
                check_bichromatic(r, b);
                const double period = two_pi * static_cast<double>(r.p) / b.omega1;
                if (!r.resonant) {
                    return TransportCoefficient{cplx(0.0, 0.0), period, false};
                }
                return TransportCoefficient{bichromatic_gamma(g, r, b.u(), b.v(), b.delta), period, true};
            },
            [&](const FlippedDrive& f) {
                bool resonant = false;
                if (resonance) {
                    resonant = resonance->resonant;
                } else {
                    const double cycles = f.mean_field() * f.period / two_pi;
                    resonant = std::abs(cycles - std::round(cycles)) <= 1e-9;
                }
                if (!resonant) {
                    return TransportCoefficient{cplx(0.0, 0.0), f.period, false};
                }
                const FlippedPieces pieces = flipped_pieces(f, g);
                return TransportCoefficient{2.0 * pieces.chi_period / f.period, f.period, true};
            },
            [&](const FourierDrive& f) {
                const ResonanceClass& r = require_resonance(resonance, profile);
                const double period = two_pi / f.omega;
                if (!r.resonant) {
                    return TransportCoefficient{cplx(0.0, 0.0), period, false};
                }
                check_harmonic(r, f.f0, f.omega, "fourier");
                const auto betas = fourier_betas(f);
                const double j = inf_var_bessel(static_cast<int>(r.n), betas);
                return TransportCoefficient{cplx(2.0 * g * j, 0.0), period, true};
            },
        },
        profile);
}

double quasienergy(const TransportCoefficient& gamma, double kappa, double d) {
    return gamma.modulus() * std::cos(kappa * d + gamma.argument());
}

double transport_velocity(const TransportCoefficient& gamma, double kappa, double d) {
    return -gamma.modulus() * std::sin(kappa * d + gamma.argument());
}

GammaFamily bichromatic_family(const LatticeModel& model, const ResonanceClass& resonance, double v) {
    if (!resonance.resonant) {
        throw std::invalid_argument("bichromatic_family: resonance class is not resonant");
    }
    const double g = model.coupling();
    return {[g, resonance, v](double u) { return bichromatic_gamma(g, resonance, u, v, 0.0).real(); }, g};
}

GammaFamily mono_family(const LatticeModel& model, int mu) {
    const double g = model.coupling();
    return {[g, mu](double u) { return 2.0 * g * bessel_j(mu, u); }, g};
}

GammaFamily flipped_family(const LatticeModel& model, double duty, double period, std::int64_t n) {
    if (!(duty > 0.0 && duty < 1.0) || !(period > 0.0)) {
        throw std::invalid_argument("flipped_family: need 0 < a < 1 and T > 0");
    }
    const double g = model.coupling();
    return {[g, duty, period, n](double x) {
                FlippedDrive f;
                f.duty = duty;
                f.period = period;
                f.f1 = x / (duty * period);
                f.f2 = (two_pi * static_cast<double>(n) - x) / ((1.0 - duty) * period);
                const cplx gam = 2.0 * flipped_pieces(f, g).chi_period / period;
                return (gam * std::polar(1.0, 0.5 * x)).real();
            },
            g};
}

std::vector<double> find_localization_zeros(const GammaFamily& family, double lo, double hi, double tol,
                                            int samples) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
        throw std::invalid_argument("find_localization_zeros: need a finite range lo < hi");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("find_localization_zeros: tol must be positive");
    }
    if (samples <= 0) {
        samples = std::max(400, static_cast<int>(std::ceil((hi - lo) / 0.005)));
    }
    const double threshold = 1e-8 * 2.0 * std::abs(family.coupling);
    const auto& s = family.signed_gamma;
    std::vector<double> xs(static_cast<std::size_t>(samples) + 1);
    std::vector<double> values(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = i == xs.size() - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / samples;
        values[i] = s(xs[i]);
    }
    std::vector<double> zeros;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double s_lo = values[i];
        const double s_hi = values[i + 1];
        if (s_hi == 0.0) {
            // A sample exactly on a zero counts when the sign changes across it.
            if (i + 2 < xs.size() && s_lo != 0.0 && values[i + 2] != 0.0 &&
                std::signbit(s_lo) != std::signbit(values[i + 2])) {
                zeros.push_back(xs[i + 1]);
            }
            continue;
        }
        if (s_lo == 0.0 || std::signbit(s_lo) == std::signbit(s_hi)) {
            continue;
        }
        double a = xs[i], b = xs[i + 1], sa = s_lo, sb = s_hi;
        for (int iteration = 0; iteration < 200; ++iteration) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) {
                break;
            }
            const double sm = s(mid);
            if (sm == 0.0) {
                a = b = mid;
                sa = sb = 0.0;
                break;
            }
            if (std::signbit(sm) == std::signbit(sa)) {
                a = mid;
                sa = sm;
            } else {
                b = mid;
                sb = sm;
            }
            if (b - a < tol && std::min(std::abs(sa), std::abs(sb)) < threshold) {
                break;
            }
        }
        zeros.push_back(std::abs(sa) <= std::abs(sb) ? a : b);
    }
    return zeros;
}

} // namespace dynloc
