#include "dynloc/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dynloc {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

void require_positive(double value, const char* name) {
    require_finite(value, name);
    if (value <= 0.0) {
        throw std::invalid_argument(std::string(name) + " must be positive");
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Returns (g, x, y) with a*x + b*y = g = gcd(a, b), for a, b >= 0.
struct EuclidResult {
    std::int64_t gcd;
    std::int64_t x;
    std::int64_t y;
};

EuclidResult extended_euclid(std::int64_t a, std::int64_t b) {
    std::int64_t old_r = a, r = b;
    std::int64_t old_s = 1, s = 0;
    std::int64_t old_t = 0, t = 1;
    while (r != 0) {
        const std::int64_t quotient = old_r / r;
        old_r = std::exchange(r, old_r - quotient * r);
        old_s = std::exchange(s, old_s - quotient * s);
        old_t = std::exchange(t, old_t - quotient * t);
    }
    return {old_r, old_s, old_t};
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace

LatticeModel LatticeModel::from_coupling(double g, double period) {
    require_finite(g, "coupling g");
    if (g == 0.0) {
        throw std::invalid_argument("coupling g must be non-zero");
    }
    require_positive(period, "lattice period d");
    return LatticeModel(g, period);
}

LatticeModel LatticeModel::from_band_width(double band_width, double period) {
    require_positive(band_width, "band width G");
    return from_coupling(-band_width / 4.0, period);
}

double LatticeModel::band_width() const noexcept { return 4.0 * std::abs(g_); }

void validate(const DriveProfile& profile) {
    std::visit(overloaded{
                   [](const StaticDrive& s) { require_finite(s.f0, "f0"); },
                   [](const MonoDrive& m) {
                       require_finite(m.f0, "f0");
                       require_finite(m.f1, "f1");
                       require_positive(m.omega1, "omega1");
                   },
                   [](const BichromaticDrive& b) {
                       require_finite(b.f0, "f0");
                       require_finite(b.f1, "f1");
                       require_finite(b.f2, "f2");
                       require_finite(b.delta, "delta");
                       require_positive(b.omega1, "omega1");
                       require_positive(b.omega2, "omega2");
                   },
                   [](const FlippedDrive& f) {
                       require_finite(f.f1, "f1");
                       require_finite(f.f2, "f2");
                       require_positive(f.period, "period T");
                       require_finite(f.duty, "duty a");
                       if (f.duty <= 0.0 || f.duty >= 1.0) {
                           throw std::invalid_argument("duty a must lie in (0, 1)");
                       }
                   },
                   [](const FourierDrive& f) {
                       require_finite(f.f0, "f0");
                       require_positive(f.omega, "omega");
                       for (double fm : f.harmonics) {
                           require_finite(fm, "harmonic amplitude");
                       }
                   },
               },
               profile);
}

double field(const DriveProfile& profile, double t) {
    return std::visit(
        overloaded{
            [](const StaticDrive& s) { return s.f0; },
            [t](const MonoDrive& m) { return m.f0 - m.f1 * std::cos(m.omega1 * t); },
            [t](const BichromaticDrive& b) {
                return b.f0 - b.f1 * std::cos(b.omega1 * t) - b.f2 * std::cos(b.omega2 * t + b.delta);
            },
            [t](const FlippedDrive& f) {
                const double s = t - f.period * std::floor(t / f.period);
                return s < f.duty * f.period ? f.f1 : f.f2;
            },
            [t](const FourierDrive& f) {
                double value = f.f0;
                for (std::size_t m = 1; m <= f.harmonics.size(); ++m) {
                    value -= f.harmonics[m - 1] * std::cos(static_cast<double>(m) * f.omega * t);
                }
                return value;
            },
        },
        profile);
}

std::optional<double> drive_period(const DriveProfile& profile) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return std::visit(overloaded{
                          [](const StaticDrive&) -> std::optional<double> { return std::nullopt; },
                          [](const MonoDrive& m) -> std::optional<double> { return two_pi / m.omega1; },
                          // Without declared commensurability the common period is
                          // unknown; gamma() derives it from the resonance class.
                          [](const BichromaticDrive&) -> std::optional<double> { return std::nullopt; },
                          [](const FlippedDrive& f) -> std::optional<double> { return f.period; },
                          [](const FourierDrive& f) -> std::optional<double> { return two_pi / f.omega; },
                      },
                      profile);
}

double max_phase_rate(const DriveProfile& profile) {
    return std::visit(overloaded{
                          [](const StaticDrive& s) { return std::abs(s.f0); },
                          [](const MonoDrive& m) { return std::abs(m.f0) + std::abs(m.f1) + m.omega1; },
                          [](const BichromaticDrive& b) {
                              return std::abs(b.f0) + std::abs(b.f1) + std::abs(b.f2) + std::max(b.omega1, b.omega2);
                          },
                          [](const FlippedDrive& f) { return std::max(std::abs(f.f1), std::abs(f.f2)); },
                          [](const FourierDrive& f) {
                              double rate = std::abs(f.f0);
                              for (double fm : f.harmonics) {
                                  rate += std::abs(fm);
                              }
                              return rate + static_cast<double>(f.harmonics.size()) * f.omega;
                          },
                      },
                      profile);
}

std::string_view variant_name(const DriveProfile& profile) {
    static constexpr std::string_view names[] = {"static", "mono", "bichromatic", "flipped", "fourier"};
    return names[profile.index()];
}

FrequencyRatio FrequencyRatio::rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) {
        throw std::invalid_argument("frequency ratio with zero denominator");
    }
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    FrequencyRatio ratio;
    ratio.rational_ = true;
    ratio.num_ = numerator / g;
    ratio.den_ = denominator / g;
    return ratio;
}

FrequencyRatio FrequencyRatio::parse(std::string_view text) {
    if (text == "incommensurable" || text == "irrational") {
        return incommensurable();
    }
    auto parse_int = [&](std::string_view part) {
        std::size_t used = 0;
        const std::string owned(part);
        std::int64_t value = 0;
        try {
            value = std::stoll(owned, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (owned.empty() || used != owned.size()) {
            throw std::invalid_argument("cannot parse frequency ratio '" + std::string(text) + "'");
        }
        return value;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return rational(parse_int(text), 1);
    }
    return rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::int64_t FrequencyRatio::numerator() const {
    if (!rational_) {
        throw std::logic_error("incommensurable ratio has no numerator");
    }
    return num_;
}

std::int64_t FrequencyRatio::denominator() const {
    if (!rational_) {
        throw std::logic_error("incommensurable ratio has no denominator");
    }
    return den_;
}

std::string FrequencyRatio::to_string() const {
    if (!rational_) {
        return "incommensurable";
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::pair<std::int64_t, std::int64_t> ResonanceClass::member(std::int64_t k) const {
    return {M - q * k, N + p * k};
}

std::vector<std::pair<std::int64_t, std::int64_t>> ResonanceClass::members(std::int64_t k_min,
                                                                            std::int64_t k_max) const {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    if (!resonant || k_max < k_min) {
        return out;
    }
    out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (std::int64_t k = k_min; k <= k_max; ++k) {
        out.push_back(member(k));
    }
    return out;
}

ResonanceClass solve_diophantine(std::int64_t p, std::int64_t q, std::int64_t n) {
    if (p < 1 || q < 1) {
        throw std::invalid_argument("solve_diophantine requires p, q >= 1");
    }
    const auto [g, x, y] = extended_euclid(p, q);
    ResonanceClass result;
    if (n % g != 0) {
        result.p = p;
        result.q = q;
        result.n = n;
        result.resonant = false;
        return result;
    }
    result.p = p / g;
    result.q = q / g;
    result.n = n / g;
    result.resonant = true;

    // x*p' + y*q' = 1, so M0 = n'*x is a particular solution; slide along the
    // family M - q'k to the smallest |M|.
    const std::int64_t qr = result.q;
    const std::int64_t m0 = floor_mod(floor_mod(x, qr) * floor_mod(result.n, qr), qr);
    std::int64_t m = m0;
    if (m0 != 0 && std::abs(m0 - qr) < m0) {
        m = m0 - qr;
    }
    result.M = m;
    result.N = (result.n - result.p * m) / result.q;
    (void)y;
    return result;
}

ResonanceClass harmonic_resonance(std::int64_t n) {
    ResonanceClass r;
    r.p = 1;
    r.q = 1;
    r.n = n;
    r.M = n;
    r.N = 0;
    r.resonant = true;
    return r;
}

ResonanceClass non_resonant() { return ResonanceClass{}; }

std::string_view to_string(TransportClass verdict) {
    switch (verdict) {
    case TransportClass::Localized:
        return "localization";
    case TransportClass::LocalizedTransportPossible:
        return "localization (transport possible)";
    case TransportClass::Transport:
        return "transport (localization possible)";
    }
    return "unknown";
}

TransportVerdict classify_transport(const FrequencyRatio& ratio_21, const FrequencyRatio& ratio_b1) {
    TransportVerdict out;
    if (!ratio_21.is_rational()) {
        // A single (mu, nu) can satisfy the resonance only for a tuned,
        // irrational omega_B/omega1.
        out.verdict = ratio_b1.is_rational() ? TransportClass::Localized : TransportClass::LocalizedTransportPossible;
        return out;
    }
    if (ratio_21.numerator() <= 0) {
        throw std::invalid_argument("omega2/omega1 must be positive");
    }
    if (!ratio_b1.is_rational()) {
        out.verdict = TransportClass::Localized;
        return out;
    }
    const std::int64_t q = ratio_21.numerator();
    const std::int64_t p = ratio_21.denominator();
    const std::int64_t scaled = p * ratio_b1.numerator();
    if (scaled % ratio_b1.denominator() != 0) {
        out.verdict = TransportClass::Localized;
        return out;
    }
    out.resonance = solve_diophantine(p, q, scaled / ratio_b1.denominator());
    out.verdict = out.resonance->resonant ? TransportClass::Transport : TransportClass::Localized;
    return out;
}

} // namespace dynloc
