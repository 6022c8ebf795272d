#include "dynloc/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dynloc {

namespace {

// Highest order needed before J_k(x) is far below the tail threshold: the
// transition region beyond k = x has width ~ x^{1/3}.
int recurrence_start(double ax, int max_order) {
    const int top = std::max(max_order, static_cast<int>(std::ceil(ax))) + 30 +
                    static_cast<int>(std::ceil(24.0 * std::cbrt(ax)));
    return top + (top % 2);
}

void series_sequence(double ax, std::vector<double>& out) {
    const double half = 0.5 * ax;
    const double y = half * half;
    double prefactor = 1.0; // (x/2)^nu / nu!
    for (std::size_t nu = 0; nu < out.size(); ++nu) {
        if (nu > 0) {
            prefactor *= half / static_cast<double>(nu);
        }
        if (prefactor == 0.0) {
            break; // remaining orders underflow
        }
        double sum = 1.0;
        double term = 1.0;
        for (int k = 1; k < 64; ++k) {
            term *= -y / (static_cast<double>(k) * static_cast<double>(nu + k));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        out[nu] = prefactor * sum;
    }
}

// Miller: recur J_{k-1} = (2k/x) J_k - J_{k+1} downward from an arbitrary
// seed, then normalise with J_0 + 2 sum_k J_{2k} = 1.
void miller_sequence(double ax, std::vector<double>& out) {
    const int max_order = static_cast<int>(out.size()) - 1;
    const int top = recurrence_start(ax, max_order);
    constexpr double big = 1e200;
    double next = 0.0; // J_{k+1}
    double current = 1e-30; // J_k
    double norm = 0.0;
    const double two_over_x = 2.0 / ax;
    if (top <= max_order) {
        out[static_cast<std::size_t>(top)] = current;
    }
    for (int k = top; k >= 1; --k) {
        const double lower = static_cast<double>(k) * two_over_x * current - next;
        next = current;
        current = lower;
        const int index = k - 1;
        if (index <= max_order) {
            out[static_cast<std::size_t>(index)] = lower;
        }
        if (index > 0 && index % 2 == 0) {
            norm += 2.0 * lower;
        }
        if (std::abs(current) > big) {
            const double scale = 1.0 / big;
            current *= scale;
            next *= scale;
            norm *= scale;
            for (int j = std::max(index, 0); j <= max_order; ++j) {
                out[static_cast<std::size_t>(j)] *= scale;
            }
        }
    }
    norm += current;
    for (double& value : out) {
        value /= norm;
    }
}

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

} // namespace

std::vector<double> bessel_j_sequence(double x, int max_order) {
    if (!std::isfinite(x)) {
        throw std::domain_error("bessel_j: argument must be finite");
    }
    if (max_order < 0) {
        throw std::invalid_argument("bessel_j_sequence: max_order must be non-negative");
    }
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    const double ax = std::abs(x);
    if (ax == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (ax < 1.0) {
        series_sequence(ax, out);
    } else {
        miller_sequence(ax, out);
    }
    if (x < 0.0) {
        for (std::size_t k = 1; k < out.size(); k += 2) {
            out[k] = -out[k];
        }
    }
    return out;
}

double bessel_j(int nu, double x) {
    const int order = std::abs(nu);
    const double value = bessel_j_sequence(x, order).back();
    return (nu < 0 && (order % 2 == 1)) ? -value : value;
}

BesselTable::BesselTable(double x) : x_(x), negative_(x < 0.0) {
    if (!std::isfinite(x)) {
        throw std::domain_error("BesselTable: argument must be finite");
    }
    const double ax = std::abs(x);
    values_ = bessel_j_sequence(ax, recurrence_start(ax, 0));
    int cutoff = static_cast<int>(values_.size()) - 1;
    while (cutoff > 0 && std::abs(values_[static_cast<std::size_t>(cutoff)]) < bessel_tail_threshold &&
           cutoff > ax) {
        --cutoff;
    }
    cutoff_ = cutoff;
    values_.resize(static_cast<std::size_t>(cutoff_) + 1);
}

double BesselTable::operator()(long k) const noexcept {
    const long order = k < 0 ? -k : k;
    if (order > cutoff_) {
        return 0.0;
    }
    const double value = values_[static_cast<std::size_t>(order)];
    const bool odd = (order % 2) == 1;
    // J_{-k} = (-1)^k J_k and J_k(-x) = (-1)^k J_k(x).
    const bool flip = odd && ((k < 0) != negative_);
    return flip ? -value : value;
}

std::complex<double> gen_bessel_2d(const ResonanceClass& resonance, double u, double v, std::complex<double> z) {
    if (!resonance.resonant) {
        throw std::invalid_argument("gen_bessel_2d: resonance class is not resonant");
    }
    if (std::abs(std::abs(z) - 1.0) > 1e-12) {
        throw std::invalid_argument("gen_bessel_2d: z must have unit modulus");
    }
    const BesselTable ju(u);
    const BesselTable jv(v);
    const long p = static_cast<long>(resonance.p);
    const long q = static_cast<long>(resonance.q);
    const long M = static_cast<long>(resonance.M);
    const long N = static_cast<long>(resonance.N);
    const long ku = ju.cutoff();
    const long kv = jv.cutoff();
    const long k_lo = std::max(ceil_div(M - ku, q), ceil_div(-kv - N, p));
    const long k_hi = std::min(floor_div(M + ku, q), floor_div(kv - N, p));
    const double phase = std::arg(z);
    std::complex<double> sum{0.0, 0.0};
    for (long k = k_lo; k <= k_hi; ++k) {
        const double term = ju(M - q * k) * jv(N + p * k);
        if (term != 0.0) {
            sum += term * (phase == 0.0 ? std::complex<double>(1.0, 0.0)
                                        : std::polar(1.0, static_cast<double>(k) * phase));
        }
    }
    return sum;
}

MultiBesselSeries::MultiBesselSeries(std::span<const double> betas) : offset_(0), values_{1.0} {
    for (std::size_t index = 0; index < betas.size(); ++index) {
        const double beta = betas[index];
        if (!std::isfinite(beta)) {
            throw std::domain_error("MultiBesselSeries: beta must be finite");
        }
        if (beta == 0.0) {
            continue;
        }
        const long m = static_cast<long>(index) + 1;
        const BesselTable table(beta);
        const long k = table.cutoff();
        std::vector<double> next(values_.size() + static_cast<std::size_t>(2 * m * k), 0.0);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] == 0.0) {
                continue;
            }
            for (long mu = -k; mu <= k; ++mu) {
                next[i + static_cast<std::size_t>(m * (mu + k))] += values_[i] * table(mu);
            }
        }
        offset_ -= m * k;
        values_ = std::move(next);
        // Drop exactly-zero ends left by sparse high harmonics.
        std::size_t lead = 0;
        while (lead + 1 < values_.size() && values_[lead] == 0.0) {
            ++lead;
        }
        std::size_t end = values_.size();
        while (end > lead + 1 && values_[end - 1] == 0.0) {
            --end;
        }
        values_ = std::vector<double>(values_.begin() + static_cast<long>(lead), values_.begin() + static_cast<long>(end));
        offset_ += static_cast<long>(lead);
    }
}

double MultiBesselSeries::operator()(long nu) const noexcept {
    if (nu < min_index() || nu > max_index()) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(nu - offset_)];
}

double inf_var_bessel(int nu, std::span<const double> betas) { return MultiBesselSeries(betas)(nu); }

std::vector<double> asymptotic_zero_estimates(int n, double v, int j_max) {
    if (!std::isfinite(v) || v == 0.0) {
        throw std::invalid_argument("asymptotic_zero_estimates: v must be finite and non-zero");
    }
    if (n < 0) {
        throw std::invalid_argument("asymptotic_zero_estimates: n must be non-negative");
    }
    if (j_max < 1) {
        throw std::invalid_argument("asymptotic_zero_estimates: j_max must be positive");
    }
    const double discriminant = 0.5 - static_cast<double>(n) / (4.0 * v);
    if (!(discriminant > 0.0)) {
        throw std::domain_error("asymptotic_zero_estimates: 1/2 - n/(4v) must be positive on either branch");
    }
    const double scale = std::sqrt(discriminant);
    const bool even = n % 2 == 0;
    std::vector<double> zeros;
    zeros.reserve(static_cast<std::size_t>(j_max));
    const double pi = std::numbers::pi;
    for (int j = 1; j <= j_max; ++j) {
        double rhs = 0.0;
        if (n < 2.0 * std::abs(v)) {
            // u*s = jπ (n odd) or (2j+1)π/2 (n even); the u = 0 root is skipped.
            rhs = even ? (2.0 * j - 1.0) * pi / 2.0 : j * pi;
        } else {
            // u*s = (n + 2j)π/2: the positive right-hand sides have n's parity.
            const int m = even ? 2 * j : 2 * j - 1;
            rhs = m * pi / 2.0;
        }
        zeros.push_back(rhs / scale);
    }
    return zeros;
}

} // namespace dynloc
