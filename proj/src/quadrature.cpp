#include "dynloc/errors.hpp"
#include "dynloc/phases.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dynloc {

namespace {

std::vector<double> breakpoints(const DriveProfile& profile, double t) {
    std::vector<double> points{0.0};
    if (const auto* f = std::get_if<FlippedDrive>(&profile)) {
        const double at = f->duty * f->period;
        for (double start = 0.0; start < t; start += f->period) {
            for (double edge : {start + at, start + f->period}) {
                if (edge > 0.0 && edge < t) {
                    points.push_back(edge);
                }
            }
        }
    }
    points.push_back(t);
    return points;
}

} // namespace

QuadratureResult chi_quadrature(const LatticeModel& model, const DriveProfile& profile, double t, double abs_tol) {
    validate(profile);
    if (!std::isfinite(t) || t < 0.0) {
        throw std::invalid_argument("chi_quadrature: t must be finite and non-negative");
    }
    if (!(abs_tol > 0.0)) {
        throw std::invalid_argument("chi_quadrature: abs_tol must be positive");
    }
    const double g = model.coupling();
    QuadratureResult result;
    result.phases.t = t;
    result.phases.eta = eta(profile, t);
    if (t == 0.0) {
        return result;
    }

    const double rate = max_phase_rate(profile);
    const double panel = rate > 0.0 ? 2.0 * std::numbers::pi / (20.0 * rate) : t;
    // Boost stops a panel when its estimate drops below tol * L1; L1 = |g| * width.
    const double rel_tol = std::max(0.5 * abs_tol / (std::abs(g) * t), 1e-15);
    const auto integrand = [&](double tau) { return g * std::polar(1.0, -eta(profile, tau)); };

    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    const auto points = breakpoints(profile, t);
    std::complex<double> total{0.0, 0.0};
    double error = 0.0;
    for (std::size_t segment = 0; segment + 1 < points.size(); ++segment) {
        const double a = points[segment];
        const double b = points[segment + 1];
        const auto count = static_cast<long>(std::max(1.0, std::ceil((b - a) / panel)));
        const double width = (b - a) / static_cast<double>(count);
        for (long i = 0; i < count; ++i) {
            const double lo = a + width * static_cast<double>(i);
            const double hi = i + 1 == count ? b : lo + width;
            double panel_error = 0.0;
            total += gk::integrate(integrand, lo, hi, 15, rel_tol, &panel_error);
            error += panel_error;
        }
    }
    if (!(error <= abs_tol)) {
        throw QuadratureFailure("chi_quadrature: error estimate above tolerance", error);
    }
    result.phases.chi = total;
    result.error_estimate = error;
    return result;
}

} // namespace dynloc
