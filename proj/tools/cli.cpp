#include "cli.hpp"

#include "dynloc/continuum.hpp"
#include "dynloc/errors.hpp"
#include "dynloc/model.hpp"
#include "dynloc/phases.hpp"
#include "dynloc/profile_json.hpp"
#include "dynloc/specialfn.hpp"
#include "dynloc/wavepacket.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynloc::cli {

namespace {

using nlohmann::json;
constexpr double two_pi = 2.0 * std::numbers::pi;

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

std::string num(double x) { return fmt::format("{:.17g}", x); }

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    double at(int i) const {
        return count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + what + " '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(value)) {
        throw ConfigError("cannot parse " + what + " '" + text + "'");
    }
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) {
        parts.push_back(part);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

Axis parse_axis(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw ConfigError("grid axis must look like lo:hi:count, got '" + text + "'");
    }
    Axis axis{parse_double(parts[0], "grid bound"), parse_double(parts[1], "grid bound"), 0};
    try {
        std::size_t used = 0;
        axis.count = std::stoi(parts[2], &used);
        if (used != parts[2].size()) {
            throw ConfigError("bad count");
        }
    } catch (const std::exception&) {
        throw ConfigError("grid count must be an integer, got '" + parts[2] + "'");
    }
    if (axis.count < 1) {
        throw ConfigError("grid count must be at least 1");
    }
    if (axis.count > 1 && !(axis.hi > axis.lo)) {
        throw ConfigError("grid range must satisfy lo < hi");
    }
    return axis;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw ConfigError("range must look like lo:hi, got '" + text + "'");
    }
    const double lo = parse_double(parts[0], "range bound");
    const double hi = parse_double(parts[1], "range bound");
    if (!(hi > lo)) {
        throw ConfigError("range must satisfy lo < hi");
    }
    return {lo, hi};
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw ConfigError(std::string(name) + " must be finite");
    }
}

struct LoadedConfig {
    LatticeModel model = LatticeModel::from_coupling(1.0);
    DriveProfile profile;
    std::optional<ResonanceClass> resonance;
    json echo;
};

std::int64_t integer_field(const json& doc, const char* key) {
    if (!doc.at(key).is_number_integer()) {
        throw ConfigError(std::string("resonance field '") + key + "' must be an integer");
    }
    return doc.at(key).get<std::int64_t>();
}

ResonanceClass resonance_from_json(const json& doc, const DriveProfile& profile) {
    if (!doc.is_object()) {
        throw ConfigError("\"resonance\" must be an object");
    }
    for (const auto& item : doc.items()) {
        if (item.key() != "p" && item.key() != "q" && item.key() != "n" && item.key() != "resonant") {
            throw ConfigError("unknown key '" + item.key() + "' in resonance");
        }
    }
    if (doc.contains("resonant") && doc.at("resonant") == false) {
        return non_resonant();
    }
    if (!doc.contains("n")) {
        throw ConfigError("resonance needs an integer \"n\"");
    }
    const std::int64_t n = integer_field(doc, "n");
    if (std::holds_alternative<BichromaticDrive>(profile)) {
        if (!doc.contains("p") || !doc.contains("q")) {
            throw ConfigError("bichromatic resonance needs \"p\", \"q\" and \"n\"");
        }
        return solve_diophantine(integer_field(doc, "p"), integer_field(doc, "q"), n);
    }
    if (doc.contains("p") || doc.contains("q")) {
        throw ConfigError("\"p\"/\"q\" only apply to bichromatic profiles");
    }
    return harmonic_resonance(n);
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open profile '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("profile '" + path + "' is not valid JSON: " + e.what());
    }
    LoadedConfig config;
    if (doc.is_object() && doc.contains("profile")) {
        for (const auto& item : doc.items()) {
            if (item.key() != "profile" && item.key() != "coupling" && item.key() != "resonance") {
                throw ConfigError("unknown key '" + item.key() + "' in config document");
            }
        }
        if (doc.contains("coupling")) {
            if (!doc.at("coupling").is_number()) {
                throw ConfigError("\"coupling\" must be a number");
            }
            config.model = LatticeModel::from_coupling(doc.at("coupling").get<double>());
        }
        config.profile = profile_from_json(doc.at("profile"));
        if (doc.contains("resonance")) {
            config.resonance = resonance_from_json(doc.at("resonance"), config.profile);
        }
    } else {
        config.profile = profile_from_json(doc);
    }
    config.echo = {{"coupling", config.model.coupling()}, {"profile", to_json(config.profile)}};
    if (config.resonance) {
        config.echo["resonance"] = to_json(*config.resonance);
    }
    return config;
}

// Writes to --out (or the output stream) only after the command succeeded.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw ConfigError("cannot write output file '" + path + "'");
    }
    file << text;
    if (!file) {
        throw ConfigError("failed writing output file '" + path + "'");
    }
}

std::string metadata(const std::string& command, const json& config) {
    return "# dynloc " + command + " " + config.dump() + "\n";
}

// ---------------------------------------------------------------------------

struct ScanOptions {
    std::int64_t p = 1, q = 2, n = 1;
    double g = 1.0;
    double omega1 = 1.0;
    double delta = 0.0;
    std::string grid;
    std::optional<double> v;
};

BichromaticDrive resonant_bichromatic(const ResonanceClass& r, double omega1, double u, double v, double delta) {
    BichromaticDrive b;
    b.omega1 = omega1;
    b.omega2 = omega1 * static_cast<double>(r.q) / static_cast<double>(r.p);
    b.f0 = omega1 * static_cast<double>(r.n) / static_cast<double>(r.p);
    b.f1 = u * b.omega1;
    b.f2 = v * b.omega2;
    b.delta = delta;
    return b;
}

ResonanceClass require_resonant(std::int64_t p, std::int64_t q, std::int64_t n) {
    if (p < 1 || q < 1) {
        throw ConfigError("p and q must be positive integers");
    }
    const ResonanceClass r = solve_diophantine(p, q, n);
    if (!r.resonant) {
        throw ConfigError(fmt::format("classification: {} (no integer solution of {} mu + {} nu = {}; gamma = 0)",
                                      to_string(TransportClass::Localized), p, q, n));
    }
    return r;
}

std::string cmd_gamma_scan(const ScanOptions& o) {
    require_finite(o.g, "--g");
    require_finite(o.delta, "--delta");
    if (!(o.omega1 > 0.0) || !std::isfinite(o.omega1)) {
        throw ConfigError("--omega1 must be positive");
    }
    const ResonanceClass r = require_resonant(o.p, o.q, o.n);
    const auto axes = split(o.grid, ',');
    if (axes.empty() || axes.size() > 2) {
        throw ConfigError("--grid must be u0:u1:nu or u0:u1:nu,v0:v1:nv");
    }
    const Axis u_axis = parse_axis(axes[0]);
    Axis v_axis;
    if (axes.size() == 2) {
        if (o.v) {
            throw ConfigError("--v conflicts with a v axis in --grid");
        }
        v_axis = parse_axis(axes[1]);
    } else {
        if (!o.v) {
            throw ConfigError("a u-only --grid needs a fixed --v");
        }
        require_finite(*o.v, "--v");
        v_axis = Axis{*o.v, *o.v, 1};
    }
    const LatticeModel model = LatticeModel::from_coupling(o.g);
    json echo{{"p", r.p},
              {"q", r.q},
              {"n", r.n},
              {"M", r.M},
              {"N", r.N},
              {"g", o.g},
              {"omega1", o.omega1},
              {"delta", o.delta},
              {"grid", o.grid}};
    if (o.v) {
        echo["v"] = *o.v;
    }
    std::string text = metadata("gamma-scan", echo);
    text += "u,v,re_gamma,im_gamma,abs_gamma\n";
    for (int j = 0; j < v_axis.count; ++j) {
        const double v = v_axis.at(j);
        for (int i = 0; i < u_axis.count; ++i) {
            const double u = u_axis.at(i);
            const auto gam = gamma(model, resonant_bichromatic(r, o.omega1, u, v, o.delta), r);
            text += num(u) + "," + num(v) + "," + num(gam.gamma.real()) + "," + num(gam.gamma.imag()) + "," +
                    num(gam.modulus()) + "\n";
        }
    }
    return text;
}

// ---------------------------------------------------------------------------

struct PropagateOptions {
    std::string profile;
    std::int64_t p = 1, q = 2, n = 1;
    double g = 1.0;
    double omega1 = 1.0;
    double delta = 0.0;
    double u = 0.0;
    double v = 0.0;
    double sigma = 10.0;
    double kappa0 = 0.0;
    long center = 0;
    double periods = 10.0;
    int samples_per_period = 8;
    std::optional<double> t_max;
    std::string snapshots;
};

double propagation_period(const LoadedConfig& c) {
    if (const auto* b = std::get_if<BichromaticDrive>(&c.profile)) {
        if (!c.resonance) {
            throw ConfigError("bichromatic propagation needs resonance data (or --t-max)");
        }
        return two_pi * static_cast<double>(c.resonance->p) / b->omega1;
    }
    if (const auto* s = std::get_if<StaticDrive>(&c.profile)) {
        if (s->f0 == 0.0) {
            throw ConfigError("a field-free lattice has no period; use --t-max");
        }
        return two_pi / std::abs(s->f0);
    }
    return *drive_period(c.profile);
}

std::string cmd_propagate(const PropagateOptions& o, std::string& snapshot_text) {
    LoadedConfig c;
    if (!o.profile.empty()) {
        c = load_config(o.profile);
    } else {
        require_finite(o.u, "--u");
        require_finite(o.v, "--v");
        require_finite(o.g, "--g");
        require_finite(o.delta, "--delta");
        if (!(o.omega1 > 0.0) || !std::isfinite(o.omega1)) {
            throw ConfigError("--omega1 must be positive");
        }
        const ResonanceClass r = require_resonant(o.p, o.q, o.n);
        c.model = LatticeModel::from_coupling(o.g);
        c.profile = resonant_bichromatic(r, o.omega1, o.u, o.v, o.delta);
        c.resonance = r;
        c.echo = {{"coupling", o.g}, {"profile", to_json(c.profile)}, {"resonance", to_json(r)}};
    }
    if (!(o.sigma > 0.0) || !std::isfinite(o.sigma)) {
        throw ConfigError("--sigma must be positive");
    }
    require_finite(o.kappa0, "--kappa0");
    if (o.samples_per_period < 1) {
        throw ConfigError("--samples-per-period must be positive");
    }
    std::vector<double> times;
    if (o.t_max) {
        if (!(*o.t_max >= 0.0) || !std::isfinite(*o.t_max)) {
            throw ConfigError("--t-max must be non-negative");
        }
        const int count = static_cast<int>(std::ceil(o.periods)) * o.samples_per_period;
        for (int i = 0; i <= count; ++i) {
            times.push_back(*o.t_max * static_cast<double>(i) / static_cast<double>(count));
        }
    } else {
        if (!(o.periods > 0.0) || !std::isfinite(o.periods)) {
            throw ConfigError("--periods must be positive");
        }
        const double period = propagation_period(c);
        const auto count = static_cast<long>(std::llround(o.periods * o.samples_per_period));
        for (long i = 0; i <= count; ++i) {
            times.push_back(period * static_cast<double>(i) / static_cast<double>(o.samples_per_period));
        }
    }

    json echo = c.echo;
    echo["sigma"] = o.sigma;
    echo["kappa0"] = o.kappa0;
    echo["center"] = o.center;
    echo["periods"] = o.periods;
    echo["samples_per_period"] = o.samples_per_period;
    if (o.t_max) {
        echo["t_max"] = *o.t_max;
    }
    const WavepacketState initial = gaussian_state(o.sigma, o.kappa0, o.center);
    const InitialMoments moments = initial_moments(initial);
    std::string text = metadata("propagate", echo);
    text += "t,mean_n,var_n,norm,closed_mean_n,closed_var_n\n";
    if (!o.snapshots.empty()) {
        snapshot_text = metadata("propagate", echo) + "t,l,abs2\n";
    }
    for (double t : times) {
        const PhasePair phases = chi(c.model, c.profile, t, c.resonance);
        const WavepacketState state = apply_propagator(initial, phases);
        text += num(t) + "," + num(state.mean()) + "," + num(state.variance()) + "," + num(state.norm()) + "," +
                num(position_expectation(moments, phases)) + "," + num(width_variance(moments, phases)) + "\n";
        if (!o.snapshots.empty()) {
            for (long l = state.first_site(); l <= state.last_site(); ++l) {
                snapshot_text += num(t) + "," + std::to_string(l) + "," + num(std::norm(state.at(l))) + "\n";
            }
        }
    }
    return text;
}

// ---------------------------------------------------------------------------

struct ZerosOptions {
    std::string family = "bichromatic";
    std::int64_t p = 1, q = 2, n = 1;
    double g = 1.0;
    double v = 1.0;
    double duty = 0.5;
    double period = 1.0;
    std::string range;
    double tol = 1e-8;
};

std::string cmd_zeros(const ZerosOptions& o) {
    require_finite(o.g, "--g");
    const auto [lo, hi] = parse_range(o.range);
    if (!(o.tol > 0.0)) {
        throw ConfigError("--tol must be positive");
    }
    const LatticeModel model = LatticeModel::from_coupling(o.g);
    json echo{{"family", o.family}, {"g", o.g}, {"range", o.range}, {"tol", o.tol}, {"n", o.n}};
    GammaFamily family;
    std::vector<double> estimates;
    if (o.family == "bichromatic") {
        require_finite(o.v, "--v");
        const ResonanceClass r = require_resonant(o.p, o.q, o.n);
        family = bichromatic_family(model, r, o.v);
        echo["p"] = r.p;
        echo["q"] = r.q;
        echo["v"] = o.v;
        if (r.p == 1 && r.q == 2 && r.n >= 0 && o.v != 0.0 && 0.5 - static_cast<double>(r.n) / (4.0 * o.v) > 0.0) {
            // zeros are symmetric under u -> -u
            for (double e : asymptotic_zero_estimates(static_cast<int>(r.n), o.v, 64)) {
                estimates.push_back(e);
                estimates.push_back(-e);
            }
        }
    } else if (o.family == "mono") {
        if (o.n < std::numeric_limits<int>::min() || o.n > std::numeric_limits<int>::max()) {
            throw ConfigError("--n out of range");
        }
        family = mono_family(model, static_cast<int>(o.n));
    } else if (o.family == "flipped") {
        if (!(o.duty > 0.0 && o.duty < 1.0) || !(o.period > 0.0)) {
            throw ConfigError("flipped family needs 0 < --a < 1 and --T > 0");
        }
        family = flipped_family(model, o.duty, o.period, o.n);
        echo["a"] = o.duty;
        echo["T"] = o.period;
        // gamma vanishes at a f1 T = 2 pi mu
        for (long mu = static_cast<long>(std::floor(lo / two_pi)) - 1; mu <= static_cast<long>(std::ceil(hi / two_pi)) + 1;
             ++mu) {
            if (mu != 0) {
                estimates.push_back(two_pi * static_cast<double>(mu));
            }
        }
    } else {
        throw ConfigError("--family must be bichromatic, mono or flipped");
    }
    const auto zeros = find_localization_zeros(family, lo, hi, o.tol);
    std::string text = metadata("zeros", echo);
    text += "j,numeric,estimate\n";
    for (std::size_t j = 0; j < zeros.size(); ++j) {
        std::string estimate;
        double best = std::numeric_limits<double>::infinity();
        for (double e : estimates) {
            if (std::abs(e - zeros[j]) < std::abs(best - zeros[j])) {
                best = e;
            }
        }
        if (std::isfinite(best)) {
            estimate = num(best);
        }
        text += std::to_string(j + 1) + "," + num(zeros[j]) + "," + estimate + "\n";
    }
    return text;
}

// ---------------------------------------------------------------------------

std::string cmd_classify(const std::string& ratio21, const std::string& ratiob1) {
    FrequencyRatio r21 = FrequencyRatio::incommensurable();
    FrequencyRatio rb1 = FrequencyRatio::incommensurable();
    try {
        r21 = FrequencyRatio::parse(ratio21);
        rb1 = FrequencyRatio::parse(ratiob1);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const TransportVerdict verdict = classify_transport(r21, rb1);
    json doc{{"omega2_over_omega1", r21.to_string()},
             {"omegaB_over_omega1", rb1.to_string()},
             {"verdict", std::string(to_string(verdict.verdict))}};
    if (verdict.resonance) {
        doc["resonance"] = to_json(*verdict.resonance);
    }
    return "verdict: " + std::string(to_string(verdict.verdict)) + "\n" + doc.dump() + "\n";
}

// ---------------------------------------------------------------------------

struct ContinuumOptions {
    continuum::ShuttleConfig shuttle;
    std::string gauge = "velocity";
    bool no_project = false;
};

std::string cmd_continuum(ContinuumOptions o, std::ostream& err) {
    auto& s = o.shuttle;
    if (o.no_project) {
        s.project = false;
    }
    if (o.gauge == "velocity") {
        s.gauge = continuum::Gauge::Velocity;
    } else if (o.gauge == "length") {
        s.gauge = continuum::Gauge::Length;
    } else {
        throw ConfigError("--gauge must be velocity or length");
    }
    const continuum::ShuttleResult result = continuum::run_shuttle(s);
    json echo{{"v0", s.v0},
              {"force", s.force},
              {"reference_force", s.reference_force},
              {"a", s.duty},
              {"period_in_bloch", s.period_in_bloch},
              {"bloch_periods", s.bloch_periods},
              {"s", s.s},
              {"start_site", s.start_site},
              {"cells", s.periods},
              {"points_per_cell", s.points_per_period},
              {"steps_per_bloch", s.steps_per_bloch},
              {"samples_per_period", s.samples_per_period},
              {"project", s.project},
              {"gauge", o.gauge}};
    std::string text = metadata("continuum", echo);
    text += "t,mean_x,var_x,norm,band_mean_x,band_var_x,band_weight\n";
    for (const auto& sample : result.samples) {
        text += num(sample.t) + "," + num(sample.full.mean_x) + "," + num(sample.full.var_x) + "," +
                num(sample.full.norm) + "," + num(sample.band.mean_x) + "," + num(sample.band.var_x) + "," +
                num(sample.band.norm) + "\n";
    }
    err << fmt::format("band width {:.6g}, T_B {:.6g}, drift {:.6g} d/T_B (tight binding {:.6g}), width growth "
                       "{:.3g} (full field {:.3g}), interband fraction {:.3g}, max norm error {:.3g}\n",
                       result.band_width, result.bloch_period, result.drift, result.predicted_drift,
                       result.width_growth, result.full_width_growth, result.interband_fraction, result.norm_error);
    return text;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transport and dynamic localization in driven tight-binding lattices"};
    app.require_subcommand(1);
    std::string out_path = "-";

    ScanOptions scan;
    auto* scan_cmd = app.add_subcommand("gamma-scan", "tabulate gamma over a (u, v) grid for a resonant (p, q, n)");
    scan_cmd->add_option("--p", scan.p, "omega2/omega1 = q/p");
    scan_cmd->add_option("--q", scan.q);
    scan_cmd->add_option("--n", scan.n, "n = p omega_B / omega1");
    scan_cmd->add_option("--g", scan.g, "coupling");
    scan_cmd->add_option("--omega1", scan.omega1);
    scan_cmd->add_option("--delta", scan.delta, "phase of the second frequency");
    scan_cmd->add_option("--grid", scan.grid, "u0:u1:nu[,v0:v1:nv]")->required();
    scan_cmd->add_option("--v", scan.v, "fixed v for a u-only grid");
    scan_cmd->add_option("--out", out_path);

    PropagateOptions prop;
    auto* prop_cmd = app.add_subcommand("propagate", "evolve a Gaussian packet and sample <N>, variance and norm");
    prop_cmd->add_option("--profile", prop.profile, "JSON profile or config document");
    prop_cmd->add_option("--p", prop.p);
    prop_cmd->add_option("--q", prop.q);
    prop_cmd->add_option("--n", prop.n);
    prop_cmd->add_option("--g", prop.g);
    prop_cmd->add_option("--omega1", prop.omega1);
    prop_cmd->add_option("--delta", prop.delta);
    prop_cmd->add_option("--u", prop.u);
    prop_cmd->add_option("--v", prop.v);
    prop_cmd->add_option("--sigma", prop.sigma);
    prop_cmd->add_option("--kappa0", prop.kappa0);
    prop_cmd->add_option("--center", prop.center);
    prop_cmd->add_option("--periods", prop.periods, "number of drive periods");
    prop_cmd->add_option("--samples-per-period", prop.samples_per_period);
    prop_cmd->add_option("--t-max", prop.t_max, "sample [0, t_max] instead of drive periods");
    prop_cmd->add_option("--snapshots", prop.snapshots, "CSV of |c_l|^2 per sample time");
    prop_cmd->add_option("--out", out_path);

    ZerosOptions zeros;
    auto* zeros_cmd = app.add_subcommand("zeros", "localization zeros of gamma along a drive family");
    zeros_cmd->add_option("--family", zeros.family, "bichromatic | mono | flipped");
    zeros_cmd->add_option("--p", zeros.p);
    zeros_cmd->add_option("--q", zeros.q);
    zeros_cmd->add_option("--n", zeros.n);
    zeros_cmd->add_option("--g", zeros.g);
    zeros_cmd->add_option("--v", zeros.v);
    zeros_cmd->add_option("--a", zeros.duty, "flipped duty fraction");
    zeros_cmd->add_option("--T", zeros.period, "flipped period");
    zeros_cmd->add_option("--range", zeros.range, "lo:hi of the scan variable")->required();
    zeros_cmd->add_option("--tol", zeros.tol);
    zeros_cmd->add_option("--out", out_path);

    std::string ratio21, ratiob1;
    auto* classify_cmd = app.add_subcommand("classify", "transport class of a bichromatic drive");
    classify_cmd->add_option("--ratio21", ratio21, "omega2/omega1: a/b or incommensurable")->required();
    classify_cmd->add_option("--ratiob1", ratiob1, "omega_B/omega1: a/b or incommensurable")->required();
    classify_cmd->add_option("--out", out_path);

    ContinuumOptions cont;
    auto* cont_cmd = app.add_subcommand("continuum", "split-step propagation in a cos lattice with a flipped force");
    cont_cmd->add_option("--v0", cont.shuttle.v0);
    cont_cmd->add_option("--force", cont.shuttle.force, "|F|; the field starts at +F");
    cont_cmd->add_option("--reference-force", cont.shuttle.reference_force, "sets T_B when --force is 0");
    cont_cmd->add_option("--a", cont.shuttle.duty);
    cont_cmd->add_option("--period-bloch", cont.shuttle.period_in_bloch, "T / T_B");
    cont_cmd->add_option("--bloch-periods", cont.shuttle.bloch_periods, "duration in T_B");
    cont_cmd->add_option("--s", cont.shuttle.s, "initial packet width");
    cont_cmd->add_option("--start-site", cont.shuttle.start_site, "initial centre in lattice periods");
    cont_cmd->add_option("--cells", cont.shuttle.periods, "lattice periods in the domain");
    cont_cmd->add_option("--points-per-cell", cont.shuttle.points_per_period);
    cont_cmd->add_option("--steps-per-bloch", cont.shuttle.steps_per_bloch);
    cont_cmd->add_option("--samples-per-period", cont.shuttle.samples_per_period);
    cont_cmd->add_option("--gauge", cont.gauge, "velocity | length");
    cont_cmd->add_flag("--no-project", cont.no_project, "keep higher-band components of the initial packet");
    cont_cmd->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid_config;
    }

    try {
        std::string text;
        if (app.got_subcommand(scan_cmd)) {
            text = cmd_gamma_scan(scan);
        } else if (app.got_subcommand(prop_cmd)) {
            std::string snapshot_text;
            text = cmd_propagate(prop, snapshot_text);
            if (!prop.snapshots.empty()) {
                emit(prop.snapshots, snapshot_text, out);
            }
        } else if (app.got_subcommand(zeros_cmd)) {
            text = cmd_zeros(zeros);
        } else if (app.got_subcommand(classify_cmd)) {
            text = cmd_classify(ratio21, ratiob1);
        } else if (app.got_subcommand(cont_cmd)) {
            text = cmd_continuum(cont, err);
        }
        emit(out_path, text, out);
    } catch (const WindowOverflow& e) {
        err << "numeric failure: " << e.what() << " (suggested window: " << e.suggested_window() << " sites)\n";
        return exit_numeric_failure;
    } catch (const QuadratureFailure& e) {
        err << "numeric failure: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
        return exit_numeric_failure;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << "\n";
        return exit_numeric_failure;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const std::domain_error& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_numeric_failure;
    }
    return exit_ok;
}

} // namespace dynloc::cli
