#include "dynloc/profile_json.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace dynloc {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_keys(const json& doc, std::initializer_list<const char*> allowed) {
    std::set<std::string> known{"type"};
    for (const char* key : allowed) {
        known.insert(key);
    }
    for (const auto& item : doc.items()) {
        if (!known.count(item.key())) {
            throw std::invalid_argument("unknown key '" + item.key() + "' in " + doc.at("type").get<std::string>() +
                                        " profile");
        }
    }
}

double number(const json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw std::invalid_argument(std::string("profile is missing field '") + key + "'");
    }
    const json& value = doc.at(key);
    if (!value.is_number()) {
        throw std::invalid_argument(std::string("profile field '") + key + "' must be a number");
    }
    return value.get<double>();
}

double number_or(const json& doc, const char* key, double fallback) {
    return doc.contains(key) ? number(doc, key) : fallback;
}

} // namespace

json to_json(const DriveProfile& profile) {
    return std::visit(overloaded{
                          [](const StaticDrive& s) { return json{{"type", "static"}, {"f0", s.f0}}; },
                          [](const MonoDrive& m) {
                              return json{{"type", "mono"}, {"f0", m.f0}, {"f1", m.f1}, {"omega1", m.omega1}};
                          },
                          [](const BichromaticDrive& b) {
                              return json{{"type", "bichromatic"}, {"f0", b.f0},         {"f1", b.f1},
                                          {"omega1", b.omega1},    {"f2", b.f2},         {"omega2", b.omega2},
                                          {"delta", b.delta}};
                          },
                          [](const FlippedDrive& f) {
                              return json{{"type", "flipped"}, {"f1", f.f1}, {"f2", f.f2}, {"a", f.duty}, {"T", f.period}};
                          },
                          [](const FourierDrive& f) {
                              return json{{"type", "fourier"},
                                          {"f0", f.f0},
                                          {"coefficients", f.harmonics},
                                          {"omega", f.omega}};
                          },
                      },
                      profile);
}

DriveProfile profile_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string()) {
        throw std::invalid_argument("profile document needs a string \"type\" field");
    }
    const std::string type = doc.at("type").get<std::string>();
    DriveProfile profile;
    if (type == "static") {
        check_keys(doc, {"f0"});
        profile = StaticDrive{number(doc, "f0")};
    } else if (type == "mono") {
        check_keys(doc, {"f0", "f1", "omega1"});
        profile = MonoDrive{number(doc, "f0"), number(doc, "f1"), number(doc, "omega1")};
    } else if (type == "bichromatic") {
        check_keys(doc, {"f0", "f1", "omega1", "f2", "omega2", "delta"});
        profile = BichromaticDrive{number(doc, "f0"),     number(doc, "f1"), number(doc, "omega1"),
                                   number(doc, "f2"),     number(doc, "omega2"),
                                   number_or(doc, "delta", 0.0)};
    } else if (type == "flipped") {
        check_keys(doc, {"f1", "f2", "a", "T"});
        profile = FlippedDrive{number(doc, "f1"), number(doc, "f2"), number(doc, "a"), number(doc, "T")};
    } else if (type == "fourier") {
        check_keys(doc, {"f0", "coefficients", "omega"});
        FourierDrive f;
        f.f0 = number(doc, "f0");
        f.omega = number(doc, "omega");
        if (!doc.contains("coefficients") || !doc.at("coefficients").is_array()) {
            throw std::invalid_argument("fourier profile needs a \"coefficients\" array");
        }
        for (const auto& c : doc.at("coefficients")) {
            if (!c.is_number()) {
                throw std::invalid_argument("fourier coefficients must be numbers");
            }
            f.harmonics.push_back(c.get<double>());
        }
        profile = std::move(f);
    } else {
        throw std::invalid_argument("unknown profile type '" + type + "'");
    }
    validate(profile);
    return profile;
}

json to_json(const ResonanceClass& r) {
    return json{{"p", r.p}, {"q", r.q}, {"n", r.n}, {"M", r.M}, {"N", r.N}, {"resonant", r.resonant}};
}

} // namespace dynloc
