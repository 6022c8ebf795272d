#include "cli.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "dynloc");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Outcome o;
    o.code = dynloc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

// Data rows of a CSV with one '#' metadata line and a header.
std::vector<std::vector<double>> rows(const std::string& text, std::string* header = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> table;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!seen_header) {
            seen_header = true;
            if (header) {
                *header = line;
            }
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            row.push_back(std::stod(cell));
        }
        table.push_back(row);
    }
    return table;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / ("dynloc_test_" + name);
    std::ofstream(path) << content;
    return path;
}

} // namespace

TEST_CASE("help and unknown commands") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"gamma-scan", "--help"}).code == 0);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("gamma-scan v = 0 slice is the monochromatic coefficient") {
    const auto o = run({"gamma-scan", "--p", "1", "--q", "2", "--n", "1", "--g", "0.75", "--grid", "-10:10:81", "--v", "0"});
    REQUIRE(o.code == 0);
    std::string header;
    const auto table = rows(o.out, &header);
    CHECK(header == "u,v,re_gamma,im_gamma,abs_gamma");
    REQUIRE(table.size() == 81);
    CHECK(o.out.rfind("# dynloc gamma-scan ", 0) == 0);
    for (const auto& r : table) {
        const double expected = 2.0 * 0.75 * boost::math::cyl_bessel_j(1.0, r[0]);
        CHECK(std::abs(r[2] - expected) < 1e-12);
        CHECK(std::abs(r[3]) < 1e-15);
        CHECK(r[4] == doctest::Approx(std::abs(expected)).epsilon(1e-12).scale(1e-12));
    }
}

TEST_CASE("gamma-scan surface and large-field slice") {
    const auto surface = run({"gamma-scan", "--grid", "-10:10:21,-10:10:11"});
    REQUIRE(surface.code == 0);
    CHECK(rows(surface.out).size() == 21 * 11);

    const auto o = run({"gamma-scan", "--n", "29", "--v", "-20", "--grid", "0:8:161"});
    REQUIRE(o.code == 0);
    const auto table = rows(o.out);
    std::vector<std::pair<double, double>> brackets;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (table[i - 1][2] * table[i][2] < 0.0) {
            brackets.emplace_back(table[i - 1][0], table[i][0]);
        }
    }
    REQUIRE(brackets.size() == 2);
    CHECK((brackets[0].first <= 3.37 && 3.37 <= brackets[0].second));
    CHECK((brackets[1].first <= 6.75 && 6.75 <= brackets[1].second));
}

TEST_CASE("gamma-scan rejects non-resonant tuples and bad grids") {
    const auto o = run({"gamma-scan", "--p", "2", "--q", "4", "--n", "3", "--grid", "0:1:5"});
    CHECK(o.code == 2);
    CHECK(o.err.find("no integer solution") != std::string::npos);
    CHECK(run({"gamma-scan", "--grid", "0:1"}).code == 2);
    CHECK(run({"gamma-scan", "--grid", "0:1:0"}).code == 2);
    CHECK(run({"gamma-scan", "--grid", "1:0:3"}).code == 2);
    CHECK(run({"gamma-scan", "--grid", "a:b:c"}).code == 2);
    CHECK(run({"gamma-scan"}).code == 2);
}

TEST_CASE("classify surfaces the table verdicts") {
    const auto a = run({"classify", "--ratio21", "incommensurable", "--ratiob1", "1/1"});
    CHECK(a.code == 0);
    CHECK(a.out.find("verdict: localization") != std::string::npos);
    const auto b = run({"classify", "--ratio21", "2/1", "--ratiob1", "1/1"});
    CHECK(b.code == 0);
    CHECK(b.out.find("verdict: transport") != std::string::npos);
    const auto c = run({"classify", "--ratio21", "2/1", "--ratiob1", "1/3"});
    CHECK(c.code == 0);
    CHECK(c.out.find("verdict: localization") != std::string::npos);
    CHECK(run({"classify", "--ratio21", "x", "--ratiob1", "1"}).code == 2);
}

TEST_CASE("zeros command") {
    const auto large = run({"zeros", "--family", "bichromatic", "--n", "29", "--v", "-20", "--range", "0:8"});
    REQUIRE(large.code == 0);
    std::string header;
    const auto table = rows(large.out, &header);
    CHECK(header == "j,numeric,estimate");
    REQUIRE(table.size() == 2);
    CHECK(std::abs(table[0][1] - 3.37) <= 0.01);
    CHECK(std::abs(table[1][1] - 6.75) <= 0.01);
    CHECK(std::abs(table[0][2] - 3.38) <= 0.01);
    CHECK(std::abs(table[1][2] - 6.77) <= 0.01);

    const auto mono = run({"zeros", "--family", "mono", "--n", "1", "--range", "3:4.5"});
    REQUIRE(mono.code == 0);
    const auto m = rows(mono.out);
    REQUIRE(m.size() == 1);
    CHECK(std::abs(m[0][1] - 3.8317) < 1e-4);

    const auto flip = run({"zeros", "--family", "flipped", "--a", "0.5", "--T", "1", "--n", "0", "--range", "1:20"});
    REQUIRE(flip.code == 0);
    const auto f = rows(flip.out);
    REQUIRE(f.size() == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(f[j][1] - 2.0 * std::numbers::pi * (j + 1)) < 1e-7);
        CHECK(f[j][2] == doctest::Approx(2.0 * std::numbers::pi * (j + 1)));
    }
    CHECK(run({"zeros", "--family", "square", "--range", "0:1"}).code == 2);
}

TEST_CASE("propagate with a profile file is deterministic") {
    const auto profile = temp_file("profile.json", R"({"coupling": 1.0,
        "profile": {"type": "bichromatic", "f0": 1.0, "f1": -4.68, "omega1": 1.0, "f2": 2.0, "omega2": 2.0, "delta": 0.0},
        "resonance": {"p": 1, "q": 2, "n": 1}})");
    const std::vector<std::string> args{"propagate", "--profile", profile.string(), "--sigma", "10", "--kappa0",
                                        "-1.5707963267948966", "--periods", "10"};
    const auto first = run(args);
    const auto second = run(args);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);
    std::string header;
    const auto table = rows(first.out, &header);
    CHECK(header == "t,mean_n,var_n,norm,closed_mean_n,closed_var_n");
    REQUIRE(table.size() == 81);
    for (const auto& r : table) {
        CHECK(r[3] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(r[4]).epsilon(1e-8).scale(1.0));
        CHECK(r[2] == doctest::Approx(r[5]).epsilon(1e-8).scale(1.0));
    }
    // Drift velocity is |gamma| for kappa0 = -pi/2; take gamma from gamma-scan.
    const auto scan = run({"gamma-scan", "--n", "1", "--v", "1", "--grid", "-4.68:-4.68:1"});
    REQUIRE(scan.code == 0);
    const double gamma = rows(scan.out).front()[4];
    CHECK(table.back()[1] / table.back()[0] == doctest::Approx(gamma).epsilon(0.02));

    const auto inline_args = run({"propagate", "--u", "-4.68", "--v", "1", "--n", "1", "--sigma", "10", "--kappa0",
                                  "-1.5707963267948966", "--periods", "10"});
    REQUIRE(inline_args.code == 0);
    CHECK(rows(inline_args.out).back()[1] == doctest::Approx(table.back()[1]).epsilon(1e-12));
    std::filesystem::remove(profile);
}

TEST_CASE("propagate writes snapshots and files") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = dir / "dynloc_test_traj.csv";
    const auto snaps = dir / "dynloc_test_snaps.csv";
    const auto o = run({"propagate", "--u", "-6.49", "--v", "1", "--periods", "2", "--samples-per-period", "2", "--out",
                        csv.string(), "--snapshots", snaps.string()});
    REQUIRE(o.code == 0);
    CHECK(o.out.empty());
    std::ifstream in(snaps);
    std::string meta, header;
    std::getline(in, meta);
    std::getline(in, header);
    CHECK(header == "t,l,abs2");
    CHECK(std::filesystem::file_size(csv) > 0);
    std::filesystem::remove(csv);
    std::filesystem::remove(snaps);
}

TEST_CASE("exit codes for invalid configs and numeric failures") {
    CHECK(run({"propagate", "--profile", "/nonexistent/profile.json"}).code == 2);
    const auto bad = temp_file("bad.json", R"({"type": "mono", "f0": 1.0, "f1": 1.0})");
    CHECK(run({"propagate", "--profile", bad.string()}).code == 2);
    std::filesystem::remove(bad);

    const auto free = temp_file("free.json", R"({"type": "static", "f0": 0.0})");
    CHECK(run({"propagate", "--profile", free.string()}).code == 2); // no period, no --t-max
    const auto overflow = run({"propagate", "--profile", free.string(), "--t-max", "1e8", "--periods", "1",
                               "--samples-per-period", "1"});
    CHECK(overflow.code == 3);
    CHECK_FALSE(overflow.err.empty());
    std::filesystem::remove(free);

    CHECK(run({"gamma-scan", "--grid", "0:1:3", "--out", "/nonexistent/dir/out.csv"}).code == 2);
    CHECK(run({"propagate", "--u", "1", "--v", "1", "--sigma", "-1"}).code == 2);
    CHECK(run({"continuum", "--gauge", "sideways"}).code == 2);
}

TEST_CASE("continuum without force does not drift") {
    const auto o = run({"continuum", "--force", "0", "--cells", "256", "--start-site", "0", "--period-bloch", "0.00625",
                        "--bloch-periods", "0.0125"});
    REQUIRE(o.code == 0);
    std::string header;
    const auto table = rows(o.out, &header);
    CHECK(header == "t,mean_x,var_x,norm,band_mean_x,band_var_x,band_weight");
    REQUIRE(table.size() == 17);
    for (const auto& r : table) {
        CHECK(std::abs(r[1]) < 1e-6 * 256 * 2.0 * std::numbers::pi);
        CHECK(r[3] == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(o.err.find("drift") != std::string::npos);
}
