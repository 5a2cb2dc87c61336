#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "hk/branch_io.hpp"
#include "hk/cli.hpp"
#include "hk/contour.hpp"
#include "hk/greens.hpp"
#include "support.hpp"

using namespace hk;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("hk_cli_" + std::to_string(std::random_device{}()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("dispersion tables") {
    auto r = run_cli({"dispersion", "--a", "1", "--h", "10000", "--m", "2..10"});
    REQUIRE(r.code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == std::vector<std::string>{"m", "omega_m", "ikprime_product", "limit_2d", "gap_to_limit"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) < 1e-4);

    r = run_cli({"dispersion", "--a", "1", "--h", "1", "--m", "3..3"});
    REQUIRE(r.code == 0);
    rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    const double want = hk_test::golden_value("omega_simply", {{"n", 3}, {"a", 1.0}, {"h", 1.0}});
    CHECK(hk_test::rel_err(std::stod(rows[1][1]), want) < 1e-13);

    CHECK(run_cli({"dispersion", "--m", "1..4"}).code == 2);
    CHECK(run_cli({"dispersion", "--m", "5..4"}).code == 2);
    CHECK(run_cli({"dispersion", "--m", "x"}).code == 2);
    CHECK(run_cli({"dispersion", "--h", "-1"}).code == 2);
    CHECK(run_cli({"dispersion", "--format", "xml"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);

    const auto j = nlohmann::json::parse(run_cli({"dispersion", "--m", "2..3", "--format", "json"}).out);
    CHECK(j["schema"] == "helix-kelvin/v1");
    CHECK(j["rows"].size() == 2);
}

TEST_CASE("annulus dispersion table") {
    auto r = run_cli({"dispersion-doubly", "--a1", "1", "--a2", "0.5", "--h", "10000", "--m", "2..8"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 8);
    CHECK(rows[1][5] == "degenerate");
    CHECK(rows[1][2].empty());
    CHECK(rows[1][3].empty());
    // Row m = 4 against the planar closed form.
    const double b = 0.5, q = (1 - b * b) * 4 / 2 - 1;
    const double mid = (1 - b * b) / 4, half = std::sqrt(q * q - std::pow(b, 8)) / 8;
    CHECK(std::fabs(std::stod(rows[3][2]) - (mid + half)) < 1e-3);
    CHECK(std::fabs(std::stod(rows[3][3]) - (mid - half)) < 1e-3);

    r = run_cli({"dispersion-doubly", "--a1", "1", "--a2", "0.6", "--h", "1", "--m", "3..40"});
    REQUIRE(r.code == 0);
    const auto mono = parse_csv(r.out);
    for (std::size_t i = 2; i < mono.size(); ++i) {
        REQUIRE(mono[i][5] == "above");
        CHECK(std::stod(mono[i][2]) > std::stod(mono[i - 1][2]));
        CHECK(std::stod(mono[i][3]) < std::stod(mono[i - 1][3]));
    }

    CHECK(run_cli({"dispersion-doubly", "--a1", "0.5", "--a2", "1"}).code == 2);
    CHECK(run_cli({"dispersion-doubly", "--a1", "1", "--a2", "1"}).code == 2);
}

TEST_CASE("monotonicity report") {
    TempDir dir;
    auto r = run_cli({"--out", dir / "mono.json", "monotonicity", "--z-points", "12", "--nu-max", "60", "--minima",
                  dir / "minima.csv"});
    REQUIRE(r.code == 0);
    const auto rep = nlohmann::json::parse(slurp(dir / "mono.json"));
    CHECK(rep["schema"] == "helix-kelvin/v1");
    CHECK(rep["violations"].empty());
    CHECK(rep["min_f"].get<double>() > 0.0);
    CHECK(rep["claim_holds"] == true);
    CHECK(parse_csv(slurp(dir / "minima.csv")).size() == 13);

    CHECK(run_cli({"monotonicity", "--nu-max", "2"}).code == 2);
    CHECK(run_cli({"monotonicity", "--z-min", "0"}).code == 2);
}

TEST_CASE("greens table") {
    auto r = run_cli({"greens-table", "--m", "0..2", "--points", "5", "--rho0", "0.8"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 16);
    const double rho = std::stod(rows[7][1]);
    CHECK(std::stod(rows[7][3]) == greens::green_mode(1, rho, 0.8, HelicalDomain(1.0)));
    CHECK(run_cli({"greens-table", "--m", "-1..2"}).code == 2);
}

TEST_CASE("bifurcate, round trip, verify and export") {
    TempDir dir;
    const std::vector<std::string> args = {"--modes", "8",  "--ntheta", "128", "bifurcate", "--m",
                                           "3",       "--s", "0.02,0.01,0.005,0"};
    auto with_out = [&](const std::string& path) {
        auto a = args;
        a.insert(a.begin(), {"--out", path});
        a.insert(a.end(), {"--table", dir / "table.csv", "--polylines", dir / "poly.csv", "--samples", "32"});
        return a;
    };
    REQUIRE(run_cli(with_out(dir / "branch.json")).code == 0);
    REQUIRE(run_cli(with_out(dir / "again.json")).code == 0);
    CHECK(slurp(dir / "branch.json") == slurp(dir / "again.json"));

    const auto table = parse_csv(slurp(dir / "table.csv"));
    REQUIRE(table.size() == 5);
    const double shift_02 = std::fabs(std::stod(table[1][2])), shift_01 = std::fabs(std::stod(table[2][2]));
    const double shift_005 = std::fabs(std::stod(table[3][2]));
    CHECK(shift_02 > shift_01);
    CHECK(shift_01 > shift_005);
    CHECK(parse_csv(slurp(dir / "poly.csv")).size() == 1 + 4 * 33);

    // Reloaded points re-evaluate to the stored residual.
    const auto f = io::read_branch_file(dir / "branch.json");
    REQUIRE(f.points.size() == 4);
    const HelicalDomain domain(f.config.h);
    for (const auto& p : f.points)
        CHECK(std::fabs(contour::point_residual(p, domain, f.config.disc) - p.residual) <= 1e-12);

    auto r = run_cli({"verify", "--branch", dir / "branch.json"});
    CHECK(r.code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[4][7] == "pass");
    CHECK(std::stod(rows[4][4]) < 1e-13);

    auto j = nlohmann::json::parse(slurp(dir / "branch.json"));
    j["points"][1]["contours"][0]["cos_coeffs"][1] = j["points"][1]["contours"][0]["cos_coeffs"][1].get<double>() + 1e-3;
    std::ofstream(dir / "bad.json") << j.dump();
    r = run_cli({"verify", "--branch", dir / "bad.json"});
    CHECK(r.code == 1);
    rows = parse_csv(r.out);
    CHECK(rows[2][7] == "fail");
    CHECK(rows[1][7] == "pass");

    std::ofstream(dir / "junk.json") << "{\"schema\": \"other\"}";
    CHECK(run_cli({"verify", "--branch", dir / "junk.json"}).code == 2);
    CHECK(run_cli({"verify", "--branch", dir / "missing.json"}).code == 2);

    // export3d: z spans [0, 2 pi h turns], the first cross-section is the stored boundary.
    r = run_cli({"export3d", "--branch", dir / "branch.json", "--point", "0", "--turns", "1.5", "--samples", "16"});
    REQUIRE(r.code == 0);
    rows = parse_csv(r.out);
    double zmin = INFINITY, zmax = -INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        zmin = std::min(zmin, std::stod(rows[i][5]));
        zmax = std::max(zmax, std::stod(rows[i][5]));
    }
    CHECK(zmin == 0.0);
    CHECK(zmax == 2 * std::numbers::pi * f.config.h * 1.5);
    const Contour& c = f.points[0].contours[0];
    for (int j2 = 0; j2 < 16; ++j2) {
        const auto& row = rows[1 + j2];
        const double th = std::stod(row[2]);
        CHECK(std::stod(row[1]) == 0.0);
        CHECK(std::stod(row[3]) == doctest::Approx(c.radius(th) * std::cos(th)).epsilon(1e-15));
        CHECK(std::stod(row[4]) == doctest::Approx(c.radius(th) * std::sin(th)).epsilon(1e-15));
    }
    // The trivial disk keeps its planar radius along the sweep.
    r = run_cli({"export3d", "--branch", dir / "branch.json", "--point", "3", "--turns", "2"});
    REQUIRE(r.code == 0);
    rows = parse_csv(r.out);
    double drift = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        drift = std::max(drift, std::fabs(std::hypot(std::stod(rows[i][3]), std::stod(rows[i][4])) - 1.0));
    CHECK(drift < 1e-15);

    CHECK(run_cli({"export3d", "--branch", dir / "branch.json", "--point", "4"}).code == 2);
    CHECK(run_cli({"export3d", "--branch", dir / "branch.json", "--point", "-1"}).code == 2);
}

TEST_CASE("bifurcate failure modes") {
    CHECK(run_cli({"bifurcate", "--doubly", "1", "0.6", "--m", "2", "--branch", "+", "--s", "0.005"}).code == 1);
    const auto r = run_cli({"bifurcate", "--doubly", "1", "0.6", "--m", "2", "--s", "0.005"});
    CHECK(r.err.find("degenerate") != std::string::npos);
    CHECK(run_cli({"bifurcate", "--m", "3", "--s", "0.6"}).code == 2);
    CHECK(run_cli({"bifurcate", "--m", "1", "--s", "0.01"}).code == 2);
    CHECK(run_cli({"bifurcate", "--m", "3"}).code == 2);
    CHECK(run_cli({"bifurcate", "--m", "3", "--s", "0.01", "--branch", "x"}).code == 2);
    CHECK(run_cli({"--ntheta", "100", "bifurcate", "--m", "3", "--s", "0.01"}).code == 2);
}

}
