#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mab/cli.hpp"
#include "mab/table.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using std::numbers::pi;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("mab_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
    json summary() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "mab");
    std::ostringstream out, err;
    const int code = mab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

void write_path(const fs::path& p, double cx, double cy, double radius, int n) {
    std::ofstream out(p);
    out << "x,y\n";
    for (int i = 0; i <= n; ++i) {
        const double a = 2 * pi * (i % n) / n;
        out << cx + radius * std::cos(a) << ',' << cy + radius * std::sin(a) << '\n';
    }
}

}  // namespace

TEST_CASE("surfaces command") {
    TempDir dir;
    const auto r = run({"surfaces", "--k", "2", "--xi", "0.5", "--r-max", "6", "--n", "600", "--out-dir", dir.path.string()});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(dir.path / "surfaces.csv");
    REQUIRE(rows.size() == 601);
    CHECK(rows[0] == std::vector<std::string>{"r", "E_minus", "E_plus", "born_huang"});
    bool found = false;
    for (const auto& row : rows) {
        if (row[0] == "2") {
            CHECK(std::stod(row[1]) == doctest::Approx(-1.96875).epsilon(1e-15));
            found = true;
        }
    }
    CHECK(found);
    const json s = r.summary();
    CHECK(s["command"] == "surfaces");
    CHECK(s["tool_version"] == mab::cli::kToolVersion);
    CHECK(s.contains("wall_time_s"));
    CHECK(s["margins"]["bo_regime"] == 8.0);
    CHECK(fs::exists(dir.path / "surfaces_summary.json"));

    const auto j = run({"surfaces", "--k", "2", "--xi", "0.5", "--r-max", "6", "--n", "600", "--format", "json",
                        "--out-dir", dir.path.string()});
    REQUIRE(j.code == 0);
    const json table = json::parse(slurp(dir.path / "surfaces.json"));
    REQUIRE(table.size() == 600);
    for (std::size_t i = 0; i < 600; ++i) {
        CHECK(table[i]["r"].get<double>() == std::stod(rows[i + 1][0]));
        CHECK(table[i]["E_minus"].get<double>() == std::stod(rows[i + 1][1]));
        CHECK(table[i]["E_plus"].get<double>() == std::stod(rows[i + 1][2]));
    }

    CHECK(run({"surfaces", "--k", "-1", "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"surfaces", "--k", "nan", "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"surfaces", "--xi", "0.3", "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"surfaces", "--bogus", "1", "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"surfaces", "--k", "0.5", "--strict", "--out-dir", dir.path.string()}).code == 3);
}

TEST_CASE("dynamics command") {
    TempDir dir;
    const auto r = run({"dynamics", "--k", "2", "--xi", "0.5", "--omega", "0.01", "--loops", "1", "--out-dir", dir.path.string()});
    REQUIRE(r.code == 0);
    const json s = r.summary();
    CHECK(s["model_ode_vs_closed_form"]["max_abs_c_bar"].get<double>() <= 2e-2);
    CHECK(s["model_ode_vs_closed_form"]["max_abs_s_bar"].get<double>() <= 2e-2);
    CHECK(s["model_ode_vs_closed_form"]["max_abs_phi"].get<double>() <= 3e-2);
    CHECK(s["invariants"]["max_norm_deviation_lab"].get<double>() <= 1e-9);
    CHECK(s["invariants"]["picture_equivalence_max_abs"].get<double>() <= 1e-6);
    CHECK(s["margins"]["adiabaticity"].get<double>() == doctest::Approx(0.005 / 8));
    CHECK(s["final_delta_theta"].get<double>() == doctest::Approx(2 * pi));

    const auto still = run({"dynamics", "--k", "2", "--omega", "0", "--out-dir", dir.path.string(), "--stem", "still"});
    REQUIRE(still.code == 0);
    const auto rows = read_csv(dir.path / "still.csv");
    const auto& header = rows[0];
    const auto col = std::find(header.begin(), header.end(), "phi") - header.begin();
    REQUIRE(col < static_cast<long>(header.size()));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][col]) == 0.0);

    CHECK(run({"dynamics", "--strict", "--omega", "10", "--k", "1", "--out-dir", dir.path.string()}).code == 3);
    CHECK(run({"dynamics", "--k", "2", "--dt", "0.1", "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"dynamics", "--schedule", "spiral", "--out-dir", dir.path.string()}).code == 2);
}

TEST_CASE("berry command") {
    TempDir dir;
    auto r = run({"berry", "--xi", "0.5", "--sweep", "0:6.28:0.01", "--out-dir", dir.path.string(), "--stem", "half"});
    REQUIRE(r.code == 0);
    json s = r.summary();
    REQUIRE(s["jumps"].size() == 1);
    CHECK(s["jumps"][0].get<double>() == doctest::Approx(pi));
    CHECK(s["mab_phase_factor"]["re"] == -1.0);

    r = run({"berry", "--xi", "-1", "--sweep", "0:6.28:0.01", "--out-dir", dir.path.string(), "--stem", "quad"});
    REQUIRE(r.code == 0);
    s = r.summary();
    REQUIRE(s["jumps"].size() == 2);
    CHECK(s["jumps"][0].get<double>() == doctest::Approx(pi / 2));
    CHECK(s["jumps"][1].get<double>() == doctest::Approx(3 * pi / 2));
    CHECK(s["mab_phase_factor"]["re"] == 1.0);

    r = run({"berry", "--xi", "0.5", "--sweep", "0:6.28:0.01", "--gauge", "fourier:a0=0.3,a1=1.5,b1=-0.7,a2=0.4,c=2",
             "--out-dir", dir.path.string(), "--stem", "fourier"});
    REQUIRE(r.code == 0);
    const auto base = read_csv(dir.path / "half.csv");
    const auto gauged = read_csv(dir.path / "fourier.csv");
    REQUIRE(base.size() == gauged.size());
    const auto col = std::find(base[0].begin(), base[0].end(), "gamma_numeric") - base[0].begin();
    double worst = 0.0;
    for (std::size_t i = 1; i < base.size(); ++i) {
        if (base[i][col] == "nan") continue;
        const double d = std::remainder(std::stod(base[i][col]) - std::stod(gauged[i][col]), 2 * pi);
        worst = std::max(worst, std::abs(d));
    }
    CHECK(worst <= 1e-6);

    CHECK(run({"berry", "--sweep", "0:1", "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"berry", "--gauge", "fourier:q=1", "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"berry", "--grid-n", "10", "--out-dir", dir.path.string()}).code == 2);
}

TEST_CASE("holonomy command") {
    TempDir dir;
    write_path(dir.path / "unit.csv", 0.0, 0.0, 1.0, 400);
    write_path(dir.path / "off.csv", 3.0, 0.0, 1.0, 400);
    auto r = run({"holonomy", "--xi", "0.5", "--path", (dir.path / "unit.csv").string(), "--out-dir", dir.path.string()});
    REQUIRE(r.code == 0);
    json s = r.summary();
    CHECK(s["phase_factor"]["re"].get<double>() == doctest::Approx(-1.0));
    CHECK(std::abs(s["phase_factor"]["im"].get<double>()) < 1e-12);
    CHECK(s["winding"] == 1);
    CHECK(fs::exists(dir.path / "holonomy.json"));

    r = run({"holonomy", "--xi", "0.5", "--path", (dir.path / "off.csv").string(), "--out-dir", dir.path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.summary()["phase_factor"]["re"].get<double>() == doctest::Approx(1.0));

    r = run({"holonomy", "--xi", "-1", "--path", (dir.path / "unit.csv").string(), "--out-dir", dir.path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.summary()["phase_factor"]["re"].get<double>() == doctest::Approx(1.0));

    {
        std::ofstream out(dir.path / "through.csv");
        out << "x,y\n1,0\n0,0\n0,1\n";
    }
    CHECK(run({"holonomy", "--path", (dir.path / "through.csv").string(), "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"holonomy", "--path", (dir.path / "missing.csv").string(), "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"holonomy", "--out-dir", dir.path.string()}).code == 2);
}

TEST_CASE("spectrum command") {
    TempDir dir;
    auto r = run({"spectrum", "--k", "4", "--xi", "0.5", "--n-eigs", "2", "--out-dir", dir.path.string()});
    REQUIRE(r.code == 0);
    json s = r.summary();
    CHECK(s["pair_degeneracy_max_abs"].get<double>() <= 1e-8);
    CHECK(std::abs(s["ground"]["j"].get<double>()) == 0.5);
    const auto rows = read_csv(dir.path / "spectrum.csv");
    CHECK(rows[0] == std::vector<std::string>{"xi", "k", "j", "level_index", "energy", "source"});
    std::set<std::string> sources;
    for (std::size_t i = 1; i < rows.size(); ++i) sources.insert(rows[i][5]);
    CHECK(sources == std::set<std::string>{"exact", "bo_with_bh", "bo_without_bh"});

    r = run({"spectrum", "--k", "0", "--xi", "0.5", "--n-eigs", "2", "--out-dir", dir.path.string(), "--stem", "free"});
    REQUIRE(r.code == 0);
    CHECK(r.summary()["oscillator_limit_max_abs"].get<double>() <= 1e-4);

    r = run({"spectrum", "--k", "4", "--xi", "-1", "--n-eigs", "1", "--out-dir", dir.path.string(), "--stem", "quad"});
    REQUIRE(r.code == 0);
    CHECK(r.summary()["bo_angular_multiset_matches_unshifted"]["equal"] == true);

    CHECK(run({"spectrum", "--j", "1", "--xi", "0.5", "--out-dir", dir.path.string()}).code == 2);
    CHECK(run({"spectrum", "--n", "100", "--out-dir", dir.path.string()}).code == 2);
}

TEST_CASE("determinism and configuration files") {
    TempDir a, b;
    for (const auto* dir : {&a, &b})
        REQUIRE(run({"berry", "--xi", "-1", "--sweep", "0:3:0.05", "--out-dir", dir->path.string()}).code == 0);
    CHECK(slurp(a.path / "berry.csv") == slurp(b.path / "berry.csv"));
    for (const auto* dir : {&a, &b})
        REQUIRE(run({"dynamics", "--k", "1.5", "--omega", "0.05", "--sweep", "1", "--out-dir", dir->path.string()}).code == 0);
    CHECK(slurp(a.path / "dynamics.csv") == slurp(b.path / "dynamics.csv"));

    {
        std::ofstream cfg(a.path / "run.cfg");
        cfg << "# surfaces run\nk = 3\nr-max = 4\nn=40\n";
    }
    auto r = run({"surfaces", "--config", (a.path / "run.cfg").string(), "--out-dir", a.path.string()});
    REQUIRE(r.code == 0);
    json s = r.summary();
    CHECK(s["parameters"]["model"]["k"] == 3.0);
    CHECK(s["rows"] == 40);

    r = run({"surfaces", "--config", (a.path / "run.cfg").string(), "--k", "5", "--out-dir", a.path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.summary()["parameters"]["model"]["k"] == 5.0);

    {
        std::ofstream cfg(a.path / "typo.cfg");
        cfg << "kk = 3\n";
    }
    CHECK(run({"surfaces", "--config", (a.path / "typo.cfg").string(), "--out-dir", a.path.string()}).code == 2);
    CHECK(run({"surfaces", "--config", (a.path / "absent.cfg").string(), "--out-dir", a.path.string()}).code == 2);
}

TEST_CASE("table formatting") {
    CHECK(mab::format_double(2.0) == "2");
    CHECK(mab::format_double(-1.96875) == "-1.96875");
    CHECK(mab::format_double(0.1) == "0.10000000000000001");
    CHECK(mab::format_double(NAN) == "nan");
    CHECK(mab::format_double(-INFINITY) == "-inf");
    std::istringstream in("y,x\n1,2\n3,4\n");
    const auto pts = mab::read_path_csv(in);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].x == 2.0);
    CHECK(pts[1].y == 3.0);
    std::istringstream bad("a,b\n1,2\n");
    CHECK_THROWS(mab::read_path_csv(bad));
}
