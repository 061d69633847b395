#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vch/cli.hpp"
#include "vch/diagnostics.hpp"
#include "vch/report_io.hpp"
#include "vch/snapshot.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("vch_test_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "vch");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    auto* old_out = std::cout.rdbuf(out.rdbuf());
    auto* old_err = std::cerr.rdbuf(err.rdbuf());
    const int code = vch::run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    return {code, out.str(), err.str()};
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kPure = R"([physics]
theta = 0.1
[basis]
modes = 16
[time]
dt = 1e-2
t_end = 0.2
samples = 4
[initial]
u0 = 1
[sweep]
thetas = 0.1, 0.05
modes = 8, 16
)";

const char* kSmooth = R"([basis]
modes = 32
[time]
dt = 1e-2
t_end = 0.1
samples = 5
[initial]
u0 = 1 + 0.5*sin(x)
[sweep]
thetas = 0.1, 0.05
modes = 16, 32
)";

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(cli({}).code == vch::kExitUsage);
    CHECK(cli({"frobnicate"}).code == vch::kExitUsage);
    CHECK(cli({"run"}).code == vch::kExitUsage);
    TempDir dir;
    CHECK(cli({"sweep", (dir.path / "missing.ini").string()}).code == vch::kExitUsage);
    CHECK(cli({"verify", (dir.path / "no_report").string()}).code == vch::kExitUsage);
    CHECK(cli({"diagnose", (dir.path / "none.vchf").string()}).code == vch::kExitUsage);
    CHECK(cli({"--help"}).code == vch::kExitOk);
}

TEST_CASE("config errors exit with 2 and name the constraint") {
    TempDir dir;
    write_file(dir.path / "pure.ini", kPure);
    const Outcome bad_theta = cli({"run", (dir.path / "pure.ini").string(), "--set", "physics.theta=1.5"});
    CHECK(bad_theta.code == vch::kExitUsage);
    CHECK(bad_theta.err.find("0<θ<1") != std::string::npos);
    CHECK(cli({"run", (dir.path / "pure.ini").string(), "--set", "physics.bogus=1"}).code == vch::kExitUsage);
    CHECK(cli({"run", (dir.path / "pure.ini").string(), "--set", "novalue"}).code == vch::kExitUsage);

    write_file(dir.path / "dup.ini", "[initial]\nu0 = 1\nu0 = 2\n");
    const Outcome dup = cli({"run", (dir.path / "dup.ini").string()});
    CHECK(dup.code == vch::kExitUsage);
    CHECK(dup.err.find("dup.ini:3") != std::string::npos);

    write_file(dir.path / "snap.ini", "[initial]\nsnapshot = broken.vchf\n");
    write_file(dir.path / "broken.vchf", "VCHF");
    CHECK(cli({"run", (dir.path / "snap.ini").string()}).code == vch::kExitUsage);
}

TEST_CASE("run on a pure phase writes flat diagnostics") {
    TempDir dir;
    write_file(dir.path / "pure.ini", kPure);
    const fs::path out = dir.path / "out";
    const Outcome r = cli({"run", (dir.path / "pure.ini").string(), "--out", out.string()});
    REQUIRE(r.code == vch::kExitOk);
    const auto recs = vch::read_trajectory_csv(out / "trajectory.csv");
    REQUIRE(recs.size() == 5);
    for (const auto& rec : recs) {
        CHECK(rec.mass == recs[0].mass);
        CHECK(rec.energy == 0.0);
        CHECK(rec.min_u == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(rec.visc_dissipation == 0.0);
    }
    CHECK(recs.back().t == doctest::Approx(0.2));
    const vch::Snapshot init = vch::read_snapshot(out / "initial.vchf");
    const vch::Snapshot fin = vch::read_snapshot(out / "final.vchf");
    CHECK(init.t == 0.0);
    CHECK(fin.t == doctest::Approx(0.2));
    CHECK(vch::norm_l2(fin.field - init.field) == 0.0);
}

TEST_CASE("run writes per-sample snapshots on request") {
    TempDir dir;
    write_file(dir.path / "pure.ini", kPure);
    const fs::path out = dir.path / "out";
    REQUIRE(cli({"run", (dir.path / "pure.ini").string(), "--out", out.string(), "--set",
                 "output.snapshot_every_sample=true"})
                .code == vch::kExitOk);
    for (int i = 0; i <= 4; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "sample_%05d.vchf", i);
        CHECK(fs::exists(out / name));
    }
}

TEST_CASE("blow-up exits with 1 and keeps the partial trajectory") {
    TempDir dir;
    write_file(dir.path / "smooth.ini", kSmooth);
    const fs::path out = dir.path / "out";
    const Outcome r = cli({"run", (dir.path / "smooth.ini").string(), "--out", out.string(), "--set",
                           "solver.blowup_threshold=1.2"});
    CHECK(r.code == vch::kExitFailure);
    CHECK(fs::exists(out / "trajectory.csv"));
}

TEST_CASE("runs are reproducible byte for byte") {
    TempDir dir;
    write_file(dir.path / "smooth.ini", kSmooth);
    REQUIRE(cli({"run", (dir.path / "smooth.ini").string(), "--out", (dir.path / "a").string()}).code == 0);
    REQUIRE(cli({"run", (dir.path / "smooth.ini").string(), "--out", (dir.path / "b").string()}).code == 0);
    CHECK(read_file(dir.path / "a" / "trajectory.csv") == read_file(dir.path / "b" / "trajectory.csv"));
    CHECK(read_file(dir.path / "a" / "final.vchf") == read_file(dir.path / "b" / "final.vchf"));
}

TEST_CASE("sweep then verify") {
    TempDir dir;
    write_file(dir.path / "smooth.ini", kSmooth);
    const fs::path out = dir.path / "sweep";
    const Outcome s = cli({"sweep", (dir.path / "smooth.ini").string(), "--out", out.string()});
    CHECK(s.code == vch::kExitOk);
    CHECK(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "verdict.txt"));
    CHECK(fs::exists(out / "run_degenerate.csv"));
    const Outcome v = cli({"verify", out.string()});
    CHECK(v.code == vch::kExitOk);
    CHECK(v.out.find("HOLDS") != std::string::npos);

    // tampering with a stored run flips the verdict
    auto recs = vch::read_trajectory_csv(out / "run_theta_0.05.csv");
    recs.back().min_u = -0.5;
    vch::write_trajectory_csv(recs, out / "run_theta_0.05.csv");
    const Outcome bad = cli({"verify", out.string()});
    CHECK(bad.code == vch::kExitFailure);
    CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("refine then verify") {
    TempDir dir;
    write_file(dir.path / "smooth.ini", kSmooth);
    const fs::path out = dir.path / "refine";
    CHECK(cli({"refine", (dir.path / "smooth.ini").string(), "--out", out.string()}).code == vch::kExitOk);
    CHECK(fs::exists(out / "run_modes_16.csv"));
    CHECK(cli({"verify", out.string()}).code == vch::kExitOk);
}

TEST_CASE("sweep on sign-changing data reports nonnegativity as not applicable") {
    TempDir dir;
    write_file(dir.path / "smooth.ini", kSmooth);
    const fs::path out = dir.path / "sweep";
    const Outcome s = cli({"sweep", (dir.path / "smooth.ini").string(), "--out", out.string(), "--set",
                           "initial.u0=0.5*sin(x)", "--set", "time.t_end=0.02"});
    CHECK(s.code == vch::kExitOk);
    CHECK(read_file(out / "verdict.txt").find("not applicable") != std::string::npos);
}

TEST_CASE("diagnose prints one CSV row") {
    TempDir dir;
    write_file(dir.path / "smooth.ini", kSmooth);
    const fs::path out = dir.path / "out";
    REQUIRE(cli({"run", (dir.path / "smooth.ini").string(), "--out", out.string()}).code == 0);
    const Outcome d = cli({"diagnose", (out / "final.vchf").string(), "--config", (dir.path / "smooth.ini").string()});
    REQUIRE(d.code == vch::kExitOk);
    std::istringstream lines(d.out);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header == vch::csv_header());
    const vch::DiagnosticsRecord rec = vch::parse_csv_row(row);
    const auto traj = vch::read_trajectory_csv(out / "trajectory.csv");
    CHECK(rec.t == traj.back().t);
    CHECK(rec.mass == traj.back().mass);
    CHECK(rec.energy == traj.back().energy);
    CHECK(rec.min_u == traj.back().min_u);

    CHECK(cli({"diagnose", (out / "final.vchf").string()}).code == vch::kExitOk);
    CHECK(cli({"diagnose", (out / "final.vchf").string(), "--set", "physics.theta=7"}).code == vch::kExitUsage);
}
