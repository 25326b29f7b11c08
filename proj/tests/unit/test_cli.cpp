#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fctncd/cli.hpp"
#include "fctncd/error.hpp"

using namespace fctncd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("fctncd_test_" + name))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_file(const fs::path& path, const std::string& text)
{
    std::ofstream(path) << text;
    return path;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string config_error(const std::string& text)
{
    try {
        ConfigFile::parse(text, "t.cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST_CASE("config parsing")
{
    const ConfigFile cfg = ConfigFile::parse(
        "# comment\n[problem]\ncase = advection   ; trailing\n steps= 12\n[scheme]\nname=NDVL\n"
        "sigma = 0.5\noracle = true\n[converge]\nlevels = 10, 20,40\n");
    CHECK(cfg.get_string("problem.case", "") == "advection");
    CHECK(cfg.get_size("problem.steps", 0) == 12);
    CHECK(cfg.get_double("scheme.sigma", 0.0) == 0.5);
    CHECK(cfg.get_bool("scheme.oracle", false));
    CHECK(cfg.get_list("converge.levels", {}) == std::vector<double>{10, 20, 40});
    CHECK(cfg.get_double("scheme.dt", 0.25) == 0.25);
    CHECK_THROWS_AS(cfg.reject_unused(), ConfigError);  // scheme.name never read
    cfg.get_string("scheme.name", "");
    CHECK_NOTHROW(cfg.reject_unused());
}

TEST_CASE("config errors carry line and column")
{
    CHECK(config_error("[problem]\ncase advection\n").find("t.cfg:2:1") != std::string::npos);
    CHECK(config_error("[problem\n").find("t.cfg:1:1") != std::string::npos);
    CHECK(config_error("\n  [physics]\n").find("t.cfg:2:4") != std::string::npos);
    CHECK(config_error("steps = 3\n").find("outside of a section") != std::string::npos);
    CHECK(config_error("[scheme]\nsigma =\n").find("t.cfg:2:8") != std::string::npos);
    CHECK(config_error("[scheme]\nsigma = 1\nsigma = 2\n").find("duplicate") != std::string::npos);

    const ConfigFile cfg = ConfigFile::parse("[scheme]\nsigma = half\nmax_outer_iterations = -3\n",
                                             "t.cfg");
    try {
        cfg.get_double("scheme.sigma", 0.0);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("t.cfg:2:9") != std::string::npos);
    }
    CHECK_THROWS_AS(cfg.get_size("scheme.max_outer_iterations", 1), ConfigError);
}

TEST_CASE("run: error exit codes")
{
    TempDir dir("run_errors");
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cmd_run(dir.path / "missing.cfg", out, err) == kExitConfig);

    const auto bad = write_file(dir.path / "bad.cfg", "[problem]\ncase = advection\nsteps 4\n");
    err.str("");
    CHECK(cmd_run(bad, out, err) == kExitConfig);
    CHECK(err.str().find("bad.cfg:3:1") != std::string::npos);

    const auto unknown =
        write_file(dir.path / "unknown.cfg", "[problem]\ncase = advection\ncolour = red\n");
    CHECK(cmd_run(unknown, out, err) == kExitConfig);

    const auto scheme = write_file(dir.path / "scheme.cfg", "[scheme]\nname = FAST\n");
    CHECK(cmd_run(scheme, out, err) == kExitConfig);

    const auto stall = write_file(dir.path / "stall.cfg",
                                  "[problem]\ncase = advection\nsteps = 2\n[scheme]\nsigma = 0.5\n"
                                  "max_outer_iterations = 1\n[output]\ndirectory = " +
                                      (dir.path / "o").string() + "\n");
    CHECK(cmd_run(stall, out, err) == kExitNonConvergence);
}

TEST_CASE("run: outputs, echo and determinism")
{
    TempDir dir("run_outputs");
    const std::string body = "[problem]\ncase = advection\nsteps = 20\n[scheme]\nname = NDVA\n"
                             "sigma = 0\n[output]\nprefix = adv\nsnapshot_every = 10\n"
                             "dump_step = 3\ndirectory = ";
    const auto a = write_file(dir.path / "a.cfg", body + (dir.path / "a").string() + "\n");
    const auto b = write_file(dir.path / "b.cfg", body + (dir.path / "b").string() + "\n");
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(cmd_run(a, out, err) == kExitOk);
    REQUIRE(cmd_run(b, out, err) == kExitOk);

    for (const char* name : {"adv_000000.csv", "adv_000010.csv", "adv_000020.csv"}) {
        CHECK(fs::exists(dir.path / "a" / name));
        CHECK(read_file(dir.path / "a" / name) == read_file(dir.path / "b" / name));
    }
    CHECK_FALSE(fs::exists(dir.path / "a" / "adv_000005.csv"));
    const auto snap = lines_of(read_file(dir.path / "a" / "adv_000020.csv"));
    CHECK(snap.front() == "x,value");
    CHECK(snap.size() == 452);

    const std::string summary = read_file(dir.path / "a" / "adv_summary.txt");
    for (const char* key : {"problem.case = advection", "problem.steps = 20", "scheme.name = NDVA",
                            "scheme.sigma = 0", "output.prefix = adv", "output.snapshot_every = 10",
                            "output.dump_step = 3", "window square", "window triangle"}) {
        CHECK(summary.find(key) != std::string::npos);
    }

    const auto lp = lines_of(read_file(dir.path / "a" / "adv_step3_it0_lp.txt"));
    CHECK(lp.size() == 449);
    const auto lim = lines_of(read_file(dir.path / "a" / "adv_step3_it0_limiters.csv"));
    CHECK(lim.front() == "index,alpha+n,alpha-n,alpha+n1,alpha-n1");
    CHECK(lim.size() == 450);
}

TEST_CASE("run: oracle mode changes nothing but the log")
{
    TempDir dir("run_oracle");
    const auto config = [&](const std::string& name, const std::string& extra) {
        return write_file(dir.path / (name + ".cfg"),
                          "[problem]\ncase = rotation\ncells = 24\nsteps = 200\n[scheme]\n"
                          "name = NDVL\nsigma = 0.5\n" + extra + "[output]\nprefix = rot\n"
                          "directory = " + (dir.path / name).string() + "\n");
    };
    const auto plain = config("p", "");
    const auto checked = config("c", "oracle = true\n");
    std::ostringstream out;
    std::ostringstream err;
    REQUIRE(cmd_run(plain, out, err) == kExitOk);
    REQUIRE(cmd_run(checked, out, err) == kExitOk);
    CHECK(read_file(dir.path / "p" / "rot_000200.csv") == read_file(dir.path / "c" / "rot_000200.csv"));
    const auto log = lines_of(read_file(dir.path / "c" / "rot_oracle.log"));
    REQUIRE(log.size() == 201);
    CHECK(log.front() == "step,iterations,max_objective_gap");
    for (std::size_t i = 1; i < log.size(); ++i) {
        const double gap = std::stod(log[i].substr(log[i].rfind(',') + 1));
        CHECK(gap <= 1e-8);
    }
    CHECK_FALSE(fs::exists(dir.path / "p" / "rot_oracle.log"));
}

TEST_CASE("bench: row counts and flags")
{
    std::ostringstream out;
    std::ostringstream err;
    BenchArgs rot;
    rot.suite = "rotation";
    rot.schemes = {"NDVA"};
    rot.sigmas = {0.0};
    rot.cells = 32;
    rot.steps = 200;
    REQUIRE(cmd_bench(rot, out, err) == kExitOk);
    auto rows = lines_of(out.str());
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "case,shape,sigma,scheme,l1_error,l1_alt,y_max,steps,dt,converged");
    CHECK(rows[1].rfind("rotation,cylinder,0,NDVA,", 0) == 0);
    CHECK(rows[2].rfind("rotation,cone,", 0) == 0);
    CHECK(rows[3].rfind("rotation,hump,", 0) == 0);

    BenchArgs bad = rot;
    bad.schemes = {"NOPE"};
    CHECK(cmd_bench(bad, out, err) == kExitConfig);
    bad = rot;
    bad.sigmas = {1.5};
    CHECK(cmd_bench(bad, out, err) == kExitConfig);
    bad = rot;
    bad.suite = "shock";
    CHECK(cmd_bench(bad, out, err) == kExitConfig);
}

TEST_CASE("bench: advection table")
{
    TempDir dir("bench_adv");
    BenchArgs args;
    args.suite = "advection";
    args.schemes = {"NDVL", "NDVA"};
    args.sigmas = {0.0, 0.5, 1.0};
    args.out = dir.path / "table.csv";
    std::ostringstream out;
    std::ostringstream err;
    const int code = cmd_bench(args, out, err);
    CHECK((code == kExitOk || code == kExitNonConvergence));
    const auto rows = lines_of(read_file(dir.path / "table.csv"));
    CHECK(rows.size() == 31);
    CHECK(out.str().empty());
}

TEST_CASE("converge: refinement orders")
{
    TempDir dir("converge");
    std::ostringstream err;
    auto orders = [&](const std::string& text) {
        const auto cfg = write_file(dir.path / "c.cfg", text);
        std::ostringstream out;
        REQUIRE(cmd_converge(cfg, out, err) == kExitOk);
        const auto rows = lines_of(out.str());
        REQUIRE(rows.front() == "level,cells,h,dt,steps,l1_error,max_error,order");
        std::vector<std::vector<std::string>> cells;
        for (std::size_t r = 1; r < rows.size(); ++r) {
            std::vector<std::string> f;
            std::stringstream ss(rows[r]);
            for (std::string c; std::getline(ss, c, ',');) {
                f.push_back(c);
            }
            cells.push_back(f);
        }
        return cells;
    };

    SUBCASE("linear steady state is exact on every level")
    {
        const auto t = orders("[problem]\ncase = manufactured\nprofile = linear\nslope = 2\n"
                              "intercept = 1\nvelocity = 0\ndiffusion = 0.1\n[scheme]\nname = NDVA\n"
                              "dt = 0.001\n[converge]\nlevels = 10,20,40\nt_end = 0.05\n");
        for (const auto& row : t) {
            CHECK(std::stod(row[5]) <= 1e-12);
        }
    }

    SUBCASE("low-order advection is first order")
    {
        const auto t = orders("[problem]\ncase = manufactured\nprofile = sine\nwavenumber = 6.283185307179586\n"
                              "velocity = 1\n[scheme]\nname = LOW\ncourant = 0.5\n"
                              "[converge]\nlevels = 40,80,160,320\nt_end = 0.25\n");
        CHECK(std::stod(t.back()[7]) == doctest::Approx(1.0).epsilon(0.15));
    }

    SUBCASE("pure diffusion is second order")
    {
        const auto t = orders("[problem]\ncase = manufactured\nprofile = sine\nwavenumber = 3.141592653589793\n"
                              "wave_speed = 0\nvelocity = 0\ndiffusion = 0.1\nreaction = 0.5\n"
                              "[scheme]\nname = LOW\nsigma = 0.5\ndt = 0.01\n"
                              "[converge]\nlevels = 10,20,40,80\nt_end = 0.2\ndt_power = 2\n");
        CHECK(std::stod(t.back()[7]) == doctest::Approx(2.0).epsilon(0.1));
    }

    const auto wrong = write_file(dir.path / "w.cfg", "[problem]\ncase = advection\n");
    std::ostringstream out;
    CHECK(cmd_converge(wrong, out, err) == kExitConfig);
}
