#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracflow/config.hpp"
#include "fracflow/random.hpp"
#include "fracflow/runner.hpp"
#include "fracflow/special.hpp"

using namespace fracflow;
namespace fs = std::filesystem;

namespace
{

SimConfig small_config(double alpha)
{
    SimConfig c;
    c.alpha = alpha;
    c.grid = 16;
    c.T = 0.1;
    c.dt = 0.005;
    return c;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("xoshiro256** reference stream")
{
    // splitmix64 seeding followed by xoshiro256**, values from an independent implementation
    Xoshiro256ss zero(0);
    CHECK(zero.next() == 0x99ec5f36cb75f2b4ull);
    CHECK(zero.next() == 0xbf6e1f784956452aull);
    CHECK(zero.next() == 0x1a5f849d4933e6e0ull);
    Xoshiro256ss rng(42);
    CHECK(rng.next() == 0x15780b2e0c2ec716ull);
    CHECK(rng.next() == 0x6104d9866d113a7eull);
    CHECK(rng.next() == 0xae17533239e499a1ull);
    Xoshiro256ss u(42);
    CHECK(u.uniform() == 0.08386297105988216);
    for (int i = 0; i < 1000; ++i)
    {
        const double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("config defaults")
{
    const SimConfig c;
    CHECK(c.alpha == 0.5);
    CHECK(c.T == 5.0);
    CHECK(c.dt == 0.005);
    CHECK(c.grid == 128);
    CHECK(c.steps() == 1000);
    CHECK(c.init.lo == -1e-3);
    CHECK(c.init.hi == 1e-3);
    CHECK(c.init.seed == 42);
    CHECK(c.rational_tol == 1e-8);
    CHECK(c.newton_tol == 1e-10);
    CHECK(c.flow == FlowTag::cahn_hilliard);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config parsing")
{
    std::istringstream is("# experiment\n"
                          "alpha = 0.3\n"
                          "  dt=0.01   # coarse\n"
                          "\n"
                          "grid = 32\n"
                          "flow = allen-cahn\n"
                          "seed = 7\n"
                          "init = constant\n"
                          "init_value = 0.25\n"
                          "output_dir = /tmp/x\n");
    const SimConfig c = parse_config(is);
    CHECK(c.alpha == 0.3);
    CHECK(c.dt == 0.01);
    CHECK(c.grid == 32);
    CHECK(c.flow == FlowTag::allen_cahn);
    CHECK(c.init.seed == 7);
    CHECK(c.init.kind == InitKind::constant);
    CHECK(c.init.value == 0.25);
    CHECK(c.output_dir == "/tmp/x");
    CHECK(c.T == 5.0);

    std::istringstream unknown("colour = blue\n");
    CHECK_THROWS_AS(parse_config(unknown), std::invalid_argument);
    std::istringstream no_eq("alpha 0.3\n");
    CHECK_THROWS_AS(parse_config(no_eq), std::invalid_argument);
    std::istringstream bad_num("dt = fast\n");
    CHECK_THROWS_AS(parse_config(bad_num), std::invalid_argument);
    std::istringstream bad_int("grid = 12.5\n");
    CHECK_THROWS_AS(parse_config(bad_int), std::invalid_argument);
}

TEST_CASE("config validation")
{
    SimConfig c;
    c.dt = 6.0;
    CHECK_THROWS(c.validate());
    c = SimConfig{};
    c.grid = 3;
    CHECK_THROWS(c.validate());
    c = SimConfig{};
    c.alpha = 0.0;
    CHECK_THROWS(c.validate());
    c = SimConfig{};
    c.newton_tol = 0.0;
    CHECK_THROWS(c.validate());
    c = SimConfig{};
    c.dt = 0.003;
    CHECK_THROWS(c.validate());
}

TEST_CASE("random initial data")
{
    const Field a = initial_field(small_config(0.1));
    const Field b = initial_field(small_config(0.9));
    CHECK((a.values() == b.values()).all());
    CHECK(a.max_abs() <= 1e-3);
    CHECK(a.nx() == 16);
    CHECK(a.dx() == 1.0 / 16);
    SimConfig other = small_config(0.1);
    other.init.seed = 43;
    CHECK_FALSE((initial_field(other).values() == a.values()).all());
}

TEST_CASE("scalar relaxation run")
{
    SimConfig c;
    c.flow = FlowTag::scalar;
    c.init.kind = InitKind::constant;
    c.init.value = 1.0;
    c.alpha = 0.5;
    c.dt = 1e-3;
    c.T = 1.0;
    const RunResult r = run(c);
    CHECK(r.scalar_values.size() == 1001);
    CHECK(r.trace.size() == 1001);
    CHECK(std::abs(r.scalar_values.back() - mittag_leffler(FractionalOrder{0.5}, -1.0)) <= 1e-3);
    CHECK_FALSE(r.final_field.has_value());
}

TEST_CASE("equilibrium run")
{
    SimConfig c = small_config(0.5);
    c.init.kind = InitKind::constant;
    c.init.value = 1.0;
    const RunResult r = run(c);
    for (std::size_t i = 0; i < r.trace.size(); ++i)
    {
        CHECK(r.trace.E[i] == 0.0);
        CHECK(r.trace.H[i] == 0.0);
    }
    REQUIRE(r.final_field.has_value());
    CHECK(r.final_field->values().isApproxToConstant(1.0, 1e-15));
}

TEST_CASE("classical run has no history energy")
{
    const RunResult r = run(small_config(1.0));
    for (double h : r.trace.H)
    {
        CHECK(h == 0.0);
    }
    CHECK(r.max_mass_drift <= 1e-12);
}

TEST_CASE("trace stride keeps both ends")
{
    SimConfig c = small_config(0.5);
    c.trace_every = 7;
    const RunResult r = run(c);
    // steps 0, 7, 14 and the last one, 20
    REQUIRE(r.trace.size() == 4);
    CHECK(r.trace.times.back() == doctest::Approx(0.1));
}

TEST_CASE("outputs and determinism")
{
    const fs::path dir = fs::temp_directory_path() / "fracflow_runner_test";
    fs::remove_all(dir);
    SimConfig c = small_config(0.4);
    c.snapshot_every = 10;
    c.output_dir = (dir / "a").string();
    const RunResult r = run(c);
    CHECK(fs::exists(dir / "a" / "trace.csv"));
    CHECK(fs::exists(dir / "a" / "soe.txt"));
    for (int step : {0, 10, 20})
    {
        CHECK(fs::exists(dir / "a" / ("field_" + std::to_string(step) + ".bin")));
        CHECK(fs::exists(dir / "a" / ("field_" + std::to_string(step) + ".meta")));
    }
    const Field last = read_snapshot((dir / "a" / "field_20").string());
    CHECK((last.values() == r.final_field->values()).all());

    c.output_dir = (dir / "b").string();
    run(c);
    CHECK(slurp(dir / "a" / "trace.csv") == slurp(dir / "b" / "trace.csv"));
    CHECK(slurp(dir / "a" / "soe.txt") == slurp(dir / "b" / "soe.txt"));

    SimConfig from_file = small_config(0.4);
    from_file.init.kind = InitKind::file;
    from_file.init.path = (dir / "a" / "field_20").string();
    CHECK((initial_field(from_file).values() == last.values()).all());
    fs::remove_all(dir);
}

TEST_CASE("sweep")
{
    std::vector<SimConfig> configs;
    for (double a : {0.1, 0.5, 0.9})
    {
        configs.push_back(small_config(a));
    }
    SimConfig broken = small_config(0.5);
    broken.newton_max_iter = 1;
    broken.newton_tol = 1e-16;
    configs.push_back(broken);

    const auto entries = sweep(configs);
    REQUIRE(entries.size() == 4);
    std::size_t records = 0;
    for (int i = 0; i < 3; ++i)
    {
        REQUIRE(entries[i].result.has_value());
        CHECK(entries[i].error.empty());
        CHECK(entries[i].result->trace.E[0] == entries[0].result->trace.E[0]);
        records += entries[i].result->trace.size();
    }
    CHECK_FALSE(entries[3].result.has_value());
    CHECK(entries[3].error.find("step 1") != std::string::npos);

    std::ostringstream os;
    write_sweep_csv(os, entries);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "alpha,t,E,H,E_aug");
    std::size_t rows = 0;
    while (std::getline(is, line))
    {
        ++rows;
    }
    CHECK(rows == records);
    CHECK_THROWS(sweep({}));
}

TEST_CASE("run errors carry the step index")
{
    SimConfig c = small_config(0.5);
    c.newton_max_iter = 1;
    c.newton_tol = 1e-16;
    try
    {
        run(c);
        FAIL("expected RunError");
    }
    catch (const RunError& e)
    {
        CHECK(e.step == 1);
        CHECK(e.residual > 0.0);
    }
}
