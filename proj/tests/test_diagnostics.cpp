#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "fracflow/diagnostics.hpp"

using namespace fracflow;

TEST_CASE("recording")
{
    EnergyTrace tr;
    record(tr, 0.0, 0.5, 0.0);
    CHECK(tr.size() == 1);
    record(tr, 0.1, 0.4, 0.05);
    CHECK(tr.E_aug[1] == doctest::Approx(0.45));
    CHECK_THROWS_AS(record(tr, 0.1, 0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(record(tr, 0.05, 0.3, 0.0), std::invalid_argument);
    CHECK(tr.size() == 2);
    for (std::size_t i = 0; i < tr.size(); ++i)
    {
        CHECK(tr.E_aug[i] == tr.E[i] + tr.H[i]);
    }
}

TEST_CASE("dissipation check")
{
    const double tol = 1e-8;
    EnergyTrace tr;
    for (int i = 0; i < 50; ++i)
    {
        record(tr, 0.1 * i, 1.0 / (1.0 + i), 0.0);
    }
    const auto clean = check_dissipation(tr, tol);
    CHECK(clean.ok());
    CHECK(clean.max_increase < 0.0);

    EnergyTrace bumped;
    for (int i = 0; i < 50; ++i)
    {
        const double e = 1.0 - 1e-12 * i + (i == 20 ? 2.0 * tol * 2.0 : 0.0);
        record(bumped, 0.1 * i, e, 0.0);
    }
    const auto r = check_dissipation(bumped, tol);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0] == 20);

    // the history column on its own may rise; only the chosen column counts
    EnergyTrace rising;
    record(rising, 0.0, 1.0, 0.0);
    record(rising, 1.0, 0.5, 0.1);
    CHECK(check_dissipation(rising, tol).ok());
    CHECK_FALSE(check_dissipation(rising, tol, TraceColumn::history).ok());

    EnergyTrace one;
    record(one, 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(check_dissipation(one, tol), InsufficientDataError);
}

TEST_CASE("power-law slope of the history energy")
{
    EnergyTrace exact;
    EnergyTrace wobble;
    for (int i = 0; i <= 400; ++i)
    {
        const double t = 3.0 + 2.0 * i / 400.0;
        record(exact, t, 0.0, 0.7 * std::pow(t, -0.36));
    }
    // the wobble tilts the local slope by ~0.01 t cos t, so it needs a decade to average out
    for (int i = 0; i <= 400; ++i)
    {
        const double t = std::pow(10.0, i / 400.0);
        record(wobble, t, 0.0, 0.7 * std::pow(t, -0.36) * (1.0 + 0.01 * std::sin(t)));
    }
    CHECK(fit_slope(exact, 3.0, 5.0) == doctest::Approx(0.36).epsilon(1e-10));
    CHECK(std::abs(fit_slope(wobble, 1.0, 10.0) - 0.36) <= 0.02);
    CHECK_THROWS_AS(fit_slope(exact, 3.0, 3.02), InsufficientDataError);

    EnergyTrace zero;
    for (int i = 1; i <= 20; ++i)
    {
        record(zero, i, 1.0, 0.0);
    }
    CHECK_THROWS_AS(fit_slope(zero, 1.0, 20.0), std::domain_error);
}

TEST_CASE("csv output")
{
    EnergyTrace tr;
    record(tr, 0.0, 0.5, 0.0);
    record(tr, 0.005, 0.49999999999999994, 1e-20);
    std::ostringstream os;
    write_csv(os, tr);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,E,H,E_aug");
    std::getline(is, line);
    CHECK(line == "0,0.5,0,0.5");
    std::getline(is, line);
    CHECK(line == "0.0050000000000000001,0.49999999999999994,9.9999999999999995e-21,0.49999999999999994");
    CHECK_FALSE(std::getline(is, line));
}
