// Command line front end: run, sweep, fit-kernel, validate.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracflow/config.hpp"
#include "fracflow/rational.hpp"
#include "fracflow/refsolver.hpp"
#include "fracflow/runner.hpp"
#include "fracflow/special.hpp"

using namespace fracflow;

namespace
{

// Flags left unset keep the config-file value.
struct Overrides
{
    std::string config_path;
    std::optional<double> alpha, dt, T, eps_tilde, beta, mobility, lam, init_value;
    std::optional<double> rational_tol, newton_tol;
    std::optional<int> grid, snapshot_every, trace_every;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> flow, init, init_path, out;

    void attach(CLI::App* app)
    {
        app->add_option("-c,--config", config_path, "key=value config file")->check(CLI::ExistingFile);
        app->add_option("--alpha", alpha, "fractional order in (0, 1]");
        app->add_option("--dt", dt, "time step");
        app->add_option("--T", T, "final time");
        app->add_option("--grid", grid, "cells per side of the unit square");
        app->add_option("--eps-tilde", eps_tilde, "interface parameter");
        app->add_option("--beta", beta, "eps^2 = eps_tilde * beta");
        app->add_option("--mobility", mobility, "gradient prefactor M");
        app->add_option("--flow", flow, "scalar | allen-cahn | cahn-hilliard");
        app->add_option("--lam", lam, "rate of the scalar flow");
        app->add_option("--init", init, "random | constant | file");
        app->add_option("--init-value", init_value, "value for constant init");
        app->add_option("--init-path", init_path, "snapshot base name for file init");
        app->add_option("--seed", seed, "seed of the random initial field");
        app->add_option("--rational-tol", rational_tol, "relative accuracy of the kernel fit");
        app->add_option("--newton-tol", newton_tol, "relative Newton residual");
        app->add_option("--snapshot-every", snapshot_every, "0 disables snapshots");
        app->add_option("--trace-every", trace_every, "record energies every n steps");
        app->add_option("-o,--out", out, "output directory");
    }

    SimConfig build() const
    {
        SimConfig c = config_path.empty() ? SimConfig{} : load_config(config_path);
        if (alpha) c.alpha = *alpha;
        if (dt) c.dt = *dt;
        if (T) c.T = *T;
        if (grid) c.grid = *grid;
        if (eps_tilde) c.eps_tilde = *eps_tilde;
        if (beta) c.beta = *beta;
        if (mobility) c.mobility = *mobility;
        if (flow) c.flow = parse_flow_tag(*flow);
        if (lam) c.lam = *lam;
        if (init) set_config_value(c, "init", *init);
        if (init_value) c.init.value = *init_value;
        if (init_path) c.init.path = *init_path;
        if (seed) c.init.seed = *seed;
        if (rational_tol) c.rational_tol = *rational_tol;
        if (newton_tol) c.newton_tol = *newton_tol;
        if (snapshot_every) c.snapshot_every = *snapshot_every;
        if (trace_every) c.trace_every = *trace_every;
        if (out) c.output_dir = *out;
        // scalar runs only make sense from a constant start
        if (c.flow == FlowTag::scalar && !init)
        {
            c.init.kind = InitKind::constant;
            if (!init_value && c.init.value == 0.0)
                c.init.value = 1.0;
        }
        return c;
    }
};

void print_summary(const SimConfig& c, const RunResult& r)
{
    const auto& tr = r.trace;
    std::printf("alpha=%g flow=%s steps=%d poles=%ld\n", c.alpha, to_string(c.flow).c_str(),
                c.steps(), r.approx->size());
    std::printf("E(0)=%.10g E(T)=%.10g H(T)=%.6g E_aug(T)=%.10g\n", tr.E.front(), tr.E.back(),
                tr.H.back(), tr.E_aug.back());
    if (!r.scalar_values.empty())
        std::printf("u(T)=%.15g\n", r.scalar_values.back());
    else
        std::printf("max|u|=%.6g mass drift=%.3g newton=%d cg=%d\n", r.max_abs,
                    r.max_mass_drift, r.newton_iterations, r.cg_iterations);
}

int cmd_run(const Overrides& o)
{
    const SimConfig c = o.build();
    const RunResult r = run(c);
    print_summary(c, r);
    if (c.output_dir.empty())
        write_csv(std::cout, r.trace);
    return 0;
}

int cmd_sweep(const Overrides& o, const std::vector<double>& alphas)
{
    const SimConfig base = o.build();
    std::vector<SimConfig> configs;
    for (double a : alphas)
    {
        SimConfig c = base;
        c.alpha = a;
        if (!base.output_dir.empty())
        {
            std::ostringstream sub;
            sub << "alpha_" << a;
            c.output_dir = (std::filesystem::path(base.output_dir) / sub.str()).string();
        }
        configs.push_back(c);
    }
    const auto entries = sweep(configs);
    int failures = 0;
    for (std::size_t i = 0; i < entries.size(); ++i)
    {
        if (entries[i].result)
        {
            print_summary(configs[i], *entries[i].result);
        }
        else
        {
            std::fprintf(stderr, "alpha=%g failed: %s\n", entries[i].alpha, entries[i].error.c_str());
            ++failures;
        }
    }
    if (base.output_dir.empty())
    {
        write_sweep_csv(std::cout, entries);
    }
    else
    {
        std::ofstream os(std::filesystem::path(base.output_dir) / "sweep.csv");
        write_sweep_csv(os, entries);
    }
    return failures == 0 ? 0 : 1;
}

int cmd_fit(double alpha, double z_min, double z_max, double tol, const std::string& out)
{
    const SoeApprox a = aaa_fit(FractionalOrder{alpha}, z_min, z_max, tol);
    std::fprintf(stderr, "poles=%ld relative error=%.3g\n", a.size(), symbol_relative_error(a));
    if (out.empty())
    {
        write_table(std::cout, a);
    }
    else
    {
        std::ofstream os(out);
        write_table(os, a);
    }
    return 0;
}

// Quick cross-checks of the numerical kernels against independent values.
int cmd_validate()
{
    int failures = 0;
    const auto check = [&](const std::string& name, double err, double tol) {
        const bool ok = err <= tol;
        failures += ok ? 0 : 1;
        std::printf("%s %-40s err=%.3g tol=%.1g\n", ok ? "PASS" : "FAIL", name.c_str(), err, tol);
    };

    double err = 0.0;
    for (double x : {0.1, 0.3, 1.5, 2.5, 7.25, 20.5, 100.3})
        err = std::max(err, std::abs(gamma_fn(x) / std::tgamma(x) - 1.0));
    check("gamma vs std::tgamma", err, 1e-13);

    struct MlCase
    {
        double alpha, z, value;
    };
    const MlCase ml[] = {{0.5, -1.0, 0.42758357615580700},  {0.3, -1.0, 0.45659440832969067},
                         {0.1, -10.0, 0.085696957010654685}, {0.5, -20.0, 0.028174348741051319},
                         {0.9, -50.0, 0.0021753530768569760}};
    err = 0.0;
    for (const auto& c : ml)
        err = std::max(err, std::abs(mittag_leffler(FractionalOrder{c.alpha}, c.z) / c.value - 1.0));
    check("Mittag-Leffler reference values", err, 1e-10);

    err = 0.0;
    for (double alpha : {0.3, 0.5, 0.7})
        err = std::max(err, symbol_relative_error(aaa_fit(FractionalOrder{alpha}, 0.2, 200.0, 1e-8)));
    check("rational fit of z^-alpha on [0.2, 200]", err, 1e-8);

    err = 0.0;
    for (double alpha : {0.3, 0.5, 0.7})
    {
        const auto u = l1_solve_scalar(FractionalOrder{alpha}, 1.0, 1.0, 1e-3, 1000);
        err = std::max(err, std::abs(u.back() - mittag_leffler(FractionalOrder{alpha}, -1.0)));
    }
    check("L1 scheme at t=1 vs Mittag-Leffler", err, 1e-3);

    err = 0.0;
    for (double alpha : {0.3, 0.5, 0.7})
    {
        SimConfig c;
        c.alpha = alpha;
        c.flow = FlowTag::scalar;
        c.init.kind = InitKind::constant;
        c.init.value = 1.0;
        c.dt = 1e-3;
        c.T = 1.0;
        const RunResult r = run(c);
        err = std::max(err, std::abs(r.scalar_values.back() - mittag_leffler(FractionalOrder{alpha}, -1.0)));
    }
    check("compressed scheme at t=1 vs Mittag-Leffler", err, 1e-3);

    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time-fractional gradient flows with kernel compression"};
    app.require_subcommand(1);

    Overrides run_opts;
    auto* run_cmd = app.add_subcommand("run", "run one simulation");
    run_opts.attach(run_cmd);

    Overrides sweep_opts;
    std::vector<double> alphas{0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
    auto* sweep_cmd = app.add_subcommand("sweep", "run the same setup for several alpha");
    sweep_opts.attach(sweep_cmd);
    sweep_cmd->add_option("--alphas", alphas, "fractional orders")->delimiter(',');

    double fit_alpha = 0.5, z_min = 0.2, z_max = 200.0, fit_tol = 1e-8;
    std::string fit_out;
    auto* fit_cmd = app.add_subcommand("fit-kernel", "write the sum-of-exponentials table");
    fit_cmd->add_option("--alpha", fit_alpha, "fractional order in (0, 1]");
    fit_cmd->add_option("--z-min", z_min, "lower end of the fit interval");
    fit_cmd->add_option("--z-max", z_max, "upper end of the fit interval");
    fit_cmd->add_option("--tol", fit_tol, "relative accuracy");
    fit_cmd->add_option("-o,--out", fit_out, "file (default stdout)");

    auto* validate_cmd = app.add_subcommand("validate", "cross-check kernels against reference values");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run_cmd)
            return cmd_run(run_opts);
        if (*sweep_cmd)
            return cmd_sweep(sweep_opts, alphas);
        if (*fit_cmd)
            return cmd_fit(fit_alpha, z_min, z_max, fit_tol, fit_out);
        if (*validate_cmd)
            return cmd_validate();
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
