#include "fracflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

#include "fracflow/flows.hpp"
#include "fracflow/random.hpp"
#include "fracflow/stepper.hpp"

namespace fracflow
{

namespace
{

bool want_record(int n, int n_steps, int every)
{
    return n % every == 0 || n == n_steps;
}

void write_outputs(const SimConfig& config, const RunResult& r)
{
    namespace fs = std::filesystem;
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "trace.csv");
        write_csv(os, r.trace);
        if (!os)
        {
            throw std::runtime_error("run: cannot write " + (dir / "trace.csv").string());
        }
    }
    {
        std::ofstream os(dir / "soe.txt");
        write_table(os, *r.approx);
        if (!os)
        {
            throw std::runtime_error("run: cannot write " + (dir / "soe.txt").string());
        }
    }
}

std::string snapshot_base(const SimConfig& config, int step)
{
    std::ostringstream name;
    name << "field_" << step;
    return (std::filesystem::path(config.output_dir) / name.str()).string();
}

RunResult run_scalar(const SimConfig& config, std::shared_ptr<const SoeApprox> approx)
{
    const ScalarQuadratic kind{config.lam};
    const int n_steps = config.steps();
    RunResult r;
    r.approx = approx;

    auto bank = make_bank(approx, Eigen::VectorXd::Constant(1, config.init.value).eval());
    const auto energy = [&](const Eigen::VectorXd& u) { return 0.5 * kind.lam * u.squaredNorm(); };
    const auto norm_sq = [](const Eigen::VectorXd& v) { return v.squaredNorm(); };

    r.scalar_values.push_back(config.init.value);
    r.max_abs = std::abs(config.init.value);
    record(r.trace, 0.0, energy(bank.u0), 0.0);
    for (int n = 1; n <= n_steps; ++n)
    {
        bank = semi_implicit_step(std::move(bank), kind, config.dt);
        const Eigen::VectorXd u = reconstruct(bank);
        r.scalar_values.push_back(u[0]);
        r.max_abs = std::max(r.max_abs, std::abs(u[0]));
        if (want_record(n, n_steps, config.trace_every))
        {
            record(r.trace, n * config.dt, energy(u), history_energy(bank, norm_sq));
        }
    }
    return r;
}

RunResult run_field(const SimConfig& config, std::shared_ptr<const SoeApprox> approx,
                    const StepObserver& observer)
{
    const FlowKind kind = config.flow_kind();
    const bool conserves_mass = std::holds_alternative<CahnHilliard>(kind);
    const int n_steps = config.steps();
    NewtonOptions options;
    options.tol = config.newton_tol;
    options.max_iter = config.newton_max_iter;

    RunResult r;
    r.approx = approx;
    auto bank = make_bank(approx, initial_field(config));
    const double mass0 = bank.u0.mean();
    const auto norm_sq = [&](const Field& v) { return flow_norm_sq(kind, v); };

    r.max_abs = bank.u0.max_abs();
    record(r.trace, 0.0, flow_energy(kind, bank.u0), 0.0);
    if (config.snapshot_every > 0 && !config.output_dir.empty())
    {
        std::filesystem::create_directories(config.output_dir);
        write_snapshot(snapshot_base(config, 0), bank.u0, 0.0, config.alpha);
    }

    bool warned = false;
    for (int n = 1; n <= n_steps; ++n)
    {
        StepStats stats;
        try
        {
            bank = semi_implicit_step(std::move(bank), kind, config.dt, options, &stats);
        }
        catch (const StepFailure& e)
        {
            std::ostringstream os;
            os << "step " << n << " (t=" << n * config.dt << "): " << e.what();
            throw RunError(os.str(), n, e.residual);
        }
        r.newton_iterations += stats.newton_iterations;
        r.cg_iterations += stats.cg_iterations;

        const Field u = reconstruct(bank);
        const double t = n * config.dt;
        if (conserves_mass)
        {
            r.max_mass_drift = std::max(r.max_mass_drift, std::abs(u.mean() - mass0));
        }
        r.max_abs = std::max(r.max_abs, u.max_abs());
        if (r.max_abs > 1.1 && !warned)
        {
            std::cerr << "warning: max|u| = " << r.max_abs << " exceeds 1.1 at step " << n << '\n';
            warned = true;
        }
        if (want_record(n, n_steps, config.trace_every))
        {
            record(r.trace, t, flow_energy(kind, u), history_energy(bank, norm_sq));
        }
        if (config.snapshot_every > 0 && !config.output_dir.empty() &&
            (n % config.snapshot_every == 0 || n == n_steps))
        {
            write_snapshot(snapshot_base(config, n), u, t, config.alpha);
        }
        if (observer)
        {
            observer(n, t, u);
        }
        if (n == n_steps)
        {
            r.final_field = u;
        }
    }
    return r;
}

} // namespace

Field initial_field(const SimConfig& config)
{
    const double dx = 1.0 / config.grid;
    switch (config.init.kind)
    {
    case InitKind::constant:
        return Field(config.grid, config.grid, dx, config.init.value);
    case InitKind::file:
    {
        Field f = read_snapshot(config.init.path);
        if (f.nx() != config.grid || f.ny() != config.grid)
        {
            throw std::invalid_argument("initial_field: snapshot grid does not match config");
        }
        return f;
    }
    case InitKind::random_uniform:
        break;
    }
    Xoshiro256ss rng(config.init.seed);
    Field::Array v(config.grid, config.grid);
    for (Eigen::Index j = 0; j < v.rows(); ++j)
    {
        for (Eigen::Index i = 0; i < v.cols(); ++i)
        {
            v(j, i) = rng.uniform(config.init.lo, config.init.hi);
        }
    }
    return Field(std::move(v), dx);
}

RunResult run(const SimConfig& config, const StepObserver& observer)
{
    config.validate();
    auto approx = std::make_shared<const SoeApprox>(
        aaa_fit(FractionalOrder{config.alpha}, 1.0 / config.T, 1.0 / config.dt,
                config.rational_tol));

    RunResult r = config.flow == FlowTag::scalar ? run_scalar(config, approx)
                                                 : run_field(config, approx, observer);
    if (!config.output_dir.empty())
    {
        write_outputs(config, r);
    }
    return r;
}

std::vector<SweepEntry> sweep(const std::vector<SimConfig>& configs)
{
    if (configs.empty())
    {
        throw std::invalid_argument("sweep: no configurations");
    }
    std::vector<SweepEntry> entries;
    entries.reserve(configs.size());
    for (const auto& c : configs)
    {
        SweepEntry e;
        e.alpha = c.alpha;
        try
        {
            e.result = run(c);
        }
        catch (const std::exception& ex)
        {
            e.error = ex.what();
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries)
{
    const auto old_precision = os.precision(17);
    os << "alpha,t,E,H,E_aug\n";
    for (const auto& e : entries)
    {
        if (!e.result)
        {
            continue;
        }
        const EnergyTrace& tr = e.result->trace;
        for (std::size_t i = 0; i < tr.size(); ++i)
        {
            os << e.alpha << ',' << tr.times[i] << ',' << tr.E[i] << ',' << tr.H[i] << ','
               << tr.E_aug[i] << '\n';
        }
    }
    os.precision(old_precision);
}

} // namespace fracflow
