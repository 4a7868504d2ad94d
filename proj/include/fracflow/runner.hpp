#ifndef FRACFLOW_RUNNER_HPP
#define FRACFLOW_RUNNER_HPP

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracflow/config.hpp"
#include "fracflow/diagnostics.hpp"
#include "fracflow/fields.hpp"
#include "fracflow/rational.hpp"

namespace fracflow
{

// A failed time step, tagged with the step index and the last residual.
struct RunError : std::runtime_error
{
    RunError(const std::string& what, int step, double residual)
        : std::runtime_error(what), step(step), residual(residual)
    {
    }

    int step;
    double residual;
};

struct RunResult
{
    EnergyTrace trace;
    std::shared_ptr<const SoeApprox> approx;
    std::optional<Field> final_field;   ///< grid flows
    std::vector<double> scalar_values; ///< scalar flow, one entry per step incl. t = 0
    double max_mass_drift = 0.0;
    double max_abs = 0.0;
    int newton_iterations = 0;
    int cg_iterations = 0;
};

/// Called after every step with the step index n >= 1, time n dt and u^n.
using StepObserver = std::function<void(int step, double t, const Field& u)>;

/// Initial field described by config.init on a grid x grid mesh of the unit square.
Field initial_field(const SimConfig& config);

//
// Fits the kernel on [1/T, 1/dt], steps to T and records E and H every
// trace_every steps (always including t = 0 and t = T). When output_dir is
// set, writes trace.csv, soe.txt and field_<step>.bin/.meta snapshots.
//
RunResult run(const SimConfig& config, const StepObserver& observer = {});

struct SweepEntry
{
    double alpha = 0.0;
    std::optional<RunResult> result;
    std::string error; ///< empty on success
};

/// Runs every config in order; a failing run is recorded and the sweep goes on.
std::vector<SweepEntry> sweep(const std::vector<SimConfig>& configs);

/// "alpha,t,E,H,E_aug" rows for every successful run.
void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries);

} // namespace fracflow

#endif // FRACFLOW_RUNNER_HPP
