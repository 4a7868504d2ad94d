#ifndef FRACFLOW_CONFIG_HPP
#define FRACFLOW_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "fracflow/flows.hpp"

namespace fracflow
{

enum class InitKind
{
    random_uniform,
    constant,
    file,
};

struct InitSpec
{
    InitKind kind = InitKind::random_uniform;
    double lo = -1e-3;
    double hi = 1e-3;
    std::uint64_t seed = 42;
    double value = 0.0;
    std::string path; ///< snapshot base name for InitKind::file
};

enum class FlowTag
{
    scalar,
    allen_cahn,
    cahn_hilliard,
};

//
// Experiment parameters. The domain is the unit square, so dx = 1 / grid.
// The rational fit is taken on [1/T, 1/dt].
//
struct SimConfig
{
    double alpha = 0.5;
    double T = 5.0;
    double dt = 0.005;
    int grid = 128;
    double eps_tilde = 0.05;
    double beta = 0.1;
    double mobility = 1.0;
    FlowTag flow = FlowTag::cahn_hilliard;
    double lam = 1.0; ///< rate of the scalar quadratic flow
    InitSpec init;
    double rational_tol = 1e-8;
    double newton_tol = 1e-10;
    int newton_max_iter = 30;
    std::string output_dir;
    int snapshot_every = 0; ///< 0 disables field snapshots
    int trace_every = 1;

    GLParams gl_params() const;
    FlowKind flow_kind() const;
    int steps() const;
    void validate() const;
};

/// Sets one key; throws std::invalid_argument on unknown keys or bad values.
void set_config_value(SimConfig& config, const std::string& key, const std::string& value);

//
// Flat "key = value" text, one pair per line; '#' starts a comment. Keys
// not present keep the values of base.
//
SimConfig parse_config(std::istream& is, SimConfig base = {});
SimConfig load_config(const std::string& path, SimConfig base = {});

std::string to_string(FlowTag tag);
FlowTag parse_flow_tag(const std::string& name);

} // namespace fracflow

#endif // FRACFLOW_CONFIG_HPP
