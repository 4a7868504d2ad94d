#include "fracflow/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace fracflow
{

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value)
{
    std::size_t pos = 0;
    double v = 0.0;
    try
    {
        v = std::stod(value, &pos);
    }
    catch (const std::exception&)
    {
        pos = 0;
    }
    if (pos == 0 || pos != value.size())
    {
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + value + "'");
    }
    return v;
}

long to_integer(const std::string& key, const std::string& value)
{
    const double v = to_double(key, value);
    if (v != std::floor(v))
    {
        throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + value + "'");
    }
    return static_cast<long>(v);
}

} // namespace

GLParams SimConfig::gl_params() const
{
    return GLParams{eps_tilde, beta, mobility};
}

FlowKind SimConfig::flow_kind() const
{
    switch (flow)
    {
    case FlowTag::scalar:
        return ScalarQuadratic{lam};
    case FlowTag::allen_cahn:
        return AllenCahn{gl_params()};
    case FlowTag::cahn_hilliard:
        return CahnHilliard{gl_params()};
    }
    return CahnHilliard{gl_params()};
}

int SimConfig::steps() const
{
    return static_cast<int>(std::llround(T / dt));
}

void SimConfig::validate() const
{
    FractionalOrder{alpha};
    if (!(dt > 0.0 && T > 0.0 && dt < T))
    {
        throw std::invalid_argument("config: need 0 < dt < T");
    }
    if (std::abs(steps() * dt - T) > 1e-9 * T)
    {
        throw std::invalid_argument("config: T must be an integer multiple of dt");
    }
    if (grid < 4)
    {
        throw std::invalid_argument("config: grid must be >= 4");
    }
    if (!(rational_tol > 0.0 && newton_tol > 0.0))
    {
        throw std::invalid_argument("config: tolerances must be positive");
    }
    if (newton_max_iter < 1 || trace_every < 1 || snapshot_every < 0)
    {
        throw std::invalid_argument("config: iteration counts must be positive");
    }
    if (flow == FlowTag::scalar)
    {
        if (!(lam > 0.0))
        {
            throw std::invalid_argument("config: scalar flow needs lam > 0");
        }
        if (init.kind != InitKind::constant)
        {
            throw std::invalid_argument("config: scalar flow needs a constant init");
        }
    }
    else
    {
        gl_params().validate();
    }
    if (init.kind == InitKind::random_uniform && !(init.lo < init.hi))
    {
        throw std::invalid_argument("config: init_lo must be below init_hi");
    }
}

std::string to_string(FlowTag tag)
{
    switch (tag)
    {
    case FlowTag::scalar:
        return "scalar";
    case FlowTag::allen_cahn:
        return "allen-cahn";
    case FlowTag::cahn_hilliard:
        return "cahn-hilliard";
    }
    return "cahn-hilliard";
}

FlowTag parse_flow_tag(const std::string& name)
{
    if (name == "scalar")
        return FlowTag::scalar;
    if (name == "allen-cahn" || name == "allen_cahn" || name == "ac")
        return FlowTag::allen_cahn;
    if (name == "cahn-hilliard" || name == "cahn_hilliard" || name == "ch")
        return FlowTag::cahn_hilliard;
    throw std::invalid_argument("config: unknown flow '" + name + "'");
}

void set_config_value(SimConfig& c, const std::string& key, const std::string& value)
{
    if (key == "alpha")
        c.alpha = to_double(key, value);
    else if (key == "T")
        c.T = to_double(key, value);
    else if (key == "dt")
        c.dt = to_double(key, value);
    else if (key == "grid" || key == "nx")
        c.grid = static_cast<int>(to_integer(key, value));
    else if (key == "eps_tilde")
        c.eps_tilde = to_double(key, value);
    else if (key == "beta")
        c.beta = to_double(key, value);
    else if (key == "mobility")
        c.mobility = to_double(key, value);
    else if (key == "flow")
        c.flow = parse_flow_tag(value);
    else if (key == "lam")
        c.lam = to_double(key, value);
    else if (key == "init")
    {
        if (value == "random" || value == "random_uniform")
            c.init.kind = InitKind::random_uniform;
        else if (value == "constant")
            c.init.kind = InitKind::constant;
        else if (value == "file")
            c.init.kind = InitKind::file;
        else
            throw std::invalid_argument("config: unknown init '" + value + "'");
    }
    else if (key == "init_lo")
        c.init.lo = to_double(key, value);
    else if (key == "init_hi")
        c.init.hi = to_double(key, value);
    else if (key == "seed")
        c.init.seed = static_cast<std::uint64_t>(to_integer(key, value));
    else if (key == "init_value")
        c.init.value = to_double(key, value);
    else if (key == "init_path")
        c.init.path = value;
    else if (key == "rational_tol")
        c.rational_tol = to_double(key, value);
    else if (key == "newton_tol")
        c.newton_tol = to_double(key, value);
    else if (key == "newton_max_iter")
        c.newton_max_iter = static_cast<int>(to_integer(key, value));
    else if (key == "output_dir" || key == "out")
        c.output_dir = value;
    else if (key == "snapshot_every")
        c.snapshot_every = static_cast<int>(to_integer(key, value));
    else if (key == "trace_every")
        c.trace_every = static_cast<int>(to_integer(key, value));
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

SimConfig parse_config(std::istream& is, SimConfig base)
{
    std::string line;
    int lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
        {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty())
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        }
        set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

SimConfig load_config(const std::string& path, SimConfig base)
{
    std::ifstream is(path);
    if (!is)
    {
        throw std::runtime_error("config: cannot open " + path);
    }
    return parse_config(is, std::move(base));
}

} // namespace fracflow
