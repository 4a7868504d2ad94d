#ifndef FRACFLOW_DIAGNOSTICS_HPP
#define FRACFLOW_DIAGNOSTICS_HPP

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace fracflow
{

struct InsufficientDataError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Energy E, history energy H and augmented energy E + H per recorded time.
struct EnergyTrace
{
    std::vector<double> times;
    std::vector<double> E;
    std::vector<double> H;
    std::vector<double> E_aug;

    std::size_t size() const noexcept
    {
        return times.size();
    }
};

/// Appends (t, E, H, E + H); t must exceed the last recorded time.
void record(EnergyTrace& trace, double t, double E, double H);

enum class TraceColumn
{
    energy,
    history,
    augmented,
};

const std::vector<double>& column(const EnergyTrace& trace, TraceColumn c);

struct DissipationReport
{
    std::vector<std::size_t> violations;
    double max_increase = 0.0;

    bool ok() const noexcept
    {
        return violations.empty();
    }
};

//
// Indices i with x[i+1] > x[i] + tol (1 + |x[i]|); max_increase is the largest
// x[i+1] - x[i] seen (negative for strictly decreasing data).
//
DissipationReport check_dissipation(const EnergyTrace& trace, double tol,
                                    TraceColumn c = TraceColumn::augmented);

/// -slope of the least-squares line through (log t, log H) on [t_lo, t_hi].
double fit_slope(const EnergyTrace& trace, double t_lo, double t_hi);

/// "t,E,H,E_aug" header, one row per record, 17 significant digits.
void write_csv(std::ostream& os, const EnergyTrace& trace);

} // namespace fracflow

#endif // FRACFLOW_DIAGNOSTICS_HPP
