#include "fracflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace fracflow
{

void record(EnergyTrace& trace, double t, double E, double H)
{
    if (!trace.times.empty() && !(t > trace.times.back()))
    {
        std::ostringstream os;
        os.precision(17);
        os << "record: time " << t << " does not exceed " << trace.times.back();
        throw std::invalid_argument(os.str());
    }
    trace.times.push_back(t);
    trace.E.push_back(E);
    trace.H.push_back(H);
    trace.E_aug.push_back(E + H);
}

const std::vector<double>& column(const EnergyTrace& trace, TraceColumn c)
{
    switch (c)
    {
    case TraceColumn::energy:
        return trace.E;
    case TraceColumn::history:
        return trace.H;
    case TraceColumn::augmented:
        return trace.E_aug;
    }
    return trace.E_aug;
}

DissipationReport check_dissipation(const EnergyTrace& trace, double tol, TraceColumn c)
{
    const auto& x = column(trace, c);
    if (x.size() < 2)
    {
        throw InsufficientDataError("check_dissipation: need at least two records");
    }
    DissipationReport report;
    report.max_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
    {
        const double inc = x[i + 1] - x[i];
        report.max_increase = std::max(report.max_increase, inc);
        if (inc > tol * (1.0 + std::abs(x[i])))
        {
            report.violations.push_back(i + 1);
        }
    }
    return report;
}

double fit_slope(const EnergyTrace& trace, double t_lo, double t_hi)
{
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < trace.size(); ++i)
    {
        const double t = trace.times[i];
        if (t < t_lo || t > t_hi)
        {
            continue;
        }
        if (!(trace.H[i] > 0.0) || !(t > 0.0))
        {
            std::ostringstream os;
            os << "fit_slope: nonpositive history energy " << trace.H[i] << " at t=" << t;
            throw std::domain_error(os.str());
        }
        const double x = std::log(t);
        const double y = std::log(trace.H[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 10)
    {
        throw InsufficientDataError("fit_slope: fewer than 10 samples in the window");
    }
    const double nn = static_cast<double>(n);
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    return -slope;
}

void write_csv(std::ostream& os, const EnergyTrace& trace)
{
    const auto old_precision = os.precision(17);
    os << "t,E,H,E_aug\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
    {
        os << trace.times[i] << ',' << trace.E[i] << ',' << trace.H[i] << ','
           << trace.E_aug[i] << '\n';
    }
    os.precision(old_precision);
}

} // namespace fracflow
