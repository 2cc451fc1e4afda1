#include "schwinger/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "schwinger/error.hpp"
#include "schwinger/format.hpp"

namespace schwinger {

void TimeSeries::validate() const {
    if (times.size() != values.size())
        throw ParameterError("time series '" + name + "': times and values differ in length");
    if (!stderrs.empty() && stderrs.size() != values.size())
        throw ParameterError("time series '" + name + "': stderr column has the wrong length");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw ParameterError("time series '" + name + "': times must be strictly increasing");
}

void write_csv(std::ostream& out, const TimeSeries& series) {
    series.validate();
    const bool ensemble = !series.stderrs.empty();
    out << series.time_unit << ',' << (ensemble ? "mean,stderr,n_traj" : series.name) << '\n';
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        out << format_double(series.times[k]) << ',' << format_double(series.values[k]);
        if (ensemble) out << ',' << format_double(series.stderrs[k]) << ',' << series.n_traj;
        out << '\n';
    }
}

void write_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_csv(out, series);
}

void write_joint_csv(std::ostream& out, const std::string& time_unit,
                     const std::vector<TimeSeries>& columns) {
    std::vector<double> grid;
    for (const auto& c : columns) {
        c.validate();
        grid.insert(grid.end(), c.times.begin(), c.times.end());
    }
    std::sort(grid.begin(), grid.end());
    std::vector<double> merged;
    const auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    for (double t : grid)
        if (merged.empty() || !close(merged.back(), t)) merged.push_back(t);

    out << time_unit;
    for (const auto& c : columns) out << ',' << c.name;
    out << '\n';
    std::vector<std::size_t> cursor(columns.size(), 0);
    for (double t : merged) {
        out << format_double(t);
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out << ',';
            auto& k = cursor[j];
            const auto& c = columns[j];
            if (k < c.times.size() && close(c.times[k], t)) out << format_double(c.values[k++]);
        }
        out << '\n';
    }
}

void write_joint_csv(const std::string& path, const std::string& time_unit,
                     const std::vector<TimeSeries>& columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_joint_csv(out, time_unit, columns);
}

std::vector<double> uniform_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop >= start)) throw ParameterError("time grid needs step > 0 and stop >= start");
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) grid.push_back(start + k * step);
    return grid;
}

} // namespace schwinger
