#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace schwinger {

/// Observable sampled on a time grid. `stderrs` is filled only for ensemble averages.
struct TimeSeries {
    std::string name;
    /// "wt" or "mt": which dimensionless time the grid uses.
    std::string time_unit = "wt";
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> stderrs;
    int n_traj = 0;
    nlohmann::json metadata = nlohmann::json::object();

    /// Throws ParameterError unless times are strictly increasing and lengths agree.
    void validate() const;
};

/// Header `<unit>,<name>` or, for ensembles, `<unit>,mean,stderr,n_traj`.
void write_csv(std::ostream& out, const TimeSeries& series);
void write_csv(const std::string& path, const TimeSeries& series);

/// Several curves on the union of their grids; cells are left empty where a
/// curve has no sample. Times closer than 1e-9 (relative) are merged.
void write_joint_csv(std::ostream& out, const std::string& time_unit,
                     const std::vector<TimeSeries>& columns);
void write_joint_csv(const std::string& path, const std::string& time_unit,
                     const std::vector<TimeSeries>& columns);

/// Evenly spaced grid start, start + step, ... up to stop (inclusive within 1e-9 step).
std::vector<double> uniform_grid(double start, double stop, double step);

} // namespace schwinger
