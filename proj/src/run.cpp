#include "schwinger/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "schwinger/engine.hpp"
#include "schwinger/error.hpp"
#include "schwinger/format.hpp"
#include "schwinger/gates.hpp"
#include "schwinger/noise.hpp"
#include "schwinger/observables.hpp"
#include "schwinger/timeseries.hpp"
#include "schwinger/trotter.hpp"

#ifndef SCHWINGER_VERSION
#define SCHWINGER_VERSION "0.0.0"
#endif
#ifndef SCHWINGER_GIT_DESCRIBE
#define SCHWINGER_GIT_DESCRIBE "unknown"
#endif

namespace schwinger {

namespace fs = std::filesystem;
using nlohmann::json;

const char* tool_version() { return SCHWINGER_VERSION; }
const char* build_describe() { return SCHWINGER_GIT_DESCRIBE; }

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e)) return 2;
    if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const FitError*>(&e)) return 3;
    return 1;
}

namespace {

class Output {
  public:
    explicit Output(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    std::string path(const std::string& name) {
        files.push_back(name);
        return (dir_ / name).string();
    }

    std::vector<std::string> files;

  private:
    fs::path dir_;
};

StateVector initial_state(const RunConfig& c) {
    if (c.initial == "snapshot") {
        auto psi = load_snapshot(c.initial_snapshot);
        if (psi.n_sites() != c.model.n_sites)
            throw ConfigError("initial_snapshot", "snapshot has " + std::to_string(psi.n_sites()) +
                                                      " sites, model has " + std::to_string(c.model.n_sites));
        return psi;
    }
    return StateVector::basis(bare_vacuum(c.model.n_sites));
}

int cut_of(const RunConfig& c) { return c.entropy_cut == 0 ? c.model.n_sites / 2 : c.entropy_cut; }

// Pointwise observables of a state sequence; `field` is handled separately.
std::vector<TimeSeries> observe(const RunConfig& c, const std::vector<double>& times,
                                const std::vector<StateVector>& states, const StateVector& psi0,
                                const std::string& unit) {
    std::vector<TimeSeries> out;
    for (const auto& name : c.observables) {
        if (name == "field") continue;
        TimeSeries ts;
        ts.name = name;
        ts.time_unit = unit;
        ts.times = times;
        for (const auto& psi : states) {
            double v = 0.0;
            if (name == "nu") v = particle_density(psi);
            else if (name == "loschmidt") v = vacuum_persistence(psi0, psi).loschmidt;
            else if (name == "lambda") v = vacuum_persistence(psi0, psi).rate;
            else if (name == "entropy") v = half_chain_entropy(psi, cut_of(c));
            else if (name == "magnetization") v = total_magnetization(psi);
            ts.values.push_back(v);
        }
        out.push_back(std::move(ts));
    }
    return out;
}

void write_field(Output& o, const RunConfig& c, const std::vector<double>& times,
                 const std::vector<StateVector>& states, const std::string& unit) {
    std::ofstream f(o.path("field.csv"));
    f << unit;
    for (int n = 1; n < c.model.n_sites; ++n) f << ",L" << n;
    f << '\n';
    for (std::size_t k = 0; k < times.size(); ++k) {
        f << format_double(times[k]);
        for (double v : electric_field_expectation(states[k], c.model.eps0)) f << ',' << format_double(v);
        f << '\n';
    }
}

bool wants(const RunConfig& c, const std::string& name) {
    return std::find(c.observables.begin(), c.observables.end(), name) != c.observables.end();
}

std::vector<StateVector> exact_states(const RunConfig& c, const std::vector<double>& times, const StateVector& psi0) {
    const SpinHamiltonian h(build_hamiltonian(c.model));
    EvolveOptions eo;
    eo.tol = c.tol;
    std::vector<StateVector> states;
    StateVector psi = psi0;
    double t_prev = 0.0;
    for (double t : times) {
        if (t > t_prev) psi = evolve_exact(h, psi, t - t_prev, eo);
        t_prev = t;
        states.push_back(psi);
    }
    return states;
}

int cycles_up_to(double stop, double cycle_time) {
    return static_cast<int>(std::floor(stop / cycle_time + 1e-9));
}

json gate_counts_json(const ModelParams& p, const TrotterSchedule& s) {
    const auto g = count_gates(p, s);
    return {{"entangling_gates_per_cycle", g.entangling_windows},
            {"section1_windows", g.section1_windows},
            {"pair_windows", g.pair_windows},
            {"local_rotations_per_cycle", g.local_rotations},
            {"hide_unhide_ops_per_cycle", g.hide_ops},
            {"nominal_time_steps_per_cycle", 2 * p.n_sites - 3},
            {"nominal_gate_ops_per_cycle", 2 * p.n_sites - 2}};
}

std::vector<Observable> noise_observables(const RunConfig& c) {
    std::vector<Observable> out;
    for (const auto& name : c.observables) {
        if (name == "nu") out.push_back(Observable::particle_density);
        else if (name == "loschmidt") out.push_back(Observable::loschmidt);
        else if (name == "lambda") out.push_back(Observable::rate_function);
        else if (name == "entropy") out.push_back(Observable::entropy);
        else if (name == "magnetization") out.push_back(Observable::magnetization);
    }
    return out;
}

json hiding_json(const HidingStats& h, double p) {
    return {{"p", p},
            {"n_shots", h.n_shots},
            {"steps_per_shot", h.n_steps},
            {"detected_rate", h.detected_rate},
            {"detected_stderr", h.detected_stderr},
            {"undetected_rate", h.undetected_rate},
            {"undetected_stderr", h.undetected_stderr},
            {"survival_rate", h.survival_rate},
            {"survival_stderr", h.survival_stderr},
            {"residual_error_rate", h.residual_error_rate}};
}

} // namespace

RunSummary run(const RunConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Output o(c.out);
    RunSummary summary;
    json extra = json::object();

    switch (c.kind) {
    case ExperimentKind::evolve:
    case ExperimentKind::entropy: {
        const auto psi0 = initial_state(c);
        const auto times = c.time.values();
        const auto states = exact_states(c, times, psi0);
        for (const auto& ts : observe(c, times, states, psi0, "wt")) write_csv(o.path(ts.name + ".csv"), ts);
        if (wants(c, "field")) write_field(o, c, times, states, "wt");
        if (c.kind == ExperimentKind::entropy) {
            std::ofstream f(o.path("entropy_cuts.csv"));
            f << "wt";
            for (int k = 1; k < c.model.n_sites; ++k) f << ",S" << k;
            f << '\n';
            for (std::size_t i = 0; i < times.size(); ++i) {
                f << format_double(times[i]);
                for (int k = 1; k < c.model.n_sites; ++k) f << ',' << format_double(half_chain_entropy(states[i], k));
                f << '\n';
            }
        }
        save_snapshot(o.path("final_state.swsv"), states.back());
        break;
    }
    case ExperimentKind::trotter: {
        const auto psi0 = initial_state(c);
        const int n_cycles = cycles_up_to(c.time.values().back(), c.trotter->cycle_time);
        const auto s = make_schedule(c.model, c.trotter->cycle_time, n_cycles, c.trotter->dt_III);
        summary.warnings.insert(summary.warnings.end(), s.warnings.begin(), s.warnings.end());
        const auto traj = run_schedule(s, psi0);
        for (const auto& ts : observe(c, traj.times, traj.states, psi0, "wt")) write_csv(o.path(ts.name + ".csv"), ts);
        if (wants(c, "field")) write_field(o, c, traj.times, traj.states, "wt");
        {
            std::ofstream f(o.path("cycle.gates"));
            f << format_sequence(s.cycle);
        }
        save_snapshot(o.path("final_state.swsv"), traj.states.back());
        extra["schedule"] = {{"cycle_time", s.cycle_time}, {"dt_I", s.dt_I},       {"dt_II", s.dt_II},
                             {"dt_III", s.dt_III},         {"n_cycles", s.n_cycles}, {"j0", s.params.j0}};
        extra["gate_counts"] = gate_counts_json(c.model, s);
        break;
    }
    case ExperimentKind::noise: {
        const auto psi0 = initial_state(c);
        const int n_cycles = cycles_up_to(c.time.values().back(), c.trotter->cycle_time);
        const auto s = make_schedule(c.model, c.trotter->cycle_time, n_cycles, c.trotter->dt_III);
        summary.warnings.insert(summary.warnings.end(), s.warnings.begin(), s.warnings.end());
        for (const auto& ts : ensemble_average(s, *c.noise, noise_observables(c), psi0, c.threads))
            write_csv(o.path(ts.name + ".csv"), ts);
        if (c.noise->hide_fail_p > 0.0) {
            const auto h = hiding_failure_monte_carlo(s, c.noise->hide_fail_p, c.seed, c.hiding_shots);
            std::ofstream f(o.path("hiding.json"));
            f << hiding_json(h, c.noise->hide_fail_p).dump(2) << '\n';
        }
        extra["schedule"] = {{"cycle_time", s.cycle_time}, {"dt_I", s.dt_I},       {"dt_II", s.dt_II},
                             {"dt_III", s.dt_III},         {"n_cycles", s.n_cycles}, {"j0", s.params.j0}};
        extra["gate_counts"] = gate_counts_json(c.model, s);
        extra["rng"] = "trajectory i uses counter stream i of the seed";
        break;
    }
    case ExperimentKind::compare: {
        const auto psi0 = initial_state(c);
        const auto times = c.time.values();
        const auto exact = observe(c, times, exact_states(c, times, psi0), psi0, "wt");
        std::vector<std::vector<TimeSeries>> columns(exact.size());
        for (std::size_t q = 0; q < exact.size(); ++q) {
            columns[q].push_back(exact[q]);
            columns[q].back().name = "exact";
        }
        json counts = json::object();
        for (double T : c.compare.cycle_times) {
            const auto s = make_schedule(c.model, T, cycles_up_to(times.back(), T));
            for (const auto& w : s.warnings) summary.warnings.push_back("T=" + format_double(T) + ": " + w);
            counts[format_double(T)] = gate_counts_json(c.model, s);
            const auto traj = run_schedule(s, psi0);
            const auto trot = observe(c, traj.times, traj.states, psi0, "wt");
            for (std::size_t q = 0; q < trot.size(); ++q) {
                columns[q].push_back(trot[q]);
                columns[q].back().name = "trotter_T=" + format_double(T);
            }
            if (c.noise) {
                const auto noisy = ensemble_average(s, *c.noise, noise_observables(c), psi0, c.threads);
                for (std::size_t q = 0; q < noisy.size(); ++q) {
                    auto mean = noisy[q];
                    mean.name = "noisy_T=" + format_double(T);
                    mean.stderrs.clear();
                    auto err = noisy[q];
                    err.name = "noisy_T=" + format_double(T) + "_stderr";
                    err.values = err.stderrs;
                    err.stderrs.clear();
                    columns[q].push_back(std::move(mean));
                    columns[q].push_back(std::move(err));
                }
            }
        }
        for (std::size_t q = 0; q < exact.size(); ++q)
            write_joint_csv(o.path("compare_" + exact[q].name + ".csv"), "wt", columns[q]);
        extra["gate_counts"] = counts;
        break;
    }
    case ExperimentKind::continuum: {
        const auto result = continuum_sweep(*c.continuum);
        write_sweep(result, c.out);
        json spacings = json::array();
        for (const auto& r : result.spacings) {
            const std::string dir = "a_" + format_double(r.spacing.a);
            for (int n : r.sizes) o.files.push_back(dir + "/kappa_N" + std::to_string(n) + ".csv");
            o.files.push_back(dir + "/kappa_inf.csv");
            o.files.push_back(dir + "/summary.json");
            for (std::size_t k = 0; k < r.extrapolations.size(); ++k)
                o.files.push_back(dir + "/extrapolations/t" + std::to_string(k) + ".json");
            for (const auto& w : r.warnings) summary.warnings.push_back(dir + ": " + w);
            spacings.push_back({{"a", r.spacing.a}, {"m_over_w", r.m_over_w}, {"n_unstable", r.n_unstable}});
        }
        extra["spacings"] = spacings;
        std::vector<int> sizes = c.continuum->sizes;
        json prep = json::object();
        for (int n : sizes)
            prep[std::to_string(n)] = {{"pair_windows_per_step", n - 1},
                                       {"entangling_gates_per_step", 2 * (n - 1)},
                                       {"nominal_gate_ops_per_step", n}};
        extra["preparation_gate_counts"] = prep;
        break;
    }
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    summary.files = o.files;
    summary.manifest = {{"tool", "schwinger"},
                        {"version", tool_version()},
                        {"git_describe", build_describe()},
                        {"kind", to_string(c.kind)},
                        {"config", to_json(c)},
                        {"seed", c.seed},
                        {"threads", c.threads},
                        {"wall_time_s", wall},
                        {"warnings", summary.warnings},
                        {"files", summary.files}};
    summary.manifest.update(extra);
    std::ofstream f(fs::path(c.out) / "manifest.json");
    f << summary.manifest.dump(2) << '\n';
    return summary;
}

} // namespace schwinger
