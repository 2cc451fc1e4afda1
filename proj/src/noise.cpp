#include "schwinger/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "schwinger/error.hpp"
#include "schwinger/observables.hpp"
#include "schwinger/parallel.hpp"
#include "schwinger/random.hpp"

namespace schwinger {

void NoiseParams::validate() const {
    if (!(delta_j_rel >= 0.0)) throw ParameterError("delta_j_rel must be >= 0");
    if (!(delta_w_rel >= 0.0)) throw ParameterError("delta_w_rel must be >= 0");
    if (!(hidden_factor >= 0.0)) throw ParameterError("hidden_factor must be >= 0");
    if (!(hide_fail_p >= 0.0 && hide_fail_p < 1.0)) throw ParameterError("hide_fail_p must lie in [0, 1)");
    if (n_traj < 1) throw ParameterError("n_traj must be >= 1");
}

NoiseSample sample_noise(const NoiseParams& np, double j0, std::uint64_t trajectory_index) {
    StreamRng rng(np.seed, trajectory_index);
    NoiseSample s;
    s.dj = rng.symmetric(np.delta_j_rel * j0);
    s.dw = rng.symmetric(np.delta_w_rel * j0);
    return s;
}

GateSequence perturb_sequence(const GateSequence& seq, const NoiseSample& s, const NoiseParams& np,
                              double j0, int n_sites) {
    if (s.dj == 0.0 && s.dw == 0.0) return seq;
    const double scale = (j0 + s.dj) / j0;
    GateSequence out;
    out.reserve(seq.size() * 2);
    HiddenSet hidden(static_cast<std::size_t>(n_sites), false);
    for (const auto& g : seq) {
        if (g.kind == GateKind::hide || g.kind == GateKind::unhide)
            for (int site : g.sites) hidden.at(site - 1) = g.kind == GateKind::hide;

        if (g.kind != GateKind::ms_xx) {
            out.push_back(g);
            continue;
        }
        auto scaled = g;
        scaled.angles[0] *= scale;
        out.push_back(std::move(scaled));
        if (s.dw != 0.0 && g.duration > 0.0) {
            std::vector<int> sites(n_sites);
            std::vector<double> angles(n_sites);
            for (int n = 1; n <= n_sites; ++n) {
                sites[n - 1] = n;
                angles[n - 1] = s.dw * g.duration * (hidden[n - 1] ? np.hidden_factor : 1.0);
            }
            out.push_back(GateOp::dephase(std::move(sites), std::move(angles)));
        }
    }
    return out;
}

const char* to_string(Observable o) {
    switch (o) {
    case Observable::particle_density: return "nu";
    case Observable::loschmidt: return "loschmidt";
    case Observable::rate_function: return "lambda";
    case Observable::entropy: return "entropy";
    case Observable::magnetization: return "magnetization";
    }
    return "?";
}

namespace {

// Per-trajectory raw values: [time][quantity], quantities nu, L, S, M.
constexpr int n_raw = 4;

std::vector<std::array<double, n_raw>> trajectory_values(const Trajectory& traj, const StateVector& psi0,
                                                         bool need_entropy) {
    std::vector<std::array<double, n_raw>> values(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const auto& psi = traj.states[k];
        values[k][0] = particle_density(psi);
        values[k][1] = std::norm(overlap(psi0, psi));
        values[k][2] = need_entropy ? half_chain_entropy(psi, psi.n_sites() / 2) : 0.0;
        values[k][3] = total_magnetization(psi);
    }
    return values;
}

} // namespace

std::vector<TimeSeries> ensemble_average(const TrotterSchedule& schedule, const NoiseParams& np,
                                         const std::vector<Observable>& observables,
                                         const StateVector& psi0, int threads) {
    np.validate();
    const int n_sites = schedule.params.n_sites;
    if (psi0.n_sites() != n_sites) throw ParameterError("initial state does not match the schedule");
    const bool need_entropy =
        std::find(observables.begin(), observables.end(), Observable::entropy) != observables.end();

    std::vector<std::vector<std::array<double, n_raw>>> per_traj(np.n_traj);
    std::vector<double> times;
    parallel_for(static_cast<std::size_t>(np.n_traj), threads, [&](std::size_t i) {
        const auto sample = sample_noise(np, schedule.params.j0, i);
        const auto cycle = perturb_sequence(schedule.cycle, sample, np, schedule.params.j0, n_sites);
        const auto traj = run_cycles(cycle, schedule.cycle_time, schedule.n_cycles, psi0);
        per_traj[i] = trajectory_values(traj, psi0, need_entropy);
    });
    for (int c = 0; c <= schedule.n_cycles; ++c) times.push_back(c * schedule.cycle_time);

    const std::size_t n_times = times.size();
    const double n = np.n_traj;
    std::array<std::vector<double>, n_raw> mean, err;
    for (int q = 0; q < n_raw; ++q) {
        mean[q].assign(n_times, 0.0);
        err[q].assign(n_times, 0.0);
        for (std::size_t k = 0; k < n_times; ++k) {
            // Running mean: identical trajectories reproduce their value exactly.
            double m = 0.0, seen = 0.0;
            for (const auto& t : per_traj) m += (t[k][q] - m) / ++seen;
            double ss = 0.0;
            for (const auto& t : per_traj) ss += (t[k][q] - m) * (t[k][q] - m);
            mean[q][k] = m;
            err[q][k] = np.n_traj > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
        }
    }

    nlohmann::json meta = {{"n_sites", n_sites},
                           {"cycle_time", schedule.cycle_time},
                           {"n_cycles", schedule.n_cycles},
                           {"seed", np.seed},
                           {"delta_j_rel", np.delta_j_rel},
                           {"delta_w_rel", np.delta_w_rel},
                           {"hidden_factor", np.hidden_factor}};
    std::vector<TimeSeries> out;
    for (auto o : observables) {
        TimeSeries ts;
        ts.name = to_string(o);
        ts.times = times;
        ts.n_traj = np.n_traj;
        ts.metadata = meta;
        const auto take = [&](int q) {
            ts.values = mean[q];
            ts.stderrs = err[q];
        };
        switch (o) {
        case Observable::particle_density: take(0); break;
        case Observable::loschmidt: take(1); break;
        case Observable::entropy: take(2); break;
        case Observable::magnetization: take(3); break;
        case Observable::rate_function:
            ts.values.resize(n_times);
            ts.stderrs.resize(n_times);
            for (std::size_t k = 0; k < n_times; ++k) {
                const double l = std::max(mean[1][k], loschmidt_floor);
                ts.values[k] = rate_function_lambda(mean[1][k], n_sites);
                ts.stderrs[k] = err[1][k] / (n_sites * l);
            }
            break;
        }
        out.push_back(std::move(ts));
    }
    return out;
}

std::vector<std::vector<int>> hiding_steps(const GateSequence& cycle, int n_cycles) {
    std::vector<std::vector<int>> one;
    for (const auto& g : cycle)
        if (g.kind == GateKind::hide && !g.sites.empty()) one.push_back(g.sites);
    std::vector<std::vector<int>> steps;
    for (int c = 0; c < n_cycles; ++c) steps.insert(steps.end(), one.begin(), one.end());
    return steps;
}

HidingStats hiding_failure_monte_carlo(const std::vector<std::vector<int>>& steps, double p,
                                       std::uint64_t seed, long n_shots) {
    if (!(p >= 0.0 && p < 1.0)) throw ParameterError("failure probability must lie in [0, 1)");
    if (n_shots < 1) throw ParameterError("n_shots must be >= 1");

    HidingStats stats;
    stats.n_shots = n_shots;
    stats.n_steps = static_cast<long>(steps.size());
    long detected = 0, kept_with_error = 0;
    double paired_sum = 0.0, paired_sq = 0.0;
    for (long shot = 0; shot < n_shots; ++shot) {
        StreamRng rng(seed, static_cast<std::uint64_t>(shot));
        bool single = false;
        long paired_in_shot = 0;
        for (const auto& step : steps) {
            long paired = 0;
            for (std::size_t ion = 0; ion < step.size(); ++ion) {
                const bool hide_failed = rng.bernoulli(p);
                const bool unhide_failed = rng.bernoulli(p);
                if (hide_failed && unhide_failed) ++paired;
                else if (hide_failed || unhide_failed) single = true;
            }
            paired_sum += paired;
            paired_sq += static_cast<double>(paired) * paired;
            paired_in_shot += paired;
        }
        if (single) ++detected;
        else if (paired_in_shot > 0) ++kept_with_error;
    }

    const double shots = static_cast<double>(n_shots);
    stats.detected_rate = detected / shots;
    stats.detected_stderr = std::sqrt(stats.detected_rate * (1.0 - stats.detected_rate) / shots);
    stats.survival_rate = 1.0 - stats.detected_rate;
    stats.survival_stderr = stats.detected_stderr;
    const long kept = n_shots - detected;
    stats.residual_error_rate = kept > 0 ? static_cast<double>(kept_with_error) / kept : 0.0;
    if (!steps.empty()) {
        const double trials = shots * static_cast<double>(steps.size());
        stats.undetected_rate = paired_sum / trials;
        const double var = std::max(0.0, paired_sq / trials - stats.undetected_rate * stats.undetected_rate);
        stats.undetected_stderr = std::sqrt(var / trials);
    }
    return stats;
}

HidingStats hiding_failure_monte_carlo(const TrotterSchedule& schedule, double p, std::uint64_t seed,
                                       long n_shots) {
    return hiding_failure_monte_carlo(hiding_steps(schedule.cycle, std::max(schedule.n_cycles, 1)), p,
                                      seed, n_shots);
}

Postselection postselect_magnetization(const std::vector<BasisState>& samples, int target_m) {
    Postselection out;
    for (const auto& s : samples)
        if (s.magnetization() == target_m) out.kept.push_back(s);
    out.acceptance = samples.empty() ? 0.0 : static_cast<double>(out.kept.size()) / samples.size();
    return out;
}

std::vector<BasisState> sample_measurements(const StateVector& psi, long n_shots, std::uint64_t seed) {
    std::vector<double> cumulative(psi.dim());
    double running = 0.0;
    for (std::size_t i = 0; i < psi.dim(); ++i) cumulative[i] = running += std::norm(psi[i]);
    std::vector<BasisState> out;
    out.reserve(static_cast<std::size_t>(std::max(n_shots, 0L)));
    for (long shot = 0; shot < n_shots; ++shot) {
        const double u = unit_interval(seed, static_cast<std::uint64_t>(shot), 0) * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        out.push_back(basis_state_of(static_cast<std::uint64_t>(it - cumulative.begin()), psi.n_sites()));
    }
    return out;
}

} // namespace schwinger
