#pragma once

#include <cstdint>
#include <vector>

#include "schwinger/gates.hpp"
#include "schwinger/model.hpp"
#include "schwinger/timeseries.hpp"
#include "schwinger/trotter.hpp"

namespace schwinger {

/// Quasi-static experimental imperfections. Widths are half-widths of uniform
/// distributions in units of J0.
struct NoiseParams {
    double delta_j_rel = 0.0;   // dJ  in [-delta_j_rel, delta_j_rel] J0
    double delta_w_rel = 0.0;   // dw  in [-delta_w_rel, delta_w_rel] J0
    double hidden_factor = 1.5; // dw' = hidden_factor * dw on hidden ions
    double hide_fail_p = 0.0;
    int n_traj = 200;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One trajectory's realization, constant for the whole run.
struct NoiseSample {
    double dj = 0.0;
    double dw = 0.0;
};

/// Deterministic in (seed, trajectory_index): trajectory i draws from
/// counter stream i of `seed` (see random.hpp), dj first, then dw.
NoiseSample sample_noise(const NoiseParams& np, double j0, std::uint64_t trajectory_index);

/// Scales every MS angle by (J0 + dJ)/J0 and appends, after each timed
/// window of length D, a dephasing phase dw D on active ions and
/// hidden_factor dw D on hidden ions. A zero sample returns `seq` unchanged.
GateSequence perturb_sequence(const GateSequence& seq, const NoiseSample& s, const NoiseParams& np,
                              double j0, int n_sites);

enum class Observable { particle_density, loschmidt, rate_function, entropy, magnetization };

const char* to_string(Observable o);

/// Trajectory-averaged observables at the cycle boundaries. Per time point:
/// mean and standard error (sample standard deviation / sqrt(n_traj)). The
/// rate function is derived from the averaged Loschmidt echo, its error by
/// linear propagation. Results do not depend on `threads`.
std::vector<TimeSeries> ensemble_average(const TrotterSchedule& schedule, const NoiseParams& np,
                                         const std::vector<Observable>& observables,
                                         const StateVector& psi0, int threads = 1);

struct HidingStats {
    long n_shots = 0;
    long n_steps = 0;  // hide/unhide steps per shot
    /// Fraction of shots in which some ion had exactly one failed pulse of a
    /// hide/unhide pair (population left in a hiding level); these are discarded.
    double detected_rate = 0.0;
    double detected_stderr = 0.0;
    /// Mean number of undetectable events (hide and unhide both failing on the
    /// same ion in the same step) per step; p^2 * (ions per step) in expectation.
    double undetected_rate = 0.0;
    double undetected_stderr = 0.0;
    /// Fraction of shots kept by postselection.
    double survival_rate = 0.0;
    double survival_stderr = 0.0;
    /// Fraction of kept shots that nevertheless contain an undetectable event.
    double residual_error_rate = 0.0;
};

/// Ions pulsed in each hide/unhide step of `n_cycles` repetitions of a cycle.
std::vector<std::vector<int>> hiding_steps(const GateSequence& cycle, int n_cycles);

HidingStats hiding_failure_monte_carlo(const std::vector<std::vector<int>>& steps, double p,
                                       std::uint64_t seed, long n_shots);
HidingStats hiding_failure_monte_carlo(const TrotterSchedule& schedule, double p,
                                       std::uint64_t seed, long n_shots);

struct Postselection {
    std::vector<BasisState> kept;
    double acceptance = 0.0;
};

/// Keeps outcomes with sum of spins == target_m.
Postselection postselect_magnetization(const std::vector<BasisState>& samples, int target_m);

/// Projective sigma^z measurements of psi, shot i drawn from stream i of `seed`.
std::vector<BasisState> sample_measurements(const StateVector& psi, long n_shots, std::uint64_t seed);

} // namespace schwinger
