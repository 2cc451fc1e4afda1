#pragma once

#include <string>
#include <vector>

#include "schwinger/gates.hpp"
#include "schwinger/model.hpp"
#include "schwinger/state.hpp"

namespace schwinger {

/// Timing of one digital cycle of length T:
///   section I   N-2 windows of dt_I   (nested MS gates, J  = 2 (dt_I / T) J0)
///   section II  N-1 windows of dt_II  (pairwise flip-flop, w = (dt_II / T) J0)
///   section III one window of dt_III  (local Z rotations, instantaneous by default)
struct TrotterSchedule {
    ModelParams params;
    double cycle_time = 0.0;
    double dt_I = 0.0;
    double dt_II = 0.0;
    double dt_III = 0.0;
    int n_cycles = 0;
    /// Gates of one cycle, sections I, II, III in order.
    GateSequence cycle;
    std::vector<std::string> warnings;
};

/// Smallest J0 for which (N-2) dt_I + (N-1) dt_II + dt_III <= T.
double minimal_j0(const ModelParams& params);

/// Derives the window lengths from params (including params.j0) and compiles one cycle.
/// Throws ParameterError if the windows do not fit in the cycle.
TrotterSchedule make_schedule(const ModelParams& params, double cycle_time, int n_cycles,
                              double dt_III = 0.0);

GateSequence compile_section1(const ModelParams& params, const TrotterSchedule& schedule);
GateSequence compile_section2(const ModelParams& params, const TrotterSchedule& schedule);
GateOp compile_section3(const ModelParams& params, const TrotterSchedule& schedule);
GateSequence compile_cycle(const ModelParams& params, const TrotterSchedule& schedule);

/// The four-gate flip-flop block on the neighbouring pair (n, n+1), without hiding.
GateSequence flip_flop_block(int n, double j0, double dt_II);

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
};

/// States at every cycle boundary, starting with psi0 at t = 0.
Trajectory run_schedule(const TrotterSchedule& schedule, const StateVector& psi0);

/// Same for an arbitrary per-cycle gate sequence (e.g. a perturbed one).
Trajectory run_cycles(const GateSequence& cycle, double cycle_time, int n_cycles,
                      const StateVector& psi0);

/// Leading-order splitting error (t^2 / 2n) sum_{i<j} 2 ||[H_i, H_j]|| over
/// the section Hamiltonians {H_zz, H_pm, H_z}. Dense, N <= 10.
/// Accepts w = 0 (then H_pm vanishes).
double trotter_error_bound(const ModelParams& params, double t, int n_steps);

struct GateCounts {
    int entangling_windows = 0;  // MS gates
    int section1_windows = 0;
    int pair_windows = 0;
    int local_rotations = 0;
    int hide_ops = 0;
};

GateCounts count_gates(const ModelParams& params, const TrotterSchedule& schedule);

} // namespace schwinger
