#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "schwinger/engine.hpp"
#include "schwinger/model.hpp"
#include "schwinger/state.hpp"
#include "schwinger/timeseries.hpp"

namespace schwinger {

/// Lattice spacing a, gauge coupling g and fermion mass m of the continuum theory.
struct LatticeSpacing {
    double a = 1.0;
    double g = 0.0;
    double m = 0.0;

    void validate() const;
};

struct LatticeCouplings {
    double w = 0.0;
    double j = 0.0;
    double mass = 0.0;
};

/// w = 1/(2a), J = g^2 a / 2, m unchanged.
LatticeCouplings couplings_from_spacing(const LatticeSpacing& ls);

/// Spacing that realizes the ratio m/w at mass m: a = (m/w) / (2m).
double spacing_for_mass_ratio(double mass, double m_over_w);

/// Lattice parameters for N sites at spacing ls. J0 is set to the smallest
/// value whose digital schedule fits in one unit of time (only relevant for
/// gate-level runs).
ModelParams lattice_params(const LatticeSpacing& ls, int n_sites);

/// H(t) = H_m + f(t/t') H_pm, approximated piecewise constant on n_steps
/// slices, f evaluated at slice midpoints.
struct RampSchedule {
    double total_time = 0.0;
    int n_steps = 0;
    /// f on [0, 1], f(0) = 0, f(1) = 1, nondecreasing.
    std::function<double(double)> profile = [](double s) { return s; };
    std::string profile_name = "linear";

    void validate() const;
    double value(double t) const;
};

/// Linear ramp with n_steps = ceil(10 t' w) unless given.
RampSchedule linear_ramp(double total_time, double w, int n_steps = 0);

enum class PreparationMode {
    exact,    // Krylov evolution per slice
    digital,  // per slice: pair flip-flop windows, then the mass rotation
};

struct PreparationOptions {
    PreparationMode mode = PreparationMode::exact;
    double tol = 1e-9;
    /// Compare with the ground state of H_m + H_pm for N up to this size.
    int oracle_max_sites = 16;
};

struct PreparationResult {
    StateVector state{2};
    /// <H_m + H_pm> of the final state.
    double energy = 0.0;
    /// Only set when the ground-state oracle ran.
    std::optional<double> ground_energy;
    std::optional<double> fidelity;
    int n_steps = 0;
    /// Per ramp step in digital mode: N-1 pair windows of two entangling gates
    /// each; `nominal_gate_ops` is the count of N quoted for the preparation.
    int pair_windows_per_step = 0;
    int entangling_gates_per_step = 0;
    int nominal_gate_ops = 0;
};

/// Adiabatic preparation of the g = 0 ground state from psi0 (normally the
/// bare vacuum). params.j must be 0.
PreparationResult adiabatic_prepare(const ModelParams& params, const RampSchedule& ramp,
                                    const StateVector& psi0, const PreparationOptions& options = {});

/// H_m + H_pm for the given params (J ignored).
HamiltonianTerms preparation_hamiltonian(const ModelParams& params, double hopping_scale = 1.0);

/// kappa(t) = -log L(t) / (a N) after evolving `initial` under the full
/// Hamiltonian of `params`. `times_mt` are in units of 1/m (requires m > 0),
/// nondecreasing from >= 0.
TimeSeries quench_run(const StateVector& initial, const ModelParams& params, double spacing,
                      const std::vector<double>& times_mt, double tol = 1e-9);

struct SizePoint {
    int n_sites = 0;
    double kappa = 0.0;
};

struct Extrapolation {
    double t_star = 0.0;
    double kappa_inf = 0.0;
    std::vector<int> orders;
    /// c_k for each entry of `orders`, same order.
    std::vector<double> coefficients;
    /// 2-norm of the fit residual vector.
    double residual = 0.0;
    /// Sizes included in the fit, ascending.
    std::vector<int> sizes;
};

/// Least squares fit kappa_N = kappa_inf + sum_k c_k / N^k for k in `orders`
/// (a subset of {1, 2}). Needs at least (#parameters + 1) distinct N.
/// Throws FitError otherwise or when the design matrix is rank deficient.
Extrapolation extrapolate_thermodynamic(std::vector<SizePoint> data, double t_star,
                                        std::vector<int> orders);

enum class InitialState { ground_state, adiabatic };

struct SweepConfig {
    double mass = 1.0;
    double g_over_m = 1.0;
    std::vector<double> spacings;
    std::vector<int> sizes;
    std::vector<double> times_mt;
    InitialState initial = InitialState::ground_state;
    /// Ramp length in units of 1/w when initial == adiabatic.
    double ramp_time_w = 50.0;
    double tol = 1e-9;
    /// |kappa_inf({1}) - kappa_inf({1,2})| > threshold * |kappa_inf({1,2})| flags a time.
    double instability_threshold = 0.05;
    int threads = 1;

    void validate() const;
};

struct TimeExtrapolation {
    double t_star = 0.0;
    /// Best available estimate: the {1,2} fit if possible, else {1}, else the
    /// largest-N raw value.
    double kappa_inf = 0.0;
    std::optional<Extrapolation> first_order;
    std::optional<Extrapolation> second_order;
    bool unstable = false;
};

struct SpacingResult {
    LatticeSpacing spacing;
    double m_over_w = 0.0;
    /// One kappa(mt) curve per size, in the order of SweepConfig::sizes (sorted ascending).
    std::vector<int> sizes;
    std::vector<TimeSeries> curves;
    std::vector<TimeExtrapolation> extrapolations;
    std::vector<double> preparation_fidelity;
    int n_unstable = 0;
    std::vector<std::string> warnings;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SpacingResult> spacings;
};

/// For every spacing: kappa curves for all sizes, then N -> infinity
/// extrapolation at every time point before anything is compared across spacings.
SweepResult continuum_sweep(const SweepConfig& config);

/// Spread max_N kappa_N - min_N kappa_N at time index k.
double size_spread(const SpacingResult& r, std::size_t time_index);

/// Directory tree: <dir>/a_<a>/kappa_N<N>.csv, <dir>/a_<a>/kappa_inf.csv and
/// one <dir>/a_<a>/extrapolations/t<k>.json per time point.
void write_sweep(const SweepResult& result, const std::string& dir);

nlohmann::json to_json(const Extrapolation& e);

} // namespace schwinger
