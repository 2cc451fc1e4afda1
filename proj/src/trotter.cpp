#include "schwinger/trotter.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "schwinger/dense.hpp"
#include "schwinger/error.hpp"

namespace schwinger {

namespace {

std::vector<int> site_range(int first, int last) {
    std::vector<int> sites;
    for (int s = first; s <= last; ++s) sites.push_back(s);
    return sites;
}

} // namespace

double minimal_j0(const ModelParams& params) {
    const int n = params.n_sites;
    // (N-2) J T / (2 J0) + (N-1) w T / J0 <= T
    return std::max(0.5 * (n - 2) * params.j + (n - 1) * params.w, 1e-300);
}

TrotterSchedule make_schedule(const ModelParams& params, double cycle_time, int n_cycles,
                              double dt_III) {
    params.validate_couplings();
    if (!(cycle_time > 0.0) || !std::isfinite(cycle_time))
        throw ParameterError("cycle_time must be positive");
    if (n_cycles < 0) throw ParameterError("n_cycles must be non-negative");
    if (!(dt_III >= 0.0)) throw ParameterError("dt_III must be non-negative");

    TrotterSchedule s;
    s.params = params;
    s.cycle_time = cycle_time;
    s.n_cycles = n_cycles;
    s.dt_I = 0.5 * params.j * cycle_time / params.j0;
    s.dt_II = params.w * cycle_time / params.j0;
    s.dt_III = dt_III;

    const int n = params.n_sites;
    const double used = (n - 2) * s.dt_I + (n - 1) * s.dt_II + s.dt_III;
    if (used > cycle_time * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "j0: windows need " << used << " > T = " << cycle_time
            << "; j0 must be at least " << minimal_j0(params);
        throw ParameterError(msg.str());
    }
    if (params.j0 * s.dt_II * (n - 1) > 0.1) {
        std::ostringstream msg;
        msg << "section II splitting: J0 dt_II (N-1) = " << params.j0 * s.dt_II * (n - 1)
            << " > 0.1, pair windows do not commute to good accuracy";
        s.warnings.push_back(msg.str());
    }
    s.cycle = compile_cycle(params, s);
    return s;
}

GateSequence compile_section1(const ModelParams& params, const TrotterSchedule& schedule) {
    const int n = params.n_sites;
    GateSequence gates;
    if (n < 3) return gates;
    const double angle = params.j0 * schedule.dt_I;
    gates.push_back(GateOp::local_y(std::numbers::pi / 4));
    for (int m = 2; m <= n - 1; ++m) {
        auto idle = site_range(m + 1, n);
        gates.push_back(GateOp::hide(idle));
        gates.push_back(GateOp::ms_xx(site_range(1, m), angle, schedule.dt_I));
        gates.push_back(GateOp::unhide(std::move(idle)));
    }
    gates.push_back(GateOp::local_y(-std::numbers::pi / 4));
    return gates;
}

GateSequence flip_flop_block(int n, double j0, double dt_II) {
    // U = exp(i pi/4 (Z_n + Z_{n+1})); MS . U^dag . MS . U = exp(-i J0 dt_II (XX + YY) / 2).
    const double quarter = std::numbers::pi / 4;
    return {
        GateOp::local_z({n, n + 1}, {-quarter, -quarter}),
        GateOp::ms_xx({n, n + 1}, 0.5 * j0 * dt_II, 0.5 * dt_II),
        GateOp::local_z({n, n + 1}, {quarter, quarter}),
        GateOp::ms_xx({n, n + 1}, 0.5 * j0 * dt_II, 0.5 * dt_II),
    };
}

GateSequence compile_section2(const ModelParams& params, const TrotterSchedule& schedule) {
    const int n_sites = params.n_sites;
    GateSequence gates;
    for (int n = 1; n <= n_sites - 1; ++n) {
        std::vector<int> idle;
        for (int s = 1; s <= n_sites; ++s)
            if (s != n && s != n + 1) idle.push_back(s);
        gates.push_back(GateOp::hide(idle));
        for (auto& g : flip_flop_block(n, params.j0, schedule.dt_II)) gates.push_back(std::move(g));
        gates.push_back(GateOp::unhide(std::move(idle)));
    }
    return gates;
}

GateOp compile_section3(const ModelParams& params, const TrotterSchedule& schedule) {
    const auto fields = local_field_coefficients(params);
    std::vector<double> angles(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) angles[k] = fields[k] * schedule.cycle_time;
    return GateOp::local_z(site_range(1, params.n_sites), std::move(angles));
}

GateSequence compile_cycle(const ModelParams& params, const TrotterSchedule& schedule) {
    auto gates = compile_section1(params, schedule);
    for (auto& g : compile_section2(params, schedule)) gates.push_back(std::move(g));
    gates.push_back(compile_section3(params, schedule));
    return gates;
}

Trajectory run_cycles(const GateSequence& cycle, double cycle_time, int n_cycles,
                      const StateVector& psi0) {
    Trajectory out;
    out.times.reserve(n_cycles + 1);
    out.states.reserve(n_cycles + 1);
    out.times.push_back(0.0);
    out.states.push_back(psi0);
    QuantumRegister reg(psi0);
    for (int c = 1; c <= n_cycles; ++c) {
        reg.apply(cycle);
        if (reg.any_hidden()) throw ProtocolError("cycle ends with hidden ions");
        out.times.push_back(c * cycle_time);
        out.states.push_back(reg.state());
    }
    return out;
}

Trajectory run_schedule(const TrotterSchedule& schedule, const StateVector& psi0) {
    if (psi0.n_sites() != schedule.params.n_sites)
        throw ParameterError("initial state does not match the schedule's n_sites");
    return run_cycles(schedule.cycle, schedule.cycle_time, schedule.n_cycles, psi0);
}

double trotter_error_bound(const ModelParams& params, double t, int n_steps) {
    if (params.n_sites > dense::max_dense_sites)
        throw ParameterError("trotter_error_bound: unsupported size N > " +
                             std::to_string(dense::max_dense_sites));
    if (n_steps < 1) throw ParameterError("n_steps must be >= 1");
    // w = 0 is allowed here: the bound of commuting diagonal parts is zero.
    if (!(params.w >= 0.0)) throw ParameterError("w must be non-negative");
    ModelParams q = params;
    if (q.w == 0.0) q.w = 1.0;
    const auto h = build_hamiltonian(q);
    const Eigen::MatrixXcd parts[3] = {dense::hamiltonian(zz_part(h)),
                                       (params.w / q.w) * dense::hamiltonian(flip_flop_part(h)),
                                       dense::hamiltonian(local_part(h))};
    double sum = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            const Eigen::MatrixXcd commutator = parts[a] * parts[b] - parts[b] * parts[a];
            sum += 2.0 * dense::spectral_norm(commutator);
        }
    return t * t / (2.0 * n_steps) * sum;
}

GateCounts count_gates(const ModelParams& params, const TrotterSchedule& schedule) {
    GateCounts counts;
    counts.section1_windows = params.n_sites >= 3 ? params.n_sites - 2 : 0;
    counts.pair_windows = params.n_sites - 1;
    for (const auto& g : schedule.cycle) {
        switch (g.kind) {
        case GateKind::ms_xx: ++counts.entangling_windows; break;
        case GateKind::local_y:
        case GateKind::local_z:
        case GateKind::dephase: ++counts.local_rotations; break;
        case GateKind::hide:
        case GateKind::unhide: ++counts.hide_ops; break;
        }
    }
    return counts;
}

} // namespace schwinger
