// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "schwinger/continuum.hpp"
#include "schwinger/dense.hpp"
#include "schwinger/engine.hpp"
#include "schwinger/noise.hpp"
#include "schwinger/observables.hpp"
#include "schwinger/timeseries.hpp"
#include "schwinger/trotter.hpp"

using namespace schwinger;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

ModelParams params(int n, double w, double j, double m) {
    ModelParams p;
    p.n_sites = n;
    p.w = w;
    p.j = j;
    p.mass = m;
    return p;
}

struct Curves {
    std::vector<double> t, nu, lambda, s;
};

Curves exact_curves(const ModelParams& p, double t_max, double dt, bool entropy) {
    SpinHamiltonian h(build_hamiltonian(p));
    const auto psi0 = StateVector::basis(bare_vacuum(p.n_sites));
    auto psi = psi0;
    Curves c;
    for (double t : uniform_grid(0, t_max, dt)) {
        if (t > 0) psi = evolve_exact(h, psi, dt, {.tol = 1e-10});
        c.t.push_back(t);
        c.nu.push_back(particle_density(psi));
        c.lambda.push_back(vacuum_persistence(psi0, psi).rate);
        c.s.push_back(entropy ? half_chain_entropy(psi, p.n_sites / 2) : 0.0);
    }
    return c;
}

// Indices of interior local maxima.
std::vector<std::size_t> maxima(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k + 1 < v.size(); ++k)
        if (v[k] > v[k - 1] && v[k] >= v[k + 1]) out.push_back(k);
    return out;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Verdict c1() {
    double worst = 0;
    for (int n = 3; n <= 6; ++n) {
        for (double t : {0.4, 1.0, 2.3}) {
            auto p = params(n, 1, 1.4, 0.5);
            p.j0 = 10;
            auto s = make_schedule(p, t, 1);
            const double j_eff = 2 * s.dt_I / t * p.j0;
            auto u = dense::sequence_unitary(compile_section1(p, s), n);
            worst = std::max(worst, oracle::opnorm(u - oracle::expm(oracle::zz_hamiltonian(n, j_eff), t)));
        }
    }
    return {worst <= 1e-10, fmt("max ||U_I - exp(-iH_ZZ T)|| = %.2e over N=3..6", worst)};
}

Verdict c2() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dt_dist(0.0, 2.0), j0_dist(0.5, 5.0);
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
        const double j0 = j0_dist(rng), dt = dt_dist(rng);
        auto u = dense::sequence_unitary(flip_flop_block(1, j0, dt), 2);
        worst = std::max(worst, oracle::opnorm(u - oracle::expm(oracle::flip_flop_hamiltonian(2, j0), dt)));
    }
    return {worst <= 1e-12, fmt("max deviation %.2e over 10 random dt_II", worst)};
}

Verdict c3() {
    auto p = params(10, 1, 1, 1);
    p.j0 = minimal_j0(p);
    const auto psi0 = StateVector::basis(bare_vacuum(10));
    SpinHamiltonian h(build_hamiltonian(p));
    std::vector<double> dev;
    for (double t : {3.0, 1.5, 0.75}) {
        const int n_cycles = static_cast<int>(std::floor(5.0 / t + 1e-9));
        auto traj = run_schedule(make_schedule(p, t, n_cycles), psi0);
        auto exact = psi0;
        double worst = 0;
        for (int c = 1; c <= n_cycles; ++c) {
            exact = evolve_exact(h, exact, t, {.tol = 1e-10});
            worst = std::max(worst, std::abs(particle_density(traj.states[c]) - particle_density(exact)));
        }
        dev.push_back(worst);
    }
    const bool monotone = dev[0] > dev[1] && dev[1] > dev[2];
    return {monotone && dev[2] <= 0.05,
            fmt("max|dnu| T=3: %.4f, T=1.5: %.4f, T=0.75: %.4f (need decreasing, last <= 0.05)", dev[0], dev[1],
                dev[2])};
}

Verdict c4() {
    std::vector<std::vector<double>> peaks;
    std::vector<double> top;
    bool shape = true;
    std::ostringstream d;
    for (double m : {0.0, 0.5, 1.0}) {
        auto c = exact_curves(params(12, 1, 1, m), 10, 0.05, false);
        auto mx = maxima(c.nu);
        std::vector<double> h;
        for (auto k : mx) h.push_back(c.nu[k]);
        const double window_max = *std::max_element(c.nu.begin(), c.nu.end());
        shape = shape && c.nu[0] == 0.0 && c.nu[1] > 0.0 && h.size() >= 2 && h[0] == window_max && h[1] < h[0];
        d << "m=" << m << ": " << h.size() << " maxima";
        if (h.size() >= 2) d << fmt(" (%.3f, %.3f)", h[0], h[1]);
        d << "; ";
        peaks.push_back(h);
        top.push_back(window_max);
    }
    bool ordered = true;
    for (std::size_t k = 0; k + 1 < peaks.size(); ++k) {
        ordered = ordered && top[k + 1] <= top[k];
        for (std::size_t i = 0; i < 2 && i < peaks[k].size() && i < peaks[k + 1].size(); ++i)
            ordered = ordered && peaks[k + 1][i] <= peaks[k][i];
    }
    d << (ordered ? "peak heights nonincreasing in m" : "peak heights not monotone in m");
    return {shape && ordered, d.str()};
}

Verdict c5() {
    bool pass = true;
    std::ostringstream d;
    for (double j : {0.0, 1.0}) {
        auto c = exact_curves(params(12, 1, j, 1), 10, 0.02, false);
        auto mn = maxima(c.nu), ml = maxima(c.lambda);
        if (mn.size() < 2 || ml.empty()) {
            pass = false;
            d << "J=" << j << ": too few maxima; ";
            continue;
        }
        const double period = c.t[mn[1]] - c.t[mn[0]];
        const double shift = std::abs(c.t[ml[0]] - c.t[mn[0]]);
        pass = pass && shift < period / 4;
        d << fmt("J=%g: |t_lambda - t_nu| = %.2f, period %.2f; ", j, shift, period);
    }
    return {pass, d.str()};
}

Verdict c6() {
    bool pass = true;
    std::ostringstream d;
    double previous_onset = -1;
    for (int n : {8, 10, 12}) {
        const double dt = 0.05;
        auto free = exact_curves(params(n, 1, 0, 1), n, dt, true);
        // Linear fit over wt in [0.5, N/4].
        std::vector<double> x, y;
        for (std::size_t k = 0; k < free.t.size(); ++k)
            if (free.t[k] >= 0.5 - 1e-9 && free.t[k] <= n / 4.0 + 1e-9) {
                x.push_back(free.t[k]);
                y.push_back(free.s[k]);
            }
        const double xm = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
        const double ym = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            sxy += (x[k] - xm) * (y[k] - ym);
            sxx += (x[k] - xm) * (x[k] - xm);
            syy += (y[k] - ym) * (y[k] - ym);
        }
        const double slope = sxy / sxx;
        const double r2 = sxy * sxy / (sxx * syy);
        // Saturation onset: first time S reaches 90% of its maximum over wt in [0, N].
        const double s_max = *std::max_element(free.s.begin(), free.s.end());
        std::size_t k_on = 0;
        while (free.s[k_on] < 0.9 * s_max) ++k_on;
        const double onset = free.t[k_on];

        auto coupled = exact_curves(params(n, 1, 0.2, 1), 6, dt, true);
        const auto i6 = static_cast<std::size_t>(std::lround(6 / dt));
        const bool slowed = coupled.s[i6] < free.s[i6];
        pass = pass && slope > 0 && r2 >= 0.98 && onset > previous_onset && slowed;
        previous_onset = onset;
        d << fmt("N=%d slope %.3f R2 %.3f onset %.2f S6(J=.2) %.3f vs %.3f; ", n, slope, r2, onset, coupled.s[i6],
                 free.s[i6]);
    }
    return {pass, d.str()};
}

Verdict c7() {
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto psi = oracle::random_sector_state(6, 0, 1000 + seed);
        const double spin = oracle::entropy_of(oracle::partial_trace(psi, 3));
        for (auto side : {BoundaryLink::left, BoundaryLink::right})
            worst = std::max(worst, std::abs(extended_state_entropy(psi, 3, 0, side) - spin));
    }
    return {worst <= 1e-10, fmt("max |S_ext - S_spin| = %.2e over 50 states, both sides", worst)};
}

Verdict c8() {
    auto p = params(10, 1, 1, 1);
    p.j0 = minimal_j0(p);
    const double t_cycle = 1.3;
    const int n_cycles = 4;
    auto s = make_schedule(p, t_cycle, n_cycles);
    const auto psi0 = StateVector::basis(bare_vacuum(10));
    auto ideal_traj = run_schedule(s, psi0);
    std::vector<double> ideal;
    for (const auto& psi : ideal_traj.states) ideal.push_back(particle_density(psi));

    NoiseParams np;
    np.delta_j_rel = 0.05;
    np.delta_w_rel = 0.025;
    np.n_traj = 200;
    np.seed = 7;
    np.hidden_factor = 1.0;
    const auto noisy = ensemble_average(s, np, {Observable::particle_density}, psi0)[0].values;
    np.hidden_factor = 1.5;
    const auto hidden = ensemble_average(s, np, {Observable::particle_density}, psi0)[0].values;

    // Samples bracketing wt in [3, 5]: cycles 2..4.
    auto amplitude = [](const std::vector<double>& v) {
        auto [lo, hi] = std::minmax_element(v.begin() + 2, v.end());
        return (*hi - *lo) / 2;
    };
    const double a_ideal = amplitude(ideal), a_noisy = amplitude(noisy);
    auto mi = maxima(ideal), mn = maxima(noisy);
    if (mi.size() < 2 || mn.empty()) return {false, "too few maxima on the cycle grid"};
    const double period = (mi[1] - mi[0]) * t_cycle;
    const double shift = std::abs(static_cast<double>(mn[0]) - static_cast<double>(mi[0])) * t_cycle;
    double change = 0;
    for (std::size_t k = 0; k < noisy.size(); ++k) change = std::max(change, std::abs(hidden[k] - noisy[k]));
    return {a_noisy < a_ideal && shift < period / 4 && change < 0.02,
            fmt("late amplitude %.4f (noisy) vs %.4f (ideal); peak shift %.2f of period %.2f; hidden-ion "
                "dephasing changes nu by %.4f",
                a_noisy, a_ideal, shift, period, change)};
}

Verdict c9() {
    const double p = 0.05;
    const int n = 10;
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 1);
    auto stats = hiding_failure_monte_carlo({all}, p, 909, 100000);
    const double expected = p * p * n;
    const double dev = std::abs(stats.undetected_rate - expected);
    return {dev <= 3 * stats.undetected_stderr,
            fmt("undetected rate %.5f vs p^2 N = %.5f (stderr %.5f)", stats.undetected_rate, expected,
                stats.undetected_stderr)};
}

Verdict c10() {
    std::vector<SizePoint> synthetic;
    for (int n : {6, 8, 10, 12}) synthetic.push_back({n, 0.3 + 1.7 / n});
    auto e = extrapolate_thermodynamic(synthetic, 1.0, {1});
    const bool exact = e.residual <= 1e-12 && std::abs(e.kappa_inf - 0.3) <= 1e-12;

    SweepConfig cfg;
    cfg.mass = 1.0;
    cfg.g_over_m = 1.0;
    cfg.spacings = {spacing_for_mass_ratio(1.0, 1.0)};
    cfg.sizes = {6, 8, 10, 12};
    cfg.times_mt = {0, 1, 2, 3, 4, 5};
    auto r = continuum_sweep(cfg);
    bool nested = true;
    std::ostringstream d;
    d << fmt("synthetic residual %.1e; ", e.residual);
    for (const auto& te : r.spacings[0].extrapolations) {
        if (te.t_star < 1) continue;
        nested = nested && te.second_order->residual <= te.first_order->residual;
        d << fmt("t*=%g r12 %.1e <= r1 %.1e; ", te.t_star, te.second_order->residual, te.first_order->residual);
    }
    return {exact && nested, d.str()};
}

Verdict c11() {
    std::mt19937_64 rng(2025);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double norm_dev = 0, energy_dev = 0, leak = 0;
    const double tol = 1e-9;
    for (int k = 0; k < 20; ++k) {
        const int n = 4 + 2 * static_cast<int>(rng() % 4);
        auto p = params(n, 0.5 + 1.5 * u(rng), 2 * u(rng), 2 * u(rng));
        const int m = 2 * static_cast<int>(rng() % 3) - 2;
        auto psi = oracle::random_sector_state(n, m, 500 + k);
        SpinHamiltonian h(build_hamiltonian(p));
        const double e0 = h.expectation(psi);
        auto leak_of = [&](const StateVector& x) {
            double out = 0;
            for (std::size_t i = 0; i < x.dim(); ++i)
                if (magnetization_of(i, n) != m) out += std::norm(x[i]);
            return std::sqrt(out);
        };
        auto x = psi;
        for (int step = 0; step < 4; ++step) {
            x = evolve_exact(h, x, 0.5 + u(rng), {.tol = tol});
            norm_dev = std::max(norm_dev, std::abs(x.norm() - 1));
            energy_dev = std::max(energy_dev, std::abs(h.expectation(x) - e0));
            leak = std::max(leak, leak_of(x));
        }
        p.j0 = minimal_j0(p) * 1.5;
        auto traj = run_schedule(make_schedule(p, 0.7, 2), psi);
        for (const auto& y : traj.states) {
            norm_dev = std::max(norm_dev, std::abs(y.norm() - 1));
            leak = std::max(leak, leak_of(y));
        }
    }
    return {norm_dev <= 1e-10 && energy_dev <= 10 * tol && leak <= 1e-10,
            fmt("max |norm-1| %.1e, max |dE| %.1e (bound %.0e), max sector leak %.1e", norm_dev, energy_dev,
                10 * tol, leak)};
}

Verdict c12() {
    SweepConfig cfg;
    cfg.mass = 1.0;
    cfg.g_over_m = 1.0;
    cfg.spacings = {spacing_for_mass_ratio(1.0, 1.0), spacing_for_mass_ratio(1.0, 0.5)};
    cfg.sizes = {8, 10, 12};
    cfg.times_mt = {0, 3};
    auto r = continuum_sweep(cfg);
    const double coarse = size_spread(r.spacings[0], 1), fine = size_spread(r.spacings[1], 1);
    return {fine > coarse, fmt("spread of kappa at mt=3: %.3e (m/w=0.5) vs %.3e (m/w=1)", fine, coarse)};
}

} // namespace

int main() {
    const std::vector<std::function<Verdict()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[k]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu: %s  %s (%.1f s)\n", k + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !v.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
