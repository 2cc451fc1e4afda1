#include "schwinger/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "schwinger/error.hpp"
#include "schwinger/format.hpp"
#include "schwinger/gates.hpp"
#include "schwinger/observables.hpp"
#include "schwinger/parallel.hpp"
#include "schwinger/trotter.hpp"

namespace schwinger {

void LatticeSpacing::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("lattice spacing a must be > 0");
    if (!(g >= 0.0)) throw ParameterError("coupling g must be >= 0");
    if (!(m >= 0.0)) throw ParameterError("mass m must be >= 0");
}

LatticeCouplings couplings_from_spacing(const LatticeSpacing& ls) {
    ls.validate();
    return {1.0 / (2.0 * ls.a), 0.5 * ls.g * ls.g * ls.a, ls.m};
}

double spacing_for_mass_ratio(double mass, double m_over_w) {
    if (!(mass > 0.0) || !(m_over_w > 0.0)) throw ParameterError("mass and m/w must be > 0");
    return m_over_w / (2.0 * mass);
}

ModelParams lattice_params(const LatticeSpacing& ls, int n_sites) {
    const auto c = couplings_from_spacing(ls);
    ModelParams p;
    p.n_sites = n_sites;
    p.w = c.w;
    p.j = c.j;
    p.mass = c.mass;
    p.j0 = minimal_j0(p);
    p.validate();
    return p;
}

void RampSchedule::validate() const {
    if (!(total_time >= 0.0) || !std::isfinite(total_time)) throw ParameterError("ramp total_time must be >= 0");
    if (n_steps < 0) throw ParameterError("ramp n_steps must be >= 0");
    if (total_time > 0.0 && n_steps == 0) throw ParameterError("ramp n_steps must be > 0 for a nonzero ramp");
    if (!profile) throw ParameterError("ramp profile missing");
    if (std::abs(profile(0.0)) > 1e-12 || std::abs(profile(1.0) - 1.0) > 1e-12)
        throw ParameterError("ramp profile must satisfy f(0) = 0 and f(1) = 1");
    double previous = profile(0.0);
    const int probes = std::max(n_steps, 1) * 4;
    for (int k = 1; k <= probes; ++k) {
        const double v = profile(static_cast<double>(k) / probes);
        if (v < previous - 1e-12) throw ParameterError("ramp profile must be nondecreasing");
        previous = v;
    }
}

double RampSchedule::value(double t) const {
    if (total_time <= 0.0) return 1.0;
    return profile(std::clamp(t / total_time, 0.0, 1.0));
}

RampSchedule linear_ramp(double total_time, double w, int n_steps) {
    RampSchedule r;
    r.total_time = total_time;
    r.n_steps = n_steps > 0 ? n_steps : static_cast<int>(std::ceil(10.0 * total_time * w - 1e-9));
    if (total_time > 0.0) r.n_steps = std::max(r.n_steps, 1);
    return r;
}

HamiltonianTerms preparation_hamiltonian(const ModelParams& params, double hopping_scale) {
    auto p = params;
    p.j = 0.0;
    auto h = build_hamiltonian(p);
    for (auto& t : h.pm_pairs) t.coefficient *= hopping_scale;
    return h;
}

PreparationResult adiabatic_prepare(const ModelParams& params, const RampSchedule& ramp,
                                    const StateVector& psi0, const PreparationOptions& options) {
    params.validate();
    ramp.validate();
    if (params.j != 0.0) throw ParameterError("adiabatic preparation targets g = 0: j must be 0");
    if (psi0.n_sites() != params.n_sites) throw ParameterError("initial state does not match n_sites");

    const int n = params.n_sites;
    PreparationResult out;
    out.state = psi0;
    out.n_steps = ramp.total_time > 0.0 ? ramp.n_steps : 0;
    out.pair_windows_per_step = n - 1;
    out.entangling_gates_per_step = 2 * (n - 1);
    out.nominal_gate_ops = n;

    const double dt = out.n_steps > 0 ? ramp.total_time / out.n_steps : 0.0;
    const auto mass_fields = local_field_coefficients([&] {
        auto p = params;
        p.j = 0.0;
        return p;
    }());
    for (int k = 0; k < out.n_steps; ++k) {
        const double f = ramp.value((k + 0.5) * dt);
        if (options.mode == PreparationMode::exact) {
            const SpinHamiltonian h(preparation_hamiltonian(params, f));
            EvolveOptions eo;
            eo.tol = options.tol;
            out.state = evolve_exact(h, out.state, dt, eo);
        } else {
            for (int site = 1; site < n; ++site)
                for (const auto& g : flip_flop_block(site, 1.0, f * params.w * dt)) apply_gate(g, out.state);
            std::vector<int> sites(n);
            std::vector<double> angles(n);
            for (int s = 1; s <= n; ++s) {
                sites[s - 1] = s;
                angles[s - 1] = mass_fields[s - 1] * dt;
            }
            apply_gate(GateOp::local_z(std::move(sites), std::move(angles)), out.state);
        }
    }

    const SpinHamiltonian target(preparation_hamiltonian(params));
    out.energy = target.expectation(out.state);
    if (n <= options.oracle_max_sites) {
        GroundStateOptions go;
        go.magnetization = 0;
        const auto gs = ground_state(target, go);
        out.ground_energy = gs.energy;
        out.fidelity = fidelity(gs.state, out.state);
    }
    return out;
}

TimeSeries quench_run(const StateVector& initial, const ModelParams& params, double spacing,
                      const std::vector<double>& times_mt, double tol) {
    params.validate();
    if (!(params.mass > 0.0)) throw ParameterError("quench times are in units of 1/m: mass must be > 0");
    if (!(spacing > 0.0)) throw ParameterError("spacing must be > 0");
    if (initial.n_sites() != params.n_sites) throw ParameterError("initial state does not match n_sites");

    TimeSeries ts;
    ts.name = "kappa";
    ts.time_unit = "mt";
    ts.times = times_mt;
    ts.values.reserve(times_mt.size());
    const SpinHamiltonian h(build_hamiltonian(params));
    EvolveOptions eo;
    eo.tol = tol;
    StateVector psi = initial;
    double previous = 0.0;
    for (double mt : times_mt) {
        if (!(mt >= previous)) throw ParameterError("quench times must be nondecreasing and >= 0");
        if (mt > previous) psi = evolve_exact(h, psi, (mt - previous) / params.mass, eo);
        // Before any evolution the overlap is 1 by definition; rounding in the norm must not leak into kappa.
        const double l = mt > 0.0 ? std::min(1.0, std::norm(overlap(initial, psi))) : 1.0;
        previous = mt;
        ts.values.push_back(rate_function_kappa(l, spacing, params.n_sites));
    }
    ts.metadata = {{"n_sites", params.n_sites}, {"w", params.w},   {"j", params.j},
                   {"mass", params.mass},       {"spacing", spacing}};
    return ts;
}

Extrapolation extrapolate_thermodynamic(std::vector<SizePoint> data, double t_star, std::vector<int> orders) {
    std::sort(orders.begin(), orders.end());
    for (std::size_t k = 0; k < orders.size(); ++k) {
        if (orders[k] != 1 && orders[k] != 2) throw FitError("fit orders must be 1 and/or 2");
        if (k > 0 && orders[k] == orders[k - 1]) throw FitError("duplicate fit order");
    }
    for (const auto& d : data) {
        if (d.n_sites <= 0) throw FitError("system sizes must be positive");
        if (!std::isfinite(d.kappa)) throw FitError("non-finite kappa in fit data");
    }
    std::sort(data.begin(), data.end(), [](const SizePoint& x, const SizePoint& y) {
        return x.n_sites != y.n_sites ? x.n_sites < y.n_sites : x.kappa < y.kappa;
    });
    std::set<int> distinct;
    for (const auto& d : data) distinct.insert(d.n_sites);
    const int n_params = 1 + static_cast<int>(orders.size());
    if (static_cast<int>(distinct.size()) < n_params + 1) {
        std::ostringstream msg;
        msg << "need at least " << n_params + 1 << " distinct sizes for " << n_params
            << " fit parameters, got " << distinct.size();
        throw FitError(msg.str());
    }

    const auto rows = static_cast<Eigen::Index>(data.size());
    Eigen::MatrixXd a(rows, n_params);
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double inv = 1.0 / data[r].n_sites;
        a(r, 0) = 1.0;
        for (int k = 0; k < static_cast<int>(orders.size()); ++k) a(r, k + 1) = std::pow(inv, orders[k]);
        b(r) = data[r].kappa;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < n_params) throw FitError("rank-deficient design matrix");
    const Eigen::VectorXd x = qr.solve(b);

    Extrapolation e;
    e.t_star = t_star;
    e.kappa_inf = x(0);
    e.orders = orders;
    for (int k = 1; k < n_params; ++k) e.coefficients.push_back(x(k));
    e.residual = (a * x - b).norm();
    e.sizes.assign(distinct.begin(), distinct.end());
    return e;
}

void SweepConfig::validate() const {
    if (!(mass > 0.0)) throw ParameterError("sweep mass must be > 0");
    if (!(g_over_m >= 0.0)) throw ParameterError("g_over_m must be >= 0");
    if (spacings.empty()) throw ParameterError("sweep needs at least one spacing");
    for (double a : spacings)
        if (!(a > 0.0)) throw ParameterError("spacings must be > 0");
    if (sizes.empty()) throw ParameterError("sweep needs at least one size");
    for (int n : sizes)
        if (n < 2 || n % 2 != 0) throw ParameterError("sizes must be even and >= 2");
    if (times_mt.empty()) throw ParameterError("sweep needs a time grid");
    for (std::size_t k = 0; k < times_mt.size(); ++k)
        if (!(times_mt[k] >= 0.0) || (k > 0 && !(times_mt[k] > times_mt[k - 1])))
            throw ParameterError("sweep times must be >= 0 and strictly increasing");
    if (!(ramp_time_w >= 0.0)) throw ParameterError("ramp_time_w must be >= 0");
    if (!(tol > 0.0)) throw ParameterError("tol must be > 0");
    if (!(instability_threshold > 0.0)) throw ParameterError("instability_threshold must be > 0");
}

namespace {

struct CurveJob {
    TimeSeries curve;
    double fidelity = 1.0;
};

CurveJob run_curve(const SweepConfig& c, double a, int n_sites) {
    const LatticeSpacing ls{a, c.g_over_m * c.mass, c.mass};
    const auto params = lattice_params(ls, n_sites);
    auto free_params = params;
    free_params.j = 0.0;

    CurveJob job;
    StateVector initial{n_sites};
    if (c.initial == InitialState::ground_state) {
        GroundStateOptions go;
        go.magnetization = 0;
        initial = ground_state(preparation_hamiltonian(free_params), go).state;
    } else {
        PreparationOptions po;
        po.tol = c.tol;
        const auto prep = adiabatic_prepare(free_params, linear_ramp(c.ramp_time_w / params.w, params.w),
                                            StateVector::basis(bare_vacuum(n_sites)), po);
        initial = prep.state;
        job.fidelity = prep.fidelity.value_or(std::numeric_limits<double>::quiet_NaN());
    }
    job.curve = quench_run(initial, params, a, c.times_mt, c.tol);
    job.curve.metadata["g"] = ls.g;
    return job;
}

} // namespace

SweepResult continuum_sweep(const SweepConfig& config) {
    config.validate();
    SweepResult out;
    out.config = config;
    auto sizes = config.sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    const std::size_t n_a = config.spacings.size();
    const std::size_t n_n = sizes.size();
    std::vector<CurveJob> jobs(n_a * n_n);
    parallel_for(jobs.size(), config.threads,
                 [&](std::size_t i) { jobs[i] = run_curve(config, config.spacings[i / n_n], sizes[i % n_n]); });

    for (std::size_t ia = 0; ia < n_a; ++ia) {
        SpacingResult r;
        r.spacing = {config.spacings[ia], config.g_over_m * config.mass, config.mass};
        r.m_over_w = 2.0 * r.spacing.a * config.mass;
        r.sizes = sizes;
        for (std::size_t in = 0; in < n_n; ++in) {
            r.curves.push_back(std::move(jobs[ia * n_n + in].curve));
            r.preparation_fidelity.push_back(jobs[ia * n_n + in].fidelity);
        }
        if (n_n < 3) r.warnings.push_back("fewer than 3 sizes: no extrapolation, largest-N curve passed through");
        else if (n_n < 4) r.warnings.push_back("fewer than 4 sizes: 1/N^2 fit and instability flags unavailable");

        for (std::size_t k = 0; k < config.times_mt.size(); ++k) {
            TimeExtrapolation te;
            te.t_star = config.times_mt[k];
            std::vector<SizePoint> pts;
            for (std::size_t in = 0; in < n_n; ++in) pts.push_back({sizes[in], r.curves[in].values[k]});
            te.kappa_inf = pts.back().kappa;
            if (n_n >= 3) {
                te.first_order = extrapolate_thermodynamic(pts, te.t_star, {1});
                te.kappa_inf = te.first_order->kappa_inf;
            }
            if (n_n >= 4) {
                te.second_order = extrapolate_thermodynamic(pts, te.t_star, {1, 2});
                te.kappa_inf = te.second_order->kappa_inf;
                const double diff = std::abs(te.first_order->kappa_inf - te.second_order->kappa_inf);
                te.unstable = diff > config.instability_threshold * std::abs(te.second_order->kappa_inf) + 1e-12;
            }
            if (te.unstable) ++r.n_unstable;
            r.extrapolations.push_back(std::move(te));
        }
        out.spacings.push_back(std::move(r));
    }
    return out;
}

double size_spread(const SpacingResult& r, std::size_t time_index) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : r.curves) {
        lo = std::min(lo, c.values.at(time_index));
        hi = std::max(hi, c.values.at(time_index));
    }
    return r.curves.empty() ? 0.0 : hi - lo;
}

nlohmann::json to_json(const Extrapolation& e) {
    return {{"t_star", e.t_star},   {"kappa_inf", e.kappa_inf}, {"orders", e.orders},
            {"coefficients", e.coefficients}, {"residual", e.residual}, {"sizes", e.sizes}};
}

void write_sweep(const SweepResult& result, const std::string& dir) {
    namespace fs = std::filesystem;
    for (const auto& r : result.spacings) {
        const fs::path base = fs::path(dir) / ("a_" + format_double(r.spacing.a));
        fs::create_directories(base / "extrapolations");
        for (std::size_t in = 0; in < r.curves.size(); ++in)
            write_csv((base / ("kappa_N" + std::to_string(r.sizes[in]) + ".csv")).string(), r.curves[in]);

        TimeSeries inf;
        inf.name = "kappa_inf";
        inf.time_unit = "mt";
        TimeSeries flags;
        flags.name = "unstable";
        flags.time_unit = "mt";
        for (std::size_t k = 0; k < r.extrapolations.size(); ++k) {
            const auto& te = r.extrapolations[k];
            inf.times.push_back(te.t_star);
            inf.values.push_back(te.kappa_inf);
            flags.times.push_back(te.t_star);
            flags.values.push_back(te.unstable ? 1.0 : 0.0);

            nlohmann::json j = {{"t_star", te.t_star}, {"kappa_inf", te.kappa_inf}, {"unstable", te.unstable}};
            if (te.first_order) j["orders_1"] = to_json(*te.first_order);
            if (te.second_order) j["orders_1_2"] = to_json(*te.second_order);
            std::ofstream f(base / "extrapolations" / ("t" + std::to_string(k) + ".json"));
            f << j.dump(2) << '\n';
        }
        write_joint_csv((base / "kappa_inf.csv").string(), "mt", {inf, flags});

        nlohmann::json summary = {{"a", r.spacing.a},
                                  {"g", r.spacing.g},
                                  {"m", r.spacing.m},
                                  {"m_over_w", r.m_over_w},
                                  {"sizes", r.sizes},
                                  {"n_unstable", r.n_unstable},
                                  {"warnings", r.warnings}};
        std::ofstream f(base / "summary.json");
        f << summary.dump(2) << '\n';
    }
}

} // namespace schwinger
