#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracle.hpp"
#include "schwinger/continuum.hpp"
#include "schwinger/engine.hpp"
#include "schwinger/error.hpp"
#include "schwinger/observables.hpp"

using namespace schwinger;

namespace {

ModelParams free_params(int n, double w, double m) {
    ModelParams p;
    p.n_sites = n;
    p.w = w;
    p.mass = m;
    return p;
}

double sector_leak(const StateVector& psi) {
    double leak = 0;
    for (std::size_t i = 0; i < psi.dim(); ++i)
        if (magnetization_of(i, psi.n_sites()) != 0) leak += std::norm(psi[i]);
    return std::sqrt(leak);
}

} // namespace

TEST_CASE("couplings from the lattice spacing") {
    auto c = couplings_from_spacing({0.5, 1.0, 0.7});
    CHECK(c.w == doctest::Approx(1.0));
    CHECK(c.j == doctest::Approx(0.25));
    CHECK(c.mass == 0.7);
    auto half = couplings_from_spacing({0.25, 1.0, 0.7});
    CHECK(half.w == doctest::Approx(2 * c.w));
    CHECK(half.j == doctest::Approx(c.j / 2));
    CHECK(spacing_for_mass_ratio(1.3, 1.0) == doctest::Approx(1 / (2 * 1.3)));
    CHECK_THROWS_AS(couplings_from_spacing({0.0, 1.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(couplings_from_spacing({-1.0, 1.0, 1.0}), ParameterError);

    for (double a : {0.05, 0.3, 1.7})
        for (double g : {0.0, 0.4, 2.0})
            for (double m : {0.1, 1.0, 3.0}) {
                auto k = couplings_from_spacing({a, g, m});
                CHECK(k.mass / k.w == doctest::Approx(2 * a * m));
                CHECK(k.j / k.w == doctest::Approx(g * a * g * a));
            }

    auto p = lattice_params({0.5, 1.0, 1.0}, 8);
    CHECK(p.w == doctest::Approx(1.0));
    CHECK(p.j == doctest::Approx(0.25));
    CHECK_THROWS_AS(lattice_params({0.5, 1.0, 1.0}, 7), ParameterError);
}

TEST_CASE("ramp schedules") {
    auto r = linear_ramp(50, 1.0);
    CHECK(r.n_steps == 500);
    CHECK(r.value(0) == 0.0);
    CHECK(r.value(50) == 1.0);
    CHECK(r.value(25) == doctest::Approx(0.5));
    CHECK(linear_ramp(1.05, 2.0).n_steps == 21);
    RampSchedule bad = r;
    bad.profile = [](double s) { return 1 - s; };
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad.profile = [](double s) { return std::sin(3 * s) / std::sin(3.0); };
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad.profile = [](double s) { return s * s; };
    CHECK_NOTHROW(bad.validate());
}

TEST_CASE("adiabatic preparation") {
    auto p = free_params(8, 1.0, 1.0);
    auto vac = StateVector::basis(bare_vacuum(8));

    auto none = adiabatic_prepare(p, linear_ramp(0, 1.0), vac);
    CHECK(fidelity(none.state, vac) == 1.0);

    auto r50 = adiabatic_prepare(p, linear_ramp(50, 1.0), vac);
    CHECK(r50.n_steps == 500);
    REQUIRE(r50.fidelity.has_value());
    CHECK(*r50.fidelity >= 0.99);
    CHECK(sector_leak(r50.state) <= 1e-10);
    CHECK(r50.energy >= *r50.ground_energy - 1e-9);
    CHECK(r50.pair_windows_per_step == 7);
    CHECK(r50.entangling_gates_per_step == 14);
    CHECK(r50.nominal_gate_ops == 8);

    std::vector<double> fids;
    for (double t : {5.0, 10.0, 20.0, 40.0}) fids.push_back(*adiabatic_prepare(p, linear_ramp(t, 1.0), vac).fidelity);
    for (std::size_t k = 0; k + 1 < fids.size(); ++k) CHECK(fids[k + 1] >= fids[k] - 1e-9);

    auto digital = adiabatic_prepare(p, linear_ramp(50, 1.0), vac, {.mode = PreparationMode::digital});
    CHECK(*digital.fidelity >= 0.99);
    CHECK(sector_leak(digital.state) <= 1e-10);

    auto coupled = p;
    coupled.j = 0.5;
    CHECK_THROWS_AS(adiabatic_prepare(coupled, linear_ramp(1, 1.0), vac), ParameterError);
}

TEST_CASE("the preparation target energy matches dense diagonalization") {
    for (int n : {4, 6, 8}) {
        auto p = free_params(n, 1.0, 1.0);
        auto gs = ground_state(preparation_hamiltonian(p), {.magnetization = 0});
        // The free Hamiltonian carries no dropped constant.
        auto ref = oracle::lattice_hamiltonian(n, 1.0, 0.0, 1.0);
        CHECK(std::abs(gs.energy - oracle::min_eigenvalue(ref)) <= 1e-8);
        CHECK(SpinHamiltonian(preparation_hamiltonian(p)).expectation(gs.state) ==
              doctest::Approx(gs.energy).epsilon(1e-12));
    }
}

TEST_CASE("quench runs") {
    const double mass = 1.0;
    const double a = spacing_for_mass_ratio(mass, 1.0);
    const std::vector<double> times{0.0, 0.5, 1.0, 2.0};

    auto p0 = lattice_params({a, 0.0, mass}, 8);
    auto gs = ground_state(preparation_hamiltonian(p0), {.magnetization = 0}).state;
    auto flat = quench_run(gs, p0, a, times);
    CHECK(flat.time_unit == "mt");
    CHECK(flat.name == "kappa");
    for (double k : flat.values) CHECK(std::abs(k) <= 1e-8);

    std::vector<TimeSeries> curves;
    for (int n : {8, 10, 12}) {
        auto pn0 = lattice_params({a, 0.0, mass}, n);
        auto init = ground_state(preparation_hamiltonian(pn0), {.magnetization = 0}).state;
        curves.push_back(quench_run(init, lattice_params({a, mass, mass}, n), a, times));
        CHECK(curves.back().values[0] == 0.0);
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double d1 = std::abs(curves[1].values[k] - curves[0].values[k]);
        const double d2 = std::abs(curves[2].values[k] - curves[1].values[k]);
        INFO("mt " << times[k] << " gaps " << d1 << " " << d2);
        CHECK(d2 < d1);
        CHECK(curves[2].values[k] > 0);
    }
    CHECK_THROWS_AS(quench_run(gs, free_params(8, 1.0, 0.0), a, times), ParameterError);
    CHECK_THROWS_AS(quench_run(gs, p0, a, {1.0, 0.5}), ParameterError);
}

TEST_CASE("thermodynamic extrapolation") {
    std::vector<SizePoint> lin;
    for (int n : {6, 8, 10, 12}) lin.push_back({n, 0.3 + 1.7 / n});
    auto e = extrapolate_thermodynamic(lin, 2.0, {1});
    CHECK(std::abs(e.kappa_inf - 0.3) <= 1e-12);
    CHECK(std::abs(e.coefficients[0] - 1.7) <= 1e-12);
    CHECK(e.residual <= 1e-12);
    CHECK(e.sizes == std::vector<int>{6, 8, 10, 12});
    CHECK(e.t_star == 2.0);

    std::vector<SizePoint> quad;
    for (int n : {6, 8, 10, 12}) quad.push_back({n, 0.3 + 1.7 / n - 4.0 / (n * n)});
    auto q1 = extrapolate_thermodynamic(quad, 0, {1});
    auto q12 = extrapolate_thermodynamic(quad, 0, {1, 2});
    CHECK(q12.residual < q1.residual);
    CHECK(std::abs(q12.kappa_inf - 0.3) <= 1e-10);
    CHECK(std::abs(q12.coefficients[1] + 4.0) <= 1e-8);

    std::vector<SizePoint> flat{{6, 0.7}, {8, 0.7}, {10, 0.7}, {12, 0.7}};
    auto c = extrapolate_thermodynamic(flat, 0, {1, 2});
    CHECK(c.kappa_inf == doctest::Approx(0.7));
    CHECK(std::abs(c.coefficients[0]) <= 1e-10);
    CHECK(std::abs(c.coefficients[1]) <= 1e-10);

    std::vector<SizePoint> shuffled{quad[2], quad[0], quad[3], quad[1]};
    auto s = extrapolate_thermodynamic(shuffled, 0, {1, 2});
    CHECK(s.kappa_inf == doctest::Approx(q12.kappa_inf).epsilon(1e-13));
    CHECK(s.sizes == q12.sizes);

    CHECK_THROWS_AS(extrapolate_thermodynamic({{6, 1}, {8, 1}}, 0, {1}), FitError);
    CHECK_THROWS_AS(extrapolate_thermodynamic({{6, 1}, {8, 1}, {10, 1}}, 0, {1, 2}), FitError);
    CHECK_THROWS_AS(extrapolate_thermodynamic({{6, 1}, {6, 1.1}, {6, 1.2}, {8, 1}}, 0, {1}), FitError);
    CHECK_THROWS_AS(extrapolate_thermodynamic(lin, 0, {3}), FitError);
}

TEST_CASE("sweeps") {
    SweepConfig single;
    single.spacings = {0.5};
    single.sizes = {6};
    single.times_mt = {0, 1, 2};
    auto one = continuum_sweep(single);
    REQUIRE(one.spacings.size() == 1);
    CHECK_FALSE(one.spacings[0].warnings.empty());
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(one.spacings[0].extrapolations[k].kappa_inf == one.spacings[0].curves[0].values[k]);
        CHECK_FALSE(one.spacings[0].extrapolations[k].first_order.has_value());
    }

    SweepConfig zero;
    zero.g_over_m = 0;
    zero.spacings = {0.5};
    zero.sizes = {4, 6, 8, 10};
    zero.times_mt = {0, 1, 2};
    const auto zr = continuum_sweep(zero);
    for (const auto& e : zr.spacings[0].extrapolations) CHECK(std::abs(e.kappa_inf) <= 1e-8);

    SweepConfig bad = single;
    bad.sizes = {5};
    CHECK_THROWS_AS(continuum_sweep(bad), ParameterError);
}

TEST_CASE("instability flags are more frequent at the finer spacing") {
    SweepConfig cfg;
    cfg.mass = 1.0;
    cfg.g_over_m = 1.0;
    cfg.spacings = {spacing_for_mass_ratio(1.0, 1.0), spacing_for_mass_ratio(1.0, 0.5)};
    cfg.sizes = {8, 10, 12, 14};
    cfg.times_mt = uniform_grid(0, 5, 0.25);
    auto r = continuum_sweep(cfg);
    REQUIRE(r.spacings.size() == 2);
    CHECK(r.spacings[0].m_over_w == doctest::Approx(1.0));
    CHECK(r.spacings[1].m_over_w == doctest::Approx(0.5));
    int late[2] = {0, 0};
    for (int s = 0; s < 2; ++s)
        for (const auto& e : r.spacings[s].extrapolations)
            if (e.t_star >= 3 - 1e-9 && e.unstable) ++late[s];
    INFO("m/w=1: " << late[0] << "  m/w=0.5: " << late[1]);
    CHECK(late[1] > late[0]);

    const auto dir = std::filesystem::temp_directory_path() / "schwinger_sweep_test";
    std::filesystem::remove_all(dir);
    write_sweep(r, dir.string());
    int files = 0;
    for (auto& entry : std::filesystem::recursive_directory_iterator(dir))
        if (entry.is_regular_file()) ++files;
    CHECK(files == 2 * (4 + 2 + static_cast<int>(cfg.times_mt.size())));
    std::filesystem::remove_all(dir);
}
