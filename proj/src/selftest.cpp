#include "schwinger/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "schwinger/dense.hpp"
#include "schwinger/engine.hpp"
#include "schwinger/observables.hpp"
#include "schwinger/random.hpp"
#include "schwinger/trotter.hpp"

namespace schwinger {

namespace {

SelfTestResult check(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, value <= tolerance};
}

// Random state supported on the M = 0 sector.
StateVector random_zero_charge_state(int n_sites, std::uint64_t stream) {
    StreamRng rng(0x5e1f, stream);
    ComplexVector amps(std::size_t{1} << n_sites);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double re = rng.symmetric(1.0), im = rng.symmetric(1.0);
        if (magnetization_of(i, n_sites) == 0) amps[i] = {re, im};
    }
    return StateVector::from_amplitudes(n_sites, std::move(amps));
}

} // namespace

std::vector<SelfTestResult> run_selftest() {
    std::vector<SelfTestResult> out;

    double worst = 0.0;
    for (int n = 3; n <= 6; ++n) {
        ModelParams p;
        p.n_sites = n;
        p.j = 0.7;
        p.w = 0.3;
        p.mass = 0.4;
        p.j0 = minimal_j0(p) * 1.5;
        const auto s = make_schedule(p, 0.9, 1);
        const auto u = dense::sequence_unitary(compile_section1(p, s), n);
        const auto ref = dense::expm_hermitian(dense::hamiltonian(zz_part(build_hamiltonian(p))), s.cycle_time);
        worst = std::max(worst, dense::spectral_norm(u - ref));
    }
    out.push_back(check("section I equals exp(-i H_zz T), N=3..6", worst, 1e-10));

    {
        const double dt = 0.4;
        const auto u = dense::sequence_unitary(flip_flop_block(1, 1.0, dt), 2);
        HamiltonianTerms h;
        h.n_sites = 2;
        h.pm_pairs.push_back({1, 2, 1.0});
        const auto ref = dense::expm_hermitian(dense::hamiltonian(h), dt);
        out.push_back(check("flip-flop block equals exp(-i J0 (s+s- + h.c.) dt)", dense::spectral_norm(u - ref), 1e-12));
    }

    {
        ModelParams p;
        p.n_sites = 4;
        p.j = p.w = p.mass = 1.0;
        const auto h = build_hamiltonian(p);
        const auto psi0 = StateVector::basis(bare_vacuum(4));
        const auto psi = evolve_exact(h, psi0, 1.0, 1e-9);
        const Eigen::VectorXcd ref = dense::expm_hermitian(dense::hamiltonian(h), 1.0) *
                                     Eigen::Map<const Eigen::VectorXcd>(psi0.amplitudes().data(), 16);
        const Eigen::VectorXcd got = Eigen::Map<const Eigen::VectorXcd>(psi.amplitudes().data(), 16);
        out.push_back(check("Krylov evolution equals dense exponential, N=4", (got - ref).norm(), 1e-9));
    }

    {
        double dev = 0.0;
        for (std::uint64_t k = 0; k < 5; ++k) {
            const auto psi = random_zero_charge_state(6, k);
            const double s = half_chain_entropy(psi, 3);
            dev = std::max({dev, std::abs(extended_state_entropy(psi, 3, 0, BoundaryLink::left) - s),
                            std::abs(extended_state_entropy(psi, 3, 0, BoundaryLink::right) - s)});
        }
        out.push_back(check("spin entropy equals gauge-extended entropy, N=6", dev, 1e-10));
    }

    {
        const auto psi = random_zero_charge_state(6, 99);
        const auto a = reduced_density(psi, 2).eigenvalues();
        const auto b = reduced_density_right(psi, 2).eigenvalues();
        std::vector<double> va(a.data(), a.data() + a.size()), vb(b.data(), b.data() + b.size());
        std::sort(va.rbegin(), va.rend());
        std::sort(vb.rbegin(), vb.rend());
        double dev = 0.0;
        for (std::size_t k = 0; k < std::min(va.size(), vb.size()); ++k) dev = std::max(dev, std::abs(va[k] - vb[k]));
        for (std::size_t k = std::min(va.size(), vb.size()); k < std::max(va.size(), vb.size()); ++k)
            dev = std::max(dev, std::abs(k < va.size() ? va[k] : vb[k]));
        out.push_back(check("Schmidt spectra of both blocks agree, N=6", dev, 1e-10));
    }

    {
        ModelParams p;
        p.n_sites = 2;
        const auto gs = ground_state(build_hamiltonian(p));
        out.push_back(check("two-site hopping ground energy -w", std::abs(gs.energy + 1.0), 1e-10));
    }
    return out;
}

} // namespace schwinger
