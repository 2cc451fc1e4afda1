#include "schwinger/observables.hpp"

#include <cmath>
#include <cstdlib>
#include <map>

#include "schwinger/error.hpp"

namespace schwinger {

std::vector<double> local_magnetization(const StateVector& psi) {
    const int n_sites = psi.n_sites();
    std::vector<double> z(n_sites, 0.0);
    const auto amps = psi.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p == 0.0) continue;
        for (int n = 1; n <= n_sites; ++n) z[n - 1] += p * spin_at(i, n_sites, n);
    }
    return z;
}

double particle_density(const StateVector& psi) {
    const auto z = local_magnetization(psi);
    const int n_sites = psi.n_sites();
    double sum = 0.0;
    for (int n = 1; n <= n_sites; ++n) sum += stagger(n) * z[n - 1] + 1.0;
    return std::clamp(sum / (2.0 * n_sites), 0.0, 1.0);
}

double total_magnetization(const StateVector& psi) {
    double m = 0.0;
    const auto amps = psi.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        m += std::norm(amps[i]) * magnetization_of(i, psi.n_sites());
    return m;
}

std::vector<double> electric_field_expectation(const StateVector& psi, int eps0) {
    const auto z = local_magnetization(psi);
    const int n_sites = psi.n_sites();
    std::vector<double> links(std::max(n_sites - 1, 0));
    double field = eps0;
    for (int n = 1; n <= n_sites - 1; ++n) {
        field += 0.5 * (z[n - 1] + stagger(n));
        links[n - 1] = field;
    }
    return links;
}

double rate_function_lambda(double loschmidt, int n_sites, bool* overflow) {
    if (n_sites < 1) throw ParameterError("n_sites must be positive");
    const bool clamped = !(loschmidt >= loschmidt_floor);
    if (overflow) *overflow = clamped;
    return -std::log(clamped ? loschmidt_floor : std::min(loschmidt, 1.0)) / n_sites;
}

double rate_function_kappa(double loschmidt, double spacing, int n_sites, bool* overflow) {
    if (!(spacing > 0.0)) throw ParameterError("lattice spacing must be positive");
    return rate_function_lambda(loschmidt, n_sites, overflow) / spacing;
}

VacuumPersistence vacuum_persistence(const StateVector& psi0, const StateVector& psi_t) {
    if (psi0.n_sites() != psi_t.n_sites()) throw ParameterError("states have different sizes");
    VacuumPersistence v;
    v.n_sites = psi0.n_sites();
    v.amplitude = overlap(psi0, psi_t);
    v.loschmidt = std::norm(v.amplitude);
    v.rate = rate_function_lambda(v.loschmidt, v.n_sites, &v.overflow);
    return v;
}

double von_neumann_entropy(const DensityBlock& rho) {
    const Eigen::VectorXd p = rho.eigenvalues();
    double s = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (p(k) > 1e-14) s -= p(k) * std::log(p(k));
    return s;
}

double half_chain_entropy(const StateVector& psi, int cut) {
    return von_neumann_entropy(reduced_density(psi, cut));
}

double extended_state_entropy(const StateVector& psi, int cut, int eps0, BoundaryLink boundary_link) {
    const int n_sites = psi.n_sites();
    if (n_sites > 12) throw ParameterError("extended_state_entropy is limited to N <= 12");
    if (cut < 1 || cut > n_sites - 1) throw ParameterError("cut must lie in [1, N-1]");

    constexpr double support_floor = 1e-14;
    const auto amps = psi.amplitudes();
    int sector = 0;
    bool first = true;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (std::abs(amps[i]) <= support_floor) continue;
        const int m = magnetization_of(i, n_sites);
        if (first) sector = m, first = false;
        else if (m != sector)
            throw ParameterError("extended_state_entropy: state mixes magnetization sectors");
    }

    // Link register values are shifted into 0..link_dim-1 with link_dim >= N + 1.
    const int link_dim = n_sites + 1 + 2 * std::abs(eps0);
    const int offset = n_sites / 2 + std::abs(eps0);
    const auto encode = [&](int field) {
        const int v = field + offset;
        if (v < 0 || v >= link_dim) throw std::logic_error("link value outside the register");
        return v;
    };

    // Each block's key: its spins followed by its link register values.
    using Key = std::vector<int>;
    std::map<Key, int> left_index, right_index;
    struct Entry {
        int left, right;
        Complex amplitude;
    };
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (std::abs(amps[i]) <= support_floor) continue;
        const auto config = basis_state_of(i, n_sites);
        const auto links = gauss_field_profile(config, eps0).links;

        Key left, right;
        for (int n = 1; n <= cut; ++n) left.push_back(config.spins[n - 1]);
        for (int n = cut + 1; n <= n_sites; ++n) right.push_back(config.spins[n - 1]);
        for (int k = 1; k <= cut - 1; ++k) left.push_back(encode(links[k - 1]));
        for (int k = cut + 1; k <= n_sites - 1; ++k) right.push_back(encode(links[k - 1]));
        (boundary_link == BoundaryLink::left ? left : right).push_back(encode(links[cut - 1]));

        const auto li = left_index.emplace(left, static_cast<int>(left_index.size())).first->second;
        const auto ri = right_index.emplace(right, static_cast<int>(right_index.size())).first->second;
        entries.push_back({li, ri, amps[i]});
    }

    Eigen::MatrixXcd coefficients =
        Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(left_index.size()),
                               static_cast<Eigen::Index>(right_index.size()));
    for (const auto& e : entries) coefficients(e.left, e.right) += e.amplitude;
    coefficients /= coefficients.norm();

    DensityBlock rho;
    rho.n_sites_kept = cut;
    rho.matrix = coefficients * coefficients.adjoint();
    return von_neumann_entropy(rho);
}

} // namespace schwinger
