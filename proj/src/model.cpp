#include "schwinger/model.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "schwinger/error.hpp"
#include "schwinger/state.hpp"

namespace schwinger {

void ModelParams::validate() const {
    if (n_sites % 2 != 0) throw ParameterError("n_sites must be even and >= 2, got " + std::to_string(n_sites));
    validate_couplings();
}

void ModelParams::validate_couplings() const {
    if (n_sites < 2) throw ParameterError("n_sites must be >= 2, got " + std::to_string(n_sites));
    if (n_sites > max_sites) throw ParameterError("n_sites must be <= " + std::to_string(max_sites));
    if (!(w > 0.0) || !std::isfinite(w)) throw ParameterError("w must be positive and finite");
    if (!(j0 > 0.0) || !std::isfinite(j0)) throw ParameterError("j0 must be positive and finite");
    if (!(j >= 0.0) || !std::isfinite(j)) throw ParameterError("j must be non-negative and finite");
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw ParameterError("mass must be non-negative and finite");
}

std::vector<double> local_field_coefficients(const ModelParams& params) {
    const int n_sites = params.n_sites;
    std::vector<double> h(n_sites, 0.0);
    // Resummed: the field-energy offset on site n collects (k mod 2) for every link k >= n.
    int odd_links_to_right = 0;
    for (int n = n_sites; n >= 1; --n) {
        if (n <= n_sites - 1) odd_links_to_right += n % 2;
        h[n - 1] = 0.5 * params.mass * stagger(n) - 0.5 * params.j * odd_links_to_right;
    }
    return h;
}

HamiltonianTerms build_hamiltonian(const ModelParams& params, BuildOptions options) {
    params.validate_couplings();
    if (params.eps0 != 0)
        throw ParameterError("eps0: the encoded Hamiltonian is only built for zero background field");

    const int n_sites = params.n_sites;
    HamiltonianTerms h;
    h.n_sites = n_sites;

    if (params.j != 0.0) {
        for (int n = 1; n <= n_sites - 2; ++n)
            for (int l = n + 1; l <= n_sites - 1; ++l)
                h.zz_pairs.push_back({n, l, 0.5 * params.j * (n_sites - l)});
    }
    for (int n = 1; n <= n_sites - 1; ++n) h.pm_pairs.push_back({n, n + 1, params.w});

    const auto fields = local_field_coefficients(params);
    for (int n = 1; n <= n_sites; ++n)
        if (fields[n - 1] != 0.0) h.z_fields.push_back({n, fields[n - 1]});

    if (options.include_constant) {
        // J sum_n [ n/4 + (n mod 2)/4 ]: the c-number part of J sum_n L_n^2.
        double c = 0.0;
        for (int n = 1; n <= n_sites - 1; ++n) c += 0.25 * (n + n % 2);
        h.constant = params.j * c;
    }
    return h;
}

HamiltonianTerms zz_part(const HamiltonianTerms& h) {
    HamiltonianTerms part;
    part.n_sites = h.n_sites;
    part.zz_pairs = h.zz_pairs;
    return part;
}

HamiltonianTerms flip_flop_part(const HamiltonianTerms& h) {
    HamiltonianTerms part;
    part.n_sites = h.n_sites;
    part.pm_pairs = h.pm_pairs;
    return part;
}

HamiltonianTerms local_part(const HamiltonianTerms& h) {
    HamiltonianTerms part;
    part.n_sites = h.n_sites;
    part.z_fields = h.z_fields;
    part.constant = h.constant;
    return part;
}

Eigen::MatrixXd coupling_matrix(const ModelParams& params, CouplingDiagonal diagonal) {
    params.validate_couplings();
    const int n_sites = params.n_sites;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_sites, n_sites);
    for (int n = 1; n <= n_sites; ++n) {
        for (int l = 1; l <= n_sites; ++l) {
            const int far = std::max(n, l);
            if (far > n_sites - 1) continue;
            if (n != l) {
                c(n - 1, l - 1) = 0.5 * params.j * (n_sites - far);
            } else if (diagonal == CouplingDiagonal::window_completed) {
                // Number of windows {1..m}, m = max(2, n)..N-1, containing site n.
                c(n - 1, n - 1) = 0.5 * params.j * (n_sites - std::max(n, 2));
            }
        }
    }
    return c;
}

int BasisState::magnetization() const {
    int m = 0;
    for (int s : spins) m += s;
    return m;
}

BasisState bare_vacuum(int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw ParameterError("n_sites must be even and >= 2, got " + std::to_string(n_sites));
    BasisState state;
    state.spins.resize(n_sites);
    for (int n = 1; n <= n_sites; ++n) state.spins[n - 1] = -stagger(n);
    return state;
}

namespace {

void check_spins(const BasisState& state) {
    if (state.spins.empty()) throw ParameterError("basis state has no sites");
    for (int s : state.spins)
        if (s != 1 && s != -1) throw ParameterError("basis state spins must be +1 or -1");
}

// s_l + (-1)^l is always even for valid spins, so the half is exact.
int site_charge_step(int spin, int site) {
    const int twice = spin + stagger(site);
    if (twice % 2 != 0) throw std::logic_error("half-integral Gauss-law increment");
    return twice / 2;
}

} // namespace

FieldProfile gauss_field_profile(const BasisState& state, int eps0) {
    check_spins(state);
    const int n_sites = state.n_sites();
    FieldProfile profile;
    profile.links.reserve(n_sites - 1);
    int field = eps0;
    for (int n = 1; n <= n_sites - 1; ++n) {
        field += site_charge_step(state.spins[n - 1], n);
        profile.links.push_back(field);
    }
    for (int n = 1; n <= n_sites - 1; ++n)
        if (std::abs(profile.links[n - 1]) > n / 2 + std::abs(eps0) + 1)
            throw std::logic_error("electric field exceeds the accumulated-charge bound");
    return profile;
}

FieldProfile gauss_field_profile_from_right(const BasisState& state, int eps0) {
    check_spins(state);
    const int n_sites = state.n_sites();
    FieldProfile profile;
    profile.links.assign(n_sites - 1, 0);
    int field = eps0;
    for (int n = n_sites - 1; n >= 1; --n) {
        field -= site_charge_step(state.spins[n], n + 1);
        profile.links[n - 1] = field;
    }
    return profile;
}

} // namespace schwinger
