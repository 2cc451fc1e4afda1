#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace schwinger {

// Sites are 1-indexed in every formula of this module (site 1 .. site N).
// Containers are 0-indexed: element k describes site k + 1, link k describes
// the link between sites k + 1 and k + 2.

/// Couplings of the lattice theory: N sites, hopping w, electric energy J,
/// fermion mass m, entangling-gate strength J0 and background field eps0.
struct ModelParams {
    int n_sites = 2;
    double w = 1.0;
    double j = 0.0;
    double mass = 0.0;
    double j0 = 1.0;
    int eps0 = 0;

    /// Throws ParameterError naming the first invalid field.
    void validate() const;
    /// Same checks without the even-N requirement. The spin Hamiltonian and
    /// the gate protocol are well defined for any N >= 2; only the staggered
    /// lattice interpretation needs complete unit cells.
    void validate_couplings() const;
};

struct ZZTerm {
    int n;  // 1-indexed, n < l
    int l;
    double coefficient;
};

struct FlipFlopTerm {
    int n;  // acts on (n, n + 1)
    int l;
    double coefficient;
};

struct ZField {
    int n;
    double coefficient;
};

/// Symbolic encoded spin Hamiltonian H = H_zz + H_pm + H_z (+ constant).
struct HamiltonianTerms {
    int n_sites = 0;
    std::vector<ZZTerm> zz_pairs;
    std::vector<FlipFlopTerm> pm_pairs;
    std::vector<ZField> z_fields;
    double constant = 0.0;
};

struct BuildOptions {
    /// Keep the c-number energy offset produced by expanding sum_n L_n^2.
    bool include_constant = false;
};

/// Encoded Hamiltonian with the gauge fields eliminated through the Gauss law.
/// Requires eps0 == 0.
HamiltonianTerms build_hamiltonian(const ModelParams& params, BuildOptions options = {});

/// Per-site longitudinal field h_n of the local part, n = 1..N.
std::vector<double> local_field_coefficients(const ModelParams& params);

/// The three parts separately; each has the other groups empty.
HamiltonianTerms zz_part(const HamiltonianTerms& h);
HamiltonianTerms flip_flop_part(const HamiltonianTerms& h);
HamiltonianTerms local_part(const HamiltonianTerms& h);

enum class CouplingDiagonal {
    zero,
    /// Diagonal filled in with the self-couplings generated by the nested
    /// entangling windows {1..m}, m = 2..N-1. This matrix is the sum of N-2
    /// rank-one window projectors and has rank N-2.
    window_completed,
};

/// Symmetric N x N ZZ coupling matrix, entry (n, l) = (J/2)(N - max(n, l)).
Eigen::MatrixXd coupling_matrix(const ModelParams& params,
                                CouplingDiagonal diagonal = CouplingDiagonal::zero);

/// sigma^z eigenvalues per site, +1 = occupied.
struct BasisState {
    std::vector<int> spins;

    int n_sites() const { return static_cast<int>(spins.size()); }
    int magnetization() const;
};

/// Electric field on the N-1 links.
struct FieldProfile {
    std::vector<int> links;
};

/// Neel pattern (+1, -1, +1, ...): the zero-particle state.
BasisState bare_vacuum(int n_sites);

/// L_n = eps0 + 1/2 sum_{l<=n} (s_l + (-1)^l), accumulated from the left boundary.
FieldProfile gauss_field_profile(const BasisState& state, int eps0);

/// Same field reconstructed from the right boundary,
/// L_n = eps0 - 1/2 sum_{l>n} (s_l + (-1)^l). Agrees with the left
/// reconstruction exactly when the total magnetization vanishes.
FieldProfile gauss_field_profile_from_right(const BasisState& state, int eps0);

/// (-1)^n for a 1-indexed site.
constexpr int stagger(int n) { return (n % 2 == 0) ? 1 : -1; }

} // namespace schwinger
