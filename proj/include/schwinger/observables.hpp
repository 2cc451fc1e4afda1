#pragma once

#include <string>
#include <vector>

#include "schwinger/engine.hpp"
#include "schwinger/state.hpp"

namespace schwinger {

/// <sigma^z_n> for n = 1..N (element n-1).
std::vector<double> local_magnetization(const StateVector& psi);

/// nu = 1/(2N) sum_n <(-1)^n sigma^z_n + 1>, in [0, 1].
double particle_density(const StateVector& psi);

/// <sum_n sigma^z_n>.
double total_magnetization(const StateVector& psi);

/// <L_n> = eps0 + 1/2 sum_{l<=n} (<sigma^z_l> + (-1)^l), n = 1..N-1.
std::vector<double> electric_field_expectation(const StateVector& psi, int eps0);

struct VacuumPersistence {
    Complex amplitude;      // G = <psi0|psi_t>
    double loschmidt = 0.0; // |G|^2
    double rate = 0.0;      // lambda = -log(|G|^2) / N
    int n_sites = 0;
    /// |G|^2 fell below the representable floor; rate is clamped.
    bool overflow = false;
};

constexpr double loschmidt_floor = 1e-300;

VacuumPersistence vacuum_persistence(const StateVector& psi0, const StateVector& psi_t);

/// -log(L) / N with the same underflow guard; sets `overflow` if clamped.
double rate_function_lambda(double loschmidt, int n_sites, bool* overflow = nullptr);

/// kappa = -log(L) / (a N): rate per unit length.
double rate_function_kappa(double loschmidt, double spacing, int n_sites, bool* overflow = nullptr);

/// Von Neumann entropy (natural log) of a density block; eigenvalues below 1e-14 are skipped.
double von_neumann_entropy(const DensityBlock& rho);

/// Entropy of sites 1..cut.
double half_chain_entropy(const StateVector& psi, int cut);

enum class BoundaryLink { left, right };

/// Block entropy of the state re-embedded in the full matter + gauge-link
/// Hilbert space: every configuration gets its Gauss-law link register, the
/// link crossing the cut goes to the block named by `boundary_link`.
/// psi must live in a single magnetization sector. Test oracle, N <= 12.
double extended_state_entropy(const StateVector& psi, int cut, int eps0, BoundaryLink boundary_link);

} // namespace schwinger
