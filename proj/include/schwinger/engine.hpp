#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "schwinger/model.hpp"
#include "schwinger/state.hpp"

namespace schwinger {

/// Matrix-free form of a HamiltonianTerms: the diagonal (ZZ, Z and constant)
/// tabulated over all configurations plus the list of flip-flop bonds.
class SpinHamiltonian {
  public:
    explicit SpinHamiltonian(const HamiltonianTerms& terms);

    int n_sites() const { return n_sites_; }
    std::size_t dim() const { return diagonal_.size(); }
    std::span<const double> diagonal() const { return diagonal_; }

    /// out = H in. `out` must not alias `in`.
    void apply(std::span<const Complex> in, std::span<Complex> out) const;
    double expectation(const StateVector& psi) const;

    /// Cheap upper bound on the spectral norm.
    double norm_bound() const { return norm_bound_; }

  private:
    struct Bond {
        std::uint64_t mask;
        double coefficient;
    };

    int n_sites_;
    std::vector<double> diagonal_;
    std::vector<Bond> bonds_;
    double norm_bound_ = 0.0;
};

/// H|psi> without materializing H. The result is not normalized.
ComplexVector apply_hamiltonian(const HamiltonianTerms& h, const StateVector& psi);

struct EvolveOptions {
    double tol = 1e-9;
    int krylov_dim = 30;
    long max_substeps = 1'000'000;
};

/// e^{-iHt}|psi> by Lanczos-Krylov substepping. The summed a-posteriori error
/// estimate of all substeps stays below tol; the result is renormalized.
StateVector evolve_exact(const SpinHamiltonian& h, const StateVector& psi, double t,
                         const EvolveOptions& options = {});
StateVector evolve_exact(const HamiltonianTerms& h, const StateVector& psi, double t,
                         double tol = 1e-9);

struct GroundStateOptions {
    double tol = 1e-10;
    /// Restrict the search to a fixed total magnetization sector.
    std::optional<int> magnetization;
    int max_krylov = 150;
    int max_restarts = 200;
};

struct GroundState {
    double energy = 0.0;
    StateVector state{2};
    /// Distance to the second Ritz value of the final Krylov space.
    double gap_estimate = 0.0;
    bool degenerate = false;
    double residual = 0.0;
};

/// Lowest eigenpair. The state is phase-fixed so that the largest amplitude
/// (first in basis order among ties) is real positive.
GroundState ground_state(const SpinHamiltonian& h, const GroundStateOptions& options = {});
GroundState ground_state(const HamiltonianTerms& h, const GroundStateOptions& options = {});

/// Hermitian unit-trace block of a reduced density matrix.
struct DensityBlock {
    int n_sites_kept = 0;
    Eigen::MatrixXcd matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
    Eigen::VectorXd eigenvalues() const;
};

/// rho_A for A = sites 1..cut (sites cut+1..N traced out).
DensityBlock reduced_density(const StateVector& psi, int cut);
/// rho_B for B = sites cut+1..N (sites 1..cut traced out).
DensityBlock reduced_density_right(const StateVector& psi, int cut);

} // namespace schwinger
