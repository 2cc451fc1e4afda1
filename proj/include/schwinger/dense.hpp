#pragma once

#include <Eigen/Dense>

#include "schwinger/gates.hpp"
#include "schwinger/model.hpp"

namespace schwinger::dense {

// Dense-matrix reference constructions. They are built from Kronecker
// products of Pauli matrices, independently of the matrix-free kernels, and
// are limited to small systems.

constexpr int max_dense_sites = 10;

/// 2x2 operator `op` on `site` (1-indexed) of an N-site register.
Eigen::MatrixXcd site_operator(int n_sites, int site, const Eigen::Matrix2cd& op);

Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

Eigen::MatrixXcd hamiltonian(const HamiltonianTerms& h);

/// exp(-i H t) for Hermitian H.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double t);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd& a);

/// Unitary of a hiding-free (or hide-balanced) gate sequence, column by column.
Eigen::MatrixXcd sequence_unitary(const GateSequence& sequence, int n_sites);

/// Unitary of a single gate built from Pauli exponentials.
Eigen::MatrixXcd gate_unitary(const GateOp& gate, int n_sites);

} // namespace schwinger::dense
