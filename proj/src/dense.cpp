#include "schwinger/dense.hpp"

#include "schwinger/error.hpp"

namespace schwinger::dense {

namespace {

void check_dense(int n_sites) {
    if (n_sites < 1 || n_sites > max_dense_sites)
        throw ParameterError("dense construction limited to N <= " + std::to_string(max_dense_sites));
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_y() {
    Eigen::Matrix2cd m;
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

// Basis (|up>, |down>) per site, site 1 leftmost in the Kronecker product,
// which reproduces the "site 1 is the most significant bit" ordering.
Eigen::MatrixXcd site_operator(int n_sites, int site, const Eigen::Matrix2cd& op) {
    check_dense(n_sites);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int n = 1; n <= n_sites; ++n)
        out = kron(out, n == site ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd::Identity(2, 2));
    return out;
}

Eigen::MatrixXcd hamiltonian(const HamiltonianTerms& h) {
    const int n = h.n_sites;
    check_dense(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd out = h.constant * Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& t : h.zz_pairs)
        out += t.coefficient * site_operator(n, t.n, pauli_z()) * site_operator(n, t.l, pauli_z());
    for (const auto& t : h.z_fields) out += t.coefficient * site_operator(n, t.n, pauli_z());
    // sigma^+ sigma^- + h.c. = (XX + YY) / 2
    for (const auto& t : h.pm_pairs)
        out += 0.5 * t.coefficient *
               (site_operator(n, t.n, pauli_x()) * site_operator(n, t.l, pauli_x()) +
                site_operator(n, t.n, pauli_y()) * site_operator(n, t.l, pauli_y()));
    return out;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_norm(const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

Eigen::MatrixXcd sequence_unitary(const GateSequence& sequence, int n_sites) {
    check_dense(n_sites);
    const Eigen::Index dim = Eigen::Index{1} << n_sites;
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        QuantumRegister reg(StateVector::basis(n_sites, static_cast<std::uint64_t>(col)));
        reg.apply(sequence);
        for (Eigen::Index row = 0; row < dim; ++row) u(row, col) = reg.state()[row];
    }
    return u;
}

Eigen::MatrixXcd gate_unitary(const GateOp& gate, int n_sites) {
    check_dense(n_sites);
    const Eigen::Index dim = Eigen::Index{1} << n_sites;
    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(dim, dim);
    switch (gate.kind) {
    case GateKind::ms_xx:
        for (std::size_t a = 0; a < gate.sites.size(); ++a)
            for (std::size_t b = a + 1; b < gate.sites.size(); ++b)
                generator += gate.angles[0] * site_operator(n_sites, gate.sites[a], pauli_x()) *
                             site_operator(n_sites, gate.sites[b], pauli_x());
        break;
    case GateKind::local_y:
        for (int s = 1; s <= n_sites; ++s)
            generator += gate.angles[0] * site_operator(n_sites, s, pauli_y());
        break;
    case GateKind::local_z:
    case GateKind::dephase:
        for (std::size_t k = 0; k < gate.sites.size(); ++k)
            generator += gate.angles[k] * site_operator(n_sites, gate.sites[k], pauli_z());
        break;
    case GateKind::hide:
    case GateKind::unhide:
        break;
    }
    return expm_hermitian(generator, 1.0);
}

} // namespace schwinger::dense
