#pragma once

// Reference constructions used only by the tests. Everything here is built
// from the unencoded lattice Hamiltonian with explicit Kronecker products, so
// it shares no code with the library's matrix-free kernels or dense helpers.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "schwinger/state.hpp"

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Single-site matrices in the (up, down) basis; up = occupied = sigma^z +1.
inline Mat sx() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat sy() { Mat m(2, 2); m << 0, cd(0, -1), cd(0, 1), 0; return m; }
inline Mat sz() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }
inline Mat splus() { Mat m(2, 2); m << 0, 1, 0, 0; return m; }
inline Mat sminus() { Mat m(2, 2); m << 0, 0, 1, 0; return m; }

// Site 1 is the leftmost Kronecker factor, i.e. the most significant bit.
inline Mat on_site(int n_sites, int site, const Mat& op) {
    Mat out = Mat::Identity(1, 1);
    for (int s = 1; s <= n_sites; ++s) out = kron(out, s == site ? op : Mat::Identity(2, 2));
    return out;
}

inline int stag(int n) { return n % 2 == 0 ? 1 : -1; }

// Electric field operator on link n (diagonal), eps0 = 0.
inline Mat link_field(int n_sites, int n) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    Mat out = Mat::Zero(d, d);
    for (int l = 1; l <= n; ++l)
        out += 0.5 * (on_site(n_sites, l, sz()) + stag(l) * Mat::Identity(d, d));
    return out;
}

// Lattice Hamiltonian before gauge elimination:
//   w sum (s+_n s-_{n+1} + h.c.) + m/2 sum (-1)^n Z_n + J sum_{n<N} L_n^2.
inline Mat lattice_hamiltonian(int n_sites, double w, double j, double m) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    Mat h = Mat::Zero(d, d);
    for (int n = 1; n < n_sites; ++n) {
        Mat hop = on_site(n_sites, n, splus()) * on_site(n_sites, n + 1, sminus());
        h += w * (hop + Mat(hop.adjoint()));
    }
    for (int n = 1; n <= n_sites; ++n) h += 0.5 * m * stag(n) * on_site(n_sites, n, sz());
    for (int n = 1; n < n_sites; ++n) {
        Mat l = link_field(n_sites, n);
        h += j * l * l;
    }
    return h;
}

inline Mat zz_hamiltonian(int n_sites, double j) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    Mat h = Mat::Zero(d, d);
    for (int n = 1; n < n_sites; ++n)
        for (int l = n + 1; l < n_sites; ++l)
            h += 0.5 * j * (n_sites - l) * on_site(n_sites, n, sz()) * on_site(n_sites, l, sz());
    return h;
}

inline Mat flip_flop_hamiltonian(int n_sites, double w) {
    return lattice_hamiltonian(n_sites, w, 0.0, 0.0);
}

inline Mat expm(const Mat& h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec phases = (es.eigenvalues().cast<cd>() * cd(0, -t)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double opnorm(const Mat& a) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

inline double min_eigenvalue(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline Vec to_vec(const schwinger::StateVector& psi) {
    Vec v(static_cast<Eigen::Index>(psi.dim()));
    for (std::size_t i = 0; i < psi.dim(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
    return v;
}

inline schwinger::StateVector from_vec(int n_sites, const Vec& v) {
    return schwinger::StateVector::from_amplitudes(n_sites,
                                                   schwinger::ComplexVector(v.data(), v.data() + v.size()));
}

inline schwinger::StateVector random_state(int n_sites, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    schwinger::ComplexVector amps(std::size_t{1} << n_sites);
    for (auto& a : amps) a = cd(g(gen), g(gen));
    return schwinger::StateVector::from_amplitudes(n_sites, amps);
}

inline int popcount_down(std::uint64_t i) { return __builtin_popcountll(i); }

// Random superposition restricted to total magnetization m.
inline schwinger::StateVector random_sector_state(int n_sites, int m, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g;
    schwinger::ComplexVector amps(std::size_t{1} << n_sites);
    for (std::size_t i = 0; i < amps.size(); ++i)
        if (n_sites - 2 * popcount_down(i) == m) amps[i] = cd(g(gen), g(gen));
    return schwinger::StateVector::from_amplitudes(n_sites, amps);
}

// rho_A by explicit index loops: A = leading `cut` sites.
inline Mat partial_trace(const schwinger::StateVector& psi, int cut) {
    const int nb = psi.n_sites() - cut;
    const std::size_t da = std::size_t{1} << cut, db = std::size_t{1} << nb;
    Mat rho = Mat::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t a2 = 0; a2 < da; ++a2) {
            cd s = 0;
            for (std::size_t b = 0; b < db; ++b) s += psi[a * db + b] * std::conj(psi[a2 * db + b]);
            rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a2)) = s;
        }
    return rho;
}

inline double entropy_of(const Mat& rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    double s = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 1e-14) s -= p * std::log(p);
    }
    return s;
}

inline double density(const Vec& v, int n_sites) {
    double nu = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double p = std::norm(v(i));
        for (int n = 1; n <= n_sites; ++n) {
            const int s = ((i >> (n_sites - n)) & 1) ? -1 : 1;
            nu += p * (stag(n) * s + 1);
        }
    }
    return nu / (2.0 * n_sites);
}

} // namespace oracle
