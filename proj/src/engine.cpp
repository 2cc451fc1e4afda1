#include "schwinger/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "schwinger/error.hpp"
#include "schwinger/random.hpp"

namespace schwinger {

namespace {

using Tridiagonal = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>;

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double norm2(std::span<const Complex> x) {
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

void scale(std::span<Complex> x, double a) {
    for (auto& v : x) v *= a;
}

// One Lanczos sweep with full reorthogonalization. basis[0] must hold a unit
// vector. Returns the number of basis vectors built (m); beta holds m entries
// unless the sweep broke down (exact invariant subspace), then m - 1.
struct LanczosSweep {
    std::vector<double> alpha;
    std::vector<double> beta;
    bool breakdown = false;
};

template <typename Project>
LanczosSweep lanczos(const SpinHamiltonian& h, std::vector<ComplexVector>& basis, int m_max,
                     double breakdown_scale, Project&& project) {
    LanczosSweep sweep;
    for (int j = 0; j < m_max; ++j) {
        auto& w = basis[j + 1];
        h.apply(basis[j], w);
        project(w);
        const double a = inner_product(basis[j], w).real();
        axpy(-a, basis[j], w);
        if (j > 0) axpy(-sweep.beta[j - 1], basis[j - 1], w);
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k <= j; ++k) axpy(-inner_product(basis[k], w), basis[k], w);
        sweep.alpha.push_back(a);
        const double b = norm2(w);
        if (b <= 1e-13 * breakdown_scale) {
            sweep.breakdown = true;
            break;
        }
        sweep.beta.push_back(b);
        scale(w, 1.0 / b);
    }
    return sweep;
}

Tridiagonal diagonalize(const LanczosSweep& sweep, int m) {
    Eigen::VectorXd diag(m), sub(std::max(m - 1, 0));
    for (int k = 0; k < m; ++k) diag(k) = sweep.alpha[k];
    for (int k = 0; k + 1 < m; ++k) sub(k) = sweep.beta[k];
    Tridiagonal es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    return es;
}

void check_match(int n_sites, const StateVector& psi) {
    if (psi.n_sites() != n_sites)
        throw ParameterError("Hamiltonian and state have different numbers of sites");
}

} // namespace

SpinHamiltonian::SpinHamiltonian(const HamiltonianTerms& terms) : n_sites_(terms.n_sites) {
    if (n_sites_ < 1 || n_sites_ > max_sites) throw ParameterError("invalid n_sites in Hamiltonian");
    const auto check_site = [&](int n) {
        if (n < 1 || n > n_sites_) throw ParameterError("Hamiltonian term references a site out of range");
    };
    for (const auto& t : terms.zz_pairs) check_site(t.n), check_site(t.l);
    for (const auto& t : terms.z_fields) check_site(t.n);
    for (const auto& t : terms.pm_pairs) {
        check_site(t.n), check_site(t.l);
        if (t.n == t.l) throw ParameterError("flip-flop term needs two distinct sites");
    }

    const std::size_t dim = std::size_t{1} << n_sites_;
    diagonal_.assign(dim, terms.constant);
    for (std::size_t i = 0; i < dim; ++i) {
        double e = terms.constant;
        for (const auto& t : terms.zz_pairs)
            e += t.coefficient * spin_at(i, n_sites_, t.n) * spin_at(i, n_sites_, t.l);
        for (const auto& t : terms.z_fields) e += t.coefficient * spin_at(i, n_sites_, t.n);
        diagonal_[i] = e;
    }
    double off = 0.0;
    for (const auto& t : terms.pm_pairs) {
        const std::uint64_t mask = (std::uint64_t{1} << site_bit(n_sites_, t.n)) |
                                   (std::uint64_t{1} << site_bit(n_sites_, t.l));
        bonds_.push_back({mask, t.coefficient});
        off += std::abs(t.coefficient);
    }
    double diag_max = 0.0;
    for (double d : diagonal_) diag_max = std::max(diag_max, std::abs(d));
    norm_bound_ = diag_max + off;
}

void SpinHamiltonian::apply(std::span<const Complex> in, std::span<Complex> out) const {
    if (in.size() != dim() || out.size() != dim())
        throw ParameterError("vector size does not match the Hamiltonian dimension");
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) out[i] = diagonal_[i] * in[i];
    for (const auto& bond : bonds_) {
        // sigma^+ sigma^- + h.c. only connects anti-aligned pairs.
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t bits = i & bond.mask;
            if (bits != 0 && bits != bond.mask) out[i] += bond.coefficient * in[i ^ bond.mask];
        }
    }
}

double SpinHamiltonian::expectation(const StateVector& psi) const {
    check_match(n_sites_, psi);
    ComplexVector h_psi(dim());
    apply(psi.amplitudes(), h_psi);
    return inner_product(psi.amplitudes(), h_psi).real();
}

ComplexVector apply_hamiltonian(const HamiltonianTerms& h, const StateVector& psi) {
    check_match(h.n_sites, psi);
    SpinHamiltonian op(h);
    ComplexVector out(op.dim());
    op.apply(psi.amplitudes(), out);
    return out;
}

StateVector evolve_exact(const SpinHamiltonian& h, const StateVector& psi, double t,
                         const EvolveOptions& options) {
    check_match(h.n_sites(), psi);
    if (!std::isfinite(t)) throw ParameterError("evolution time must be finite");
    if (!(options.tol > 0.0)) throw ParameterError("evolution tolerance must be positive");
    if (t == 0.0) return psi;

    const std::size_t dim = h.dim();
    const int m_max = static_cast<int>(std::min<std::size_t>(std::max(options.krylov_dim, 2), dim));
    const double total = std::abs(t);
    const double direction = t > 0.0 ? 1.0 : -1.0;
    const double breakdown_scale = std::max(1.0, h.norm_bound());

    std::vector<ComplexVector> basis(m_max + 1, ComplexVector(dim));
    ComplexVector v(psi.amplitudes().begin(), psi.amplitudes().end());
    double done = 0.0;
    long substeps = 0;
    double tau_hint = total;

    while (done < total) {
        if (++substeps > options.max_substeps) {
            std::ostringstream msg;
            msg << "evolve_exact: exceeded " << options.max_substeps << " substeps at t=" << done
                << " of " << total << " (tol=" << options.tol << ", krylov_dim=" << m_max << ")";
            throw NumericalError(msg.str());
        }
        const double beta0 = norm2(v);
        std::copy(v.begin(), v.end(), basis[0].begin());
        scale(basis[0], 1.0 / beta0);

        const auto sweep = lanczos(h, basis, m_max, breakdown_scale, [](auto&) {});
        const int m = static_cast<int>(sweep.alpha.size());
        const auto es = diagonalize(sweep, m);
        const Eigen::VectorXd& lambda = es.eigenvalues();
        const Eigen::MatrixXd& q = es.eigenvectors();
        const double tail = sweep.breakdown ? 0.0 : sweep.beta[m - 1];

        const auto coefficients = [&](double tau) {
            Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m);
            for (int k = 0; k < m; ++k) {
                const Complex phase = std::exp(Complex(0.0, -direction * tau * lambda(k)));
                c += (phase * q(0, k)) * q.col(k).cast<Complex>();
            }
            return c;
        };

        const double remaining = total - done;
        double tau = std::min(remaining, tau_hint);
        Eigen::VectorXcd c;
        for (;;) {
            c = coefficients(tau);
            const double estimate = tail * std::abs(c(m - 1));
            if (estimate <= options.tol * tau / total) break;
            tau *= 0.5;
            if (tau < total * 1e-14) {
                std::ostringstream msg;
                msg << "evolve_exact: step size underflow at t=" << done << " (estimate "
                    << estimate << ", tol " << options.tol << ")";
                throw NumericalError(msg.str());
            }
        }

        std::fill(v.begin(), v.end(), Complex{});
        for (int k = 0; k < m; ++k) axpy(beta0 * c(k), basis[k], v);

        const bool last = tau >= remaining;
        done = last ? total : done + tau;
        // Let the next substep try a larger window than the one just accepted.
        tau_hint = 2.0 * tau;
    }

    auto out = StateVector::from_amplitudes(psi.n_sites(), std::move(v));
    return out;
}

StateVector evolve_exact(const HamiltonianTerms& h, const StateVector& psi, double t, double tol) {
    check_match(h.n_sites, psi);
    EvolveOptions options;
    options.tol = tol;
    return evolve_exact(SpinHamiltonian(h), psi, t, options);
}

namespace {

void fix_phase(ComplexVector& v) {
    double largest = 0.0;
    for (const auto& a : v) largest = std::max(largest, std::abs(a));
    // First configuration (in basis order) whose magnitude ties with the maximum.
    std::size_t k = 0;
    while (std::abs(v[k]) < largest * (1.0 - 1e-8)) ++k;
    const Complex phase = std::conj(v[k]) / std::abs(v[k]);
    for (auto& x : v) x *= phase;
    v[k] = std::abs(v[k]);
}

} // namespace

GroundState ground_state(const SpinHamiltonian& h, const GroundStateOptions& options) {
    if (!(options.tol > 0.0)) throw ParameterError("ground-state tolerance must be positive");
    const int n_sites = h.n_sites();
    const std::size_t dim = h.dim();

    std::vector<char> allowed(dim, 1);
    std::size_t sector_dim = dim;
    if (options.magnetization) {
        sector_dim = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            allowed[i] = magnetization_of(i, n_sites) == *options.magnetization;
            sector_dim += allowed[i];
        }
        if (sector_dim == 0) throw ParameterError("empty magnetization sector");
    }
    const auto project = [&](ComplexVector& x) {
        if (!options.magnetization) return;
        for (std::size_t i = 0; i < dim; ++i)
            if (!allowed[i]) x[i] = 0.0;
    };

    // Deterministic start vector with generic overlap on every configuration.
    ComplexVector start(dim);
    for (std::size_t i = 0; i < dim; ++i) start[i] = 2.0 * unit_interval(0x5eedULL, i, 0) - 1.0;
    project(start);

    const int m_max = static_cast<int>(std::min<std::size_t>(options.max_krylov, sector_dim));
    std::vector<ComplexVector> basis(m_max + 1, ComplexVector(dim));
    const double breakdown_scale = std::max(1.0, h.norm_bound());

    // Restarted Lanczos for the lowest eigenpair of h restricted by `restrict`.
    const auto lowest = [&](ComplexVector ritz, const auto& restrict) {
        double e = 0.0;
        bool converged = false;
        for (int restart = 0; restart <= options.max_restarts && !converged; ++restart) {
            const double nrm = norm2(ritz);
            if (nrm == 0.0) return std::pair{std::numeric_limits<double>::infinity(), ritz};
            std::copy(ritz.begin(), ritz.end(), basis[0].begin());
            scale(basis[0], 1.0 / nrm);
            const auto sweep = lanczos(h, basis, m_max, breakdown_scale, restrict);
            const int m = static_cast<int>(sweep.alpha.size());
            const auto es = diagonalize(sweep, m);
            e = es.eigenvalues()(0);
            const double norm_est =
                std::max({1.0, std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(m - 1))});
            const double tail = sweep.breakdown ? 0.0 : sweep.beta[m - 1];
            const double estimate = tail * std::abs(es.eigenvectors()(m - 1, 0));

            std::fill(ritz.begin(), ritz.end(), Complex{});
            for (int k = 0; k < m; ++k) axpy(es.eigenvectors()(k, 0), basis[k], ritz);
            converged = sweep.breakdown || estimate <= 0.1 * options.tol * norm_est;
        }
        return std::pair{e, ritz};
    };

    auto [energy, ritz] = lowest(start, project);
    auto state = StateVector::from_amplitudes(n_sites, std::move(ritz));
    ComplexVector h_psi(dim);
    h.apply(state.amplitudes(), h_psi);
    energy = inner_product(state.amplitudes(), h_psi).real();
    axpy(-energy, state.amplitudes(), h_psi);
    const double residual = norm2(h_psi);
    if (residual > options.tol * std::max(1.0, h.norm_bound())) {
        std::ostringstream msg;
        msg << "ground_state: residual " << residual << " above tolerance after "
            << options.max_restarts << " restarts";
        throw NumericalError(msg.str());
    }

    // A Krylov space built from one vector never resolves an exact degeneracy, so the gap comes from a
    // second run deflated against the converged state.
    const auto& g = state.amplitudes();
    const auto deflate = [&](ComplexVector& x) {
        project(x);
        const Complex c = inner_product(g, x);
        for (std::size_t i = 0; i < dim; ++i) x[i] -= c * g[i];
    };
    double gap = std::numeric_limits<double>::infinity();
    if (sector_dim > 1) {
        ComplexVector second(dim);
        for (std::size_t i = 0; i < dim; ++i) second[i] = 2.0 * unit_interval(0xdef1a7eULL, i, 0) - 1.0;
        deflate(second);
        gap = lowest(std::move(second), deflate).first - energy;
    }

    fix_phase(state.mutable_amplitudes());
    GroundState result;
    result.energy = energy;
    result.state = std::move(state);
    result.gap_estimate = gap;
    result.degenerate = gap < 1e-10;
    result.residual = residual;
    return result;
}

GroundState ground_state(const HamiltonianTerms& h, const GroundStateOptions& options) {
    return ground_state(SpinHamiltonian(h), options);
}

Eigen::VectorXd DensityBlock::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_cut(const StateVector& psi, int cut) {
    if (cut < 1 || cut > psi.n_sites() - 1)
        throw ParameterError("cut must lie in [1, N-1], got " + std::to_string(cut));
}

DensityBlock finish(Eigen::MatrixXcd rho, int kept) {
    DensityBlock block;
    block.n_sites_kept = kept;
    block.matrix = 0.5 * (rho + rho.adjoint());
    return block;
}

} // namespace

DensityBlock reduced_density(const StateVector& psi, int cut) {
    check_cut(psi, cut);
    const Eigen::Index rows = Eigen::Index{1} << cut;
    const Eigen::Index cols = Eigen::Index{1} << (psi.n_sites() - cut);
    Eigen::Map<const RowMajorMatrix> amplitudes(psi.amplitudes().data(), rows, cols);
    return finish(amplitudes * amplitudes.adjoint(), cut);
}

DensityBlock reduced_density_right(const StateVector& psi, int cut) {
    check_cut(psi, cut);
    const Eigen::Index rows = Eigen::Index{1} << cut;
    const Eigen::Index cols = Eigen::Index{1} << (psi.n_sites() - cut);
    Eigen::Map<const RowMajorMatrix> amplitudes(psi.amplitudes().data(), rows, cols);
    return finish(amplitudes.transpose() * amplitudes.conjugate(), psi.n_sites() - cut);
}

} // namespace schwinger
