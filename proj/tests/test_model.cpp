#include <doctest.h>

#include "oracle.hpp"
#include "schwinger/dense.hpp"
#include "schwinger/engine.hpp"
#include "schwinger/error.hpp"
#include "schwinger/model.hpp"
#include "schwinger/observables.hpp"

using namespace schwinger;

namespace {

ModelParams params(int n, double w, double j, double m) {
    ModelParams p;
    p.n_sites = n;
    p.w = w;
    p.j = j;
    p.mass = m;
    return p;
}

} // namespace

TEST_CASE("zz couplings for N=4") {
    auto h = build_hamiltonian(params(4, 1, 1, 1));
    REQUIRE(h.zz_pairs.size() == 3);
    CHECK(h.zz_pairs[0].n == 1);
    CHECK(h.zz_pairs[0].l == 2);
    CHECK(h.zz_pairs[0].coefficient == doctest::Approx(1.0));
    CHECK(h.zz_pairs[1].n == 1);
    CHECK(h.zz_pairs[1].l == 3);
    CHECK(h.zz_pairs[1].coefficient == doctest::Approx(0.5));
    CHECK(h.zz_pairs[2].n == 2);
    CHECK(h.zz_pairs[2].l == 3);
    CHECK(h.zz_pairs[2].coefficient == doctest::Approx(0.5));
    for (const auto& t : h.zz_pairs) CHECK(t.l < 4);
    REQUIRE(h.pm_pairs.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(h.pm_pairs[k].n == static_cast<int>(k) + 1);
        CHECK(h.pm_pairs[k].l == static_cast<int>(k) + 2);
        CHECK(h.pm_pairs[k].coefficient == 1.0);
    }
}

TEST_CASE("two sites have no zz terms") {
    for (double j : {0.0, 0.3, 5.0}) CHECK(build_hamiltonian(params(2, 1, j, 1)).zz_pairs.empty());
}

TEST_CASE("pure mass gives staggered fields") {
    auto h = build_hamiltonian(params(4, 1, 0, 2));
    REQUIRE(h.z_fields.size() == 4);
    const double expected[] = {-1, 1, -1, 1};
    for (int k = 0; k < 4; ++k) {
        CHECK(h.z_fields[k].n == k + 1);
        CHECK(h.z_fields[k].coefficient == doctest::Approx(expected[k]));
    }
}

TEST_CASE("local field coefficients follow the resummed offsets") {
    for (int n_sites : {2, 4, 6, 8}) {
        auto p = params(n_sites, 0.7, 1.3, 0.9);
        auto h = local_field_coefficients(p);
        REQUIRE(h.size() == static_cast<std::size_t>(n_sites));
        for (int n = 1; n <= n_sites; ++n) {
            double offset = 0;
            for (int k = n; k <= n_sites - 1; ++k) offset += k % 2;
            CHECK(h[n - 1] == doctest::Approx(0.5 * p.mass * stagger(n) - 0.5 * p.j * offset));
        }
    }
}

TEST_CASE("invalid parameters are rejected") {
    // Odd N builds (the gate compiler needs it) but is not a valid physical chain.
    CHECK_NOTHROW(build_hamiltonian(params(3, 1, 1, 1)));
    CHECK_THROWS_AS(params(3, 1, 1, 1).validate(), ParameterError);
    CHECK_THROWS_AS(build_hamiltonian(params(0, 1, 1, 1)), ParameterError);
    CHECK_THROWS_AS(build_hamiltonian(params(4, 0, 1, 1)), ParameterError);
    CHECK_THROWS_AS(build_hamiltonian(params(4, -1, 1, 1)), ParameterError);
    CHECK_THROWS_AS(build_hamiltonian(params(4, 1, -1, 1)), ParameterError);
    CHECK_THROWS_AS(build_hamiltonian(params(4, 1, 1, -1)), ParameterError);
    auto p = params(4, 1, 1, 1);
    p.j0 = 0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = params(4, 1, 1, 1);
    p.eps0 = 1;
    CHECK_THROWS_AS(build_hamiltonian(p), ParameterError);
    try {
        params(5, 1, 1, 1).validate();
        FAIL("odd N accepted");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("n_sites") != std::string::npos);
    }
}

TEST_CASE("encoded Hamiltonian equals the unencoded lattice Hamiltonian") {
    for (int n_sites : {2, 4, 6, 8}) {
        for (auto [w, j, m] : {std::tuple{1.0, 1.0, 1.0}, {0.5, 2.0, 0.3}, {1.0, 0.0, 0.7}, {2.0, 0.4, 0.0}}) {
            auto p = params(n_sites, w, j, m);
            auto lib = dense::hamiltonian(build_hamiltonian(p, {.include_constant = true}));
            auto ref = oracle::lattice_hamiltonian(n_sites, w, j, m);
            CHECK((lib - ref).norm() <= 1e-10);
            // Without the constant the two differ by a multiple of the identity.
            auto shifted = dense::hamiltonian(build_hamiltonian(p));
            const double c = (ref(0, 0) - shifted(0, 0)).real();
            oracle::Mat id = oracle::Mat::Identity(ref.rows(), ref.cols());
            CHECK((shifted + c * id - ref).norm() <= 1e-10);
        }
    }
}

TEST_CASE("diagonal elements equal J times the summed squared fields") {
    for (int n_sites : {2, 4, 6, 8}) {
        const double j = 1.7;
        auto p = params(n_sites, 1.0, j, 0.0);
        SpinHamiltonian h(build_hamiltonian(p, {.include_constant = true}));
        for (std::uint64_t i = 0; i < h.dim(); ++i) {
            auto s = basis_state_of(i, n_sites);
            auto links = gauss_field_profile(s, 0).links;
            double e = 0;
            for (int l : links) e += j * l * l;
            CHECK(h.diagonal()[i] == doctest::Approx(e).epsilon(1e-12));
        }
    }
}

TEST_CASE("coupling matrix") {
    auto c = coupling_matrix(params(4, 1, 2, 0));
    CHECK(c(0, 0) == 0.0);
    CHECK(c(0, 1) == doctest::Approx(2.0));
    CHECK(c(0, 2) == doctest::Approx(1.0));
    CHECK(c(0, 3) == 0.0);
    CHECK((c - c.transpose()).norm() == 0.0);
    CHECK(coupling_matrix(params(6, 1, 0, 0)).norm() == 0.0);

    auto rank = [](const Eigen::MatrixXd& m) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        int r = 0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()(i)) > 1e-10) ++r;
        return r;
    };
    CHECK(rank(coupling_matrix(ModelParams{3, 1, 1, 0}, CouplingDiagonal::window_completed)) == 1);
    for (int n = 3; n <= 10; ++n)
        CHECK(rank(coupling_matrix(ModelParams{n, 1, 1.3, 0}, CouplingDiagonal::window_completed)) == n - 2);
    // The zero-diagonal form has full rank on its nonzero block.
    CHECK(rank(coupling_matrix(ModelParams{3, 1, 1, 0})) == 2);

    // Off-diagonal entries reproduce the Hamiltonian's ZZ coefficients.
    auto p = params(8, 1, 0.9, 0);
    auto m = coupling_matrix(p);
    for (const auto& t : build_hamiltonian(p).zz_pairs) CHECK(m(t.n - 1, t.l - 1) == doctest::Approx(t.coefficient));
}

TEST_CASE("bare vacuum") {
    CHECK(bare_vacuum(4).spins == std::vector<int>{1, -1, 1, -1});
    CHECK(bare_vacuum(2).spins == std::vector<int>{1, -1});
    CHECK_THROWS_AS(bare_vacuum(5), ParameterError);
    for (int n = 2; n <= 14; n += 2) {
        CHECK(particle_density(StateVector::basis(bare_vacuum(n))) == 0.0);
        CHECK(bare_vacuum(n).magnetization() == 0);
    }
}

TEST_CASE("Gauss law field profiles") {
    CHECK(gauss_field_profile(bare_vacuum(4), 0).links == std::vector<int>{0, 0, 0});
    CHECK(gauss_field_profile(BasisState{{-1, 1, 1, -1}}, 0).links == std::vector<int>{-1, 0, 0});
    CHECK(gauss_field_profile(bare_vacuum(4), 1).links == std::vector<int>{1, 1, 1});
    CHECK(gauss_field_profile(bare_vacuum(6), -2).links == std::vector<int>{-2, -2, -2, -2, -2});
}

TEST_CASE("left and right reconstructions agree exactly in the neutral sector") {
    for (int n_sites : {2, 4, 6, 8}) {
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << n_sites); ++i) {
            auto s = basis_state_of(i, n_sites);
            for (int eps0 : {0, 1, -1}) {
                auto left = gauss_field_profile(s, eps0).links;
                auto right = gauss_field_profile_from_right(s, eps0).links;
                if (s.magnetization() == 0) {
                    CHECK(left == right);
                } else {
                    CHECK(left != right);
                }
                for (int n = 1; n < n_sites; ++n) CHECK(std::abs(left[n - 1]) <= n / 2.0 + std::abs(eps0) + 1);
            }
        }
    }
}

TEST_CASE("Hamiltonian conserves magnetization") {
    const int n_sites = 8;
    auto h = build_hamiltonian(params(n_sites, 1.1, 0.8, 0.6));
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n_sites); i += 7) {
        const int m = magnetization_of(i, n_sites);
        auto out = apply_hamiltonian(h, StateVector::basis(n_sites, i));
        for (std::size_t k = 0; k < out.size(); ++k)
            if (magnetization_of(k, n_sites) != m) CHECK(std::abs(out[k]) == 0.0);
    }
}
