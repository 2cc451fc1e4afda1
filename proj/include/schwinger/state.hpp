#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "schwinger/model.hpp"

namespace schwinger {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Basis ordering: configuration index i has site 1 in the most significant bit,
// i.e. site n lives in bit (N - n). Bit value 0 is spin up (sigma^z = +1,
// occupied), bit value 1 is spin down. Index 0 is the all-up state.

constexpr int max_sites = 30;

inline int site_bit(int n_sites, int site) { return n_sites - site; }

inline int spin_at(std::uint64_t index, int n_sites, int site) {
    return ((index >> site_bit(n_sites, site)) & 1U) ? -1 : 1;
}

std::uint64_t basis_index(const BasisState& state);
BasisState basis_state_of(std::uint64_t index, int n_sites);

/// sum_n sigma^z_n of a configuration.
int magnetization_of(std::uint64_t index, int n_sites);

/// Normalized pure state over 2^N spin configurations.
class StateVector {
  public:
    /// All spins up.
    explicit StateVector(int n_sites);

    static StateVector basis(const BasisState& state);
    static StateVector basis(int n_sites, std::uint64_t index);
    /// Normalizes the given amplitudes; throws ParameterError on zero norm or a size mismatch.
    static StateVector from_amplitudes(int n_sites, ComplexVector amplitudes);
    /// Takes amplitudes that are already normalized (within 1e-10) without rescaling them.
    static StateVector adopt(int n_sites, ComplexVector amplitudes);

    int n_sites() const { return n_sites_; }
    std::size_t dim() const { return amplitudes_.size(); }

    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    /// In-place access for unitary kernels. Callers that do not preserve the
    /// norm must call renormalize() afterwards.
    ComplexVector& mutable_amplitudes() { return amplitudes_; }

    double norm() const;
    void renormalize();

  private:
    StateVector(int n_sites, ComplexVector amplitudes);

    int n_sites_;
    ComplexVector amplitudes_;
};

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);
inline Complex overlap(const StateVector& a, const StateVector& b) {
    return inner_product(a.amplitudes(), b.amplitudes());
}
double fidelity(const StateVector& a, const StateVector& b);

/// Binary snapshot: magic "SWSV", u32 format version, u32 N, u32 endianness
/// tag 0x01020304 written in native order, then 2^N interleaved (re, im)
/// doubles in native order. Readers reject a foreign endianness tag.
void write_snapshot(std::ostream& out, const StateVector& psi);
StateVector read_snapshot(std::istream& in);
void save_snapshot(const std::string& path, const StateVector& psi);
StateVector load_snapshot(const std::string& path);

} // namespace schwinger
