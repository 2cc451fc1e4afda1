#include "schwinger/state.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "schwinger/error.hpp"

namespace schwinger {

namespace {

void check_size(int n_sites) {
    if (n_sites < 1 || n_sites > max_sites)
        throw ParameterError("n_sites out of range for a state vector: " + std::to_string(n_sites));
}

constexpr char snapshot_magic[4] = {'S', 'W', 'S', 'V'};
constexpr std::uint32_t snapshot_version = 1;
constexpr std::uint32_t endian_tag = 0x01020304U;

} // namespace

std::uint64_t basis_index(const BasisState& state) {
    check_size(state.n_sites());
    std::uint64_t index = 0;
    for (int n = 1; n <= state.n_sites(); ++n) {
        const int s = state.spins[n - 1];
        if (s != 1 && s != -1) throw ParameterError("basis state spins must be +1 or -1");
        if (s == -1) index |= std::uint64_t{1} << site_bit(state.n_sites(), n);
    }
    return index;
}

BasisState basis_state_of(std::uint64_t index, int n_sites) {
    check_size(n_sites);
    BasisState state;
    state.spins.resize(n_sites);
    for (int n = 1; n <= n_sites; ++n) state.spins[n - 1] = spin_at(index, n_sites, n);
    return state;
}

int magnetization_of(std::uint64_t index, int n_sites) {
    return n_sites - 2 * std::popcount(index);
}

StateVector::StateVector(int n_sites) : n_sites_(n_sites) {
    check_size(n_sites);
    amplitudes_.assign(std::size_t{1} << n_sites, Complex{});
    amplitudes_[0] = 1.0;
}

StateVector::StateVector(int n_sites, ComplexVector amplitudes)
    : n_sites_(n_sites), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(const BasisState& state) {
    return basis(state.n_sites(), basis_index(state));
}

StateVector StateVector::basis(int n_sites, std::uint64_t index) {
    StateVector psi(n_sites);
    if (index >= psi.dim()) throw ParameterError("basis index out of range");
    psi.amplitudes_[0] = 0.0;
    psi.amplitudes_[index] = 1.0;
    return psi;
}

StateVector StateVector::from_amplitudes(int n_sites, ComplexVector amplitudes) {
    check_size(n_sites);
    if (amplitudes.size() != (std::size_t{1} << n_sites))
        throw ParameterError("amplitude count does not match 2^n_sites");
    StateVector psi(n_sites, std::move(amplitudes));
    if (!(psi.norm() > 0.0) || !std::isfinite(psi.norm()))
        throw ParameterError("cannot normalize a zero or non-finite vector");
    psi.renormalize();
    return psi;
}

StateVector StateVector::adopt(int n_sites, ComplexVector amplitudes) {
    check_size(n_sites);
    if (amplitudes.size() != (std::size_t{1} << n_sites))
        throw ParameterError("amplitude count does not match 2^n_sites");
    StateVector psi(n_sites, std::move(amplitudes));
    if (!(std::abs(psi.norm() - 1.0) <= 1e-10)) throw ParameterError("amplitudes are not normalized");
    return psi;
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return std::sqrt(sum);
}

void StateVector::renormalize() {
    const double nrm = norm();
    if (!(nrm > 0.0)) throw NumericalError("state vector collapsed to zero norm");
    const double scale = 1.0 / nrm;
    for (auto& a : amplitudes_) a *= scale;
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw ParameterError("inner product of vectors with different sizes");
    Complex sum{};
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
    return sum;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(overlap(a, b));
}

void write_snapshot(std::ostream& out, const StateVector& psi) {
    const auto n = static_cast<std::uint32_t>(psi.n_sites());
    out.write(snapshot_magic, 4);
    out.write(reinterpret_cast<const char*>(&snapshot_version), sizeof snapshot_version);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&endian_tag), sizeof endian_tag);
    // std::complex<double> is layout-compatible with double[2].
    out.write(reinterpret_cast<const char*>(psi.amplitudes().data()),
              static_cast<std::streamsize>(psi.dim() * sizeof(Complex)));
    if (!out) throw std::runtime_error("failed to write state snapshot");
}

StateVector read_snapshot(std::istream& in) {
    char magic[4];
    std::uint32_t version = 0, n = 0, tag = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&tag), sizeof tag);
    if (!in || std::memcmp(magic, snapshot_magic, 4) != 0)
        throw ParameterError("not a state snapshot");
    if (version != snapshot_version) throw ParameterError("unsupported snapshot version");
    if (tag != endian_tag) throw ParameterError("snapshot written with a different byte order");
    check_size(static_cast<int>(n));
    ComplexVector amplitudes(std::size_t{1} << n);
    in.read(reinterpret_cast<char*>(amplitudes.data()),
            static_cast<std::streamsize>(amplitudes.size() * sizeof(Complex)));
    if (!in) throw ParameterError("truncated state snapshot");
    return StateVector::adopt(static_cast<int>(n), std::move(amplitudes));
}

void save_snapshot(const std::string& path, const StateVector& psi) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_snapshot(out, psi);
}

StateVector load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_snapshot(in);
}

} // namespace schwinger
