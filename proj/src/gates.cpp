#include "schwinger/gates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "schwinger/error.hpp"
#include "schwinger/format.hpp"

namespace schwinger {

const char* to_string(GateKind kind) {
    switch (kind) {
    case GateKind::ms_xx: return "MS_XX";
    case GateKind::local_y: return "LOCAL_Y";
    case GateKind::local_z: return "LOCAL_Z";
    case GateKind::dephase: return "DEPHASE";
    case GateKind::hide: return "HIDE";
    case GateKind::unhide: return "UNHIDE";
    }
    return "?";
}

GateOp GateOp::ms_xx(std::vector<int> active, double angle, double duration) {
    if (active.empty()) throw ParameterError("MS gate needs a nonempty active set");
    return {GateKind::ms_xx, std::move(active), {angle}, duration};
}

GateOp GateOp::local_y(double angle) { return {GateKind::local_y, {}, {angle}, 0.0}; }

GateOp GateOp::local_z(std::vector<int> sites, std::vector<double> angles) {
    if (sites.size() != angles.size()) throw ParameterError("LOCAL_Z needs one angle per site");
    return {GateKind::local_z, std::move(sites), std::move(angles), 0.0};
}

GateOp GateOp::dephase(std::vector<int> sites, std::vector<double> angles) {
    if (sites.size() != angles.size()) throw ParameterError("DEPHASE needs one angle per site");
    return {GateKind::dephase, std::move(sites), std::move(angles), 0.0};
}

GateOp GateOp::hide(std::vector<int> sites) { return {GateKind::hide, std::move(sites), {}, 0.0}; }

GateOp GateOp::unhide(std::vector<int> sites) {
    return {GateKind::unhide, std::move(sites), {}, 0.0};
}

bool QuantumRegister::any_hidden() const {
    return std::find(hidden_.begin(), hidden_.end(), true) != hidden_.end();
}

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

std::uint64_t bit(int n_sites, int site) { return std::uint64_t{1} << site_bit(n_sites, site); }

void hadamard(ComplexVector& amps, std::uint64_t mask) {
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const Complex a = amps[i], b = amps[i | mask];
        amps[i] = inv_sqrt2 * (a + b);
        amps[i | mask] = inv_sqrt2 * (a - b);
    }
}

// exp(-i theta sum_{k<l} X_k X_l) = H^S exp(-i theta (Sz^2 - |S|)/2) H^S on the set S.
void apply_ms(ComplexVector& amps, int n_sites, const std::vector<int>& active, double theta) {
    if (theta == 0.0) return;
    std::uint64_t set_mask = 0;
    for (int s : active) set_mask |= bit(n_sites, s);
    const int size = static_cast<int>(active.size());
    std::vector<Complex> phase(size + 1);
    for (int down = 0; down <= size; ++down) {
        const double total = size - 2 * down;
        phase[down] = std::exp(Complex(0.0, -theta * 0.5 * (total * total - size)));
    }
    for (int s : active) hadamard(amps, bit(n_sites, s));
    for (std::size_t i = 0; i < amps.size(); ++i)
        amps[i] *= phase[std::popcount(static_cast<std::uint64_t>(i) & set_mask)];
    for (int s : active) hadamard(amps, bit(n_sites, s));
}

void apply_y(ComplexVector& amps, std::uint64_t mask, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const Complex up = amps[i], down = amps[i | mask];
        amps[i] = c * up - s * down;
        amps[i | mask] = s * up + c * down;
    }
}

void apply_z(ComplexVector& amps, int n_sites, const std::vector<int>& sites,
             const std::vector<double>& angles) {
    std::vector<double> per_site(n_sites + 1, 0.0);
    for (std::size_t k = 0; k < sites.size(); ++k) per_site[sites[k]] += angles[k];
    for (std::size_t i = 0; i < amps.size(); ++i) {
        double phase = 0.0;
        for (int n = 1; n <= n_sites; ++n)
            if (per_site[n] != 0.0) phase += per_site[n] * spin_at(i, n_sites, n);
        if (phase != 0.0) amps[i] *= std::exp(Complex(0.0, -phase));
    }
}

void check_sites(const GateOp& gate, int n_sites) {
    for (int s : gate.sites)
        if (s < 1 || s > n_sites)
            throw ParameterError(std::string(to_string(gate.kind)) + " addresses site " +
                                 std::to_string(s) + " outside 1.." + std::to_string(n_sites));
}

void require_active(const GateOp& gate, const HiddenSet& hidden, int site) {
    if (hidden[site - 1])
        throw ProtocolError(std::string(to_string(gate.kind)) + " acts on hidden ion " +
                            std::to_string(site));
}

} // namespace

void apply_gate(const GateOp& gate, StateVector& psi, HiddenSet& hidden) {
    const int n_sites = psi.n_sites();
    if (hidden.size() != static_cast<std::size_t>(n_sites))
        throw ParameterError("hidden mask size does not match the register");
    check_sites(gate, n_sites);
    auto& amps = psi.mutable_amplitudes();

    switch (gate.kind) {
    case GateKind::ms_xx:
        for (int s : gate.sites) require_active(gate, hidden, s);
        apply_ms(amps, n_sites, gate.sites, gate.angles.at(0));
        break;
    case GateKind::local_y:
        if (gate.angles.at(0) == 0.0) break;
        for (int n = 1; n <= n_sites; ++n)
            if (!hidden[n - 1]) apply_y(amps, bit(n_sites, n), gate.angles[0]);
        break;
    case GateKind::local_z:
        for (std::size_t k = 0; k < gate.sites.size(); ++k)
            if (gate.angles.at(k) != 0.0) require_active(gate, hidden, gate.sites[k]);
        apply_z(amps, n_sites, gate.sites, gate.angles);
        break;
    case GateKind::dephase:
        apply_z(amps, n_sites, gate.sites, gate.angles);
        break;
    case GateKind::hide:
        for (int s : gate.sites) {
            if (hidden[s - 1]) throw ProtocolError("ion " + std::to_string(s) + " is already hidden");
            hidden[s - 1] = true;
        }
        break;
    case GateKind::unhide:
        for (int s : gate.sites) {
            if (!hidden[s - 1]) throw ProtocolError("ion " + std::to_string(s) + " is not hidden");
            hidden[s - 1] = false;
        }
        break;
    }
}

void apply_gate(const GateOp& gate, StateVector& psi) {
    HiddenSet hidden(static_cast<std::size_t>(psi.n_sites()), false);
    apply_gate(gate, psi, hidden);
}

namespace {

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt&& fmt) {
    if (values.empty()) return "-";
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) out += ',';
        out += fmt(values[k]);
    }
    return out;
}

template <typename Parse>
auto split(const std::string& field, Parse&& parse) {
    std::vector<decltype(parse(std::string_view{}))> out;
    if (field == "-") return out;
    std::size_t begin = 0;
    for (;;) {
        const auto end = field.find(',', begin);
        out.push_back(parse(std::string_view(field).substr(begin, end - begin)));
        if (end == std::string::npos) break;
        begin = end + 1;
    }
    return out;
}

GateKind kind_from(const std::string& name) {
    for (auto k : {GateKind::ms_xx, GateKind::local_y, GateKind::local_z, GateKind::dephase,
                   GateKind::hide, GateKind::unhide})
        if (name == to_string(k)) return k;
    throw ParameterError("unknown gate kind '" + name + "'");
}

} // namespace

std::string format_sequence(const GateSequence& sequence) {
    std::string out;
    for (const auto& g : sequence) {
        out += to_string(g.kind);
        out += ' ' + join(g.sites, [](int s) { return std::to_string(s); });
        out += ' ' + join(g.angles, format_double);
        out += ' ' + format_double(g.duration);
        out += '\n';
    }
    return out;
}

GateSequence parse_sequence(const std::string& text) {
    GateSequence sequence;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string kind, sites, angles, duration, extra;
        if (!(fields >> kind >> sites >> angles >> duration) || (fields >> extra))
            throw ParameterError("gate line " + std::to_string(line_no) + ": expected 4 fields");
        GateOp g;
        g.kind = kind_from(kind);
        g.sites = split(sites, parse_int);
        g.angles = split(angles, parse_double);
        g.duration = parse_double(duration);
        sequence.push_back(std::move(g));
    }
    return sequence;
}

} // namespace schwinger
