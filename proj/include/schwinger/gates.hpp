#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "schwinger/state.hpp"

namespace schwinger {

// Gate conventions (sites 1-indexed):
//   ms_xx(S, theta)  exp(-i theta sum_{k<l in S} X_k X_l)
//   local_y(phi)     prod over all non-hidden sites of exp(-i phi Y_n)
//   local_z(phi_n)   exp(-i sum_n phi_n Z_n) on the listed (non-hidden) sites
//   dephase(phi_n)   same unitary as local_z, but an environmental phase that
//                    also reaches hidden ions
//   hide / unhide    move ions into / out of the hiding levels
enum class GateKind { ms_xx, local_y, local_z, dephase, hide, unhide };

const char* to_string(GateKind kind);

struct GateOp {
    GateKind kind = GateKind::local_z;
    std::vector<int> sites;
    /// One angle for ms_xx / local_y, one per listed site for local_z / dephase.
    std::vector<double> angles;
    /// Physical duration of the window (nonzero only for entangling gates).
    double duration = 0.0;

    static GateOp ms_xx(std::vector<int> active, double angle, double duration);
    static GateOp local_y(double angle);
    static GateOp local_z(std::vector<int> sites, std::vector<double> angles);
    static GateOp dephase(std::vector<int> sites, std::vector<double> angles);
    static GateOp hide(std::vector<int> sites);
    static GateOp unhide(std::vector<int> sites);

    bool operator==(const GateOp&) const = default;
};

using GateSequence = std::vector<GateOp>;

/// Hidden mask indexed by site - 1.
using HiddenSet = std::vector<bool>;

/// Applies a unitary gate to psi. hide/unhide only update `hidden`.
/// Throws ProtocolError when a gate addresses a hidden ion, when an ion is
/// hidden twice, or unhidden while active.
void apply_gate(const GateOp& gate, StateVector& psi, HiddenSet& hidden);

/// Convenience for gates that do not involve hiding; all ions are active.
void apply_gate(const GateOp& gate, StateVector& psi);

/// State plus hiding bookkeeping.
class QuantumRegister {
  public:
    explicit QuantumRegister(StateVector psi)
        : psi_(std::move(psi)), hidden_(static_cast<std::size_t>(psi_.n_sites()), false) {}

    void apply(const GateOp& gate) { apply_gate(gate, psi_, hidden_); }
    void apply(const GateSequence& sequence) {
        for (const auto& g : sequence) apply(g);
    }

    const StateVector& state() const { return psi_; }
    StateVector& state() { return psi_; }
    const HiddenSet& hidden() const { return hidden_; }
    bool any_hidden() const;

  private:
    StateVector psi_;
    HiddenSet hidden_;
};

/// Line-oriented text form, one gate per line:
///   KIND <sites> <angles> <duration>
/// sites is a comma-separated 1-indexed list or '-' when empty, angles a
/// comma-separated list or '-'. Numbers use shortest round-trip formatting,
/// so parse(format(seq)) == seq. Lines starting with '#' are comments.
std::string format_sequence(const GateSequence& sequence);
GateSequence parse_sequence(const std::string& text);

} // namespace schwinger
