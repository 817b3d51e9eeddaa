#pragma once

#include <optional>
#include <vector>

#include "qnet/measurement.hpp"
#include "qnet/state.hpp"

namespace qnet {

enum class Topology { Linear, Star };

/// One party's measurement assignment: edge parties hold a two-setting
/// dichotomic pair, central parties a single entangled-basis measurement.
struct PartyMeasurement {
  std::optional<MeasurementPair> pair;                  // edge
  std::optional<EntangledBasisMeasurement> basis;       // central

  bool is_edge() const { return pair.has_value(); }
};

/// A wired n-local network.
///
/// Linear (n sources, n+1 parties): party 0 and party n are edges with
/// one qubit each; parties 1..n-1 are central with two qubits (right
/// qubit of source i-1 and left qubit of source i).
///
/// Star (n sources, n+1 parties): party 0 is the central hub holding one
/// qubit from each source; parties 1..n are edges.
struct NetworkScenario {
  Topology topology = Topology::Linear;
  int n = 0;  // number of sources
  std::vector<TwoQubitState> sources;
  std::vector<PartyMeasurement> parties;  // party order as above

  int party_count() const { return n + 1; }
  int total_qubits() const { return 2 * n; }
};

/// Dense-computation guard: 2n qubits, capped at global dimension 4096.
inline constexpr int kMaxSources = 6;

/// Throws std::invalid_argument describing the first structural problem,
/// if any (party counts, measurement kinds, central basis dimensions).
void validate_scenario(const NetworkScenario& scenario);

/// Exact joint conditional probability table.
///
/// Output index is lexicographic over (party index, bit index): each
/// edge party contributes one bit, each central party its label bits.
/// Input index is lexicographic over edge-party setting indices in
/// party order (central parties have a single input).
struct Behavior {
  Topology topology = Topology::Linear;
  int n = 0;
  std::vector<int> party_output_bits;  // per party, in party order
  std::vector<int> party_input_count;  // 2 for edges, 1 for centrals
  std::vector<std::vector<double>> table;  // [input_index][output_index]

  int total_output_bits() const;
  int input_count() const { return static_cast<int>(table.size()); }
  /// bit offset of a party's output bits inside the output index
  int output_bit_offset(int party) const;
  /// setting of a given party for a joint input index
  int input_of_party(int input_index, int party) const;
};

/// 2n-qubit global state: tensor product of the sources, qubits
/// reordered so each party's qubits are contiguous in party order.
ComplexMatrix assemble_global_state(const NetworkScenario& scenario);

/// Born-rule behavior. Central parties are projected out per outcome
/// label (rank-1 projectors), then edge POVMs are traced against the
/// reduced operators.
Behavior behavior(const NetworkScenario& scenario);

/// Same Born-rule tabulation for an arbitrary measured operator:
/// `parties` own contiguous qubit blocks of `op` in order (1 qubit per
/// edge party, basis->n_qubits per central). Used on conditioned /
/// reduced operators by the hidden-variable model builders; `op` need
/// not be normalized, so rows sum to its trace.
Behavior behavior_from_operator(const ComplexMatrix& op,
                                const std::vector<PartyMeasurement>& parties);

/// Maximum change of any party-subset marginal under a remote input
/// change. Quantum behaviors from this engine stay below 1e-10.
double no_signalling_check(const Behavior& b);

}  // namespace qnet
