#include "qnet/network.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qnet {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

void validate_scenario(const NetworkScenario& s) {
  require(s.n >= 1, "scenario needs at least one source");
  require(s.n <= kMaxSources, "scenario exceeds the supported source count (max 6)");
  require(static_cast<int>(s.sources.size()) == s.n, "source count does not match n");
  require(static_cast<int>(s.parties.size()) == s.party_count(),
          "party count does not match topology");
  if (s.topology == Topology::Linear) {
    for (int p = 0; p <= s.n; ++p) {
      const bool edge = (p == 0 || p == s.n);
      if (edge) {
        require(s.parties[p].is_edge(), "extreme parties of a chain need a measurement pair");
      } else {
        require(s.parties[p].basis.has_value(), "central chain parties need a basis measurement");
        require(s.parties[p].basis->n_qubits == 2, "central chain parties measure two qubits");
      }
    }
  } else {
    require(s.n >= 2, "star networks need at least two sources");
    require(s.parties[0].basis.has_value(), "star hub needs a basis measurement");
    require(s.parties[0].basis->n_qubits == s.n, "star hub basis must cover n qubits");
    for (int p = 1; p <= s.n; ++p)
      require(s.parties[p].is_edge(), "star edge parties need a measurement pair");
  }
}

int Behavior::total_output_bits() const {
  int total = 0;
  for (int b : party_output_bits) total += b;
  return total;
}

int Behavior::output_bit_offset(int party) const {
  int offset = 0;
  for (int p = 0; p < party; ++p) offset += party_output_bits[p];
  return offset;
}

int Behavior::input_of_party(int input_index, int party) const {
  // lexicographic, party 0 most significant
  int radix_below = 1;
  for (size_t p = party + 1; p < party_input_count.size(); ++p) radix_below *= party_input_count[p];
  return (input_index / radix_below) % party_input_count[party];
}

ComplexMatrix assemble_global_state(const NetworkScenario& s) {
  validate_scenario(s);
  ComplexMatrix global = ComplexMatrix::identity(1);
  for (const auto& src : s.sources) global = kron(global, src.rho);
  if (s.topology == Topology::Linear) return global;  // kron order is party order
  // star: source i qubit 0 -> hub slot i, qubit 1 -> edge slot n+i
  std::vector<int> perm(2 * s.n);
  for (int i = 0; i < s.n; ++i) {
    perm[2 * i] = i;
    perm[2 * i + 1] = s.n + i;
  }
  return permute_qubits(global, perm);
}

namespace {

/// <v|_block A |v>_block over a contiguous qubit block, leaving the
/// remaining qubits' operator.
ComplexMatrix project_block(const ComplexMatrix& a, int m_qubits, int q_start, int k,
                            const std::vector<cplx>& v) {
  const int lo_bits = m_qubits - q_start - k;
  const int block_dim = 1 << k;
  const int lo_dim = 1 << lo_bits;
  const int out_dim = 1 << (m_qubits - k);
  auto full_index = [&](int reduced, int c) {
    const int hi = reduced >> lo_bits;
    const int lo = reduced & (lo_dim - 1);
    return (hi << (k + lo_bits)) | (c << lo_bits) | lo;
  };
  ComplexMatrix r(out_dim);
  for (int i = 0; i < out_dim; ++i)
    for (int j = 0; j < out_dim; ++j) {
      cplx acc = 0.0;
      for (int c = 0; c < block_dim; ++c) {
        if (v[c] == cplx{0.0, 0.0}) continue;
        const int fi = full_index(i, c);
        for (int cp = 0; cp < block_dim; ++cp) {
          if (v[cp] == cplx{0.0, 0.0}) continue;
          acc += std::conj(v[c]) * a.at(fi, full_index(j, cp)) * v[cp];
        }
      }
      r.at(i, j) = acc;
    }
  return r;
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  cplx t = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) t += a.at(i, j) * b.at(j, i);
  return t.real();
}

}  // namespace

Behavior behavior_from_operator(const ComplexMatrix& op,
                                const std::vector<PartyMeasurement>& parties) {
  const int n_parties = static_cast<int>(parties.size());
  Behavior b;
  std::vector<int> edge_parties;
  std::vector<int> central_parties;
  int total_qubits = 0;
  for (int p = 0; p < n_parties; ++p) {
    if (parties[p].is_edge()) {
      b.party_output_bits.push_back(1);
      b.party_input_count.push_back(2);
      edge_parties.push_back(p);
      total_qubits += 1;
    } else {
      b.party_output_bits.push_back(parties[p].basis->label_bits);
      b.party_input_count.push_back(1);
      central_parties.push_back(p);
      total_qubits += parties[p].basis->n_qubits;
    }
  }
  if ((1 << total_qubits) != op.dim())
    throw std::invalid_argument("operator dimension does not match party qubit counts");

  const int n_edges = static_cast<int>(edge_parties.size());
  const int n_inputs = 1 << n_edges;
  const int out_bits = b.total_output_bits();
  b.table.assign(n_inputs, std::vector<double>(1 << out_bits, 0.0));

  std::vector<std::array<std::array<ComplexMatrix, 2>, 2>> edge_povms(n_edges);
  for (int e = 0; e < n_edges; ++e)
    for (int x = 0; x < 2; ++x) {
      auto elems = povm_elements(parties[edge_parties[e]].pair->setting(x));
      edge_povms[e][x][0] = std::move(elems[0]);
      edge_povms[e][x][1] = std::move(elems[1]);
    }

  // Project central parties out one at a time (rank-1 outcome
  // projectors), recursing over their outcome labels; at the bottom only
  // edge qubits remain and the POVM traces fill the table.
  std::function<void(const ComplexMatrix&, size_t, int)> descend =
      [&](const ComplexMatrix& reduced, size_t next_central, int central_out_part) {
        if (next_central < central_parties.size()) {
          const int p = central_parties[next_central];
          const auto& basis = *parties[p].basis;
          // Centrals are processed in ascending party order, so every
          // central before p is already projected out; only edge qubits
          // remain ahead of p's block.
          int offset = 0;
          for (int q = 0; q < p; ++q)
            if (parties[q].is_edge()) offset += 1;
          const int m_qubits = [&] {
            int d = reduced.dim(), m = 0;
            while (d > 1) {
              d >>= 1;
              ++m;
            }
            return m;
          }();
          for (int label = 0; label < basis.outcomes(); ++label) {
            const ComplexMatrix next = project_block(reduced, m_qubits, offset, basis.n_qubits,
                                                     basis.basis_states[label]);
            const int shift = out_bits - b.output_bit_offset(p) - b.party_output_bits[p];
            descend(next, next_central + 1, central_out_part | (label << shift));
          }
          return;
        }
        for (int input = 0; input < n_inputs; ++input) {
          std::vector<int> settings(n_edges);
          for (int e = 0; e < n_edges; ++e) settings[e] = b.input_of_party(input, edge_parties[e]);
          for (int out = 0; out < (1 << n_edges); ++out) {
            ComplexMatrix m = ComplexMatrix::identity(1);
            for (int e = 0; e < n_edges; ++e) {
              const int bit = (out >> (n_edges - 1 - e)) & 1;
              m = kron(m, edge_povms[e][settings[e]][bit]);
            }
            const double p = trace_product(m, reduced);
            int out_index = central_out_part;
            for (int e = 0; e < n_edges; ++e) {
              const int bit = (out >> (n_edges - 1 - e)) & 1;
              const int party = edge_parties[e];
              const int shift = out_bits - b.output_bit_offset(party) - 1;
              out_index |= bit << shift;
            }
            b.table[input][out_index] += p;
          }
        }
      };
  descend(op, 0, 0);
  return b;
}

Behavior behavior(const NetworkScenario& s) {
  validate_scenario(s);
  Behavior b = behavior_from_operator(assemble_global_state(s), s.parties);
  b.topology = s.topology;
  b.n = s.n;
  return b;
}

double no_signalling_check(const Behavior& b) {
  const int parties = static_cast<int>(b.party_input_count.size());
  const int out_bits = b.total_output_bits();
  double worst = 0.0;
  for (int p = 0; p < parties; ++p) {
    if (b.party_input_count[p] < 2) continue;
    const int offset = b.output_bit_offset(p);
    const int bits = b.party_output_bits[p];
    const int own_mask = ((1 << bits) - 1) << (out_bits - offset - bits);
    // pair up joint inputs differing only in party p's setting
    for (int i1 = 0; i1 < b.input_count(); ++i1)
      for (int i2 = i1 + 1; i2 < b.input_count(); ++i2) {
        bool only_p = b.input_of_party(i1, p) != b.input_of_party(i2, p);
        for (int q = 0; q < parties && only_p; ++q)
          if (q != p && b.input_of_party(i1, q) != b.input_of_party(i2, q)) only_p = false;
        if (!only_p) continue;
        // marginal over party p's outputs, indexed by the remaining bits
        std::vector<double> m1(1 << out_bits, 0.0), m2(1 << out_bits, 0.0);
        for (int out = 0; out < (1 << out_bits); ++out) {
          m1[out & ~own_mask] += b.table[i1][out];
          m2[out & ~own_mask] += b.table[i2][out];
        }
        for (int out = 0; out < (1 << out_bits); ++out)
          worst = std::max(worst, std::abs(m1[out] - m2[out]));
      }
  }
  return worst;
}

}  // namespace qnet
