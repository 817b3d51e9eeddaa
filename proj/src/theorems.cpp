#include "qnet/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qnet {

namespace {

NetworkScenario make_chain(const std::vector<TwoQubitState>& states, const MeasurementPair& first,
                           const MeasurementPair& last) {
  NetworkScenario s;
  s.topology = Topology::Linear;
  s.n = static_cast<int>(states.size());
  s.sources = states;
  s.parties.push_back({first, std::nullopt});
  for (int p = 1; p < s.n; ++p) s.parties.push_back({std::nullopt, bell_basis()});
  s.parties.push_back({last, std::nullopt});
  return s;
}

NetworkScenario make_star(const std::vector<TwoQubitState>& states,
                          const std::vector<MeasurementPair>& edges) {
  NetworkScenario s;
  s.topology = Topology::Star;
  s.n = static_cast<int>(states.size());
  s.sources = states;
  s.parties.push_back({std::nullopt, ghz_basis(s.n)});
  for (const auto& e : edges) s.parties.push_back({e, std::nullopt});
  return s;
}

double product_of(const std::vector<TwoQubitState>& states, int which) {
  double p = 1.0;
  for (const auto& s : states) p *= s.spectrum[which];
  return p;
}

void require_aligned(const TwoQubitState& s, int axis_for_e1, int axis_for_e2, int index) {
  const bool ok =
      std::abs(std::abs(s.correlation(axis_for_e1, axis_for_e1)) - s.spectrum[0]) <= tol::report &&
      std::abs(std::abs(s.correlation(axis_for_e2, axis_for_e2)) - s.spectrum[1]) <= tol::report;
  if (!ok)
    throw std::invalid_argument("source " + std::to_string(index) +
                                " is not in the aligned frame; rotate it so the two largest "
                                "singular values sit on the probed axes");
}

std::vector<bool> incompatibility_flags(const NetworkScenario& s) {
  std::vector<bool> flags;
  for (const auto& p : s.parties)
    flags.push_back(p.is_edge() && !is_compatible(*p.pair).compatible);
  return flags;
}

double behavior_value(const NetworkScenario& s) {
  const Behavior b = behavior(s);
  if (s.topology == Topology::Linear) return linear_lhs(b).lhs;
  return star_lhs(b, *s.parties.front().basis).lhs;
}

}  // namespace

ConstructionResult thm1_construct(const std::vector<TwoQubitState>& states) {
  const int n = static_cast<int>(states.size());
  if (n < 2 || n > kMaxSources) throw std::invalid_argument("need 2..6 sources");
  const double p1 = product_of(states, 0);
  const double p2 = product_of(states, 1);
  const double crit_lhs = p1 + p2;
  const double crit_rhs = std::pow(std::sqrt(p1) + std::sqrt(p2), 2.0 / 3.0);
  if (!(crit_lhs > crit_rhs))
    throw criterion_error("state criterion failed: prod E1 + prod E2 must exceed "
                          "(sqrt(prod E1) + sqrt(prod E2))^(2/3)",
                          crit_lhs, crit_rhs);
  for (int i = 0; i < n; ++i) require_aligned(states[i], 2, 0, i);

  const double r = std::asin(std::sqrt(p1 / (p1 + p2)));
  const double b2 = p1 + p2;  // squared sharp bound
  const double cs = std::cos(r) + std::sin(r);
  const double threshold = 1.0 / cs;

  ConstructionResult out;
  // first party: any eta above cs/B^2 gives a violation once the other
  // end is pushed to its own bound; cs/B^2 >= threshold whenever the
  // criterion holds, so the whole interval is incompatible
  EtaInterval i1{std::max(cs / b2, threshold), 1.0, 0.0};
  i1.chosen = 0.5 * (i1.lower + i1.upper);
  // last party: capped at the compatibility boundary
  EtaInterval i2{1.0 / (i1.chosen * b2), threshold, 0.0};
  i2.chosen = 0.5 * (i2.lower + i2.upper);
  out.eta_intervals = {i1, i2};

  out.scenario = make_chain(states, equatorial_pair(Plane::XZ, r, i1.chosen),
                            equatorial_pair(Plane::XZ, r, i2.chosen));
  out.criterion_lhs = crit_lhs;
  out.criterion_rhs = crit_rhs;
  out.analytic_lhs = linear_bound_noisy(states, i1.chosen, i2.chosen);
  out.behavior_lhs = behavior_value(out.scenario);
  out.behavior_checked = true;
  out.incompatible = incompatibility_flags(out.scenario);
  out.violated = out.analytic_lhs > 1.0 + tol::report && out.behavior_lhs > 1.0 + tol::report;
  return out;
}

ConstructionResult thm4_construct(const std::vector<TwoQubitState>& states) {
  const int n = static_cast<int>(states.size());
  if (n < 2 || n > kMaxSources) throw std::invalid_argument("need 2..6 sources");
  const double e1 = product_of(states, 0);
  const double e2 = product_of(states, 1);
  const double n2 = static_cast<double>(n) * n;
  const double q1 = std::pow(e1, 2.0 / n2);
  const double q2 = std::pow(e2, 2.0 / n2);
  const double v = star_bound_analytic(states);
  const double num = v * std::pow(2.0, n - 2) * std::sqrt(q1 + q2);
  const double crit_lhs = std::pow(2.0, n2) * std::sqrt(q1 + q2) *
                          std::pow(std::pow(e1, 1.0 / n2) + std::pow(e2, 1.0 / n2), n - 1);
  const double crit_rhs = std::pow(4.0 * num, n);
  if (!(crit_lhs < crit_rhs))
    throw criterion_error("state criterion failed for the star construction", crit_lhs, crit_rhs);
  for (int i = 0; i < n; ++i) require_aligned(states[i], 0, 1, i);

  const double t = std::asin(std::sqrt(q2 / (q1 + q2)));
  const double cs = std::cos(t) + std::sin(t);
  const double threshold = 1.0 / cs;
  const double vn = std::pow(v, n);

  ConstructionResult out;
  EtaInterval i1{std::max(std::pow(cs, n - 1) / vn, threshold), 1.0, 0.0};
  i1.chosen = 0.5 * (i1.lower + i1.upper);
  out.eta_intervals.push_back(i1);
  std::vector<double> etas{i1.chosen};
  for (int p = 2; p < n; ++p) {
    out.eta_intervals.push_back({threshold, threshold, threshold});
    etas.push_back(threshold);
  }
  EtaInterval in_{std::pow(cs, n - 2) / (i1.chosen * vn), threshold, 0.0};
  in_.chosen = 0.5 * (in_.lower + in_.upper);
  out.eta_intervals.push_back(in_);
  etas.push_back(in_.chosen);

  std::vector<MeasurementPair> edges;
  for (double eta : etas) edges.push_back(equatorial_pair(Plane::XY, t, eta));
  out.scenario = make_star(states, edges);
  out.criterion_lhs = crit_lhs;
  out.criterion_rhs = crit_rhs;
  out.analytic_lhs = star_bound_noisy(states, etas);
  if (n <= 4) {
    out.behavior_lhs = behavior_value(out.scenario);
    out.behavior_checked = true;
  }
  out.incompatible = incompatibility_flags(out.scenario);
  out.violated = out.analytic_lhs > 1.0 + tol::report &&
                 (!out.behavior_checked || out.behavior_lhs > 1.0 + tol::report);
  return out;
}

namespace {

/// Random Bell-diagonal state whose correlation tensor carries its
/// largest / middle / smallest entries on the given axes.
TwoQubitState random_diagonal_state(SplitRng& rng, int big_axis, int mid_axis, int small_axis) {
  std::array<double, 4> p{};
  double sum = 0.0;
  for (double& x : p) {
    x = rng.next_double() + 1e-12;
    sum += x;
  }
  for (double& x : p) x /= sum;
  // Bell-diagonal tensor entries on (x, y, z)
  std::array<double, 3> diag{p[0] - p[1] + p[2] - p[3], -p[0] + p[1] + p[2] - p[3],
                             p[0] + p[1] - p[2] - p[3]};
  std::sort(diag.begin(), diag.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  Tensor3 t;
  t(big_axis, big_axis) = diag[0];
  t(mid_axis, mid_axis) = diag[1];
  t(small_axis, small_axis) = diag[2];
  return from_bloch({0, 0, 0}, {0, 0, 0}, t);
}

const MeasurementPair kSharpXZ{DichotomicObservable{1.0, {0.0, 0.0, 1.0}},
                               DichotomicObservable{1.0, {1.0, 0.0, 0.0}}};
const MeasurementPair kSharpXY{DichotomicObservable{1.0, {1.0, 0.0, 0.0}},
                               DichotomicObservable{1.0, {0.0, 1.0, 0.0}}};

}  // namespace

AuditResult thm2_audit(int n, int samples, std::uint64_t seed) {
  if (n < 2 || n > 3) throw std::invalid_argument("behavior-level audit supports n in {2,3}");
  SplitRng rng(seed);
  AuditResult r;
  r.n = n;
  r.random_samples = samples;
  r.diagonal_samples = std::max(10, samples / 10);
  r.seed = seed;
  for (int i = 0; i < samples; ++i) {
    std::vector<TwoQubitState> states;
    for (int k = 0; k < n; ++k) states.push_back(random_state(rng.next_u64()));
    r.max_lhs = std::max(r.max_lhs, behavior_value(make_chain(states, kSharpXZ, kSharpXZ)));
  }
  for (int i = 0; i < r.diagonal_samples; ++i) {
    std::vector<TwoQubitState> states;
    // chain probes z and x; park E1 on z, E3 on x
    for (int k = 0; k < n; ++k) states.push_back(random_diagonal_state(rng, 2, 1, 0));
    const double lhs = behavior_value(make_chain(states, kSharpXZ, kSharpXZ));
    r.max_lhs = std::max(r.max_lhs, lhs);
    r.max_closed_form_gap =
        std::max(r.max_closed_form_gap, std::abs(lhs - xz_fixed_value(states)));
  }
  return r;
}

AuditResult thm5_audit(int n, int samples, std::uint64_t seed) {
  if (n < 2 || n > 4) throw std::invalid_argument("behavior-level audit supports n in {2,3,4}");
  SplitRng rng(seed);
  AuditResult r;
  r.n = n;
  r.random_samples = samples;
  r.diagonal_samples = std::max(10, samples / 10);
  r.seed = seed;
  const std::vector<MeasurementPair> edges(n, kSharpXY);
  for (int i = 0; i < samples; ++i) {
    std::vector<TwoQubitState> states;
    for (int k = 0; k < n; ++k) states.push_back(random_state(rng.next_u64()));
    r.max_lhs = std::max(r.max_lhs, behavior_value(make_star(states, edges)));
  }
  for (int i = 0; i < r.diagonal_samples; ++i) {
    std::vector<TwoQubitState> states;
    // star probes x and y; park E1 on x, E2 on y
    for (int k = 0; k < n; ++k) states.push_back(random_diagonal_state(rng, 0, 1, 2));
    const double lhs = behavior_value(make_star(states, edges));
    r.max_lhs = std::max(r.max_lhs, lhs);
    r.max_closed_form_gap =
        std::max(r.max_closed_form_gap, std::abs(lhs - sigma12_star_value(states)));
  }
  return r;
}

LocalHVModel decompose_with_parents(const NetworkScenario& scenario,
                                    const std::vector<int>& modeled_parties) {
  validate_scenario(scenario);
  if (modeled_parties.empty()) throw std::invalid_argument("no parties to model");
  for (size_t i = 1; i < modeled_parties.size(); ++i)
    if (modeled_parties[i] <= modeled_parties[i - 1])
      throw std::invalid_argument("modeled parties must be strictly increasing");

  std::vector<ParentPOVM> parents;
  for (int p : modeled_parties) {
    if (p < 0 || p >= scenario.party_count() || !scenario.parties[p].is_edge())
      throw std::invalid_argument("party " + std::to_string(p) + " is not an edge party");
    if (!is_compatible(*scenario.parties[p].pair).compatible)
      throw std::invalid_argument("party " + std::to_string(p) +
                                  " measures an incompatible pair; no parent POVM exists");
    parents.push_back(parent_povm(*scenario.parties[p].pair));
  }

  LocalHVModel m;
  m.scenario = scenario;
  m.modeled_parties = modeled_parties;
  m.target = behavior(scenario);
  const ComplexMatrix global = assemble_global_state(scenario);
  const int total_qubits = scenario.total_qubits();

  // qubit offset of each party's block
  std::vector<int> qubit_offset(scenario.party_count());
  int q = 0;
  for (int p = 0; p < scenario.party_count(); ++p) {
    qubit_offset[p] = q;
    q += scenario.parties[p].is_edge() ? 1 : scenario.parties[p].basis->n_qubits;
  }
  std::vector<int> modeled_qubits;
  for (int p : modeled_parties) modeled_qubits.push_back(qubit_offset[p]);

  std::vector<PartyMeasurement> rest_parties;
  std::vector<int> rest_party_index;  // full party index per rest party
  for (int p = 0; p < scenario.party_count(); ++p)
    if (std::find(modeled_parties.begin(), modeled_parties.end(), p) == modeled_parties.end()) {
      rest_parties.push_back(scenario.parties[p]);
      rest_party_index.push_back(p);
    }

  const int k = static_cast<int>(modeled_parties.size());
  const int tuples = 1 << (2 * k);
  m.joint_weights.assign(tuples, 0.0);

  m.reconstructed = m.target;
  for (auto& row : m.reconstructed.table) std::fill(row.begin(), row.end(), 0.0);

  const int out_bits = m.target.total_output_bits();
  for (int tuple = 0; tuple < tuples; ++tuple) {
    // first modeled party in the most significant base-4 digit
    std::vector<int> lambda(k);
    for (int i = 0; i < k; ++i) lambda[i] = (tuple >> (2 * (k - 1 - i))) & 3;

    ComplexMatrix full = ComplexMatrix::identity(1);
    for (int p = 0; p < scenario.party_count(); ++p) {
      const auto it = std::find(modeled_parties.begin(), modeled_parties.end(), p);
      if (it == modeled_parties.end()) {
        const int nq = scenario.parties[p].is_edge() ? 1 : scenario.parties[p].basis->n_qubits;
        full = kron(full, ComplexMatrix::identity(1 << nq));
      } else {
        const int i = static_cast<int>(it - modeled_parties.begin());
        full = kron(full, parents[i].elements[(lambda[i] >> 1) & 1][lambda[i] & 1]);
      }
    }
    const ComplexMatrix cond =
        partial_trace(full * global, total_qubits, modeled_qubits);
    m.joint_weights[tuple] = cond.trace().real();
    const Behavior cond_behavior = behavior_from_operator(cond, rest_parties);

    for (int input = 0; input < m.target.input_count(); ++input) {
      // deterministic responses of the modeled parties
      int modeled_bits = 0;
      for (int i = 0; i < k; ++i) {
        const int x = m.target.input_of_party(input, modeled_parties[i]);
        const int a = (x == 0) ? ((lambda[i] >> 1) & 1) : (lambda[i] & 1);
        modeled_bits |= a << (out_bits - m.target.output_bit_offset(modeled_parties[i]) - 1);
      }
      // matching joint input of the remaining parties
      int rest_input = 0;
      for (size_t rp = 0; rp < rest_parties.size(); ++rp) {
        rest_input *= cond_behavior.party_input_count[rp];
        rest_input += m.target.input_of_party(input, rest_party_index[rp]);
      }
      const int rest_bits_total = cond_behavior.total_output_bits();
      for (int rest_out = 0; rest_out < (1 << rest_bits_total); ++rest_out) {
        int full_out = modeled_bits;
        for (size_t rp = 0; rp < rest_parties.size(); ++rp) {
          const int bits = cond_behavior.party_output_bits[rp];
          const int val =
              (rest_out >> (rest_bits_total - cond_behavior.output_bit_offset(static_cast<int>(rp)) -
                            bits)) &
              ((1 << bits) - 1);
          full_out |=
              val << (out_bits - m.target.output_bit_offset(rest_party_index[rp]) - bits);
        }
        m.reconstructed.table[input][full_out] += cond_behavior.table[rest_input][rest_out];
      }
    }
  }

  // marginals and factorization across the modeled parties
  m.marginals.assign(k, {0.0, 0.0, 0.0, 0.0});
  for (int tuple = 0; tuple < tuples; ++tuple)
    for (int i = 0; i < k; ++i)
      m.marginals[i][(tuple >> (2 * (k - 1 - i))) & 3] += m.joint_weights[tuple];
  if (k >= 2)
    for (int tuple = 0; tuple < tuples; ++tuple) {
      double prod = 1.0;
      for (int i = 0; i < k; ++i) prod *= m.marginals[i][(tuple >> (2 * (k - 1 - i))) & 3];
      m.factorization_defect =
          std::max(m.factorization_defect, std::abs(prod - m.joint_weights[tuple]));
    }

  for (int input = 0; input < m.target.input_count(); ++input)
    for (int out = 0; out < (1 << out_bits); ++out)
      m.max_reconstruction_error =
          std::max(m.max_reconstruction_error,
                   std::abs(m.reconstructed.table[input][out] - m.target.table[input][out]));
  return m;
}

LocalHVModel thm3_bilocal_model(const NetworkScenario& scenario) {
  if (scenario.topology != Topology::Linear || scenario.n != 2)
    throw std::invalid_argument("bilocal model needs a two-source chain");
  return decompose_with_parents(scenario, {0, 2});
}

LocalHVModel thm6_star_model(const NetworkScenario& scenario) {
  if (scenario.topology != Topology::Star)
    throw std::invalid_argument("star model needs a star scenario");
  std::vector<int> edges;
  for (int p = 1; p <= scenario.n; ++p) edges.push_back(p);
  return decompose_with_parents(scenario, edges);
}

LocalHVModel thm7_fnn_decompose(const NetworkScenario& scenario, int edge_party) {
  return decompose_with_parents(scenario, {edge_party});
}

std::string dump_model(const LocalHVModel& model) {
  std::ostringstream os;
  os.precision(17);
  const int k = static_cast<int>(model.modeled_parties.size());
  os << "hidden variables: " << k << " x {0,1}^2 (parties:";
  for (int p : model.modeled_parties) os << ' ' << p;
  os << ")\n";
  os << "joint weights (lambda tuple -> P):\n";
  for (size_t t = 0; t < model.joint_weights.size(); ++t) {
    os << "  ";
    for (int i = 0; i < k; ++i) {
      const int l = (static_cast<int>(t) >> (2 * (k - 1 - i))) & 3;
      os << ((l >> 1) & 1) << (l & 1) << (i + 1 < k ? "," : "");
    }
    os << " -> " << model.joint_weights[t] << "\n";
  }
  os << "responses: a_j = lambda_j[x_j] (deterministic)\n";
  os << "factorization defect: " << model.factorization_defect << "\n";
  os << "max reconstruction error: " << model.max_reconstruction_error << "\n";
  return os.str();
}

}  // namespace qnet
