#include "qnet/inequality.hpp"

#include <cmath>
#include <stdexcept>

namespace qnet {

namespace {

int popcount(int x) {
  int c = 0;
  while (x) {
    c += x & 1;
    x >>= 1;
  }
  return c;
}

double spectrum_product(const std::vector<TwoQubitState>& states, int which) {
  double p = 1.0;
  for (const auto& s : states) p *= s.spectrum[which];
  return p;
}

}  // namespace

std::pair<double, double> linear_correlators(const Behavior& b) {
  if (b.topology != Topology::Linear)
    throw std::invalid_argument("linear correlators need a chain behavior");
  const int n = b.n;
  const int out_bits = b.total_output_bits();
  const int n_out = 1 << out_bits;
  if (b.input_count() != 4)
    throw std::invalid_argument("linear correlators need two settings at each extreme");

  auto correlator = [&](int i, int j, int central_bit) {
    const int input = i * 2 + j;
    double acc = 0.0;
    for (int out = 0; out < n_out; ++out) {
      int parity = 0;
      parity ^= (out >> (out_bits - 1)) & 1;  // a_1 (party 0, single bit)
      parity ^= out & 1;                      // a_{n+1} (last party, single bit)
      for (int c = 1; c < n; ++c) {
        const int shift = out_bits - b.output_bit_offset(c) - 1 - central_bit;
        parity ^= (out >> shift) & 1;
      }
      acc += (parity ? -1.0 : 1.0) * b.table[input][out];
    }
    return acc;
  };

  double i_n = 0.0, j_n = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      i_n += 0.25 * correlator(i, j, 0);
      j_n += 0.25 * (((i + j) % 2) ? -1.0 : 1.0) * correlator(i, j, 1);
    }
  return {i_n, j_n};
}

InequalityReport linear_lhs(const Behavior& b, std::optional<double> analytic) {
  const auto [i_n, j_n] = linear_correlators(b);
  InequalityReport r;
  r.functional = Functional::LinearNLocal;
  r.correlators = {i_n, j_n};
  r.lhs = std::sqrt(std::abs(i_n)) + std::sqrt(std::abs(j_n));
  r.violated = r.lhs > 1.0 + tol::report;
  r.analytic = analytic;
  if (analytic) r.discrepancy = std::abs(r.lhs - *analytic);
  return r;
}

std::vector<double> star_correlators(const Behavior& b,
                                     const EntangledBasisMeasurement& hub_basis) {
  if (b.topology != Topology::Star)
    throw std::invalid_argument("star correlators need a star behavior");
  const int n = b.n;
  const int out_bits = b.total_output_bits();
  const int label_bits = hub_basis.label_bits;
  const int n_out = 1 << out_bits;
  const int n_in = 1 << n;
  if (b.input_count() != n_in) throw std::invalid_argument("unexpected star input arity");

  std::vector<double> js;
  js.reserve(1 << (n - 1));
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (popcount(mask) % 2) continue;
    // hub qubit q carries the Pauli assigned to edge party q+1
    std::vector<int> pauli_string(hub_basis.n_qubits);
    for (int q = 0; q < n; ++q) pauli_string[q] = ((mask >> q) & 1) ? 2 : 1;
    const std::vector<int> readout = parity_readout(hub_basis, pauli_string);

    double j = 0.0;
    for (int input = 0; input < n_in; ++input) {
      int s_parity = 0;
      for (int e = 0; e < n; ++e)
        if ((mask >> e) & 1) s_parity ^= b.input_of_party(input, e + 1);
      for (int out = 0; out < n_out; ++out) {
        const int label = out >> (out_bits - label_bits);
        int parity = (readout[label] < 0) ? 1 : 0;
        for (int e = 0; e < n; ++e) {
          const int shift = out_bits - b.output_bit_offset(e + 1) - 1;
          parity ^= (out >> shift) & 1;
        }
        const double sign = ((parity ^ s_parity) ? -1.0 : 1.0);
        j += sign * b.table[input][out];
      }
    }
    js.push_back(j / n_in);
  }
  return js;
}

InequalityReport star_lhs(const Behavior& b, const EntangledBasisMeasurement& hub_basis,
                          std::optional<double> analytic) {
  const auto js = star_correlators(b, hub_basis);
  InequalityReport r;
  r.functional = Functional::StarNLocal;
  r.correlators = js;
  double sum = 0.0;
  for (double j : js) sum += std::pow(std::abs(j), 1.0 / b.n);
  r.lhs = std::pow(2.0, 2 - b.n) * sum;
  r.violated = r.lhs > 1.0 + tol::report;
  r.analytic = analytic;
  if (analytic) r.discrepancy = std::abs(r.lhs - *analytic);
  return r;
}

double linear_bound_analytic(const std::vector<TwoQubitState>& states) {
  return std::sqrt(spectrum_product(states, 0) + spectrum_product(states, 1));
}

double linear_bound_noisy(const std::vector<TwoQubitState>& states, double eta1, double eta2) {
  return std::sqrt(eta1 * eta2) * linear_bound_analytic(states);
}

double star_bound_analytic(const std::vector<TwoQubitState>& states) {
  const int n = static_cast<int>(states.size());
  const double p1 = spectrum_product(states, 0);
  const double p2 = spectrum_product(states, 1);
  const double n2 = static_cast<double>(n) * n;
  const double n3 = n2 * n;

  // G_{k2}: sum over arrangements with k2 parties on the second singular
  // value of prod (E_i h_i)^{1/n}
  std::vector<double> g(n + 1, 0.0);
  for (int mask = 0; mask < (1 << n); ++mask) {
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
      prod *= std::pow(states[i].spectrum[(mask >> i) & 1], 1.0 / n);
    g[popcount(mask)] += prod;
  }

  double num = 0.0;
  for (int k2 = 0; k2 <= n; k2 += 2) {
    const int k1 = n - k2;
    num += std::pow(std::pow(p1, k1) * std::pow(p2, k2), 1.0 / n3) * g[k2];
  }
  const double den =
      std::pow(2.0, n - 2) * std::sqrt(std::pow(p1, 2.0 / n2) + std::pow(p2, 2.0 / n2));
  return num / den;
}

double star_bound_noisy(const std::vector<TwoQubitState>& states,
                        const std::vector<double>& etas) {
  const int n = static_cast<int>(states.size());
  if (static_cast<int>(etas.size()) != n)
    throw std::invalid_argument("one eta per edge party expected");
  double prod = 1.0;
  for (double e : etas) {
    if (e < 0.0 || e > 1.0) throw std::invalid_argument("eta must be in [0,1]");
    prod *= e;
  }
  return std::pow(prod, 1.0 / n) * star_bound_analytic(states);
}

double xz_fixed_value(const std::vector<TwoQubitState>& states) {
  return 0.5 * (std::sqrt(spectrum_product(states, 0)) + std::sqrt(spectrum_product(states, 2)));
}

double sigma12_star_value(const std::vector<TwoQubitState>& states) {
  const int n = static_cast<int>(states.size());
  double sum = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (popcount(mask) % 2) continue;
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
      prod *= std::pow(states[i].spectrum[(mask >> i) & 1], 1.0 / n);
    sum += prod;
  }
  return sum / std::pow(2.0, n - 1);
}

namespace {

struct FamilyAngles {
  double cos_part = 0.0;
  double sin_part = 0.0;
  double eta = 0.0;
};

/// Recover (cos t, sin t, eta) when the pair is a +- equatorial family
/// pair: XZ means n_j = ((-1)^j cos t, 0, sin t), XY means
/// n_j = (cos t, (-1)^j sin t, 0).
std::optional<FamilyAngles> match_family(const MeasurementPair& pair, Plane plane) {
  if (std::abs(pair.m0.eta - pair.m1.eta) > tol::report) return std::nullopt;
  const Vec3& d0 = pair.m0.direction;
  const Vec3& d1 = pair.m1.direction;
  FamilyAngles f;
  f.eta = pair.m0.eta;
  if (plane == Plane::XZ) {
    if (std::abs(d0[1]) > tol::report || std::abs(d1[1]) > tol::report) return std::nullopt;
    f.cos_part = 0.5 * (d0[0] - d1[0]);
    f.sin_part = 0.5 * (d0[2] + d1[2]);
    if (std::abs(d0[0] + d1[0]) > tol::report || std::abs(d0[2] - d1[2]) > tol::report)
      return std::nullopt;
  } else {
    if (std::abs(d0[2]) > tol::report || std::abs(d1[2]) > tol::report) return std::nullopt;
    f.cos_part = 0.5 * (d0[0] + d1[0]);
    f.sin_part = 0.5 * (d0[1] - d1[1]);
    if (std::abs(d0[0] - d1[0]) > tol::report || std::abs(d0[1] + d1[1]) > tol::report)
      return std::nullopt;
  }
  if (f.cos_part < -tol::report || f.sin_part < -tol::report) return std::nullopt;
  if (std::abs(f.cos_part * f.cos_part + f.sin_part * f.sin_part - 1.0) > tol::report)
    return std::nullopt;
  return f;
}

}  // namespace

std::optional<double> recognized_family_value(const NetworkScenario& s) {
  if (s.topology == Topology::Linear) {
    const auto fa = match_family(*s.parties.front().pair, Plane::XZ);
    const auto fb = match_family(*s.parties.back().pair, Plane::XZ);
    if (!fa || !fb) return std::nullopt;
    if (std::abs(fa->cos_part - fb->cos_part) > tol::report ||
        std::abs(fa->sin_part - fb->sin_part) > tol::report)
      return std::nullopt;
    for (int p = 1; p < s.n; ++p)
      if (s.parties[p].basis->label_bits != 2) return std::nullopt;
    double prod_zz = 1.0, prod_xx = 1.0;
    for (const auto& src : s.sources) {
      prod_zz *= std::abs(src.correlation(2, 2));
      prod_xx *= std::abs(src.correlation(0, 0));
    }
    return std::sqrt(fa->eta * fb->eta) *
           (fa->sin_part * std::sqrt(prod_zz) + fa->cos_part * std::sqrt(prod_xx));
  }

  // star: all edges in the XY family at a common angle
  std::vector<FamilyAngles> fs;
  for (int p = 1; p <= s.n; ++p) {
    const auto f = match_family(*s.parties[p].pair, Plane::XY);
    if (!f) return std::nullopt;
    if (!fs.empty() && (std::abs(f->cos_part - fs.front().cos_part) > tol::report ||
                        std::abs(f->sin_part - fs.front().sin_part) > tol::report))
      return std::nullopt;
    fs.push_back(*f);
  }
  const int n = s.n;
  const double c = fs.front().cos_part, sn = fs.front().sin_part;
  double eta_prod = 1.0;
  for (const auto& f : fs) eta_prod *= f.eta;
  double sum = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (popcount(mask) % 2) continue;
    const int k2 = popcount(mask);
    double prod = std::pow(c, n - k2) * std::pow(sn, k2);
    for (int i = 0; i < n; ++i) {
      const int axis = ((mask >> i) & 1) ? 1 : 0;  // sigma2 parties probe the y axis
      prod *= std::abs(s.sources[i].correlation(axis, axis));
    }
    sum += std::pow(prod, 1.0 / n);
  }
  return std::pow(2.0, 2 - n) * std::pow(eta_prod, 1.0 / n) * sum;
}

InequalityReport evaluate_scenario(const NetworkScenario& scenario) {
  validate_scenario(scenario);
  const Behavior b = behavior(scenario);
  const auto analytic = recognized_family_value(scenario);
  if (scenario.topology == Topology::Linear) return linear_lhs(b, analytic);
  return star_lhs(b, *scenario.parties.front().basis, analytic);
}

}  // namespace qnet
