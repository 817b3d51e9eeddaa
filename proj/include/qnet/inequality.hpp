#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qnet/network.hpp"

namespace qnet {

enum class Functional { LinearNLocal, StarNLocal };

/// Evaluated inequality with its correlators and (when the scenario's
/// settings come from a recognized optimal family) the closed-form
/// prediction next to the behavior-level value.
struct InequalityReport {
  Functional functional = Functional::LinearNLocal;
  std::vector<double> correlators;  // {I_n, J_n} or {J_1..J_{2^{n-1}}}
  double lhs = 0.0;
  double classical_bound = 1.0;
  std::optional<double> analytic;
  bool violated = false;
  std::optional<double> discrepancy;  // |lhs - analytic|
};

/// (I_n, J_n) of the linear functional, signs taken from the chain's
/// central parties' first / second label bits.
std::pair<double, double> linear_correlators(const Behavior& b);

/// sqrt|I| + sqrt|J| <= 1
InequalityReport linear_lhs(const Behavior& b, std::optional<double> analytic = std::nullopt);

/// Star correlators J_i, one per even-size subset of edge parties
/// assigned sigma_2 (subsets enumerated by ascending bitmask). The
/// central post-processed bit for pattern i is the parity readout of the
/// matching Pauli string in the hub basis; the input sign s_i is the
/// parity of the sigma_2 parties' settings.
std::vector<double> star_correlators(const Behavior& b, const EntangledBasisMeasurement& hub_basis);

/// 2^{2-n} sum |J_i|^{1/n} <= 1
InequalityReport star_lhs(const Behavior& b, const EntangledBasisMeasurement& hub_basis,
                          std::optional<double> analytic = std::nullopt);

/// B = sqrt(prod E_i1 + prod E_i2)
double linear_bound_analytic(const std::vector<TwoQubitState>& states);

/// sqrt(eta1 eta2) * B
double linear_bound_noisy(const std::vector<TwoQubitState>& states, double eta1, double eta2);

/// Closed-form V_{n-star} from the correlation spectra.
double star_bound_analytic(const std::vector<TwoQubitState>& states);

/// (prod etas)^{1/n} * V_{n-star}
double star_bound_noisy(const std::vector<TwoQubitState>& states,
                        const std::vector<double>& etas);

/// Value of the linear functional under sharp sigma1/sigma3 extremes:
/// (sqrt(prod E_i1) + sqrt(prod E_i3))/2; never exceeds 1.
double xz_fixed_value(const std::vector<TwoQubitState>& states);

/// Value of the star functional under sharp sigma1/sigma2 edges:
/// sum over even-k arrangements of prod(E_i h_i)^{1/n} / 2^{n-1}.
double sigma12_star_value(const std::vector<TwoQubitState>& states);

/// Closed-form value of the scenario's functional when every edge party
/// measures a +- equatorial pair at a common angle (XZ for chains, XY
/// for stars); exact for arbitrary sources since only diagonal
/// correlation-tensor entries enter these families. Empty when the
/// settings fall outside the family.
std::optional<double> recognized_family_value(const NetworkScenario& scenario);

/// Full evaluation: behavior -> correlators -> report, with the analytic
/// field filled when the settings are recognized.
InequalityReport evaluate_scenario(const NetworkScenario& scenario);

}  // namespace qnet
