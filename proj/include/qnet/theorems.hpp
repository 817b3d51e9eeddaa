#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnet/inequality.hpp"
#include "qnet/network.hpp"

namespace qnet {

/// A sufficient-condition check failed; carries both sides so
/// near-boundary inputs are diagnosable.
class criterion_error : public std::runtime_error {
 public:
  criterion_error(const std::string& what, double lhs, double rhs)
      : std::runtime_error(what), lhs_(lhs), rhs_(rhs) {}
  double lhs() const { return lhs_; }
  double rhs() const { return rhs_; }

 private:
  double lhs_;
  double rhs_;
};

struct EtaInterval {
  double lower = 0.0;  // open end
  double upper = 1.0;  // closed end
  double chosen = 0.0;
};

/// Output of the constructive recipes: a ready-to-run scenario plus the
/// bookkeeping needed to verify the compatibility pattern and the value.
struct ConstructionResult {
  NetworkScenario scenario;
  std::vector<bool> incompatible;         // per party (centrals false)
  std::vector<EtaInterval> eta_intervals; // per edge party, party order
  double criterion_lhs = 0.0;
  double criterion_rhs = 0.0;
  double analytic_lhs = 0.0;
  double behavior_lhs = 0.0;
  bool behavior_checked = false;
  bool violated = false;
};

/// Chain recipe: only the first party measures an incompatible pair.
/// Sources must be given in the aligned frame (|T_zz| = E1, |T_xx| = E2);
/// throws criterion_error when the state criterion
/// prod E1 + prod E2 > (sqrt(prod E1) + sqrt(prod E2))^{2/3} fails.
ConstructionResult thm1_construct(const std::vector<TwoQubitState>& states);

/// Star recipe: only the first edge party measures an incompatible pair,
/// the middle edges sit exactly on the compatibility boundary. Sources
/// in the aligned frame (|T_xx| = E1, |T_yy| = E2). Behavior-level
/// verification is performed for n <= 4.
ConstructionResult thm4_construct(const std::vector<TwoQubitState>& states);

struct AuditResult {
  int n = 0;
  int random_samples = 0;
  int diagonal_samples = 0;
  std::uint64_t seed = 0;
  double max_lhs = 0.0;
  /// worst |behavior lhs - closed form| over the diagonal-tensor samples
  double max_closed_form_gap = 0.0;
};

/// Sharp sigma1/sigma3 extremes, Bell centers: the chain functional
/// never exceeds 1. Also checks the closed form
/// (sqrt(prod E1) + sqrt(prod E3))/2 on aligned diagonal-tensor tuples.
AuditResult thm2_audit(int n, int samples, std::uint64_t seed);

/// Sharp sigma1/sigma2 edges, GHZ center: the star functional never
/// exceeds 1; closed form checked on aligned diagonal-tensor tuples.
AuditResult thm5_audit(int n, int samples, std::uint64_t seed);

/// Hidden-variable model over parent-POVM outcomes for a set of edge
/// parties. Each modeled party j draws lambda_j in {0,1}^2 (encoded
/// l0*2+l1) and answers deterministically a_j = lambda_j[x_j]; the
/// remaining parties' conditional behavior comes from the global state
/// conditioned on the parents.
struct LocalHVModel {
  NetworkScenario scenario;
  std::vector<int> modeled_parties;
  /// joint weight per lambda tuple, base-4 index, first modeled party
  /// most significant
  std::vector<double> joint_weights;
  /// single-party marginals, aligned with modeled_parties
  std::vector<std::array<double, 4>> marginals;
  /// max |joint - product of marginals|; sources are independent, so
  /// this vanishes whenever the modeled parties touch disjoint sources
  double factorization_defect = 0.0;
  Behavior target;
  Behavior reconstructed;
  double max_reconstruction_error = 0.0;
};

/// Shared builder behind the model theorems. Every listed party must be
/// an edge party with a compatible pair.
LocalHVModel decompose_with_parents(const NetworkScenario& scenario,
                                    const std::vector<int>& modeled_parties);

/// Bilocal chain with both extremes compatible: full local model,
/// P(lambda, nu) factorizes across the two sources.
LocalHVModel thm3_bilocal_model(const NetworkScenario& scenario);

/// Star with every edge compatible: per-edge hidden variables, weights
/// factorize per source.
LocalHVModel thm6_star_model(const NetworkScenario& scenario);

/// One compatible edge suffices to rule out full network nonlocality:
/// factor that edge out through its parent POVM.
LocalHVModel thm7_fnn_decompose(const NetworkScenario& scenario, int edge_party);

/// Structured text dump: alphabets, weights, response tables,
/// reconstruction error.
std::string dump_model(const LocalHVModel& model);

}  // namespace qnet
