#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qnet/inequality.hpp"
#include "qnet/network.hpp"

namespace qnet {

enum class ForceFlag { None, Compatible, Incompatible };

/// Search range for one edge party: the candidate settings are the +-
/// equatorial pair in `plane` at angle t in [0, pi/2] with sharpness
/// eta in [0, eta_cap], further restricted by the force flag.
struct PartySearchRange {
  Plane plane = Plane::XZ;
  double eta_cap = 1.0;
  ForceFlag force = ForceFlag::None;
};

struct SearchBudget {
  int grid_points = 24;        // per angle, coarse phase
  int refine_iterations = 200; // simplex phase
  double shrink_tol = 1e-8;
};

struct SearchSpec {
  Topology topology = Topology::Linear;
  std::vector<TwoQubitState> sources;
  std::vector<PartySearchRange> edges;  // chain: 2 entries; star: n entries
  SearchBudget budget;
  std::uint64_t seed = 0;  // reserved for future stochastic phases
};

struct SearchResult {
  NetworkScenario scenario;  // best settings, directly re-runnable
  std::vector<double> angles;
  std::vector<double> etas;
  double best_lhs = 0.0;
  /// improvement history: (objective evaluation count, value)
  std::vector<std::pair<int, double>> trace;
};

/// Coarse angle grid (etas pushed to their feasible maximum, since the
/// objective is monotone in sharpness) followed by Nelder-Mead
/// refinement over all angles and etas. Deterministic for a fixed spec;
/// ties broken by first-found in scan order. Throws on infeasible
/// constraints (e.g. force-incompatible under an eta cap below the
/// global compatibility threshold).
SearchResult optimize(const SearchSpec& spec);

}  // namespace qnet
