#include <doctest.h>

#include <cmath>

#include "builders.hpp"
#include "oracles.hpp"
#include "qnet/theorems.hpp"

using namespace qnet;

namespace {

int count_incompatible(const ConstructionResult& r) {
  int c = 0;
  for (bool f : r.incompatible) c += f ? 1 : 0;
  return c;
}

void check_intervals(const ConstructionResult& r) {
  for (const auto& iv : r.eta_intervals) {
    CHECK(iv.chosen > iv.lower - 1e-15);
    CHECK(iv.chosen <= iv.upper + 1e-15);
    CHECK(iv.chosen <= 1.0);
    CHECK(iv.chosen > 0.0);
  }
}

}  // namespace

TEST_CASE("thm1: one incompatible extreme suffices on good enough chains") {
  const auto r = thm1_construct({werner(0.87), werner(0.97)});
  CHECK(r.violated);
  CHECK(count_incompatible(r) == 1);
  CHECK(r.incompatible[0]);        // first party carries the incompatibility
  CHECK_FALSE(r.incompatible[2]);  // the other extreme stays compatible
  check_intervals(r);
  CHECK(r.behavior_checked);
  CHECK(std::abs(r.behavior_lhs - r.analytic_lhs) < tol::report);
  CHECK(r.behavior_lhs > 1.0 + tol::report);
  // interval endpoints recomputed independently: eta1 over
  // ((cos r + sin r)/B^2, 1], eta2 over (1/(eta1 B^2), 1/(cos r + sin r)]
  const double b2 = 2.0 * 0.87 * 0.97;
  CHECK(r.eta_intervals[0].lower == doctest::Approx(std::sqrt(2.0) / b2).epsilon(1e-12));
  CHECK(r.eta_intervals[1].upper == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.eta_intervals[1].lower ==
        doctest::Approx(1.0 / (r.eta_intervals[0].chosen * b2)).epsilon(1e-12));
  // the chosen etas sit strictly inside
  CHECK(r.eta_intervals[0].chosen > r.eta_intervals[0].lower);
  CHECK(r.eta_intervals[1].chosen > r.eta_intervals[1].lower);
  CHECK(r.eta_intervals[1].chosen < r.eta_intervals[1].upper);
}

TEST_CASE("thm1: Bell-state pair works, weak Werner pair is rejected") {
  const auto r = thm1_construct({werner(1.0), werner(1.0)});
  CHECK(r.violated);
  CHECK(count_incompatible(r) == 1);
  CHECK(std::abs(r.criterion_lhs - 2.0) < 1e-12);
  CHECK(std::abs(r.criterion_rhs - std::pow(2.0, 2.0 / 3.0)) < 1e-12);

  try {
    thm1_construct({werner(0.6), werner(0.6)});
    FAIL("criterion should have failed");
  } catch (const criterion_error& e) {
    CHECK(e.lhs() == doctest::Approx(0.72).epsilon(1e-12));
    CHECK(e.rhs() == doctest::Approx(std::pow(2.0 * 0.6, 2.0 / 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("thm4: star construction leaves only the first edge incompatible") {
  for (int n : {2, 3}) {
    const auto r = thm4_construct(std::vector<TwoQubitState>(n, werner(0.93)));
    CHECK(r.violated);
    CHECK(count_incompatible(r) == 1);
    CHECK(r.incompatible[1]);
    check_intervals(r);
    REQUIRE(r.behavior_checked);
    CHECK(std::abs(r.behavior_lhs - r.analytic_lhs) < tol::report);
    // middle edges pinned to the compatibility boundary, last edge capped by it
    const double t = std::asin(std::sqrt(0.5));  // equal singular values
    const double threshold = 1.0 / (std::cos(t) + std::sin(t));
    for (size_t i = 1; i + 1 < r.eta_intervals.size(); ++i)
      CHECK(r.eta_intervals[i].chosen == doctest::Approx(threshold).epsilon(1e-12));
    CHECK(r.eta_intervals.back().upper == doctest::Approx(threshold).epsilon(1e-12));
  }
  CHECK(thm4_construct(std::vector<TwoQubitState>(3, werner(1.0))).violated);
  CHECK_THROWS_AS(thm4_construct(std::vector<TwoQubitState>(3, werner(0.5))),
                  criterion_error);
}

TEST_CASE("thm2 audit: sharp sigma1/sigma3 chains never violate") {
  const auto r2 = thm2_audit(2, 120, 2024);
  CHECK(r2.max_lhs <= 1.0 + tol::report);
  CHECK(r2.max_closed_form_gap < tol::report);
  const auto r3 = thm2_audit(3, 40, 2025);
  CHECK(r3.max_lhs <= 1.0 + tol::report);
  CHECK(r3.max_closed_form_gap < tol::report);
  // determinism
  CHECK(thm2_audit(2, 25, 7).max_lhs == thm2_audit(2, 25, 7).max_lhs);
  // Bell states sit exactly on the boundary
  const Behavior b = behavior(testutil::chain(
      {werner(1.0), werner(1.0)}, {DichotomicObservable{1.0, {0, 0, 1}},
                                   DichotomicObservable{1.0, {1, 0, 0}}},
      {DichotomicObservable{1.0, {0, 0, 1}}, DichotomicObservable{1.0, {1, 0, 0}}}));
  CHECK(linear_lhs(b).lhs == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("thm5 audit: sharp sigma1/sigma2 stars never violate") {
  const auto r = thm5_audit(3, 60, 99);
  CHECK(r.max_lhs <= 1.0 + tol::report);
  CHECK(r.max_closed_form_gap < tol::report);
  // werner triple reduces to v
  std::vector<TwoQubitState> states(3, werner(0.81));
  CHECK(sigma12_star_value(states) == doctest::Approx(0.81).epsilon(1e-12));
}

TEST_CASE("thm3: bilocal model for compatible extremes") {
  const NetworkScenario s =
      testutil::chain({werner(0.87), werner(0.97)}, equatorial_pair(Plane::XZ, M_PI / 4, 0.699),
                      equatorial_pair(Plane::XZ, M_PI / 4, 0.65));
  const LocalHVModel m = thm3_bilocal_model(s);
  CHECK(m.max_reconstruction_error < 1e-10);
  CHECK(m.factorization_defect < 1e-12);
  double total = 0.0;
  for (double w : m.joint_weights) {
    CHECK(w >= -1e-14);
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dump_model(m).find("max reconstruction error") != std::string::npos);

  // an incompatible extreme breaks the precondition
  NetworkScenario bad = s;
  bad.parties[0].pair = equatorial_pair(Plane::XZ, M_PI / 4, 0.939);
  CHECK_THROWS(thm3_bilocal_model(bad));
}

TEST_CASE("thm6: star model when every edge is compatible") {
  std::vector<MeasurementPair> edges(3, equatorial_pair(Plane::XY, M_PI / 4, 0.7));
  const NetworkScenario s =
      testutil::star({werner(0.9), werner(0.8), random_state(5)}, edges);
  const LocalHVModel m = thm6_star_model(s);
  CHECK(m.max_reconstruction_error < 1e-10);
  CHECK(m.factorization_defect < 1e-12);  // weights factorize per source

  edges[1] = equatorial_pair(Plane::XY, M_PI / 4, 0.95);
  CHECK_THROWS(thm6_star_model(testutil::star({werner(0.9), werner(0.8), werner(0.7)}, edges)));
}

TEST_CASE("thm7: one compatible edge rules out full network nonlocality") {
  // two sharp (incompatible) edges plus one compatible edge
  std::vector<MeasurementPair> edges{equatorial_pair(Plane::XY, M_PI / 4, 0.69),
                                     equatorial_pair(Plane::XY, M_PI / 4, 1.0),
                                     equatorial_pair(Plane::XY, M_PI / 4, 1.0)};
  const NetworkScenario s = testutil::star({werner(0.95), werner(0.95), werner(0.95)}, edges);
  const LocalHVModel m = thm7_fnn_decompose(s, 1);
  CHECK(m.max_reconstruction_error < 1e-10);
  CHECK(m.modeled_parties == std::vector<int>{1});

  CHECK_THROWS(thm7_fnn_decompose(s, 2));  // sharp pair at pi/4 is incompatible
  CHECK_THROWS(thm7_fnn_decompose(s, 0));  // hub is not an edge party

  // chains work too: factor out a compatible extreme
  const NetworkScenario c =
      testutil::chain({werner(0.87), werner(0.97)}, equatorial_pair(Plane::XZ, M_PI / 4, 0.939),
                      equatorial_pair(Plane::XZ, M_PI / 4, 0.699));
  CHECK(thm7_fnn_decompose(c, 2).max_reconstruction_error < 1e-10);
}

TEST_CASE("thm1/thm4 reject misaligned sources") {
  Tensor3 skew = Tensor3::diagonal(-0.8, -0.9, -0.9);
  // strong enough to pass the criterion, but E2 = 0.9 sits on y while
  // the chain recipe probes x (|T_xx| = 0.8)
  CHECK_THROWS_AS(thm1_construct({from_bloch({0, 0, 0}, {0, 0, 0}, skew),
                                  from_bloch({0, 0, 0}, {0, 0, 0}, skew)}),
                  std::invalid_argument);
}
