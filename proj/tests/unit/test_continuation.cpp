#include <doctest.h>

#include "tfe10/continuation.hpp"

using namespace tfe10;
using namespace tfe10::continuation;

TEST_CASE("short branch from the kernel limit") {
  StepPolicy policy;
  policy.checkpoints = {0.05, 0.1};
  const auto b = trace_branch(1e-3, 0.1, 1, policy);
  CHECK(b.termination == BranchTermination::reached_n_max);
  REQUIRE(b.points.size() >= 3);
  CHECK(b.points.back().n == 0.1);
  bool hit = false;
  for (const auto& p : b.points) {
    CHECK(p.alpha0 == 1.0 / (10.0 + p.n));
    CHECK(p.residual <= 1e-8);
    hit = hit || p.n == 0.05;
  }
  CHECK(hit);
  CHECK(revalidate(b, b.points.size() - 1).empty());

  const auto table = branch_report(b);
  CHECK(table.rows.size() == b.points.size());
  CHECK(branch_csv(b).find('\n') != std::string::npos);
  const auto profile = point_profile(b, 0, 501);
  CHECK(profile.size() == 501);
}
