#include <cmath>
#include <random>

#include "doctest.h"
#include "gpe/minimizer.hpp"
#include "support.hpp"

using namespace gpe;
using gpe::testing::random_state;
using gpe::testing::two_component_params;

namespace {

CondensateState gaussian_state(int N, const PhysicalParams& p) {
  return make_state(make_discretization(build_grid(2.0, 1.5, N)), p, init::OffsetGaussian{-0.3, 0.1},
                    init::OffsetGaussian{0.4, -0.2});
}

struct InvariantWatch {
  double lastReduced = std::numeric_limits<double>::infinity();
  double worstMass = 0.0;
  long increases = 0;
  long accepted = 0;

  StepObserver observer() {
    return [this](const CondensateState& st, const SolverProgress&, const LogRow& row, bool) {
      if (!row.accepted) return;
      ++accepted;
      const double e = total_energy(st, false).reduced;
      if (e > lastReduced) ++increases;
      lastReduced = e;
      for (int l = 0; l < 2; ++l) {
        const double target = st.mass_target(l);
        if (target == 0.0) continue;
        worstMass = std::max(worstMass, std::abs(norm_delta_sq(st.psi[l], st.grid().delta) - target) / target);
      }
    };
  }
};

}  // namespace

TEST_CASE("projection hits the mass target") {
  std::mt19937_64 rng(31);
  const WaveField f = reference::random_field(10, rng, true);
  const WaveField p = project(f, 3.5, 0.2);
  CHECK(norm_delta_sq(p, 0.2) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(project(f, 0.0, 0.2) == WaveField(10));
  CHECK_THROWS_AS(project(f, -1.0, 0.2), ProjectionError);
  CHECK_THROWS_AS(project(WaveField(10), 1.0, 0.2), ProjectionError);
}

TEST_CASE("initial state satisfies the constraints") {
  const CondensateState st = gaussian_state(20, two_component_params());
  for (int l = 0; l < 2; ++l) {
    CHECK(has_zero_boundary(st.psi[l]));
    CHECK(norm_delta_sq(st.psi[l], st.grid().delta) == doctest::Approx(st.mass_target(l)).epsilon(1e-13));
  }
}

TEST_CASE("accepted steps lower the energy and keep the masses") {
  for (bool cent : {false, true}) {
    SolverConfig cfg;
    cfg.maxIter = 300;
    cfg.K0 = 1e-9;
    cfg.withCentrifugal = cent;
    InvariantWatch w;
    const MinimizeResult r = epg_minimize(gaussian_state(16, two_component_params()), cfg, w.observer());
    CHECK(r.log.stopReason == StopReason::IterationCap);
    CHECK(w.accepted == 301);  // the initial row counts
    CHECK(w.increases == 0);
    CHECK(w.worstMass < 1e-10);
    for (const LogRow& row : r.log.rows)
      if (row.accepted) CHECK(row.energyDiff >= 0.0);
  }
}

TEST_CASE("a mass-free component stays zero") {
  PhysicalParams p = two_component_params();
  p.N1 = 1.0;
  p.N2 = 0.0;
  SolverConfig cfg;
  cfg.maxIter = 50;
  const MinimizeResult r = epg_minimize(gaussian_state(12, p), cfg);
  CHECK(r.state.psi[1] == WaveField(r.state.grid().side()));
}

TEST_CASE("step underflow stops the run") {
  SolverConfig cfg;
  cfg.h = 400.0;
  cfg.h0 = 150.0;
  const MinimizeResult r = epg_minimize(gaussian_state(12, two_component_params()), cfg);
  CHECK(r.log.stopReason == StopReason::StepUnderflow);
  REQUIRE(r.log.rows.size() == 3);
  CHECK(r.log.rows[1].h == 400.0);
  CHECK_FALSE(r.log.rows[1].accepted);
  CHECK(r.log.rows[2].h == 200.0);
  CHECK_FALSE(r.log.rows[2].accepted);
  CHECK(r.progress.h == 200.0);
  CHECK(r.progress.step == 0);
  CHECK(r.progress.attempts == 2);
}

TEST_CASE("iteration cap stops the run") {
  SolverConfig cfg;
  cfg.maxIter = 7;
  cfg.K0 = 1e-12;
  const MinimizeResult r = epg_minimize(gaussian_state(12, two_component_params()), cfg);
  CHECK(r.log.stopReason == StopReason::IterationCap);
  CHECK(r.progress.step == 7);
  CHECK(r.log.rows.back().step == 7);
}

TEST_CASE("the criterion is checked on the initial state") {
  SolverConfig cfg;
  cfg.K0 = 1e9;
  const MinimizeResult r = epg_minimize(gaussian_state(12, two_component_params()), cfg);
  CHECK(r.log.stopReason == StopReason::CriterionMet);
  REQUIRE(r.log.rows.size() == 1);
  CHECK(r.log.rows[0].KDelta.has_value());
  CHECK(r.progress.attempts == 0);
}

TEST_CASE("sup-norm stop") {
  SolverConfig cfg;
  cfg.K0 = 1e-12;
  cfg.G0 = 1e9;
  const MinimizeResult r = epg_minimize(gaussian_state(12, two_component_params()), cfg);
  CHECK(r.log.stopReason == StopReason::SupDiffMet);
  CHECK(r.progress.step == 1);
}

TEST_CASE("log and criterion strides") {
  SolverConfig cfg;
  cfg.maxIter = 40;
  cfg.K0 = 1e-12;
  cfg.logStride = 10;
  cfg.criterionStride = 4;
  const MinimizeResult r = epg_minimize(gaussian_state(12, two_component_params()), cfg);
  for (std::size_t i = 1; i < r.log.rows.size(); ++i) {
    const LogRow& row = r.log.rows[i];
    CHECK(row.iter > r.log.rows[i - 1].iter);
    if (!row.accepted) continue;
    CHECK(row.step % 10 == 0);
    CHECK(row.KDelta.has_value() == (row.step % 4 == 0));
  }
}

TEST_CASE("a resumed run continues exactly") {
  SolverConfig cfg;
  cfg.K0 = 1e-12;
  cfg.maxIter = 60;
  const CondensateState st0 = gaussian_state(14, two_component_params());
  const MinimizeResult full = epg_minimize(st0, cfg);

  cfg.maxIter = 25;
  const MinimizeResult first = epg_minimize(st0, cfg);
  cfg.maxIter = 60;
  const MinimizeResult second = epg_minimize(first.state, cfg, {}, first.progress);

  std::vector<LogRow> joined = first.log.rows;
  joined.insert(joined.end(), second.log.rows.begin(), second.log.rows.end());
  CHECK(joined == full.log.rows);
  CHECK(second.state.psi[0] == full.state.psi[0]);
  CHECK(second.state.psi[1] == full.state.psi[1]);
}

TEST_CASE("two runs are identical") {
  SolverConfig cfg;
  cfg.maxIter = 80;
  cfg.K0 = 1e-12;
  const CondensateState st0 = gaussian_state(16, two_component_params());
  const MinimizeResult a = epg_minimize(st0, cfg);
  const MinimizeResult b = epg_minimize(st0, cfg);
  CHECK(a.log.rows == b.log.rows);
  CHECK(a.state.psi[0] == b.state.psi[0]);
}

TEST_CASE("interpolation onto a finer grid") {
  std::mt19937_64 rng(32);
  const CondensateState coarse = random_state(9, two_component_params(), rng);
  const CondensateState fine = interpolate_state(coarse, 19);
  CHECK(fine.grid().N == 19);
  CHECK(fine.grid().L == coarse.grid().L);
  for (int l = 0; l < 2; ++l) {
    CHECK(has_zero_boundary(fine.psi[l]));
    CHECK(norm_delta_sq(fine.psi[l], fine.grid().delta) == doctest::Approx(fine.mass_target(l)).epsilon(1e-13));
  }
  // the spacing halves, so fine point (2n, 2k) sits on coarse point (n, k) and only the
  // projection rescales it
  const complex ratio = fine.psi[0](4, 6) / coarse.psi[0](2, 3);
  for (std::size_t n = 1; n <= 9; ++n)
    for (std::size_t k = 1; k <= 9; ++k)
      CHECK(std::abs(fine.psi[0](2 * n, 2 * k) - ratio * coarse.psi[0](n, k)) < 1e-12);
  CHECK(std::abs(ratio.imag()) < 1e-12);
  CHECK_THROWS_AS(interpolate_state(coarse, 9), std::invalid_argument);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.h0 = cfg.h;
  CHECK_THROWS(cfg.validate());
  cfg = SolverConfig{};
  cfg.logStride = 0;
  CHECK_THROWS(cfg.validate());
}
