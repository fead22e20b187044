#include "gpe/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gpe {

void SolverConfig::validate() const {
  if (!(h0 > 0.0)) throw std::invalid_argument("solver: h0 must be > 0");
  if (!(h > h0)) throw std::invalid_argument("solver: need h > h0");
  if (!(K0 > 0.0)) throw std::invalid_argument("solver: K0 must be > 0");
  if (!(G0 >= 0.0)) throw std::invalid_argument("solver: G0 must be >= 0");
  if (maxIter < 0) throw std::invalid_argument("solver: maxIter must be >= 0");
  if (criterionStride < 1) throw std::invalid_argument("solver: criterionStride must be >= 1");
  if (logStride < 1) throw std::invalid_argument("solver: logStride must be >= 1");
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::CriterionMet: return "criterion-met";
    case StopReason::SupDiffMet: return "supdiff-met";
    case StopReason::StepUnderflow: return "step-underflow";
    case StopReason::IterationCap: return "iteration-cap";
  }
  return "unknown";
}

WaveField project(const WaveField& psi, double massTarget, double spacing) {
  if (massTarget < 0.0) throw ProjectionError("project: negative mass target");
  if (massTarget == 0.0) return WaveField(psi.side());
  const double norm2 = norm_delta_sq(psi, spacing);
  if (!(norm2 > 0.0)) throw ProjectionError("project: zero field with a positive mass target");
  const double scale = std::sqrt(massTarget / norm2);
  WaveField out = psi;
  for (auto& v : out.values()) v *= scale;
  return out;
}

CondensateState make_state(std::shared_ptr<const Discretization> disc, const PhysicalParams& params,
                           const InitialKind& kind1, const InitialKind& kind2) {
  params.validate();
  CondensateState st;
  st.params = params;
  st.disc = std::move(disc);
  const InitialKind* kinds[2] = {&kind1, &kind2};
  for (int l = 0; l < 2; ++l) {
    WaveField f = initial_field(st.grid(), *kinds[l]);
    st.psi[l] = project(f, st.mass_target(l), st.grid().delta);
  }
  return st;
}

namespace {

double sup_diff_sq(const CondensateState& a, const CondensateState& b) {
  double m = 0.0;
  for (int l = 0; l < 2; ++l) {
    const auto va = a.psi[l].values();
    const auto vb = b.psi[l].values();
    for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::norm(va[i] - vb[i]));
  }
  return m;
}

CondensateState trial_step(const CondensateState& st, const GradientPack& g, double h) {
  CondensateState t;
  t.params = st.params;
  t.disc = st.disc;
  const std::size_t s = st.grid().side();
  for (int l = 0; l < 2; ++l) {
    WaveField f(s);
    for (std::size_t n = 1; n + 1 < s; ++n)
      for (std::size_t k = 1; k + 1 < s; ++k)
        f(n, k) = st.psi[l](n, k) - h * complex{g.dP[l](n - 1, k - 1), g.dQ[l](n - 1, k - 1)};
    // boundary entries are left at zero
    t.psi[l] = project(f, st.mass_target(l), st.grid().delta);
  }
  return t;
}

}  // namespace

MinimizeResult epg_minimize(CondensateState state, const SolverConfig& cfg,
                            const StepObserver& observer, std::optional<SolverProgress> resume) {
  cfg.validate();
  state.params.validate();

  SolverProgress prog = resume.value_or(SolverProgress{0, 0, cfg.h});
  MinimizeResult res;
  RunLog& log = res.log;

  EnergyEvaluation current = evaluate_energy(state, cfg.withCentrifugal);
  GradientPack grad = gradient(state, cfg.withCentrifugal, current);

  auto finish = [&](StopReason why) {
    log.stopReason = why;
    res.state = std::move(state);
    res.progress = prog;
    return std::move(res);
  };

  if (!resume) {
    LogRow row;
    row.iter = prog.attempts;
    row.step = prog.step;
    row.energy = current.report.total;
    row.h = prog.h;
    const double K = optimality_criterion(state, grad).KDelta;
    row.KDelta = K;
    res.finalKDelta = K;
    log.rows.push_back(row);
    if (observer) observer(state, prog, row, true);
    if (K < cfg.K0) return finish(StopReason::CriterionMet);
  }

  while (true) {
    if (prog.step >= cfg.maxIter) return finish(StopReason::IterationCap);

    CondensateState trial = trial_step(state, grad, prog.h);
    EnergyEvaluation next = evaluate_energy(trial, cfg.withCentrifugal);
    ++prog.attempts;

    LogRow row;
    row.iter = prog.attempts;
    row.h = prog.h;
    row.energy = next.report.total;
    row.energyDiff = current.report.reduced - next.report.reduced;

    if (next.report.reduced > current.report.reduced) {
      row.accepted = false;
      row.step = prog.step;
      log.rows.push_back(row);
      const bool underflow = prog.h / 2.0 < cfg.h0;
      if (!underflow) prog.h /= 2.0;
      if (observer) observer(state, prog, row, true);
      if (underflow) return finish(StopReason::StepUnderflow);
      continue;
    }

    row.supDiff = sup_diff_sq(trial, state);
    state = std::move(trial);
    current = std::move(next);
    grad = gradient(state, cfg.withCentrifugal, current);
    ++prog.step;
    row.step = prog.step;

    if (prog.step % cfg.criterionStride == 0) {
      row.KDelta = optimality_criterion(state, grad).KDelta;
      res.finalKDelta = row.KDelta;
    }

    std::optional<StopReason> stop;
    if (row.KDelta && *row.KDelta < cfg.K0)
      stop = StopReason::CriterionMet;
    else if (cfg.G0 > 0.0 && row.supDiff < cfg.G0)
      stop = StopReason::SupDiffMet;
    else if (prog.step >= cfg.maxIter)
      stop = StopReason::IterationCap;

    const bool logged = stop || prog.step % cfg.logStride == 0;
    if (logged) log.rows.push_back(row);
    if (observer) observer(state, prog, row, logged);
    if (stop) return finish(*stop);
  }
}

CondensateState interpolate_state(const CondensateState& st, int Nnew) {
  const Grid& og = st.grid();
  if (Nnew <= og.N) throw std::invalid_argument("interpolate_state: Nnew must exceed N");
  const Grid ng = build_grid(og.L, og.R, Nnew);
  auto disc = make_discretization(ng, st.disc->profile);

  CondensateState out;
  out.params = st.params;
  out.disc = disc;
  const std::size_t os = og.side(), ns = ng.side();
  for (int l = 0; l < 2; ++l) {
    const WaveField& src = st.psi[l];
    WaveField f(ns);
    for (std::size_t n = 1; n + 1 < ns; ++n) {
      const double tx = (ng.x[n] + og.L) / og.delta;
      const std::size_t i = std::min(static_cast<std::size_t>(tx), os - 2);
      const double fx = tx - static_cast<double>(i);
      for (std::size_t k = 1; k + 1 < ns; ++k) {
        const double ty = (ng.y[k] + og.L) / og.delta;
        const std::size_t j = std::min(static_cast<std::size_t>(ty), os - 2);
        const double fy = ty - static_cast<double>(j);
        f(n, k) = (1 - fx) * (1 - fy) * src(i, j) + fx * (1 - fy) * src(i + 1, j) +
                  (1 - fx) * fy * src(i, j + 1) + fx * fy * src(i + 1, j + 1);
      }
    }
    zero_boundary(f);
    out.psi[l] = project(f, out.mass_target(l), ng.delta);
  }
  return out;
}

}  // namespace gpe
