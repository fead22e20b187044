#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gpe/energy.hpp"

namespace gpe {

struct SolverConfig {
  double h = 0.1;            ///< initial step
  double h0 = 1e-12;         ///< smallest admissible step
  double K0 = 5e-2;          ///< stop when KDelta < K0
  double G0 = 0.0;           ///< stop when sup |psi_m - psi_{m-1}|^2 < G0; 0 disables
  long maxIter = 1'000'000;  ///< cap on accepted steps
  int criterionStride = 1;   ///< evaluate KDelta every this many accepted steps
  int logStride = 1;         ///< record every this many accepted steps
  bool withCentrifugal = false;

  void validate() const;
};

enum class StopReason { CriterionMet, SupDiffMet, StepUnderflow, IterationCap };
std::string to_string(StopReason r);

struct LogRow {
  long iter = 0;   ///< attempt counter, strictly increasing
  long step = 0;   ///< accepted-step counter m
  bool accepted = true;
  double energy = 0.0;  ///< total energy of the accepted (or rejected trial) state
  double h = 0.0;       ///< step used for this attempt
  std::optional<double> KDelta;
  double supDiff = 0.0;     ///< max over components of sup |psi_new - psi_old|^2
  double energyDiff = 0.0;  ///< E(old) - E(new); negative on rejected attempts
  bool operator==(const LogRow&) const = default;
};

struct RunLog {
  std::vector<LogRow> rows;
  StopReason stopReason = StopReason::IterationCap;
};

/// Solver counters needed to continue a run exactly where it stopped.
struct SolverProgress {
  long step = 0;
  long attempts = 0;
  double h = 0.0;
};

struct MinimizeResult {
  CondensateState state;
  RunLog log;
  SolverProgress progress;
  std::optional<double> finalKDelta;
};

/// Called after every attempt and once for the initial state, with the current
/// (accepted) state. `logged` tells whether the row was appended to the RunLog.
using StepObserver = std::function<void(const CondensateState&, const SolverProgress&,
                                        const LogRow&, bool logged)>;

class ProjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// psi * sqrt(massTarget) / ||psi||_Delta. A zero target gives the zero field.
WaveField project(const WaveField& psi, double massTarget, double spacing);

/// Samples both components, zeroes the boundary and projects onto the mass targets.
/// Components with zero mass fraction are identically zero.
CondensateState make_state(std::shared_ptr<const Discretization> disc, const PhysicalParams& params,
                           const InitialKind& kind1, const InitialKind& kind2);

/// Explicit projected gradient descent with step halving.
///
/// Each attempt forms psi - h grad E, zeroes the boundary and projects both components
/// onto their mass targets. A trial whose energy is strictly larger than the current one
/// is rejected and h is halved (the run stops with StepUnderflow when h/2 < h0); otherwise
/// it is accepted and KDelta is evaluated. Passing `resume` continues a previous run with
/// its counters and step size and skips the initial criterion check.
MinimizeResult epg_minimize(CondensateState state0, const SolverConfig& cfg,
                            const StepObserver& observer = {},
                            std::optional<SolverProgress> resume = std::nullopt);

/// Bilinear interpolation of P and Q onto a finer grid with the same L, R and rho,
/// followed by boundary zeroing and projection onto the new mass targets.
CondensateState interpolate_state(const CondensateState& state, int Nnew);

}  // namespace gpe
