#pragma once

#include <array>
#include <memory>

#include "gpe/field.hpp"
#include "gpe/grid.hpp"
#include "gpe/spectral.hpp"

namespace gpe {

struct PhysicalParams {
  double epsilon = 0.1;  ///< interaction scale, > 0
  double delta = 0.0;    ///< inter-component coupling, >= 0
  double Omega = 0.0;    ///< rotation speed
  double N1 = 1.0;       ///< mass fractions, N1 + N2 = 1
  double N2 = 0.0;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  double fraction(int component) const { return component == 0 ? N1 : N2; }
};

/// Everything fixed by the discretization: grid, rho samples and the transforms.
struct Discretization {
  Grid grid;
  ConfinementField confinement;
  std::shared_ptr<const SpectralOps> ops;
  SquareMatrix<double> r2;  ///< x_n^2 + y_k^2
  RadialProfile profile;    ///< kept so refined grids resample the same rho
};

std::shared_ptr<const Discretization> make_discretization(const Grid& grid,
                                                          const RadialProfile& rho);
inline std::shared_ptr<const Discretization> make_discretization(const Grid& grid) {
  return make_discretization(grid, default_profile(grid.R));
}

struct CondensateState {
  std::array<WaveField, 2> psi;
  PhysicalParams params;
  std::shared_ptr<const Discretization> disc;

  const Grid& grid() const { return disc->grid; }
  double mass_target(int component) const {
    return disc->confinement.massTotal * params.fraction(component);
  }
};

struct EnergyReport {
  std::array<double, 2> kinetic{};
  std::array<double, 2> rotational{};
  double confinement = 0.0;
  double centrifugal = 0.0;  ///< zero unless requested
  double total = 0.0;
  /// delta^2/(4 eps^2) sum rho^2, the part of the confinement term that does not
  /// depend on the fields.
  double offset = 0.0;
  /// total - offset, accumulated without forming the (large) offset. Use this to
  /// compare energies of two states on the same grid.
  double reduced = 0.0;
};

struct GradientPack {
  std::array<RealMatrix, 2> dP;  ///< N x N, interior indices only
  std::array<RealMatrix, 2> dQ;
};

struct CriterionReport {
  std::array<RealMatrix, 2> KP;
  std::array<RealMatrix, 2> KQ;
  double KDelta = 0.0;
};

class CriterionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// <u, v> = Re sum_{interior} u conj(v)
double inner_product(const ComplexField& u, const ComplexField& v);
/// ||v||_Delta^2 = delta^2 <v, v>
double norm_delta_sq(const ComplexField& v, double spacing);

double kinetic_energy(const SpectralOps& ops, const WaveField& psi);
double rotational_energy(const SpectralOps& ops, const WaveField& psi, double Omega);
double confinement_energy(const WaveField& psi1, const WaveField& psi2, double eps, double delta_c,
                          const ConfinementField& conf, double spacing);

/// Energy plus the first derivatives of each component, reusable by gradient().
struct EnergyEvaluation {
  EnergyReport report;
  std::array<ComplexField, 2> dx;
  std::array<ComplexField, 2> dy;
};

EnergyEvaluation evaluate_energy(const CondensateState& state, bool withCentrifugal);
EnergyReport total_energy(const CondensateState& state, bool withCentrifugal);

GradientPack gradient(const CondensateState& state, bool withCentrifugal);
GradientPack gradient(const CondensateState& state, bool withCentrifugal,
                      const EnergyEvaluation& cached);

CriterionReport optimality_criterion(const CondensateState& state, const GradientPack& grad);

}  // namespace gpe
