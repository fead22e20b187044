#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "gpe/field.hpp"

namespace gpe {

/// Computational square [-L, L]^2 sampled at N+2 points per axis, with the
/// physical disk of radius R inside it.
struct Grid {
  double L = 0.0;
  double R = 0.0;
  int N = 0;
  double delta = 0.0;          ///< spacing 2L/(N+1), same on both axes
  std::vector<double> x, y;    ///< x_n = -L + n*delta, n = 0..N+1
  std::vector<double> xi;      ///< xi_p = -pi(N+1)/(2L) + p*pi/L
  std::vector<double> lambda;  ///< same values as xi, used along y

  std::size_t side() const { return static_cast<std::size_t>(N) + 2; }
  bool operator==(const Grid&) const = default;
};

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Grid build_grid(double L, double R, int N);

/// Confinement profile rho(x, y). May be very negative outside the disk.
using RadialProfile = std::function<double(double x, double y)>;

/// rho = min(1, 10 (R^2 - x^2 - y^2)).
RadialProfile default_profile(double R);

struct ConfinementField {
  SquareMatrix<double> values;  ///< rho at every grid point, (N+2)^2
  double massTotal = 0.0;       ///< delta^2 * sum of max(rho, 0)
};

ConfinementField confinement_field(const Grid& grid, const RadialProfile& rho);
inline ConfinementField confinement_field(const Grid& grid) {
  return confinement_field(grid, default_profile(grid.R));
}

namespace init {
struct CenteredGaussian {};                  ///< exp(-10x^2-10y^2)/5
struct OffsetGaussian { double cx, cy; };    ///< exp(-10(x-cx)^2-10(y-cy)^2)/5
struct SineSum {};                           ///< sin(x+y)
struct Custom { std::function<complex(double, double)> f; };
}  // namespace init

using InitialKind =
    std::variant<init::CenteredGaussian, init::OffsetGaussian, init::SineSum, init::Custom>;

/// Samples the initial datum on the grid and zeroes the boundary. Not normalized.
WaveField initial_field(const Grid& grid, const InitialKind& kind);

/// Nearest grid index (0..N+1) to coordinate v along an axis.
int nearest_index(const Grid& grid, double v);

}  // namespace gpe
