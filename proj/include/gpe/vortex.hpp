#pragma once

#include <compare>
#include <span>
#include <vector>

#include "gpe/field.hpp"
#include "gpe/grid.hpp"

namespace gpe {

/// Grid index pair; n along x, k along y.
struct GridPoint {
  int n = 0;
  int k = 0;
  auto operator<=>(const GridPoint&) const = default;
};

struct VortexParams {
  double tol1 = 0.1;   ///< candidate threshold on |psi|^2
  double tol2 = 0.05;  ///< required contrast on the ring
  int Nmin = 1;
  int Nmax = 3;

  /// Needs 0 < Nmin <= Nmax < N/2.
  void validate(int N) const;
};

struct ScreenedCenter {
  GridPoint center;
  int lambda = 0;
  double density = 0.0;  ///< |psi|^2 at the center
};

struct VortexRecord {
  GridPoint center;
  int lambda = 0;
  double raw = 0.0;  ///< unrounded winding
  long index = 0;    ///< rounded winding
  double centerDensity = 0.0;
  bool flagged = false;  ///< |raw - index| >= 0.25
};

class WindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interior points with |psi|^2 < tol1, row-major.
std::vector<GridPoint> find_candidates(const WaveField& psi, double tol1);

/// The 8*lambda points at Chebyshev distance lambda from c, anticlockwise,
/// starting at (n + lambda, k).
std::vector<GridPoint> square_ring(GridPoint c, int lambda);

/// Keeps candidates for which some ring S_lambda, Nmin <= lambda <= Nmax, lies in the
/// interior and has |psi|^2 > center + tol2 everywhere; lambda is the smallest such.
std::vector<ScreenedCenter> screen_candidates(const WaveField& psi,
                                              std::span<const GridPoint> candidates, double tol2,
                                              int Nmin, int Nmax);

/// Removes the denser of any two centers where one lies in the other's filled square
/// (half-width lambda, center excluded). Centers are visited by increasing density,
/// then (n, k); a center survives if it conflicts with no survivor.
std::vector<ScreenedCenter> isolate_centers(std::vector<ScreenedCenter> screened);

/// Winding of a closed sequence: phase increments between consecutive values (last to
/// first included) are taken in (-pi, pi] and their sum is divided by 2 pi.
double winding_number(std::span<const complex> values);
double winding_number(const WaveField& psi, std::span<const GridPoint> path);

std::vector<VortexRecord> vortex_census(const WaveField& psi, const VortexParams& params);

struct HoleParams {
  std::vector<double> radii;  ///< increasing
  int m0 = 512;
  double tol4 = 0.1;
};

struct HoleResult {
  double radius = 0.0;
  double raw = 0.0;
  long index = 0;
  std::vector<GridPoint> path;
};

/// Nearest interior grid points to (r cos(2 pi m/m0), r sin(2 pi m/m0)), m = 0..m0-1,
/// with consecutive repeats removed.
std::vector<GridPoint> circle_path(const Grid& grid, double r, int m0);

/// Scans the radii outward and stops at the first circle whose maximum |psi|^2 exceeds
/// tol4; returns that radius and the winding along the circle.
HoleResult giant_hole_index(const WaveField& psi, const Grid& grid, const HoleParams& params);

}  // namespace gpe
