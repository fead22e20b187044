#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gpe/field.hpp"
#include "gpe/grid.hpp"
#include "gpe/vortex.hpp"

namespace gpe {

struct SheetParams {
  double mLow = 0.4;
  double mHigh = 0.6;
  double tol3 = 0.3;
  void validate() const;
};

/// Ordered by (n, k), i.e. row-major.
using PointSet = std::set<GridPoint>;

bool are_neighbors(GridPoint a, GridPoint b);  ///< 8-connectivity, a != b
int neighbor_count(const PointSet& set, GridPoint p);

enum class Provenance { Raw, Pruned, Merged };

struct Component {
  int id = 0;
  PointSet points;
  bool operator==(const Component&) const = default;
};

struct ContourSet {
  std::vector<Component> components;
  PointSet added;  ///< points introduced by pruning or merging rather than read from the field
  Provenance provenance = Provenance::Raw;
  bool operator==(const ContourSet&) const = default;
};

/// Band points mLow <= |psi|^2 <= mHigh plus points within one cell of the circle
/// r = R with |psi|^2 <= tol3. Interior points only; one component, not pruned.
ContourSet raw_contour_points(const WaveField& psi, const SheetParams& params, const Grid& grid);

/// Neighbour pruning, swept in row-major order until nothing changes:
///   0 neighbours: removed;
///   1 neighbour (points not in `added` only): the missing neighbour with the closest
///     |psi|^2 is added, provided no point would end up with 4 or more neighbours;
///   4+ neighbours: the neighbour with the largest |psi|^2 difference is removed until
///     3 remain.
/// Ties go to the smallest (n, k). Works on the union of the components.
ContourSet prune(const WaveField& psi, const ContourSet& set);

/// raw_contour_points followed by prune.
ContourSet extract_contour_points(const WaveField& psi, const SheetParams& params,
                                  const Grid& grid);

/// 8-connected components, seeded at the smallest remaining point. Sorted by size
/// (largest first) then by seed; ids are the positions in that order.
ContourSet split_components(const ContourSet& set);

struct Decision {
  enum class Kind { Keep, Drop, Merge };
  Kind kind = Kind::Keep;
  int p = 0;
  int q = -1;
  bool operator==(const Decision&) const = default;
};

class DecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecisionScript {
  std::vector<Decision> actions;

  /// Lines `keep p`, `drop p`, `merge p q`; `#` starts a comment, blank lines ignored.
  static DecisionScript parse(std::string_view text);
  std::string to_text() const;
};

/// Applies the actions in order to a split set. Ids are stable: a merge keeps
/// min(p, q) and retires the other id; referring to a dropped, retired or unknown
/// id is an error. Components the script never mentions are kept. On error the
/// input is untouched and DecisionError names the offending action.
ContourSet apply_decisions(const ContourSet& set, const DecisionScript& script);

/// Joins two point sets through midpoints of their closest pair; throws DecisionError
/// when one retry does not connect them. Returns the union and the inserted points.
std::pair<PointSet, PointSet> merge_sets(const PointSet& a, const PointSet& b, int p, int q);

bool is_connected(const PointSet& set);

enum class ContourStatus { Pending, Closed, NotClosable };
std::string to_string(ContourStatus s);

struct ContourRecord {
  int id = 0;
  std::vector<GridPoint> sortedPath;
  double coverage = 0.0;
  std::optional<double> raw;  ///< unrounded winding
  std::optional<long> index;
  ContourStatus status = ContourStatus::Pending;
  std::string message;
  bool operator==(const ContourRecord&) const = default;
};

class ContourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Anticlockwise ordering of a closed contour with backtracking on dead ends.
/// Throws ContourError("contour not closable") when fewer than 70% of the points
/// could be kept, and std::invalid_argument for fewer than 8 points.
ContourRecord sort_contour(const PointSet& points, int id = 0);

/// Winding of psi along the sorted path.
ContourRecord sheet_index(const WaveField& psi, ContourRecord record);

/// Sort and index every component; failures are reported in the record status.
std::vector<ContourRecord> contour_records(const WaveField& psi, const ContourSet& decided);

/// Twice the signed area enclosed by a closed path (positive for anticlockwise).
double signed_area2(const std::vector<GridPoint>& path);

}  // namespace gpe
