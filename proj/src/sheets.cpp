#include "gpe/sheets.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

namespace gpe {

namespace {

constexpr GridPoint kOffsets[8] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                   {0, 1},   {1, -1}, {1, 0},  {1, 1}};

GridPoint shift(GridPoint p, GridPoint d) { return {p.n + d.n, p.k + d.k}; }

double density(const WaveField& psi, GridPoint p) { return std::norm(psi(p.n, p.k)); }

PointSet union_of(const ContourSet& set) {
  PointSet all;
  for (const Component& c : set.components) all.insert(c.points.begin(), c.points.end());
  return all;
}

bool touches(const PointSet& set, GridPoint p) {
  if (set.count(p)) return true;
  for (GridPoint d : kOffsets)
    if (set.count(shift(p, d))) return true;
  return false;
}

GridPoint midpoint(GridPoint a, GridPoint b) { return {(a.n + b.n) / 2, (a.k + b.k) / 2}; }

std::pair<GridPoint, GridPoint> closest_pair(const PointSet& a, const PointSet& b) {
  long best = -1;
  std::pair<GridPoint, GridPoint> out;
  for (GridPoint u : a)
    for (GridPoint v : b) {
      const long dn = u.n - v.n, dk = u.k - v.k;
      const long d2 = dn * dn + dk * dk;
      if (best < 0 || d2 < best) {
        best = d2;
        out = {u, v};
      }
    }
  return out;
}

}  // namespace

void SheetParams::validate() const {
  if (!(mLow > 0.0) || !(mLow <= mHigh) || !(mHigh < 1.0))
    throw std::invalid_argument("sheets: need 0 < mLow <= mHigh < 1");
  if (!(tol3 > 0.0)) throw std::invalid_argument("sheets: tol3 must be > 0");
}

bool are_neighbors(GridPoint a, GridPoint b) {
  return a != b && std::abs(a.n - b.n) <= 1 && std::abs(a.k - b.k) <= 1;
}

int neighbor_count(const PointSet& set, GridPoint p) {
  int c = 0;
  for (GridPoint d : kOffsets) c += static_cast<int>(set.count(shift(p, d)));
  return c;
}

ContourSet raw_contour_points(const WaveField& psi, const SheetParams& params, const Grid& grid) {
  params.validate();
  require_same_side(psi.side(), grid.side(), "raw_contour_points");
  PointSet k;
  for (int n = 1; n <= grid.N; ++n)
    for (int j = 1; j <= grid.N; ++j) {
      const double d = std::norm(psi(n, j));
      const double r = std::hypot(grid.x[n], grid.y[j]);
      const bool band = params.mLow <= d && d <= params.mHigh;
      const bool rim = std::abs(r - grid.R) <= grid.delta && d <= params.tol3;
      if (band || rim) k.insert({n, j});
    }
  ContourSet out;
  out.components.push_back({0, std::move(k)});
  out.provenance = Provenance::Raw;
  return out;
}

ContourSet prune(const WaveField& psi, const ContourSet& set) {
  const int N = static_cast<int>(psi.side()) - 2;
  PointSet k = union_of(set);
  PointSet added;
  for (GridPoint p : set.added)
    if (k.count(p)) added.insert(p);

  const auto erase = [&](GridPoint p) {
    k.erase(p);
    added.erase(p);
  };
  const auto admissible = [&](GridPoint c) {
    if (c.n < 1 || c.n > N || c.k < 1 || c.k > N || k.count(c)) return false;
    if (neighbor_count(k, c) > 3) return false;
    for (GridPoint d : kOffsets) {
      const GridPoint q = shift(c, d);
      if (k.count(q) && neighbor_count(k, q) + 1 > 3) return false;
    }
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    const std::vector<GridPoint> sweep(k.begin(), k.end());
    for (GridPoint p : sweep) {
      if (!k.count(p)) continue;
      int deg = neighbor_count(k, p);
      const double dp = density(psi, p);
      if (deg == 0) {
        erase(p);
        changed = true;
      } else if (deg == 1 && !added.count(p)) {
        std::optional<GridPoint> best;
        double bestDiff = 0.0;
        for (GridPoint d : kOffsets) {  // offsets are in (n, k) order
          const GridPoint c = shift(p, d);
          if (!admissible(c)) continue;
          const double diff = std::abs(density(psi, c) - dp);
          if (!best || diff < bestDiff) {
            best = c;
            bestDiff = diff;
          }
        }
        if (best) {
          k.insert(*best);
          added.insert(*best);
          changed = true;
        }
      } else if (deg >= 4) {
        while (deg > 3) {
          std::optional<GridPoint> worst;
          double worstDiff = 0.0;
          for (GridPoint d : kOffsets) {
            const GridPoint c = shift(p, d);
            if (!k.count(c)) continue;
            const double diff = std::abs(density(psi, c) - dp);
            if (!worst || diff > worstDiff) {
              worst = c;
              worstDiff = diff;
            }
          }
          erase(*worst);
          --deg;
        }
        changed = true;
      }
    }
  }

  ContourSet out;
  out.components.push_back({0, std::move(k)});
  out.added = std::move(added);
  out.provenance = Provenance::Pruned;
  return out;
}

ContourSet extract_contour_points(const WaveField& psi, const SheetParams& params,
                                  const Grid& grid) {
  return prune(psi, raw_contour_points(psi, params, grid));
}

ContourSet split_components(const ContourSet& set) {
  PointSet rest = union_of(set);
  std::vector<std::pair<GridPoint, PointSet>> parts;
  while (!rest.empty()) {
    const GridPoint seed = *rest.begin();
    PointSet comp;
    std::deque<GridPoint> queue{seed};
    rest.erase(seed);
    while (!queue.empty()) {
      const GridPoint p = queue.front();
      queue.pop_front();
      comp.insert(p);
      for (GridPoint d : kOffsets) {
        const GridPoint q = shift(p, d);
        if (rest.erase(q)) queue.push_back(q);
      }
    }
    parts.emplace_back(seed, std::move(comp));
  }
  std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
    if (a.second.size() != b.second.size()) return a.second.size() > b.second.size();
    return a.first < b.first;
  });
  ContourSet out;
  out.added = set.added;
  out.provenance = set.provenance;
  for (std::size_t i = 0; i < parts.size(); ++i)
    out.components.push_back({static_cast<int>(i), std::move(parts[i].second)});
  return out;
}

DecisionScript DecisionScript::parse(std::string_view text) {
  DecisionScript script;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string verb;
    if (!(words >> verb)) continue;
    Decision d;
    const auto fail = [&] {
      throw DecisionError("decision script line " + std::to_string(lineNo) + ": cannot parse '" +
                          line + "'");
    };
    if (verb == "keep" || verb == "drop") {
      d.kind = verb == "keep" ? Decision::Kind::Keep : Decision::Kind::Drop;
      if (!(words >> d.p)) fail();
    } else if (verb == "merge") {
      d.kind = Decision::Kind::Merge;
      if (!(words >> d.p >> d.q)) fail();
    } else {
      fail();
    }
    std::string extra;
    if (words >> extra) fail();
    script.actions.push_back(d);
  }
  return script;
}

std::string DecisionScript::to_text() const {
  std::string out;
  for (const Decision& d : actions) {
    switch (d.kind) {
      case Decision::Kind::Keep: out += "keep " + std::to_string(d.p); break;
      case Decision::Kind::Drop: out += "drop " + std::to_string(d.p); break;
      case Decision::Kind::Merge:
        out += "merge " + std::to_string(d.p) + " " + std::to_string(d.q);
        break;
    }
    out += '\n';
  }
  return out;
}

bool is_connected(const PointSet& set) {
  if (set.empty()) return true;
  ContourSet tmp;
  tmp.components.push_back({0, set});
  return split_components(tmp).components.size() == 1;
}

std::pair<PointSet, PointSet> merge_sets(const PointSet& a, const PointSet& b, int p, int q) {
  if (a.empty() || b.empty()) throw DecisionError("merge " + std::to_string(p) + " " +
                                                  std::to_string(q) + ": empty component");
  PointSet both = a;
  both.insert(b.begin(), b.end());
  const auto [u, v] = closest_pair(a, b);
  const GridPoint m = midpoint(u, v);
  PointSet inserted;
  if (touches(a, m) && touches(b, m)) {
    if (!both.count(m)) inserted.insert(m);
  } else {
    const PointSet single{m};
    const auto [u1, v1] = closest_pair(a, single);
    const auto [u2, v2] = closest_pair(single, b);
    for (GridPoint c : {m, midpoint(u1, v1), midpoint(u2, v2)})
      if (!both.count(c)) inserted.insert(c);
  }
  PointSet result = both;
  result.insert(inserted.begin(), inserted.end());
  if (!is_connected(result))
    throw DecisionError("merge " + std::to_string(p) + " " + std::to_string(q) +
                        " failed: components " + std::to_string(p) + " and " +
                        std::to_string(q) + " are still disconnected after one retry");
  return {std::move(result), std::move(inserted)};
}

ContourSet apply_decisions(const ContourSet& set, const DecisionScript& script) {
  std::map<int, PointSet> active;
  for (const Component& c : set.components) active[c.id] = c.points;
  PointSet added = set.added;
  bool merged = false;

  const auto require = [&](int id, const Decision& d) {
    if (!active.count(id)) {
      const std::string what = DecisionScript{{d}}.to_text();
      throw DecisionError("invalid component id " + std::to_string(id) + " in '" +
                          what.substr(0, what.size() - 1) + "'");
    }
  };
  for (const Decision& d : script.actions) {
    require(d.p, d);
    switch (d.kind) {
      case Decision::Kind::Keep: break;
      case Decision::Kind::Drop: active.erase(d.p); break;
      case Decision::Kind::Merge: {
        require(d.q, d);
        if (d.p == d.q)
          throw DecisionError("merge " + std::to_string(d.p) + " " + std::to_string(d.q) +
                              ": a component cannot be merged with itself");
        auto [joined, inserted] = merge_sets(active.at(d.p), active.at(d.q), d.p, d.q);
        const int keep = std::min(d.p, d.q), retire = std::max(d.p, d.q);
        active[keep] = std::move(joined);
        active.erase(retire);
        added.insert(inserted.begin(), inserted.end());
        merged = true;
        break;
      }
    }
  }
  ContourSet out;
  for (auto& [id, pts] : active) out.components.push_back({id, std::move(pts)});
  out.added = std::move(added);
  out.provenance = merged ? Provenance::Merged : set.provenance;
  return out;
}

std::string to_string(ContourStatus s) {
  switch (s) {
    case ContourStatus::Pending: return "pending";
    case ContourStatus::Closed: return "closed";
    case ContourStatus::NotClosable: return "not-closable";
  }
  return "unknown";
}

ContourRecord sort_contour(const PointSet& points, int id) {
  if (points.size() < 8) throw std::invalid_argument("sort_contour: need at least 8 points");
  const double total = static_cast<double>(points.size());
  double bn = 0.0, bk = 0.0;
  for (GridPoint p : points) {
    bn += p.n;
    bk += p.k;
  }
  bn /= total;
  bk /= total;

  GridPoint start = *points.begin();
  double bestDx = std::numeric_limits<double>::infinity();
  for (GridPoint p : points) {
    const double dx = std::abs(p.n - bn);
    if (dx < bestDx - 1e-12 || (std::abs(dx - bestDx) <= 1e-12 && p.k > start.k)) {
      bestDx = std::min(bestDx, dx);
      start = p;
    }
  }

  const auto angle = [&](GridPoint p) { return std::atan2(p.k - bk, p.n - bn); };
  const auto wrap = [](double a) {
    while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
  };
  // anticlockwise tangent at the start: the radial direction turned by +90 degrees
  const auto start_direction = [&] {
    const double rn = start.n - bn, rk = start.k - bk;
    if (rn == 0.0 && rk == 0.0) return std::pair{-1.0, 0.0};
    return std::pair{-rk, rn};
  };

  PointSet remaining = points;
  PointSet visited{start};
  std::vector<GridPoint> path{start};
  const auto coverage = [&] { return static_cast<double>(path.size()) / total; };
  const auto notClosable = [&] {
    throw ContourError("contour not closable (component " + std::to_string(id) + ")");
  };

  while (true) {
    const GridPoint last = path.back();
    if (path.size() >= 3 && are_neighbors(last, start) && coverage() >= 0.7) break;

    const auto [pn, pk] = path.size() >= 2
                              ? std::pair{double(last.n - path[path.size() - 2].n),
                                          double(last.k - path[path.size() - 2].k)}
                              : start_direction();
    std::optional<GridPoint> best;
    std::tuple<int, double, double> bestKey;
    for (GridPoint d : kOffsets) {
      const GridPoint c = shift(last, d);
      if (!remaining.count(c) || visited.count(c)) continue;
      const double advance = wrap(angle(c) - angle(last));
      const double turn = std::atan2(pn * d.k - pk * d.n, pn * d.n + pk * d.k);
      const std::tuple<int, double, double> key{advance < 0.0 ? 1 : 0,
                                                advance < 0.0 ? -advance : advance, turn};
      if (!best || key < bestKey) {
        best = c;
        bestKey = key;
      }
    }
    if (best) {
      path.push_back(*best);
      visited.insert(*best);
      continue;
    }
    // dead end: drop the last point from the path and from the set
    remaining.erase(last);
    path.pop_back();
    if (path.empty() || static_cast<double>(remaining.size()) < 0.7 * total) notClosable();
  }

  ContourRecord rec;
  rec.id = id;
  rec.coverage = coverage();
  rec.sortedPath = std::move(path);
  rec.status = ContourStatus::Closed;
  return rec;
}

ContourRecord sheet_index(const WaveField& psi, ContourRecord record) {
  if (record.status != ContourStatus::Closed)
    throw ContourError("sheet_index: contour " + std::to_string(record.id) + " is not closed");
  record.raw = winding_number(psi, record.sortedPath);
  record.index = std::lround(*record.raw);
  return record;
}

std::vector<ContourRecord> contour_records(const WaveField& psi, const ContourSet& decided) {
  std::vector<ContourRecord> out;
  for (const Component& c : decided.components) {
    ContourRecord rec;
    rec.id = c.id;
    try {
      rec = sheet_index(psi, sort_contour(c.points, c.id));
    } catch (const std::exception& e) {
      rec.id = c.id;
      rec.status = ContourStatus::NotClosable;
      rec.message = e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

double signed_area2(const std::vector<GridPoint>& path) {
  double a = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const GridPoint p = path[i], q = path[(i + 1) % path.size()];
    a += static_cast<double>(p.n) * q.k - static_cast<double>(q.n) * p.k;
  }
  return a;
}

}  // namespace gpe
