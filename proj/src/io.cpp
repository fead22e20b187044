#include "gpe/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gpe {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint and field files are written in native little-endian order");

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& block) {
  if (!j.is_object()) throw ConfigError(block + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(block + ": unknown key '" + key + "'");
  }
}

template <class T>
void read_opt(const json& j, const char* key, T& out, const std::string& block) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(block + "." + key + ": " + e.what());
  }
}

InitialKind init_from_json(const json& j, const std::string& block) {
  check_keys(j, {"kind", "cx", "cy"}, block);
  std::string kind = "centered-gaussian";
  read_opt(j, "kind", kind, block);
  if (kind == "centered-gaussian") return init::CenteredGaussian{};
  if (kind == "sine-sum") return init::SineSum{};
  if (kind == "offset-gaussian") {
    init::OffsetGaussian g{0.0, 0.0};
    read_opt(j, "cx", g.cx, block);
    read_opt(j, "cy", g.cy, block);
    return g;
  }
  throw ConfigError(block + ": unknown init kind '" + kind + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

json points_json(const auto& pts) {
  json a = json::array();
  for (GridPoint p : pts) a.push_back({p.n, p.k});
  return a;
}

const char* kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::Density: return "density";
    case FieldKind::Phase: return "phase";
    case FieldKind::Real: return "real";
    case FieldKind::Imag: return "imag";
  }
  return "unknown";
}

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw CheckpointError("checkpoint truncated");
  return v;
}

constexpr char kMagic[8] = {'G', 'P', 'E', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void ExperimentConfig::validate() const {
  try {
    build_grid(L, R, N);
    physics.validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  int prev = N;
  for (int n : refine) {
    if (n <= prev) throw ConfigError("refine: grid sizes must increase and exceed grid.N");
    prev = n;
  }
  try {
    analysis.vortex.validate(N);
    analysis.sheets.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("analysis: ") + e.what());
  }
  if (analysis.sheets.component != 1 && analysis.sheets.component != 2)
    throw ConfigError("analysis.sheets.component must be 1 or 2");
  if (output.checkpointStride < 0) throw ConfigError("output.checkpointStride must be >= 0");
}

AnalysisConfig analysis_from_json(const json& j) {
  AnalysisConfig a;
  check_keys(j, {"vortex", "sheets", "hole"}, "analysis");
  if (j.contains("vortex")) {
    const json& v = j["vortex"];
    check_keys(v, {"tol1", "tol2", "Nmin", "Nmax"}, "analysis.vortex");
    read_opt(v, "tol1", a.vortex.tol1, "analysis.vortex");
    read_opt(v, "tol2", a.vortex.tol2, "analysis.vortex");
    read_opt(v, "Nmin", a.vortex.Nmin, "analysis.vortex");
    read_opt(v, "Nmax", a.vortex.Nmax, "analysis.vortex");
  }
  if (j.contains("sheets")) {
    const json& s = j["sheets"];
    check_keys(s, {"enabled", "component", "mLow", "mHigh", "tol3"}, "analysis.sheets");
    read_opt(s, "enabled", a.sheets.enabled, "analysis.sheets");
    read_opt(s, "component", a.sheets.component, "analysis.sheets");
    read_opt(s, "mLow", a.sheets.params.mLow, "analysis.sheets");
    read_opt(s, "mHigh", a.sheets.params.mHigh, "analysis.sheets");
    read_opt(s, "tol3", a.sheets.params.tol3, "analysis.sheets");
  }
  if (j.contains("hole")) {
    const json& h = j["hole"];
    check_keys(h, {"radii", "m0", "tol4"}, "analysis.hole");
    HoleParams hp;
    read_opt(h, "m0", hp.m0, "analysis.hole");
    read_opt(h, "tol4", hp.tol4, "analysis.hole");
    if (!h.contains("radii")) throw ConfigError("analysis.hole.radii is required");
    const json& r = h["radii"];
    if (r.is_array()) {
      read_opt(h, "radii", hp.radii, "analysis.hole");
    } else {
      check_keys(r, {"from", "to", "step"}, "analysis.hole.radii");
      double from = 0, to = 0, step = 0;
      read_opt(r, "from", from, "analysis.hole.radii");
      read_opt(r, "to", to, "analysis.hole.radii");
      read_opt(r, "step", step, "analysis.hole.radii");
      if (!(step > 0.0) || !(to >= from)) throw ConfigError("analysis.hole.radii: bad range");
      const long count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
      for (long i = 0; i < count; ++i) hp.radii.push_back(from + static_cast<double>(i) * step);
    }
    if (hp.radii.empty() || !std::is_sorted(hp.radii.begin(), hp.radii.end()))
      throw ConfigError("analysis.hole.radii must be a nonempty increasing list");
    if (hp.m0 < 3 || !(hp.tol4 > 0.0)) throw ConfigError("analysis.hole: need m0 >= 3, tol4 > 0");
    a.hole = std::move(hp);
  }
  return a;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  check_keys(j, {"grid", "physics", "solver", "init", "refine", "analysis", "output"}, "config");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, {"L", "R", "N"}, "grid");
    read_opt(g, "L", c.L, "grid");
    read_opt(g, "R", c.R, "grid");
    read_opt(g, "N", c.N, "grid");
  }
  if (j.contains("physics")) {
    const json& p = j["physics"];
    check_keys(p, {"epsilon", "delta", "Omega", "N1", "N2", "withCentrifugal"}, "physics");
    read_opt(p, "epsilon", c.physics.epsilon, "physics");
    read_opt(p, "delta", c.physics.delta, "physics");
    read_opt(p, "Omega", c.physics.Omega, "physics");
    read_opt(p, "N1", c.physics.N1, "physics");
    read_opt(p, "N2", c.physics.N2, "physics");
    read_opt(p, "withCentrifugal", c.solver.withCentrifugal, "physics");
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    check_keys(s, {"h", "h0", "K0", "G0", "maxIter", "criterionStride", "logStride"}, "solver");
    read_opt(s, "h", c.solver.h, "solver");
    read_opt(s, "h0", c.solver.h0, "solver");
    read_opt(s, "K0", c.solver.K0, "solver");
    read_opt(s, "G0", c.solver.G0, "solver");
    read_opt(s, "maxIter", c.solver.maxIter, "solver");
    read_opt(s, "criterionStride", c.solver.criterionStride, "solver");
    read_opt(s, "logStride", c.solver.logStride, "solver");
  }
  if (j.contains("init")) {
    const json& i = j["init"];
    check_keys(i, {"psi1", "psi2"}, "init");
    if (i.contains("psi1")) c.init[0] = init_from_json(i["psi1"], "init.psi1");
    if (i.contains("psi2")) c.init[1] = init_from_json(i["psi2"], "init.psi2");
  }
  read_opt(j, "refine", c.refine, "config");
  if (j.contains("analysis")) c.analysis = analysis_from_json(j["analysis"]);
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, {"dir", "checkpointStride"}, "output");
    std::string dir = c.output.dir.string();
    read_opt(o, "dir", dir, "output");
    c.output.dir = dir;
    read_opt(o, "checkpointStride", c.output.checkpointStride, "output");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_checkpoint(const fs::path& path, const CondensateState& st, const SolverProgress& pr) {
  const Grid& g = st.grid();
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw CheckpointError("cannot write " + tmp.string());
    os.write(kMagic, sizeof kMagic);
    put(os, kVersion);
    put(os, std::uint32_t{0});
    put(os, g.L);
    put(os, g.R);
    put(os, static_cast<std::int64_t>(g.N));
    put(os, st.params.epsilon);
    put(os, st.params.delta);
    put(os, st.params.Omega);
    put(os, st.params.N1);
    put(os, st.params.N2);
    put(os, static_cast<std::int64_t>(pr.step));
    put(os, static_cast<std::int64_t>(pr.attempts));
    put(os, pr.h);
    for (int l = 0; l < 2; ++l) {
      for (const complex& v : st.psi[l].values()) put(os, v.real());
      for (const complex& v : st.psi[l].values()) put(os, v.imag());
    }
    if (!os) throw CheckpointError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

Checkpoint load_checkpoint(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open checkpoint " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw CheckpointError(path.string() + " is not a checkpoint file");
  if (get<std::uint32_t>(is) != kVersion) throw CheckpointError("unsupported checkpoint version");
  get<std::uint32_t>(is);
  const double L = get<double>(is), R = get<double>(is);
  const auto N = get<std::int64_t>(is);
  PhysicalParams p;
  p.epsilon = get<double>(is);
  p.delta = get<double>(is);
  p.Omega = get<double>(is);
  p.N1 = get<double>(is);
  p.N2 = get<double>(is);
  SolverProgress pr;
  pr.step = get<std::int64_t>(is);
  pr.attempts = get<std::int64_t>(is);
  pr.h = get<double>(is);
  Checkpoint ck;
  try {
    ck.state.disc = make_discretization(build_grid(L, R, static_cast<int>(N)));
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("checkpoint header: ") + e.what());
  }
  ck.state.params = p;
  ck.progress = pr;
  const std::size_t s = ck.state.grid().side();
  for (int l = 0; l < 2; ++l) {
    WaveField f(s);
    for (complex& v : f.values()) v.real(get<double>(is));
    for (complex& v : f.values()) v.imag(get<double>(is));
    ck.state.psi[l] = std::move(f);
  }
  if (is.peek() != std::char_traits<char>::eof()) throw CheckpointError("trailing bytes in checkpoint");
  return ck;
}

namespace {
constexpr const char* kRunlogHeader = "iter,step,accepted,energy,h,KDelta,supDiff,energyDiff\n";

std::string runlog_line(const LogRow& r) {
  return std::to_string(r.iter) + ',' + std::to_string(r.step) + ',' + (r.accepted ? '1' : '0') +
         ',' + fmt(r.energy) + ',' + fmt(r.h) + ',' + (r.KDelta ? fmt(*r.KDelta) : "") + ',' +
         fmt(r.supDiff) + ',' + fmt(r.energyDiff) + '\n';
}
}  // namespace

void write_runlog_csv(std::ostream& os, const RunLog& log) {
  os << kRunlogHeader;
  for (const LogRow& r : log.rows) os << runlog_line(r);
}

void write_runlog_csv(const fs::path& path, const RunLog& log) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_runlog_csv(os, log);
}

void write_census_csv(std::ostream& os, const std::vector<CensusRow>& rows) {
  os << "component,n,k,lambda,raw,rounded,flag\n";
  for (const CensusRow& c : rows) {
    const VortexRecord& r = c.record;
    os << c.component << ',' << r.center.n << ',' << r.center.k << ',' << r.lambda << ','
       << fmt(r.raw) << ',' << r.index << ',' << (r.flagged ? "unresolved" : "") << '\n';
  }
}

void write_field(const fs::path& path, const WaveField& psi, FieldKind kind, const Grid& grid) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "GPEFIELD 1 kind=" << kind_name(kind) << " rows=" << psi.side() << " cols=" << psi.side()
     << " L=" << fmt(grid.L) << " N=" << grid.N << " delta=" << fmt(grid.delta) << '\n';
  for (const complex& v : psi.values()) {
    double x = 0.0;
    switch (kind) {
      case FieldKind::Density: x = std::norm(v); break;
      case FieldKind::Phase: x = std::arg(v); break;
      case FieldKind::Real: x = v.real(); break;
      case FieldKind::Imag: x = v.imag(); break;
    }
    put(os, x);
  }
}

SquareMatrix<double> read_field(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::string header;
  if (!is || !std::getline(is, header)) throw std::runtime_error("cannot read " + path.string());
  std::istringstream words(header);
  std::string tag, version, word;
  words >> tag >> version;
  if (tag != "GPEFIELD") throw std::runtime_error(path.string() + " is not a field file");
  std::size_t rows = 0, cols = 0;
  while (words >> word) {
    if (word.rfind("rows=", 0) == 0) rows = std::stoul(word.substr(5));
    if (word.rfind("cols=", 0) == 0) cols = std::stoul(word.substr(5));
  }
  if (rows == 0 || rows != cols) throw std::runtime_error("field file must be square");
  SquareMatrix<double> m(rows);
  for (double& v : m.values()) v = get<double>(is);
  return m;
}

json to_json(const ContourRecord& r) {
  json j;
  j["id"] = r.id;
  j["status"] = to_string(r.status);
  j["coverage"] = r.coverage;
  j["raw"] = r.raw ? json(*r.raw) : json(nullptr);
  j["index"] = r.index ? json(*r.index) : json(nullptr);
  j["message"] = r.message;
  j["path"] = points_json(r.sortedPath);
  return j;
}

json to_json(const ContourSet& set) {
  json j;
  j["provenance"] = set.provenance == Provenance::Raw      ? "raw"
                    : set.provenance == Provenance::Pruned ? "pruned"
                                                           : "merged";
  j["components"] = json::array();
  for (const Component& c : set.components)
    j["components"].push_back({{"id", c.id}, {"size", c.points.size()}, {"points", points_json(c.points)}});
  j["added"] = points_json(set.added);
  return j;
}

json to_json(const HoleResult& h) {
  return {{"radius", h.radius}, {"raw", h.raw}, {"index", h.index}, {"pathLength", h.path.size()}};
}

json to_json(const EnergyReport& e) {
  return {{"kinetic", e.kinetic},         {"rotational", e.rotational},
          {"confinement", e.confinement}, {"centrifugal", e.centrifugal},
          {"offset", e.offset},           {"reduced", e.reduced},
          {"total", e.total}};
}

ContourSet prepare_contours(const CondensateState& st, const SheetAnalysisConfig& cfg) {
  const WaveField& psi = st.psi[static_cast<std::size_t>(cfg.component - 1)];
  return split_components(extract_contour_points(psi, cfg.params, st.grid()));
}

bool needs_decisions(const ContourSet& split) { return split.components.size() >= 2; }

std::vector<ContourRecord> decide_contours(const CondensateState& st,
                                           const SheetAnalysisConfig& cfg,
                                           const ContourSet& split, const DecisionScript& script) {
  const WaveField& psi = st.psi[static_cast<std::size_t>(cfg.component - 1)];
  return contour_records(psi, apply_decisions(split, script));
}

namespace {

// Keeps the header and the rows logged up to `attempts` so a resumed run appends
// exactly where the checkpoint was taken.
void truncate_runlog(const fs::path& path, long attempts) {
  std::ifstream is(path);
  if (!is) return;
  std::string line, kept;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      kept += line + '\n';
      header = false;
      continue;
    }
    if (std::stol(line.substr(0, line.find(','))) <= attempts) kept += line + '\n';
  }
  is.close();
  write_text(path, kept);
}

void export_fields(const fs::path& dir, const CondensateState& st) {
  for (int l = 0; l < 2; ++l) {
    const std::string suffix = std::to_string(l + 1) + ".bin";
    write_field(dir / ("density" + suffix), st.psi[l], FieldKind::Density, st.grid());
    write_field(dir / ("phase" + suffix), st.psi[l], FieldKind::Phase, st.grid());
  }
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  fs::create_directories(cfg.output.dir);
  std::vector<int> schedule{cfg.N};
  schedule.insert(schedule.end(), cfg.refine.begin(), cfg.refine.end());

  CondensateState state;
  std::optional<SolverProgress> resume;
  std::size_t stage = 0;
  if (opts.resume) {
    Checkpoint ck = load_checkpoint(*opts.resume);
    const Grid& g = ck.state.grid();
    const auto it = std::find(schedule.begin(), schedule.end(), g.N);
    if (it == schedule.end() || g.L != cfg.L || g.R != cfg.R)
      throw ConfigError("checkpoint grid does not match the configured schedule");
    const PhysicalParams& p = ck.state.params;
    if (p.epsilon != cfg.physics.epsilon || p.delta != cfg.physics.delta ||
        p.Omega != cfg.physics.Omega || p.N1 != cfg.physics.N1 || p.N2 != cfg.physics.N2)
      throw ConfigError("checkpoint physics does not match the config");
    stage = static_cast<std::size_t>(it - schedule.begin());
    state = std::move(ck.state);
    resume = ck.progress;
  } else {
    state = make_state(make_discretization(build_grid(cfg.L, cfg.R, cfg.N)), cfg.physics,
                       cfg.init[0], cfg.init[1]);
  }

  const fs::path ckpt = cfg.output.dir / "checkpoint.bin";
  json summary;
  summary["stages"] = json::array();
  StopReason last = StopReason::IterationCap;
  for (std::size_t i = stage; i < schedule.size(); ++i) {
    if (i != stage) {
      state = interpolate_state(state, schedule[i]);
      resume.reset();
    }
    const fs::path logPath =
        cfg.output.dir / ("runlog_N" + std::to_string(schedule[i]) + ".csv");
    if (resume) truncate_runlog(logPath, resume->attempts);
    std::ofstream csv(logPath, std::ios::binary | (resume ? std::ios::app : std::ios::trunc));
    if (!csv) throw std::runtime_error("cannot write " + logPath.string());
    if (!resume) csv << kRunlogHeader;

    const auto observer = [&](const CondensateState& s, const SolverProgress& pr,
                              const LogRow& row, bool logged) {
      if (logged) csv << runlog_line(row);
      if (row.accepted && cfg.output.checkpointStride > 0 && pr.step > 0 &&
          pr.step % cfg.output.checkpointStride == 0) {
        csv.flush();
        save_checkpoint(ckpt, s, pr);
      }
      if (opts.progress && logged && row.accepted && row.KDelta)
        *opts.progress << "N=" << schedule[i] << " step " << pr.step << " E=" << fmt(row.energy)
                       << " h=" << pr.h << " K=" << *row.KDelta << std::endl;
    };
    MinimizeResult res = epg_minimize(std::move(state), cfg.solver, observer, resume);
    csv.close();
    state = std::move(res.state);
    save_checkpoint(ckpt, state, res.progress);
    last = res.log.stopReason;
    const EnergyReport e = total_energy(state, cfg.solver.withCentrifugal);
    summary["stages"].push_back({{"N", schedule[i]},
                                 {"stopReason", to_string(last)},
                                 {"steps", res.progress.step},
                                 {"attempts", res.progress.attempts},
                                 {"h", res.progress.h},
                                 {"KDelta", res.finalKDelta ? json(*res.finalKDelta) : json(nullptr)},
                                 {"energy", to_json(e)}});
    if (opts.progress)
      *opts.progress << "N=" << schedule[i] << " stopped: " << to_string(last) << " after "
                     << res.progress.step << " accepted steps\n";
  }
  export_fields(cfg.output.dir, state);
  write_text(cfg.output.dir / "summary.json", summary.dump(2) + '\n');
  return last == StopReason::CriterionMet || last == StopReason::SupDiffMet ? Success
                                                                            : NotConverged;
}

int analyze_checkpoint(const AnalyzeOptions& opts) {
  std::ostream& msg = opts.messages ? *opts.messages : std::cerr;
  const Checkpoint ck = load_checkpoint(opts.checkpoint);
  const CondensateState& st = ck.state;
  const AnalysisConfig& a = opts.analysis;
  try {
    a.vortex.validate(st.grid().N);
    a.sheets.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("analysis: ") + e.what());
  }
  fs::create_directories(opts.outDir);
  int code = Success;

  std::vector<CensusRow> census;
  for (int l = 0; l < 2; ++l) {
    if (!(st.params.fraction(l) > 0.0)) continue;
    for (const VortexRecord& r : vortex_census(st.psi[l], a.vortex)) census.push_back({l + 1, r});
  }
  {
    std::ofstream os(opts.outDir / "census.csv", std::ios::binary | std::ios::trunc);
    write_census_csv(os, census);
  }
  export_fields(opts.outDir, st);

  if (a.hole) {
    json hole;
    try {
      hole = to_json(giant_hole_index(st.psi[0], st.grid(), *a.hole));
    } catch (const std::exception& e) {
      hole = {{"error", e.what()}};
      msg << "hole: " << e.what() << '\n';
      code = AnalysisFailed;
    }
    write_text(opts.outDir / "hole.json", hole.dump(2) + '\n');
  }

  if (a.sheets.enabled) {
    const ContourSet split = prepare_contours(st, a.sheets);
    write_text(opts.outDir / "contours_split.json", to_json(split).dump() + '\n');
    std::optional<DecisionScript> script = opts.decisions;
    if (!script && needs_decisions(split)) {
      std::string ids;
      for (const Component& c : split.components)
        ids += (ids.empty() ? "" : ", ") + std::to_string(c.id);
      msg << "decisions required: components " << ids << '\n';
      return AnalysisFailed;
    }
    try {
      const auto records = decide_contours(st, a.sheets, split, script.value_or(DecisionScript{}));
      json out = json::array();
      for (const ContourRecord& r : records) {
        out.push_back(to_json(r));
        if (r.status != ContourStatus::Closed || !r.index) {
          msg << "contour " << r.id << ": " << r.message << '\n';
          code = AnalysisFailed;
        }
      }
      write_text(opts.outDir / "contours.json", out.dump() + '\n');
    } catch (const DecisionError& e) {
      msg << e.what() << '\n';
      return AnalysisFailed;
    }
  }
  return code;
}

}  // namespace gpe
