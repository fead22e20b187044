#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gpe/minimizer.hpp"
#include "gpe/sheets.hpp"
#include "gpe/vortex.hpp"

namespace gpe {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SheetAnalysisConfig {
  bool enabled = false;
  int component = 1;  ///< 1 or 2
  SheetParams params;
};

struct AnalysisConfig {
  VortexParams vortex;
  SheetAnalysisConfig sheets;
  std::optional<HoleParams> hole;
};

struct OutputConfig {
  std::filesystem::path dir = "out";
  long checkpointStride = 0;  ///< accepted steps between checkpoints; 0 writes only the final one
};

struct ExperimentConfig {
  double L = 7.0;
  double R = 4.0;
  int N = 64;
  PhysicalParams physics;
  SolverConfig solver;
  std::array<InitialKind, 2> init{init::CenteredGaussian{}, init::CenteredGaussian{}};
  std::vector<int> refine;  ///< finer grids to interpolate onto, increasing
  AnalysisConfig analysis;
  OutputConfig output;

  /// Throws ConfigError on any invalid block.
  void validate() const;
};

/// Parses the JSON layout documented in the README. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
AnalysisConfig analysis_from_json(const nlohmann::json& j);

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  CondensateState state;
  SolverProgress progress;
};

/// Binary layout: magic, version, grid (L, R, N), physics, progress, then P and Q of
/// both components as raw doubles. The confinement profile is always the default one.
void save_checkpoint(const std::filesystem::path& path, const CondensateState& state,
                     const SolverProgress& progress);
Checkpoint load_checkpoint(const std::filesystem::path& path);

void write_runlog_csv(std::ostream& os, const RunLog& log);
void write_runlog_csv(const std::filesystem::path& path, const RunLog& log);

struct CensusRow {
  int component = 1;
  VortexRecord record;
};
void write_census_csv(std::ostream& os, const std::vector<CensusRow>& rows);

enum class FieldKind { Density, Phase, Real, Imag };
/// One text header line (`GPEFIELD 1 kind=... rows=... cols=... L=... N=...`) followed by
/// rows*cols little-endian float64 values in row-major (n, k) order.
void write_field(const std::filesystem::path& path, const WaveField& psi, FieldKind kind,
                 const Grid& grid);
SquareMatrix<double> read_field(const std::filesystem::path& path);

nlohmann::json to_json(const ContourRecord& r);
nlohmann::json to_json(const ContourSet& set);
nlohmann::json to_json(const HoleResult& h);
nlohmann::json to_json(const EnergyReport& e);

/// Contour analysis shared by the batch and serve paths.
struct SheetOutcome {
  ContourSet split;
  std::optional<ContourSet> decided;
  std::vector<ContourRecord> records;
};
ContourSet prepare_contours(const CondensateState& state, const SheetAnalysisConfig& cfg);
/// A split with at most one component is kept without decisions.
bool needs_decisions(const ContourSet& split);
std::vector<ContourRecord> decide_contours(const CondensateState& state,
                                           const SheetAnalysisConfig& cfg,
                                           const ContourSet& split,
                                           const DecisionScript& script);

enum ExitCode : int { Success = 0, Validation = 1, NotConverged = 2, AnalysisFailed = 3 };

struct RunOptions {
  std::optional<std::filesystem::path> resume;
  std::ostream* progress = nullptr;  ///< optional human-readable progress
};
/// Minimize at N, then at each refinement, writing checkpoint.bin, runlog_N<N>.csv,
/// summary.json and density/phase exports into cfg.output.dir.
int run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

struct AnalyzeOptions {
  std::filesystem::path checkpoint;
  AnalysisConfig analysis;
  std::optional<DecisionScript> decisions;
  std::filesystem::path outDir = "analysis";
  std::ostream* messages = nullptr;
};
/// Writes census.csv, hole.json, contours.json and field exports.
int analyze_checkpoint(const AnalyzeOptions& opts);

}  // namespace gpe
