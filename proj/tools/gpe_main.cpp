// gpe: minimize, analyze and review two-component condensate ground states.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gpe/io.hpp"
#include "gpe/reference.hpp"
#include "gpe/serve.hpp"

namespace {

gpe::ReviewServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw gpe::ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

gpe::AnalysisConfig analysis_from(const std::string& configPath) {
  if (configPath.empty()) return {};
  return gpe::load_config(configPath).analysis;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected gradient minimization of rotating two-component condensates"};
  app.require_subcommand(1);

  std::string config, resume, checkpoint, decisions, out = "analysis", ui, host = "127.0.0.1";
  bool quiet = false;
  int port = 8080, fields = 100;
  std::uint64_t seed = 20240601;

  auto* run = app.add_subcommand("run", "minimize the energy for a config");
  run->add_option("config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--resume", resume, "continue from a checkpoint")->check(CLI::ExistingFile);
  run->add_flag("--quiet", quiet, "no progress output");

  auto* analyze = app.add_subcommand("analyze", "vortex census, hole and sheet contours");
  analyze->add_option("checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  analyze->add_option("--config", config, "config whose analysis block is used")->check(CLI::ExistingFile);
  analyze->add_option("--decisions", decisions, "decision script (keep/drop/merge)")->check(CLI::ExistingFile);
  analyze->add_option("--out", out, "output directory");

  auto* serve = app.add_subcommand("serve", "local review service for sheet contours");
  serve->add_option("checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  serve->add_option("--config", config)->check(CLI::ExistingFile);
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--ui", ui, "static files served at /")->check(CLI::ExistingDirectory);

  auto* oracle = app.add_subcommand("oracle-check", "compare fast transforms with the literal sums");
  oracle->add_option("--fields", fields, "random fields per size");
  oracle->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      gpe::RunOptions opts;
      if (!resume.empty()) opts.resume = resume;
      if (!quiet) opts.progress = &std::cout;
      return gpe::run_experiment(gpe::load_config(config), opts);
    }
    if (*analyze) {
      gpe::AnalyzeOptions opts;
      opts.checkpoint = checkpoint;
      opts.analysis = analysis_from(config);
      if (!decisions.empty()) opts.decisions = gpe::DecisionScript::parse(read_file(decisions));
      opts.outDir = out;
      return gpe::analyze_checkpoint(opts);
    }
    if (*serve) {
      gpe::Checkpoint ck = gpe::load_checkpoint(checkpoint);
      gpe::ReviewSession session(std::move(ck.state), analysis_from(config));
      gpe::ReviewServer server(session, ui.empty() ? std::nullopt
                                                   : std::optional<std::filesystem::path>(ui));
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving http://" << host << ":" << bound << " ("
                << session.split().components.size() << " contour components)" << std::endl;
      server.listen();
      g_server = nullptr;
      return gpe::Success;
    }
    if (*oracle) {
      const int sizes[] = {6, 14, 30};
      bool ok = true;
      for (const auto& r : gpe::reference::spectral_oracle(sizes, fields, seed)) {
        std::cout << "N=" << r.N << " fields=" << r.fields << " transforms=" << r.transforms
                  << " derivatives=" << r.derivatives << " second=" << r.secondDerivative << '\n';
        ok = ok && r.worst() < 1e-12;
      }
      std::cout << (ok ? "oracle-check: ok" : "oracle-check: FAILED") << '\n';
      return ok ? gpe::Success : gpe::Validation;
    }
  } catch (const gpe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return gpe::Validation;
  } catch (const gpe::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << '\n';
    return gpe::Validation;
  } catch (const gpe::DecisionError& e) {
    std::cerr << e.what() << '\n';
    return gpe::AnalysisFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return *run ? gpe::NotConverged : gpe::AnalysisFailed;
  }
  return gpe::Success;
}
