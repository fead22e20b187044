#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "gpe/io.hpp"

namespace gpe {

/// Pending-decision state for one checkpoint. The contour split is computed once;
/// every decision script is applied to that original split.
class ReviewSession {
 public:
  ReviewSession(CondensateState state, AnalysisConfig analysis);

  struct Reply {
    int status = 200;
    nlohmann::json body;
  };

  nlohmann::json session_info() const;
  /// |psi|^2 max-pooled so that neither side exceeds maxSide.
  Reply density(int component, int maxSide) const;
  nlohmann::json contours() const;
  /// 400 with a message and no state change when the script is invalid or a merge fails.
  Reply post_decisions(std::string_view scriptText);
  /// 409 while decisions are pending.
  Reply results() const;
  void reset();

  bool pending() const { return !decided_; }
  const ContourSet& split() const { return split_; }
  const std::vector<ContourRecord>& records() const { return records_; }

 private:
  CondensateState state_;
  AnalysisConfig analysis_;
  ContourSet split_;
  std::optional<DecisionScript> script_;
  std::optional<ContourSet> decided_;
  std::vector<ContourRecord> records_;
};

/// HTTP front end for a ReviewSession. Requests are handled one at a time.
///   GET  /api/session
///   GET  /api/density?component=1&max=256
///   GET  /api/contours
///   POST /api/decisions   (body: decision script text)
///   GET  /api/results
///   POST /api/reset
/// When `uiDir` is set its files are served at /.
class ReviewServer {
 public:
  ReviewServer(ReviewSession& session, std::optional<std::filesystem::path> uiDir = std::nullopt);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  /// Binds to host:port (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gpe
