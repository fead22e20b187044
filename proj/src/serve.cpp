#include "gpe/serve.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "httplib.h"

namespace gpe {

using nlohmann::json;

ReviewSession::ReviewSession(CondensateState state, AnalysisConfig analysis)
    : state_(std::move(state)), analysis_(std::move(analysis)) {
  analysis_.sheets.params.validate();
  if (analysis_.sheets.component != 1 && analysis_.sheets.component != 2)
    throw ConfigError("sheet component must be 1 or 2");
  split_ = prepare_contours(state_, analysis_.sheets);
}

json ReviewSession::session_info() const {
  const Grid& g = state_.grid();
  const PhysicalParams& p = state_.params;
  return {{"grid", {{"L", g.L}, {"R", g.R}, {"N", g.N}, {"delta", g.delta}}},
          {"physics",
           {{"epsilon", p.epsilon}, {"delta", p.delta}, {"Omega", p.Omega}, {"N1", p.N1}, {"N2", p.N2}}},
          {"sheetComponent", analysis_.sheets.component},
          {"componentCount", split_.components.size()},
          {"status", pending() ? "pending" : "decided"}};
}

ReviewSession::Reply ReviewSession::density(int component, int maxSide) const {
  if (component != 1 && component != 2)
    return {400, {{"error", "component must be 1 or 2"}}};
  if (maxSide < 1) return {400, {{"error", "max must be >= 1"}}};
  const WaveField& psi = state_.psi[static_cast<std::size_t>(component - 1)];
  const int side = static_cast<int>(psi.side());
  const int factor = (side + maxSide - 1) / maxSide;
  const int tiles = (side + factor - 1) / factor;
  json rows = json::array();
  for (int ti = 0; ti < tiles; ++ti) {
    json row = json::array();
    for (int tj = 0; tj < tiles; ++tj) {
      double m = 0.0;
      for (int n = ti * factor; n < std::min(side, (ti + 1) * factor); ++n)
        for (int k = tj * factor; k < std::min(side, (tj + 1) * factor); ++k)
          m = std::max(m, std::norm(psi(n, k)));
      row.push_back(m);
    }
    rows.push_back(std::move(row));
  }
  return {200,
          {{"component", component}, {"factor", factor}, {"rows", tiles}, {"cols", tiles},
           {"values", std::move(rows)}}};
}

json ReviewSession::contours() const {
  json j = to_json(decided_ ? *decided_ : split_);
  j["status"] = pending() ? "pending" : "decided";
  j["script"] = script_ ? script_->to_text() : "";
  return j;
}

ReviewSession::Reply ReviewSession::post_decisions(std::string_view scriptText) {
  try {
    DecisionScript script = DecisionScript::parse(scriptText);
    ContourSet decided = apply_decisions(split_, script);
    const WaveField& psi = state_.psi[static_cast<std::size_t>(analysis_.sheets.component - 1)];
    std::vector<ContourRecord> records = contour_records(psi, decided);
    script_ = std::move(script);
    decided_ = std::move(decided);
    records_ = std::move(records);
  } catch (const DecisionError& e) {
    return {400, {{"error", e.what()}}};
  }
  return results();
}

ReviewSession::Reply ReviewSession::results() const {
  if (pending()) return {409, {{"error", "decisions pending"}}};
  json out = json::array();
  for (const ContourRecord& r : records_) out.push_back(to_json(r));
  return {200, {{"status", "decided"}, {"records", std::move(out)}}};
}

void ReviewSession::reset() {
  script_.reset();
  decided_.reset();
  records_.clear();
}

struct ReviewServer::Impl {
  ReviewSession& session;
  httplib::Server server;
  std::mutex mutex;  // one request at a time touches the session

  explicit Impl(ReviewSession& s) : session(s) {}

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }
};

ReviewServer::ReviewServer(ReviewSession& session, std::optional<std::filesystem::path> uiDir)
    : impl_(std::make_unique<Impl>(session)) {
  Impl& im = *impl_;
  auto& srv = im.server;
  srv.Get("/api/session", [&im](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(im.mutex);
    Impl::reply(res, 200, im.session.session_info());
  });
  srv.Get("/api/density", [&im](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(im.mutex);
    int component = 1, maxSide = 256;
    try {
      if (req.has_param("component")) component = std::stoi(req.get_param_value("component"));
      if (req.has_param("max")) maxSide = std::stoi(req.get_param_value("max"));
    } catch (const std::exception&) {
      Impl::reply(res, 400, {{"error", "component and max must be integers"}});
      return;
    }
    const auto r = im.session.density(component, maxSide);
    Impl::reply(res, r.status, r.body);
  });
  srv.Get("/api/contours", [&im](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(im.mutex);
    Impl::reply(res, 200, im.session.contours());
  });
  srv.Post("/api/decisions", [&im](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(im.mutex);
    const auto r = im.session.post_decisions(req.body);
    Impl::reply(res, r.status, r.body);
  });
  srv.Get("/api/results", [&im](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(im.mutex);
    const auto r = im.session.results();
    Impl::reply(res, r.status, r.body);
  });
  srv.Post("/api/reset", [&im](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(im.mutex);
    im.session.reset();
    Impl::reply(res, 200, im.session.contours());
  });
  if (uiDir && !srv.set_mount_point("/", uiDir->string()))
    throw std::invalid_argument("ui directory not found: " + uiDir->string());
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw std::runtime_error("cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port))
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ReviewServer::listen() { impl_->server.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace gpe
