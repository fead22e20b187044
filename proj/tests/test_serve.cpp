#include <thread>

#include "doctest.h"
#include "gpe/serve.hpp"
#include "httplib.h"
#include "support.hpp"

using namespace gpe;
using nlohmann::json;

namespace {

AnalysisConfig sheet_analysis() {
  AnalysisConfig a;
  a.sheets.enabled = true;
  return a;
}

}  // namespace

TEST_CASE("session decisions match the headless path") {
  const CondensateState st = gpe::testing::holes_state(1.5, 3, true);
  const AnalysisConfig a = sheet_analysis();
  ReviewSession session(st, a);
  REQUIRE(session.split().components.size() == 2);
  CHECK(session.split() == prepare_contours(st, a.sheets));
  CHECK(session.pending());
  CHECK(session.results().status == 409);

  for (const std::string text : {"keep 0\ndrop 1\n", "drop 0\n", "keep 0\nkeep 1\n", "merge 0 1\n"}) {
    INFO(text);
    const auto reply = session.post_decisions(text);
    try {
      const auto headless =
          decide_contours(st, a.sheets, prepare_contours(st, a.sheets), DecisionScript::parse(text));
      CHECK(reply.status == 200);
      CHECK(session.records() == headless);
      CHECK(reply.body["records"].size() == headless.size());
    } catch (const DecisionError& e) {
      CHECK(reply.status == 400);
      CHECK(reply.body["error"] == e.what());
    }
  }
}

TEST_CASE("invalid decisions leave the session unchanged") {
  ReviewSession session(gpe::testing::holes_state(1.5, 3, true), sheet_analysis());
  REQUIRE(session.post_decisions("keep 0\ndrop 1\n").status == 200);
  const auto before = session.records();
  const auto bad = session.post_decisions("drop 5\n");
  CHECK(bad.status == 400);
  CHECK(bad.body["error"] == "invalid component id 5 in 'drop 5'");
  CHECK(session.records() == before);
  CHECK(session.post_decisions("frobnicate\n").status == 400);
  CHECK_FALSE(session.pending());
  session.reset();
  CHECK(session.pending());
  CHECK(session.contours()["status"] == "pending");
}

TEST_CASE("density is max pooled") {
  ReviewSession session(gpe::testing::holes_state(1.5, 3, false), sheet_analysis());
  const auto r = session.density(1, 32);
  REQUIRE(r.status == 200);
  CHECK(r.body["factor"] == 5);
  CHECK(r.body["rows"] == 26);
  CHECK(r.body["values"].size() == 26);
  CHECK(session.density(3, 32).status == 400);
  CHECK(session.density(1, 0).status == 400);
  const auto full = session.density(1, 1000);
  CHECK(full.body["factor"] == 1);
  CHECK(full.body["rows"] == 129);
}

TEST_CASE("http endpoints") {
  const CondensateState st = gpe::testing::holes_state(1.5, 3, true);
  ReviewSession session(st, sheet_analysis());
  ReviewServer server(session);
  const int port = server.bind("127.0.0.1", 0);
  std::thread worker([&] { server.listen(); });

  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);
  auto info = cli.Get("/api/session");
  REQUIRE(info);
  CHECK(info->status == 200);
  const json ij = json::parse(info->body);
  CHECK(ij["grid"]["N"] == 127);
  CHECK(ij["status"] == "pending");
  CHECK(ij["componentCount"] == 2);

  auto dens = cli.Get("/api/density?component=1&max=64");
  REQUIRE(dens);
  CHECK(json::parse(dens->body)["factor"] == 3);
  CHECK(cli.Get("/api/density?component=x")->status == 400);

  auto pending = cli.Get("/api/results");
  REQUIRE(pending);
  CHECK(pending->status == 409);

  auto bad = cli.Post("/api/decisions", "merge 0 0\n", "text/plain");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  auto ok = cli.Post("/api/decisions", "keep 0\ndrop 1\n", "text/plain");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  const json results = json::parse(cli.Get("/api/results")->body);
  const auto headless = decide_contours(st, sheet_analysis().sheets, prepare_contours(st, sheet_analysis().sheets),
                                        DecisionScript::parse("keep 0\ndrop 1\n"));
  REQUIRE(results["records"].size() == headless.size());
  CHECK(results["records"][0] == to_json(headless[0]));

  const json contours = json::parse(cli.Get("/api/contours")->body);
  CHECK(contours["status"] == "decided");
  CHECK(contours["script"] == "keep 0\ndrop 1\n");

  CHECK(cli.Post("/api/reset", "", "text/plain")->status == 200);
  CHECK(cli.Get("/api/results")->status == 409);

  server.stop();
  worker.join();
}
