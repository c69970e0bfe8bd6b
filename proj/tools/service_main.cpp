// Copyright 2026 The IDS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// HTTP/JSON dialogue service with operator escalation.

#include <csignal>
#include <filesystem>
#include <iostream>

#include "cli_common.hpp"
#include "ids/harness/experiment.hpp"
#include "ids/service/http.hpp"

namespace fs = std::filesystem;
using namespace ids;

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

// {"surface form": "$entity_k$", ...}
void load_aliases(const std::string& path, service::EntityDictionary& dict) {
  const auto j = corpus::read_json_file(path);
  for (const auto& [surface, entity] : j.items()) dict.add(surface, entity.get<std::string>());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dialogue service"};
  tools::CommonOptions common;
  add_common(app, common);
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string checkpoint, pool, snapshot, aliases;
  int tier = 5;
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->check(CLI::Range(0, 65535))->capture_default_str();
  app.add_option("--checkpoint", checkpoint, "resume from this engine checkpoint")->check(CLI::ExistingFile);
  app.add_option("--pool", pool, "append-only intervention log; replayed past the checkpoint on resume");
  app.add_option("--snapshot", snapshot, "default target of POST /snapshot, also written on shutdown");
  app.add_option("--aliases", aliases, "JSON object of product surface forms to entity ids")
      ->check(CLI::ExistingFile);
  app.add_option("--tier", tier, "fresh start: seed R with this tier's inventory (0 leaves R empty)")
      ->check(CLI::Range(0, 5))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    const auto cfg = tools::resolve(common);
    harness::Corpora corpora(cfg);
    std::unique_ptr<core::IdsEngine> engine;
    if (!checkpoint.empty()) {
      engine = service::restore_engine(checkpoint, pool);
    } else {
      if (!pool.empty() && fs::exists(pool) && fs::file_size(pool) > 0)
        throw std::runtime_error("pool file '" + pool + "' is not empty; pass the matching --checkpoint");
      engine = std::make_unique<core::IdsEngine>(cfg.ids, corpora.vocab());
      if (tier > 0) engine->seed_responses(corpus::canonical_inventory(tier));
    }
    if (!pool.empty()) engine->pool().attach_file(pool);

    service::EntityDictionary dict(corpora.tier(harness::kHardestTier).catalog);
    if (!aliases.empty()) load_aliases(aliases, dict);

    service::ServiceOptions opt;
    opt.seed = cfg.seed;
    opt.rolling_window = cfg.window;
    opt.snapshot_path = snapshot;
    service::Service svc(std::move(engine), std::move(dict), opt);

    httplib::Server srv;
    service::bind_routes(srv, svc);
    g_server = &srv;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    std::cout << "listening on http://" << host << ":" << bound << std::endl;
    srv.listen_after_bind();
    g_server = nullptr;
    if (!snapshot.empty()) {
      svc.snapshot();
      std::cout << "snapshot written to " << snapshot << std::endl;
    }
  } catch (const service::ServiceError& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
