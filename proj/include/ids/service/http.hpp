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

#pragma once

// HTTP/JSON binding of Service. Every response body is JSON; failures carry
// {"code": ..., "message": ...}.

#include <httplib.h>

#include "ids/service/service.hpp"

namespace ids::service {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

inline nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw bad_request(std::string("malformed JSON: ") + e.what());
  }
}

/// Runs `fn`, mapping exceptions to JSON errors.
template <typename Fn>
void guarded(httplib::Response& res, int ok_status, Fn&& fn) {
  try {
    send_json(res, ok_status, fn());
  } catch (const ServiceError& e) {
    send_error(res, e.status(), e.code(), e.what());
  } catch (const ContractViolation& e) {
    send_error(res, 422, "validation_error", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

inline void bind_routes(httplib::Server& srv, Service& svc) {
  srv.Post("/sessions", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, 201, [&] { return svc.create_session(); });
  });
  srv.Get(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return svc.get_session(req.matches[1]); });
  });
  srv.Post(R"(/sessions/([^/]+)/utterance)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] {
      const auto body = parse_body(req);
      if (!body.is_object() || !body.contains("text") || !body["text"].is_string())
        throw bad_request("body must be {\"text\": string}");
      return svc.post_utterance(req.matches[1], body["text"].get<std::string>());
    });
  });
  srv.Get("/tickets", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return svc.list_tickets(req.has_param("status") ? req.get_param_value("status") : "open"); });
  });
  srv.Get(R"(/tickets/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return svc.get_ticket(req.matches[1]); });
  });
  srv.Post(R"(/tickets/([^/]+)/resolution)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return svc.resolve_ticket(req.matches[1], parse_body(req)); });
  });
  srv.Get("/metrics", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, 200, [&] { return svc.metrics(); });
  });
  srv.Post("/snapshot", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] {
      const auto body = parse_body(req);
      return svc.snapshot(body.is_object() ? body.value("path", std::string()) : std::string());
    });
  });
  // Unmatched routes and methods still answer in JSON.
  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    send_error(res, res.status, res.status == 404 ? "not_found" : "error",
               "no route for " + req.method + " " + req.path);
  });
}

}  // namespace ids::service
