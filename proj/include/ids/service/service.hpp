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

// Session-scoped dialogue service over one engine, transport independent.
//
// Locking: inference holds the engine lock shared and draws noise from the
// session's own generator, so concurrent sessions never touch shared
// mutable state. Resolutions take the engine lock exclusively, one at a
// time, so updates are applied in the order their writers acquire it; that
// order is recorded in update_log(). The engine lock is never held while
// waiting for a session lock.

#include <chrono>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ids/core/engine.hpp"
#include "ids/service/entities.hpp"

namespace ids::service {

/// Error with an HTTP status and a stable machine-readable code.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

inline ServiceError not_found(const std::string& m) { return {404, "not_found", m}; }
inline ServiceError conflict(const std::string& m) { return {409, "conflict", m}; }
inline ServiceError bad_request(const std::string& m) { return {400, "bad_request", m}; }
inline ServiceError validation_error(const std::string& m) { return {422, "validation_error", m}; }

enum class SessionStatus { kAwaitingUser, kAnswered, kEscalated };

inline const char* to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::kAwaitingUser: return "awaiting_user";
    case SessionStatus::kAnswered: return "answered";
    case SessionStatus::kEscalated: return "escalated";
  }
  return "?";
}

struct ServiceOptions {
  std::uint64_t seed = 1;             // per-session noise streams fork from this
  std::size_t rolling_window = 100;   // decisions in the rolling escalation rate
  std::filesystem::path snapshot_path;  // default target of snapshot()
  std::function<std::int64_t()> clock;  // milliseconds; system clock if empty. Called from many threads.
};

class Service {
 public:
  Service(std::unique_ptr<core::IdsEngine> engine, EntityDictionary dictionary, ServiceOptions options = {})
      : engine_(std::move(engine)), dict_(std::move(dictionary)), opt_(std::move(options)),
        session_root_(opt_.seed), restored_pool_(engine_->pool().size()) {
    IDS_REQUIRE(engine_ != nullptr, "service needs an engine");
    IDS_REQUIRE(opt_.rolling_window > 0, "rolling window must be positive");
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  nlohmann::json create_session() {
    std::lock_guard lock(state_mu_);
    auto s = std::make_shared<Session>();
    s->id = "s-" + std::to_string(sessions_.size() + 1);
    s->rng = session_root_.fork(sessions_.size() + 1);
    sessions_[s->id] = s;
    return {{"id", s->id}, {"status", to_string(s->status)}};
  }

  nlohmann::json post_utterance(const std::string& session_id, const std::string& text) {
    auto s = find_session(session_id);
    std::lock_guard session_lock(s->mu);
    if (s->status == SessionStatus::kEscalated)
      throw conflict("session " + session_id + " is waiting on ticket " + s->pending_ticket);
    if (tokenize_live(text).empty()) throw validation_error("utterance is empty");

    EntityTable entities = s->entities;  // committed only on success
    const std::string normalized = entities.normalize(text, dict_);
    std::vector<std::string> context = normalized_history(*s);
    context.push_back(normalized);

    core::UncertaintyReport report;
    core::Action action;
    std::vector<std::string> candidate_texts;
    {
      std::shared_lock engine_lock(engine_mu_);
      try {
        report = engine_->assess(context, s->rng);
      } catch (const ContractViolation& e) {
        throw validation_error(e.what());
      }
      action = core::respond_or_escalate(report);
      if (action.answer) {
        candidate_texts.push_back(engine_->responses().text(action.response_id));
      } else {
        for (const auto& c : action.candidates) candidate_texts.push_back(engine_->responses().text(c.id));
      }
    }

    s->entities = std::move(entities);
    s->history.push_back({"user", text, normalized});
    nlohmann::json out{{"session_id", s->id}, {"jsd_avg", report.jsd_avg}, {"max_p", report.max_p}};
    if (action.answer) {
      const std::string& response = candidate_texts.front();
      const std::string surface = s->entities.denormalize(response);
      s->history.push_back({"system", surface, response});
      s->status = SessionStatus::kAnswered;
      out["decision"] = "answer";
      out["text"] = surface;
      out["response_id"] = action.response_id;
      std::lock_guard lock(state_mu_);
      ++answered_;
      note_decision(false);
      return out;
    }

    Ticket t;
    t.session_id = s->id;
    t.context = context;
    for (const auto& u : s->history) t.surface_context.push_back(u.text);
    for (std::size_t i = 0; i < action.candidates.size(); ++i)
      t.candidates.push_back({action.candidates[i].id, s->entities.denormalize(candidate_texts[i]), candidate_texts[i],
                              action.candidates[i].score});
    t.jsd_avg = report.jsd_avg;
    t.max_p = report.max_p;
    t.cold_start = report.cold_start;
    t.created_ms = now();
    {
      std::lock_guard lock(state_mu_);
      t.id = "t-" + std::to_string(tickets_.size() + 1);
      ticket_order_.push_back(t.id);
      tickets_[t.id] = t;
      ++escalated_;
      note_decision(true);
    }
    s->status = SessionStatus::kEscalated;
    s->pending_ticket = t.id;
    out["decision"] = "escalated";
    out["ticket_id"] = t.id;
    return out;
  }

  /// `status` is "open", "resolved" or "all"; oldest first.
  nlohmann::json list_tickets(const std::string& status = "open") const {
    if (status != "open" && status != "resolved" && status != "all")
      throw bad_request("status must be open, resolved or all");
    std::lock_guard lock(state_mu_);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& id : ticket_order_) {
      const Ticket& t = tickets_.at(id);
      const bool resolved = t.state == TicketState::kResolved;
      if (status == "all" || (status == "resolved") == resolved) out.push_back(ticket_json(t));
    }
    return {{"tickets", out}};
  }

  nlohmann::json get_ticket(const std::string& ticket_id) const {
    std::lock_guard lock(state_mu_);
    auto it = tickets_.find(ticket_id);
    if (it == tickets_.end()) throw not_found("no ticket " + ticket_id);
    return ticket_json(it->second);
  }

  /// Body: {"candidate_id": n} naming one of the ticket's candidates, or
  /// {"text": "..."} with an authored response.
  nlohmann::json resolve_ticket(const std::string& ticket_id, const nlohmann::json& body) {
    if (!body.is_object()) throw bad_request("resolution must be a JSON object");
    const bool by_id = body.contains("candidate_id");
    const bool by_text = body.contains("text");
    if (by_id == by_text) throw bad_request("give exactly one of candidate_id or text");

    Ticket claimed;
    std::string normalized;
    {
      std::lock_guard lock(state_mu_);
      auto it = tickets_.find(ticket_id);
      if (it == tickets_.end()) throw not_found("no ticket " + ticket_id);
      Ticket& t = it->second;
      if (t.state != TicketState::kOpen) throw conflict("ticket " + ticket_id + " is already resolved");
      if (by_id) {
        const auto& raw = body["candidate_id"];
        if (!raw.is_number_integer() || raw.get<std::int64_t>() < 0)
          throw bad_request("candidate_id must be a non-negative integer");
        const auto id = body["candidate_id"].get<std::size_t>();
        auto c = std::find_if(t.candidates.begin(), t.candidates.end(), [&](const auto& x) { return x.id == id; });
        if (c == t.candidates.end()) throw validation_error("candidate " + std::to_string(id) + " is not on the ticket");
        normalized = c->normalized;
      } else {
        if (!body["text"].is_string()) throw bad_request("text must be a string");
        if (tokenize_live(body["text"].get<std::string>()).empty()) throw validation_error("authored text is empty");
      }
      t.state = TicketState::kResolving;
      claimed = t;
    }

    auto s = find_session(claimed.session_id);
    std::string authored;
    if (by_text) {
      std::lock_guard session_lock(s->mu);
      authored = body["text"].get<std::string>();
      normalized = s->entities.normalize(authored, dict_);
    }

    core::InterventionRecord record;
    core::ElboEstimate estimate;
    try {
      std::unique_lock engine_lock(engine_mu_);
      record = engine_->record_intervention(claimed.context, normalized, core::Source::kOperator, now());
      estimate = engine_->online_update(record);
      update_log_.push_back(ticket_id);
    } catch (...) {
      std::lock_guard lock(state_mu_);
      tickets_[ticket_id].state = TicketState::kOpen;
      throw;
    }

    std::string surface;
    {
      std::lock_guard session_lock(s->mu);
      surface = s->entities.denormalize(record.response);
      s->history.push_back({"operator", surface, record.response});
      s->status = SessionStatus::kAnswered;
      s->pending_ticket.clear();
    }
    std::lock_guard lock(state_mu_);
    Ticket& t = tickets_[ticket_id];
    t.state = TicketState::kResolved;
    t.resolved_ms = now();
    t.resolution = {{"response_id", record.response_id}, {"text", surface}, {"novel", record.novel},
                    {"source", by_id ? "candidate" : "authored"}};
    if (by_id) t.resolution["candidate_id"] = record.response_id;
    ++resolved_;
    return {{"ticket_id", ticket_id},
            {"session_id", t.session_id},
            {"response_id", record.response_id},
            {"text", surface},
            {"novel", record.novel},
            {"elbo", estimate.elbo},
            {"pool_sequence", record.sequence}};
  }

  nlohmann::json get_session(const std::string& session_id) const {
    auto s = find_session(session_id);
    std::lock_guard session_lock(s->mu);
    nlohmann::json history = nlohmann::json::array();
    for (const auto& u : s->history) history.push_back({{"role", u.role}, {"text", u.text}, {"normalized", u.normalized}});
    nlohmann::json out{{"id", s->id}, {"status", to_string(s->status)}, {"history", history},
                       {"entities", s->entities.surfaces()}};
    out["pending_ticket"] = s->pending_ticket.empty() ? nlohmann::json(nullptr) : nlohmann::json(s->pending_ticket);
    return out;
  }

  nlohmann::json metrics() const {
    std::size_t responses, pool, version;
    {
      std::shared_lock engine_lock(engine_mu_);
      responses = engine_->responses().size();
      pool = engine_->pool().size();
      version = engine_->version();
    }
    std::lock_guard lock(state_mu_);
    double rate = 0.0;
    for (bool e : recent_) rate += e;
    if (!recent_.empty()) rate /= static_cast<double>(recent_.size());
    return {{"answered", answered_},
            {"escalated", escalated_},
            {"resolved", resolved_},
            {"open_tickets", escalated_ - resolved_},
            {"responses", responses},
            {"pool_size", pool},
            {"restored_pool", restored_pool_},
            {"rolling_escalation_rate", rate},
            {"rolling_window", opt_.rolling_window},
            {"model_version", version},
            {"sessions", sessions_.size()}};
  }

  /// Writes a checkpoint next to `out` and renames it into place, so a
  /// reader never sees a partial file.
  nlohmann::json snapshot(std::filesystem::path out = {}) const {
    if (out.empty()) out = opt_.snapshot_path;
    if (out.empty()) throw bad_request("no snapshot path configured");
    nn::Checkpoint ck;
    {
      std::shared_lock engine_lock(engine_mu_);
      ck = engine_->checkpoint();
    }
    std::filesystem::path tmp = out;
    tmp += ".tmp";
    try {
      nn::save_checkpoint(tmp, ck);
      std::filesystem::rename(tmp, out);
    } catch (const std::exception& e) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw ServiceError(500, "snapshot_failed", e.what());
    }
    return {{"path", out.string()}, {"model_version", ck.extra.at("version")}, {"pool_size", ck.extra.at("pool_size")}};
  }

  /// Ticket ids in the order their updates were applied.
  std::vector<std::string> update_log() const {
    std::shared_lock engine_lock(engine_mu_);
    return update_log_;
  }

  /// Direct engine access; callers must not race with live requests.
  core::IdsEngine& engine() { return *engine_; }

 private:
  struct Utterance {
    std::string role;  // user, system or operator
    std::string text;  // surface form
    std::string normalized;
  };

  struct Session {
    std::string id;
    std::vector<Utterance> history;
    EntityTable entities;
    SessionStatus status = SessionStatus::kAwaitingUser;
    std::string pending_ticket;
    nn::Rng rng;
    mutable std::mutex mu;
  };

  struct TicketCandidate {
    std::size_t id;
    std::string text;
    std::string normalized;
    double p;
  };

  enum class TicketState { kOpen, kResolving, kResolved };

  struct Ticket {
    std::string id;
    std::string session_id;
    std::vector<std::string> context;  // normalized, as scored
    std::vector<std::string> surface_context;
    std::vector<TicketCandidate> candidates;
    double jsd_avg = 0.0;
    double max_p = 0.0;
    bool cold_start = false;
    std::int64_t created_ms = 0;
    std::int64_t resolved_ms = -1;
    TicketState state = TicketState::kOpen;
    nlohmann::json resolution;
  };

  std::shared_ptr<Session> find_session(const std::string& id) const {
    std::lock_guard lock(state_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw not_found("no session " + id);
    return it->second;
  }

  static std::vector<std::string> normalized_history(const Session& s) {
    std::vector<std::string> out;
    for (const auto& u : s.history) out.push_back(u.normalized);
    return out;
  }

  static nlohmann::json ticket_json(const Ticket& t) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& c : t.candidates)
      candidates.push_back({{"id", c.id}, {"text", c.text}, {"normalized", c.normalized}, {"p", c.p}});
    nlohmann::json out{{"id", t.id},
                       {"session_id", t.session_id},
                       {"status", t.state == TicketState::kResolved ? "resolved" : "open"},
                       {"context", t.surface_context},
                       {"normalized_context", t.context},
                       {"candidates", candidates},
                       {"jsd_avg", t.jsd_avg},
                       {"max_p", t.max_p},
                       {"cold_start", t.cold_start},
                       {"created_ms", t.created_ms}};
    out["resolved_ms"] = t.resolved_ms >= 0 ? nlohmann::json(t.resolved_ms) : nlohmann::json(nullptr);
    out["resolution"] = t.resolution.is_null() ? nlohmann::json(nullptr) : t.resolution;
    return out;
  }

  void note_decision(bool escalated) {
    recent_.push_back(escalated);
    if (recent_.size() > opt_.rolling_window) recent_.pop_front();
  }

  std::int64_t now() const {
    if (opt_.clock) return opt_.clock();
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
  }

  std::unique_ptr<core::IdsEngine> engine_;
  EntityDictionary dict_;
  ServiceOptions opt_;

  mutable std::shared_mutex engine_mu_;
  std::vector<std::string> update_log_;  // guarded by engine_mu_

  mutable std::mutex state_mu_;
  nn::Rng session_root_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::string, Ticket> tickets_;
  std::vector<std::string> ticket_order_;
  std::deque<bool> recent_;
  std::size_t answered_ = 0, escalated_ = 0, resolved_ = 0;
  std::size_t restored_pool_ = 0;
};

/// Engine from a checkpoint plus its pool file. Records past the
/// checkpoint's pool offset are replayed (intervention and update), which
/// reproduces the state the service had when it last wrote the pool.
inline std::unique_ptr<core::IdsEngine> restore_engine(const std::filesystem::path& checkpoint,
                                                       const std::filesystem::path& pool_file = {}) {
  std::vector<core::InterventionRecord> records;
  if (!pool_file.empty() && std::filesystem::exists(pool_file)) records = core::DataPool::read_file(pool_file);
  auto engine = core::IdsEngine::load(checkpoint, &records);
  for (std::size_t i = engine->pool().size(); i < records.size(); ++i) {
    const auto& r = records[i];
    engine->online_update(engine->record_intervention(r.context, r.response, r.source, r.timestamp_ms));
  }
  return engine;
}

}  // namespace ids::service
