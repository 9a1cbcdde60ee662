#include "parsivc/service.hpp"

#include <iostream>
#include <random>
#include <sstream>

#include "httplib.h"
#include "parsivc/builder.hpp"
#include "parsivc/error.hpp"
#include "parsivc/frontend.hpp"
#include "parsivc/printer.hpp"
#include "parsivc/report.hpp"

namespace parsivc {

struct Session {
  std::mutex mutex;
  std::unique_ptr<ModuleLoader> loader;
  EngineConfig cfg;
  std::vector<RewriteCorollary> rules;
  std::vector<AssertiveBlock> initial;
  std::vector<AssertiveBlock> blocks;
  /// Undo stack: the block index and the step applied to it.
  std::vector<std::pair<int, TraceStep>> history;
  std::chrono::steady_clock::time_point lastUsed;
};

namespace {

std::string newId() {
  static std::mutex m;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(m);
  std::ostringstream os;
  os << std::hex << rng() << rng();
  return os.str();
}

ServiceResponse failure(int status, const std::string& code, const std::string& message,
                        std::vector<std::string> diagnostics = {}) {
  return {status, errorBody(code, message, diagnostics)};
}

ServiceResponse notFound(const std::string& what) { return failure(404, "not_found", what + " not found"); }

nlohmann::json sequentJson(const Sequent& s) {
  nlohmann::json a = nlohmann::json::array();
  nlohmann::json d = nlohmann::json::array();
  for (const auto& e : s.antecedents) a.push_back(print(e));
  for (const auto& e : s.succedents) d.push_back(print(e));
  return {{"id", s.id},
          {"antecedents", a},
          {"succedents", d},
          {"file", s.provenance.file},
          {"line", s.provenance.line},
          {"reason", s.provenance.reason}};
}

nlohmann::json sessionJson(const std::string& id, const Session& s) {
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t i = 0; i < s.blocks.size(); ++i) blocks.push_back(toJson(s.blocks[i], static_cast<int>(i), s.cfg));
  return {{"version", kReportVersion},
          {"id", id},
          {"mode", std::string(toString(s.cfg.mode))},
          {"blocks", blocks},
          {"history", s.history.size()}};
}

TraceRecord stepRecord(const AssertiveBlock& block, const TraceStep& step, int number) {
  TraceRecord t;
  t.block = block.label;
  t.step = number;
  t.rule = step.target.rule;
  t.kind = std::string(toString(step.target.kind));
  t.sequent = step.target.sequentId;
  t.side = step.target.kind == RuleTarget::Kind::Statement
               ? ""
               : (step.target.side == Side::Antecedent ? "antecedent" : "succedent");
  t.index = step.target.index;
  t.subject = step.subject;
  t.before = print(step.before);
  t.after = print(step.after);
  return t;
}

bool validBlock(const Session& s, int block) { return block >= 0 && block < static_cast<int>(s.blocks.size()); }

}  // namespace

nlohmann::json errorBody(const std::string& code, const std::string& message,
                         const std::vector<std::string>& diagnostics) {
  return {{"code", code}, {"message", message}, {"diagnostics", diagnostics}};
}

nlohmann::json toJson(const RuleTarget& t) {
  return {{"kind", std::string(toString(t.kind))},
          {"rule", t.rule},
          {"sequent", t.sequentId},
          {"side", t.side == Side::Antecedent ? "antecedent" : "succedent"},
          {"index", t.index},
          {"description", t.describe()}};
}

RuleTarget ruleTargetFromJson(const nlohmann::json& j) {
  RuleTarget t;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "statement") {
    t.kind = RuleTarget::Kind::Statement;
  } else if (kind == "reduction") {
    t.kind = RuleTarget::Kind::Reduction;
  } else if (kind == "eqfold") {
    t.kind = RuleTarget::Kind::EqFold;
  } else {
    throw Error(ErrorKind::Engine, "unknown rule kind '" + kind + "'");
  }
  t.rule = j.at("rule").get<std::string>();
  t.sequentId = j.value("sequent", 0);
  t.side = j.value("side", std::string("antecedent")) == "succedent" ? Side::Succedent : Side::Antecedent;
  t.index = j.value("index", 0);
  return t;
}

nlohmann::json toJson(const AssertiveBlock& b, int index, const EngineConfig& cfg) {
  nlohmann::json stmts = nlohmann::json::array();
  for (const auto& s : b.statements) {
    stmts.push_back({{"text", print(s)},
                     {"kind", std::string(toString(s.kind))},
                     {"file", s.provenance.file},
                     {"line", s.provenance.line}});
  }
  nlohmann::json psi = nlohmann::json::array();
  for (const auto& s : b.finalConfirm) psi.push_back(sequentJson(s));
  return {{"index", index},
          {"label", b.label},
          {"statements", stmts},
          {"finalConfirm", psi},
          {"done", applicableRules(b, cfg).empty()}};
}

SessionStore::SessionStore(std::vector<std::filesystem::path> searchPath, std::size_t capacity,
                           std::chrono::seconds ttl)
    : searchPath_(std::move(searchPath)), capacity_(capacity), ttl_(ttl) {}

SessionStore::~SessionStore() = default;

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

void SessionStore::evictLocked() {
  const auto now = std::chrono::steady_clock::now();
  for (auto it = order_.begin(); it != order_.end();) {
    auto s = sessions_.find(*it);
    if (s != sessions_.end() && now - s->second->lastUsed > ttl_) {
      sessions_.erase(s);
      it = order_.erase(it);
    } else {
      ++it;
    }
  }
  while (sessions_.size() > capacity_) {
    sessions_.erase(order_.back());
    order_.pop_back();
  }
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  evictLocked();
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  order_.remove(id);
  order_.push_front(id);
  it->second->lastUsed = std::chrono::steady_clock::now();
  return it->second;
}

ServiceResponse SessionStore::create(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("source") || !body["source"].is_string()) {
    return failure(400, "bad_request", "expected {source, mode?, file?}");
  }
  auto s = std::make_shared<Session>();
  const std::string mode = body.value("mode", std::string("parsimonious"));
  const auto parsed = parseMode(mode);
  if (!parsed) return failure(400, "bad_request", "unknown mode '" + mode + "'");
  s->cfg.mode = *parsed;
  try {
    s->loader = std::make_unique<ModuleLoader>(searchPath_);
    const SourceModule& m =
        s->loader->loadSource(body["source"].get<std::string>(), body.value("file", std::string("input.mrsl")));
    s->initial = buildModule(m, *s->loader);
    s->rules = s->loader->rewriteRules(m);
  } catch (const Error& e) {
    return failure(400, "parse_error", e.message(), {e.diagnostic()});
  }
  s->blocks = s->initial;
  s->lastUsed = std::chrono::steady_clock::now();
  const std::string id = newId();
  {
    std::lock_guard lock(mutex_);
    sessions_[id] = s;
    order_.push_front(id);
    evictLocked();
  }
  std::lock_guard lock(s->mutex);
  return {201, sessionJson(id, *s)};
}

ServiceResponse SessionStore::get(const std::string& id) {
  auto s = find(id);
  if (!s) return notFound("session " + id);
  std::lock_guard lock(s->mutex);
  return {200, sessionJson(id, *s)};
}

ServiceResponse SessionStore::rules(const std::string& id, int block) {
  auto s = find(id);
  if (!s) return notFound("session " + id);
  std::lock_guard lock(s->mutex);
  if (!validBlock(*s, block)) return notFound("block " + std::to_string(block));
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : applicableRules(s->blocks[static_cast<std::size_t>(block)], s->cfg)) out.push_back(toJson(t));
  return {200, {{"block", block}, {"rules", out}}};
}

ServiceResponse SessionStore::apply(const std::string& id, const nlohmann::json& body) {
  auto s = find(id);
  if (!s) return notFound("session " + id);
  std::lock_guard lock(s->mutex);
  RuleTarget target;
  int block = 0;
  try {
    block = body.at("block").get<int>();
    target = ruleTargetFromJson(body.at("target"));
  } catch (const std::exception& e) {
    return failure(400, "bad_request", std::string("malformed apply request: ") + e.what());
  }
  if (!validBlock(*s, block)) return notFound("block " + std::to_string(block));
  AssertiveBlock& b = s->blocks[static_cast<std::size_t>(block)];
  try {
    TraceStep step = applyRule(b, target, s->cfg);
    s->history.emplace_back(block, step);
    return {200,
            {{"block", toJson(b, block, s->cfg)},
             {"step", toJson(stepRecord(b, step, static_cast<int>(s->history.size())))}}};
  } catch (const Error& e) {
    return failure(409, "stale_target", e.message());
  }
}

ServiceResponse SessionStore::undo(const std::string& id) {
  auto s = find(id);
  if (!s) return notFound("session " + id);
  std::lock_guard lock(s->mutex);
  if (s->history.empty()) return failure(409, "nothing_to_undo", "no rule application to undo");
  auto [block, step] = s->history.back();
  s->history.pop_back();
  s->blocks[static_cast<std::size_t>(block)] = step.before;
  return {200, sessionJson(id, *s)};
}

ServiceResponse SessionStore::finish(const std::string& id, int block) {
  auto s = find(id);
  if (!s) return notFound("session " + id);
  std::lock_guard lock(s->mutex);
  if (block < -1 || (block >= 0 && !validBlock(*s, block))) return notFound("block " + std::to_string(block));
  for (int i = 0; i < static_cast<int>(s->blocks.size()); ++i) {
    if (block >= 0 && i != block) continue;
    AssertiveBlock& b = s->blocks[static_cast<std::size_t>(i)];
    while (true) {
      auto options = applicableRules(b, s->cfg);
      if (options.empty()) break;
      s->history.emplace_back(i, applyRule(b, options.front(), s->cfg));
    }
  }
  return {200, sessionJson(id, *s)};
}

ServiceResponse SessionStore::vcs(const std::string& id) {
  auto s = find(id);
  if (!s) return notFound("session " + id);
  std::lock_guard lock(s->mutex);
  std::vector<BlockResult> done;
  nlohmann::json pending = nlohmann::json::array();
  for (std::size_t i = 0; i < s->blocks.size(); ++i) {
    const AssertiveBlock& b = s->blocks[i];
    if (!applicableRules(b, s->cfg).empty()) {
      pending.push_back(b.label);
      continue;
    }
    BlockResult r;
    r.derivation.initial = s->initial[i];
    r.derivation.final = b;
    r.derivation.vcs = extractVcs(b);
    for (const auto& [k, step] : s->history) {
      if (k == static_cast<int>(i)) r.derivation.trace.steps.push_back(step);
    }
    for (const auto& vc : r.derivation.vcs) r.results.push_back(discharge(vc.sequent, s->rules, *b.context));
    done.push_back(std::move(r));
  }
  nlohmann::json out = toJson(makeReport(done, s->cfg.mode, false));
  out["pending"] = pending;
  return {200, out};
}

void installRoutes(httplib::Server& server, SessionStore& store) {
  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto blockParam = [](const httplib::Request& req, int fallback) {
    if (!req.has_param("block")) return fallback;
    try {
      return std::stoi(req.get_param_value("block"));
    } catch (const std::exception&) {
      return -2;
    }
  };
  auto parseBody = [](const httplib::Request& req, nlohmann::json& out) {
    out = nlohmann::json::parse(req.body, nullptr, false);
    return !out.is_discarded();
  };
  using Req = httplib::Request;
  using Res = httplib::Response;
  server.Post("/api/session", [&store, send, parseBody](const Req& req, Res& res) {
    nlohmann::json body;
    if (!parseBody(req, body)) return send(res, failure(400, "bad_request", "request body is not JSON"));
    send(res, store.create(body));
  });
  server.Get(R"(/api/session/([0-9a-f]+))",
             [&store, send](const Req& req, Res& res) { send(res, store.get(req.matches[1])); });
  server.Get(R"(/api/session/([0-9a-f]+)/rules)", [&store, send, blockParam](const Req& req, Res& res) {
    send(res, store.rules(req.matches[1], blockParam(req, 0)));
  });
  server.Post(R"(/api/session/([0-9a-f]+)/apply)", [&store, send, parseBody](const Req& req, Res& res) {
    nlohmann::json body;
    if (!parseBody(req, body)) return send(res, failure(400, "bad_request", "request body is not JSON"));
    send(res, store.apply(req.matches[1], body));
  });
  server.Post(R"(/api/session/([0-9a-f]+)/undo)",
              [&store, send](const Req& req, Res& res) { send(res, store.undo(req.matches[1])); });
  server.Post(R"(/api/session/([0-9a-f]+)/finish)", [&store, send, blockParam](const Req& req, Res& res) {
    send(res, store.finish(req.matches[1], blockParam(req, -1)));
  });
  server.Get(R"(/api/session/([0-9a-f]+)/vcs)",
             [&store, send](const Req& req, Res& res) { send(res, store.vcs(req.matches[1])); });
}

int serve(const ServeOptions& opts) {
  SessionStore store(opts.searchPath);
  httplib::Server server;
  installRoutes(server, store);
  if (!opts.uiDir.empty() && !server.set_mount_point("/", opts.uiDir)) {
    std::cerr << "error: cannot serve UI assets from " << opts.uiDir << '\n';
    return 1;
  }
  std::cerr << "parsivc: listening on http://" << opts.host << ':' << opts.port << '\n';
  if (!server.listen(opts.host, opts.port)) {
    std::cerr << "error: cannot listen on " << opts.host << ':' << opts.port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace parsivc
