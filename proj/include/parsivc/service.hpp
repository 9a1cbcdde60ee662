#pragma once

#include <chrono>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "parsivc/engine.hpp"

namespace httplib {
class Server;
}

namespace parsivc {

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string uiDir;
  std::vector<std::filesystem::path> searchPath;
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

struct Session;

/// In-memory derivation sessions behind the HTTP routes, usable directly.
/// Sessions are evicted least-recently-used past `capacity` and after `ttl`
/// without a request. Requests on one session are serialized; different
/// sessions proceed independently.
class SessionStore {
 public:
  explicit SessionStore(std::vector<std::filesystem::path> searchPath, std::size_t capacity = 64,
                        std::chrono::seconds ttl = std::chrono::minutes(30));
  ~SessionStore();

  /// Body: {source, mode?, file?}.
  ServiceResponse create(const nlohmann::json& body);
  ServiceResponse get(const std::string& id);
  ServiceResponse rules(const std::string& id, int block);
  /// Body: {block, target: {kind, rule, sequent, side, index}}.
  ServiceResponse apply(const std::string& id, const nlohmann::json& body);
  ServiceResponse undo(const std::string& id);
  ServiceResponse finish(const std::string& id, int block);
  ServiceResponse vcs(const std::string& id);

  std::size_t size() const;

 private:
  std::shared_ptr<Session> find(const std::string& id);
  void evictLocked();

  std::vector<std::filesystem::path> searchPath_;
  std::size_t capacity_;
  std::chrono::seconds ttl_;
  mutable std::mutex mutex_;
  std::list<std::string> order_;  // most recent first
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

nlohmann::json errorBody(const std::string& code, const std::string& message,
                         const std::vector<std::string>& diagnostics = {});

nlohmann::json toJson(const RuleTarget& t);
RuleTarget ruleTargetFromJson(const nlohmann::json& j);
nlohmann::json toJson(const AssertiveBlock& b, int index, const EngineConfig& cfg);

/// Registers the `/api/session` routes on `server`. `store` must outlive it.
void installRoutes(httplib::Server& server, SessionStore& store);

/// Blocks until the server stops. Returns a process exit code.
int serve(const ServeOptions& opts);

}  // namespace parsivc
