#pragma once

// HTTP API over the what-if pipeline.
//
//   POST   /scenes               {seed?} | {scene}  -> 201 {id, scene}
//   GET    /scenes/{id}                             -> 200 {id, scene}
//   DELETE /scenes/{id}                             -> 204
//   POST   /scenes/{id}/whatif   {text, backend?}   -> 200 {action, backend, descriptions, events,
//                                                           trajectories_30hz}
//   GET    /healthz                                 -> 200 {status: "ok"}
//
// Errors: 400 {error: "schema", path, message}; 404 {error: "not_found", message};
// 422 {error: "pipeline", stage, message}.

#include "whatif/pipeline.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace whatif::service {

inline constexpr int kTransportStride = 10;  // 300 Hz -> 30 Hz

struct Response {
  int status = 200;
  std::string body;  // application/json
};

struct Options {
  std::string persist_dir;  // empty: in-memory only
  unsigned threads = 8;
};

class Service {
 public:
  explicit Service(pipeline::Models models, Options options = {});

  /// Transport-independent request handling; safe to call concurrently.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  /// Blocks serving HTTP until stop() is called. Returns false when the
  /// address cannot be bound.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it, or -1; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();

  ~Service();

  std::size_t scene_count() const;

 private:
  struct Entry {
    Scene scene;
    std::shared_ptr<const physics::SimulationResult> last;
  };
  struct Http;

  Response create_scene(std::string_view body);
  Response get_scene(const std::string& id);
  Response delete_scene(const std::string& id);
  Response whatif(const std::string& id, std::string_view body);
  std::optional<Scene> lookup(const std::string& id) const;
  void persist(const std::string& id, const Scene& scene) const;
  void load_persisted();

  pipeline::Models models_;
  Options options_;
  mutable std::mutex mutex_;
  std::map<std::string, Entry> store_;
  std::uint64_t next_id_ = 1;
  std::unique_ptr<Http> http_;
};

/// The whatif response body for an answer, with trajectories at 30 Hz.
nlohmann::json answer_json(const pipeline::WhatIfAnswer& answer);

}  // namespace whatif::service
