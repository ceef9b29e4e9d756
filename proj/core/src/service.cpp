#include "whatif/service.hpp"

#include "whatif/datagen.hpp"
#include "whatif/error.hpp"

#include <httplib.h>

#include <filesystem>

namespace whatif::service {
namespace {

using Json = nlohmann::json;

Response json_response(int status, const Json& j) { return {status, j.dump()}; }

Response not_found(const std::string& message) {
  return json_response(404, {{"error", "not_found"}, {"message", message}});
}

Response schema_error(const SchemaError& e) {
  return json_response(400, {{"error", "schema"}, {"path", e.path()}, {"message", e.what()}});
}

Response bad_request(const std::string& message) {
  return json_response(400, {{"error", "schema"}, {"path", ""}, {"message", message}});
}

Json parse_body(std::string_view body) {
  if (body.empty()) return Json::object();
  const Json j = io::parse_document(body);
  if (!j.is_object()) throw SchemaError("", "expected an object");
  return j;
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') return false;
  return true;
}

}  // namespace

Json answer_json(const pipeline::WhatIfAnswer& answer) {
  Json descriptions = Json::array();
  Json events = Json::array();
  for (const auto& [cls, d] : answer.descriptions) {
    descriptions.push_back({{"subject", class_id(cls)}, {"text", d.text}});
    Json ev = {{"subject", class_id(cls)},
               {"kind", describer::event_kind_id(d.event.kind)},
               {"agent", nullptr},
               {"magnitude", describer::magnitude_id(d.event.magnitude)}};
    if (d.event.agent) ev["agent"] = class_id(*d.event.agent);
    events.push_back(ev);
  }
  Json trajectories = Json::array();
  for (const auto& t : answer.simulation.trajectories) {
    if (t.removed) continue;
    trajectories.push_back(
        io::to_json(physics::downsample(t, kTransportStride), kSampleRateHz / kTransportStride));
  }
  return {{"action", io::to_json(answer.parse.action)},
          {"backend", parser::backend_id(answer.parse.backend)},
          {"descriptions", descriptions},
          {"events", events},
          {"trajectories_30hz", trajectories}};
}

struct Service::Http {
  httplib::Server server;
};

Service::Service(pipeline::Models models, Options options)
    : models_(std::move(models)), options_(std::move(options)) {
  load_persisted();
}

Service::~Service() { stop(); }

std::size_t Service::scene_count() const {
  std::lock_guard lock(mutex_);
  return store_.size();
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    if (path == "/healthz") {
      if (method != "GET") return json_response(405, {{"error", "method_not_allowed"}, {"message", "use GET"}});
      return json_response(200, {{"status", "ok"}});
    }
    constexpr std::string_view prefix = "/scenes";
    if (path.substr(0, prefix.size()) != prefix) return not_found("no such endpoint");
    std::string_view rest = path.substr(prefix.size());
    if (rest.empty() || rest == "/") {
      if (method != "POST") return json_response(405, {{"error", "method_not_allowed"}, {"message", "use POST"}});
      return create_scene(body);
    }
    if (rest.front() != '/') return not_found("no such endpoint");
    rest.remove_prefix(1);
    const auto slash = rest.find('/');
    const std::string id(rest.substr(0, slash));
    const std::string_view tail = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
    if (tail.empty()) {
      if (method == "GET") return get_scene(id);
      if (method == "DELETE") return delete_scene(id);
      return json_response(405, {{"error", "method_not_allowed"}, {"message", "use GET or DELETE"}});
    }
    if (tail == "/whatif") {
      if (method != "POST") return json_response(405, {{"error", "method_not_allowed"}, {"message", "use POST"}});
      return whatif(id, body);
    }
    return not_found("no such endpoint");
  } catch (const SchemaError& e) {
    return schema_error(e);
  } catch (const DataError& e) {
    return bad_request(e.what());
  } catch (const std::exception& e) {
    return json_response(500, {{"error", "internal"}, {"message", e.what()}});
  }
}

Response Service::create_scene(std::string_view body) {
  const Json j = parse_body(body);
  Scene scene;
  if (j.contains("scene")) {
    scene = io::scene_from_json(j.at("scene"), ".scene");
    const auto violations = validate_scene(scene);
    if (!violations.empty()) throw SchemaError(".scene", violations.front());
  } else {
    std::uint64_t seed = 0;
    if (j.contains("seed")) {
      const Json& s = j.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
        throw SchemaError(".seed", "expected a non-negative integer");
      seed = s.get<std::uint64_t>();
    }
    scene = datagen::sample_scene(seed);
  }
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "s" + std::to_string(next_id_++);
    store_[id] = Entry{scene, nullptr};
  }
  persist(id, scene);
  return json_response(201, {{"id", id}, {"scene", io::to_json(scene)}});
}

std::optional<Scene> Service::lookup(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = store_.find(id);
  if (it == store_.end()) return std::nullopt;
  return it->second.scene;
}

Response Service::get_scene(const std::string& id) {
  const auto scene = lookup(id);
  if (!scene) return not_found("unknown scene id: " + id);
  return json_response(200, {{"id", id}, {"scene", io::to_json(*scene)}});
}

Response Service::delete_scene(const std::string& id) {
  {
    std::lock_guard lock(mutex_);
    if (store_.erase(id) == 0) return not_found("unknown scene id: " + id);
  }
  if (!options_.persist_dir.empty() && valid_id(id)) {
    std::error_code ec;
    std::filesystem::remove(std::filesystem::path(options_.persist_dir) / (id + ".json"), ec);
  }
  return {204, ""};
}

Response Service::whatif(const std::string& id, std::string_view body) {
  const auto scene = lookup(id);
  if (!scene) return not_found("unknown scene id: " + id);
  const Json j = parse_body(body);
  const std::string text = io::string(io::field(j, "text", ""), ".text");
  parser::Backend backend = models_.parser ? parser::Backend::Linear : parser::Backend::Rules;
  if (j.contains("backend")) {
    const std::string b = io::string(j.at("backend"), ".backend");
    const auto parsed = parser::backend_from_id(b);
    if (!parsed) throw SchemaError(".backend", "unknown backend '" + b + "'");
    backend = *parsed;
  }
  pipeline::WhatIfAnswer answer;
  try {
    answer = pipeline::answer_whatif(*scene, text, models_, backend);
  } catch (const StageError& e) {
    return json_response(422, {{"error", "pipeline"}, {"stage", e.stage()}, {"message", e.what()}});
  }
  Response r = json_response(200, answer_json(answer));
  {
    std::lock_guard lock(mutex_);
    const auto it = store_.find(id);
    if (it != store_.end())
      it->second.last = std::make_shared<const physics::SimulationResult>(std::move(answer.simulation));
  }
  return r;
}

void Service::persist(const std::string& id, const Scene& scene) const {
  if (options_.persist_dir.empty()) return;
  namespace fs = std::filesystem;
  fs::create_directories(options_.persist_dir);
  io::write_file((fs::path(options_.persist_dir) / (id + ".json")).string(), io::encode(scene));
}

void Service::load_persisted() {
  if (options_.persist_dir.empty()) return;
  namespace fs = std::filesystem;
  if (!fs::exists(options_.persist_dir)) return;
  for (const auto& entry : fs::directory_iterator(options_.persist_dir)) {
    if (entry.path().extension() != ".json") continue;
    const std::string id = entry.path().stem().string();
    if (id.size() < 2 || id[0] != 's' || id.find_first_not_of("0123456789", 1) != std::string::npos) continue;
    store_[id] = Entry{io::decode_scene(io::read_file(entry.path().string())), nullptr};
    next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(id.substr(1)) + 1);
  }
}

namespace {

void install_routes(httplib::Server& server, Service& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const Response r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    if (!r.body.empty()) res.set_content(r.body, "application/json");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Delete(".*", forward);
}

}  // namespace

bool Service::listen(const std::string& host, int port) {
  http_ = std::make_unique<Http>();
  http_->server.new_task_queue = [n = options_.threads] { return new httplib::ThreadPool(n); };
  install_routes(http_->server, *this);
  return http_->server.listen(host, port);
}

int Service::bind_any_port(const std::string& host) {
  http_ = std::make_unique<Http>();
  http_->server.new_task_queue = [n = options_.threads] { return new httplib::ThreadPool(n); };
  install_routes(http_->server, *this);
  return http_->server.bind_to_any_port(host);
}

bool Service::listen_after_bind() { return http_ && http_->server.listen_after_bind(); }

void Service::stop() {
  if (http_) http_->server.stop();
}

}  // namespace whatif::service
