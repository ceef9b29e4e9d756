#pragma once

// Text (JSON) schemas for the shared value types.
//
//   scene       {id, table:{half_extents:[3]}, objects:[{class, shape:{kind, dims}, mass,
//                pose:{t:[3], r:[9 row-major]}}]}
//   action      {kind, target, params}
//   trajectory  {class, removed, rate_hz:300, samples:[{t, t3:[3], r9:[9]}]}
//   example     {scene, action_text, action, descriptions:[{subject, text, affected}], batch, index}
//
// Doubles are written in shortest round-trip form, so decode(encode(v)) == v
// bit for bit.

#include "whatif/types.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <string_view>

namespace whatif {

/// One generated dataset entry.
struct Example {
  Scene scene;
  Action action;
  std::string action_text;
  std::map<ObjectClass, std::string> gt_descriptions;  // non-target objects only
  std::map<ObjectClass, bool> affected_labels;
  int batch = 0;
  int index = 0;

  bool operator==(const Example&) const = default;
};

}  // namespace whatif

namespace whatif::io {

using Json = nlohmann::json;

Json to_json(const Pose& pose);
Json to_json(const Shape& shape);
Json to_json(const Scene& scene);
Json to_json(const Action& action);
Json to_json(const Trajectory& trajectory, double rate_hz = kSampleRateHz);
Json to_json(const Example& example);

Pose pose_from_json(const Json& j, const std::string& path = "");
Shape shape_from_json(const Json& j, const std::string& path = "");
Scene scene_from_json(const Json& j, const std::string& path = "");
Action action_from_json(const Json& j, const std::string& path = "");
Trajectory trajectory_from_json(const Json& j, const std::string& path = "");
Example example_from_json(const Json& j, const std::string& path = "");

/// Parses text into a document; syntax errors become SchemaError at path "".
Json parse_document(std::string_view text);

template <class T>
std::string encode(const T& value) {
  return to_json(value).dump();
}

Scene decode_scene(std::string_view text);
Action decode_action(std::string_view text);
Trajectory decode_trajectory(std::string_view text);
Example decode_example(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Path-aware accessors shared by the other modules' file formats.
const Json& field(const Json& j, std::string_view key, const std::string& path);
double number(const Json& j, const std::string& path);
std::string string(const Json& j, const std::string& path);
bool boolean(const Json& j, const std::string& path);
long integer(const Json& j, const std::string& path);
const Json& array(const Json& j, const std::string& path, std::size_t expected_size = 0);
Vec3 vec3(const Json& j, const std::string& path);
ObjectClass object_class(const Json& j, const std::string& path);

}  // namespace whatif::io
