#include "whatif/serialization.hpp"

#include "whatif/error.hpp"

#include <fstream>
#include <sstream>

namespace whatif::io {
namespace {

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json mat_json(const Mat3& m) {
  Json out = Json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.push_back(m(r, c));
  return out;
}

Mat3 mat3(const Json& j, const std::string& path) {
  const Json& a = array(j, path, 9);
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = number(a[r * 3 + c], path + "[" + std::to_string(r * 3 + c) + "]");
  if (!is_rotation(m)) throw SchemaError(path, "matrix is not a proper rotation");
  return m;
}

std::string sense_id(RotationSense s) { return s == RotationSense::CW ? "cw" : "ccw"; }

}  // namespace

const Json& field(const Json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "." : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + std::string(key), "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

std::string string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

bool boolean(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<long>();
}

const Json& array(const Json& j, const std::string& path, std::size_t expected_size) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  if (expected_size != 0 && j.size() != expected_size)
    throw SchemaError(path, "expected " + std::to_string(expected_size) + " elements");
  return j;
}

Vec3 vec3(const Json& j, const std::string& path) {
  const Json& a = array(j, path, 3);
  return {number(a[0], path + "[0]"), number(a[1], path + "[1]"), number(a[2], path + "[2]")};
}

ObjectClass object_class(const Json& j, const std::string& path) {
  const std::string id = string(j, path);
  auto c = class_from_id(id);
  if (!c) throw SchemaError(path, "unknown object class '" + id + "'");
  return *c;
}

Json to_json(const Pose& pose) { return {{"t", vec_json(pose.translation)}, {"r", mat_json(pose.rotation)}}; }

Json to_json(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> Json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) return {{"kind", "box"}, {"dims", vec_json(s.half_extents)}};
        else if constexpr (std::is_same_v<S, Sphere>) return {{"kind", "sphere"}, {"dims", Json::array({s.radius})}};
        else return {{"kind", "cylinder"}, {"dims", Json::array({s.radius, s.height})}};
      },
      shape);
}

Json to_json(const Scene& scene) {
  Json objects = Json::array();
  for (const auto& o : scene.objects) {
    objects.push_back({{"class", class_id(o.cls)},
                       {"shape", to_json(o.shape)},
                       {"mass", o.mass},
                       {"pose", to_json(o.pose)}});
  }
  return {{"id", scene.id}, {"table", {{"half_extents", vec_json(scene.table.half_extents)}}}, {"objects", objects}};
}

Json to_json(const Action& action) {
  Json params = Json::object();
  if (const auto* p = std::get_if<PushParams>(&action.params)) params["direction_angle"] = p->direction_angle;
  if (const auto* r = std::get_if<RotateParams>(&action.params)) params["sense"] = sense_id(r->sense);
  if (const auto* d = std::get_if<DropParams>(&action.params)) params["onto"] = class_id(d->onto);
  return {{"kind", action_kind_id(action.kind)}, {"target", class_id(action.target)}, {"params", params}};
}

Json to_json(const Trajectory& trajectory, double rate_hz) {
  Json samples = Json::array();
  for (const auto& s : trajectory.samples)
    samples.push_back({{"t", s.t}, {"t3", vec_json(s.pose.translation)}, {"r9", mat_json(s.pose.rotation)}});
  return {{"class", class_id(trajectory.cls)},
          {"removed", trajectory.removed},
          {"rate_hz", rate_hz},
          {"samples", samples}};
}

Json to_json(const Example& example) {
  Json descriptions = Json::array();
  for (const auto& [cls, text] : example.gt_descriptions) {
    Json d = {{"subject", class_id(cls)}, {"text", text}};
    if (auto it = example.affected_labels.find(cls); it != example.affected_labels.end()) d["affected"] = it->second;
    descriptions.push_back(d);
  }
  return {{"scene", to_json(example.scene)},
          {"action_text", example.action_text},
          {"action", to_json(example.action)},
          {"descriptions", descriptions},
          {"batch", example.batch},
          {"index", example.index}};
}

Pose pose_from_json(const Json& j, const std::string& path) {
  Pose p;
  p.translation = vec3(field(j, "t", path), path + ".t");
  p.rotation = mat3(field(j, "r", path), path + ".r");
  return p;
}

Shape shape_from_json(const Json& j, const std::string& path) {
  const std::string kind = string(field(j, "kind", path), path + ".kind");
  const std::string dpath = path + ".dims";
  const Json& dims = field(j, "dims", path);
  if (kind == "box") return Box{vec3(dims, dpath)};
  if (kind == "sphere") {
    array(dims, dpath, 1);
    return Sphere{number(dims[0], dpath + "[0]")};
  }
  if (kind == "cylinder") {
    array(dims, dpath, 2);
    return Cylinder{number(dims[0], dpath + "[0]"), number(dims[1], dpath + "[1]")};
  }
  throw SchemaError(path + ".kind", "unknown shape kind '" + kind + "'");
}

Scene scene_from_json(const Json& j, const std::string& path) {
  Scene s;
  s.id = string(field(j, "id", path), path + ".id");
  const std::string tpath = path + ".table";
  s.table.half_extents = vec3(field(field(j, "table", path), "half_extents", tpath), tpath + ".half_extents");
  const std::string opath = path + ".objects";
  const Json& objects = array(field(j, "objects", path), opath);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string p = opath + "[" + std::to_string(i) + "]";
    SceneObject o;
    o.cls = object_class(field(objects[i], "class", p), p + ".class");
    o.shape = shape_from_json(field(objects[i], "shape", p), p + ".shape");
    o.mass = number(field(objects[i], "mass", p), p + ".mass");
    o.pose = pose_from_json(field(objects[i], "pose", p), p + ".pose");
    s.objects.push_back(std::move(o));
  }
  return s;
}

Action action_from_json(const Json& j, const std::string& path) {
  const std::string kind_id = string(field(j, "kind", path), path + ".kind");
  const auto kind = action_kind_from_id(kind_id);
  if (!kind) throw SchemaError(path + ".kind", "unknown action kind '" + kind_id + "'");
  Action a{*kind, object_class(field(j, "target", path), path + ".target"), std::monostate{}};
  const std::string ppath = path + ".params";
  const Json& params = field(j, "params", path);
  switch (*kind) {
    case ActionKind::Push:
      a.params = PushParams{number(field(params, "direction_angle", ppath), ppath + ".direction_angle")};
      break;
    case ActionKind::Rotate: {
      const std::string sense = string(field(params, "sense", ppath), ppath + ".sense");
      if (sense != "cw" && sense != "ccw") throw SchemaError(ppath + ".sense", "expected 'cw' or 'ccw'");
      a.params = RotateParams{sense == "cw" ? RotationSense::CW : RotationSense::CCW};
      break;
    }
    case ActionKind::Remove:
      break;
    case ActionKind::Drop:
      a.params = DropParams{object_class(field(params, "onto", ppath), ppath + ".onto")};
      break;
  }
  if (auto v = action_violation(a)) throw SchemaError(path, *v);
  return a;
}

Trajectory trajectory_from_json(const Json& j, const std::string& path) {
  Trajectory t;
  t.cls = object_class(field(j, "class", path), path + ".class");
  t.removed = boolean(field(j, "removed", path), path + ".removed");
  number(field(j, "rate_hz", path), path + ".rate_hz");
  const std::string spath = path + ".samples";
  const Json& samples = array(field(j, "samples", path), spath);
  t.samples.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string p = spath + "[" + std::to_string(i) + "]";
    TrajectorySample s;
    s.t = number(field(samples[i], "t", p), p + ".t");
    s.pose.translation = vec3(field(samples[i], "t3", p), p + ".t3");
    s.pose.rotation = mat3(field(samples[i], "r9", p), p + ".r9");
    t.samples.push_back(s);
  }
  if (t.removed && !t.samples.empty()) throw SchemaError(spath, "removed trajectory must have no samples");
  return t;
}

Example example_from_json(const Json& j, const std::string& path) {
  Example e;
  e.scene = scene_from_json(field(j, "scene", path), path + ".scene");
  e.action_text = string(field(j, "action_text", path), path + ".action_text");
  e.action = action_from_json(field(j, "action", path), path + ".action");
  const std::string dpath = path + ".descriptions";
  const Json& descriptions = array(field(j, "descriptions", path), dpath);
  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    const std::string p = dpath + "[" + std::to_string(i) + "]";
    const ObjectClass c = object_class(field(descriptions[i], "subject", p), p + ".subject");
    e.gt_descriptions[c] = string(field(descriptions[i], "text", p), p + ".text");
    if (descriptions[i].contains("affected")) e.affected_labels[c] = boolean(descriptions[i]["affected"], p + ".affected");
  }
  e.batch = static_cast<int>(integer(field(j, "batch", path), path + ".batch"));
  e.index = static_cast<int>(integer(field(j, "index", path), path + ".index"));
  return e;
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("malformed document: ") + e.what());
  }
}

Scene decode_scene(std::string_view text) { return scene_from_json(parse_document(text)); }
Action decode_action(std::string_view text) { return action_from_json(parse_document(text)); }
Trajectory decode_trajectory(std::string_view text) { return trajectory_from_json(parse_document(text)); }
Example decode_example(std::string_view text) { return example_from_json(parse_document(text)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace whatif::io
