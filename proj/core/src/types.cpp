#include "whatif/types.hpp"

#include "whatif/error.hpp"
#include "whatif/geometry.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace whatif {
namespace {

using namespace std::string_view_literals;

constexpr std::array<std::string_view, kNumClasses> kClassIds = {
    "foam_brick"sv, "cheezit_box"sv, "pudding_box"sv, "mustard_bottle"sv,
    "banana"sv,     "softball"sv,    "coffee_can"sv,  "screwdriver"sv,
};

constexpr std::array<std::string_view, kNumActionKinds> kKindIds = {"push"sv, "rotate"sv, "remove"sv,
                                                                    "drop"sv};

constexpr double kInterpenetrationTolerance = 1e-4;
constexpr double kSurfaceTolerance = 1e-4;

}  // namespace

std::string_view class_id(ObjectClass c) { return kClassIds[class_index(c)]; }

std::optional<ObjectClass> class_from_id(std::string_view id) {
  for (ObjectClass c : kAllClasses)
    if (kClassIds[class_index(c)] == id) return c;
  return std::nullopt;
}

std::string_view action_kind_id(ActionKind k) { return kKindIds[static_cast<int>(k)]; }

std::optional<ActionKind> action_kind_from_id(std::string_view id) {
  for (ActionKind k : kAllActionKinds)
    if (kKindIds[static_cast<int>(k)] == id) return k;
  return std::nullopt;
}

double orthonormality_error(const Mat3& r) {
  const double gram = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(gram, std::abs(r.determinant() - 1.0));
}

bool is_rotation(const Mat3& r, double tol) { return r.allFinite() && orthonormality_error(r) <= tol; }

const SceneObject* Scene::find(ObjectClass c) const {
  for (const auto& o : objects)
    if (o.cls == c) return &o;
  return nullptr;
}

std::optional<std::string> action_violation(const Action& a) {
  switch (a.kind) {
    case ActionKind::Push: {
      const auto* p = std::get_if<PushParams>(&a.params);
      if (!p) return "push action without push parameters";
      if (!std::isfinite(p->direction_angle) || std::abs(p->direction_angle) > M_PI)
        return "push direction outside [-pi, pi]";
      return std::nullopt;
    }
    case ActionKind::Rotate:
      if (!std::holds_alternative<RotateParams>(a.params)) return "rotate action without rotate parameters";
      return std::nullopt;
    case ActionKind::Remove:
      if (!std::holds_alternative<std::monostate>(a.params)) return "remove action takes no parameters";
      return std::nullopt;
    case ActionKind::Drop: {
      const auto* d = std::get_if<DropParams>(&a.params);
      if (!d) return "drop action without drop parameters";
      if (d->onto == a.target) return "drop target and onto object coincide";
      return std::nullopt;
    }
  }
  return "unknown action kind";
}

std::string describe_action(const Action& a) {
  std::ostringstream os;
  os << (a.kind == ActionKind::Push     ? "Push"
         : a.kind == ActionKind::Rotate ? "Rotate"
         : a.kind == ActionKind::Remove ? "Remove"
                                        : "Drop")
     << '(' << class_id(a.target);
  if (const auto* p = std::get_if<PushParams>(&a.params)) os << ", angle=" << p->direction_angle;
  if (const auto* r = std::get_if<RotateParams>(&a.params)) os << ", " << (r->sense == RotationSense::CW ? "CW" : "CCW");
  if (const auto* d = std::get_if<DropParams>(&a.params)) os << ", onto=" << class_id(d->onto);
  os << ')';
  return os.str();
}

double angle_from_xy(double x, double y) {
  if (x == 0.0 && y == 0.0) throw DataError("degenerate push direction");
  return std::atan2(y, x);
}

std::vector<std::string> validate_scene(const Scene& scene) {
  std::vector<std::string> violations;
  if (scene.objects.size() != static_cast<std::size_t>(kObjectsPerScene)) {
    violations.push_back("scene has " + std::to_string(scene.objects.size()) + " objects, expected 5");
  }
  if ((scene.table.half_extents.array() <= 0.0).any()) violations.push_back("table: non-positive half extents");

  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const auto& o = scene.objects[i];
    const std::string name(class_id(o.cls));
    if (!(o.mass > 0.0)) violations.push_back(name + ": mass must be positive");
    const bool dims_ok = std::visit(
        [](const auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Box>) return (s.half_extents.array() > 0.0).all();
          else if constexpr (std::is_same_v<S, Sphere>) return s.radius > 0.0;
          else return s.radius > 0.0 && s.height > 0.0;
        },
        o.shape);
    if (!dims_ok) violations.push_back(name + ": shape dimensions must be positive");
    if (!o.pose.translation.allFinite() || !is_rotation(o.pose.rotation))
      violations.push_back(name + ": pose rotation is not orthonormal");
    if (geometry::lowest_z(o.shape, o.pose) < scene.table.top() - kSurfaceTolerance)
      violations.push_back(name + ": below the table surface");
    for (std::size_t j = 0; j < i; ++j) {
      if (scene.objects[j].cls == o.cls) violations.push_back(name + ": duplicate class");
    }
  }
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.objects.size(); ++j) {
      const auto& a = scene.objects[i];
      const auto& b = scene.objects[j];
      const double depth = geometry::penetration_depth(a.shape, a.pose, b.shape, b.pose);
      if (depth > kInterpenetrationTolerance) {
        std::ostringstream os;
        os << class_id(a.cls) << " and " << class_id(b.cls) << ": interpenetration of " << depth << " m";
        violations.push_back(os.str());
      }
    }
  }
  return violations;
}

}  // namespace whatif
