#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace whatif {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kGravity = 9.81;
inline constexpr double kSampleRateHz = 300.0;
inline constexpr double kTimeStep = 1.0 / kSampleRateHz;
inline constexpr int kSimulationSteps = 1500;  // 5 s at 300 Hz
inline constexpr int kSettleSteps = 300;       // 1 s
inline constexpr int kObjectsPerScene = 5;
inline constexpr double kOrthonormalTolerance = 1e-6;

/// The eight tabletop object classes. Order is the class index used by every
/// classifier head and tie-break rule.
enum class ObjectClass : std::uint8_t {
  FoamBrick,
  CheezitBox,
  PuddingBox,
  MustardBottle,
  Banana,
  Softball,
  CoffeeCan,
  Screwdriver,
};

inline constexpr int kNumClasses = 8;
inline constexpr std::array<ObjectClass, kNumClasses> kAllClasses = {
    ObjectClass::FoamBrick,     ObjectClass::CheezitBox, ObjectClass::PuddingBox,
    ObjectClass::MustardBottle, ObjectClass::Banana,     ObjectClass::Softball,
    ObjectClass::CoffeeCan,     ObjectClass::Screwdriver,
};

constexpr int class_index(ObjectClass c) { return static_cast<int>(c); }

/// Identifier used in files: "foam_brick", "cheezit_box", ...
std::string_view class_id(ObjectClass c);
std::optional<ObjectClass> class_from_id(std::string_view id);

struct Pose {
  Vec3 translation = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  bool operator==(const Pose&) const = default;
};

/// Largest |(RᵀR − I)_ij| plus the determinant check folded in as |det − 1|.
double orthonormality_error(const Mat3& r);
bool is_rotation(const Mat3& r, double tol = kOrthonormalTolerance);

/// Axis convention for cylinders: the axis is local z.
struct Box {
  Vec3 half_extents;
  bool operator==(const Box&) const = default;
};
struct Sphere {
  double radius;
  bool operator==(const Sphere&) const = default;
};
struct Cylinder {
  double radius;
  double height;
  bool operator==(const Cylinder&) const = default;
};
using Shape = std::variant<Box, Sphere, Cylinder>;

struct SceneObject {
  ObjectClass cls;
  Shape shape;
  double mass;
  Pose pose;

  bool operator==(const SceneObject&) const = default;
};

/// The table is a static axis-aligned box whose top face is the plane z = 0.
struct Table {
  Vec3 half_extents{0.5, 0.5, 0.375};

  double top() const { return 0.0; }
  Vec3 center() const { return {0.0, 0.0, -half_extents.z()}; }
  /// The floor sits at the table's foot.
  double floor() const { return -2.0 * half_extents.z(); }
  bool operator==(const Table&) const = default;
};

struct Scene {
  std::string id;
  Table table;
  std::vector<SceneObject> objects;

  const SceneObject* find(ObjectClass c) const;
  bool operator==(const Scene&) const = default;
};

enum class ActionKind : std::uint8_t { Push, Rotate, Remove, Drop };
inline constexpr int kNumActionKinds = 4;
inline constexpr std::array<ActionKind, kNumActionKinds> kAllActionKinds = {
    ActionKind::Push, ActionKind::Rotate, ActionKind::Remove, ActionKind::Drop};

std::string_view action_kind_id(ActionKind k);
std::optional<ActionKind> action_kind_from_id(std::string_view id);

enum class RotationSense : std::uint8_t { CW, CCW };

struct PushParams {
  double direction_angle;  // radians, world frame, 0 = +x
  bool operator==(const PushParams&) const = default;
};
struct RotateParams {
  RotationSense sense;
  bool operator==(const RotateParams&) const = default;
};
struct DropParams {
  ObjectClass onto;
  bool operator==(const DropParams&) const = default;
};
using ActionParams = std::variant<std::monostate, PushParams, RotateParams, DropParams>;

struct Action {
  ActionKind kind;
  ObjectClass target;
  ActionParams params;

  static Action push(ObjectClass target, double angle) { return {ActionKind::Push, target, PushParams{angle}}; }
  static Action rotate(ObjectClass target, RotationSense s) { return {ActionKind::Rotate, target, RotateParams{s}}; }
  static Action remove(ObjectClass target) { return {ActionKind::Remove, target, std::monostate{}}; }
  static Action drop(ObjectClass target, ObjectClass onto) { return {ActionKind::Drop, target, DropParams{onto}}; }

  bool operator==(const Action&) const = default;
};

/// Empty when the action is well formed; otherwise the reason.
std::optional<std::string> action_violation(const Action& a);

struct TrajectorySample {
  double t;
  Pose pose;
  bool operator==(const TrajectorySample&) const = default;
};

struct Trajectory {
  ObjectClass cls;
  std::vector<TrajectorySample> samples;
  bool removed = false;

  bool operator==(const Trajectory&) const = default;
};

/// Human-readable form used in logs and CLI output, e.g. "Drop(screwdriver, onto=foam_brick)".
std::string describe_action(const Action& a);

/// atan2(y, x); the magnitude of (x, y) is discarded. Throws on the zero vector.
double angle_from_xy(double x, double y);

/// Violations of the Scene invariants, one human-readable entry per violation.
std::vector<std::string> validate_scene(const Scene& scene);

}  // namespace whatif
