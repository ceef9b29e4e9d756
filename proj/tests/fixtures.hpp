#pragma once

// Hand-built scenes shared by the test binaries.

#include "whatif/geometry.hpp"
#include "whatif/lexicon.hpp"
#include "whatif/types.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

namespace whatif::fixtures {

/// An object of class `c` resting on the table top at (x, y) with the given yaw.
inline SceneObject resting(ObjectClass c, double x, double y, double yaw = 0.0) {
  const auto& g = lexicon::geometry(c);
  SceneObject o{c, g.shape, g.mass, Pose{}};
  o.pose.rotation = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix() * g.base_rotation;
  o.pose.translation = Vec3(x, y, 0.0);
  o.pose.translation.z() = -geometry::lowest_z(o.shape, o.pose);
  return o;
}

struct Placement {
  ObjectClass cls;
  double x;
  double y;
  double yaw = 0.0;
};

inline Scene scene_of(std::initializer_list<Placement> placements, std::string id = "fixture") {
  Scene s;
  s.id = std::move(id);
  for (const auto& p : placements) s.objects.push_back(resting(p.cls, p.x, p.y, p.yaw));
  return s;
}

/// Five objects far apart from each other.
inline Scene isolated_scene() {
  return scene_of({{ObjectClass::FoamBrick, -0.3, -0.3},
                   {ObjectClass::Screwdriver, 0.3, -0.3},
                   {ObjectClass::Softball, 0.0, 0.0},
                   {ObjectClass::CoffeeCan, -0.3, 0.3},
                   {ObjectClass::Banana, 0.3, 0.3}},
                  "isolated");
}

/// Screwdriver next to the foam brick; the other three far away.
inline Scene row1_scene() {
  return scene_of({{ObjectClass::FoamBrick, 0.05, 0.0},
                   {ObjectClass::Screwdriver, -0.08, 0.0, M_PI / 2},
                   {ObjectClass::MustardBottle, 0.3, 0.3},
                   {ObjectClass::CoffeeCan, -0.3, 0.3},
                   {ObjectClass::Softball, 0.3, -0.3}},
                  "row1");
}

}  // namespace whatif::fixtures
