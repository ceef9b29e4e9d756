#pragma once

// Collision queries on the primitive shapes. Every non-sphere shape is
// represented twice: an exact signed distance function, and a fixed set of
// surface sample points. Contacts between two shapes test each shape's samples
// against the other's distance field; spheres are handled exactly through their
// center.

#include "whatif/types.hpp"

#include <span>
#include <vector>

namespace whatif::geometry {

struct SignedDistance {
  double distance;  // negative inside
  Vec3 normal;      // outward unit gradient, world frame
};

SignedDistance signed_distance(const Shape& shape, const Pose& pose, const Vec3& point);

/// Surface sample points in the shape's local frame.
std::span<const Vec3> local_samples(const Shape& shape);

double bounding_radius(const Shape& shape);

/// Diagonal of the body-frame inertia tensor.
Vec3 principal_inertia(const Shape& shape, double mass);

/// Lowest / highest world z reached by the shape.
double lowest_z(const Shape& shape, const Pose& pose);
double highest_z(const Shape& shape, const Pose& pose);

struct ContactPoint {
  Vec3 point;         // world position used for lever arms
  Vec3 normal;        // unit, points from the second shape towards the first
  double separation;  // signed gap along normal, negative when penetrating
};

/// Contacts between shape `a` and shape `b` whose separation is below `margin`.
/// Appends to `out`.
void collide(const Shape& a, const Pose& pa, const Shape& b, const Pose& pb, double margin,
             std::vector<ContactPoint>& out);

/// Contacts between a shape and the static table box, including the table's
/// top edges tested against the shape (needed when an object tips over an edge).
void collide_table(const Shape& a, const Pose& pa, const Table& table, double margin,
                   std::vector<ContactPoint>& out);

/// Contacts with the horizontal floor plane z = height.
void collide_plane(const Shape& a, const Pose& pa, double height, double margin,
                   std::vector<ContactPoint>& out);

/// Deepest penetration between two shapes (0 when separated or touching).
double penetration_depth(const Shape& a, const Pose& pa, const Shape& b, const Pose& pb);

}  // namespace whatif::geometry
