#include "whatif/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace whatif::geometry {
namespace {

constexpr int kRimSamples = 16;
constexpr double kTableEdgeSpacing = 0.005;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

SignedDistance box_sdf(const Vec3& h, const Vec3& p) {
  const Vec3 q = p.cwiseAbs() - h;
  if ((q.array() > 0.0).any()) {
    const Vec3 outside = q.cwiseMax(0.0);
    const double d = outside.norm();
    Vec3 n;
    for (int i = 0; i < 3; ++i) n[i] = sign_of(p[i]) * outside[i] / d;
    return {d, n};
  }
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (q[i] > q[axis]) axis = i;
  Vec3 n = Vec3::Zero();
  n[axis] = sign_of(p[axis]);
  return {q[axis], n};
}

SignedDistance sphere_sdf(double r, const Vec3& p) {
  const double len = p.norm();
  if (len < 1e-15) return {-r, Vec3::UnitZ()};
  return {len - r, p / len};
}

SignedDistance cylinder_sdf(double r, double height, const Vec3& p) {
  const double hh = 0.5 * height;
  const double rho = std::hypot(p.x(), p.y());
  const Vec3 radial = rho > 1e-15 ? Vec3(p.x() / rho, p.y() / rho, 0.0) : Vec3::UnitX();
  const Vec3 axial(0.0, 0.0, sign_of(p.z()));
  const double dx = rho - r;
  const double dz = std::abs(p.z()) - hh;
  if (dx > 0.0 && dz > 0.0) {
    const double d = std::hypot(dx, dz);
    return {d, (dx * radial + dz * axial) / d};
  }
  if (dx > 0.0) return {dx, radial};
  if (dz > 0.0) return {dz, axial};
  return dx > dz ? SignedDistance{dx, radial} : SignedDistance{dz, axial};
}

SignedDistance local_sdf(const Shape& shape, const Vec3& p) {
  return std::visit(
      [&](const auto& s) -> SignedDistance {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) return box_sdf(s.half_extents, p);
        else if constexpr (std::is_same_v<S, Sphere>) return sphere_sdf(s.radius, p);
        else return cylinder_sdf(s.radius, s.height, p);
      },
      shape);
}

std::vector<Vec3> build_samples(const Shape& shape) {
  std::vector<Vec3> out;
  if (const auto* box = std::get_if<Box>(&shape)) {
    const Vec3& h = box->half_extents;
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) out.emplace_back(sx * h.x(), sy * h.y(), sz * h.z());
    for (int axis = 0; axis < 3; ++axis) {
      const int u = (axis + 1) % 3, v = (axis + 2) % 3;
      for (int su : {-1, 1})
        for (int sv : {-1, 1}) {
          Vec3 p = Vec3::Zero();
          p[u] = su * h[u];
          p[v] = sv * h[v];
          out.push_back(p);
        }
    }
    for (int axis = 0; axis < 3; ++axis)
      for (int s : {-1, 1}) {
        Vec3 p = Vec3::Zero();
        p[axis] = s * h[axis];
        out.push_back(p);
      }
  } else if (const auto* cyl = std::get_if<Cylinder>(&shape)) {
    const double hh = 0.5 * cyl->height;
    for (int i = 0; i < kRimSamples; ++i) {
      const double a = 2.0 * M_PI * i / kRimSamples;
      const double x = cyl->radius * std::cos(a), y = cyl->radius * std::sin(a);
      out.emplace_back(x, y, -hh);
      out.emplace_back(x, y, hh);
      out.emplace_back(x, y, 0.0);
    }
    out.emplace_back(0.0, 0.0, -hh);
    out.emplace_back(0.0, 0.0, hh);
  }
  return out;
}

struct ShapeKey {
  int kind;
  double a, b, c;
  auto operator<=>(const ShapeKey&) const = default;
};

ShapeKey key_of(const Shape& shape) {
  if (const auto* box = std::get_if<Box>(&shape))
    return {0, box->half_extents.x(), box->half_extents.y(), box->half_extents.z()};
  if (const auto* s = std::get_if<Sphere>(&shape)) return {1, s->radius, 0.0, 0.0};
  const auto& c = std::get<Cylinder>(shape);
  return {2, c.radius, c.height, 0.0};
}

Vec3 to_world(const Pose& pose, const Vec3& local) { return pose.rotation * local + pose.translation; }

/// Samples of `a` tested against the distance field of `b`. `flip` reverses
/// the reported normal so it always points from the second argument of
/// collide() towards the first.
void samples_against(const Shape& a, const Pose& pa, const Shape& b, const Pose& pb, double margin,
                     bool flip, std::vector<ContactPoint>& out) {
  const double reach = bounding_radius(b) + margin;
  for (const Vec3& local : local_samples(a)) {
    const Vec3 p = to_world(pa, local);
    if ((p - pb.translation).squaredNorm() > reach * reach) continue;
    const SignedDistance sd = signed_distance(b, pb, p);
    if (sd.distance < margin) out.push_back({p, flip ? Vec3(-sd.normal) : sd.normal, sd.distance});
  }
}

}  // namespace

SignedDistance signed_distance(const Shape& shape, const Pose& pose, const Vec3& point) {
  const Vec3 local = pose.rotation.transpose() * (point - pose.translation);
  SignedDistance sd = local_sdf(shape, local);
  sd.normal = pose.rotation * sd.normal;
  return sd;
}

std::span<const Vec3> local_samples(const Shape& shape) {
  static std::mutex mu;
  static std::map<ShapeKey, std::vector<Vec3>> cache;
  const ShapeKey key = key_of(shape);
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_samples(shape)).first;
  return it->second;  // node-based map: references stay valid
}

double bounding_radius(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) return s.half_extents.norm();
        else if constexpr (std::is_same_v<S, Sphere>) return s.radius;
        else return std::hypot(s.radius, 0.5 * s.height);
      },
      shape);
}

Vec3 principal_inertia(const Shape& shape, double m) {
  return std::visit(
      [m](const auto& s) -> Vec3 {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) {
          const Vec3 h2 = s.half_extents.cwiseProduct(s.half_extents);
          return m / 3.0 * Vec3(h2.y() + h2.z(), h2.x() + h2.z(), h2.x() + h2.y());
        } else if constexpr (std::is_same_v<S, Sphere>) {
          const double i = 0.4 * m * s.radius * s.radius;
          return {i, i, i};
        } else {
          const double r2 = s.radius * s.radius;
          const double side = m * (3.0 * r2 + s.height * s.height) / 12.0;
          return {side, side, 0.5 * m * r2};
        }
      },
      shape);
}

namespace {
double vertical_extent(const Shape& shape, const Mat3& r) {
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Box>) {
          return std::abs(r(2, 0)) * s.half_extents.x() + std::abs(r(2, 1)) * s.half_extents.y() +
                 std::abs(r(2, 2)) * s.half_extents.z();
        } else if constexpr (std::is_same_v<S, Sphere>) {
          return s.radius;
        } else {
          const double az = std::clamp(r(2, 2), -1.0, 1.0);
          return 0.5 * s.height * std::abs(az) + s.radius * std::sqrt(1.0 - az * az);
        }
      },
      shape);
}
}  // namespace

double lowest_z(const Shape& shape, const Pose& pose) {
  return pose.translation.z() - vertical_extent(shape, pose.rotation);
}

double highest_z(const Shape& shape, const Pose& pose) {
  return pose.translation.z() + vertical_extent(shape, pose.rotation);
}

void collide(const Shape& a, const Pose& pa, const Shape& b, const Pose& pb, double margin,
             std::vector<ContactPoint>& out) {
  const Vec3 delta = pa.translation - pb.translation;
  const double reach = bounding_radius(a) + bounding_radius(b) + margin;
  if (delta.squaredNorm() > reach * reach) return;

  const auto* sa = std::get_if<Sphere>(&a);
  const auto* sb = std::get_if<Sphere>(&b);
  if (sa && sb) {
    const double len = delta.norm();
    const Vec3 n = len > 1e-15 ? Vec3(delta / len) : Vec3::UnitZ();
    const double sep = len - sa->radius - sb->radius;
    if (sep < margin) out.push_back({pa.translation - sa->radius * n, n, sep});
    return;
  }
  if (sa) {
    const SignedDistance sd = signed_distance(b, pb, pa.translation);
    const double sep = sd.distance - sa->radius;
    if (sep < margin) out.push_back({pa.translation - sa->radius * sd.normal, sd.normal, sep});
    return;
  }
  if (sb) {
    const SignedDistance sd = signed_distance(a, pa, pb.translation);
    const double sep = sd.distance - sb->radius;
    if (sep < margin) out.push_back({pb.translation - sb->radius * sd.normal, -sd.normal, sep});
    return;
  }
  samples_against(a, pa, b, pb, margin, false, out);
  samples_against(b, pb, a, pa, margin, true, out);
}

void collide_table(const Shape& a, const Pose& pa, const Table& table, double margin,
                   std::vector<ContactPoint>& out) {
  const Shape table_shape = Box{table.half_extents};
  const Pose table_pose{table.center(), Mat3::Identity()};
  const double radius = bounding_radius(a);
  const Vec3& c = pa.translation;
  const Vec3& h = table.half_extents;
  // Broad phase against the table's bounding box.
  if (c.z() - radius > table.top() + margin) return;
  if (std::abs(c.x()) - radius > h.x() + margin || std::abs(c.y()) - radius > h.y() + margin) return;

  if (const auto* s = std::get_if<Sphere>(&a)) {
    const SignedDistance sd = signed_distance(table_shape, table_pose, c);
    const double sep = sd.distance - s->radius;
    if (sep < margin) out.push_back({c - s->radius * sd.normal, sd.normal, sep});
    return;
  }
  samples_against(a, pa, table_shape, table_pose, margin, false, out);

  // Top edges of the table, sampled on a fixed lattice near the shape.
  const double reach = radius + margin;
  if (std::abs(c.z() - table.top()) > reach) return;
  for (int axis = 0; axis < 2; ++axis) {
    const int other = 1 - axis;
    for (int side : {-1, 1}) {
      const double fixed = side * h[other];
      if (std::abs(c[other] - fixed) > reach) continue;
      const double lo = std::max(-h[axis], c[axis] - reach);
      const double hi = std::min(h[axis], c[axis] + reach);
      if (lo > hi) continue;
      const long first = static_cast<long>(std::ceil((lo + h[axis]) / kTableEdgeSpacing));
      const long last = static_cast<long>(std::floor((hi + h[axis]) / kTableEdgeSpacing));
      for (long k = first; k <= last; ++k) {
        Vec3 p;
        p[axis] = -h[axis] + k * kTableEdgeSpacing;
        p[other] = fixed;
        p.z() = table.top();
        const SignedDistance sd = signed_distance(a, pa, p);
        if (sd.distance < margin) out.push_back({p, -sd.normal, sd.distance});
      }
    }
  }
}

void collide_plane(const Shape& a, const Pose& pa, double height, double margin,
                   std::vector<ContactPoint>& out) {
  const double radius = bounding_radius(a);
  if (pa.translation.z() - radius > height + margin) return;
  if (const auto* s = std::get_if<Sphere>(&a)) {
    const double sep = pa.translation.z() - s->radius - height;
    if (sep < margin) out.push_back({pa.translation - s->radius * Vec3::UnitZ(), Vec3::UnitZ(), sep});
    return;
  }
  for (const Vec3& local : local_samples(a)) {
    const Vec3 p = to_world(pa, local);
    const double sep = p.z() - height;
    if (sep < margin) out.push_back({p, Vec3::UnitZ(), sep});
  }
}

double penetration_depth(const Shape& a, const Pose& pa, const Shape& b, const Pose& pb) {
  std::vector<ContactPoint> contacts;
  collide(a, pa, b, pb, 0.0, contacts);
  double depth = 0.0;
  for (const auto& c : contacts) depth = std::max(depth, -c.separation);
  return depth;
}

}  // namespace whatif::geometry
