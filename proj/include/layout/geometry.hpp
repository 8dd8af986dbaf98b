#pragma once

// Planar geometry primitives shared by the layout modules. Everything here is
// header-only and templated on the scalar so the same routines serve the
// solver (double) and the finite-difference checks in the tests.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace layout {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

using Vec2 = Vector2<double>;
using Polygon = std::vector<Vec2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <typename Scalar>
constexpr Scalar degrees_to_radians(Scalar deg)
{
    return deg * Scalar(std::numbers::pi / 180.0);
}

template <typename Scalar>
constexpr Scalar radians_to_degrees(Scalar rad)
{
    return rad * Scalar(180.0 / std::numbers::pi);
}

/// Maps an angle onto [0, 2π).
template <typename Scalar>
Scalar normalize_angle(Scalar a)
{
    const Scalar two_pi = Scalar(kTwoPi);
    Scalar r = std::fmod(a, two_pi);
    if (r < Scalar(0)) {
        r += two_pi;
    }
    // fmod of a tiny negative value can round up to exactly 2π.
    if (r >= two_pi) {
        r -= two_pi;
    }
    return r;
}

/// Signed shortest rotation from `from` to `to`, in (−π, π]. The antipodal
/// case resolves to +π.
template <typename Scalar>
Scalar angle_difference(Scalar from, Scalar to)
{
    Scalar d = normalize_angle(to - from);
    if (d > Scalar(kPi)) {
        d -= Scalar(kTwoPi);
    }
    return d;
}

template <typename Scalar>
Vector2<Scalar> direction(Scalar angle)
{
    return {std::cos(angle), std::sin(angle)};
}

template <typename Derived>
auto perp(const Eigen::MatrixBase<Derived>& v)
{
    using Scalar = typename Derived::Scalar;
    return Vector2<Scalar>(-v.y(), v.x());
}

template <typename Scalar>
Scalar cross(const Vector2<Scalar>& a, const Vector2<Scalar>& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

template <typename Scalar>
Vector2<Scalar> rotate(const Vector2<Scalar>& v, Scalar angle)
{
    const Scalar c = std::cos(angle);
    const Scalar s = std::sin(angle);
    return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

template <typename Scalar>
bool is_finite(const Vector2<Scalar>& v)
{
    return std::isfinite(v.x()) && std::isfinite(v.y());
}

template <typename Scalar>
struct SegmentPoint {
    Vector2<Scalar> point;
    Scalar t;
};

template <typename Scalar>
SegmentPoint<Scalar> closest_point_on_segment(const Vector2<Scalar>& p,
                                              const Vector2<Scalar>& a,
                                              const Vector2<Scalar>& b)
{
    const Vector2<Scalar> ab = b - a;
    const Scalar len2 = ab.squaredNorm();
    if (len2 <= Scalar(0)) {
        return {a, Scalar(0)};
    }
    const Scalar t = std::clamp((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
    return {a + t * ab, t};
}

/// Shoelace area; positive for counterclockwise vertex order.
template <typename Scalar>
Scalar signed_area(std::span<const Vector2<Scalar>> poly)
{
    Scalar acc = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        acc += cross(poly[i], poly[(i + 1) % n]);
    }
    return acc / Scalar(2);
}

template <typename Scalar>
Vector2<Scalar> area_centroid(std::span<const Vector2<Scalar>> poly)
{
    Vector2<Scalar> c = Vector2<Scalar>::Zero();
    const Scalar area = signed_area(poly);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        c += (p + q) * cross(p, q);
    }
    return c / (Scalar(6) * area);
}

/// Even-odd point containment; boundary points may go either way.
template <typename Scalar>
bool contains_point(std::span<const Vector2<Scalar>> poly, const Vector2<Scalar>& p)
{
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const Scalar x = (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x();
            if (p.x() < x) {
                inside = !inside;
            }
        }
    }
    return inside;
}

template <typename Scalar>
bool segments_intersect(const Vector2<Scalar>& p1, const Vector2<Scalar>& p2,
                        const Vector2<Scalar>& q1, const Vector2<Scalar>& q2)
{
    const auto orient = [](const Vector2<Scalar>& a, const Vector2<Scalar>& b,
                           const Vector2<Scalar>& c) {
        const Scalar v = cross<Scalar>(b - a, c - a);
        return (v > 0) - (v < 0);
    };
    const auto on_segment = [](const Vector2<Scalar>& a, const Vector2<Scalar>& b,
                               const Vector2<Scalar>& c) {
        return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
               std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
    };
    const int o1 = orient(p1, p2, q1);
    const int o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1);
    const int o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) {
        return true;
    }
    return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
           (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

/// True when no two non-adjacent edges touch.
template <typename Scalar>
bool is_simple_polygon(std::span<const Vector2<Scalar>> poly)
{
    const std::size_t n = poly.size();
    if (n < 3) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                continue;
            }
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

/// Overlap test between a circle and a rectangle rotated by `angle` about its
/// center. Touching counts as no overlap.
template <typename Scalar>
bool circle_overlaps_rect(const Vector2<Scalar>& circle_center, Scalar radius,
                          const Vector2<Scalar>& rect_center,
                          const Vector2<Scalar>& half_extents, Scalar angle)
{
    const Vector2<Scalar> local = rotate<Scalar>(circle_center - rect_center, -angle);
    const Vector2<Scalar> clamped(std::clamp(local.x(), -half_extents.x(), half_extents.x()),
                                  std::clamp(local.y(), -half_extents.y(), half_extents.y()));
    return (local - clamped).squaredNorm() < radius * radius;
}

struct Aabb {
    Vec2 min;
    Vec2 max;

    Vec2 extent() const { return max - min; }
    double diagonal() const { return (max - min).norm(); }
};

inline Aabb bounds_of(std::span<const Vec2> pts)
{
    Aabb box{pts.front(), pts.front()};
    for (const auto& p : pts) {
        box.min = box.min.cwiseMin(p);
        box.max = box.max.cwiseMax(p);
    }
    return box;
}

} // namespace layout
