#include "layout/scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace layout {

void Particle::set_mass(double m)
{
    if (std::isinf(m)) {
        mass = kInfiniteMass;
        inverse_mass = 0.0;
        return;
    }
    if (!(m > 0.0)) {
        throw SceneError("particle mass must be positive, got " + std::to_string(m));
    }
    mass = m;
    inverse_mass = 1.0 / m;
}

void Particle::set_pose(const Pose& p)
{
    position = p.position;
    z = p.z;
    orientation = normalize_angle(p.orientation);
}

AccessRegion face_region(const BoundingBox& box, Face face, double depth)
{
    const double hx = box.half_extents.x();
    const double hy = box.half_extents.y();
    const double hd = 0.5 * depth;
    switch (face) {
    case Face::Back:
        return {Vec2(-hx - hd, 0.0), Vec2(hd, hy)};
    case Face::Left:
        return {Vec2(0.0, hy + hd), Vec2(hx, hd)};
    case Face::Front:
        return {Vec2(hx + hd, 0.0), Vec2(hd, hy)};
    case Face::Right:
        return {Vec2(0.0, -hy - hd), Vec2(hx, hd)};
    }
    return {};
}

bool LayoutObject::has_access_regions() const
{
    return std::any_of(access.begin(), access.end(), [](const AccessRegion& r) { return r.enabled(); });
}

// --- curves -----------------------------------------------------------------

Curve Curve::segment(const Vec2& a, const Vec2& b)
{
    Curve c{CurveKind::Segment, a, b, Vec2::Zero()};
    c.validate();
    return c;
}

Curve Curve::arc(const Vec2& a, const Vec2& b, const Vec2& center)
{
    Curve c{CurveKind::Arc, a, b, center};
    c.validate();
    return c;
}

void Curve::validate() const
{
    if (!is_finite(a) || !is_finite(b) || !is_finite(center)) {
        throw SceneError("curve has non-finite coordinates");
    }
    if (kind == CurveKind::Segment) {
        if ((b - a).norm() <= 0.0) {
            throw SceneError("segment curve has zero length");
        }
        return;
    }
    const double ra = (a - center).norm();
    const double rb = (b - center).norm();
    if (ra <= 0.0 || std::abs(ra - rb) > 1e-6) {
        throw SceneError("arc endpoints must share a positive radius about the center");
    }
}

double Curve::sweep() const
{
    const double start = std::atan2(a.y() - center.y(), a.x() - center.x());
    const double end = std::atan2(b.y() - center.y(), b.x() - center.x());
    const double s = normalize_angle(end - start);
    return s > 0.0 ? s : kTwoPi;
}

Vec2 Curve::point_at(double t) const
{
    if (kind == CurveKind::Segment) {
        return a + t * (b - a);
    }
    const double r = (a - center).norm();
    const double start = std::atan2(a.y() - center.y(), a.x() - center.x());
    return center + r * direction(start + t * sweep());
}

double Curve::length() const
{
    if (kind == CurveKind::Segment) {
        return (b - a).norm();
    }
    return (a - center).norm() * sweep();
}

CurvePoint closest_point_on_curve(const Curve& curve, const Vec2& p)
{
    if (curve.kind == CurveKind::Segment) {
        const auto sp = closest_point_on_segment(p, curve.a, curve.b);
        return {sp.point, sp.t};
    }
    const Vec2 rel = p - curve.center;
    const double r = (curve.a - curve.center).norm();
    const double sweep = curve.sweep();
    if (rel.norm() > 0.0) {
        const double start = std::atan2(curve.a.y() - curve.center.y(), curve.a.x() - curve.center.x());
        const double along = normalize_angle(std::atan2(rel.y(), rel.x()) - start);
        if (along <= sweep) {
            return {curve.center + r * rel.normalized(), along / sweep};
        }
    }
    // Outside the span (or at the center): nearer endpoint, a on ties.
    if ((p - curve.b).squaredNorm() < (p - curve.a).squaredNorm()) {
        return {curve.b, 1.0};
    }
    return {curve.a, 0.0};
}

Curve transformed(const Curve& curve, const Pose& frame)
{
    const auto xf = [&](const Vec2& v) { return Vec2(frame.position + rotate(v, frame.orientation)); };
    Curve out = curve;
    out.a = xf(curve.a);
    out.b = xf(curve.b);
    out.center = xf(curve.center);
    return out;
}

// --- room -------------------------------------------------------------------

Room Room::from_polygon(Polygon boundary)
{
    if (boundary.size() < 3) {
        throw SceneError("room boundary needs at least 3 vertices");
    }
    for (const auto& v : boundary) {
        if (!is_finite(v)) {
            throw SceneError("room boundary has non-finite vertex");
        }
    }
    const std::span<const Vec2> view(boundary);
    if (!is_simple_polygon(view)) {
        throw SceneError("room boundary is not a simple polygon");
    }
    const double area = signed_area(view);
    if (std::abs(area) <= 1e-12) {
        throw SceneError("room boundary has zero area");
    }
    if (area < 0.0) {
        std::reverse(boundary.begin(), boundary.end());
    }
    Room room;
    room.boundary = std::move(boundary);
    room.centroid = area_centroid(std::span<const Vec2>(room.boundary));
    return room;
}

Room Room::rectangle(double width, double depth)
{
    return from_polygon({Vec2(0, 0), Vec2(width, 0), Vec2(width, depth), Vec2(0, depth)});
}

double Room::area() const
{
    return signed_area(std::span<const Vec2>(boundary));
}

Aabb Room::bounds() const
{
    return bounds_of(boundary);
}

bool Room::contains(const Vec2& p) const
{
    return contains_point(std::span<const Vec2>(boundary), p);
}

WallPoint nearest_wall_point(const Room& room, const Vec2& p)
{
    const std::size_t n = room.boundary.size();
    WallPoint best{};
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = room.boundary[i];
        const Vec2& b = room.boundary[(i + 1) % n];
        const auto sp = closest_point_on_segment(p, a, b);
        const double d2 = (p - sp.point).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            const Vec2 t = (b - a).normalized();
            best.point = sp.point;
            best.normal = perp(t);
            best.tangent_angle = normalize_angle(std::atan2(t.y(), t.x()));
            best.segment = i;
        }
    }
    best.distance = std::sqrt(best_d2);
    return best;
}

double signed_boundary_distance(const Room& room, const Vec2& p)
{
    const double d = nearest_wall_point(room, p).distance;
    return room.contains(p) ? d : -d;
}

double mass_from_bbox(const BoundingBox& box, double density)
{
    const double v = density * box.volume();
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw SceneError("bounding box has zero volume");
    }
    return v;
}

// --- poses ------------------------------------------------------------------

Pose compose(const Pose& frame, const Pose& local)
{
    return {frame.position + rotate(local.position, frame.orientation), frame.z + local.z,
            normalize_angle(frame.orientation + local.orientation)};
}

Pose relative(const Pose& frame, const Pose& world)
{
    return {rotate(Vec2(world.position - frame.position), -frame.orientation), world.z - frame.z,
            normalize_angle(world.orientation - frame.orientation)};
}

BoundingBox group_bounds(const Scene& scene, const Group& group)
{
    Vec2 reach = Vec2::Zero();
    double half_height = 0.0;
    for (std::size_t m = 0; m < group.members.size(); ++m) {
        const auto& obj = scene.objects.at(group.members[m]);
        half_height = std::max(half_height, obj.bbox.half_height);
        if (group.rigidity == Rigidity::Rigid && m < group.offsets.size()) {
            const Pose& off = group.offsets[m];
            const Vec2 h = obj.bbox.half_extents;
            for (const Vec2& corner : {Vec2(h.x(), h.y()), Vec2(-h.x(), h.y()), Vec2(h.x(), -h.y()),
                                      Vec2(-h.x(), -h.y())}) {
                reach = reach.cwiseMax((off.position + rotate(corner, off.orientation)).cwiseAbs());
            }
        } else if (group.curve) {
            const double r = obj.bbox.bounding_radius();
            for (int s = 0; s <= 16; ++s) {
                reach = reach.cwiseMax(group.curve->point_at(s / 16.0).cwiseAbs() + Vec2(r, r));
            }
        } else {
            reach = reach.cwiseMax(Vec2::Constant(obj.bbox.bounding_radius()));
        }
    }
    BoundingBox box;
    box.half_extents = reach.cwiseMax(Vec2::Constant(0.05));
    box.half_height = std::max(half_height, 0.05);
    return box;
}

// --- scene ------------------------------------------------------------------

namespace {

std::size_t expected_arity(ConstraintKind kind)
{
    switch (kind) {
    case ConstraintKind::WallDistance:
    case ConstraintKind::WallOrientation:
    case ConstraintKind::Boundary:
        return 1;
    case ConstraintKind::HeatPoint:
    case ConstraintKind::FocalSymmetry:
    case ConstraintKind::VisualBalance:
        return 0; // variadic
    default:
        return 2;
    }
}

} // namespace

std::optional<std::size_t> Scene::find_object(std::string_view id) const
{
    for (std::size_t i = 0; i < objects.size(); ++i) {
        if (objects[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> Scene::find_group(std::string_view id) const
{
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> Scene::find_particle(std::string_view id) const
{
    if (auto o = find_object(id)) {
        return objects[*o].particle;
    }
    if (auto g = find_group(id)) {
        return groups[*g].particle;
    }
    return std::nullopt;
}

std::string Scene::particle_name(std::size_t particle) const
{
    for (const auto& o : objects) {
        if (o.particle == particle) {
            return o.id;
        }
    }
    for (const auto& g : groups) {
        if (g.particle == particle) {
            return g.id;
        }
    }
    return "#" + std::to_string(particle);
}

void Scene::validate() const
{
    if (room.boundary.size() < 3) {
        throw SceneError("scene has no room boundary");
    }
    std::vector<int> owner(particles.size(), 0);
    std::set<std::string> ids;
    const auto claim = [&](std::size_t p, const std::string& id) {
        if (p >= particles.size()) {
            throw SceneError("'" + id + "' refers to missing particle " + std::to_string(p));
        }
        if (owner[p]++ != 0) {
            throw SceneError("particle " + std::to_string(p) + " is shared by several objects or groups");
        }
        if (!ids.insert(id).second) {
            throw SceneError("duplicate id '" + id + "'");
        }
    };
    for (const auto& obj : objects) {
        claim(obj.particle, obj.id);
        if (!(obj.bbox.half_extents.x() > 0.0) || !(obj.bbox.half_extents.y() > 0.0) ||
            !(obj.bbox.half_height > 0.0)) {
            throw SceneError("object '" + obj.id + "' has a non-positive extent");
        }
        for (const auto& r : obj.access) {
            if (r.half_extents.x() < 0.0 || r.half_extents.y() < 0.0) {
                throw SceneError("object '" + obj.id + "' has a negative accessibility extent");
            }
        }
    }
    std::vector<int> rigid_owner(objects.size(), 0);
    for (const auto& g : groups) {
        claim(g.particle, g.id);
        for (std::size_t m : g.members) {
            if (m >= objects.size()) {
                throw SceneError("group '" + g.id + "' has a dangling member");
            }
            if (g.rigidity == Rigidity::Rigid && rigid_owner[m]++ != 0) {
                throw SceneError("object '" + objects[m].id + "' is in several rigid groups");
            }
        }
        if (g.rigidity == Rigidity::Rigid && g.offsets.size() != g.members.size()) {
            throw SceneError("rigid group '" + g.id + "' needs one offset per member");
        }
        if (g.curve) {
            g.curve->validate();
            if (g.params.size() != g.members.size()) {
                throw SceneError("curve group '" + g.id + "' needs one parameter per member");
            }
            for (std::size_t i = 1; i < g.params.size(); ++i) {
                if (!(g.params[i] > g.params[i - 1])) {
                    throw SceneError("curve group '" + g.id + "' parameters must increase");
                }
            }
        }
    }
    for (std::size_t p = 0; p < particles.size(); ++p) {
        const auto& part = particles[p];
        if (owner[p] == 0) {
            throw SceneError("particle " + std::to_string(p) + " has no owner");
        }
        if (!is_finite(part.position) || !std::isfinite(part.z) || !std::isfinite(part.orientation)) {
            throw SceneError("particle " + std::to_string(p) + " has a non-finite pose");
        }
        if (part.orientation < 0.0 || part.orientation >= kTwoPi) {
            throw SceneError("particle " + std::to_string(p) + " orientation is not normalized");
        }
        if (part.inverse_mass == 0.0) {
            if (!std::isinf(part.mass)) {
                throw SceneError("particle " + std::to_string(p) + " has zero inverse mass but finite mass");
            }
        } else if (!(part.mass > 0.0) || std::abs(part.mass * part.inverse_mass - 1.0) > 1e-9) {
            throw SceneError("particle " + std::to_string(p) + " has inconsistent mass");
        }
    }
    for (std::size_t c = 0; c < constraints.size(); ++c) {
        const auto& con = constraints[c];
        const std::string where = "constraint " + std::to_string(c) + " (" + std::string(to_string(con.kind)) + ")";
        const std::size_t arity = expected_arity(con.kind);
        if (arity != 0 && con.participants.size() != arity) {
            throw SceneError(where + " expects " + std::to_string(arity) + " participants");
        }
        if (arity == 0 && con.participants.empty()) {
            throw SceneError(where + " has no participants");
        }
        if (con.kind == ConstraintKind::FocalSymmetry && con.participants.size() < 2) {
            throw SceneError(where + " needs a focal particle and at least one member");
        }
        for (std::size_t p : con.participants) {
            if (p >= particles.size()) {
                throw SceneError(where + " refers to missing particle " + std::to_string(p));
            }
        }
        if (arity == 2 && con.participants[0] == con.participants[1]) {
            throw SceneError(where + " relates a particle to itself");
        }
        if (!(con.weight > 0.0)) {
            throw SceneError(where + " has non-positive weight");
        }
        const auto& k = con.stiffness;
        if (!(k.initial >= 0.0 && k.initial <= 1.0) || !(k.current >= 0.0 && k.current <= 1.0)) {
            throw SceneError(where + " has stiffness outside [0, 1]");
        }
        if (!(k.rate >= 1.0)) {
            throw SceneError(where + " has schedule rate below 1");
        }
        if ((con.kind == ConstraintKind::TrafficLane || con.kind == ConstraintKind::FocalSymmetry) &&
            !(con.direction.norm() > 0.0)) {
            throw SceneError(where + " has a zero direction vector");
        }
        if (con.kind == ConstraintKind::Stacking) {
            for (std::size_t p : con.participants) {
                if (std::none_of(objects.begin(), objects.end(), [p](const auto& o) { return o.particle == p; })) {
                    throw SceneError(where + " must relate objects, not groups");
                }
            }
        }
    }
}

namespace {

bool near(double a, double b, double tol)
{
    if (std::isinf(a) || std::isinf(b)) {
        return a == b;
    }
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

bool near(const Vec2& a, const Vec2& b, double tol)
{
    return near(a.x(), b.x(), tol) && near(a.y(), b.y(), tol);
}

bool near_angle(double a, double b, double tol)
{
    return std::abs(angle_difference(a, b)) <= tol * 10.0;
}

bool near(const Pose& a, const Pose& b, double tol)
{
    return near(a.position, b.position, tol) && near(a.z, b.z, tol) && near_angle(a.orientation, b.orientation, tol);
}

bool near(const std::optional<Pose>& a, const std::optional<Pose>& b, double tol)
{
    if (a.has_value() != b.has_value()) {
        return false;
    }
    return !a || near(*a, *b, tol);
}

bool near(const BoundingBox& a, const BoundingBox& b, double tol)
{
    return near(a.half_extents, b.half_extents, tol) && near(a.half_height, b.half_height, tol);
}

bool near(const Stiffness& a, const Stiffness& b, double tol)
{
    return a.schedule == b.schedule && near(a.initial, b.initial, tol) && near(a.current, b.current, tol) &&
           near(a.rate, b.rate, tol);
}

} // namespace

bool approx_equal(const Scene& a, const Scene& b, double tol)
{
    if (a.name != b.name || a.collisions_enabled != b.collisions_enabled) {
        return false;
    }
    if (a.room.boundary.size() != b.room.boundary.size() || !near(a.room.centroid, b.room.centroid, tol)) {
        return false;
    }
    for (std::size_t i = 0; i < a.room.boundary.size(); ++i) {
        if (!near(a.room.boundary[i], b.room.boundary[i], tol)) {
            return false;
        }
    }
    if (a.particles.size() != b.particles.size() || a.objects.size() != b.objects.size() ||
        a.groups.size() != b.groups.size() || a.constraints.size() != b.constraints.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.particles.size(); ++i) {
        const auto& p = a.particles[i];
        const auto& q = b.particles[i];
        if (!near(p.pose(), q.pose(), tol) || !near(p.mass, q.mass, tol) || !near(p.inverse_mass, q.inverse_mass, tol)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
        const auto& o = a.objects[i];
        const auto& q = b.objects[i];
        if (o.id != q.id || o.label != q.label || o.particle != q.particle || o.fixed != q.fixed ||
            !near(o.bbox, q.bbox, tol) || !near(o.initial_pose, q.initial_pose, tol)) {
            return false;
        }
        for (std::size_t k = 0; k < 4; ++k) {
            if (!near(o.access[k].local_center, q.access[k].local_center, tol) ||
                !near(o.access[k].half_extents, q.access[k].half_extents, tol)) {
                return false;
            }
        }
    }
    for (std::size_t i = 0; i < a.groups.size(); ++i) {
        const auto& g = a.groups[i];
        const auto& h = b.groups[i];
        if (g.id != h.id || g.particle != h.particle || g.members != h.members || g.rigidity != h.rigidity ||
            g.fixed != h.fixed || g.curve.has_value() != h.curve.has_value() || g.offsets.size() != h.offsets.size() ||
            g.params.size() != h.params.size() || !near(g.bbox, h.bbox, tol) ||
            !near(g.initial_pose, h.initial_pose, tol) || !near(g.attachment, h.attachment, tol)) {
            return false;
        }
        if (g.curve && (g.curve->kind != h.curve->kind || !near(g.curve->a, h.curve->a, tol) ||
                        !near(g.curve->b, h.curve->b, tol) || !near(g.curve->center, h.curve->center, tol))) {
            return false;
        }
        for (std::size_t k = 0; k < g.offsets.size(); ++k) {
            if (!near(g.offsets[k], h.offsets[k], tol)) {
                return false;
            }
        }
        for (std::size_t k = 0; k < g.params.size(); ++k) {
            if (!near(g.params[k], h.params[k], tol)) {
                return false;
            }
        }
    }
    for (std::size_t i = 0; i < a.constraints.size(); ++i) {
        const auto& c = a.constraints[i];
        const auto& d = b.constraints[i];
        if (c.kind != d.kind || c.participants != d.participants || c.relation != d.relation ||
            c.first_goal != d.first_goal || c.second_goal != d.second_goal ||
            c.anchor_secondary != d.anchor_secondary || !near(c.distance, d.distance, tol) ||
            !near(c.target, d.target, tol) || !near(c.direction, d.direction, tol) ||
            !near_angle(c.angle_offset, d.angle_offset, tol) || !near(c.stiffness, d.stiffness, tol) ||
            !near(c.weight, d.weight, tol)) {
            return false;
        }
    }
    return true;
}

} // namespace layout
