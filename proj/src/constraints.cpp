#include "layout/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace layout {

double scale_factor(double c, std::span<const GradientTerm> terms, double k)
{
    double denom = 0.0;
    for (const auto& t : terms) {
        denom += t.inverse_mass * t.gradient.squaredNorm();
    }
    if (!(denom > 0.0)) {
        return 0.0;
    }
    return k * c / denom;
}

double update_stiffness(const Stiffness& stiffness, int iteration)
{
    if (iteration < 1) {
        throw std::invalid_argument("stiffness iteration must be >= 1");
    }
    const double base = 1.0 - stiffness.initial;
    const double exponent = stiffness.rate / static_cast<double>(iteration);
    double k = stiffness.initial;
    switch (stiffness.schedule) {
    case Schedule::Decreasing:
        k = 1.0 - std::pow(base, exponent);
        break;
    case Schedule::Increasing:
        k = std::pow(base, exponent);
        break;
    case Schedule::Constant:
        break;
    }
    return std::clamp(k, 0.0, 1.0);
}

namespace {

// Two-body split along the unit direction n for constraint value c.
Corrections split_two_body(const PointMass& i, const PointMass& j, const Vec2& n, double c, double k)
{
    const double w = i.inverse_mass + j.inverse_mass;
    if (!(w > 0.0) || c == 0.0) {
        return {};
    }
    Corrections out;
    out.reserve(2);
    if (i.inverse_mass > 0.0) {
        out.push_back({i.index, -k * i.inverse_mass * c / w * n});
    }
    if (j.inverse_mass > 0.0) {
        out.push_back({j.index, k * j.inverse_mass * c / w * n});
    }
    return out;
}

bool inactive(Relation relation, double c)
{
    return relation == Relation::Inequality && c >= 0.0;
}

double total_weight(std::span<const WeightedPoint> points)
{
    double m = 0.0;
    for (const auto& p : points) {
        m += p.weight;
    }
    return m;
}

// Moves the weighted center by −k·e. The gradient direction is that of
// ½‖e‖², scaled by the norm form ‖e‖ so the step is exact along it.
Corrections project_center(std::span<const WeightedPoint> points, const Vec2& e, double k)
{
    const double norm = e.norm();
    const double total = total_weight(points);
    if (norm == 0.0 || !(total > 0.0)) {
        return {};
    }
    const Vec2 dir = e / norm;
    std::vector<GradientTerm> terms;
    terms.reserve(points.size());
    for (const auto& p : points) {
        terms.push_back({p.inverse_mass, (p.weight / total) * dir});
    }
    const double s = scale_factor(norm, terms, k);
    if (s == 0.0) {
        return {};
    }
    Corrections out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].inverse_mass > 0.0) {
            out.push_back({points[i].index, -s * terms[i].inverse_mass * terms[i].gradient});
        }
    }
    return out;
}

std::vector<Vec2> center_gradient(std::span<const WeightedPoint> points, const Vec2& e)
{
    const double total = total_weight(points);
    std::vector<Vec2> g;
    g.reserve(points.size());
    for (const auto& p : points) {
        g.push_back((p.weight / total) * e);
    }
    return g;
}

} // namespace

Corrections project_pairwise_distance(const PointMass& i, const PointMass& j, double d, Relation relation,
                                      double k, const Vec2& fallback)
{
    const Vec2 pij = i.position - j.position;
    const double len = pij.norm();
    const double c = len - d;
    if (inactive(relation, c)) {
        return {};
    }
    const Vec2 n = len < 1e-9 ? fallback.normalized() : Vec2(pij / len);
    return split_two_body(i, j, n, c, k);
}

Corrections project_focal_point(const PointMass& member, const PointMass& focal, double d, double k,
                                const Vec2& fallback)
{
    return project_pairwise_distance(member, focal, d, Relation::Equality, k, fallback);
}

Vec2 lane_projection(const Vec2& p, const Vec2& origin, const Vec2& v)
{
    return origin + ((p - origin).dot(v) / v.dot(v)) * v;
}

Corrections project_traffic_lane(const PointMass& i, const PointMass& origin, const Vec2& v, double d, double k)
{
    const Vec2 ghost = lane_projection(i.position, origin.position, v);
    const Vec2 off = i.position - ghost;
    const double len = off.norm();
    const double c = len - d;
    if (c >= 0.0) {
        return {};
    }
    const Vec2 n = len < 1e-9 ? Vec2(perp(v).normalized()) : Vec2(off / len);
    return split_two_body(i, origin, n, c, k);
}

Vec2 weighted_center(std::span<const WeightedPoint> points)
{
    Vec2 m = Vec2::Zero();
    double total = 0.0;
    for (const auto& p : points) {
        m += p.weight * p.position;
        total += p.weight;
    }
    return total > 0.0 ? Vec2(m / total) : m;
}

double heat_point_value(std::span<const WeightedPoint> points, const Vec2& target)
{
    return 0.5 * (weighted_center(points) - target).squaredNorm();
}

std::vector<Vec2> heat_point_gradient(std::span<const WeightedPoint> points, const Vec2& target)
{
    return center_gradient(points, weighted_center(points) - target);
}

Corrections project_heat_point(std::span<const WeightedPoint> points, const Vec2& target, double k)
{
    return project_center(points, weighted_center(points) - target, k);
}

Vec2 symmetry_target(std::span<const WeightedPoint> points, const Vec2& focal, const Vec2& v)
{
    const Vec2 m = weighted_center(points);
    const double t = std::max(0.0, (m - focal).dot(v) / v.dot(v));
    return focal + t * v;
}

double focal_symmetry_value(std::span<const WeightedPoint> points, const Vec2& focal, const Vec2& v)
{
    return 0.5 * (weighted_center(points) - symmetry_target(points, focal, v)).squaredNorm();
}

std::vector<Vec2> focal_symmetry_gradient(std::span<const WeightedPoint> points, const Vec2& focal, const Vec2& v)
{
    // m − target is orthogonal to v on the ray and the target is fixed past
    // its origin, so the moving target drops out of the gradient.
    return center_gradient(points, weighted_center(points) - symmetry_target(points, focal, v));
}

Corrections project_focal_symmetry(std::span<const WeightedPoint> points, const Vec2& focal, const Vec2& v, double k)
{
    return project_center(points, weighted_center(points) - symmetry_target(points, focal, v), k);
}

double visual_balance_value(std::span<const WeightedPoint> points, const Vec2& centroid)
{
    return heat_point_value(points, centroid);
}

std::vector<Vec2> visual_balance_gradient(std::span<const WeightedPoint> points, const Vec2& centroid)
{
    return heat_point_gradient(points, centroid);
}

Corrections project_visual_balance(std::span<const WeightedPoint> points, const Vec2& centroid, double k)
{
    return project_heat_point(points, centroid, k);
}

double wall_distance_value(const Vec2& p, const Room& room, double d)
{
    return signed_boundary_distance(room, p) - d;
}

Corrections project_wall_distance(const PointMass& i, const Room& room, double d, Relation relation, double k)
{
    if (i.inverse_mass == 0.0) {
        return {};
    }
    const WallPoint wall = nearest_wall_point(room, i.position);
    const bool inside = room.contains(i.position);
    const double signed_dist = inside ? wall.distance : -wall.distance;
    const double c = signed_dist - d;
    if (inactive(relation, c) || c == 0.0) {
        return {};
    }
    Vec2 n = wall.normal;
    if (wall.distance > 1e-12) {
        n = (i.position - wall.point) / wall.distance;
        if (!inside) {
            n = -n;
        }
    }
    return {{i.index, -k * c * n}};
}

Vec2 access_center(const AccessBody& body, std::size_t face)
{
    return body.point.position + rotate(body.regions[face].local_center, body.orientation);
}

std::uint8_t active_access_faces(const AccessBody& i, const AccessBody& j)
{
    const Vec2 rel = i.point.position - j.point.position;
    double reach = 0.0;
    for (const auto& region : j.regions) {
        if (region.enabled()) {
            reach = std::max(reach, region.local_center.norm() + region.half_extents.norm());
        }
    }
    if (reach == 0.0 || rel.norm() >= reach + i.bounding_radius) {
        return 0;
    }
    // Overlap tests run in j's frame, so the rotation is computed once.
    const Vec2 local = rotate(rel, -j.orientation);
    const double r2 = i.bounding_radius * i.bounding_radius;
    std::uint8_t mask = 0;
    for (std::size_t f = 0; f < j.regions.size(); ++f) {
        const auto& region = j.regions[f];
        if (!region.enabled()) {
            continue;
        }
        const Vec2 q = local - region.local_center;
        const Vec2 clamped = q.cwiseMax(-region.half_extents).cwiseMin(region.half_extents);
        if ((q - clamped).squaredNorm() < r2) {
            mask |= static_cast<std::uint8_t>(1U << f);
        }
    }
    return mask;
}

double accessibility_violation(const AccessBody& i, const AccessBody& j)
{
    double sum = 0.0;
    const std::uint8_t faces = active_access_faces(i, j);
    for (std::size_t f = 0; f < j.regions.size(); ++f) {
        if (!(faces >> f & 1U)) {
            continue;
        }
        const double d = i.footprint_diagonal + j.regions[f].diagonal();
        const double gap = (i.point.position - access_center(j, f)).norm() - d;
        if (gap < 0.0) {
            sum += gap * gap;
        }
    }
    return std::sqrt(sum);
}

Corrections project_accessibility(const AccessBody& i, const AccessBody& j, double k)
{
    PointMass pi = i.point;
    AccessBody body_j = j;
    bool moved = false;
    const std::uint8_t faces = active_access_faces(i, j);
    for (std::size_t f = 0; f < j.regions.size(); ++f) {
        if (!(faces >> f & 1U)) {
            continue;
        }
        const Vec2 a = access_center(body_j, f);
        const PointMass ghost{j.point.index, a, j.point.inverse_mass};
        const double d = i.footprint_diagonal + j.regions[f].diagonal();
        const Vec2 fallback = perp(Vec2(a - body_j.point.position)).normalized();
        for (const auto& corr : project_pairwise_distance(pi, ghost, d, Relation::Inequality, k,
                                                          fallback.allFinite() ? fallback : Vec2::UnitX())) {
            if (corr.particle == pi.index) {
                pi.position += corr.delta_position;
            } else {
                body_j.point.position += corr.delta_position;
            }
            moved = true;
        }
    }
    if (!moved) {
        return {};
    }
    Corrections out;
    if (i.point.inverse_mass > 0.0) {
        out.push_back({i.point.index, pi.position - i.point.position});
    }
    if (j.point.inverse_mass > 0.0) {
        out.push_back({j.point.index, body_j.point.position - j.point.position});
    }
    return out;
}

Corrections project_collision(const PointMass& i, double ri, const PointMass& j, double rj, double k,
                              const Vec2& fallback)
{
    return project_pairwise_distance(i, j, ri + rj, Relation::Inequality, k, fallback);
}

Corrections project_wall_ghost_collision(const PointMass& i, double ri, const PointMass& j, double rj,
                                         const Room& room, double k, const Vec2& fallback)
{
    if ((i.position - j.position).norm() >= ri + rj) {
        return {};
    }
    const PointMass gi{i.index, nearest_wall_point(room, i.position).point, i.inverse_mass};
    const PointMass gj{j.index, nearest_wall_point(room, j.position).point, j.inverse_mass};
    return project_pairwise_distance(gi, gj, ri + rj, Relation::Inequality, k, fallback);
}

double orientation_correction(double theta, double desired, double k)
{
    return k * angle_difference(theta, desired);
}

Corrections project_pairwise_orientation(std::size_t i, double theta_i, std::optional<double> desired_i,
                                         std::size_t j, double theta_j, std::optional<double> desired_j,
                                         double k)
{
    Corrections out;
    if (desired_i) {
        const double d = orientation_correction(theta_i, *desired_i, k);
        if (d != 0.0) {
            out.push_back({i, Vec2::Zero(), 0.0, d});
        }
    }
    if (desired_j) {
        const double d = orientation_correction(theta_j, *desired_j, k);
        if (d != 0.0) {
            out.push_back({j, Vec2::Zero(), 0.0, d});
        }
    }
    return out;
}

double wall_orientation_target(double theta, const Vec2& p, const Room& room, double offset)
{
    const double desired = normalize_angle(nearest_wall_point(room, p).tangent_angle + offset);
    const bool axial = std::abs(std::sin(offset)) < 1e-12;
    if (axial) {
        const double flipped = normalize_angle(desired + kPi);
        if (std::abs(angle_difference(theta, flipped)) < std::abs(angle_difference(theta, desired))) {
            return flipped;
        }
    }
    return desired;
}

Corrections project_wall_orientation(std::size_t i, double theta, const Vec2& p, const Room& room, double offset,
                                     double k)
{
    const double d = orientation_correction(theta, wall_orientation_target(theta, p, room, offset), k);
    if (d == 0.0) {
        return {};
    }
    return {{i, Vec2::Zero(), 0.0, d}};
}

Corrections project_stacking(const PointMass& bottom, double height_bottom, const PointMass& top, double height_top,
                             double k)
{
    const double w = bottom.inverse_mass + top.inverse_mass;
    if (!(w > 0.0)) {
        return {};
    }
    const double h = 0.5 * (height_bottom + height_top);
    const double cz = top.z - (bottom.z + h);
    const Vec2 cxy = top.position - bottom.position;
    Correction cb{bottom.index};
    Correction ct{top.index};
    cb.delta_z = k * bottom.inverse_mass * cz / w;
    ct.delta_z = -k * top.inverse_mass * cz / w;
    cb.delta_position = k * bottom.inverse_mass / w * cxy;
    ct.delta_position = -k * top.inverse_mass / w * cxy;
    Corrections out;
    if (bottom.inverse_mass > 0.0) {
        out.push_back(cb);
    }
    if (top.inverse_mass > 0.0) {
        out.push_back(ct);
    }
    return out;
}

double boundary_clearance(const Vec2& p, double r, const Room& room)
{
    return signed_boundary_distance(room, p) - r;
}

BoundaryResult project_boundary(const PointMass& i, double r, const Room& room, double k)
{
    BoundaryResult result;
    if (i.inverse_mass == 0.0) {
        return result;
    }
    const auto& poly = room.boundary;
    const std::size_t n = poly.size();
    Vec2 p = i.position;
    constexpr int kSweeps = 8;
    constexpr double kSlack = 1e-12;
    for (int sweep = 0; sweep < kSweeps; ++sweep) {
        bool changed = false;
        if (!room.contains(p)) {
            const WallPoint wall = nearest_wall_point(room, p);
            p = wall.point + r * wall.normal;
            changed = true;
        }
        for (std::size_t s = 0; s < n; ++s) {
            const Vec2& a = poly[s];
            const Vec2& b = poly[(s + 1) % n];
            const auto sp = closest_point_on_segment(p, a, b);
            const Vec2 off = p - sp.point;
            const double dist = off.norm();
            if (dist < r - kSlack) {
                const Vec2 dir = dist > 1e-12 ? Vec2(off / dist) : Vec2(perp(Vec2(b - a)).normalized());
                p = sp.point + r * dir;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
    }
    if (boundary_clearance(p, r, room) < -1e-9) {
        p = room.centroid;
        result.clamped_to_centroid = true;
    }
    const Vec2 delta = k * (p - i.position);
    if (delta.squaredNorm() > 0.0) {
        result.corrections.push_back({i.index, delta});
    }
    return result;
}

// --- dispatch ---------------------------------------------------------------

SceneIndex::SceneIndex(const Scene& scene)
{
    const std::size_t n = scene.particles.size();
    root.resize(n);
    object.assign(n, std::nullopt);
    group.assign(n, std::nullopt);
    rigid_group.assign(n, std::nullopt);
    radius.assign(n, 0.0);
    weight.assign(n, 1.0);
    visual_weight.assign(n, 0.0);
    wall_bound.assign(n, false);
    for (std::size_t p = 0; p < n; ++p) {
        root[p] = p;
    }
    for (std::size_t o = 0; o < scene.objects.size(); ++o) {
        const auto& obj = scene.objects[o];
        const std::size_t p = obj.particle;
        object[p] = o;
        radius[p] = obj.bbox.bounding_radius();
        weight[p] = std::isfinite(scene.particles[p].mass) ? scene.particles[p].mass : obj.bbox.volume();
        visual_weight[p] = obj.bbox.footprint_area();
        object_particles.push_back(p);
        max_radius = std::max(max_radius, radius[p]);
        for (const auto& region : obj.access) {
            if (region.enabled()) {
                max_access_reach = std::max(max_access_reach, region.local_center.norm() + 0.5 * region.diagonal());
            }
        }
    }
    for (std::size_t g = 0; g < scene.groups.size(); ++g) {
        const auto& grp = scene.groups[g];
        const std::size_t p = grp.particle;
        group[p] = g;
        weight[p] = std::isfinite(scene.particles[p].mass) ? scene.particles[p].mass : grp.bbox.volume();
        visual_weight[p] = grp.bbox.footprint_area();
        if (grp.rigidity == Rigidity::Rigid) {
            rigid_group[p] = g;
            for (std::size_t m : grp.members) {
                const std::size_t mp = scene.objects[m].particle;
                root[mp] = p;
                rigid_group[mp] = g;
            }
        }
    }
    stack.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        stack[p] = p;
    }
    const auto find = [this](std::size_t p) {
        while (stack[p] != p) {
            p = stack[p] = stack[stack[p]];
        }
        return p;
    };
    for (const auto& c : scene.constraints) {
        if (c.kind == ConstraintKind::WallDistance) {
            wall_bound[c.participants[0]] = true;
        }
        if (c.kind == ConstraintKind::Stacking) {
            const std::size_t a = find(c.participants[0]);
            const std::size_t b = find(c.participants[1]);
            stack[std::max(a, b)] = std::min(a, b);
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        stack[p] = find(p);
    }
}

Vec2 DirectionSource::separation(const Vec2& a, const Vec2& b)
{
    if ((a - b).norm() >= 1e-9) {
        return (a - b).normalized();
    }
    ++events_;
    if (rng_ == nullptr) {
        return Vec2::UnitX();
    }
    return direction(rng_->uniform(0.0, kTwoPi));
}

PointMass point_mass(const SceneIndex& index, std::span<const Particle> particles, std::size_t particle)
{
    const auto& p = particles[particle];
    return {particle, p.position, particles[index.root[particle]].inverse_mass, p.z};
}

AccessBody access_body(const Scene& scene, const SceneIndex& index, std::span<const Particle> particles,
                       std::size_t object)
{
    const auto& obj = scene.objects[object];
    AccessBody body;
    body.point = point_mass(index, particles, obj.particle);
    body.orientation = particles[obj.particle].orientation;
    body.bounding_radius = obj.bbox.bounding_radius();
    body.footprint_diagonal = obj.bbox.footprint_diagonal();
    body.regions = std::span<const AccessRegion>(obj.access);
    return body;
}

namespace {

std::vector<WeightedPoint> weighted_points(const SceneIndex& index, std::span<const Particle> particles,
                                           std::span<const std::size_t> ids, bool visual)
{
    std::vector<WeightedPoint> pts;
    pts.reserve(ids.size());
    for (std::size_t p : ids) {
        pts.push_back({p, particles[p].position, visual ? index.visual_weight[p] : index.weight[p],
                       particles[index.root[p]].inverse_mass});
    }
    return pts;
}

std::optional<double> desired_yaw(OrientationGoal goal, const Particle& self, const Particle& other, double offset)
{
    switch (goal) {
    case OrientationGoal::None:
        return std::nullopt;
    case OrientationGoal::FaceOther: {
        const Vec2 d = other.position - self.position;
        if (d.norm() < 1e-12) {
            return std::nullopt;
        }
        return normalize_angle(std::atan2(d.y(), d.x()) + offset);
    }
    case OrientationGoal::MatchOther:
        return normalize_angle(other.orientation + offset);
    }
    return std::nullopt;
}

double object_height(const Scene& scene, const SceneIndex& index, std::size_t particle)
{
    return scene.objects[*index.object[particle]].bbox.height();
}

} // namespace

double evaluate(const Constraint& c, const Scene& scene, const SceneIndex& index, std::span<const Particle> particles)
{
    const auto& ps = c.participants;
    const auto pos = [&](std::size_t k) -> const Vec2& { return particles[ps[k]].position; };
    switch (c.kind) {
    case ConstraintKind::PairwiseDistance:
    case ConstraintKind::FocalPoint:
        return (pos(0) - pos(1)).norm() - c.distance;
    case ConstraintKind::TrafficLane:
        return (pos(0) - lane_projection(pos(0), pos(1), c.direction)).norm() - c.distance;
    case ConstraintKind::HeatPoint:
        return heat_point_value(weighted_points(index, particles, ps, false), c.target);
    case ConstraintKind::FocalSymmetry:
        return focal_symmetry_value(weighted_points(index, particles, std::span(ps).subspan(1), false), pos(0),
                                    c.direction);
    case ConstraintKind::VisualBalance:
        return visual_balance_value(weighted_points(index, particles, ps, true), scene.room.centroid);
    case ConstraintKind::WallDistance:
        return wall_distance_value(pos(0), scene.room, c.distance);
    case ConstraintKind::Accessibility:
        return -accessibility_violation(access_body(scene, index, particles, *index.object[ps[0]]),
                                        access_body(scene, index, particles, *index.object[ps[1]]));
    case ConstraintKind::Collision:
        return (pos(0) - pos(1)).norm() - (index.radius[ps[0]] + index.radius[ps[1]]);
    case ConstraintKind::PairwiseOrientation: {
        const auto& a = particles[ps[0]];
        const auto& b = particles[ps[1]];
        double sum = 0.0;
        if (auto d = desired_yaw(c.first_goal, a, b, c.angle_offset)) {
            sum += std::pow(angle_difference(a.orientation, *d), 2);
        }
        if (auto d = desired_yaw(c.second_goal, b, a, c.angle_offset)) {
            sum += std::pow(angle_difference(b.orientation, *d), 2);
        }
        return std::sqrt(sum);
    }
    case ConstraintKind::WallOrientation: {
        const auto& a = particles[ps[0]];
        return std::abs(
            angle_difference(a.orientation, wall_orientation_target(a.orientation, a.position, scene.room, c.angle_offset)));
    }
    case ConstraintKind::Stacking: {
        const auto& bottom = particles[ps[0]];
        const auto& top = particles[ps[1]];
        const double h = 0.5 * (object_height(scene, index, ps[0]) + object_height(scene, index, ps[1]));
        const double cz = top.z - (bottom.z + h);
        return std::sqrt(cz * cz + (top.position - bottom.position).squaredNorm());
    }
    case ConstraintKind::Boundary:
        return boundary_clearance(pos(0), index.radius[ps[0]], scene.room);
    }
    return 0.0;
}

double violation(const Constraint& c, double value)
{
    if (c.relation == Relation::Inequality) {
        return std::max(0.0, -value);
    }
    return std::abs(value);
}

Corrections project(const Constraint& c, const Scene& scene, const SceneIndex& index,
                    std::span<const Particle> particles, double k, DirectionSource& directions)
{
    const auto& ps = c.participants;
    const auto pair = [&]() {
        PointMass a = point_mass(index, particles, ps[0]);
        PointMass b = point_mass(index, particles, ps[1]);
        if (c.anchor_secondary) {
            b.inverse_mass = 0.0;
        }
        return std::pair{a, b};
    };
    const auto shared_root = [&]() { return ps.size() >= 2 && index.root[ps[0]] == index.root[ps[1]]; };
    switch (c.kind) {
    case ConstraintKind::PairwiseDistance:
    case ConstraintKind::FocalPoint: {
        if (shared_root()) {
            return {};
        }
        auto [a, b] = pair();
        return project_pairwise_distance(a, b, c.distance, c.relation, k, directions.separation(a.position, b.position));
    }
    case ConstraintKind::TrafficLane: {
        if (shared_root()) {
            return {};
        }
        auto [a, b] = pair();
        return project_traffic_lane(a, b, c.direction, c.distance, k);
    }
    case ConstraintKind::HeatPoint:
        return project_heat_point(weighted_points(index, particles, ps, false), c.target, k);
    case ConstraintKind::FocalSymmetry:
        return project_focal_symmetry(weighted_points(index, particles, std::span(ps).subspan(1), false),
                                      particles[ps[0]].position, c.direction, k);
    case ConstraintKind::VisualBalance:
        return project_visual_balance(weighted_points(index, particles, ps, true), scene.room.centroid, k);
    case ConstraintKind::WallDistance:
        return project_wall_distance(point_mass(index, particles, ps[0]), scene.room, c.distance, c.relation, k);
    case ConstraintKind::Accessibility:
        if (index.exempt(ps[0], ps[1])) {
            return {};
        }
        return project_accessibility(access_body(scene, index, particles, *index.object[ps[0]]),
                                     access_body(scene, index, particles, *index.object[ps[1]]), k);
    case ConstraintKind::Collision: {
        if (index.exempt(ps[0], ps[1])) {
            return {};
        }
        auto [a, b] = pair();
        return project_collision(a, index.radius[ps[0]], b, index.radius[ps[1]], k,
                                 directions.separation(a.position, b.position));
    }
    case ConstraintKind::PairwiseOrientation: {
        const auto& a = particles[ps[0]];
        const auto& b = particles[ps[1]];
        return project_pairwise_orientation(ps[0], a.orientation, desired_yaw(c.first_goal, a, b, c.angle_offset),
                                            ps[1], b.orientation, desired_yaw(c.second_goal, b, a, c.angle_offset), k);
    }
    case ConstraintKind::WallOrientation: {
        const auto& a = particles[ps[0]];
        return project_wall_orientation(ps[0], a.orientation, a.position, scene.room, c.angle_offset, k);
    }
    case ConstraintKind::Stacking: {
        if (shared_root()) {
            return {};
        }
        auto [a, b] = pair();
        return project_stacking(a, object_height(scene, index, ps[0]), b, object_height(scene, index, ps[1]), k);
    }
    case ConstraintKind::Boundary:
        return project_boundary(point_mass(index, particles, ps[0]), index.radius[ps[0]], scene.room, k).corrections;
    }
    return {};
}

} // namespace layout
