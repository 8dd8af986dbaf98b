#pragma once

// Constraint projections. The free functions below are pure: they take the
// current particle states relevant to one constraint and return corrections,
// never touching the scene. `project` and `evaluate` dispatch a Constraint
// record onto them.

#include "layout/constraint.hpp"
#include "layout/geometry.hpp"
#include "layout/random.hpp"
#include "layout/scene.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace layout {

struct Correction {
    std::size_t particle = 0;
    Vec2 delta_position = Vec2::Zero();
    double delta_z = 0.0;
    double delta_orientation = 0.0;
};

using Corrections = std::vector<Correction>;

/// Position and inverse mass of one participant as seen by a constraint.
struct PointMass {
    std::size_t index = 0;
    Vec2 position = Vec2::Zero();
    double inverse_mass = 1.0;
    double z = 0.0;
};

/// Participant of a center-of-mass constraint; `weight` is its share in the
/// weighted center (mass, or visual weight for balance).
struct WeightedPoint {
    std::size_t index = 0;
    Vec2 position = Vec2::Zero();
    double weight = 1.0;
    double inverse_mass = 1.0;
};

struct GradientTerm {
    double inverse_mass;
    Vec2 gradient;
};

/// s = k C / Σ w_i |∇_i C|²; the correction to participant i is −s w_i ∇_i C.
/// Zero when no participant can move.
double scale_factor(double c, std::span<const GradientTerm> terms, double k);

/// Stiffness at iteration l ≥ 1.
double update_stiffness(const Stiffness& stiffness, int iteration);

Corrections project_pairwise_distance(const PointMass& i, const PointMass& j, double d, Relation relation,
                                      double k, const Vec2& fallback = Vec2::UnitX());

/// Pairwise equality distance to a focal particle; give the focal w = 0 to pin it.
Corrections project_focal_point(const PointMass& member, const PointMass& focal, double d, double k,
                                const Vec2& fallback = Vec2::UnitX());

/// Closest point to p on the line through `origin` along v.
Vec2 lane_projection(const Vec2& p, const Vec2& origin, const Vec2& v);

Corrections project_traffic_lane(const PointMass& i, const PointMass& origin, const Vec2& v, double d, double k);

Vec2 weighted_center(std::span<const WeightedPoint> points);

/// ½‖m − p̃‖² and its per-particle gradient m_j/M (m − p̃).
double heat_point_value(std::span<const WeightedPoint> points, const Vec2& target);
std::vector<Vec2> heat_point_gradient(std::span<const WeightedPoint> points, const Vec2& target);
Corrections project_heat_point(std::span<const WeightedPoint> points, const Vec2& target, double k);

/// Target of the symmetry constraint: the center of mass projected onto the
/// ray from `focal` along v.
Vec2 symmetry_target(std::span<const WeightedPoint> points, const Vec2& focal, const Vec2& v);
double focal_symmetry_value(std::span<const WeightedPoint> points, const Vec2& focal, const Vec2& v);
std::vector<Vec2> focal_symmetry_gradient(std::span<const WeightedPoint> points, const Vec2& focal, const Vec2& v);
Corrections project_focal_symmetry(std::span<const WeightedPoint> points, const Vec2& focal, const Vec2& v, double k);

/// Visual weights are ground-plane footprint areas; the centroid is static.
double visual_balance_value(std::span<const WeightedPoint> points, const Vec2& centroid);
std::vector<Vec2> visual_balance_gradient(std::span<const WeightedPoint> points, const Vec2& centroid);
Corrections project_visual_balance(std::span<const WeightedPoint> points, const Vec2& centroid, double k);

/// Signed distance of p from its nearest wall point minus d.
double wall_distance_value(const Vec2& p, const Room& room, double d);
Corrections project_wall_distance(const PointMass& i, const Room& room, double d, Relation relation, double k);

/// Accessibility view of one object: pose, size and face regions.
struct AccessBody {
    PointMass point;
    double orientation = 0.0;
    double bounding_radius = 0.0;
    double footprint_diagonal = 0.0;
    std::span<const AccessRegion> regions;
};

Vec2 access_center(const AccessBody& body, std::size_t face);
/// Faces of j whose region overlaps i's bounding circle, as a bit mask with
/// bit f set for face f.
std::uint8_t active_access_faces(const AccessBody& i, const AccessBody& j);
/// Root-sum-square clearance violation over active faces (0 when inactive).
double accessibility_violation(const AccessBody& i, const AccessBody& j);
Corrections project_accessibility(const AccessBody& i, const AccessBody& j, double k);

Corrections project_collision(const PointMass& i, double ri, const PointMass& j, double rj, double k,
                              const Vec2& fallback = Vec2::UnitX());

/// Extra collision between the wall points nearest to two colliding,
/// wall-bound objects; the ghost corrections transfer to the objects.
Corrections project_wall_ghost_collision(const PointMass& i, double ri, const PointMass& j, double rj,
                                         const Room& room, double k, const Vec2& fallback = Vec2::UnitX());

/// k·Δθ with Δθ the shortest signed rotation onto `desired`.
double orientation_correction(double theta, double desired, double k);

Corrections project_pairwise_orientation(std::size_t i, double theta_i, std::optional<double> desired_i,
                                         std::size_t j, double theta_j, std::optional<double> desired_j,
                                         double k);

/// Desired yaw for a wall orientation constraint: wall tangent + offset. An
/// offset that is a multiple of π means "parallel" and accepts either
/// direction along the wall.
double wall_orientation_target(double theta, const Vec2& p, const Room& room, double offset);
Corrections project_wall_orientation(std::size_t i, double theta, const Vec2& p, const Room& room, double offset,
                                     double k);

/// Top sits on bottom: z_top = z_bottom + (h_bottom + h_top)/2 and matching
/// ground-plane coordinates.
Corrections project_stacking(const PointMass& bottom, double height_bottom, const PointMass& top, double height_top,
                             double k);

/// Clearance of a bounding circle from the boundary (negative when it
/// crosses a wall or the center is outside).
double boundary_clearance(const Vec2& p, double r, const Room& room);

struct BoundaryResult {
    Corrections corrections;
    bool clamped_to_centroid = false;
};

BoundaryResult project_boundary(const PointMass& i, double r, const Room& room, double k = 1.0);

// --- dispatch ---------------------------------------------------------------

/// Per-particle lookups derived from a scene.
struct SceneIndex {
    explicit SceneIndex(const Scene& scene);

    std::vector<std::size_t> root;                   ///< particle receiving corrections
    std::vector<std::optional<std::size_t>> object;  ///< owning object, if any
    std::vector<std::optional<std::size_t>> group;   ///< owning group, if any
    std::vector<std::optional<std::size_t>> rigid_group; ///< rigid group this particle moves with
    std::vector<double> radius;                      ///< bounding radius (objects)
    std::vector<double> weight;                      ///< finite mass for center-of-mass terms
    std::vector<double> visual_weight;               ///< footprint area
    std::vector<bool> wall_bound;                    ///< carries a wall-distance constraint
    std::vector<std::size_t> stack;                  ///< stacking component representative
    std::vector<std::size_t> object_particles;
    double max_radius = 0.0;
    double max_access_reach = 0.0;

    /// Pairs that never collide: same rigid body or same stack.
    bool exempt(std::size_t a, std::size_t b) const { return root[a] == root[b] || stack[a] == stack[b]; }
};

/// Draws a direction from the run's RNG when two points coincide and counts
/// how often that happened.
class DirectionSource {
public:
    explicit DirectionSource(Rng* rng = nullptr) : rng_(rng) {}

    Vec2 separation(const Vec2& a, const Vec2& b);
    std::size_t events() const { return events_; }

private:
    Rng* rng_;
    std::size_t events_ = 0;
};

/// Raw constraint function value C for the current state.
double evaluate(const Constraint& c, const Scene& scene, const SceneIndex& index, std::span<const Particle> particles);

/// Energy contribution: |C| for equalities, max(0, −C) for inequalities.
double violation(const Constraint& c, double value);

Corrections project(const Constraint& c, const Scene& scene, const SceneIndex& index,
                    std::span<const Particle> particles, double k, DirectionSource& directions);

/// PointMass for a participant, using its rigid root's inverse mass.
PointMass point_mass(const SceneIndex& index, std::span<const Particle> particles, std::size_t particle);

AccessBody access_body(const Scene& scene, const SceneIndex& index, std::span<const Particle> particles,
                       std::size_t object);

} // namespace layout
