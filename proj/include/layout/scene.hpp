#pragma once

#include "layout/constraint.hpp"
#include "layout/geometry.hpp"

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace layout {

inline constexpr double kInfiniteMass = std::numeric_limits<double>::infinity();

class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Pose {
    Vec2 position = Vec2::Zero();
    double z = 0.0;
    double orientation = 0.0;

    friend bool operator==(const Pose&, const Pose&) = default;
};

/// Oriented point mass standing in for one object or one group.
struct Particle {
    Vec2 position = Vec2::Zero();
    double z = 0.0;
    double orientation = 0.0; ///< yaw in [0, 2π); forward axis is (cos, sin)
    double mass = 1.0;
    double inverse_mass = 1.0;

    /// Sets mass and inverse mass together; kInfiniteMass pins the particle.
    void set_mass(double m);
    bool is_fixed() const { return inverse_mass == 0.0; }
    Pose pose() const { return {position, z, orientation}; }
    void set_pose(const Pose& p);

    friend bool operator==(const Particle&, const Particle&) = default;
};

/// Object-frame box: x is the forward (depth) axis, y the lateral axis.
struct BoundingBox {
    Vec2 half_extents = Vec2(0.5, 0.5);
    double half_height = 0.5;

    double footprint_diagonal() const { return 2.0 * half_extents.norm(); }
    double bounding_radius() const { return half_extents.norm(); }
    double footprint_area() const { return 4.0 * half_extents.x() * half_extents.y(); }
    double volume() const { return 8.0 * half_extents.x() * half_extents.y() * half_height; }
    double height() const { return 2.0 * half_height; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Faces in the fixed back/left/front/right order.
enum class Face : std::uint8_t { Back = 0, Left = 1, Front = 2, Right = 3 };

/// Clearance cuboid attached to one face. A zero-extent region is disabled.
struct AccessRegion {
    Vec2 local_center = Vec2::Zero();
    Vec2 half_extents = Vec2::Zero();

    double diagonal() const { return 2.0 * half_extents.norm(); }
    bool enabled() const { return half_extents.x() > 0.0 && half_extents.y() > 0.0; }

    friend bool operator==(const AccessRegion&, const AccessRegion&) = default;
};

/// Region of the given depth spanning the whole face of `box`.
AccessRegion face_region(const BoundingBox& box, Face face, double depth);

struct LayoutObject {
    std::string id;
    std::string label;
    std::size_t particle = 0;
    BoundingBox bbox;
    std::array<AccessRegion, 4> access{};
    std::optional<Pose> initial_pose; ///< authored start pose; random otherwise
    bool fixed = false;               ///< infinite mass, keeps its authored pose

    bool has_access_regions() const;
};

enum class CurveKind : std::uint8_t { Segment, Arc };

/// Segment a→b, or the counterclockwise arc from a to b around `center`.
struct Curve {
    CurveKind kind = CurveKind::Segment;
    Vec2 a = Vec2::Zero();
    Vec2 b = Vec2::UnitX();
    Vec2 center = Vec2::Zero();

    static Curve segment(const Vec2& a, const Vec2& b);
    static Curve arc(const Vec2& a, const Vec2& b, const Vec2& center);

    Vec2 point_at(double t) const;
    double length() const;
    double sweep() const; ///< arc sweep angle in (0, 2π]
    void validate() const;

    friend bool operator==(const Curve&, const Curve&) = default;
};

struct CurvePoint {
    Vec2 point;
    double t;
};

CurvePoint closest_point_on_curve(const Curve& curve, const Vec2& p);

Curve transformed(const Curve& curve, const Pose& frame);

enum class Rigidity : std::uint8_t { Rigid, Nonrigid };

struct Group {
    std::string id;
    std::size_t particle = 0;
    std::vector<std::size_t> members; ///< object indices
    Rigidity rigidity = Rigidity::Nonrigid;
    std::optional<Curve> curve;       ///< in the group frame
    std::vector<Pose> offsets;        ///< rigid: member pose in the group frame
    std::vector<double> params;       ///< curve: member parameter, increasing
    BoundingBox bbox;
    std::optional<Pose> initial_pose;
    bool fixed = false;
    Stiffness attachment{1.0, 1.0, Schedule::Constant, 10.0};
};

struct Room {
    Polygon boundary; ///< counterclockwise
    Vec2 centroid = Vec2::Zero();

    /// Validates simplicity, orients counterclockwise and fills the centroid.
    static Room from_polygon(Polygon boundary);
    static Room rectangle(double width, double depth);

    double area() const;
    Aabb bounds() const;
    bool contains(const Vec2& p) const;
};

struct WallPoint {
    Vec2 point;
    Vec2 normal;          ///< points into the room
    double tangent_angle; ///< direction of the wall segment, [0, 2π)
    std::size_t segment;
    double distance;
};

/// Closest boundary point; ties go to the first segment in storage order.
WallPoint nearest_wall_point(const Room& room, const Vec2& p);

/// Signed clearance of p from the boundary: positive inside.
double signed_boundary_distance(const Room& room, const Vec2& p);

double mass_from_bbox(const BoundingBox& box, double density = 1.0);

struct Scene {
    std::string name;
    Room room;
    std::vector<LayoutObject> objects;
    std::vector<Particle> particles;
    std::vector<Group> groups;
    std::vector<Constraint> constraints;
    bool collisions_enabled = true;

    /// Throws SceneError on any broken reference or invariant.
    void validate() const;

    std::optional<std::size_t> find_object(std::string_view id) const;
    std::optional<std::size_t> find_group(std::string_view id) const;
    /// Particle index of an object or group id.
    std::optional<std::size_t> find_particle(std::string_view id) const;
    /// Id of the object or group owning a particle.
    std::string particle_name(std::size_t particle) const;
};

/// Element-wise equality with a tolerance on floating-point fields.
bool approx_equal(const Scene& a, const Scene& b, double tol = 1e-9);

/// World pose of a rigid member given its group pose and stored offset.
Pose compose(const Pose& frame, const Pose& local);
/// Inverse of compose: local pose of `world` relative to `frame`.
Pose relative(const Pose& frame, const Pose& world);

/// Union of member boxes in the group frame, from rigid offsets or the curve.
BoundingBox group_bounds(const Scene& scene, const Group& group);

} // namespace layout
