#pragma once

#include "layout/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace layout {

enum class ConstraintKind : std::uint8_t {
    PairwiseDistance,
    FocalPoint,
    TrafficLane,
    HeatPoint,
    FocalSymmetry,
    VisualBalance,
    WallDistance,
    Accessibility,
    Collision,
    PairwiseOrientation,
    WallOrientation,
    Stacking,
    Boundary,
};

inline constexpr std::size_t kConstraintKindCount = 13;

inline constexpr std::array<ConstraintKind, kConstraintKindCount> kAllConstraintKinds{
    ConstraintKind::PairwiseDistance, ConstraintKind::FocalPoint,
    ConstraintKind::TrafficLane,      ConstraintKind::HeatPoint,
    ConstraintKind::FocalSymmetry,    ConstraintKind::VisualBalance,
    ConstraintKind::WallDistance,     ConstraintKind::Accessibility,
    ConstraintKind::Collision,        ConstraintKind::PairwiseOrientation,
    ConstraintKind::WallOrientation,  ConstraintKind::Stacking,
    ConstraintKind::Boundary,
};

std::string_view to_string(ConstraintKind kind);
std::optional<ConstraintKind> constraint_kind_from_string(std::string_view name);

/// Inequality constraints are of the form C >= 0.
enum class Relation : std::uint8_t { Equality, Inequality };

enum class Schedule : std::uint8_t { Decreasing, Increasing, Constant };

std::string_view to_string(Relation relation);
std::string_view to_string(Schedule schedule);
std::optional<Relation> relation_from_string(std::string_view name);
std::optional<Schedule> schedule_from_string(std::string_view name);

/// What an orientation constraint asks of one participant.
enum class OrientationGoal : std::uint8_t {
    None,       ///< unconstrained
    FaceOther,  ///< forward axis points at the other participant
    MatchOther, ///< same yaw as the other participant
};

std::string_view to_string(OrientationGoal goal);
std::optional<OrientationGoal> orientation_goal_from_string(std::string_view name);

struct Stiffness {
    double initial = 1.0;
    double current = 1.0;
    Schedule schedule = Schedule::Constant;
    double rate = 10.0; ///< M >= 1

    friend bool operator==(const Stiffness&, const Stiffness&) = default;
};

/// One constraint instance. Which fields are meaningful depends on `kind`:
///
///   PairwiseDistance, FocalPoint   participants {i, j}, distance, relation
///   TrafficLane                    participants {i, origin}, direction, distance
///   HeatPoint                      participants {members...}, target
///   FocalSymmetry                  participants {focal, members...}, direction
///   VisualBalance                  participants {members...} (target = room centroid)
///   WallDistance                   participants {i}, distance, relation
///   Accessibility, Collision       participants {i, j} (generated each iteration)
///   PairwiseOrientation            participants {i, j}, first/second goal, angle_offset
///   WallOrientation                participants {i}, angle_offset
///   Stacking                       participants {bottom, top}
///   Boundary                       participants {i}
///
/// `anchor_secondary` treats participants[1] as immovable for this constraint
/// only (focal objects, lane origins).
struct Constraint {
    ConstraintKind kind = ConstraintKind::PairwiseDistance;
    std::vector<std::size_t> participants;
    Relation relation = Relation::Equality;
    double distance = 0.0;
    Vec2 target = Vec2::Zero();
    Vec2 direction = Vec2::UnitX();
    double angle_offset = 0.0;
    OrientationGoal first_goal = OrientationGoal::FaceOther;
    OrientationGoal second_goal = OrientationGoal::None;
    bool anchor_secondary = false;
    Stiffness stiffness;
    double weight = 1.0;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Default stiffness schedule for a kind: continuation on soft constraints,
/// rising stiffness on clearance constraints, constant on hard ones.
Stiffness default_stiffness(ConstraintKind kind);

/// Default energy weight: 150 for collision/accessibility, 20 for wall and
/// boundary constraints, 1 otherwise.
double default_weight(ConstraintKind kind);

/// A constraint record with the kind's default stiffness and weight.
Constraint make_constraint(ConstraintKind kind, std::vector<std::size_t> participants);

bool is_generated_kind(ConstraintKind kind);

} // namespace layout
