#include "layout/constraint.hpp"

#include <string_view>
#include <utility>

namespace layout {

namespace {

constexpr std::array<std::string_view, kConstraintKindCount> kKindNames{
    "pairwise_distance", "focal_point",     "traffic_lane",         "heat_point",
    "focal_symmetry",    "visual_balance",  "wall_distance",        "accessibility",
    "collision",         "pairwise_orientation", "wall_orientation", "stacking",
    "boundary",
};

} // namespace

std::string_view to_string(ConstraintKind kind)
{
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ConstraintKind> constraint_kind_from_string(std::string_view name)
{
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) {
            return static_cast<ConstraintKind>(i);
        }
    }
    return std::nullopt;
}

std::string_view to_string(Relation relation)
{
    return relation == Relation::Equality ? "equality" : "inequality";
}

std::string_view to_string(Schedule schedule)
{
    switch (schedule) {
    case Schedule::Decreasing:
        return "decreasing";
    case Schedule::Increasing:
        return "increasing";
    case Schedule::Constant:
        return "constant";
    }
    return "constant";
}

std::string_view to_string(OrientationGoal goal)
{
    switch (goal) {
    case OrientationGoal::None:
        return "none";
    case OrientationGoal::FaceOther:
        return "face_other";
    case OrientationGoal::MatchOther:
        return "match_other";
    }
    return "none";
}

std::optional<Relation> relation_from_string(std::string_view name)
{
    if (name == "equality") {
        return Relation::Equality;
    }
    if (name == "inequality") {
        return Relation::Inequality;
    }
    return std::nullopt;
}

std::optional<Schedule> schedule_from_string(std::string_view name)
{
    for (Schedule s : {Schedule::Decreasing, Schedule::Increasing, Schedule::Constant}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

std::optional<OrientationGoal> orientation_goal_from_string(std::string_view name)
{
    for (OrientationGoal g : {OrientationGoal::None, OrientationGoal::FaceOther, OrientationGoal::MatchOther}) {
        if (to_string(g) == name) {
            return g;
        }
    }
    return std::nullopt;
}

Stiffness default_stiffness(ConstraintKind kind)
{
    switch (kind) {
    case ConstraintKind::Collision:
    case ConstraintKind::Accessibility:
    case ConstraintKind::TrafficLane:
        return {0.9, 0.9, Schedule::Increasing, 10.0};
    case ConstraintKind::PairwiseDistance:
    case ConstraintKind::FocalPoint:
    case ConstraintKind::HeatPoint:
    case ConstraintKind::FocalSymmetry:
    case ConstraintKind::VisualBalance:
        return {0.9, 0.9, Schedule::Decreasing, 10.0};
    case ConstraintKind::WallDistance:
    case ConstraintKind::WallOrientation:
    case ConstraintKind::PairwiseOrientation:
    case ConstraintKind::Stacking:
    case ConstraintKind::Boundary:
        return {1.0, 1.0, Schedule::Constant, 10.0};
    }
    return {};
}

double default_weight(ConstraintKind kind)
{
    switch (kind) {
    case ConstraintKind::Collision:
    case ConstraintKind::Accessibility:
        return 150.0;
    case ConstraintKind::WallDistance:
    case ConstraintKind::WallOrientation:
    case ConstraintKind::Boundary:
        return 20.0;
    default:
        return 1.0;
    }
}

Constraint make_constraint(ConstraintKind kind, std::vector<std::size_t> participants)
{
    Constraint c;
    c.kind = kind;
    c.participants = std::move(participants);
    c.stiffness = default_stiffness(kind);
    c.weight = default_weight(kind);
    if (kind == ConstraintKind::Collision || kind == ConstraintKind::Accessibility ||
        kind == ConstraintKind::TrafficLane || kind == ConstraintKind::Boundary) {
        c.relation = Relation::Inequality;
    }
    return c;
}

bool is_generated_kind(ConstraintKind kind)
{
    return kind == ConstraintKind::Collision || kind == ConstraintKind::Accessibility ||
           kind == ConstraintKind::Boundary;
}

} // namespace layout
