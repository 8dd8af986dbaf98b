#pragma once

#include "layout/constraint.hpp"
#include "layout/constraints.hpp"
#include "layout/geometry.hpp"
#include "layout/scene.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace layout {

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Uniform grid over the plane. Each circle is registered in every cell its
/// bounding square touches; the table is a sorted array of (cell, particle)
/// entries so lookups and pair enumeration are deterministic.
class SpatialHash {
public:
    struct Cell {
        std::int64_t x;
        std::int64_t y;

        friend auto operator<=>(const Cell&, const Cell&) = default;
    };

    SpatialHash() = default;

    /// cell_size <= 0 selects 2 × max radius.
    static SpatialHash rebuild(std::span<const Vec2> centers, std::span<const double> radii, double cell_size = 0.0);

    double cell_size() const { return cell_size_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    Cell cell_of(const Vec2& p) const;
    /// Cells overlapped by the square around the circle (p, r).
    std::vector<Cell> cells_of(const Vec2& p, double r) const;
    /// Sorted ids sharing a cell with the circle (p, r).
    std::vector<std::size_t> query(const Vec2& p, double r) const;
    /// Pairs i < j that share at least one cell, each reported once, in cell
    /// order.
    std::vector<IndexPair> candidate_pairs() const;

private:
    struct Entry {
        Cell cell;
        std::size_t id;

        friend auto operator<=>(const Entry&, const Entry&) = default;
    };

    double cell_size_ = 1.0;
    std::size_t count_ = 0;
    std::vector<Entry> entries_;
    std::vector<Cell> first_cell_; ///< lowest cell of each circle's square
};

/// Every ordered pair i < j; the naive reference broad phase.
std::vector<IndexPair> all_pairs(std::size_t n);

enum class BroadPhase : std::uint8_t { Hash, AllPairs };

/// Collision and accessibility instances for the current particle states.
/// Collisions: one per overlapping object pair (object particle ids, i < j),
/// skipped when the scene disables collisions or both share a rigid group.
/// Accessibility: one per (intruder, owner) pair with an active face.
std::vector<Constraint> generate_collision_constraints(const Scene& scene, const SceneIndex& index,
                                                       std::span<const Particle> particles,
                                                       BroadPhase broad_phase = BroadPhase::Hash,
                                                       bool include_collisions = true);

} // namespace layout
