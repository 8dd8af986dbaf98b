#include "layout/spatial_hash.hpp"

#include <algorithm>
#include <cmath>

namespace layout {

SpatialHash SpatialHash::rebuild(std::span<const Vec2> centers, std::span<const double> radii, double cell_size)
{
    SpatialHash hash;
    hash.count_ = centers.size();
    if (cell_size <= 0.0) {
        double max_r = 0.0;
        for (double r : radii) {
            max_r = std::max(max_r, r);
        }
        cell_size = max_r > 0.0 ? 2.0 * max_r : 1.0;
    }
    hash.cell_size_ = cell_size;
    hash.entries_.reserve(4 * centers.size());
    hash.first_cell_.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        hash.first_cell_.push_back(hash.cell_of(centers[i] - Vec2(radii[i], radii[i])));
        for (const Cell& c : hash.cells_of(centers[i], radii[i])) {
            hash.entries_.push_back({c, i});
        }
    }
    std::sort(hash.entries_.begin(), hash.entries_.end());
    return hash;
}

SpatialHash::Cell SpatialHash::cell_of(const Vec2& p) const
{
    return {static_cast<std::int64_t>(std::floor(p.x() / cell_size_)),
            static_cast<std::int64_t>(std::floor(p.y() / cell_size_))};
}

std::vector<SpatialHash::Cell> SpatialHash::cells_of(const Vec2& p, double r) const
{
    const Cell lo = cell_of(p - Vec2(r, r));
    const Cell hi = cell_of(p + Vec2(r, r));
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>((hi.x - lo.x + 1) * (hi.y - lo.y + 1)));
    for (std::int64_t x = lo.x; x <= hi.x; ++x) {
        for (std::int64_t y = lo.y; y <= hi.y; ++y) {
            cells.push_back({x, y});
        }
    }
    return cells;
}

std::vector<std::size_t> SpatialHash::query(const Vec2& p, double r) const
{
    std::vector<std::size_t> out;
    for (const Cell& c : cells_of(p, r)) {
        auto first = std::lower_bound(entries_.begin(), entries_.end(), Entry{c, 0});
        for (; first != entries_.end() && first->cell == c; ++first) {
            out.push_back(first->id);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<IndexPair> SpatialHash::candidate_pairs() const
{
    std::vector<IndexPair> pairs;
    std::size_t begin = 0;
    while (begin < entries_.size()) {
        std::size_t end = begin + 1;
        while (end < entries_.size() && entries_[end].cell == entries_[begin].cell) {
            ++end;
        }
        const Cell& cell = entries_[begin].cell;
        // ids within one cell run are sorted, so (a, b) already has a < b.
        // Two cell rectangles meet in a rectangle; a pair is reported only
        // from its lowest shared cell.
        for (std::size_t a = begin; a < end; ++a) {
            const Cell& fa = first_cell_[entries_[a].id];
            for (std::size_t b = a + 1; b < end; ++b) {
                const Cell& fb = first_cell_[entries_[b].id];
                if (cell.x == std::max(fa.x, fb.x) && cell.y == std::max(fa.y, fb.y)) {
                    pairs.emplace_back(entries_[a].id, entries_[b].id);
                }
            }
        }
        begin = end;
    }
    return pairs;
}

std::vector<IndexPair> all_pairs(std::size_t n)
{
    std::vector<IndexPair> pairs;
    pairs.reserve(n * (n > 0 ? n - 1 : 0) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    return pairs;
}

namespace {

void add_access(const Scene& scene, const SceneIndex& index, std::span<const Particle> particles,
                std::size_t intruder, std::size_t owner, std::vector<Constraint>& out)
{
    const std::size_t pi = index.object_particles[intruder];
    const std::size_t pj = index.object_particles[owner];
    if (index.exempt(pi, pj)) {
        return;
    }
    const auto& obj = scene.objects[*index.object[pj]];
    if (!obj.has_access_regions()) {
        return;
    }
    const AccessBody a = access_body(scene, index, particles, *index.object[pi]);
    const AccessBody b = access_body(scene, index, particles, *index.object[pj]);
    if (active_access_faces(a, b) != 0) {
        out.push_back(make_constraint(ConstraintKind::Accessibility, {pi, pj}));
    }
}

} // namespace

std::vector<Constraint> generate_collision_constraints(const Scene& scene, const SceneIndex& index,
                                                       std::span<const Particle> particles, BroadPhase broad_phase,
                                                       bool include_collisions)
{
    const auto& ids = index.object_particles;
    const std::size_t n = ids.size();
    std::vector<Vec2> centers(n);
    std::vector<double> radii(n);
    bool any_access = false;
    for (std::size_t i = 0; i < n; ++i) {
        centers[i] = particles[ids[i]].position;
        radii[i] = index.radius[ids[i]];
        any_access = any_access || scene.objects[*index.object[ids[i]]].has_access_regions();
    }

    std::vector<Constraint> out;
    const bool collide = include_collisions && scene.collisions_enabled;
    if (!collide && !any_access) {
        return out;
    }

    SpatialHash hash;
    if (broad_phase == BroadPhase::Hash) {
        hash = SpatialHash::rebuild(centers, radii, 2.0 * index.max_radius);
    }

    if (collide) {
        const auto pairs = broad_phase == BroadPhase::Hash ? hash.candidate_pairs() : all_pairs(n);
        for (const auto& [a, b] : pairs) {
            const std::size_t pa = ids[a];
            const std::size_t pb = ids[b];
            if (index.exempt(pa, pb)) {
                continue;
            }
            if ((centers[a] - centers[b]).norm() < radii[a] + radii[b]) {
                out.push_back(make_constraint(ConstraintKind::Collision, {std::min(pa, pb), std::max(pa, pb)}));
            }
        }
    }

    if (any_access) {
        for (std::size_t owner = 0; owner < n; ++owner) {
            if (!scene.objects[*index.object[ids[owner]]].has_access_regions()) {
                continue;
            }
            if (broad_phase == BroadPhase::Hash) {
                for (std::size_t intruder : hash.query(centers[owner], index.max_access_reach)) {
                    if (intruder != owner) {
                        add_access(scene, index, particles, intruder, owner, out);
                    }
                }
            } else {
                for (std::size_t intruder = 0; intruder < n; ++intruder) {
                    if (intruder != owner) {
                        add_access(scene, index, particles, intruder, owner, out);
                    }
                }
            }
        }
    }
    return out;
}

} // namespace layout
