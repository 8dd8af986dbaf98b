#include "layout/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace layout {

std::string to_string(ProjectionMode mode)
{
    return mode == ProjectionMode::Sequential ? "sequential" : "batch";
}

std::string to_string(BroadPhase phase)
{
    return phase == BroadPhase::Hash ? "hash" : "all_pairs";
}

void SolverConfig::validate() const
{
    if (max_iterations < 1) {
        throw SolverError("max_iterations must be >= 1");
    }
    if (!(batch_averaging > 0.0)) {
        throw SolverError("batch averaging coefficient must be > 0");
    }
    if (termination_window < 1) {
        throw SolverError("termination window must be >= 1");
    }
    if (!(improvement_tolerance >= 0.0)) {
        throw SolverError("improvement tolerance must be >= 0");
    }
    if (settle_sweeps < 0) {
        throw SolverError("settle_sweeps must be >= 0");
    }
}

bool EnergyTrace::record(const Energy& e, std::span<const Particle> state, double tolerance)
{
    energy.push_back(e.total);
    violation.push_back(e.violation);
    const bool improved = e.total < best;
    if (e.total < best - tolerance || !std::isfinite(best)) {
        progress_iteration = static_cast<int>(energy.size());
    }
    if (improved) {
        best = e.total;
        best_iteration = static_cast<int>(energy.size());
        best_state.assign(state.begin(), state.end());
    }
    best_energy.push_back(best);
    return improved;
}

// --- state helpers ------------------------------------------------------------

void sync_rigid_group(const Scene& scene, std::size_t g, std::vector<Particle>& particles)
{
    const auto& group = scene.groups[g];
    const Pose frame = particles[group.particle].pose();
    for (std::size_t m = 0; m < group.members.size(); ++m) {
        particles[scene.objects[group.members[m]].particle].set_pose(compose(frame, group.offsets[m]));
    }
}

void sync_rigid_groups(const Scene& scene, std::vector<Particle>& particles)
{
    for (std::size_t g = 0; g < scene.groups.size(); ++g) {
        if (scene.groups[g].rigidity == Rigidity::Rigid) {
            sync_rigid_group(scene, g, particles);
        }
    }
}

void carry_curve_members(const Scene& scene, std::size_t g, const Pose& before, std::vector<Particle>& particles)
{
    const Pose after = particles[scene.groups[g].particle].pose();
    for (std::size_t m : scene.groups[g].members) {
        Particle& member = particles[scene.objects[m].particle];
        if (!member.is_fixed()) {
            member.position = compose(after, relative(before, member.pose())).position;
        }
    }
}

void apply_correction(const Scene& scene, const SceneIndex& index, std::vector<Particle>& particles,
                      const Correction& c)
{
    const std::size_t r = index.root[c.particle];
    Particle& target = particles[r];
    if (target.is_fixed()) {
        return;
    }
    const Pose before = target.pose();
    target.position += c.delta_position;
    target.z += c.delta_z;
    target.orientation = normalize_angle(target.orientation + c.delta_orientation);
    if (index.rigid_group[r] && index.group[r]) {
        sync_rigid_group(scene, *index.rigid_group[r], particles);
    } else if (index.group[r] && scene.groups[*index.group[r]].particle == r && scene.groups[*index.group[r]].curve) {
        carry_curve_members(scene, *index.group[r], before, particles);
    }
}

std::vector<Particle> initialize(const Scene& scene, Rng& rng)
{
    std::vector<Particle> particles = scene.particles;
    const Aabb box = scene.room.bounds();
    const auto sample = [&](Particle& p) {
        constexpr int kTries = 10000;
        for (int t = 0; t < kTries; ++t) {
            const Vec2 q(rng.uniform(box.min.x(), box.max.x()), rng.uniform(box.min.y(), box.max.y()));
            if (scene.room.contains(q)) {
                p.position = q;
                p.orientation = normalize_angle(rng.uniform(0.0, kTwoPi));
                return;
            }
        }
        throw SolverError("rejection sampling failed: room '" + scene.name + "' has no usable interior");
    };
    std::vector<bool> rigid_member(particles.size(), false);
    for (const auto& g : scene.groups) {
        if (g.rigidity == Rigidity::Rigid) {
            for (std::size_t m : g.members) {
                rigid_member[scene.objects[m].particle] = true;
            }
        }
    }
    const auto place = [&](Particle& p, const std::optional<Pose>& authored, bool fixed) {
        if (authored) {
            p.set_pose(*authored);
        } else if (!fixed) {
            sample(p);
        }
    };
    for (const auto& obj : scene.objects) {
        if (!rigid_member[obj.particle]) {
            place(particles[obj.particle], obj.initial_pose, obj.fixed || particles[obj.particle].is_fixed());
        }
    }
    const auto curve_inside = [&](const Group& g, const Particle& p) {
        const Curve world = transformed(*g.curve, p.pose());
        return std::all_of(g.params.begin(), g.params.end(),
                           [&](double t) { return scene.room.contains(world.point_at(t)); });
    };
    for (const auto& g : scene.groups) {
        Particle& p = particles[g.particle];
        place(p, g.initial_pose, g.fixed || p.is_fixed());
        // A curve group is redrawn a bounded number of times until its members
        // start inside the room.
        if (g.curve && g.rigidity == Rigidity::Nonrigid && !g.initial_pose && !g.fixed && !p.is_fixed()) {
            for (int t = 0; t < 1000 && !curve_inside(g, p); ++t) {
                sample(p);
            }
        }
    }
    for (const auto& g : scene.groups) {
        if (g.rigidity == Rigidity::Rigid || !g.curve) {
            continue;
        }
        const Curve world = transformed(*g.curve, particles[g.particle].pose());
        for (std::size_t m = 0; m < g.members.size(); ++m) {
            const auto& obj = scene.objects[g.members[m]];
            Particle& p = particles[obj.particle];
            if (!obj.initial_pose && !obj.fixed && !p.is_fixed()) {
                p.position = world.point_at(g.params[m]);
            }
        }
    }
    sync_rigid_groups(scene, particles);
    return particles;
}

std::vector<Particle> initialize(const Scene& scene, std::uint64_t seed)
{
    Rng rng(seed);
    return initialize(scene, rng);
}

std::vector<Attachment> curve_attachments(const Scene& scene, std::span<const Particle> particles)
{
    std::vector<Attachment> out;
    for (std::size_t g = 0; g < scene.groups.size(); ++g) {
        const auto& group = scene.groups[g];
        if (!group.curve || group.rigidity == Rigidity::Rigid) {
            continue;
        }
        const Curve world = transformed(*group.curve, particles[group.particle].pose());
        for (std::size_t m : group.members) {
            const std::size_t p = scene.objects[m].particle;
            out.push_back({g, p, closest_point_on_curve(world, particles[p].position).point});
        }
    }
    return out;
}

Corrections apply_group_constraints(const Scene& scene, const SceneIndex& index, std::size_t g,
                                    std::vector<Particle>& particles, double k)
{
    const auto& group = scene.groups[g];
    Corrections out;
    if (group.rigidity == Rigidity::Rigid) {
        sync_rigid_group(scene, g, particles);
        return out;
    }
    if (!group.curve) {
        return out;
    }
    // The curve point is an infinite-mass ghost, so only the member moves.
    const Curve world = transformed(*group.curve, particles[group.particle].pose());
    for (std::size_t m : group.members) {
        const std::size_t p = scene.objects[m].particle;
        const Vec2 target = closest_point_on_curve(world, particles[p].position).point;
        const Correction c{p, k * (target - particles[p].position)};
        if (c.delta_position.squaredNorm() > 0.0) {
            apply_correction(scene, index, particles, c);
            out.push_back(c);
        }
    }
    return out;
}

// --- energy -------------------------------------------------------------------

Energy evaluate_energy(const Scene& scene, const SceneIndex& index, std::span<const Particle> particles,
                       BroadPhase broad_phase)
{
    Energy e;
    double sum = 0.0;
    const auto add = [&](ConstraintKind kind, double weight, double v) {
        e.violation[static_cast<std::size_t>(kind)] += v;
        sum += weight * v * v;
    };
    for (const auto& c : scene.constraints) {
        add(c.kind, c.weight, violation(c, evaluate(c, scene, index, particles)));
    }
    const double attach_weight = default_weight(ConstraintKind::PairwiseDistance);
    for (const auto& a : curve_attachments(scene, particles)) {
        add(ConstraintKind::PairwiseDistance, attach_weight, (particles[a.member_particle].position - a.target).norm());
    }
    for (const auto& c : generate_collision_constraints(scene, index, particles, broad_phase)) {
        add(c.kind, c.weight, violation(c, evaluate(c, scene, index, particles)));
    }
    const double boundary_weight = default_weight(ConstraintKind::Boundary);
    for (std::size_t p : index.object_particles) {
        add(ConstraintKind::Boundary, boundary_weight,
            std::max(0.0, -boundary_clearance(particles[p].position, index.radius[p], scene.room)));
    }
    e.total = std::sqrt(sum);
    return e;
}

Energy evaluate_energy(const Scene& scene, std::span<const Particle> particles)
{
    const SceneIndex index(scene);
    return evaluate_energy(scene, index, particles);
}

HardViolation hard_violation(const Scene& scene, const SceneIndex& index, std::span<const Particle> particles)
{
    HardViolation hv;
    const auto& ids = index.object_particles;
    std::vector<Vec2> centers(ids.size());
    std::vector<double> radii(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        centers[i] = particles[ids[i]].position;
        radii[i] = index.radius[ids[i]];
        hv.max_boundary = std::max(hv.max_boundary, -boundary_clearance(centers[i], radii[i], scene.room));
    }
    const auto hash = SpatialHash::rebuild(centers, radii, 2.0 * index.max_radius);
    for (const auto& [a, b] : hash.candidate_pairs()) {
        if (!index.exempt(ids[a], ids[b])) {
            hv.max_overlap = std::max(hv.max_overlap, radii[a] + radii[b] - (centers[a] - centers[b]).norm());
        }
    }
    return hv;
}

// --- iteration ----------------------------------------------------------------

StepContext::StepContext(const Scene& s, std::uint64_t seed) : scene(s), index(s), rng(seed), directions(&rng) {}

namespace {

void check_finite(const Corrections& corrections, const Constraint& c, std::size_t ordinal, const Scene& scene)
{
    for (const auto& corr : corrections) {
        if (!corr.delta_position.allFinite() || !std::isfinite(corr.delta_z) ||
            !std::isfinite(corr.delta_orientation)) {
            std::ostringstream msg;
            msg << "non-finite correction from " << to_string(c.kind) << " constraint #" << ordinal << " on [";
            for (std::size_t i = 0; i < c.participants.size(); ++i) {
                msg << (i ? ", " : "") << scene.particle_name(c.participants[i]);
            }
            msg << "]";
            throw SolverError(msg.str());
        }
    }
}

/// Constraint visiting order for iteration l: round-robin over kinds, the
/// starting kind advancing by one each iteration.
std::vector<std::size_t> interleaved_order(const std::vector<Constraint>& constraints, int l)
{
    std::array<std::vector<std::size_t>, kConstraintKindCount> buckets;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        buckets[static_cast<std::size_t>(constraints[i].kind)].push_back(i);
    }
    std::vector<std::size_t> order;
    order.reserve(constraints.size());
    const std::size_t start = static_cast<std::size_t>(l - 1) % kConstraintKindCount;
    for (std::size_t round = 0; order.size() < constraints.size(); ++round) {
        for (std::size_t b = 0; b < kConstraintKindCount; ++b) {
            const auto& bucket = buckets[(start + b) % kConstraintKindCount];
            if (round < bucket.size()) {
                order.push_back(bucket[round]);
            }
        }
    }
    return order;
}

struct Pending {
    const Constraint* constraint;
    std::size_t ordinal;
    double k;
};

void project_wall_ghost(StepContext& ctx, std::vector<Particle>& particles, const Constraint& c, double k,
                        Corrections* sink)
{
    const auto& ps = c.participants;
    if (!ctx.index.wall_bound[ps[0]] || !ctx.index.wall_bound[ps[1]]) {
        return;
    }
    const PointMass a = point_mass(ctx.index, particles, ps[0]);
    const PointMass b = point_mass(ctx.index, particles, ps[1]);
    const Vec2 wa = nearest_wall_point(ctx.scene.room, a.position).point;
    const Vec2 wb = nearest_wall_point(ctx.scene.room, b.position).point;
    auto corr = project_wall_ghost_collision(a, ctx.index.radius[ps[0]], b, ctx.index.radius[ps[1]], ctx.scene.room,
                                             k, ctx.directions.separation(wa, wb));
    check_finite(corr, c, 0, ctx.scene);
    for (const auto& x : corr) {
        if (sink) {
            sink->push_back(x);
        } else {
            apply_correction(ctx.scene, ctx.index, particles, x);
        }
    }
}

void run_constraints(StepContext& ctx, std::vector<Particle>& particles, const std::vector<Pending>& work,
                     const SolverConfig& config)
{
    if (config.mode == ProjectionMode::Sequential) {
        for (const auto& w : work) {
            const auto corr = project(*w.constraint, ctx.scene, ctx.index, particles, w.k, ctx.directions);
            check_finite(corr, *w.constraint, w.ordinal, ctx.scene);
            for (const auto& c : corr) {
                apply_correction(ctx.scene, ctx.index, particles, c);
            }
            if (w.constraint->kind == ConstraintKind::Collision) {
                project_wall_ghost(ctx, particles, *w.constraint, w.k, nullptr);
            }
        }
        return;
    }
    // Batch: every projection sees the same start state; per-particle
    // corrections are averaged and over-relaxed by ω.
    const std::size_t n = particles.size();
    std::vector<Correction> sum(n);
    std::vector<int> count(n, 0);
    const auto accumulate = [&](const Corrections& corr) {
        for (const auto& c : corr) {
            sum[c.particle].delta_position += c.delta_position;
            sum[c.particle].delta_z += c.delta_z;
            sum[c.particle].delta_orientation += c.delta_orientation;
            ++count[c.particle];
        }
    };
    for (const auto& w : work) {
        const auto corr = project(*w.constraint, ctx.scene, ctx.index, particles, w.k, ctx.directions);
        check_finite(corr, *w.constraint, w.ordinal, ctx.scene);
        accumulate(corr);
        if (w.constraint->kind == ConstraintKind::Collision) {
            Corrections ghost;
            project_wall_ghost(ctx, particles, *w.constraint, w.k, &ghost);
            accumulate(ghost);
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (count[p] == 0) {
            continue;
        }
        const double f = config.batch_averaging / count[p];
        apply_correction(ctx.scene, ctx.index, particles,
                         {p, f * sum[p].delta_position, f * sum[p].delta_z, f * sum[p].delta_orientation});
    }
}

void project_boundaries(StepContext& ctx, std::vector<Particle>& particles)
{
    for (std::size_t p : ctx.index.object_particles) {
        const auto result =
            project_boundary(point_mass(ctx.index, particles, p), ctx.index.radius[p], ctx.scene.room, 1.0);
        if (result.clamped_to_centroid) {
            ++ctx.boundary_clamps;
        }
        for (const auto& c : result.corrections) {
            apply_correction(ctx.scene, ctx.index, particles, c);
        }
    }
}

} // namespace

void step(StepContext& ctx, std::vector<Particle>& particles, int l, const SolverConfig& config)
{
    if (l < 1) {
        throw SolverError("iteration index must be >= 1");
    }
    const Scene& scene = ctx.scene;

    std::vector<Pending> work;
    work.reserve(scene.constraints.size());
    if (config.interleave) {
        for (std::size_t i : interleaved_order(scene.constraints, l)) {
            work.push_back({&scene.constraints[i], i, update_stiffness(scene.constraints[i].stiffness, l)});
        }
    } else {
        for (std::size_t i = 0; i < scene.constraints.size(); ++i) {
            work.push_back({&scene.constraints[i], i, update_stiffness(scene.constraints[i].stiffness, l)});
        }
    }
    run_constraints(ctx, particles, work, config);

    for (std::size_t g = 0; g < scene.groups.size(); ++g) {
        apply_group_constraints(scene, ctx.index, g, particles, update_stiffness(scene.groups[g].attachment, l));
    }

    const auto generated = generate_collision_constraints(scene, ctx.index, particles, config.broad_phase);
    const double k_collision = update_stiffness(config.collision_stiffness, l);
    const double k_access = update_stiffness(config.accessibility_stiffness, l);
    work.clear();
    for (std::size_t i = 0; i < generated.size(); ++i) {
        const auto& c = generated[i];
        work.push_back({&c, scene.constraints.size() + i,
                        c.kind == ConstraintKind::Collision ? k_collision : k_access});
    }
    run_constraints(ctx, particles, work, config);

    project_boundaries(ctx, particles);

    for (std::size_t p = 0; p < particles.size(); ++p) {
        auto& q = particles[p];
        if (!q.position.allFinite() || !std::isfinite(q.z) || !std::isfinite(q.orientation)) {
            throw SolverError("non-finite pose on " + scene.particle_name(p) + " at iteration " + std::to_string(l));
        }
        q.orientation = normalize_angle(q.orientation);
    }
}

int settle(const Scene& scene, const SceneIndex& index, std::vector<Particle>& particles, int max_sweeps,
           double tolerance)
{
    // Pairs are pushed a millimetre past contact so jammed clusters stop
    // re-entering the tolerance band once their neighbours move.
    constexpr double margin = 1e-3;
    const auto& ids = index.object_particles;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const HardViolation hv = hard_violation(scene, index, particles);
        if (hv.max_overlap <= tolerance && hv.max_boundary <= tolerance) {
            return sweep;
        }
        std::vector<Vec2> centers(ids.size());
        std::vector<double> radii(ids.size());
        for (std::size_t i = 0; i < ids.size(); ++i) {
            centers[i] = particles[ids[i]].position;
            radii[i] = index.radius[ids[i]];
        }
        const auto hash = SpatialHash::rebuild(centers, radii, 2.0 * index.max_radius);
        for (const auto& [a, b] : hash.candidate_pairs()) {
            const std::size_t pa = ids[a];
            const std::size_t pb = ids[b];
            if (index.exempt(pa, pb)) {
                continue;
            }
            const PointMass ma = point_mass(index, particles, pa);
            const PointMass mb = point_mass(index, particles, pb);
            const Vec2 dir = (ma.position - mb.position).norm() > 0.0
                                 ? Vec2((ma.position - mb.position).normalized())
                                 : direction(0.5 * kPi + static_cast<double>(pa % 8) * kPi / 4.0);
            for (const auto& c : project_collision(ma, radii[a] + 0.5 * margin, mb, radii[b] + 0.5 * margin, 1.0, dir)) {
                apply_correction(scene, index, particles, c);
            }
        }
        for (std::size_t p : ids) {
            for (const auto& c :
                 project_boundary(point_mass(index, particles, p), index.radius[p] + margin, scene.room, 1.0)
                     .corrections) {
                apply_correction(scene, index, particles, c);
            }
        }
    }
    return max_sweeps;
}

SynthesisResult synthesize_from(const Scene& scene, std::vector<Particle> state, const SolverConfig& config)
{
    config.validate();
    StepContext ctx(scene, config.seed);
    SynthesisResult result;
    EnergyTrace& trace = result.trace;
    trace.initial_energy = evaluate_energy(scene, ctx.index, state, config.broad_phase).total;
    for (int l = 1; l <= config.max_iterations; ++l) {
        step(ctx, state, l, config);
        trace.record(evaluate_energy(scene, ctx.index, state, config.broad_phase), state, config.improvement_tolerance);
        if (l - trace.progress_iteration >= config.termination_window) {
            break;
        }
    }
    trace.degenerate_directions = ctx.directions.events();
    trace.boundary_clamps = ctx.boundary_clamps;
    result.layout = trace.best_state;
    if (config.settle) {
        result.settle_sweeps = settle(scene, ctx.index, result.layout, config.settle_sweeps, config.settle_tolerance);
    }
    result.final_energy = evaluate_energy(scene, ctx.index, result.layout, config.broad_phase).total;
    result.max_overlap = hard_violation(scene, ctx.index, result.layout).max_overlap;
    return result;
}

SynthesisResult synthesize(const Scene& scene, const SolverConfig& config)
{
    config.validate();
    Rng rng(config.seed);
    std::vector<Particle> start = initialize(scene, rng);
    // synthesize_from seeds its own stream, so a start state can be replayed.
    return synthesize_from(scene, std::move(start), config);
}

} // namespace layout
