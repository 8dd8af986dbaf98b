#include "layout/annealer.hpp"

#include <algorithm>
#include <cmath>

namespace layout {

void AnnealConfig::validate() const
{
    if (total_iterations < 1) {
        throw SolverError("total_iterations must be >= 1");
    }
    if (!(t_final > 0.0) || (t_initial && !(*t_initial > t_final))) {
        throw SolverError("temperatures must satisfy t_initial > t_final > 0");
    }
    if ((sigma_position && !(*sigma_position > 0.0)) || !(sigma_orientation > 0.0)) {
        throw SolverError("move scales must be > 0");
    }
    if (stall_window < 1) {
        throw SolverError("stall window must be >= 1");
    }
    if (position_probability < 0.0 || position_probability > 1.0) {
        throw SolverError("position probability must lie in [0, 1]");
    }
}

double temperature(double t_initial, double t_final, int t, int total)
{
    if (total <= 1) {
        return t_final;
    }
    const double f = static_cast<double>(t - 1) / static_cast<double>(total - 1);
    return (1.0 - f) * t_initial + f * t_final;
}

std::vector<std::size_t> movable_bodies(const Scene& scene)
{
    std::vector<bool> rigid_member(scene.particles.size(), false);
    for (const auto& g : scene.groups) {
        if (g.rigidity == Rigidity::Rigid) {
            for (std::size_t m : g.members) {
                rigid_member[scene.objects[m].particle] = true;
            }
        }
    }
    std::vector<std::size_t> bodies;
    for (const auto& obj : scene.objects) {
        if (!rigid_member[obj.particle] && !scene.particles[obj.particle].is_fixed()) {
            bodies.push_back(obj.particle);
        }
    }
    for (const auto& g : scene.groups) {
        if (!scene.particles[g.particle].is_fixed()) {
            bodies.push_back(g.particle);
        }
    }
    return bodies;
}

namespace {

double reflect(double x, double lo, double hi)
{
    const double w = hi - lo;
    if (!(w > 0.0)) {
        return lo;
    }
    double u = std::fmod(x - lo, 2.0 * w);
    if (u < 0.0) {
        u += 2.0 * w;
    }
    return lo + (u <= w ? u : 2.0 * w - u);
}

} // namespace

std::optional<Proposal> propose(const Scene& scene, std::span<const std::size_t> bodies,
                                std::vector<Particle>& state, double sigma_position, double sigma_orientation,
                                double position_probability, Rng& rng)
{
    if (bodies.empty()) {
        throw SolverError("scene has no movable body");
    }
    Proposal proposal;
    proposal.particle = bodies[rng.index(bodies.size())];
    proposal.moved_position = rng.uniform() < position_probability;
    Particle& p = state[proposal.particle];
    const Pose before = p.pose();
    if (proposal.moved_position) {
        const Aabb box = scene.room.bounds();
        const Vec2 q(reflect(p.position.x() + rng.normal(0.0, sigma_position), box.min.x(), box.max.x()),
                     reflect(p.position.y() + rng.normal(0.0, sigma_position), box.min.y(), box.max.y()));
        if (!scene.room.contains(q)) {
            return std::nullopt;
        }
        p.position = q;
    } else {
        p.orientation = normalize_angle(p.orientation + rng.normal(0.0, sigma_orientation));
    }
    for (std::size_t g = 0; g < scene.groups.size(); ++g) {
        if (scene.groups[g].particle != proposal.particle) {
            continue;
        }
        if (scene.groups[g].rigidity == Rigidity::Rigid) {
            sync_rigid_group(scene, g, state);
        } else if (scene.groups[g].curve) {
            carry_curve_members(scene, g, before, state);
        }
    }
    return proposal;
}

bool accept(double e_current, double e_candidate, double temperature, Rng& rng)
{
    if (!(temperature > 0.0)) {
        throw SolverError("temperature must be > 0");
    }
    if (e_candidate <= e_current) {
        return true;
    }
    return rng.uniform() < std::exp(-(e_candidate - e_current) / temperature);
}

AnnealResult run_sa_mcmc_from(const Scene& scene, std::vector<Particle> state, const AnnealConfig& config)
{
    config.validate();
    Rng rng(config.seed);
    const SceneIndex index(scene);
    const auto bodies = movable_bodies(scene);

    AnnealResult result;
    EnergyTrace& trace = result.trace;
    Energy current = evaluate_energy(scene, index, state);
    trace.initial_energy = current.total;
    result.t_initial = config.t_initial.value_or(std::max(current.total, 10.0 * config.t_final));
    result.sigma_position = config.sigma_position.value_or(0.1 * scene.room.bounds().diagonal());

    std::vector<Particle> candidate = state;
    for (int t = 1; t <= config.total_iterations; ++t) {
        if (!bodies.empty()) {
            const double temp = temperature(result.t_initial, config.t_final, t, config.total_iterations);
            const auto proposal = propose(scene, bodies, candidate, result.sigma_position, config.sigma_orientation,
                                          config.position_probability, rng);
            if (proposal) {
                const Energy e = evaluate_energy(scene, index, candidate);
                if (accept(current.total, e.total, temp, rng)) {
                    state = candidate;
                    current = e;
                    ++result.accepted;
                }
            }
            candidate = state;
        }
        trace.record(current, state);
        if (t > config.stall_window) {
            const double before = trace.best_energy[static_cast<std::size_t>(t - 1 - config.stall_window)];
            const double now = trace.best_energy[static_cast<std::size_t>(t - 1)];
            if (before - now <= config.stall_threshold * before) {
                break;
            }
        }
    }
    result.layout = trace.best_state;
    result.final_energy = trace.best;
    return result;
}

AnnealResult run_sa_mcmc(const Scene& scene, const AnnealConfig& config)
{
    config.validate();
    Rng rng(config.seed);
    return run_sa_mcmc_from(scene, initialize(scene, rng), config);
}

} // namespace layout
