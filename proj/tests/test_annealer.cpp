#include "layout/annealer.hpp"
#include "layout/scenes.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace layout;

namespace {

Scene single_object_scene(double half, double room = 10.0, std::optional<Pose> pose = std::nullopt)
{
    Scene s;
    s.name = "one";
    s.room = Room::rectangle(room, room);
    LayoutObject o;
    o.id = "box";
    o.label = "box";
    o.bbox = {Vec2(half, half), half};
    o.initial_pose = pose;
    s.objects.push_back(o);
    Particle p;
    p.set_mass(mass_from_bbox(o.bbox));
    if (pose) {
        p.set_pose(*pose);
    }
    s.particles.push_back(p);
    s.validate();
    return s;
}

double sample_std(const std::vector<double>& xs)
{
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) {
        var += (x - mean) * (x - mean);
    }
    return std::sqrt(var / static_cast<double>(xs.size() - 1));
}

} // namespace

TEST(Temperature, LinearSchedule)
{
    EXPECT_DOUBLE_EQ(temperature(10.0, 0.001, 1, 101), 10.0);
    EXPECT_DOUBLE_EQ(temperature(10.0, 0.001, 101, 101), 0.001);
    EXPECT_DOUBLE_EQ(temperature(10.0, 0.001, 51, 101), 0.5 * (10.0 + 0.001));
    EXPECT_DOUBLE_EQ(temperature(10.0, 0.001, 1, 1), 0.001);
}

TEST(MovableBodies, SkipsFixedAndRigidMembers)
{
    const Scene s = build("living_room");
    const auto bodies = movable_bodies(s);
    for (std::size_t p : bodies) {
        EXPECT_FALSE(s.particles[p].is_fixed());
    }
    for (const auto& g : s.groups) {
        if (g.rigidity == Rigidity::Rigid) {
            for (std::size_t m : g.members) {
                EXPECT_EQ(std::count(bodies.begin(), bodies.end(), s.objects[m].particle), 0);
            }
        }
    }
}

TEST(Propose, SingleObjectAlwaysChosen)
{
    const Scene s = single_object_scene(0.3, 10.0, Pose{Vec2(5, 5), 0.0, 0.0});
    const auto bodies = movable_bodies(s);
    ASSERT_EQ(bodies.size(), 1u);
    Rng rng(3);
    auto state = s.particles;
    for (int i = 0; i < 1000; ++i) {
        const auto p = propose(s, bodies, state, 0.5, 0.2, 0.5, rng);
        ASSERT_TRUE(p);
        EXPECT_EQ(p->particle, 0u);
    }
}

TEST(Propose, ChangesOneAttributeOfOneBody)
{
    const Scene s = build("desk");
    const auto bodies = movable_bodies(s);
    Rng rng(8);
    const auto start = initialize(s, 8);
    int positions = 0;
    for (int i = 0; i < 2000; ++i) {
        auto state = start;
        const auto p = propose(s, bodies, state, 0.3, 0.2, 0.5, rng);
        if (!p) {
            EXPECT_EQ(state, start);
            continue;
        }
        positions += p->moved_position;
        for (std::size_t k = 0; k < state.size(); ++k) {
            if (k != p->particle) {
                EXPECT_EQ(state[k], start[k]);
                continue;
            }
            EXPECT_EQ(state[k].z, start[k].z);
            EXPECT_EQ(state[k].mass, start[k].mass);
            if (p->moved_position) {
                EXPECT_NE(state[k].position, start[k].position);
                EXPECT_EQ(state[k].orientation, start[k].orientation);
            } else {
                EXPECT_EQ(state[k].position, start[k].position);
                EXPECT_NE(state[k].orientation, start[k].orientation);
            }
        }
    }
    EXPECT_NEAR(positions / 2000.0, 0.5, 0.05);
}

TEST(Propose, RigidGroupMovesAsOne)
{
    const Scene s = build("living_room");
    const auto bodies = movable_bodies(s);
    Rng rng(5);
    auto state = initialize(s, 5);
    sync_rigid_groups(s, state);
    for (int i = 0; i < 500; ++i) {
        if (!propose(s, bodies, state, 0.3, 0.2, 0.5, rng)) {
            continue;
        }
        for (const auto& g : s.groups) {
            if (g.rigidity != Rigidity::Rigid) {
                continue;
            }
            for (std::size_t m = 0; m < g.members.size(); ++m) {
                const Pose local = relative(state[g.particle].pose(), state[s.objects[g.members[m]].particle].pose());
                EXPECT_LT((local.position - g.offsets[m].position).norm(), 1e-9);
            }
        }
    }
}

TEST(Propose, ShiftSpreadMatchesSigma)
{
    // A room large enough that reflection almost never triggers.
    const Scene s = single_object_scene(0.1, 100.0, Pose{Vec2(50, 50), 0.0, 1.0});
    const auto bodies = movable_bodies(s);
    Rng rng(11);
    std::vector<double> dx;
    std::vector<double> dy;
    std::vector<double> dtheta;
    for (int i = 0; i < 100000; ++i) {
        auto state = s.particles;
        const auto p = propose(s, bodies, state, 0.7, 0.25, 0.5, rng);
        ASSERT_TRUE(p);
        if (p->moved_position) {
            dx.push_back(state[0].position.x() - 50.0);
            dy.push_back(state[0].position.y() - 50.0);
        } else {
            dtheta.push_back(angle_difference(1.0, state[0].orientation));
        }
    }
    EXPECT_NEAR(sample_std(dx), 0.7, 0.7 * 0.01);
    EXPECT_NEAR(sample_std(dy), 0.7, 0.7 * 0.01);
    EXPECT_NEAR(sample_std(dtheta), 0.25, 0.25 * 0.01);
}

TEST(Propose, StaysInsideRoom)
{
    Scene s = single_object_scene(0.1);
    s.room = Room::from_polygon({Vec2(0, 0), Vec2(4, 0), Vec2(4, 1), Vec2(1, 1), Vec2(1, 4), Vec2(0, 4)});
    const auto bodies = movable_bodies(s);
    Rng rng(2);
    auto state = s.particles;
    state[0].position = Vec2(0.5, 0.5);
    int rejected = 0;
    for (int i = 0; i < 20000; ++i) {
        const auto before = state;
        if (!propose(s, bodies, state, 1.5, 0.2, 1.0, rng)) {
            ++rejected;
            EXPECT_EQ(state, before);
        }
        EXPECT_TRUE(s.room.contains(state[0].position));
    }
    EXPECT_GT(rejected, 0);
}

TEST(Accept, DownhillAlways)
{
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        EXPECT_TRUE(accept(5.0, 5.0 - 1e-3 * i, 1e-6, rng));
    }
    EXPECT_TRUE(accept(5.0, 5.0, 1e-6, rng));
}

TEST(Accept, UnitRatioGivesInverseE)
{
    Rng rng(17);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        hits += accept(1.0, 3.5, 2.5, rng);
    }
    EXPECT_NEAR(static_cast<double>(hits) / n, std::exp(-1.0), 0.01);
}

TEST(Accept, ColdLimitRejectsUphill)
{
    Rng rng(4);
    double previous = 1.0;
    for (double t : {1.0, 0.1, 0.01, 1e-4}) {
        int hits = 0;
        for (int i = 0; i < 20000; ++i) {
            hits += accept(0.0, 0.05, t, rng);
        }
        const double rate = hits / 20000.0;
        EXPECT_LE(rate, previous);
        previous = rate;
    }
    EXPECT_EQ(previous, 0.0);
    EXPECT_THROW(accept(0.0, 1.0, 0.0, rng), SolverError);
}

TEST(Anneal, FlatEnergyIsUniform)
{
    // A near-point object: its boundary term vanishes away from a 1e-3 rim,
    // so every move is accepted and the chain samples the proposal kernel.
    const Scene s = single_object_scene(1e-3 / std::sqrt(2.0), 10.0, Pose{Vec2(5, 5), 0.0, 0.0});
    const SceneIndex index(s);
    const auto bodies = movable_bodies(s);
    Rng rng(23);
    auto state = s.particles;
    double e = evaluate_energy(s, index, state).total;
    constexpr int bins = 10;
    std::array<int, bins * bins> counts{};
    const int steps = 1000000;
    const int thin = 10;
    for (int t = 1; t <= steps; ++t) {
        auto candidate = state;
        if (propose(s, bodies, candidate, 3.0, 0.2, 1.0, rng)) {
            const double ec = evaluate_energy(s, index, candidate).total;
            if (accept(e, ec, 1e3, rng)) {
                state = candidate;
                e = ec;
            }
        }
        if (t % thin == 0) {
            const auto bx = std::min(bins - 1, static_cast<int>(state[0].position.x()));
            const auto by = std::min(bins - 1, static_cast<int>(state[0].position.y()));
            ++counts[static_cast<std::size_t>(by * bins + bx)];
        }
    }
    const double expected = static_cast<double>(steps / thin) / (bins * bins);
    double chi2 = 0.0;
    for (int c : counts) {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // Upper 0.1 % point of chi-squared with 99 degrees of freedom.
    EXPECT_LT(chi2, 148.23);
}

TEST(Anneal, PreSatisfiedStopsAtStallWindow)
{
    Scene s = single_object_scene(0.3, 10.0, Pose{Vec2(5, 5), 0.0, 0.0});
    AnnealConfig config;
    config.sigma_position = 0.05;
    const auto r = run_sa_mcmc(s, config);
    EXPECT_EQ(r.trace.iterations(), 1501);
    EXPECT_EQ(r.final_energy, 0.0);
}

TEST(Anneal, SameSeedSameTrajectory)
{
    const Scene s = build("desk");
    AnnealConfig config;
    config.total_iterations = 3000;
    config.seed = 6;
    const auto a = run_sa_mcmc(s, config);
    const auto b = run_sa_mcmc(s, config);
    EXPECT_EQ(a.trace.energy, b.trace.energy);
    EXPECT_EQ(a.layout, b.layout);
    config.seed = 7;
    EXPECT_NE(run_sa_mcmc(s, config).trace.energy, a.trace.energy);
}

TEST(Anneal, BestIsMonotoneAndReturned)
{
    const Scene s = build("living_room");
    AnnealConfig config;
    config.total_iterations = 4000;
    config.seed = 2;
    const auto r = run_sa_mcmc(s, config);
    for (std::size_t t = 1; t < r.trace.best_energy.size(); ++t) {
        EXPECT_LE(r.trace.best_energy[t], r.trace.best_energy[t - 1]);
    }
    EXPECT_NEAR(evaluate_energy(s, r.layout).total, r.final_energy, 1e-9);
    EXPECT_LT(r.final_energy, r.trace.initial_energy);
    EXPECT_EQ(r.t_initial, std::max(r.trace.initial_energy, 10.0 * config.t_final));
    EXPECT_DOUBLE_EQ(r.sigma_position, 0.1 * s.room.bounds().diagonal());
}

TEST(Anneal, RejectsBadConfig)
{
    AnnealConfig config;
    config.t_initial = 1e-4;
    EXPECT_THROW(config.validate(), SolverError);
    config = {};
    config.position_probability = 1.5;
    EXPECT_THROW(config.validate(), SolverError);
}
