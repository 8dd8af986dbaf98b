#include "layout/catalogue.hpp"
#include "layout/scenes.hpp"
#include "layout/solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace layout;

namespace {

std::size_t count_label(const Scene& s, const std::string& label)
{
    return static_cast<std::size_t>(
        std::count_if(s.objects.begin(), s.objects.end(), [&](const LayoutObject& o) { return o.label == label; }));
}

std::set<ConstraintKind> kinds(const Scene& s)
{
    std::set<ConstraintKind> out;
    for (const auto& c : s.constraints) {
        out.insert(c.kind);
    }
    return out;
}

std::size_t count_kind(const Scene& s, ConstraintKind kind)
{
    return static_cast<std::size_t>(
        std::count_if(s.constraints.begin(), s.constraints.end(), [&](const Constraint& c) { return c.kind == kind; }));
}

// Satisfactory: weighted energy under this bound with no hard violation.
constexpr double kSatisfactoryEnergy = 3.0;
constexpr double kOverlapTolerance = 1e-6;
constexpr double kBoundaryTolerance = 1e-9;

} // namespace

TEST(Templates, NamesAreTheSeven)
{
    const std::vector<std::string> expected{"theater1", "theater2",    "picnic",   "living_room",
                                            "desk",     "tp_bedroom", "tp_picnic"};
    EXPECT_EQ(template_names(), expected);
    EXPECT_THROW(build("ballroom"), SceneError);
}

TEST(Templates, AllValidate)
{
    for (const auto& name : template_names()) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            EXPECT_NO_THROW(build(name, {}, seed).validate()) << name;
        }
    }
}

TEST(Templates, Theater1Counts)
{
    const Scene s = build("theater1");
    EXPECT_EQ(s.objects.size(), 201u);
    EXPECT_EQ(count_label(s, "chair"), 200u);
    EXPECT_EQ(count_label(s, "stage"), 1u);
    EXPECT_TRUE(s.collisions_enabled);
}

TEST(Templates, PicnicCounts)
{
    const Scene s = build("picnic");
    EXPECT_EQ(s.objects.size(), 77u);
    EXPECT_EQ(count_label(s, "round_table"), 14u);
    EXPECT_EQ(count_label(s, "chair"), 48u);
    EXPECT_EQ(count_label(s, "trash_can"), 8u);
    EXPECT_EQ(count_label(s, "bbq_grill"), 6u);
    EXPECT_EQ(count_label(s, "carousel"), 1u);
}

TEST(Templates, LivingRoomCount)
{
    EXPECT_EQ(build("living_room").objects.size(), 10u);
}

TEST(Templates, ConstraintFamilies)
{
    using K = ConstraintKind;
    const std::map<std::string, std::set<K>> expected{
        {"theater1", {K::FocalPoint, K::PairwiseOrientation, K::TrafficLane, K::WallDistance}},
        {"theater2", {K::FocalPoint, K::FocalSymmetry, K::HeatPoint, K::PairwiseDistance, K::PairwiseOrientation}},
        {"picnic", {K::FocalPoint, K::HeatPoint, K::PairwiseDistance, K::PairwiseOrientation}},
        {"living_room",
         {K::FocalPoint, K::PairwiseOrientation, K::VisualBalance, K::WallDistance, K::WallOrientation}},
        {"desk", {K::FocalPoint, K::HeatPoint, K::PairwiseDistance, K::Stacking, K::WallDistance}},
        {"tp_bedroom", {K::FocalPoint, K::PairwiseDistance, K::PairwiseOrientation, K::WallDistance}},
        {"tp_picnic", {K::HeatPoint, K::PairwiseDistance}},
    };
    for (const auto& [name, families] : expected) {
        EXPECT_EQ(kinds(build(name)), families) << name;
    }
}

TEST(Templates, PicnicTablesEachHaveFourChairs)
{
    const Scene s = build("picnic");
    std::map<std::size_t, int> per_focal;
    for (const auto& c : s.constraints) {
        if (c.kind == ConstraintKind::FocalPoint) {
            ++per_focal[c.participants[1]];
        }
    }
    const SceneIndex index(s);
    int seated = 0;
    for (const auto& [focal, n] : per_focal) {
        EXPECT_EQ(s.objects[*index.object[focal]].label, "round_table");
        EXPECT_EQ(n, 4);
        ++seated;
    }
    EXPECT_EQ(seated, 12);
}

TEST(Templates, Theater2Variants)
{
    for (const char* tier : {"arc", "segment"}) {
        for (int pathways = 0; pathways <= 2; ++pathways) {
            SceneParams p;
            p.set("tier", tier).set("pathways", pathways);
            const Scene s = build("theater2", p);
            EXPECT_FALSE(s.collisions_enabled);
            std::size_t chairs = 0;
            for (const auto& g : s.groups) {
                ASSERT_TRUE(g.curve);
                EXPECT_EQ(g.curve->kind, std::string(tier) == "arc" ? CurveKind::Arc : CurveKind::Segment);
                chairs += g.members.size();
            }
            EXPECT_EQ(chairs, count_label(s, "chair"));
            EXPECT_EQ(count_kind(s, ConstraintKind::TrafficLane), chairs * static_cast<std::size_t>(pathways))
                << tier << " " << pathways;
        }
    }
}

TEST(Templates, Theater2HeatsStageAtFrontMidpoint)
{
    const Scene s = build("theater2");
    const auto stage = *s.find_particle("stage");
    bool found = false;
    for (const auto& c : s.constraints) {
        if (c.kind == ConstraintKind::HeatPoint && c.participants == std::vector<std::size_t>{stage}) {
            const Aabb box = s.room.bounds();
            EXPECT_NEAR(c.target.x(), 0.5 * (box.min.x() + box.max.x()), 1e-12);
            EXPECT_LT(c.target.y() - box.min.y(), 0.25 * (box.max.y() - box.min.y()));
            found = true;
        }
    }
    EXPECT_TRUE(found);
}

TEST(Templates, TpPicnicRandomizesCounts)
{
    std::set<std::size_t> sizes;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        sizes.insert(build("tp_picnic", {}, seed).objects.size());
        EXPECT_EQ(build("tp_picnic", {}, seed).objects.size(), build("tp_picnic", {}, seed).objects.size());
    }
    EXPECT_GT(sizes.size(), 1u);
    SceneParams fixed;
    fixed.set("randomize", "false");
    EXPECT_EQ(build("tp_picnic", fixed, 1).objects.size(), build("tp_picnic", fixed, 2).objects.size());
}

TEST(Templates, TpPicnicRoundTablesAreRigidWithFourChairs)
{
    const Scene s = build("tp_picnic", {}, 3);
    ASSERT_FALSE(s.groups.empty());
    for (const auto& g : s.groups) {
        EXPECT_EQ(g.rigidity, Rigidity::Rigid);
        EXPECT_EQ(g.members.size(), 5u);
        EXPECT_EQ(std::count_if(g.members.begin(), g.members.end(),
                                [&](std::size_t m) { return s.objects[m].label == "chair"; }),
                  4);
    }
}

TEST(Templates, ParametersAreChecked)
{
    SceneParams unknown;
    unknown.set("sofas", 3.0);
    try {
        build("living_room", unknown);
        FAIL();
    } catch (const SceneError& e) {
        EXPECT_NE(std::string(e.what()).find("sofas"), std::string::npos);
    }
    SceneParams range;
    range.set("chairs", -4.0);
    EXPECT_THROW(build("theater1", range), SceneError);
    SceneParams text;
    text.set("chairs", "many");
    EXPECT_THROW(build("theater1", text), SceneError);
    SceneParams choice;
    choice.set("tier", "spiral");
    EXPECT_THROW(build("theater2", choice), SceneError);
}

TEST(Params, ParseEntries)
{
    const std::vector<std::string> entries{"chairs=12", "tier=arc"};
    const auto p = SceneParams::parse(entries);
    EXPECT_EQ(p.integer("chairs", 0, 0, 100), 12);
    EXPECT_EQ(p.choice("tier", "segment", {"arc", "segment"}), "arc");
    const std::vector<std::string> bad{"chairs"};
    EXPECT_THROW(SceneParams::parse(bad), SceneError);
}

TEST(Scaling, SeriesCounts)
{
    const std::vector<int> counts{50, 100, 200};
    const auto series = scaling_series(counts);
    ASSERT_EQ(series.size(), 3u);
    EXPECT_EQ(series[0].objects.size(), 51u);
    EXPECT_EQ(series[1].objects.size(), 101u);
    EXPECT_EQ(series[2].objects.size(), 201u);
    // Only the chairs and the room sized to hold them differ.
    EXPECT_EQ(kinds(series[0]), kinds(series[2]));
    EXPECT_EQ(series[0].objects[0].label, series[2].objects[0].label);
}

TEST(Scaling, StageOnly)
{
    const std::vector<int> counts{0};
    const Scene s = scaling_series(counts).front();
    ASSERT_EQ(s.objects.size(), 1u);
    EXPECT_EQ(s.objects[0].label, "stage");
    EXPECT_NO_THROW(s.validate());
    const auto r = synthesize(s, SolverConfig{});
    EXPECT_EQ(r.final_energy, 0.0);
    EXPECT_EQ(r.trace.iterations(), 51);
}

TEST(Scaling, RejectsNegativeCounts)
{
    const std::vector<int> counts{10, -1};
    EXPECT_THROW(scaling_series(counts), SceneError);
}

TEST(Catalogue, KnownLabels)
{
    for (const auto& name : template_names()) {
        for (const auto& o : build(name).objects) {
            const auto& item = catalogue_item(o.label);
            EXPECT_NEAR(2.0 * o.bbox.half_extents.x(), item.depth, 1e-12) << o.label;
            EXPECT_NEAR(2.0 * o.bbox.half_extents.y(), item.width, 1e-12) << o.label;
        }
    }
    EXPECT_THROW(catalogue_item("spaceship"), SceneError);
}

// Every scene and seed ends collision-free and in bounds; at least 19 of 20
// seeds reach a satisfactory energy.
class SceneSeeds : public ::testing::TestWithParam<std::string> {};

TEST_P(SceneSeeds, CollisionFreeAndMostlySatisfactory)
{
    const std::string name = GetParam();
    int satisfactory = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scene s = build(name, {}, seed);
        SolverConfig config;
        config.seed = seed;
        const auto r = synthesize(s, config);
        const SceneIndex index(s);
        const auto hv = hard_violation(s, index, r.layout);
        EXPECT_LE(hv.max_overlap, kOverlapTolerance) << name << " seed " << seed;
        EXPECT_LE(hv.max_boundary, kBoundaryTolerance) << name << " seed " << seed;
        EXPECT_LT(r.final_energy, r.trace.initial_energy) << name << " seed " << seed;
        satisfactory += r.final_energy < kSatisfactoryEnergy;
    }
    EXPECT_GE(satisfactory, 19) << name;
}

INSTANTIATE_TEST_SUITE_P(AllTemplates, SceneSeeds, ::testing::ValuesIn(template_names()));

TEST(TpPicnic, ConvergesAroundTheReportedIteration)
{
    constexpr int reported = 220;

    // Convergence: the last iteration after which the best energy still falls
    // by more than 0.01 over the following termination window.
    std::vector<int> converged;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scene s = build("tp_picnic", {}, seed);
        SolverConfig config;
        config.seed = seed;
        config.settle = false;
        const auto r = synthesize(s, config);
        const auto& best = r.trace.best_energy;
        int last = 0;
        for (std::size_t l = 0; l < best.size(); ++l) {
            const std::size_t ahead = std::min(best.size() - 1, l + static_cast<std::size_t>(config.termination_window));
            if (best[l] - best[ahead] > 0.01) {
                last = static_cast<int>(l) + 1;
            }
        }
        converged.push_back(last);
    }
    std::nth_element(converged.begin(), converged.begin() + 10, converged.end());
    const int median = converged[10];
    EXPECT_GE(median, reported / 2);
    EXPECT_LE(median, reported * 2);
}
