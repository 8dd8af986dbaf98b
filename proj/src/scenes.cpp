#include "layout/scenes.hpp"

#include "layout/catalogue.hpp"
#include "layout/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

namespace layout {

// --- parameters -----------------------------------------------------------------

SceneParams& SceneParams::set(const std::string& key, const std::string& value)
{
    values_[key] = value;
    return *this;
}

SceneParams& SceneParams::set(const std::string& key, double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    values_[key] = std::string(buf, res.ptr);
    return *this;
}

SceneParams SceneParams::parse(std::span<const std::string> entries)
{
    SceneParams params;
    for (const auto& e : entries) {
        const auto eq = e.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw SceneError("parameter '" + e + "' is not of the form key=value");
        }
        params.set(e.substr(0, eq), e.substr(eq + 1));
    }
    return params;
}

const std::string* SceneParams::lookup(const std::string& key) const
{
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

double SceneParams::number(const std::string& key, double fallback, double lo, double hi) const
{
    const std::string* text = lookup(key);
    if (!text) {
        return fallback;
    }
    double v = 0.0;
    const auto res = std::from_chars(text->data(), text->data() + text->size(), v);
    if (res.ec != std::errc() || res.ptr != text->data() + text->size()) {
        throw SceneError("parameter '" + key + "' is not a number: '" + *text + "'");
    }
    if (!(v >= lo && v <= hi)) {
        throw SceneError("parameter '" + key + "' = " + *text + " is outside [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    }
    return v;
}

int SceneParams::integer(const std::string& key, int fallback, int lo, int hi) const
{
    const std::string* text = lookup(key);
    if (!text) {
        return fallback;
    }
    int v = 0;
    const auto res = std::from_chars(text->data(), text->data() + text->size(), v);
    if (res.ec != std::errc() || res.ptr != text->data() + text->size()) {
        throw SceneError("parameter '" + key + "' is not an integer: '" + *text + "'");
    }
    if (v < lo || v > hi) {
        throw SceneError("parameter '" + key + "' = " + *text + " is outside [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    }
    return v;
}

bool SceneParams::flag(const std::string& key, bool fallback) const
{
    const std::string* text = lookup(key);
    if (!text) {
        return fallback;
    }
    if (*text == "true" || *text == "1") {
        return true;
    }
    if (*text == "false" || *text == "0") {
        return false;
    }
    throw SceneError("parameter '" + key + "' is not a boolean: '" + *text + "'");
}

std::string SceneParams::choice(const std::string& key, const std::string& fallback,
                                std::initializer_list<std::string_view> allowed) const
{
    const std::string* text = lookup(key);
    if (!text) {
        return fallback;
    }
    if (std::find(allowed.begin(), allowed.end(), *text) == allowed.end()) {
        throw SceneError("parameter '" + key + "' has unsupported value '" + *text + "'");
    }
    return *text;
}

std::vector<std::string> SceneParams::unused() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
        if (!used_.contains(k)) {
            out.push_back(k);
        }
    }
    return out;
}

// --- builder --------------------------------------------------------------------

namespace {

class Builder {
public:
    explicit Builder(std::string name) { scene_.name = std::move(name); }

    void room(Room r) { scene_.room = std::move(r); }

    std::size_t object(const std::string& id, std::string_view label, std::optional<Pose> pose = std::nullopt)
    {
        LayoutObject obj;
        obj.id = id;
        obj.label = std::string(label);
        obj.bbox = catalogue_item(label).box();
        obj.particle = scene_.particles.size();
        obj.initial_pose = pose;
        Particle p;
        p.set_mass(mass_from_bbox(obj.bbox));
        p.z = obj.bbox.half_height;
        if (pose) {
            obj.initial_pose->z = obj.bbox.half_height;
            p.set_pose(*obj.initial_pose);
        }
        scene_.particles.push_back(p);
        scene_.objects.push_back(std::move(obj));
        return scene_.objects.size() - 1;
    }

    std::size_t particle(std::size_t object) const { return scene_.objects[object].particle; }

    void access(std::size_t object, Face face, double depth)
    {
        auto& obj = scene_.objects[object];
        obj.access[static_cast<std::size_t>(face)] = face_region(obj.bbox, face, depth);
    }

    std::size_t rigid_group(const std::string& id, std::vector<std::size_t> members, std::vector<Pose> offsets)
    {
        Group g;
        g.id = id;
        g.rigidity = Rigidity::Rigid;
        g.members = std::move(members);
        g.offsets = std::move(offsets);
        for (std::size_t m = 0; m < g.members.size(); ++m) {
            g.offsets[m].z = scene_.objects[g.members[m]].bbox.half_height;
        }
        return add_group(std::move(g));
    }

    std::size_t curve_group(const std::string& id, std::vector<std::size_t> members, const Curve& curve,
                            std::vector<double> params)
    {
        Group g;
        g.id = id;
        g.rigidity = Rigidity::Nonrigid;
        g.members = std::move(members);
        g.curve = curve;
        g.params = std::move(params);
        return add_group(std::move(g));
    }

    std::size_t group_particle(std::size_t g) const { return scene_.groups[g].particle; }

    Constraint& add(ConstraintKind kind, std::vector<std::size_t> participants)
    {
        scene_.constraints.push_back(make_constraint(kind, std::move(participants)));
        return scene_.constraints.back();
    }

    void distance(std::size_t a, std::size_t b, double d) { add(ConstraintKind::PairwiseDistance, {a, b}).distance = d; }

    void at_least(std::size_t a, std::size_t b, double d)
    {
        auto& c = add(ConstraintKind::PairwiseDistance, {a, b});
        c.distance = d;
        c.relation = Relation::Inequality;
    }

    void focal(std::size_t member, std::size_t focal_particle, double d)
    {
        auto& c = add(ConstraintKind::FocalPoint, {member, focal_particle});
        c.distance = d;
        c.anchor_secondary = true;
    }

    void face(std::size_t p, std::size_t target, OrientationGoal other = OrientationGoal::None)
    {
        auto& c = add(ConstraintKind::PairwiseOrientation, {p, target});
        c.first_goal = OrientationGoal::FaceOther;
        c.second_goal = other;
    }

    void lane(std::size_t p, std::size_t origin, const Vec2& v, double d)
    {
        auto& c = add(ConstraintKind::TrafficLane, {p, origin});
        c.direction = v;
        c.distance = d;
        c.anchor_secondary = true;
    }

    void heat(std::vector<std::size_t> ps, const Vec2& target) { add(ConstraintKind::HeatPoint, std::move(ps)).target = target; }

    void wall_distance(std::size_t p, double d) { add(ConstraintKind::WallDistance, {p}).distance = d; }

    void wall_orientation(std::size_t p, double offset) { add(ConstraintKind::WallOrientation, {p}).angle_offset = offset; }

    /// Renumbers particles objects-first, then groups, the order a scene file
    /// implies.
    Scene finish()
    {
        std::vector<std::size_t> to(scene_.particles.size());
        std::vector<Particle> particles;
        particles.reserve(scene_.particles.size());
        const auto move = [&](std::size_t& p) {
            to[p] = particles.size();
            particles.push_back(scene_.particles[p]);
            p = to[p];
        };
        for (auto& obj : scene_.objects) {
            move(obj.particle);
        }
        for (auto& g : scene_.groups) {
            move(g.particle);
        }
        scene_.particles = std::move(particles);
        for (auto& c : scene_.constraints) {
            for (auto& p : c.participants) {
                p = to[p];
            }
        }
        scene_.validate();
        return std::move(scene_);
    }

    Scene& scene() { return scene_; }

private:
    std::size_t add_group(Group g)
    {
        g.particle = scene_.particles.size();
        g.bbox = group_bounds(scene_, g);
        Particle p;
        p.set_mass(mass_from_bbox(g.bbox));
        scene_.particles.push_back(p);
        scene_.groups.push_back(std::move(g));
        return scene_.groups.size() - 1;
    }

    Scene scene_;
};

std::string numbered(std::string_view stem, std::size_t i)
{
    return std::string(stem) + "_" + std::to_string(i + 1);
}

double radius_of(std::string_view label)
{
    return catalogue_item(label).box().bounding_radius();
}

// Distance keeping a bounding circle just clear of the wall.
double flush(std::string_view label)
{
    return radius_of(label) + 0.02;
}

// --- theater --------------------------------------------------------------------

constexpr double kLaneClearance = 0.6;

std::vector<Vec2> lane_directions(int lanes, double spread)
{
    const double forward = 0.5 * kPi;
    switch (lanes) {
    case 1:
        return {direction(forward)};
    case 2:
        return {direction(forward - spread), direction(forward + spread)};
    default:
        return {};
    }
}

Scene theater1(const SceneParams& params)
{
    const int chairs = params.integer("chairs", 200, 0, 5000);
    const int lanes = params.integer("lanes", 2, 0, 2);
    const double rc = radius_of("chair");
    const double rs = radius_of("stage");
    constexpr double kPitch = 0.8;
    constexpr double kSpacing = 1.2;
    constexpr double kFill = 0.7;

    // Tier radii around the stage; capacity grows with the tier's arc length.
    std::vector<double> tier_of_chair;
    const double r0 = rs + rc + 0.5;
    double radius = r0;
    while (static_cast<int>(tier_of_chair.size()) < chairs) {
        const double arc = kPi * radius - lanes * 2.0 * kLaneClearance;
        const int capacity = std::max(1, static_cast<int>(std::floor(kFill * arc / kPitch)));
        const int take = std::min(capacity, chairs - static_cast<int>(tier_of_chair.size()));
        tier_of_chair.insert(tier_of_chair.end(), static_cast<std::size_t>(take), radius);
        radius += kSpacing;
    }
    const double r_max = tier_of_chair.empty() ? r0 : tier_of_chair.back();

    const double wall = rs + 0.05;
    const double width = 2.0 * (r_max + 1.0);
    const double depth = wall + r_max + 1.0;

    Builder b("theater1");
    b.room(Room::rectangle(width, depth));
    const std::size_t stage = b.object("stage", "stage", Pose{Vec2(0.5 * width, wall), 0.0, 0.5 * kPi});
    const std::size_t sp = b.particle(stage);
    b.wall_distance(sp, wall);
    const auto lane_dirs = lane_directions(lanes, 0.45);
    for (std::size_t i = 0; i < tier_of_chair.size(); ++i) {
        const std::size_t c = b.object(numbered("chair", i), "chair");
        b.access(c, Face::Front, 0.3);
        const std::size_t cp = b.particle(c);
        b.focal(cp, sp, tier_of_chair[i]);
        b.face(cp, sp);
        for (const auto& v : lane_dirs) {
            b.lane(cp, sp, v, kLaneClearance);
        }
    }
    return b.finish();
}

// Lateral seat offsets along one tier, symmetric about the axis, skipping the
// clearance band around each lane crossing.
std::vector<double> tier_offsets(int count, double pitch, std::span<const double> lanes, double half_gap)
{
    const auto blocked = [&](double x) {
        for (double l : lanes) {
            if (std::abs(x - l) < half_gap) {
                return std::optional<double>(l + half_gap);
            }
        }
        return std::optional<double>();
    };
    const bool center_lane = blocked(0.0).has_value();
    std::vector<double> side;
    const int paired = center_lane ? count / 2 * 2 : count - count % 2;
    double x = center_lane ? half_gap : (count % 2 ? pitch : 0.5 * pitch);
    while (static_cast<int>(side.size()) * 2 < paired) {
        if (const auto pushed = blocked(x); pushed && *pushed > x) {
            x = *pushed;
        }
        side.push_back(x);
        x += pitch;
    }
    std::vector<double> out;
    for (auto it = side.rbegin(); it != side.rend(); ++it) {
        out.push_back(-*it);
    }
    if (!center_lane && count % 2) {
        out.push_back(0.0);
    }
    out.insert(out.end(), side.begin(), side.end());
    if (static_cast<int>(out.size()) < count) {
        out.push_back(out.empty() ? half_gap : out.back() + pitch);
    }
    return out;
}

Scene theater2(const SceneParams& params)
{
    const std::string shape = params.choice("tier", "arc", {"arc", "segment"});
    const int pathways = params.integer("pathways", 0, 0, 2);
    const bool arc = shape == "arc";
    const int default_tiers = arc ? 10 : (pathways == 2 ? 7 : 12);
    const int default_per = arc ? 18 : (pathways == 2 ? 35 : 14);
    const int tiers = params.integer("tiers", default_tiers, 1, 60);
    const int per = params.integer("chairs_per_tier", default_per, 1, 200);
    const double rc = radius_of("chair");
    const double rs = radius_of("stage");
    constexpr double kPitch = 0.8;
    constexpr double kSpacing = 1.1;
    constexpr double kMaxHalfAngle = 1.2;
    constexpr double kLaneSpread = 0.35;

    std::vector<double> lane_angles;
    if (pathways == 1) {
        lane_angles = {0.0};
    } else if (pathways == 2) {
        lane_angles = {-kLaneSpread, kLaneSpread};
    }
    const double span = (per - 1) * kPitch + pathways * 2.0 * kLaneClearance;
    double r0 = rs + rc + 0.8;
    if (arc) {
        r0 = std::max(r0, 0.5 * span / kMaxHalfAngle);
    }

    // Tier frame: +x points at the stage, which sits at (radius, 0). Seats are
    // laid out by lateral offset s; on an arc s is arc length from the axis.
    struct Tier {
        double radius;
        Curve curve;
        std::vector<double> params;
        std::vector<Vec2> seats; ///< ideal seat points in the tier frame
    };
    std::vector<Tier> plan;
    for (int t = 0; t < tiers; ++t) {
        Tier tier;
        const double radius = r0 + t * kSpacing;
        tier.radius = radius;
        std::vector<double> lanes;
        double half_gap = 0.0;
        for (double a : lane_angles) {
            lanes.push_back(arc ? radius * a : radius * std::tan(a));
            half_gap = std::max(half_gap, arc ? radius * std::asin(std::min(1.0, kLaneClearance / radius))
                                              : kLaneClearance / std::cos(a));
        }
        half_gap += 0.05;
        const auto offsets = tier_offsets(per, kPitch, lanes, half_gap);
        const auto local = [&](double s) {
            return arc ? Vec2(Vec2(radius, 0.0) + radius * direction(kPi + s / radius)) : Vec2(0.0, s);
        };
        double lo = offsets.front();
        double hi = offsets.back();
        if (hi - lo < 1e-9) {
            lo -= 0.5 * kPitch;
            hi += 0.5 * kPitch;
        }
        tier.curve = arc ? Curve::arc(local(lo), local(hi), Vec2(radius, 0.0)) : Curve::segment(local(lo), local(hi));
        for (double s : offsets) {
            tier.params.push_back((s - lo) / (hi - lo));
            tier.seats.push_back(local(s));
        }
        plan.push_back(std::move(tier));
    }

    const double wall = rs + 0.05;
    const auto tier_pose = [&](const Tier& tier, const Vec2& stage_pos) {
        return Pose{stage_pos + Vec2(0.0, tier.radius), 0.0, 1.5 * kPi};
    };
    double half_width = 0.5 * catalogue_item("stage").width;
    double top = wall + r0;
    for (const auto& tier : plan) {
        const Pose pose = tier_pose(tier, Vec2::Zero());
        for (const auto& seat : tier.seats) {
            const Vec2 q = compose(pose, Pose{seat}).position;
            half_width = std::max(half_width, std::abs(q.x()));
            top = std::max(top, wall + q.y());
        }
    }
    const double width = 2.0 * (half_width + 1.5);
    const double depth = top + 1.5;
    const Vec2 stage_pos(0.5 * width, wall);

    Builder b("theater2");
    b.scene().collisions_enabled = false;
    b.room(Room::rectangle(width, depth));
    const std::size_t stage = b.object("stage", "stage", Pose{stage_pos, 0.0, 0.5 * kPi});
    const std::size_t sp = b.particle(stage);
    b.heat({sp}, stage_pos);

    std::optional<std::size_t> previous;
    for (int t = 0; t < tiers; ++t) {
        const auto& tier = plan[static_cast<std::size_t>(t)];
        std::vector<std::size_t> members;
        std::vector<std::size_t> member_particles;
        for (int i = 0; i < per; ++i) {
            const std::size_t c = b.object("tier" + std::to_string(t + 1) + "_chair_" + std::to_string(i + 1), "chair");
            members.push_back(c);
            member_particles.push_back(b.particle(c));
        }
        const std::size_t g = b.curve_group("tier_" + std::to_string(t + 1), members, tier.curve, tier.params);
        const std::size_t gp = b.group_particle(g);
        b.focal(gp, sp, tier.radius);
        b.face(gp, sp);
        b.heat({gp}, tier_pose(tier, stage_pos).position);
        if (previous) {
            b.distance(*previous, gp, kSpacing);
        }
        previous = gp;

        std::vector<std::size_t> symmetric{sp};
        for (std::size_t i = 0; i < member_particles.size(); ++i) {
            const std::size_t cp = member_particles[i];
            b.face(cp, sp);
            for (double a : lane_angles) {
                b.lane(cp, sp, direction(0.5 * kPi + a), kLaneClearance);
            }
            if (i + 1 < member_particles.size()) {
                b.distance(cp, member_particles[i + 1], (tier.seats[i + 1] - tier.seats[i]).norm());
            }
            // Keeps the chain from folding back on itself along the curve.
            if (i + 2 < member_particles.size()) {
                b.at_least(cp, member_particles[i + 2], 0.95 * (tier.seats[i + 2] - tier.seats[i]).norm());
            }
            symmetric.push_back(cp);
        }
        if (member_particles.size() > 1) {
            // Phased in so early symmetry pulls do not drag members off their tier.
            auto& sym = b.add(ConstraintKind::FocalSymmetry, symmetric);
            sym.direction = Vec2(0.0, 1.0);
            sym.stiffness = {0.5, 0.5, Schedule::Increasing, 10.0};
        }
    }
    return b.finish();
}

// --- picnic ---------------------------------------------------------------------

Scene picnic(const SceneParams& params)
{
    const int tables = params.integer("tables", 14, 1, 40);
    const int seated = params.integer("seated_tables", 12, 0, tables);
    const int cans = params.integer("trash_cans", 8, 0, 40);
    const int grills = params.integer("grills", 6, 0, 40);
    const double width = params.number("width", 22.0, 5.0, 200.0);
    const double depth = params.number("depth", 16.0, 5.0, 200.0);
    constexpr double kSeat = 1.25;

    Builder b("picnic");
    b.room(Room::rectangle(width, depth));

    // Table targets: two full rows at the bottom, a split row beside the
    // carousel at the top.
    std::vector<Vec2> targets;
    const double x0 = 2.3;
    for (double y : {2.3, 6.3}) {
        for (int i = 0; i < 5; ++i) {
            targets.emplace_back(x0 + i * (width - 2.0 * x0) / 4.0, y);
        }
    }
    for (double x : {x0, 5.8, width - 5.8, width - x0}) {
        targets.emplace_back(x, 10.3);
    }
    for (int i = 0; static_cast<int>(targets.size()) < tables; ++i) {
        targets.emplace_back(x0 + (i % 5) * (width - 2.0 * x0) / 4.0, 1.0 + 0.5 * i);
    }

    for (int t = 0; t < tables; ++t) {
        const std::size_t table = b.object(numbered("table", static_cast<std::size_t>(t)), "round_table");
        const std::size_t tp = b.particle(table);
        b.heat({tp}, targets[static_cast<std::size_t>(t)]);
        if (t >= seated) {
            continue;
        }
        std::vector<std::size_t> ring;
        for (int c = 0; c < 4; ++c) {
            const std::size_t chair = b.object("table_" + std::to_string(t + 1) + "_chair_" + std::to_string(c + 1), "chair");
            const std::size_t cp = b.particle(chair);
            b.focal(cp, tp, kSeat);
            b.face(cp, tp);
            ring.push_back(cp);
        }
        for (std::size_t c = 0; c < ring.size(); ++c) {
            b.distance(ring[c], ring[(c + 1) % ring.size()], kSeat * std::sqrt(2.0));
        }
    }

    std::vector<std::size_t> grill_particles;
    for (int g = 0; g < grills; ++g) {
        const std::size_t grill = b.object(numbered("bbq_grill", static_cast<std::size_t>(g)), "bbq_grill");
        grill_particles.push_back(b.particle(grill));
    }
    for (std::size_t g = 0; g + 1 < grill_particles.size(); ++g) {
        b.distance(grill_particles[g], grill_particles[g + 1], 1.6);
    }

    const std::vector<Vec2> can_targets{Vec2(0.9, depth - 0.9), Vec2(width - 0.9, depth - 0.9), Vec2(0.9, 8.3),
                                        Vec2(width - 0.9, 8.3)};
    for (int c = 0; c < cans; c += 2) {
        std::vector<std::size_t> group;
        for (int k = c; k < std::min(cans, c + 2); ++k) {
            group.push_back(b.particle(b.object(numbered("trash_can", static_cast<std::size_t>(k)), "trash_can")));
        }
        if (group.size() == 2) {
            b.distance(group[0], group[1], 0.8);
        }
        b.heat(group, can_targets[static_cast<std::size_t>(c / 2) % can_targets.size()]);
    }

    const std::size_t carousel = b.object("carousel", "carousel");
    b.heat({b.particle(carousel)}, Vec2(0.5 * width, depth - 3.1));
    return b.finish();
}

// --- living room ----------------------------------------------------------------

Scene living_room(const SceneParams& params)
{
    const double width = params.number("width", 7.0, 3.0, 100.0);
    const double depth = params.number("depth", 6.0, 3.0, 100.0);

    Builder b("living_room");
    b.room(Room::rectangle(width, depth));
    const auto tv = b.object("tv", "tv");
    const auto sofa = b.object("sofa", "sofa");
    const auto arm1 = b.object("armchair_1", "armchair");
    const auto arm2 = b.object("armchair_2", "armchair");
    const auto table = b.object("table", "table");
    const auto office = b.object("office_chair", "office_chair");
    const auto plant1 = b.object("plant_1", "plant");
    const auto plant2 = b.object("plant_2", "plant");
    const auto rack = b.object("coat_rack", "coat_rack");
    const auto door = b.object("door", "door");

    b.access(tv, Face::Front, 1.0);
    b.access(arm1, Face::Front, 0.5);
    b.access(arm2, Face::Front, 0.5);
    b.access(door, Face::Front, 0.9);
    b.access(door, Face::Back, 0.9);

    const auto p = [&](std::size_t o) { return b.particle(o); };
    b.focal(p(table), p(sofa), 1.4);
    b.focal(p(sofa), p(tv), 3.0);
    b.focal(p(arm1), p(tv), 2.6);
    b.focal(p(arm2), p(tv), 2.6);
    b.focal(p(office), p(table), 0.8);

    for (auto [o, label] : {std::pair{tv, "tv"}, {plant1, "plant"}, {plant2, "plant"}, {rack, "coat_rack"},
                            {door, "door"}}) {
        b.wall_distance(p(o), flush(label));
        b.wall_orientation(p(o), 0.5 * kPi);
    }

    std::vector<std::size_t> all;
    for (std::size_t o = 0; o < b.scene().objects.size(); ++o) {
        all.push_back(p(o));
    }
    b.add(ConstraintKind::VisualBalance, all);

    b.face(p(tv), p(sofa), OrientationGoal::FaceOther);
    b.face(p(arm1), p(tv));
    b.face(p(arm2), p(tv));
    b.face(p(office), p(table));
    return b.finish();
}

// --- desk -----------------------------------------------------------------------

Scene desk(const SceneParams& params)
{
    const int per_stack = params.integer("books_per_stack", 5, 1, 20);
    const double width = params.number("width", 2.0, 1.0, 10.0);
    const double depth = params.number("depth", 1.0, 0.6, 10.0);

    // The desk top is the room; y = 0 is the front edge.
    Builder b("desk");
    b.room(Room::rectangle(width, depth));
    const auto p = [&](std::size_t o) { return b.particle(o); };

    std::vector<std::size_t> bottoms;
    for (char stack : {'a', 'b'}) {
        std::optional<std::size_t> below;
        for (int i = 0; i < per_stack; ++i) {
            const auto book = b.object(std::string("book_") + stack + std::to_string(i + 1), "book");
            if (below) {
                b.add(ConstraintKind::Stacking, {p(*below), p(book)});
            } else {
                bottoms.push_back(book);
            }
            below = book;
        }
    }
    std::vector<std::size_t> pencils;
    for (std::size_t i = 0; i < 3; ++i) {
        pencils.push_back(b.object(numbered("pencil", i), "pencil"));
    }
    const auto plate = b.object("plate", "plate");
    const auto binder = b.object("binder", "binder");
    const auto frame = b.object("photo_frame", "photo_frame");
    const auto plant = b.object("potted_plant", "potted_plant");
    const auto laptop = b.object("laptop", "laptop");
    const auto mug = b.object("mug", "mug");
    const auto cube = b.object("rubiks_cube", "rubiks_cube");
    const auto notepad = b.object("notepad", "notepad");

    b.heat({p(laptop)}, Vec2(0.5 * width, 0.3 * depth));
    b.heat({p(notepad)}, Vec2(0.82 * width, 0.2 * depth));
    b.heat({p(cube)}, Vec2(0.18 * width, 0.2 * depth));

    b.distance(p(plant), p(bottoms[0]), 0.3);
    b.distance(p(bottoms[0]), p(binder), 0.4);
    b.distance(p(binder), p(frame), 0.3);
    b.distance(p(frame), p(mug), 0.2);
    b.distance(p(pencils[0]), p(pencils[1]), 0.2);
    b.distance(p(pencils[1]), p(pencils[2]), 0.2);

    b.focal(p(plate), p(laptop), 0.4);
    for (auto pencil : pencils) {
        b.focal(p(pencil), p(cube), 0.2);
    }
    b.focal(p(bottoms[1]), p(cube), 0.3);
    b.wall_distance(p(bottoms[0]), flush("book"));
    return b.finish();
}

// --- tightly packed ---------------------------------------------------------------

Scene tp_bedroom(const SceneParams& params)
{
    const int beds = params.integer("beds", 3, 1, 10);
    const double width = params.number("width", 7.0, 3.0, 100.0);
    const double depth = params.number("depth", 6.0, 3.0, 100.0);

    Builder b("tp_bedroom");
    b.room(Room::rectangle(width, depth));
    const auto p = [&](std::size_t o) { return b.particle(o); };

    const double foot = -(0.5 * catalogue_item("bed").depth + 0.5 * catalogue_item("footlocker").depth + 0.02);
    for (std::size_t i = 0; i < static_cast<std::size_t>(beds); ++i) {
        const auto bed = b.object(numbered("bed", i), "bed");
        const auto locker = b.object(numbered("footlocker", i), "footlocker");
        b.rigid_group(numbered("bed_group", i), {bed, locker}, {Pose{}, Pose{Vec2(foot, 0.0)}});
        b.wall_distance(p(bed), flush("bed"));
    }
    const auto bookcase = b.object("bookcase", "bookcase");
    const auto rack = b.object("coat_rack", "coat_rack");
    const auto table = b.object("table", "square_table");
    const auto chair1 = b.object("chair_1", "chair");
    const auto chair2 = b.object("chair_2", "chair");
    const auto lamp = b.object("floor_lamp", "floor_lamp");

    b.focal(p(chair1), p(table), 0.95);
    b.focal(p(chair2), p(table), 0.95);
    b.distance(p(lamp), p(table), 1.0);
    b.distance(p(lamp), p(chair1), 0.75);
    b.distance(p(chair1), p(chair2), 1.3);
    b.distance(p(bookcase), p(rack), 1.0);
    b.face(p(chair1), p(table));
    b.face(p(chair2), p(table));
    b.wall_distance(p(bookcase), flush("bookcase"));
    b.wall_distance(p(table), flush("square_table"));
    return b.finish();
}

Scene tp_picnic(const SceneParams& params, std::uint64_t seed)
{
    const bool randomize = params.flag("randomize", true);
    int round_tables = params.integer("round_tables", 7, 0, 40);
    int rect_tables = params.integer("rect_tables", 5, 0, 40);
    int grills = params.integer("grills", 4, 0, 40);
    int cans = params.integer("trash_cans", 8, 0, 40);
    const int spread = params.integer("spread", 1, 0, 10);
    const double width = params.number("width", 17.0, 5.0, 200.0);
    const double depth = params.number("depth", 14.0, 5.0, 200.0);
    if (randomize) {
        // Counts vary per seed around the nominal values; cans stay paired.
        Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        round_tables = std::max(0, round_tables + rng.integer(-spread, spread));
        rect_tables = std::max(0, rect_tables + rng.integer(-spread, spread));
        grills = std::max(0, grills + rng.integer(-spread, spread));
        cans = std::max(0, cans + 2 * rng.integer(-spread, spread));
    }
    constexpr double kSeat = 1.25;

    Builder b("tp_picnic");
    b.room(Room::rectangle(width, depth));
    const auto p = [&](std::size_t o) { return b.particle(o); };

    for (std::size_t t = 0; t < static_cast<std::size_t>(round_tables); ++t) {
        std::vector<std::size_t> members{b.object(numbered("round_table", t), "round_table")};
        std::vector<Pose> offsets{Pose{}};
        for (int c = 0; c < 4; ++c) {
            const double a = c * 0.5 * kPi;
            members.push_back(
                b.object("round_table_" + std::to_string(t + 1) + "_chair_" + std::to_string(c + 1), "chair"));
            offsets.push_back(Pose{kSeat * direction(a), 0.0, normalize_angle(a + kPi)});
        }
        b.rigid_group(numbered("table_set", t), members, offsets);
    }
    for (std::size_t t = 0; t < static_cast<std::size_t>(rect_tables); ++t) {
        b.object(numbered("rect_table", t), "rect_table");
    }
    std::vector<std::size_t> grill_particles;
    for (std::size_t g = 0; g < static_cast<std::size_t>(grills); ++g) {
        grill_particles.push_back(p(b.object(numbered("bbq_grill", g), "bbq_grill")));
    }
    for (std::size_t g = 0; g + 1 < grill_particles.size(); ++g) {
        b.distance(grill_particles[g], grill_particles[g + 1], 1.6);
    }
    const std::vector<Vec2> can_targets{Vec2(0.9, 0.9), Vec2(width - 0.9, 0.9), Vec2(0.9, depth - 0.9),
                                        Vec2(width - 0.9, depth - 0.9)};
    for (int c = 0; c < cans; c += 2) {
        std::vector<std::size_t> group;
        for (int k = c; k < std::min(cans, c + 2); ++k) {
            group.push_back(p(b.object(numbered("trash_can", static_cast<std::size_t>(k)), "trash_can")));
        }
        if (group.size() == 2) {
            b.distance(group[0], group[1], 0.8);
        }
        b.heat(group, can_targets[static_cast<std::size_t>(c / 2) % can_targets.size()]);
    }
    const auto carousel = b.object("carousel", "carousel");
    b.heat({p(carousel)}, Vec2(0.5 * width, depth - 3.1));
    return b.finish();
}

} // namespace

std::vector<std::string> template_names()
{
    return {"theater1", "theater2", "picnic", "living_room", "desk", "tp_bedroom", "tp_picnic"};
}

Scene build(std::string_view name, const SceneParams& params, std::uint64_t seed)
{
    Scene scene;
    if (name == "theater1") {
        scene = theater1(params);
    } else if (name == "theater2") {
        scene = theater2(params);
    } else if (name == "picnic") {
        scene = picnic(params);
    } else if (name == "living_room") {
        scene = living_room(params);
    } else if (name == "desk") {
        scene = desk(params);
    } else if (name == "tp_bedroom") {
        scene = tp_bedroom(params);
    } else if (name == "tp_picnic") {
        scene = tp_picnic(params, seed);
    } else {
        throw SceneError("unknown scene template '" + std::string(name) + "'");
    }
    if (const auto extra = params.unused(); !extra.empty()) {
        throw SceneError("template '" + std::string(name) + "' does not take parameter '" + extra.front() + "'");
    }
    return scene;
}

std::vector<Scene> scaling_series(std::span<const int> counts, const SceneParams& base)
{
    std::vector<Scene> out;
    for (int n : counts) {
        if (n < 0) {
            throw SceneError("chair counts must be non-negative");
        }
        SceneParams params = base;
        params.set("chairs", std::to_string(n));
        out.push_back(build("theater1", params));
    }
    return out;
}

} // namespace layout
