#include "layout/io.hpp"

#include "layout/catalogue.hpp"

#include <json.hpp>

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

namespace layout {

using Json = nlohmann::ordered_json;

ParseError::ParseError(std::string path, int line, const std::string& message, std::string_view source)
    : SceneError((source.empty() ? std::string() : std::string(source) + ": ") + "line " + std::to_string(line) +
                 (path.empty() ? std::string() : ", " + path) + ": " + message),
      path_(std::move(path)),
      line_(line),
      message_(message)
{
}

namespace {

// --- line tracking ----------------------------------------------------------

struct LineCounter {
    int line = 1;
    int last = 1; ///< line of the last non-whitespace character read
};

// Feeds the parser one character at a time and counts lines as it goes, so
// SAX events can be stamped with the line of the token just read.
class CountingIterator {
public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    CountingIterator() = default;
    CountingIterator(const char* p, LineCounter* counter) : p_(p), counter_(counter) {}

    reference operator*() const { return *p_; }

    CountingIterator& operator++()
    {
        if (*p_ == '\n') {
            ++counter_->line;
        } else if (std::isspace(static_cast<unsigned char>(*p_)) == 0) {
            counter_->last = counter_->line;
        }
        ++p_;
        return *this;
    }

    CountingIterator operator++(int)
    {
        CountingIterator old = *this;
        ++*this;
        return old;
    }

    friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p_ == b.p_; }

private:
    const char* p_ = nullptr;
    LineCounter* counter_ = nullptr;
};

std::string pointer_segment(std::string_view key)
{
    std::string out;
    for (char c : key) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

// Records the line of every value, keyed by JSON pointer.
class LineIndex : public nlohmann::json_sax<Json> {
public:
    explicit LineIndex(const LineCounter* counter) : counter_(counter) {}

    int line(std::string path) const
    {
        for (;;) {
            if (auto it = lines_.find(path); it != lines_.end()) {
                return it->second;
            }
            if (path.empty()) {
                return 1;
            }
            path.erase(path.rfind('/'));
        }
    }

    bool null() override { return value(); }
    bool boolean(bool) override { return value(); }
    bool number_integer(number_integer_t) override { return value(); }
    bool number_unsigned(number_unsigned_t) override { return value(); }
    bool number_float(number_float_t, const string_t&) override { return value(); }
    bool string(string_t&) override { return value(); }
    bool binary(binary_t&) override { return value(); }

    bool start_object(std::size_t) override { return open(false); }
    bool start_array(std::size_t) override { return open(true); }
    bool end_object() override { return close(); }
    bool end_array() override { return close(); }

    bool key(string_t& k) override
    {
        frames_.back().key = pointer_segment(k);
        return true;
    }

    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

private:
    struct Frame {
        std::string path;
        bool array;
        std::size_t index = 0;
        std::string key;
    };

    std::string next_path()
    {
        if (frames_.empty()) {
            return {};
        }
        Frame& f = frames_.back();
        return f.path + "/" + (f.array ? std::to_string(f.index++) : f.key);
    }

    bool value()
    {
        lines_[next_path()] = counter_->last;
        return true;
    }

    bool open(bool array)
    {
        std::string path = next_path();
        lines_[path] = counter_->last;
        frames_.push_back({std::move(path), array, 0, {}});
        return true;
    }

    bool close()
    {
        frames_.pop_back();
        return true;
    }

    const LineCounter* counter_;
    std::vector<Frame> frames_;
    std::map<std::string, int> lines_;
};

// --- typed access with diagnostics -------------------------------------------

class Node {
public:
    Node(const Json& value, std::string path, const LineIndex& lines) : value_(value), path_(std::move(path)), lines_(lines)
    {
    }

    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(path_, lines_.line(path_), message); }

    /// Requires an object whose keys are all in `allowed`.
    void fields(std::initializer_list<std::string_view> allowed) const
    {
        if (!value_.is_object()) {
            fail("expected an object");
        }
        for (const auto& [key, v] : value_.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                Node(v, path_ + "/" + pointer_segment(key), lines_).fail("unknown field '" + key + "'");
            }
        }
    }

    std::optional<Node> find(std::string_view key) const
    {
        auto it = value_.find(key);
        if (it == value_.end()) {
            return std::nullopt;
        }
        return Node(*it, path_ + "/" + pointer_segment(key), lines_);
    }

    Node at(std::string_view key) const
    {
        if (auto n = find(key)) {
            return *n;
        }
        fail("missing field '" + std::string(key) + "'");
    }

    std::vector<Node> items() const
    {
        if (!value_.is_array()) {
            fail("expected an array");
        }
        std::vector<Node> out;
        out.reserve(value_.size());
        for (std::size_t i = 0; i < value_.size(); ++i) {
            out.emplace_back(value_[i], path_ + "/" + std::to_string(i), lines_);
        }
        return out;
    }

    double number() const
    {
        if (!value_.is_number()) {
            fail("expected a number");
        }
        const double v = value_.get<double>();
        if (!std::isfinite(v)) {
            fail("expected a finite number");
        }
        return v;
    }

    std::int64_t integer() const
    {
        if (!value_.is_number_integer()) {
            fail("expected an integer");
        }
        return value_.get<std::int64_t>();
    }

    int integer(int lo, int hi) const
    {
        const std::int64_t v = integer();
        if (v < lo || v > hi) {
            fail("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return static_cast<int>(v);
    }

    std::uint64_t unsigned_integer() const
    {
        if (!value_.is_number_unsigned()) {
            fail("expected a non-negative integer");
        }
        return value_.get<std::uint64_t>();
    }

    bool boolean() const
    {
        if (!value_.is_boolean()) {
            fail("expected true or false");
        }
        return value_.get<bool>();
    }

    std::string string() const
    {
        if (!value_.is_string()) {
            fail("expected a string");
        }
        return value_.get<std::string>();
    }

    Vec2 vec2() const
    {
        const auto xs = items();
        if (xs.size() != 2) {
            fail("expected [x, y]");
        }
        return {xs[0].number(), xs[1].number()};
    }

private:
    const Json& value_;
    std::string path_;
    const LineIndex& lines_;
};

// --- enum names ----------------------------------------------------------------

constexpr std::array<std::string_view, 4> kFaceNames{"back", "left", "front", "right"};

template <typename Enum>
Enum parse_enum(const Node& n, std::optional<Enum> (*from)(std::string_view), std::string_view what)
{
    const std::string s = n.string();
    if (auto e = from(s)) {
        return *e;
    }
    n.fail("unknown " + std::string(what) + " '" + s + "'");
}

std::optional<ProjectionMode> mode_from_string(std::string_view s)
{
    if (s == "sequential") {
        return ProjectionMode::Sequential;
    }
    if (s == "batch") {
        return ProjectionMode::Batch;
    }
    return std::nullopt;
}

std::optional<BroadPhase> broad_phase_from_string(std::string_view s)
{
    if (s == "hash") {
        return BroadPhase::Hash;
    }
    if (s == "all_pairs") {
        return BroadPhase::AllPairs;
    }
    return std::nullopt;
}

std::optional<CurveKind> curve_kind_from_string(std::string_view s)
{
    if (s == "segment") {
        return CurveKind::Segment;
    }
    if (s == "arc") {
        return CurveKind::Arc;
    }
    return std::nullopt;
}

std::string_view to_string(CurveKind kind) { return kind == CurveKind::Arc ? "arc" : "segment"; }

// --- writers --------------------------------------------------------------------

Json vec_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

double degrees(double radians) { return radians_to_degrees(radians); }

Json pose_json(const Pose& p, std::optional<double> default_z)
{
    Json j;
    j["x"] = p.position.x();
    j["y"] = p.position.y();
    if (!default_z || p.z != *default_z) {
        j["z"] = p.z;
    }
    j["yaw"] = degrees(p.orientation);
    return j;
}

Json stiffness_json(const Stiffness& k)
{
    Json j;
    j["initial"] = k.initial;
    if (k.current != k.initial) {
        j["current"] = k.current;
    }
    j["schedule"] = to_string(k.schedule);
    j["rate"] = k.rate;
    return j;
}

Json solver_json(const SolverConfig& c)
{
    Json j;
    j["max_iterations"] = c.max_iterations;
    j["mode"] = to_string(c.mode);
    j["batch_averaging"] = c.batch_averaging;
    j["termination_window"] = c.termination_window;
    j["improvement_tolerance"] = c.improvement_tolerance;
    j["seed"] = c.seed;
    j["interleave"] = c.interleave;
    j["broad_phase"] = to_string(c.broad_phase);
    j["collision_stiffness"] = stiffness_json(c.collision_stiffness);
    j["accessibility_stiffness"] = stiffness_json(c.accessibility_stiffness);
    j["settle"] = c.settle;
    j["settle_sweeps"] = c.settle_sweeps;
    j["settle_tolerance"] = c.settle_tolerance;
    return j;
}

Json annealer_json(const AnnealConfig& c)
{
    Json j;
    j["total_iterations"] = c.total_iterations;
    if (c.t_initial) {
        j["t_initial"] = *c.t_initial;
    }
    j["t_final"] = c.t_final;
    j["stall_window"] = c.stall_window;
    j["stall_threshold"] = c.stall_threshold;
    if (c.sigma_position) {
        j["sigma_position"] = *c.sigma_position;
    }
    j["sigma_orientation"] = degrees(c.sigma_orientation);
    j["position_probability"] = c.position_probability;
    j["seed"] = c.seed;
    return j;
}

bool uses_distance(ConstraintKind k)
{
    return k == ConstraintKind::PairwiseDistance || k == ConstraintKind::FocalPoint ||
           k == ConstraintKind::TrafficLane || k == ConstraintKind::WallDistance;
}

bool uses_direction(ConstraintKind k) { return k == ConstraintKind::TrafficLane || k == ConstraintKind::FocalSymmetry; }

bool uses_angle(ConstraintKind k)
{
    return k == ConstraintKind::PairwiseOrientation || k == ConstraintKind::WallOrientation;
}

Json constraint_json(const Scene& scene, const Constraint& c)
{
    const Constraint d = make_constraint(c.kind, {});
    Json j;
    j["kind"] = to_string(c.kind);
    Json ids = Json::array();
    for (std::size_t p : c.participants) {
        ids.push_back(scene.particle_name(p));
    }
    j["participants"] = std::move(ids);
    if (c.relation != d.relation) {
        j["relation"] = to_string(c.relation);
    }
    if (uses_distance(c.kind) || c.distance != d.distance) {
        j["distance"] = c.distance;
    }
    if (c.kind == ConstraintKind::HeatPoint || c.target != d.target) {
        j["target"] = vec_json(c.target);
    }
    if (uses_direction(c.kind) || c.direction != d.direction) {
        j["direction"] = vec_json(c.direction);
    }
    if (uses_angle(c.kind) || c.angle_offset != d.angle_offset) {
        j["angle_offset"] = degrees(c.angle_offset);
    }
    if (c.kind == ConstraintKind::PairwiseOrientation || c.first_goal != d.first_goal) {
        j["first_goal"] = to_string(c.first_goal);
    }
    if (c.kind == ConstraintKind::PairwiseOrientation || c.second_goal != d.second_goal) {
        j["second_goal"] = to_string(c.second_goal);
    }
    if (c.anchor_secondary != d.anchor_secondary) {
        j["anchor_secondary"] = c.anchor_secondary;
    }
    if (c.stiffness != d.stiffness) {
        j["stiffness"] = stiffness_json(c.stiffness);
    }
    if (c.weight != d.weight) {
        j["weight"] = c.weight;
    }
    return j;
}

Json scene_json(const Scene& scene)
{
    Json j;
    j["name"] = scene.name;
    j["collisions"] = scene.collisions_enabled;
    Json room = Json::array();
    for (const Vec2& v : scene.room.boundary) {
        room.push_back(vec_json(v));
    }
    j["room"] = std::move(room);

    Json objects = Json::array();
    for (const auto& obj : scene.objects) {
        const Particle& p = scene.particles[obj.particle];
        Json o;
        o["id"] = obj.id;
        o["label"] = obj.label;
        const Vec2 size = 2.0 * obj.bbox.half_extents;
        o["size"] = Json::array({size.x(), size.y(), obj.bbox.height()});
        if (p.is_fixed()) {
            o["fixed"] = true;
        } else {
            o["mass"] = p.mass;
        }
        if (obj.initial_pose) {
            o["pose"] = pose_json(*obj.initial_pose, obj.bbox.half_height);
        }
        Json access = Json::object();
        for (std::size_t f = 0; f < 4; ++f) {
            const AccessRegion& r = obj.access[f];
            if (r.local_center != Vec2::Zero() || r.half_extents != Vec2::Zero()) {
                access[std::string(kFaceNames[f])] = {{"center", vec_json(r.local_center)},
                                                      {"size", vec_json(2.0 * r.half_extents)}};
            }
        }
        if (!access.empty()) {
            o["access"] = std::move(access);
        }
        objects.push_back(std::move(o));
    }
    j["objects"] = std::move(objects);

    Json groups = Json::array();
    for (const auto& g : scene.groups) {
        const Particle& p = scene.particles[g.particle];
        Json o;
        o["id"] = g.id;
        Json members = Json::array();
        for (std::size_t m : g.members) {
            members.push_back(scene.objects[m].id);
        }
        o["members"] = std::move(members);
        o["rigid"] = g.rigidity == Rigidity::Rigid;
        if (!g.offsets.empty()) {
            Json offsets = Json::array();
            for (std::size_t m = 0; m < g.offsets.size(); ++m) {
                offsets.push_back(pose_json(g.offsets[m], scene.objects[g.members[m]].bbox.half_height));
            }
            o["offsets"] = std::move(offsets);
        }
        if (g.curve) {
            Json c;
            c["kind"] = to_string(g.curve->kind);
            c["a"] = vec_json(g.curve->a);
            c["b"] = vec_json(g.curve->b);
            if (g.curve->kind == CurveKind::Arc || g.curve->center != Vec2::Zero()) {
                c["center"] = vec_json(g.curve->center);
            }
            o["curve"] = std::move(c);
        }
        if (!g.params.empty()) {
            o["params"] = g.params;
        }
        if (p.is_fixed()) {
            o["fixed"] = true;
        } else {
            o["mass"] = p.mass;
        }
        if (g.initial_pose) {
            o["pose"] = pose_json(*g.initial_pose, 0.0);
        }
        if (g.attachment != Group{}.attachment) {
            o["attachment"] = stiffness_json(g.attachment);
        }
        groups.push_back(std::move(o));
    }
    j["groups"] = std::move(groups);

    Json constraints = Json::array();
    for (const auto& c : scene.constraints) {
        constraints.push_back(constraint_json(scene, c));
    }
    j["constraints"] = std::move(constraints);
    return j;
}

// --- readers --------------------------------------------------------------------

Pose read_pose(const Node& n, double default_z)
{
    n.fields({"x", "y", "z", "yaw"});
    Pose p;
    p.position = Vec2(n.at("x").number(), n.at("y").number());
    p.z = n.find("z") ? n.at("z").number() : default_z;
    p.orientation = n.find("yaw") ? normalize_angle(degrees_to_radians(n.at("yaw").number())) : 0.0;
    return p;
}

Stiffness read_stiffness(const Node& n, Stiffness k)
{
    n.fields({"initial", "current", "schedule", "rate"});
    if (auto v = n.find("initial")) {
        k.initial = v->number();
        if (k.initial < 0.0 || k.initial > 1.0) {
            v->fail("stiffness must lie in [0, 1]");
        }
        k.current = k.initial;
    }
    if (auto v = n.find("current")) {
        k.current = v->number();
        if (k.current < 0.0 || k.current > 1.0) {
            v->fail("stiffness must lie in [0, 1]");
        }
    }
    if (auto v = n.find("schedule")) {
        k.schedule = parse_enum<Schedule>(*v, schedule_from_string, "schedule");
    }
    if (auto v = n.find("rate")) {
        k.rate = v->number();
        if (k.rate < 1.0) {
            v->fail("rate must be at least 1");
        }
    }
    return k;
}

double positive(const Node& n)
{
    const double v = n.number();
    if (!(v > 0.0)) {
        n.fail("expected a positive number");
    }
    return v;
}

SolverConfig read_solver(const Node& n)
{
    n.fields({"max_iterations", "mode", "batch_averaging", "termination_window", "improvement_tolerance", "seed",
              "interleave", "broad_phase", "collision_stiffness", "accessibility_stiffness", "settle",
              "settle_sweeps", "settle_tolerance"});
    SolverConfig c;
    if (auto v = n.find("max_iterations")) {
        c.max_iterations = v->integer(1, 100000000);
    }
    if (auto v = n.find("mode")) {
        c.mode = parse_enum<ProjectionMode>(*v, mode_from_string, "projection mode");
    }
    if (auto v = n.find("batch_averaging")) {
        c.batch_averaging = positive(*v);
    }
    if (auto v = n.find("termination_window")) {
        c.termination_window = v->integer(1, 100000000);
    }
    if (auto v = n.find("improvement_tolerance")) {
        c.improvement_tolerance = v->number();
    }
    if (auto v = n.find("seed")) {
        c.seed = v->unsigned_integer();
    }
    if (auto v = n.find("interleave")) {
        c.interleave = v->boolean();
    }
    if (auto v = n.find("broad_phase")) {
        c.broad_phase = parse_enum<BroadPhase>(*v, broad_phase_from_string, "broad phase");
    }
    if (auto v = n.find("collision_stiffness")) {
        c.collision_stiffness = read_stiffness(*v, c.collision_stiffness);
    }
    if (auto v = n.find("accessibility_stiffness")) {
        c.accessibility_stiffness = read_stiffness(*v, c.accessibility_stiffness);
    }
    if (auto v = n.find("settle")) {
        c.settle = v->boolean();
    }
    if (auto v = n.find("settle_sweeps")) {
        c.settle_sweeps = v->integer(0, 100000000);
    }
    if (auto v = n.find("settle_tolerance")) {
        c.settle_tolerance = positive(*v);
    }
    try {
        c.validate();
    } catch (const std::exception& e) {
        n.fail(e.what());
    }
    return c;
}

AnnealConfig read_annealer(const Node& n)
{
    n.fields({"total_iterations", "t_initial", "t_final", "stall_window", "stall_threshold", "sigma_position",
              "sigma_orientation", "position_probability", "seed"});
    AnnealConfig c;
    if (auto v = n.find("total_iterations")) {
        c.total_iterations = v->integer(1, 1000000000);
    }
    if (auto v = n.find("t_initial")) {
        c.t_initial = positive(*v);
    }
    if (auto v = n.find("t_final")) {
        c.t_final = positive(*v);
    }
    if (auto v = n.find("stall_window")) {
        c.stall_window = v->integer(1, 1000000000);
    }
    if (auto v = n.find("stall_threshold")) {
        c.stall_threshold = v->number();
    }
    if (auto v = n.find("sigma_position")) {
        c.sigma_position = positive(*v);
    }
    if (auto v = n.find("sigma_orientation")) {
        c.sigma_orientation = degrees_to_radians(positive(*v));
    }
    if (auto v = n.find("position_probability")) {
        c.position_probability = v->number();
    }
    if (auto v = n.find("seed")) {
        c.seed = v->unsigned_integer();
    }
    try {
        c.validate();
    } catch (const std::exception& e) {
        n.fail(e.what());
    }
    return c;
}

AccessRegion read_access(const Node& n, const BoundingBox& box, Face face)
{
    n.fields({"depth", "center", "size"});
    if (auto d = n.find("depth")) {
        if (n.find("center") || n.find("size")) {
            n.fail("give either depth or center and size");
        }
        const double depth = d->number();
        if (depth < 0.0) {
            d->fail("depth must be non-negative");
        }
        return face_region(box, face, depth);
    }
    AccessRegion r;
    r.local_center = n.at("center").vec2();
    const Node size = n.at("size");
    const Vec2 s = size.vec2();
    if (s.x() < 0.0 || s.y() < 0.0) {
        size.fail("size must be non-negative");
    }
    r.half_extents = 0.5 * s;
    return r;
}

void read_object(const Node& n, Scene& scene)
{
    n.fields({"id", "label", "size", "mass", "fixed", "pose", "access"});
    LayoutObject obj;
    obj.id = n.at("id").string();
    if (obj.id.empty()) {
        n.at("id").fail("id must not be empty");
    }
    obj.label = n.at("label").string();
    if (auto size = n.find("size")) {
        const auto xs = size->items();
        if (xs.size() != 3) {
            size->fail("expected [depth, width, height]");
        }
        obj.bbox.half_extents = 0.5 * Vec2(positive(xs[0]), positive(xs[1]));
        obj.bbox.half_height = 0.5 * positive(xs[2]);
    } else {
        try {
            obj.bbox = catalogue_item(obj.label).box();
        } catch (const SceneError&) {
            n.at("label").fail("unknown label '" + obj.label + "' and no size given");
        }
    }
    Particle p;
    p.z = obj.bbox.half_height;
    obj.fixed = n.find("fixed") && n.at("fixed").boolean();
    if (obj.fixed) {
        if (n.find("mass")) {
            n.at("mass").fail("a fixed object has no mass");
        }
        p.set_mass(kInfiniteMass);
    } else {
        p.set_mass(n.find("mass") ? positive(n.at("mass")) : mass_from_bbox(obj.bbox));
    }
    if (auto pose = n.find("pose")) {
        obj.initial_pose = read_pose(*pose, obj.bbox.half_height);
        p.set_pose(*obj.initial_pose);
    } else if (obj.fixed) {
        n.fail("a fixed object needs a pose");
    }
    if (auto access = n.find("access")) {
        access->fields({"back", "left", "front", "right"});
        for (std::size_t f = 0; f < 4; ++f) {
            if (auto r = access->find(kFaceNames[f])) {
                obj.access[f] = read_access(*r, obj.bbox, static_cast<Face>(f));
            }
        }
    }
    obj.particle = scene.particles.size();
    scene.particles.push_back(p);
    scene.objects.push_back(std::move(obj));
}

Group read_group(const Node& n, const Scene& scene, Particle& particle)
{
    n.fields({"id", "members", "rigid", "offsets", "curve", "params", "mass", "fixed", "pose", "attachment"});
    Group g;
    g.id = n.at("id").string();
    if (g.id.empty()) {
        n.at("id").fail("id must not be empty");
    }
    for (const Node& m : n.at("members").items()) {
        const std::string id = m.string();
        auto o = scene.find_object(id);
        if (!o) {
            m.fail("unknown object '" + id + "'");
        }
        g.members.push_back(*o);
    }
    if (g.members.empty()) {
        n.at("members").fail("a group needs members");
    }
    g.rigidity = n.find("rigid") && n.at("rigid").boolean() ? Rigidity::Rigid : Rigidity::Nonrigid;
    if (auto offsets = n.find("offsets")) {
        const auto xs = offsets->items();
        if (xs.size() != g.members.size()) {
            offsets->fail("expected one offset per member");
        }
        for (std::size_t m = 0; m < xs.size(); ++m) {
            g.offsets.push_back(read_pose(xs[m], scene.objects[g.members[m]].bbox.half_height));
        }
    }
    if (g.rigidity == Rigidity::Rigid && g.offsets.empty()) {
        n.fail("a rigid group needs offsets");
    }
    if (auto curve = n.find("curve")) {
        curve->fields({"kind", "a", "b", "center"});
        Curve c;
        c.kind = parse_enum<CurveKind>(curve->at("kind"), curve_kind_from_string, "curve kind");
        c.a = curve->at("a").vec2();
        c.b = curve->at("b").vec2();
        if (c.kind == CurveKind::Arc) {
            c.center = curve->at("center").vec2();
        } else if (auto center = curve->find("center")) {
            c.center = center->vec2();
        }
        try {
            c.validate();
        } catch (const SceneError& e) {
            curve->fail(e.what());
        }
        g.curve = c;
    }
    if (auto params = n.find("params")) {
        for (const Node& t : params->items()) {
            g.params.push_back(t.number());
        }
    }
    if (g.curve && g.params.size() != g.members.size()) {
        n.fail("a curve group needs one parameter per member");
    }
    if (!g.curve && !g.params.empty()) {
        n.at("params").fail("params need a curve");
    }
    if (auto a = n.find("attachment")) {
        g.attachment = read_stiffness(*a, g.attachment);
    }
    g.bbox = group_bounds(scene, g);
    g.fixed = n.find("fixed") && n.at("fixed").boolean();
    if (g.fixed) {
        if (n.find("mass")) {
            n.at("mass").fail("a fixed group has no mass");
        }
        particle.set_mass(kInfiniteMass);
    } else {
        particle.set_mass(n.find("mass") ? positive(n.at("mass")) : mass_from_bbox(g.bbox));
    }
    if (auto pose = n.find("pose")) {
        g.initial_pose = read_pose(*pose, 0.0);
        particle.set_pose(*g.initial_pose);
    } else if (g.fixed) {
        n.fail("a fixed group needs a pose");
    }
    return g;
}

Constraint read_constraint(const Node& n, const Scene& scene)
{
    n.fields({"kind", "participants", "relation", "distance", "target", "direction", "angle_offset", "first_goal",
              "second_goal", "anchor_secondary", "stiffness", "weight"});
    const ConstraintKind kind = parse_enum<ConstraintKind>(n.at("kind"), constraint_kind_from_string, "constraint kind");
    std::vector<std::size_t> participants;
    for (const Node& m : n.at("participants").items()) {
        const std::string id = m.string();
        auto p = scene.find_particle(id);
        if (!p) {
            m.fail("unknown object or group '" + id + "'");
        }
        participants.push_back(*p);
    }
    Constraint c = make_constraint(kind, std::move(participants));
    if (auto v = n.find("relation")) {
        c.relation = parse_enum<Relation>(*v, relation_from_string, "relation");
    }
    if (auto v = n.find("distance")) {
        c.distance = v->number();
    }
    if (auto v = n.find("target")) {
        c.target = v->vec2();
    }
    if (auto v = n.find("direction")) {
        c.direction = v->vec2();
        if (c.direction == Vec2::Zero()) {
            v->fail("direction must be non-zero");
        }
    }
    if (auto v = n.find("angle_offset")) {
        c.angle_offset = degrees_to_radians(v->number());
    }
    if (auto v = n.find("first_goal")) {
        c.first_goal = parse_enum<OrientationGoal>(*v, orientation_goal_from_string, "orientation goal");
    }
    if (auto v = n.find("second_goal")) {
        c.second_goal = parse_enum<OrientationGoal>(*v, orientation_goal_from_string, "orientation goal");
    }
    if (auto v = n.find("anchor_secondary")) {
        c.anchor_secondary = v->boolean();
    }
    if (auto v = n.find("stiffness")) {
        c.stiffness = read_stiffness(*v, c.stiffness);
    }
    if (auto v = n.find("weight")) {
        c.weight = v->number();
        if (!(c.weight > 0.0)) {
            v->fail("weight must be positive");
        }
    }
    return c;
}

int line_of_byte(std::string_view text, std::size_t byte)
{
    const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
    return 1 + static_cast<int>(std::count(text.begin(), end, '\n'));
}

// --- text formatting ------------------------------------------------------------

void append_number(std::string& out, double v)
{
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), end);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace

// --- public -------------------------------------------------------------------------

SceneFile parse_scene_file(std::string_view text)
{
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        std::string what = e.what();
        if (auto pos = what.find("] "); pos != std::string::npos) {
            what = what.substr(pos + 2);
        }
        // "parse error at line L, column C: ..." -> "column C: ..."; the line
        // is already in the prefix.
        if (auto pos = what.find(", column "); what.starts_with("parse error at line") && pos != std::string::npos) {
            what = what.substr(pos + 2);
        }
        throw ParseError("", line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0), what);
    }

    LineCounter counter;
    LineIndex lines(&counter);
    Json::sax_parse(CountingIterator(text.data(), &counter), CountingIterator(text.data() + text.size(), &counter),
                    &lines);

    const Node root(doc, "", lines);
    root.fields({"name", "collisions", "room", "objects", "groups", "constraints", "solver", "annealer"});
    SceneFile file;
    Scene& scene = file.scene;
    if (auto n = root.find("name")) {
        scene.name = n->string();
    }
    if (auto n = root.find("collisions")) {
        scene.collisions_enabled = n->boolean();
    }
    {
        const Node room = root.at("room");
        Polygon boundary;
        for (const Node& v : room.items()) {
            boundary.push_back(v.vec2());
        }
        try {
            scene.room = Room::from_polygon(std::move(boundary));
        } catch (const SceneError& e) {
            room.fail(e.what());
        }
    }
    if (auto objects = root.find("objects")) {
        for (const Node& o : objects->items()) {
            const std::string id = o.at("id").string();
            if (scene.find_object(id)) {
                o.at("id").fail("duplicate id '" + id + "'");
            }
            read_object(o, scene);
        }
    }
    if (auto groups = root.find("groups")) {
        for (const Node& g : groups->items()) {
            const std::string id = g.at("id").string();
            if (scene.find_particle(id)) {
                g.at("id").fail("duplicate id '" + id + "'");
            }
            Particle p;
            Group group = read_group(g, scene, p);
            group.particle = scene.particles.size();
            scene.particles.push_back(p);
            scene.groups.push_back(std::move(group));
        }
    }
    if (auto constraints = root.find("constraints")) {
        for (const Node& c : constraints->items()) {
            scene.constraints.push_back(read_constraint(c, scene));
        }
    }
    try {
        scene.validate();
    } catch (const SceneError& e) {
        // Constraint diagnostics start with "constraint <index>".
        const std::string what = e.what();
        std::size_t index = 0;
        const char* first = what.data() + std::string_view("constraint ").size();
        if (what.starts_with("constraint ") &&
            std::from_chars(first, what.data() + what.size(), index).ec == std::errc{}) {
            root.at("constraints").items().at(index).fail(what);
        }
        root.fail(what);
    }
    if (auto n = root.find("solver")) {
        file.solver = read_solver(*n);
    }
    if (auto n = root.find("annealer")) {
        file.annealer = read_annealer(*n);
    }
    return file;
}

Scene parse_scene(std::string_view text) { return parse_scene_file(text).scene; }

std::string serialize_scene(const Scene& scene) { return dump(scene_json(scene)); }

std::string serialize_scene_file(const SceneFile& file)
{
    Json j = scene_json(file.scene);
    j["solver"] = solver_json(file.solver);
    j["annealer"] = annealer_json(file.annealer);
    return dump(j);
}

SceneFile load_scene_file(const std::filesystem::path& path)
{
    const std::string text = read_text(path);
    try {
        return parse_scene_file(text);
    } catch (const ParseError& e) {
        throw ParseError(e.path(), e.line(), e.message(), path.string());
    }
}

std::string layout_json(const Scene& scene, std::span<const Particle> layout)
{
    Json j;
    j["scene"] = scene.name;
    Json objects = Json::object();
    for (const auto& obj : scene.objects) {
        objects[obj.id] = pose_json(layout[obj.particle].pose(), std::nullopt);
    }
    j["objects"] = std::move(objects);
    Json groups = Json::object();
    for (const auto& g : scene.groups) {
        groups[g.id] = pose_json(layout[g.particle].pose(), std::nullopt);
    }
    j["groups"] = std::move(groups);
    return dump(j);
}

std::string trace_csv(const EnergyTrace& trace)
{
    std::string out = "iteration,energy,best_energy";
    for (ConstraintKind k : kAllConstraintKinds) {
        out += ',';
        out += to_string(k);
    }
    out += '\n';
    for (std::size_t l = 0; l < trace.energy.size(); ++l) {
        out += std::to_string(l + 1);
        out += ',';
        append_number(out, trace.energy[l]);
        out += ',';
        append_number(out, trace.best_energy[l]);
        for (double v : trace.violation[l]) {
            out += ',';
            append_number(out, v);
        }
        out += '\n';
    }
    return out;
}

std::string compare_csv(const EnergyTrace& pbd, const EnergyTrace& sa)
{
    std::string out = "iteration,pbd_energy,pbd_best_energy,mcmc_energy,mcmc_best_energy\n";
    const std::size_t n = std::max(pbd.energy.size(), sa.energy.size());
    const auto cells = [&out](const EnergyTrace& t, std::size_t l) {
        out += ',';
        if (l < t.energy.size()) {
            append_number(out, t.energy[l]);
        }
        out += ',';
        if (l < t.energy.size()) {
            append_number(out, t.best_energy[l]);
        }
    };
    for (std::size_t l = 0; l < n; ++l) {
        out += std::to_string(l + 1);
        cells(pbd, l);
        cells(sa, l);
        out += '\n';
    }
    return out;
}

std::string run_meta_json(const RunMeta& meta)
{
    Json j;
    j["scene"] = meta.scene;
    j["mode"] = meta.mode;
    j["seed"] = meta.seed;
    j["solver"] = solver_json(meta.solver);
    j["annealer"] = annealer_json(meta.annealer);
    if (meta.t_initial) {
        j["annealer"]["t_initial"] = *meta.t_initial;
    }
    if (meta.sigma_position) {
        j["annealer"]["sigma_position"] = *meta.sigma_position;
    }
    j["mass_density"] = 1.0;
    Json kinds = Json::object();
    for (ConstraintKind k : kAllConstraintKinds) {
        kinds[std::string(to_string(k))] = {{"stiffness", stiffness_json(default_stiffness(k))},
                                            {"weight", default_weight(k)}};
    }
    j["constraint_defaults"] = std::move(kinds);
    j["curve_attachment"] = stiffness_json(Group{}.attachment);
    j["result"] = {{"initial_energy", meta.initial_energy},
                   {"final_energy", meta.final_energy},
                   {"iterations", meta.iterations},
                   {"best_iteration", meta.best_iteration},
                   {"max_overlap", meta.max_overlap}};
    return dump(j);
}

void write_text(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw std::runtime_error("failed to write '" + path.string() + "'");
    }
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace layout
