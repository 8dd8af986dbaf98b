// Command-line front end: synth, suggest, bench, compare, validate, export.

#include "layout/io.hpp"
#include "layout/scenes.hpp"
#include "layout/svg.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace layout;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string scene;
    std::vector<std::string> params;
    std::uint64_t seed = 0;
    std::string mode = "pbd";
    int iters = 0; ///< 0 keeps the configured value
    std::string projection;
    std::string broad_phase;
    bool no_settle = false;
    std::vector<std::string> overlays;
};

void add_scene_options(CLI::App& cmd, Common& c)
{
    cmd.add_option("scene", c.scene, "Template name or scene file (.json)")->required();
    cmd.add_option("--param", c.params, "Template parameter key=value (repeatable)");
}

void add_run_options(CLI::App& cmd, Common& c)
{
    cmd.add_option("--seed", c.seed, "Random seed");
    cmd.add_option("--iters", c.iters, "Iteration cap (solver iterations or annealing steps)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--projection", c.projection, "Solver projection mode")
        ->check(CLI::IsMember({"sequential", "batch"}));
    cmd.add_option("--broad-phase", c.broad_phase, "Collision broad phase")
        ->check(CLI::IsMember({"hash", "all_pairs"}));
    cmd.add_flag("--no-settle", c.no_settle, "Skip the collision settle pass");
    cmd.add_option("--overlay", c.overlays, "SVG overlay layers")
        ->delimiter(',')
        ->check(CLI::IsMember({"access", "circles", "lanes", "curves"}));
}

bool is_scene_file(const std::string& s) { return s.ends_with(".json") || fs::is_regular_file(s); }

/// Template scenes take the run seed (randomized templates depend on it).
SceneFile load(const Common& c, std::uint64_t seed)
{
    if (is_scene_file(c.scene)) {
        if (!c.params.empty()) {
            throw SceneError("--param applies to templates only");
        }
        return load_scene_file(c.scene);
    }
    SceneFile file;
    file.scene = build(c.scene, SceneParams::parse(c.params), seed);
    return file;
}

void apply(const Common& c, std::uint64_t seed, SceneFile& file)
{
    file.solver.seed = seed;
    file.annealer.seed = seed;
    if (c.iters > 0) {
        file.solver.max_iterations = c.iters;
        file.annealer.total_iterations = c.iters;
    }
    if (!c.projection.empty()) {
        file.solver.mode = c.projection == "batch" ? ProjectionMode::Batch : ProjectionMode::Sequential;
    }
    if (!c.broad_phase.empty()) {
        file.solver.broad_phase = c.broad_phase == "all_pairs" ? BroadPhase::AllPairs : BroadPhase::Hash;
    }
    if (c.no_settle) {
        file.solver.settle = false;
    }
}

SvgOptions svg_options(const Common& c)
{
    SvgOptions o;
    for (const auto& name : c.overlays) {
        o.access_regions = o.access_regions || name == "access";
        o.bounding_circles = o.bounding_circles || name == "circles";
        o.traffic_lanes = o.traffic_lanes || name == "lanes";
        o.curves = o.curves || name == "curves";
    }
    return o;
}

struct Run {
    std::vector<Particle> layout;
    EnergyTrace trace;
    RunMeta meta;
};

Run run(const SceneFile& file, const std::string& mode)
{
    Run r;
    RunMeta& m = r.meta;
    m.scene = file.scene.name;
    m.mode = mode;
    m.seed = file.solver.seed;
    m.solver = file.solver;
    m.annealer = file.annealer;
    const SceneIndex index(file.scene);
    if (mode == "pbd") {
        SynthesisResult res = synthesize(file.scene, file.solver);
        r.layout = std::move(res.layout);
        r.trace = std::move(res.trace);
        m.final_energy = res.final_energy;
        m.max_overlap = res.max_overlap;
    } else {
        AnnealResult res = run_sa_mcmc(file.scene, file.annealer);
        r.layout = std::move(res.layout);
        r.trace = std::move(res.trace);
        m.final_energy = res.final_energy;
        m.t_initial = res.t_initial;
        m.sigma_position = res.sigma_position;
        m.max_overlap = hard_violation(file.scene, index, r.layout).max_overlap;
    }
    m.initial_energy = r.trace.initial_energy;
    m.iterations = r.trace.iterations();
    m.best_iteration = r.trace.best_iteration;
    return r;
}

std::string number(double v)
{
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

int cmd_synth(const Common& c, const std::string& out)
{
    SceneFile file = load(c, c.seed);
    apply(c, c.seed, file);
    const Run r = run(file, c.mode);
    fs::create_directories(out);
    write_text(fs::path(out) / "layout.json", layout_json(file.scene, r.layout));
    write_text(fs::path(out) / "layout.svg", render_svg(file.scene, r.layout, svg_options(c)));
    write_text(fs::path(out) / "trace.csv", trace_csv(r.trace));
    write_text(fs::path(out) / "run_meta.json", run_meta_json(r.meta));
    std::cout << file.scene.name << " " << c.mode << " seed " << c.seed << ": energy "
              << number(r.meta.initial_energy) << " -> " << number(r.meta.final_energy) << " after "
              << r.meta.iterations << " iterations, max overlap " << number(r.meta.max_overlap) << "\n";
    return 0;
}

int cmd_suggest(const Common& c, int seeds, unsigned threads, const std::string& out)
{
    fs::create_directories(out);
    struct Row {
        std::uint64_t seed;
        double energy;
        int iterations;
        double overlap;
    };
    std::vector<Row> rows(static_cast<std::size_t>(seeds));
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    const SvgOptions svg = svg_options(c);

    const auto worker = [&] {
        for (int i = next++; i < seeds; i = next++) {
            try {
                const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(i);
                SceneFile file = load(c, seed);
                apply(c, seed, file);
                const Run r = run(file, c.mode);
                write_text(fs::path(out) / ("suggestion_" + std::to_string(seed) + ".svg"),
                           render_svg(file.scene, r.layout, svg));
                rows[static_cast<std::size_t>(i)] = {seed, r.meta.final_energy, r.meta.iterations, r.meta.max_overlap};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = seeds;
            }
        }
    };
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(seeds));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }

    std::string csv = "seed,final_energy,iterations,max_overlap\n";
    for (const Row& r : rows) {
        csv += std::to_string(r.seed) + "," + number(r.energy) + "," + std::to_string(r.iterations) + "," +
               number(r.overlap) + "\n";
    }
    write_text(fs::path(out) / "suggestions.csv", csv);
    std::cout << csv;
    return 0;
}

int cmd_bench(const Common& c, const std::string& scene, const std::string& counts_text, const std::string& count_param,
              int repeat, const std::string& out)
{
    std::vector<int> counts;
    std::stringstream ss(counts_text);
    for (std::string item; std::getline(ss, item, ',');) {
        try {
            std::size_t used = 0;
            counts.push_back(std::stoi(item, &used));
            if (used != item.size() || counts.back() < 0) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw std::runtime_error("bad count '" + item + "' in --counts");
        }
    }
    if (counts.empty()) {
        throw std::runtime_error("--counts is empty");
    }

    std::string table = "count,objects,repeats,mean_seconds,min_seconds,max_seconds,mean_iterations,mean_final_energy\n";
    for (int n : counts) {
        SceneParams params = SceneParams::parse(c.params);
        params.set(count_param, std::to_string(n));
        double total = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        double iterations = 0.0;
        double energy = 0.0;
        std::size_t objects = 0;
        for (int k = 0; k < repeat; ++k) {
            const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
            SceneFile file;
            file.scene = build(scene, params, seed);
            apply(c, seed, file);
            objects = file.scene.objects.size();
            const auto t0 = std::chrono::steady_clock::now();
            const Run r = run(file, c.mode);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            total += secs;
            lo = std::min(lo, secs);
            hi = std::max(hi, secs);
            iterations += r.meta.iterations;
            energy += r.meta.final_energy;
        }
        table += std::to_string(n) + "," + std::to_string(objects) + "," + std::to_string(repeat) + "," +
                 number(total / repeat) + "," + number(lo) + "," + number(hi) + "," + number(iterations / repeat) +
                 "," + number(energy / repeat) + "\n";
    }
    if (!out.empty()) {
        write_text(out, table);
    }
    std::cout << table;
    return 0;
}

int cmd_compare(const Common& c, const std::string& out)
{
    SceneFile file = load(c, c.seed);
    apply(c, c.seed, file);
    const Run pbd = run(file, "pbd");
    const Run sa = run(file, "mcmc");
    fs::create_directories(out);
    write_text(fs::path(out) / "compare.csv", compare_csv(pbd.trace, sa.trace));
    write_text(fs::path(out) / "pbd.svg", render_svg(file.scene, pbd.layout, svg_options(c)));
    write_text(fs::path(out) / "mcmc.svg", render_svg(file.scene, sa.layout, svg_options(c)));
    write_text(fs::path(out) / "pbd_meta.json", run_meta_json(pbd.meta));
    write_text(fs::path(out) / "mcmc_meta.json", run_meta_json(sa.meta));
    std::cout << file.scene.name << " seed " << c.seed << ": pbd " << number(pbd.meta.final_energy) << " after "
              << pbd.meta.iterations << " iterations, mcmc " << number(sa.meta.final_energy) << " after "
              << sa.meta.iterations << " iterations\n";
    return 0;
}

int cmd_validate(const Common& c)
{
    const SceneFile file = load(c, c.seed);
    const Scene& s = file.scene;
    std::cout << "ok: " << s.name << ", " << s.objects.size() << " objects, " << s.groups.size() << " groups, "
              << s.constraints.size() << " constraints\n";
    return 0;
}

int cmd_export(const Common& c, const std::string& out)
{
    SceneFile file = load(c, c.seed);
    apply(c, c.seed, file);
    const std::string text = serialize_scene_file(file);
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text(out, text);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Constraint-projection layout synthesis"};
    app.require_subcommand(1);

    Common c;
    std::string out;

    auto* synth = app.add_subcommand("synth", "Synthesize one layout");
    add_scene_options(*synth, c);
    add_run_options(*synth, c);
    synth->add_option("--mode", c.mode, "Optimizer")->check(CLI::IsMember({"pbd", "mcmc"}));
    synth->add_option("--out", out, "Output directory")->required();

    int seeds = 4;
    unsigned threads = 0;
    auto* suggest = app.add_subcommand("suggest", "Several independent layouts, one SVG each");
    add_scene_options(*suggest, c);
    add_run_options(*suggest, c);
    suggest->add_option("--mode", c.mode, "Optimizer")->check(CLI::IsMember({"pbd", "mcmc"}));
    suggest->add_option("--seeds", seeds, "Number of seeds, starting at --seed")->check(CLI::PositiveNumber);
    suggest->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");
    suggest->add_option("--out", out, "Output directory")->required();

    std::string bench_scene = "theater1";
    std::string counts = "50,100,200";
    std::string count_param = "chairs";
    int repeat = 10;
    auto* bench = app.add_subcommand("bench", "Mean wall time over repeats per object count");
    bench->add_option("--scene", bench_scene, "Template name");
    bench->add_option("--counts", counts, "Comma-separated counts");
    bench->add_option("--count-param", count_param, "Template parameter the counts set");
    bench->add_option("--repeat", repeat, "Runs per count")->check(CLI::PositiveNumber);
    bench->add_option("--param", c.params, "Template parameter key=value (repeatable)");
    bench->add_option("--mode", c.mode, "Optimizer")->check(CLI::IsMember({"pbd", "mcmc"}));
    bench->add_option("--out", out, "Timing table (CSV)");
    add_run_options(*bench, c);

    auto* compare = app.add_subcommand("compare", "Both optimizers from the same start");
    add_scene_options(*compare, c);
    add_run_options(*compare, c);
    compare->add_option("--out", out, "Output directory")->required();

    auto* validate = app.add_subcommand("validate", "Check a scene file or template");
    add_scene_options(*validate, c);
    validate->add_option("--seed", c.seed, "Seed for randomized templates");

    auto* exp = app.add_subcommand("export", "Write a template as a scene file");
    add_scene_options(*exp, c);
    add_run_options(*exp, c);
    exp->add_option("--out", out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth) {
            return cmd_synth(c, out);
        }
        if (*suggest) {
            return cmd_suggest(c, seeds, threads, out);
        }
        if (*bench) {
            return cmd_bench(c, bench_scene, counts, count_param, repeat, out);
        }
        if (*compare) {
            return cmd_compare(c, out);
        }
        if (*validate) {
            return cmd_validate(c);
        }
        if (*exp) {
            return cmd_export(c, out);
        }
    } catch (const SceneError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
