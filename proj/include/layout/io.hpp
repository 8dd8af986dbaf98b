#pragma once

#include "layout/annealer.hpp"
#include "layout/scene.hpp"
#include "layout/solver.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace layout {

/// A scene plus the optimizer settings stored alongside it.
struct SceneFile {
    Scene scene;
    SolverConfig solver;
    AnnealConfig annealer;
};

/// Diagnostic for a bad scene document: the JSON pointer of the offending
/// value and its 1-based line.
class ParseError : public SceneError {
public:
    /// `source` (a file name) prefixes the message when given.
    ParseError(std::string path, int line, const std::string& message, std::string_view source = {});

    const std::string& path() const { return path_; }
    int line() const { return line_; }
    const std::string& message() const { return message_; }

private:
    std::string path_;
    int line_;
    std::string message_;
};

/// Parses a scene document. Unknown fields, wrong types, unknown kinds,
/// dangling ids and invalid values are all ParseErrors.
SceneFile parse_scene_file(std::string_view text);
Scene parse_scene(std::string_view text);

/// Pretty JSON with angles in degrees. The plain form omits the solver and
/// annealer sections.
std::string serialize_scene(const Scene& scene);
std::string serialize_scene_file(const SceneFile& file);

/// Reads a file; parse errors are prefixed with the file name.
SceneFile load_scene_file(const std::filesystem::path& path);

/// Object id → pose (x, y, z in meters, yaw in degrees), then group poses.
std::string layout_json(const Scene& scene, std::span<const Particle> layout);

/// iteration, energy, best_energy, then one violation column per kind.
std::string trace_csv(const EnergyTrace& trace);

/// Both optimizers' energy and best energy on one iteration index. A run
/// that stopped early leaves its cells empty.
std::string compare_csv(const EnergyTrace& pbd, const EnergyTrace& sa);

struct RunMeta {
    std::string scene;
    std::string mode; ///< "pbd" or "mcmc"
    std::uint64_t seed = 0;
    SolverConfig solver;
    AnnealConfig annealer;
    /// Resolved annealer values when the mode is mcmc.
    std::optional<double> t_initial;
    std::optional<double> sigma_position;
    double initial_energy = 0.0;
    double final_energy = 0.0;
    int iterations = 0;
    int best_iteration = 0;
    double max_overlap = 0.0;
};

/// Every setting a run used: both configs, per-kind default stiffness and
/// weight, and the outcome. No timing, so equal runs give equal bytes.
std::string run_meta_json(const RunMeta& meta);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

} // namespace layout
