#pragma once

#include "layout/constraint.hpp"
#include "layout/constraints.hpp"
#include "layout/scene.hpp"
#include "layout/spatial_hash.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace layout {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProjectionMode : std::uint8_t { Sequential, Batch };

std::string to_string(ProjectionMode mode);
std::string to_string(BroadPhase phase);

struct SolverConfig {
    int max_iterations = 1000;
    ProjectionMode mode = ProjectionMode::Sequential;
    double batch_averaging = 1.2;
    int termination_window = 50;
    /// Gains in best energy at or below this do not reset the window.
    double improvement_tolerance = 1e-9;
    std::uint64_t seed = 0;
    bool interleave = true;
    BroadPhase broad_phase = BroadPhase::Hash;
    Stiffness collision_stiffness = default_stiffness(ConstraintKind::Collision);
    Stiffness accessibility_stiffness = default_stiffness(ConstraintKind::Accessibility);
    /// Post-pass of k = 1 collision/boundary sweeps on the best iterate.
    bool settle = true;
    int settle_sweeps = 500;
    double settle_tolerance = 1e-9;

    void validate() const;
};

using KindSums = std::array<double, kConstraintKindCount>;

struct Energy {
    double total = 0.0;
    KindSums violation{}; ///< unweighted Σ violation per kind
};

struct EnergyTrace {
    double initial_energy = 0.0;
    std::vector<double> energy;      ///< E_l for l = 1, 2, ...
    std::vector<double> best_energy; ///< running minimum of energy
    std::vector<KindSums> violation;
    double best = std::numeric_limits<double>::infinity();
    int best_iteration = 0;
    /// Last iteration that beat the best by more than the tolerance.
    int progress_iteration = 0;
    std::vector<Particle> best_state;
    std::size_t degenerate_directions = 0;
    std::size_t boundary_clamps = 0;

    int iterations() const { return static_cast<int>(energy.size()); }
    /// Appends one iteration; returns true when it is a strict new best.
    bool record(const Energy& e, std::span<const Particle> state, double tolerance = 0.0);
};

struct SynthesisResult {
    std::vector<Particle> layout;
    double final_energy = 0.0;
    EnergyTrace trace;
    int settle_sweeps = 0;
    double max_overlap = 0.0;
};

/// Random start: uniform over the room's bounding box, rejection-sampled into
/// the polygon, uniform yaw. Authored poses and fixed particles are kept.
/// Rigid members are placed from their group pose; curve members start at
/// their parametric point on the group's curve, keeping a random yaw. Curve
/// group poses are redrawn (up to 1000 times) until every member point lies
/// in the room.
std::vector<Particle> initialize(const Scene& scene, Rng& rng);
std::vector<Particle> initialize(const Scene& scene, std::uint64_t seed);

/// E = sqrt(Σ γ_j v_j²) over user constraints, curve attachments and the
/// generated collision, accessibility and boundary terms.
Energy evaluate_energy(const Scene& scene, const SceneIndex& index, std::span<const Particle> particles,
                       BroadPhase broad_phase = BroadPhase::Hash);
Energy evaluate_energy(const Scene& scene, std::span<const Particle> particles);

/// Largest pairwise bounding-circle overlap and boundary violation, ignoring
/// pairs inside one rigid group. Independent of the scene's collision flag.
struct HardViolation {
    double max_overlap = 0.0;
    double max_boundary = 0.0;
};
HardViolation hard_violation(const Scene& scene, const SceneIndex& index, std::span<const Particle> particles);

/// Curve attachment instances for the current group poses: one distance-0
/// equality per curve member against its nearest curve point, in member order.
struct Attachment {
    std::size_t group;
    std::size_t member_particle;
    Vec2 target;
};
std::vector<Attachment> curve_attachments(const Scene& scene, std::span<const Particle> particles);

/// Applies a correction through rigid routing: translations and rotations on
/// rigid members move the group particle, whose members are then re-posed.
/// Corrections to particles whose root has infinite mass are dropped.
void apply_correction(const Scene& scene, const SceneIndex& index, std::vector<Particle>& particles,
                      const Correction& c);

/// Moves the members of curve group g by the rigid motion its particle made
/// since `before`. Member yaw is left alone.
void carry_curve_members(const Scene& scene, std::size_t g, const Pose& before, std::vector<Particle>& particles);
/// Re-poses every member of rigid group g from the group particle.
void sync_rigid_group(const Scene& scene, std::size_t g, std::vector<Particle>& particles);
void sync_rigid_groups(const Scene& scene, std::vector<Particle>& particles);

/// Group constraints at stiffness k: curve attachments for curve groups,
/// member poses for rigid groups. Returns the corrections applied.
Corrections apply_group_constraints(const Scene& scene, const SceneIndex& index, std::size_t g,
                                    std::vector<Particle>& particles, double k);

/// Mutable per-run state threaded through step().
struct StepContext {
    explicit StepContext(const Scene& scene, std::uint64_t seed);

    const Scene& scene;
    SceneIndex index;
    Rng rng;
    DirectionSource directions;
    std::size_t boundary_clamps = 0;

    StepContext(const StepContext&) = delete;
    StepContext& operator=(const StepContext&) = delete;
};

/// One solver iteration l >= 1, in place.
void step(StepContext& ctx, std::vector<Particle>& particles, int l, const SolverConfig& config);

/// Iterates step() until max_iterations or no strict improvement of the best
/// energy for termination_window iterations; returns the best iterate
/// (after the optional settle pass).
SynthesisResult synthesize(const Scene& scene, const SolverConfig& config);
/// Same, from a given start state.
SynthesisResult synthesize_from(const Scene& scene, std::vector<Particle> start, const SolverConfig& config);

/// k = 1 collision and boundary sweeps until the largest overlap is below
/// tolerance or the sweep cap is hit. Returns the number of sweeps run.
int settle(const Scene& scene, const SceneIndex& index, std::vector<Particle>& particles, int max_sweeps,
           double tolerance);

} // namespace layout
