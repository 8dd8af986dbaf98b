#pragma once

#include "layout/random.hpp"
#include "layout/scene.hpp"
#include "layout/solver.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace layout {

struct AnnealConfig {
    int total_iterations = 20000;
    /// Unset: the run's initial energy (at least 10 × t_final).
    std::optional<double> t_initial;
    double t_final = 1e-3;
    int stall_window = 1500;
    double stall_threshold = 0.001;
    /// Unset: 10 % of the room's bounding-box diagonal.
    std::optional<double> sigma_position;
    double sigma_orientation = degrees_to_radians(15.0);
    double position_probability = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Temperature at iteration t in [1, total] on the linear schedule.
double temperature(double t_initial, double t_final, int t, int total);

/// Particles the annealer may move: free objects, rigid group particles and
/// the particles of non-rigid groups. Infinite-mass particles are excluded.
std::vector<std::size_t> movable_bodies(const Scene& scene);

struct Proposal {
    std::size_t particle = 0;
    bool moved_position = false;
};

/// Shifts one attribute of one uniformly chosen body in place. Position
/// shifts leaving the room's bounding box are reflected back into it (a
/// symmetric kernel); shifts ending outside a non-rectangular polygon are
/// returned as nullopt and leave the state untouched.
std::optional<Proposal> propose(const Scene& scene, std::span<const std::size_t> bodies,
                                std::vector<Particle>& state, double sigma_position, double sigma_orientation,
                                double position_probability, Rng& rng);

/// Boltzmann acceptance.
bool accept(double e_current, double e_candidate, double temperature, Rng& rng);

struct AnnealResult {
    std::vector<Particle> layout;
    double final_energy = 0.0;
    EnergyTrace trace;
    double t_initial = 0.0;
    double sigma_position = 0.0;
    std::size_t accepted = 0;
};

AnnealResult run_sa_mcmc(const Scene& scene, const AnnealConfig& config);
AnnealResult run_sa_mcmc_from(const Scene& scene, std::vector<Particle> start, const AnnealConfig& config);

} // namespace layout
