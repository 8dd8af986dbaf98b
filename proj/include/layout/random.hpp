#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace layout {

// The standard distributions are implementation-defined, so the variates are
// derived from the (fully specified) mt19937_64 bit stream directly. This keeps
// seeded runs byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n)
    {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n));
    }

    /// Inclusive range.
    int integer(int lo, int hi)
    {
        return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1)));
    }

    /// Standard normal via Box-Muller; no cached second variate so the stream
    /// position is a pure function of the number of calls.
    double normal()
    {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
    std::mt19937_64 engine_;
};

} // namespace layout
