#pragma once

#include "layout/scene.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace layout {

/// Generator parameters as key/value text. Getters validate ranges; keys a
/// template never reads are reported by `build`.
class SceneParams {
public:
    SceneParams() = default;

    SceneParams& set(const std::string& key, const std::string& value);
    SceneParams& set(const std::string& key, double value);

    /// Parses "key=value" entries.
    static SceneParams parse(std::span<const std::string> entries);

    int integer(const std::string& key, int fallback, int lo, int hi) const;
    double number(const std::string& key, double fallback, double lo, double hi) const;
    bool flag(const std::string& key, bool fallback) const;
    std::string choice(const std::string& key, const std::string& fallback,
                       std::initializer_list<std::string_view> allowed) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    std::vector<std::string> unused() const;

private:
    const std::string* lookup(const std::string& key) const;

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

std::vector<std::string> template_names();

/// Builds a benchmark scene. Throws SceneError for an unknown name, a bad
/// parameter value or a parameter the template does not take.
Scene build(std::string_view name, const SceneParams& params = {}, std::uint64_t seed = 0);

/// theater1 at each chair count, otherwise identical.
std::vector<Scene> scaling_series(std::span<const int> counts, const SceneParams& base = {});

} // namespace layout
