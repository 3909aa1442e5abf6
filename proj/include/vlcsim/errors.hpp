#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlcsim {

/// A design violated one of the optimization constraints. The message lists
/// every violated constraint by name.
class ConstraintError : public std::runtime_error {
public:
    explicit ConstraintError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "constraint violation:";
        for (const auto& item : v) s += " [" + item + "]";
        return s;
    }
    std::vector<std::string> violations_;
};

/// Exhaustive search refused because the grid is larger than the configured
/// evaluation cap.
class SearchSpaceError : public std::runtime_error {
public:
    SearchSpaceError(double search_space_size, double cap)
        : std::runtime_error("exhaustive search refused: search space has " +
                             format_size(search_space_size) + " points, cap is " +
                             format_size(cap)),
          size_(search_space_size) {}

    double search_space_size() const { return size_; }

private:
    static std::string format_size(double s) {
        if (s > 1e308) return "more than 1e308";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4g", s);
        return buf;
    }
    double size_;
};

}  // namespace vlcsim
