#pragma once

#include <span>
#include <vector>

#include "hko/errors.hpp"

namespace hko {

// Compact axis-aligned box [lo_1, hi_1] x ... x [lo_n, hi_n].
class Box {
  public:
    Box() = default;
    Box(std::vector<double> lo, std::vector<double> hi);

    static Box interval(double lo, double hi) { return Box({lo}, {hi}); }

    int dim() const { return static_cast<int>(lo_.size()); }
    double lo(int i) const { return lo_[static_cast<std::size_t>(i)]; }
    double hi(int i) const { return hi_[static_cast<std::size_t>(i)]; }
    double width(int i) const { return hi_[static_cast<std::size_t>(i)] - lo_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& lower() const { return lo_; }
    const std::vector<double>& upper() const { return hi_; }

    double volume() const;
    // longest edge, and the first axis attaining it
    int longest_axis() const;

    bool contains(std::span<const double> x) const;   // closed box
    bool contains(const Box& other) const;
    // closed-interval overlap with positive volume
    bool overlaps_interior(const Box& other) const;
    Box intersect(const Box& other) const;            // empty widths clamp to a point

    std::vector<double> midpoint() const;

    bool operator==(const Box&) const = default;

  private:
    std::vector<double> lo_, hi_;
};

} // namespace hko
