#include "hko/box.hpp"

#include <algorithm>
#include <cmath>

namespace hko {

Box::Box(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.empty())
        throw SpecError("box bounds must be nonempty vectors of equal length");
    for (std::size_t i = 0; i < lo_.size(); ++i) {
        if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]))
            throw SpecError("box bounds must be finite");
        if (lo_[i] > hi_[i])
            throw SpecError("box has lo > hi on axis " + std::to_string(i + 1));
    }
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo_.size(); ++i) v *= hi_[i] - lo_[i];
    return v;
}

int Box::longest_axis() const {
    int best = 0;
    double w = hi_[0] - lo_[0];
    for (int i = 1; i < dim(); ++i) {
        if (width(i) > w) {
            w = width(i);
            best = i;
        }
    }
    return best;
}

bool Box::contains(std::span<const double> x) const {
    if (x.size() != lo_.size()) return false;
    for (std::size_t i = 0; i < lo_.size(); ++i)
        if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
    return true;
}

bool Box::contains(const Box& other) const {
    if (other.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (other.lo(i) < lo(i) || other.hi(i) > hi(i)) return false;
    return true;
}

bool Box::overlaps_interior(const Box& other) const {
    if (other.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (std::min(hi(i), other.hi(i)) <= std::max(lo(i), other.lo(i))) return false;
    return true;
}

Box Box::intersect(const Box& other) const {
    if (other.dim() != dim()) throw SpecError("box intersection across dimensions");
    std::vector<double> l(lo_.size()), h(lo_.size());
    for (int i = 0; i < dim(); ++i) {
        l[static_cast<std::size_t>(i)] = std::max(lo(i), other.lo(i));
        h[static_cast<std::size_t>(i)] = std::max(l[static_cast<std::size_t>(i)], std::min(hi(i), other.hi(i)));
    }
    return Box(std::move(l), std::move(h));
}

std::vector<double> Box::midpoint() const {
    std::vector<double> m(lo_.size());
    for (std::size_t i = 0; i < lo_.size(); ++i) m[i] = 0.5 * (lo_[i] + hi_[i]);
    return m;
}

} // namespace hko
