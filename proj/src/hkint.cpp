#include "hko/hkint.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace hko {

// ---------------------------------------------------------------- gauges

Gauge Gauge::constant(double d0) {
    if (!(d0 > 0.0) || !std::isfinite(d0)) throw SpecError("constant gauge needs d0 > 0");
    Gauge g;
    g.kind_ = Kind::Constant;
    g.d0_ = d0;
    return g;
}

Gauge Gauge::radial(std::vector<double> center, double scale, double floor_value) {
    if (!(floor_value > 0.0)) throw SpecError("radial gauge needs a positive floor");
    if (!(scale >= 0.0)) throw SpecError("radial gauge needs a nonnegative scale");
    Gauge g;
    g.kind_ = Kind::Radial;
    g.center_ = std::move(center);
    g.scale_ = scale;
    g.floor_ = floor_value;
    return g;
}

Gauge Gauge::tabulated(const Box& box, int level, std::vector<double> cell_values) {
    if (level < 0 || level > 20) throw SpecError("tabulated gauge level out of range");
    std::size_t want = 1;
    for (int i = 0; i < box.dim(); ++i) want *= (std::size_t{1} << level);
    if (cell_values.size() != want)
        throw SpecError("tabulated gauge needs " + std::to_string(want) + " cell values");
    for (double v : cell_values)
        if (!(v > 0.0) || !std::isfinite(v)) throw SpecError("tabulated gauge values must be positive");
    Gauge g;
    g.kind_ = Kind::Tabulated;
    g.grid_box_ = box;
    g.level_ = level;
    g.values_ = std::move(cell_values);
    return g;
}

double Gauge::operator()(std::span<const double> x) const {
    switch (kind_) {
        case Kind::Constant: return d0_;
        case Kind::Radial: {
            double d = 0.0;
            for (std::size_t i = 0; i < center_.size() && i < x.size(); ++i)
                d = std::max(d, std::fabs(x[i] - center_[i]));
            return std::max(scale_ * d, floor_);
        }
        case Kind::Tabulated: {
            std::size_t n_per = std::size_t{1} << level_;
            std::size_t flat = 0, stride = 1;
            for (int i = 0; i < grid_box_.dim(); ++i) {
                double rel = (x[static_cast<std::size_t>(i)] - grid_box_.lo(i)) / grid_box_.width(i);
                auto idx = static_cast<long>(rel * static_cast<double>(n_per));
                idx = std::clamp(idx, 0L, static_cast<long>(n_per) - 1);
                flat += static_cast<std::size_t>(idx) * stride;
                stride *= n_per;
            }
            return values_[flat];
        }
    }
    return d0_;
}

// ------------------------------------------------------------ partitions

void TaggedPartition::validate() const {
    double total = 0.0;
    for (const auto& [cell, tag] : cells) {
        if (cell.dim() != parent.dim()) throw SpecError("partition cell dimension mismatch");
        if (!parent.contains(cell)) throw SpecError("partition cell outside the parent box");
        if (!cell.contains(tag)) throw SpecError("partition tag outside its cell");
        total += cell.volume();
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j)
            if (cells[i].cell.overlaps_interior(cells[j].cell))
                throw SpecError("partition cells overlap");
    double pv = parent.volume();
    if (std::fabs(total - pv) > 1e-12 * std::max(1.0, pv))
        throw SpecError("partition does not cover the parent box");
}

bool is_delta_fine(const TaggedPartition& p, const Gauge& g) {
    for (const auto& [cell, tag] : p.cells) {
        double r = g(tag);
        for (int i = 0; i < cell.dim(); ++i) {
            double reach = std::max(tag[static_cast<std::size_t>(i)] - cell.lo(i),
                                    cell.hi(i) - tag[static_cast<std::size_t>(i)]);
            if (reach > r) return false;
        }
    }
    return true;
}

namespace {

std::pair<Box, Box> split_box(const Box& b, int axis) {
    std::vector<double> lo = b.lower(), hi = b.upper();
    double mid = 0.5 * (b.lo(axis) + b.hi(axis));
    std::vector<double> hi1 = hi, lo2 = lo;
    hi1[static_cast<std::size_t>(axis)] = mid;
    lo2[static_cast<std::size_t>(axis)] = mid;
    return {Box(std::move(lo), std::move(hi1)), Box(std::move(lo2), std::move(hi))};
}

bool ball_covers(std::span<const double> tag, double r, const Box& cell) {
    for (int i = 0; i < cell.dim(); ++i) {
        double reach = std::max(tag[static_cast<std::size_t>(i)] - cell.lo(i),
                                cell.hi(i) - tag[static_cast<std::size_t>(i)]);
        if (reach > r) return false;
    }
    return true;
}

} // namespace

TaggedPartition cousin_partition(const Box& box, const Gauge& g, int max_depth) {
    TaggedPartition out;
    out.parent = box;
    struct Item {
        Box cell;
        std::vector<int> depth;
    };
    std::vector<Item> stack;
    stack.push_back({box, std::vector<int>(static_cast<std::size_t>(box.dim()), 0)});
    const int n = box.dim();
    const std::size_t corner_count = std::size_t{1} << n;

    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();

        bool accepted = false;
        std::vector<double> cand = it.cell.midpoint();
        if (ball_covers(cand, g(cand), it.cell)) {
            out.cells.push_back({it.cell, std::move(cand)});
            accepted = true;
        } else {
            for (std::size_t mask = 0; mask < corner_count && !accepted; ++mask) {
                for (int i = 0; i < n; ++i)
                    cand[static_cast<std::size_t>(i)] =
                        (mask >> i) & 1 ? it.cell.hi(i) : it.cell.lo(i);
                if (ball_covers(cand, g(cand), it.cell)) {
                    out.cells.push_back({it.cell, cand});
                    accepted = true;
                }
            }
        }
        if (accepted) continue;

        int axis = it.cell.longest_axis();
        if (it.depth[static_cast<std::size_t>(axis)] >= max_depth)
            throw IntegrationError("cousin construction exceeded the depth budget (gauge shrinks too fast)");
        if (out.cells.size() + stack.size() > (1u << 22))
            throw IntegrationError("cousin construction exceeded the cell budget");
        auto [l, r] = split_box(it.cell, axis);
        std::vector<int> d = it.depth;
        ++d[static_cast<std::size_t>(axis)];
        // push right first so the left half is processed first (stable order)
        stack.push_back({std::move(r), d});
        stack.push_back({std::move(l), std::move(d)});
    }
    return out;
}

double riemann_sum(const FuncExpr& f, const TaggedPartition& p) {
    double sum = 0.0;
    for (const auto& [cell, tag] : p.cells) {
        double v;
        if (f.is_singular_point(tag)) {
            const SingularPoint* hit = nullptr;
            for (const auto& s : f.singular())
                if (s.point == tag) hit = &s;
            if (!hit || !hit->value)
                throw EvalError("tag at a singular point with no declared value");
            v = *hit->value;
        } else {
            v = f.eval(tag);
        }
        sum += v * cell.volume();
    }
    return sum;
}

// ------------------------------------------------------------ integrator

namespace {

struct QCell {
    Box cell;
    double vol = 0.0;
    double s1 = 0.0, s2 = 0.0, e = 0.0;
    double margin = 0.0;
    int depth = 0;
};

bool cell_less(const QCell& a, const QCell& b) {
    if (a.margin != b.margin) return a.margin < b.margin;
    if (a.e != b.e) return a.e < b.e;
    if (a.cell.lower() != b.cell.lower()) return a.cell.lower() > b.cell.lower();
    return a.cell.upper() > b.cell.upper();
}

// Midpoint sums over the 2^n dyadic children (s1) and the 4^n grandchildren
// (s2). Both refine every axis, so the disagreement e = |s1 - s2| cannot be
// blinded by integrands that are flat along one axis.
QCell make_qcell(const PointFn& f, Box cell, int depth, double tol, double region_vol) {
    QCell q;
    q.vol = cell.volume();
    q.depth = depth;
    const int n = cell.dim();
    // nested per-axis breakpoints lo, q1, mid, q3, hi
    std::vector<std::array<double, 5>> bp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double lo = cell.lo(i), hi = cell.hi(i);
        double mid = 0.5 * (lo + hi);
        bp[static_cast<std::size_t>(i)] = {lo, 0.5 * (lo + mid), mid, 0.5 * (mid + hi), hi};
    }
    double s1 = 0.0, s2 = 0.0;
    std::vector<double> m(static_cast<std::size_t>(n));
    const std::size_t kids = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < kids; ++mask) {
        double vol = 1.0;
        for (int i = 0; i < n; ++i) {
            const auto& b = bp[static_cast<std::size_t>(i)];
            bool upper = (mask >> i) & 1u;
            vol *= upper ? b[4] - b[2] : b[2] - b[0];
            m[static_cast<std::size_t>(i)] = upper ? b[3] : b[1];
        }
        s1 += f.f(m) * vol;
    }
    std::vector<int> digit(static_cast<std::size_t>(n), 0);
    while (true) {
        double vol = 1.0;
        for (int i = 0; i < n; ++i) {
            const auto& b = bp[static_cast<std::size_t>(i)];
            int d = digit[static_cast<std::size_t>(i)];
            vol *= b[d + 1] - b[d];
            m[static_cast<std::size_t>(i)] = 0.5 * (b[d] + b[d + 1]);
        }
        s2 += f.f(m) * vol;
        int i = 0;
        while (i < n && ++digit[static_cast<std::size_t>(i)] == 4) {
            digit[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == n) break;
    }
    if (!std::isfinite(s1) || !std::isfinite(s2))
        throw IntegrationError("non-finite Riemann sums in a cell");
    q.cell = std::move(cell);
    q.s1 = s1;
    q.s2 = s2;
    q.e = std::fabs(s1 - s2);
    q.margin = q.e - tol * (region_vol > 0.0 ? q.vol / region_vol : 0.0);
    return q;
}

struct RegionResult {
    double value = 0.0;
    double err = 0.0;
    long cells = 0;
};

RegionResult finish_region(std::vector<QCell>& leaves) {
    std::sort(leaves.begin(), leaves.end(), [](const QCell& a, const QCell& b) {
        if (a.cell.lower() != b.cell.lower()) return a.cell.lower() < b.cell.lower();
        return a.cell.upper() < b.cell.upper();
    });
    RegionResult r;
    for (const QCell& q : leaves) {
        r.value += q.s2;
        r.err += q.e;
    }
    r.cells = static_cast<long>(leaves.size());
    return r;
}

RegionResult adaptive_region(const PointFn& f, const std::vector<Box>& seeds, double tol,
                             long& used, const IntegrateOptions& opt) {
    std::vector<QCell> heap, frozen;
    double region_vol = 0.0;
    for (const Box& s : seeds) region_vol += s.volume();
    if (region_vol <= 0.0) return {};

    double total_e = 0.0;
    for (const Box& s : seeds) {
        if (s.volume() <= 0.0) continue;
        heap.push_back(make_qcell(f, s, 0, tol, region_vol));
        total_e += heap.back().e;
        std::push_heap(heap.begin(), heap.end(), cell_less);
    }
    const int depth_cap = opt.max_depth * seeds.front().dim();
    long iter = 0;

    while (!heap.empty()) {
        if ((++iter & 0xFFFF) == 0) { // resync accumulated error against fp drift
            total_e = 0.0;
            for (const QCell& q : heap) total_e += q.e;
            for (const QCell& q : frozen) total_e += q.e;
        }
        const QCell& top = heap.front();
        if (top.margin <= 0.0 && total_e <= tol) break;
        std::pop_heap(heap.begin(), heap.end(), cell_less);
        QCell cur = std::move(heap.back());
        heap.pop_back();
        int axis = cur.cell.longest_axis();
        double mid = 0.5 * (cur.cell.lo(axis) + cur.cell.hi(axis));
        if (cur.depth >= depth_cap || mid <= cur.cell.lo(axis) || mid >= cur.cell.hi(axis)) {
            frozen.push_back(std::move(cur));
            continue;
        }
        used += 1;
        if (used > opt.cell_budget) {
            double v1 = 0.0, v2 = 0.0;
            for (const QCell& q : heap) v1 += q.s1, v2 += q.s2;
            for (const QCell& q : frozen) v1 += q.s1, v2 += q.s2;
            throw IntegrationError("integration did not converge within the cell budget (last sums " +
                                   std::to_string(v1 + cur.s1) + " and " + std::to_string(v2 + cur.s2) + ")");
        }
        auto [l, r] = split_box(cur.cell, axis);
        total_e -= cur.e;
        for (Box* child : {&l, &r}) {
            heap.push_back(make_qcell(f, std::move(*child), cur.depth + 1, tol, region_vol));
            total_e += heap.back().e;
            std::push_heap(heap.begin(), heap.end(), cell_less);
        }
    }

    for (QCell& q : frozen) heap.push_back(std::move(q));
    RegionResult res = finish_region(heap);
    if (res.err > tol * (1.0 + 1e-9) + 1e-300 && !frozen.empty())
        throw IntegrationError("refinement depth exhausted before reaching the tolerance");
    return res;
}

// cube(p, w) clipped to the box
Box cube_at(const std::vector<double>& p, double w, const Box& box) {
    std::vector<double> lo(p.size()), hi(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        int ii = static_cast<int>(i);
        lo[i] = std::max(box.lo(ii), p[i] - w);
        hi[i] = std::max(lo[i], std::min(box.hi(ii), p[i] + w));
    }
    return Box(std::move(lo), std::move(hi));
}

// boxes tiling outer \ inner, for inner contained in outer
std::vector<Box> peel(const Box& outer, const Box& inner) {
    std::vector<Box> out;
    Box cur = outer;
    for (int i = 0; i < outer.dim(); ++i) {
        if (inner.lo(i) > cur.lo(i)) {
            std::vector<double> lo = cur.lower(), hi = cur.upper();
            hi[static_cast<std::size_t>(i)] = inner.lo(i);
            Box piece(std::move(lo), std::move(hi));
            if (piece.volume() > 0.0) out.push_back(std::move(piece));
        }
        if (inner.hi(i) < cur.hi(i)) {
            std::vector<double> lo = cur.lower(), hi = cur.upper();
            lo[static_cast<std::size_t>(i)] = inner.hi(i);
            Box piece(std::move(lo), std::move(hi));
            if (piece.volume() > 0.0) out.push_back(std::move(piece));
        }
        std::vector<double> lo = cur.lower(), hi = cur.upper();
        lo[static_cast<std::size_t>(i)] = inner.lo(i);
        hi[static_cast<std::size_t>(i)] = inner.hi(i);
        cur = Box(std::move(lo), std::move(hi));
    }
    return out;
}

// Shrinking cube bands around one singular point. Stops once two consecutive
// bands contribute at most tol_sp/4 each; the tail estimate is the size of
// those last two shells.
RegionResult handle_singular(const PointFn& f, const Box& box, const std::vector<double>& p,
                             double w0, double tol_sp, long& used, const IntegrateOptions& opt) {
    RegionResult acc;
    double w = w0;
    bool prev_small = false;
    double prev_mag = 0.0;
    for (int j = 0; j < 80; ++j) {
        Box outer = cube_at(p, w, box);
        Box inner = cube_at(p, 0.5 * w, box);
        double band_tol = tol_sp * 0.25 * std::ldexp(1.0, -j);
        RegionResult band = adaptive_region(f, peel(outer, inner), band_tol, used, opt);
        acc.value += band.value;
        acc.err += band.err;
        acc.cells += band.cells;
        double mag = std::fabs(band.value) + band.err;
        bool small = mag <= tol_sp * 0.25;
        if (small && prev_small) {
            acc.err += mag + prev_mag; // tail of the untouched inner cube
            acc.cells += 1;            // the pinned cube, contributing value 0
            return acc;
        }
        prev_small = small;
        prev_mag = mag;
        w *= 0.5;
    }
    throw IntegrationError("singular frontier did not converge: shells keep contributing");
}

} // namespace

IntegralResult hk_integrate(const PointFn& f, const Box& box, double tol,
                            const IntegrateOptions& opt) {
    if (!(tol > 0.0)) throw SpecError("integration tolerance must be positive");
    if (box.volume() <= 0.0) return {0.0, 0.0, 0};

    std::vector<const SingularPoint*> inside;
    for (const auto& s : f.singular)
        if (box.contains(s.point)) inside.push_back(&s);

    long used = 0;
    if (inside.empty()) {
        RegionResult r = adaptive_region(f, {box}, tol, used, opt);
        return {r.value, r.err, r.cells};
    }

    double w0 = 0.0;
    for (int i = 0; i < box.dim(); ++i) w0 = std::max(w0, box.width(i));
    w0 /= 8.0;
    // keep the singular cubes pairwise disjoint
    for (int tries = 0; tries < 50; ++tries) {
        bool ok = true;
        for (std::size_t i = 0; i < inside.size() && ok; ++i)
            for (std::size_t j = i + 1; j < inside.size() && ok; ++j)
                if (cube_at(inside[i]->point, w0, box).overlaps_interior(cube_at(inside[j]->point, w0, box)))
                    ok = false;
        if (ok) break;
        w0 *= 0.5;
        if (tries == 49) throw IntegrationError("singular points too close to separate");
    }

    std::vector<Box> regular = {box};
    for (const SingularPoint* s : inside) {
        Box cube = cube_at(s->point, w0, box);
        std::vector<Box> next;
        for (const Box& r : regular) {
            if (r.overlaps_interior(cube)) {
                for (Box& piece : peel(r, cube.intersect(r))) next.push_back(std::move(piece));
            } else {
                next.push_back(r);
            }
        }
        regular = std::move(next);
    }

    double tol_reg = 0.5 * tol;
    double tol_sp = 0.5 * tol / static_cast<double>(inside.size());
    RegionResult total = adaptive_region(f, regular, tol_reg, used, opt);
    for (const SingularPoint* s : inside) {
        RegionResult r = handle_singular(f, box, s->point, w0, tol_sp, used, opt);
        total.value += r.value;
        total.err += r.err;
        total.cells += r.cells;
    }
    return {total.value, total.err, total.cells};
}

IntegralResult hk_integrate(const FuncExpr& f, const Box& box, double tol,
                            const IntegrateOptions& opt) {
    if (!f.domain().contains(box)) throw SpecError("integration box outside the function domain");
    PointFn pf{[&f](std::span<const double> x) { return f.eval(x); }, f.singular()};
    return hk_integrate(pf, box, tol, opt);
}

double alexiewicz_norm(const FuncExpr& f, const Box& box, double tol) {
    if (box.dim() != 1) throw SpecError("the partial-integral sup norm is 1-D");
    if (!(tol > 0.0)) throw SpecError("tolerance must be positive");
    double lo = box.lo(0), w = box.width(0);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int level = 16; level <= 256; level *= 2) {
        double sup = 0.0, prefix = 0.0;
        for (int k = 0; k < level; ++k) {
            Box seg = Box::interval(lo + w * k / level, lo + w * (k + 1) / level);
            prefix += hk_integrate(f, seg, tol / (2.0 * level)).value;
            sup = std::max(sup, std::fabs(prefix));
        }
        if (!std::isnan(prev) && std::fabs(sup - prev) <= 0.5 * tol) return sup;
        prev = sup;
    }
    throw IntegrationError("partial-integral sup did not stabilize under grid refinement");
}

} // namespace hko
