#include "skewlab/circle.hpp"

#include <algorithm>
#include <cmath>

#include "skewlab/errors.hpp"

namespace skewlab {

double wrap_unit(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;  // guards x = -1e-18 rounding to 1.0
    if (y < 0.0) y = 0.0;
    return y;
}

double signed_gap(double a, double b) {
    double d = wrap_unit(b - a);
    return d > 0.5 ? d - 1.0 : d;
}

double circle_dist(double a, double b) {
    double d = std::fabs(signed_gap(a, b));
    return d;
}

double Arc::midpoint() const { return wrap_unit(anchor + 0.5 * length); }

double Arc::end() const { return wrap_unit(anchor + length); }

bool Arc::contains(double x) const {
    if (length >= 1.0) return true;
    double t = wrap_unit(x - anchor);
    return t <= length;
}

double Arc::offset_of(double x) const {
    if (length >= 1.0) return wrap_unit(x - anchor);
    double t = wrap_unit(x - anchor);
    if (t <= length) return length > 0.0 ? t / length : 0.0;
    return -1.0;
}

Arc arc_centered(double c, double length) {
    return Arc{wrap_unit(c - 0.5 * length), length};
}

bool arc_contains_arc(const Arc& outer, const Arc& inner) {
    if (outer.length >= 1.0) return true;
    if (inner.length > outer.length) return false;
    double t = wrap_unit(inner.anchor - outer.anchor);
    return t + inner.length <= outer.length;
}

Arc arc_hull(const Arc& a, const Arc& b) {
    if (arc_contains_arc(a, b)) return a;
    if (arc_contains_arc(b, a)) return b;
    // candidate hulls: start at a.anchor and run to b's end, or start at
    // b.anchor and run to a's end; lengths reuse the offsets that
    // arc_contains_arc computes, so coverage holds by construction
    double tb = wrap_unit(b.anchor - a.anchor);
    double ta = wrap_unit(a.anchor - b.anchor);
    Arc ha{a.anchor, std::max(a.length, tb + b.length)};
    Arc hb{b.anchor, std::max(b.length, ta + a.length)};
    const Arc& h = ha.length <= hb.length ? ha : hb;
    if (h.length >= 1.0) throw Error("arc_hull: arcs too far apart");
    return h;
}

double dist_to_boundary(const Arc& arc, double x) {
    if (arc.length >= 1.0) return 0.5;  // no boundary; half-circle bound
    double t = wrap_unit(x - arc.anchor);
    if (t > arc.length) return 0.0;
    return std::min(t, arc.length - t);
}

bool arcs_pairwise_disjoint(const std::vector<Arc>& arcs) {
    return min_arc_gap(arcs) > 0.0;
}

double min_arc_gap(const std::vector<Arc>& arcs) {
    if (arcs.size() < 2) return 1.0;
    double cover = 0.0;
    for (const Arc& a : arcs) cover += a.length;
    if (cover >= 1.0) return -1.0;
    std::vector<Arc> s =
        arcs;  // sort by anchor; lengths stay attached to their arc
    std::sort(s.begin(), s.end(),
              [](const Arc& x, const Arc& y) { return x.anchor < y.anchor; });
    double best = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Arc& cur = s[i];
        const Arc& nxt = s[(i + 1) % s.size()];
        double start_next = nxt.anchor + (i + 1 == s.size() ? 1.0 : 0.0);
        double gap = start_next - (cur.anchor + cur.length);
        best = std::min(best, gap);
    }
    return best;
}

double total_arc_length(const std::vector<Arc>& arcs) {
    double s = 0.0;
    for (const Arc& a : arcs) s += a.length;
    return s;
}

}  // namespace skewlab
