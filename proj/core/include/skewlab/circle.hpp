#pragma once

#include <cstddef>
#include <vector>

namespace skewlab {

// Points live on R/Z, represented in [0,1).
double wrap_unit(double x);

// Signed representative of b-a in (-1/2, 1/2].
double signed_gap(double a, double b);

// min(|b-a|, 1-|b-a|)
double circle_dist(double a, double b);

// Closed arc [anchor, anchor+length] mod 1, 0 <= length <= 1.
// length == 1 means the whole circle.
struct Arc {
    double anchor = 0.0;
    double length = 0.0;

    double midpoint() const;
    double end() const;  // wrapped right endpoint
    bool contains(double x) const;
    // largest t in [0,1] with anchor+t*length == x, or -1 if outside
    double offset_of(double x) const;
};

// Arc centered at c with given length.
Arc arc_centered(double c, double length);

// Does inner sit inside outer (as closed arcs)?
bool arc_contains_arc(const Arc& outer, const Arc& inner);

// Smallest arc containing both (assumes union is not the whole circle
// and the two arcs overlap or are close; used for small arcs only).
Arc arc_hull(const Arc& a, const Arc& b);

// Distance from x to the nearest endpoint of the arc, 0 if outside.
double dist_to_boundary(const Arc& arc, double x);

// Pairwise disjointness of closed arcs; touching endpoints count as
// overlap. O(n log n).
bool arcs_pairwise_disjoint(const std::vector<Arc>& arcs);

// Minimal gap between consecutive arcs after circular sorting;
// negative if some pair overlaps.
double min_arc_gap(const std::vector<Arc>& arcs);

double total_arc_length(const std::vector<Arc>& arcs);

}  // namespace skewlab
