#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/word.hpp"

namespace skewlab {

// x -> x + a + (b/2pi) sin(2pi x) mod 1, derivative 1 + b cos(2pi x).
// |b| < 1 keeps the derivative positive, so each map is an
// orientation-preserving diffeomorphism.
struct SineMap {
    double a = 0.0;
    double b = 0.0;
};

class MapFamily {
  public:
    explicit MapFamily(std::vector<SineMap> per_symbol);

    int alphabet_size() const { return static_cast<int>(maps_.size()); }
    const SineMap& params(Symbol j) const;

    double eval(Symbol j, double x) const;
    double deriv(Symbol j, double x) const;  // exact closed form, > 0

    // Preimage under f_j (monotone lift, safeguarded Newton).
    double invert(Symbol j, double y) const;

    // max over the circle of f_j' = 1 + |b_j|
    double sup_deriv(Symbol j) const;
    double max_sup_deriv() const;

  private:
    std::vector<SineMap> maps_;
};

// Left-to-right composition: the first symbol of w acts first.
double eval_word(const MapFamily& fam, const Word& w, double x);

// Chain-rule product of per-symbol derivatives along the orbit of x.
// May underflow to 0 for long contracting words; see the log variant.
double word_derivative(const MapFamily& fam, const Word& w, double x);
double word_log_derivative(const MapFamily& fam, const Word& w, double x);

// Image of an arc: anchor moves to f(anchor), length is updated per symbol
// with the cancellation-safe identity
//   L' = L + (b/pi) cos(2pi(x + L/2)) sin(pi L),
// which keeps tiny arcs positive and relatively accurate.
Arc arc_image(const MapFamily& fam, const Word& w, const Arc& A);
Arc arc_image_symbol(const MapFamily& fam, Symbol j, const Arc& A);

// max over a uniform G-point grid on the arc (endpoints included) of the
// log of the word derivative
double grid_sup_log_word_derivative(const MapFamily& fam, const Word& w,
                                    const Arc& arc, int grid_points);

struct FixedPointOptions {
    double tol = 1e-12;
    std::int64_t max_iter = 1000000;
    int grid_points = 4096;     // grid for the reported contraction constant
    int precheck_grid = 512;    // cheaper grid for the contraction precheck
};

struct FixedPointResult {
    double q = 0.0;
    double c = 0.0;      // grid sup of |g'| on J (may underflow to 0)
    double c_log = 0.0;  // log of the same sup, always finite
};

// Locates the attracting fixed point of g = eval_word(w, .) inside J.
// Requires g(J) inside J and grid sup of g' on J below 1; iterates from the
// midpoint, falling back to bisection on the displacement if needed.
FixedPointResult find_attracting_fixed_point(const MapFamily& fam,
                                             const Word& w, const Arc& J,
                                             const FixedPointOptions& opts);

}  // namespace skewlab
