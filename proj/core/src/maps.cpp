#include "skewlab/maps.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;
}

MapFamily::MapFamily(std::vector<SineMap> per_symbol)
    : maps_(std::move(per_symbol)) {
    if (maps_.empty()) throw BuildError("empty-family", -1, "no maps given");
    if (maps_.size() > 9)
        throw BuildError("alphabet-too-large", -1,
                         "text grammar supports symbols 1..9 only");
    for (const SineMap& m : maps_)
        if (!(std::fabs(m.b) < 1.0))
            throw BuildError("map-not-diffeo", -1,
                             "|b| must be < 1 for a positive derivative");
}

const SineMap& MapFamily::params(Symbol j) const {
    if (j < 1 || static_cast<std::size_t>(j) > maps_.size())
        throw Error("unknown symbol " + std::to_string(int(j)));
    return maps_[j - 1];
}

double MapFamily::eval(Symbol j, double x) const {
    const SineMap& m = params(j);
    return wrap_unit(x + m.a + (m.b / kTwoPi) * std::sin(kTwoPi * x));
}

double MapFamily::deriv(Symbol j, double x) const {
    const SineMap& m = params(j);
    return 1.0 + m.b * std::cos(kTwoPi * x);
}

double MapFamily::invert(Symbol j, double y) const {
    const SineMap& m = params(j);
    // solve f(t) = t + a + (b/2pi) sin(2pi t) = y on the lift; the sine term
    // is bounded by |b|/2pi < 0.16, so [y - a - 0.2, y - a + 0.2] brackets
    double lo = y - m.a - 0.2, hi = y - m.a + 0.2;
    auto g = [&](double t) {
        return t + m.a + (m.b / kTwoPi) * std::sin(kTwoPi * t) - y;
    };
    double t = y - m.a;
    for (int it = 0; it < 200; ++it) {
        double gt = g(t);
        if (gt > 0)
            hi = t;
        else
            lo = t;
        double d = 1.0 + m.b * std::cos(kTwoPi * t);
        double tn = t - gt / d;
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (std::fabs(tn - t) < 1e-16 || hi - lo < 1e-16) {
            t = tn;
            break;
        }
        t = tn;
    }
    return wrap_unit(t);
}

double MapFamily::sup_deriv(Symbol j) const {
    return 1.0 + std::fabs(params(j).b);
}

double MapFamily::max_sup_deriv() const {
    double m = 0.0;
    for (std::size_t i = 0; i < maps_.size(); ++i)
        m = std::max(m, 1.0 + std::fabs(maps_[i].b));
    return m;
}

double eval_word(const MapFamily& fam, const Word& w, double x) {
    w.for_each([&](Symbol s) { x = fam.eval(s, x); });
    return x;
}

double word_derivative(const MapFamily& fam, const Word& w, double x) {
    double d = 1.0;
    w.for_each([&](Symbol s) {
        d *= fam.deriv(s, x);
        x = fam.eval(s, x);
    });
    return d;
}

double word_log_derivative(const MapFamily& fam, const Word& w, double x) {
    double d = 0.0;
    w.for_each([&](Symbol s) {
        d += std::log(fam.deriv(s, x));
        x = fam.eval(s, x);
    });
    return d;
}

Arc arc_image_symbol(const MapFamily& fam, Symbol j, const Arc& A) {
    if (A.length >= 1.0)
        throw Error("arc_image rejects full-circle input");
    const SineMap& m = fam.params(j);
    double x = A.anchor, L = A.length;
    // sin(2pi(x+L)) - sin(2pi x) = 2 cos(2pi(x+L/2)) sin(pi L)
    double Lp =
        L + (m.b / std::numbers::pi_v<double>)*std::cos(kTwoPi * (x + 0.5 * L)) *
                std::sin(std::numbers::pi_v<double> * L);
    return Arc{fam.eval(j, x), Lp};
}

Arc arc_image(const MapFamily& fam, const Word& w, const Arc& A) {
    Arc cur = A;
    if (cur.length >= 1.0)
        throw Error("arc_image rejects full-circle input");
    w.for_each([&](Symbol s) { cur = arc_image_symbol(fam, s, cur); });
    return cur;
}

double grid_sup_log_word_derivative(const MapFamily& fam, const Word& w,
                                    const Arc& arc, int grid_points) {
    if (grid_points < 2) throw Error("grid needs at least 2 points");
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        double x = wrap_unit(arc.anchor +
                             arc.length * (double(i) / double(grid_points - 1)));
        best = std::max(best, word_log_derivative(fam, w, x));
    }
    return best;
}

FixedPointResult find_attracting_fixed_point(const MapFamily& fam,
                                             const Word& w, const Arc& J,
                                             const FixedPointOptions& opts) {
    Arc image = arc_image(fam, w, J);
    if (!arc_contains_arc(J, image))
        throw BuildError("no-contraction", -1,
                         "word image is not contained in the interval");
    double pre = grid_sup_log_word_derivative(fam, w, J, opts.precheck_grid);
    if (pre >= 0.0)
        throw BuildError("no-contraction", -1,
                         "derivative estimate on the interval is >= 1");

    double x = J.midpoint();
    bool converged = false;
    for (std::int64_t it = 0; it < opts.max_iter; ++it) {
        double xn = eval_word(fam, w, x);
        double d = circle_dist(xn, x);
        x = xn;
        if (d < opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        // bisection on the signed displacement g(x) - x along the arc
        double lo = 0.0, hi = J.length;
        auto disp = [&](double t) {
            double p = wrap_unit(J.anchor + t);
            return signed_gap(p, eval_word(fam, w, p));
        };
        double dlo = disp(lo), dhi = disp(hi);
        if (dlo == 0.0) {
            x = J.anchor;
            converged = true;
        } else if (dhi == 0.0) {
            x = J.end();
            converged = true;
        } else if ((dlo < 0) != (dhi < 0)) {
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                double dm = disp(mid);
                if (dm == 0.0 || hi - lo < opts.tol * 1e-3) {
                    lo = hi = mid;
                    break;
                }
                if ((dm < 0) == (dlo < 0)) {
                    lo = mid;
                    dlo = dm;
                } else {
                    hi = mid;
                }
            }
            x = wrap_unit(J.anchor + 0.5 * (lo + hi));
            converged = circle_dist(eval_word(fam, w, x), x) < opts.tol;
        }
        if (!converged)
            throw BuildError("no-convergence", -1,
                             "fixed point iteration did not reach tolerance");
    }

    FixedPointResult out;
    out.q = x;
    out.c_log = grid_sup_log_word_derivative(fam, w, J, opts.grid_points);
    out.c = std::exp(out.c_log);
    return out;
}

}  // namespace skewlab
