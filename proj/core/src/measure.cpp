#include "skewlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;
// arcs at or below this length cannot be separated reliably in doubles
constexpr double kResolutionFloor = 1e-15;
}  // namespace

OrbitMeasure orbit_fiber_points(const MapFamily& fam, const Stage& stage,
                                std::uint64_t sample_cap) {
    if (stage.pi > sample_cap)
        throw LimitError("orbit-sample-cap",
                         "orbit of period " + std::to_string(stage.pi) +
                             " exceeds the sample cap");
    OrbitMeasure om;
    om.m = stage.n;
    om.pi = stage.pi;
    om.q = stage.q;
    om.pts.reserve(static_cast<std::size_t>(stage.pi));
    double x = stage.q;
    stage.xi.for_each([&](Symbol s) {
        x = fam.eval(s, x);
        om.pts.push_back(x);
    });
    return om;
}

StripFamily build_strips(const MapFamily& fam, const std::vector<Stage>& stages,
                         int n, double theta) {
    if (n < 1 || static_cast<std::size_t>(n) + 1 >= stages.size())
        throw BuildError("strips-level", n,
                         "strips at level n need stages through n+1");
    const Stage& sn = stages[static_cast<std::size_t>(n)];
    const Stage& sn1 = stages[static_cast<std::size_t>(n + 1)];

    double want = std::max((1.0 + theta) * sn1.J.length, theta * sn.J.length);
    Arc base = arc_centered(sn.q, want);
    if (!arc_contains_arc(sn.J, base)) {
        // clip the centered arc into J_n (position measured from J_n's start)
        double rel = wrap_unit(base.anchor - sn.J.anchor);
        if (rel > 0.5) rel -= 1.0;
        double start = std::max(0.0, rel);
        double end = std::min(rel + base.length, sn.J.length);
        if (!(end > start))
            throw BuildError("strips-core-interval", n,
                             "core interval clipped to nothing");
        base = Arc{wrap_unit(sn.J.anchor + start), end - start};
    }
    Arc jp = arc_hull(base, sn1.J);
    if (!arc_contains_arc(sn.J, jp))
        throw BuildError("strips-core-interval", n,
                         "core interval does not fit inside J_n");
    if (!jp.contains(sn.q) || !arc_contains_arc(jp, sn1.J))
        throw BuildError("strips-core-interval", n,
                         "core interval misses q_n or J_{n+1}");

    // level family: apply g_{i-1}^l for l = 0..k_i, deepest level first
    std::vector<Arc> S{jp};
    for (int i = n; i >= 1; --i) {
        const Stage& si = stages[static_cast<std::size_t>(i)];
        const Word& g = stages[static_cast<std::size_t>(i - 1)].xi;
        std::vector<Arc> out = S;
        std::vector<Arc> cur = std::move(S);
        for (int l = 1; l <= si.k; ++l) {
            for (Arc& a : cur) a = arc_image(fam, g, a);
            out.insert(out.end(), cur.begin(), cur.end());
        }
        S = std::move(out);
    }

    StripFamily out;
    out.n = n;
    out.Jprime = jp;
    out.core_arcs = S.size();

    // base-word prefix images of the core family
    const Word& omega0 = stages[0].xi;
    std::uint64_t pi0 = stages[0].pi;
    std::vector<Arc> all = S;
    std::vector<Arc> cur = std::move(S);
    for (std::uint64_t l = 1; l < pi0; ++l) {
        Symbol s = omega0.at(l - 1);
        for (Arc& a : cur) a = arc_image_symbol(fam, s, a);
        all.insert(all.end(), cur.begin(), cur.end());
    }

    std::sort(all.begin(), all.end(), [](const Arc& a, const Arc& b) {
        return a.anchor < b.anchor ||
               (a.anchor == b.anchor && a.length < b.length);
    });
    all.erase(std::unique(all.begin(), all.end(),
                          [](const Arc& a, const Arc& b) {
                              return a.anchor == b.anchor &&
                                     a.length == b.length;
                          }),
              all.end());

    // disjointness, asserted at float resolution: sub-resolution contacts are
    // counted, anything larger is a hard failure
    double min_gap = 1.0;
    std::uint64_t unresolved = 0;
    if (all.size() >= 2) {
        for (std::size_t i = 0; i < all.size(); ++i) {
            const Arc& a = all[i];
            const Arc& b = all[(i + 1) % all.size()];
            double start_next = b.anchor + (i + 1 == all.size() ? 1.0 : 0.0);
            double g = start_next - (a.anchor + a.length);
            if (g <= 0.0) {
                bool resolvable =
                    std::min(a.length, b.length) > kResolutionFloor ||
                    g < -kResolutionFloor;
                if (resolvable)
                    throw CheckError(
                        "strip-disjointness",
                        "strip arcs overlap at level " + std::to_string(n) +
                            " near anchor " + std::to_string(a.anchor));
                ++unresolved;
            } else {
                min_gap = std::min(min_gap, g);
            }
        }
    }

    out.arcs = std::move(all);
    out.min_gap = min_gap;
    out.unresolved_pairs = unresolved;
    out.total_length = total_arc_length(out.arcs);
    return out;
}

namespace {

// candidate arcs that could contain x: the one starting at or before x, its
// successor (slack may reach past an anchor), and the wraparound pair
bool point_in_strips(const std::vector<Arc>& arcs, double x, double slack) {
    if (arcs.empty()) return false;
    auto it = std::upper_bound(
        arcs.begin(), arcs.end(), x,
        [](double v, const Arc& a) { return v < a.anchor; });
    std::size_t idx = (it == arcs.begin()) ? arcs.size() - 1
                                           : std::size_t(it - arcs.begin()) - 1;
    for (std::size_t probe :
         {idx, (idx + 1) % arcs.size(), std::size_t(0), arcs.size() - 1}) {
        const Arc& a = arcs[probe];
        double t = wrap_unit(x - a.anchor);
        if (t <= a.length + slack || t >= 1.0 - slack) return true;
    }
    return false;
}

}  // namespace

OccupancyResult occupancy(const OrbitMeasure& orbit, const StripFamily& strips,
                          std::uint64_t rho_num, std::uint64_t rho_den,
                          double slack) {
    OccupancyResult r;
    for (double x : orbit.pts)
        if (point_in_strips(strips.arcs, x, slack)) ++r.count;
    r.proportion = double(r.count) / double(orbit.pi);
    r.threshold = occupancy_threshold(rho_num, rho_den, orbit.pi);
    r.pass = r.count >= r.threshold;
    return r;
}

double min_outside_endpoint_distance(const OrbitMeasure& orbit,
                                     const StripFamily& strips, double slack) {
    const std::vector<Arc>& arcs = strips.arcs;
    if (arcs.empty()) return 1.0;
    double best = 1.0;
    for (double x : orbit.pts) {
        if (point_in_strips(arcs, x, slack)) continue;
        auto it = std::upper_bound(
            arcs.begin(), arcs.end(), x,
            [](double v, const Arc& a) { return v < a.anchor; });
        std::size_t hi = (it == arcs.end()) ? 0 : std::size_t(it - arcs.begin());
        std::size_t lo = (hi == 0) ? arcs.size() - 1 : hi - 1;
        for (std::size_t probe : {lo, hi}) {
            const Arc& a = arcs[probe];
            best = std::min(best, circle_dist(x, a.anchor));
            best = std::min(best, circle_dist(x, a.end()));
        }
    }
    return best;
}

double lyapunov_exponent(const MapFamily& fam, const Stage& stage,
                         const OrbitMeasure& orbit) {
    double sum = 0.0;
    double x = orbit.q;
    std::uint64_t l = 0;
    stage.xi.for_each([&](Symbol s) {
        sum += std::log(fam.deriv(s, x));
        x = orbit.pts[static_cast<std::size_t>(l++)];
    });
    return sum / double(orbit.pi);
}

SpanningResult fiber_spanning_count(const MapFamily& fam,
                                    const PeriodicPoint& xi, std::int64_t n,
                                    double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw Error("eps must be in (0, 0.5)");
    if (n < 1) throw Error("spanning horizon must be >= 1");

    const std::uint64_t kb =
        static_cast<std::uint64_t>(std::floor(1.0 / eps + 1e-9));
    const std::uint64_t K = kb + 1;  // initial net, gaps strictly below eps

    struct Rail {
        double t0;
        double cur;
    };
    std::vector<Rail> rails;
    rails.reserve(static_cast<std::size_t>(K));
    for (std::uint64_t j = 0; j < K; ++j) {
        double p = double(j) / double(K);
        rails.push_back(Rail{p, p});
    }

    // position at time t is the image of the time-0 point under the first t
    // symbols; after each advance, gaps above eps are filled and the fillers
    // are pulled back to time 0 through the one-step inverses
    for (std::int64_t t = 1; t < n; ++t) {
        Symbol s = xi.symbol_at(t - 1);
        for (Rail& r : rails) r.cur = fam.eval(s, r.cur);

        std::vector<Rail> rebuilt;
        rebuilt.reserve(rails.size() + 16);
        const std::size_t sz = rails.size();
        for (std::size_t i = 0; i < sz; ++i) {
            const Rail& a = rails[i];
            const Rail& b = rails[(i + 1) % sz];
            rebuilt.push_back(a);
            double g = (sz == 1) ? 1.0 : wrap_unit(b.cur - a.cur);
            if (g <= eps) continue;
            std::uint64_t c =
                static_cast<std::uint64_t>(std::ceil(g / eps - 1e-12));
            for (std::uint64_t j = 1; j < c; ++j) {
                double p = wrap_unit(a.cur + g * double(j) / double(c));
                double y = p;
                for (std::int64_t back = t; back >= 1; --back)
                    y = fam.invert(xi.symbol_at(back - 1), y);
                rebuilt.push_back(Rail{y, p});
            }
        }
        rails = std::move(rebuilt);
    }

    SpanningResult out;
    out.count = rails.size();
    out.bound = static_cast<std::uint64_t>(n) * (kb + 1);
    out.within_bound = out.count <= out.bound;

    std::vector<Rail> sorted = rails;
    std::sort(sorted.begin(), sorted.end(),
              [](const Rail& a, const Rail& b) { return a.t0 < b.t0; });
    out.time0_points.reserve(sorted.size());
    for (const Rail& r : sorted) out.time0_points.push_back(r.t0);

    // each verification grid point must stay within eps of one of its two
    // bracketing rails for the whole horizon
    const std::uint64_t Gv =
        10 * static_cast<std::uint64_t>(std::ceil(1.0 / eps - 1e-9));
    const double ver_slack = 1e-12;
    for (std::uint64_t gidx = 0; gidx < Gv; ++gidx) {
        double x = double(gidx) / double(Gv);
        auto it = std::upper_bound(
            sorted.begin(), sorted.end(), x,
            [](double v, const Rail& r) { return v < r.t0; });
        std::size_t hi =
            (it == sorted.end()) ? 0 : std::size_t(it - sorted.begin());
        std::size_t lo = (hi == 0) ? sorted.size() - 1 : hi - 1;
        double xa = sorted[lo].t0, xb = sorted[hi].t0, xc = x;
        double worst_a = 0.0, worst_b = 0.0;
        for (std::int64_t t = 0; t < n; ++t) {
            if (t > 0) {
                Symbol s = xi.symbol_at(t - 1);
                xa = fam.eval(s, xa);
                xb = fam.eval(s, xb);
                xc = fam.eval(s, xc);
            }
            worst_a = std::max(worst_a, circle_dist(xc, xa));
            worst_b = std::max(worst_b, circle_dist(xc, xb));
        }
        if (std::min(worst_a, worst_b) > eps + ver_slack)
            throw CheckError("spanning-verification",
                             "grid point " + std::to_string(x) +
                                 " escapes both bracketing rails");
    }
    out.verified = true;
    return out;
}

DisintegrationReport disintegration_histogram(const OrbitMeasure& orbit,
                                              const Word& xi, int w, int B) {
    if (B < 1) throw Error("bin count must be >= 1");
    if (w < 0) throw Error("window must be >= 0");
    DisintegrationReport rep;
    rep.m = orbit.m;
    rep.window = w;
    rep.bins = B;

    PeriodicPoint base(xi);
    std::map<std::string, std::vector<std::uint64_t>> hist;
    const std::int64_t pi = static_cast<std::int64_t>(orbit.pi);
    for (std::int64_t l = 1; l <= pi; ++l) {
        std::string key;
        key.reserve(static_cast<std::size_t>(2 * w + 1));
        for (std::int64_t c = -w; c <= w; ++c)
            key.push_back(static_cast<char>('0' + base.symbol_at(l + c)));
        double x = orbit.pts[static_cast<std::size_t>(l - 1)];
        int bin = std::min(B - 1, static_cast<int>(x * B));
        auto& v = hist[key];
        if (v.empty()) v.assign(static_cast<std::size_t>(B), 0);
        ++v[static_cast<std::size_t>(bin)];
    }

    double agg = 0.0, checksum = 0.0;
    for (auto& [key, bins] : hist) {
        CylinderRow row;
        row.cylinder = key;
        std::uint64_t total = 0, heaviest = 0;
        int heaviest_bin = -1;
        for (std::uint64_t c : bins) total += c;
        double sum_mass = 0.0;
        for (int b = 0; b < B; ++b) {
            std::uint64_t c = bins[static_cast<std::size_t>(b)];
            sum_mass += double(c) / double(total);
            if (c > heaviest) {
                heaviest = c;
                heaviest_bin = b;
            }
        }
        row.total = total;
        row.heaviest_mass = double(heaviest) / double(total);
        row.heaviest_bin = heaviest_bin;
        agg += (double(total) / double(orbit.pi)) * row.heaviest_mass;
        checksum += (double(total) / double(orbit.pi)) * sum_mass;
        rep.rows.push_back(std::move(row));
    }
    rep.aggregate_heaviest = agg;
    rep.mass_checksum = checksum;
    return rep;
}

MomentGap moment_gap(const OrbitMeasure& a, const OrbitMeasure& b, int jmax) {
    MomentGap out;
    double acc = 0.0;
    int terms = 0;
    for (int j = 1; j <= jmax; ++j) {
        double ca = 0, sa = 0, cb = 0, sb = 0;
        for (double x : a.pts) {
            ca += std::cos(kTwoPi * j * x);
            sa += std::sin(kTwoPi * j * x);
        }
        for (double x : b.pts) {
            cb += std::cos(kTwoPi * j * x);
            sb += std::sin(kTwoPi * j * x);
        }
        ca /= double(a.pts.size());
        sa /= double(a.pts.size());
        cb /= double(b.pts.size());
        sb /= double(b.pts.size());
        double g = std::hypot(ca - cb, sa - sb);
        out.max_gap = std::max(out.max_gap, g);
        acc += g;
        ++terms;
    }
    out.mean_gap = terms ? acc / terms : 0.0;
    return out;
}

}  // namespace skewlab
