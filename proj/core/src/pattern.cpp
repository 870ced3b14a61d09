#include "skewlab/pattern.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "skewlab/errors.hpp"
#include "skewlab/periodic.hpp"

namespace skewlab {

namespace {

std::vector<Arc> stage0_prefix_arcs(const MapFamily& fam, const Word& omega0,
                                    const Arc& J0) {
    std::vector<Arc> arcs{J0};
    Arc cur = J0;
    std::uint64_t pi0 = omega0.length();
    for (std::uint64_t l = 1; l < pi0; ++l) {
        cur = arc_image_symbol(fam, omega0.at(l - 1), cur);
        arcs.push_back(cur);
    }
    return arcs;
}

FixedPointOptions fp_options(const StageOptions& o) {
    FixedPointOptions f;
    f.tol = o.tol;
    f.max_iter = o.max_iter;
    f.grid_points = o.grid_points;
    f.precheck_grid = std::min(o.grid_points, 512);
    return f;
}

}  // namespace

Stage init_stage0(const MapFamily& fam, const Word& omega0, const Arc& J0,
                  const StageOptions& opts) {
    if (omega0.empty())
        throw BuildError("empty-base-word", 0, "omega0 must be nonempty");
    if (!(J0.length > 0.0 && J0.length < 1.0))
        throw BuildError("interval-fit", 0, "J0 must be a proper arc");

    FixedPointResult fp =
        find_attracting_fixed_point(fam, omega0, J0, fp_options(opts));

    std::vector<Arc> prefixes = stage0_prefix_arcs(fam, omega0, J0);
    if (!arcs_pairwise_disjoint(prefixes))
        throw BuildError("prefix-images-overlap", 0,
                         "images of J0 under the base-word prefixes intersect");

    Stage s;
    s.n = 0;
    s.xi = omega0;
    s.pi = omega0.length();
    s.q = fp.q;
    s.J = J0;
    s.c = fp.c;
    s.c_log = fp.c_log;
    s.rho_num = s.pi;
    s.rho_den = s.pi;
    return s;
}

Stage build_next_stage(const MapFamily& fam, const Stage& prev, int k_n,
                       const Word& alpha, const StageOptions& opts) {
    int n = prev.n + 1;
    if (k_n < 2)
        throw BuildError("repetition-count", n, "k_n must be >= 2");
    if (alpha.empty())
        throw BuildError("noise-length", n, "alpha must be nonempty");

    Word xi = Word::concat(Word::power(prev.xi, std::uint64_t(k_n)), alpha);
    std::uint64_t pi = xi.length();
    std::uint64_t R = alpha.length();

    FixedPointResult fp =
        find_attracting_fixed_point(fam, xi, prev.J, fp_options(opts));
    double q = fp.q;

    double d_prev = circle_dist(q, prev.q);
    double L = std::min(0.5 * prev.J.length, 2.0 * dist_to_boundary(prev.J, q));
    if (d_prev > 0.0) L = std::min(L, opts.psi * d_prev);
    double min_len = 64.0 * std::numeric_limits<double>::epsilon() *
                     std::max(std::fabs(q), 0.01);
    if (!(L > min_len))
        throw BuildError("interval-fit", n,
                         "no representable interval around the fixed point");

    Arc J;
    double c_log = 0.0;
    bool ok = false;
    for (int it = 0; it < opts.max_shrink_iters && L > min_len; ++it) {
        J = arc_centered(q, L);
        if (!arc_contains_arc(prev.J, J)) {
            L *= opts.shrink_step;
            continue;
        }
        c_log = grid_sup_log_word_derivative(fam, xi, J, opts.grid_points);
        Arc img = arc_image(fam, xi, J);
        if (c_log <= std::log(opts.c_target) && arc_contains_arc(J, img)) {
            ok = true;
            break;
        }
        L *= opts.shrink_step;
    }
    if (!ok)
        throw BuildError("no-certified-interval", n,
                         "could not certify a contracting interval at the "
                         "target constant");

    Stage s;
    s.n = n;
    s.xi = xi;
    s.pi = pi;
    s.k = k_n;
    s.alpha = alpha;
    s.R = R;
    s.q = q;
    s.J = J;
    s.c_log = c_log;
    s.c = std::exp(c_log);
    s.lambda = double(R) / (double(k_n) * double(prev.pi));
    if (prev.rho_num > std::numeric_limits<std::uint64_t>::max() / k_n)
        throw LimitError("mass-numerator-overflow",
                         "exact occupancy numerator exceeds 64 bits");
    s.rho_num = prev.rho_num * std::uint64_t(k_n);
    s.rho_den = pi;
    s.rho = double(s.rho_num) / double(s.rho_den);
    if (n < 63 && !(pi > (std::uint64_t(1) << n)))
        throw BuildError("period-exponential", n,
                         "period does not exceed 2^n");
    return s;
}

namespace {

Word word_from_indices(const std::vector<int>& idx) {
    std::vector<Symbol> syms(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        syms[i] = static_cast<Symbol>(idx[i] + 1);
    return Word::literal(std::move(syms));
}

}  // namespace

SearchOutcome build_with_noise_search(const MapFamily& fam, const Stage& prev,
                                      int k_n, std::uint64_t R_n,
                                      const NoiseStrategy& strategy,
                                      const StageOptions& opts,
                                      std::uint64_t seed) {
    if (R_n < 1)
        throw BuildError("noise-length", prev.n + 1, "R_n must be >= 1");
    int A = fam.alphabet_size();
    SearchOutcome out;

    auto try_alpha = [&](const Word& alpha) -> bool {
        ++out.attempts;
        try {
            out.stage = build_next_stage(fam, prev, k_n, alpha, opts);
            out.alpha = alpha;
            return true;
        } catch (const BuildError&) {
            return false;
        }
    };

    if (strategy.kind == NoiseStrategy::Kind::Exhaustive) {
        double space = std::pow(double(A), double(R_n));
        if (space > 1e6)
            throw LimitError("search-space",
                             "exhaustive noise search over " +
                                 std::to_string(space) + " words");
        std::vector<int> idx(static_cast<std::size_t>(R_n), 0);
        while (true) {
            if (try_alpha(word_from_indices(idx))) return out;
            // odometer, most significant digit first for lexicographic order
            std::size_t p = idx.size();
            while (p > 0 && idx[p - 1] == A - 1) idx[--p] = 0;
            if (p == 0) break;
            ++idx[p - 1];
        }
    } else {
        std::uint64_t mixed = seed;
        mixed ^= 0x9e3779b97f4a7c15ull * std::uint64_t(prev.n + 1);
        mixed ^= 0xbf58476d1ce4e5b9ull * std::uint64_t(k_n);
        mixed ^= 0x94d049bb133111ebull * R_n;
        std::mt19937_64 rng(mixed);
        std::uniform_int_distribution<int> dist(0, A - 1);
        for (std::uint64_t s = 0; s < strategy.samples; ++s) {
            std::vector<int> idx(static_cast<std::size_t>(R_n));
            for (auto& v : idx) v = dist(rng);
            if (try_alpha(word_from_indices(idx))) return out;
        }
    }
    throw BuildError("no-admissible-noise", prev.n + 1,
                     "no noise word of length " + std::to_string(R_n) +
                         " yields a valid stage");
}

Word search_noise_word(const MapFamily& fam, const Stage& prev, int k_n,
                       std::uint64_t R_n, const NoiseStrategy& strategy,
                       const StageOptions& opts, std::uint64_t seed) {
    return build_with_noise_search(fam, prev, k_n, R_n, strategy, opts, seed)
        .alpha;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

PatternCertificate validate(const MapFamily& fam,
                            const std::vector<Stage>& stages,
                            const TailModel& tail, const StageOptions& opts) {
    PatternCertificate cert;
    auto add = [&](std::string name, int n, bool pass, std::string detail) {
        cert.rows.push_back(CheckRow{std::move(name), n, pass, std::move(detail)});
    };
    if (stages.empty()) {
        cert.valid = false;
        add("stage-list", -1, false, "empty stage list");
        return cert;
    }

    // level 0: prefix-image disjointness and contraction
    {
        const Stage& s0 = stages[0];
        std::vector<Arc> prefixes = stage0_prefix_arcs(fam, s0.xi, s0.J);
        bool dis = arcs_pairwise_disjoint(prefixes);
        add("prefix-image-disjointness", 0, dis,
            "arcs=" + std::to_string(prefixes.size()) +
                " min_gap=" + fmt(min_arc_gap(prefixes)));
    }

    double lambda_sum = 0.0;
    double rho_closed = 1.0;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const Stage& s = stages[i];
        int n = s.n;
        bool idx_ok = (n == int(i));
        if (!idx_ok) add("stage-list", n, false, "levels not consecutive");

        // fixed point residual and contraction, recomputed from scratch
        double gq = eval_word(fam, s.xi, s.q);
        double res = circle_dist(gq, s.q);
        add("fixed-point-residual", n, res < opts.tol, "residual=" + fmt(res));

        double clog =
            grid_sup_log_word_derivative(fam, s.xi, s.J, opts.grid_points);
        add("contraction-bound", n, clog < 0.0,
            "log_sup=" + fmt(clog) + " sup=" + fmt(std::exp(clog)));
        add("contraction-target", n, clog <= std::log(opts.c_target),
            "sup=" + fmt(std::exp(clog)) + " target=" + fmt(opts.c_target));
        Arc img = arc_image(fam, s.xi, s.J);
        add("interval-into-itself", n, arc_contains_arc(s.J, img),
            "image_length=" + fmt(img.length));

        if (n == 0) continue;
        const Stage& p = stages[i - 1];

        add("repetition-count", n, s.k >= 2, "k=" + std::to_string(s.k));
        add("noise-length", n, s.R >= 1 && s.R == s.alpha.length(),
            "R=" + std::to_string(s.R));

        bool nest = arc_contains_arc(p.J, s.J) && s.J.length < p.J.length &&
                    s.J.length > 0.0;
        add("interval-nesting", n, nest,
            "len=" + fmt(s.J.length) + " prev=" + fmt(p.J.length));
        add("interval-halving", n, s.J.length <= 0.5 * p.J.length,
            "ratio=" + fmt(s.J.length / p.J.length));

        bool period_ok = (s.pi == std::uint64_t(s.k) * p.pi + s.R) &&
                         (s.xi.length() == s.pi);
        add("period-recursion", n, period_ok, "pi=" + std::to_string(s.pi));
        bool expo_ok = n >= 63 || s.pi > (std::uint64_t(1) << n);
        add("period-exponential", n, expo_ok,
            "pi=" + std::to_string(s.pi) + " 2^n=" +
                std::to_string(n < 63 ? (std::uint64_t(1) << n) : 0));

        // factorization: xi_n must read as k copies of xi_{n-1} then alpha
        bool fact = s.pi <= opts.expand_cap;
        if (fact) {
            std::vector<Symbol> prev_flat = p.xi.expand(opts.expand_cap);
            std::vector<Symbol> alpha_flat = s.alpha.expand(opts.expand_cap);
            std::uint64_t body = std::uint64_t(s.k) * p.pi;
            std::uint64_t pos = 0;
            bool good = true;
            s.xi.for_each([&](Symbol sym) {
                Symbol want = pos < body
                                  ? prev_flat[std::size_t(pos % p.pi)]
                                  : alpha_flat[std::size_t(pos - body)];
                if (sym != want) good = false;
                ++pos;
            });
            fact = good && pos == s.pi;
        }
        add("word-factorization", n, fact, "pi=" + std::to_string(s.pi));

        double lam = double(s.R) / (double(s.k) * double(p.pi));
        bool lam_ok = std::fabs(s.lambda - lam) <=
                      1e-15 * std::max(1.0, std::fabs(lam));
        add("ratio-value", n, lam_ok, "lambda=" + fmt(s.lambda));
        lambda_sum += s.lambda;
        rho_closed /= (1.0 + s.lambda);

        bool rho_rec = std::fabs(s.rho - rho_closed) <= 1e-12 * rho_closed;
        bool rho_int = (s.rho_num == p.rho_num * std::uint64_t(s.k)) &&
                       (s.rho_den == s.pi) &&
                       std::fabs(s.rho - double(s.rho_num) / double(s.rho_den)) <=
                           1e-15;
        add("mass-recursion", n, rho_rec && rho_int,
            "rho=" + fmt(s.rho) + " closed=" + fmt(rho_closed) + " exact=" +
                std::to_string(s.rho_num) + "/" + std::to_string(s.rho_den));
        add("mass-decreasing", n, s.rho < p.rho,
            "rho=" + fmt(s.rho) + " prev=" + fmt(p.rho));
        add("mass-exp-lower-bound", n, s.rho >= std::exp(-lambda_sum),
            "rho=" + fmt(s.rho) + " exp(-sum)=" + fmt(std::exp(-lambda_sum)));

        if (n > tail.after_stage) {
            double cap = tail.C * std::pow(tail.ratio, double(n));
            add("ratio-tail-model", n, s.lambda <= cap,
                "lambda=" + fmt(s.lambda) + " cap=" + fmt(cap));
        }
    }

    int built = stages.back().n;
    double tail_sum = 0.0;
    bool tail_ok = tail.ratio > 0.0 && tail.ratio < 1.0 && tail.C >= 0.0;
    if (tail_ok)
        tail_sum = tail.C * std::pow(tail.ratio, double(built + 1)) /
                   (1.0 - tail.ratio);
    add("tail-model-summable", built, tail_ok,
        "C=" + fmt(tail.C) + " ratio=" + fmt(tail.ratio));

    cert.lambda_partial_sum = lambda_sum;
    cert.lambda_hat = lambda_sum + tail_sum;
    cert.rho_last = stages.back().rho;
    cert.rho_lower_bound = std::exp(-cert.lambda_hat);
    add("limit-mass-positive", built,
        tail_ok && cert.rho_last >= cert.rho_lower_bound,
        "rho=" + fmt(cert.rho_last) + " bound=" + fmt(cert.rho_lower_bound));

    cert.valid = true;
    for (const CheckRow& r : cert.rows) cert.valid = cert.valid && r.pass;
    return cert;
}

TrendReport contraction_trend_report(const std::vector<Stage>& stages,
                            const MapFamily& fam) {
    TrendReport rep;
    double maxsup_log10 = std::log10(fam.max_sup_deriv());
    double prev_lyap = 0.0;
    double prev_gamma = 0.0;
    rep.gamma_trend_decreasing = true;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const Stage& s = stages[i];
        TrendRow row;
        row.n = s.n;
        row.lyapunov = word_log_derivative(fam, s.xi, s.q) / double(s.pi);
        row.halving = i > 0 && row.lyapunov < 0.0 &&
                      row.lyapunov >= 0.5 * prev_lyap;
        row.gamma_log10 =
            double(s.pi) * maxsup_log10 + std::log10(s.J.length);
        if (i > 0 && row.gamma_log10 >= prev_gamma)
            rep.gamma_trend_decreasing = false;
        prev_lyap = row.lyapunov;
        prev_gamma = row.gamma_log10;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace skewlab
