// Acceptance gate for the reference experiment: nine independent criteria,
// one PASS/FAIL line each, exit 0 only when every line passes. Time budgets
// are part of the contract; a slow pass is a fail.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/config.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/fk.hpp"
#include "skewlab/maps.hpp"
#include "skewlab/measure.hpp"
#include "skewlab/pattern.hpp"
#include "skewlab/periodic.hpp"
#include "skewlab/report.hpp"
#include "skewlab/stage.hpp"
#include "skewlab/stage_io.hpp"
#include "skewlab/word.hpp"

using namespace skewlab;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct Checker {
    bool ok = true;
    std::string note;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            if (note.empty()) note = what;
            ok = false;
        }
    }
};

struct Gate {
    int index = 0;
    int passed = 0;
    void run(const char* tag, double budget,
             const std::function<void(Checker&)>& body) {
        ++index;
        Checker c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            body(c);
        } catch (const Error& ex) {
            c.expect(false, std::string("error: ") + ex.what());
        } catch (const std::exception& ex) {
            c.expect(false, std::string("error: ") + ex.what());
        }
        double secs = seconds_since(t0);
        if (c.ok && budget > 0.0 && secs > budget)
            c.expect(false, "over the time budget of " +
                                std::to_string(budget) + "s");
        if (c.ok) ++passed;
        std::printf("C%d %s %-28s %7.2fs%s%s\n", index,
                    c.ok ? "PASS" : "FAIL", tag, secs,
                    c.note.empty() ? "" : "  ", c.note.c_str());
        std::fflush(stdout);
    }
};

std::string at(const char* what, int n) {
    return std::string(what) + " at n=" + std::to_string(n);
}

// every regular file under dir, relative path -> bytes
std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[e.path().lexically_relative(dir).generic_string()] = ss.str();
    }
    return out;
}

// deterministic word/point generator for the oracle comparisons
struct SplitMix {
    std::uint64_t state;
    explicit SplitMix(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double unit() { return double(next() >> 11) * 0x1.0p-53; }
};

Word random_word(SplitMix& rng, int max_len) {
    int len = 1 + int(rng.next() % std::uint64_t(max_len));
    std::string digits;
    for (int i = 0; i < len; ++i)
        digits.push_back(char('1' + int(rng.next() % 2)));
    return Word::literal(digits);
}

}  // namespace

int main() {
    ExperimentConfig cfg = parse_config(reference_config_text());
    MapFamily fam = make_family(cfg);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<Stage> stages = build_schedule(cfg, cfg.seed, -1);
    std::printf("SETUP %d stages built in %.2fs\n",
                int(stages.size()) - 1, seconds_since(t0));
    std::fflush(stdout);
    if (stages.size() < 14) {
        std::printf("RESULT 0/9 PASS\n");
        return 1;
    }

    Gate gate;
    const double slack = cfg.measure.membership_slack;
    std::vector<StripFamily> strips(13);
    std::vector<OrbitMeasure> orbits(13);

    gate.run("period-ratio-recursion", 1.0, [&](Checker& c) {
        double prod = 1.0;
        for (int n = 1; n <= 12; ++n) {
            const Stage& p = stages[std::size_t(n - 1)];
            const Stage& s = stages[std::size_t(n)];
            c.expect(s.pi == std::uint64_t(s.k) * p.pi + s.R,
                     at("period recursion", n));
            Word expected = Word::concat(Word::power(p.xi, std::uint64_t(s.k)),
                                         s.alpha);
            c.expect(s.xi.same_expansion(expected, s.pi + 1),
                     at("word factorization", n));
            double lam = double(s.R) / (double(s.k) * double(p.pi));
            c.expect(std::abs(s.lambda - lam) <= 1e-12, at("ratio value", n));
            prod /= 1.0 + lam;
            c.expect(std::abs(s.rho - prod) <= 1e-12, at("mass product", n));
            unsigned __int128 lhs =
                (unsigned __int128)s.rho_num * p.rho_den * s.pi;
            unsigned __int128 rhs = (unsigned __int128)p.rho_num *
                                    std::uint64_t(s.k) * p.pi * s.rho_den;
            c.expect(lhs == rhs, at("exact mass recursion", n));
            c.expect(std::abs(s.rho - double(s.rho_num) / double(s.rho_den)) <=
                         1e-12,
                     at("mass pair consistency", n));
        }
    });

    gate.run("stage-certificate", 10.0, [&](Checker& c) {
        std::vector<Stage> sub(stages.begin(), stages.begin() + 13);
        PatternCertificate cert = validate(fam, sub, cfg.tail, cfg.builder);
        if (!cert.valid) {
            std::string failed;
            for (const CheckRow& r : cert.rows)
                if (!r.pass) failed += (failed.empty() ? "" : ",") + r.name;
            c.expect(false, "failed rows: " + failed);
        }
        for (int n = 1; n <= 12; ++n) {
            const Stage& p = stages[std::size_t(n - 1)];
            const Stage& s = stages[std::size_t(n)];
            c.expect(arc_contains_arc(p.J, s.J), at("interval nesting", n));
            c.expect(s.J.length <= 0.5 * p.J.length, at("interval halving", n));
            c.expect(s.c < cfg.builder.c_target, at("contraction target", n));
            c.expect(s.pi > (std::uint64_t(1) << n),
                     at("exponential period growth", n));
        }
    });

    gate.run("strip-occupancy-floor", 30.0, [&](Checker& c) {
        for (int m = 1; m <= 12; ++m)
            orbits[std::size_t(m)] = orbit_fiber_points(
                fam, stages[std::size_t(m)], cfg.measure.sample_cap);
        const double nudge = 1.0 + std::ldexp(1.0, -20);
        for (int n = 1; n <= 12; ++n) {
            double th = cfg.measure.theta;
            for (int attempt = 0; attempt < 8; ++attempt) {
                StripFamily sf = build_strips(fam, stages, n, th);
                double dmin = 1.0;
                for (int m = n; m <= 12; ++m)
                    dmin = std::min(dmin, min_outside_endpoint_distance(
                                              orbits[std::size_t(m)], sf,
                                              slack));
                if (dmin >= 3.0 * slack || attempt == 7) {
                    strips[std::size_t(n)] = std::move(sf);
                    break;
                }
                th *= nudge;
            }
            const Stage& s = stages[std::size_t(n)];
            OccupancyResult r = occupancy(orbits[std::size_t(n)],
                                          strips[std::size_t(n)], s.rho_num,
                                          s.rho_den, slack);
            c.expect(r.threshold ==
                         occupancy_threshold(s.rho_num, s.rho_den, s.pi),
                     at("threshold arithmetic", n));
            c.expect(r.count >= r.threshold && r.pass,
                     at("occupancy below its floor", n));
        }
    });

    gate.run("nested-strip-mass", 60.0, [&](Checker& c) {
        for (int n = 1; n <= 12; ++n)
            c.expect(!strips[std::size_t(n)].arcs.empty(),
                     at("strip family unavailable", n));
        if (!c.ok) return;
        for (int n = 2; n <= 12; ++n)
            c.expect(strips[std::size_t(n)].total_length <
                         strips[std::size_t(n - 1)].total_length,
                     at("strip mass not strictly decreasing", n));
        c.expect(strips[12].total_length < 0.1 * strips[1].total_length,
                 "deep strip mass not below a tenth of the shallow one");
        for (int n = 1; n <= 11; ++n) {
            for (int m = n + 1; m <= 12; ++m) {
                const Stage& sm = stages[std::size_t(m)];
                c.expect(2 * sm.rho_num >= sm.rho_den,
                         at("mass ratio below one half", m));
                OccupancyResult r =
                    occupancy(orbits[std::size_t(m)], strips[std::size_t(n)],
                              sm.rho_num, sm.rho_den, slack);
                c.expect(r.pass, "pair occupancy fails at n=" +
                                     std::to_string(n) + " m=" +
                                     std::to_string(m));
            }
        }
    });

    gate.run("alignment-dp-exactness", 10.0, [&](Checker& c) {
        SplitMix rng(cfg.seed);
        int instances = 0;
        for (int i = 0; i < 200; ++i) {
            PeriodicPoint u(random_word(rng, 5));
            PeriodicPoint v(random_word(rng, 5));
            std::int64_t horizon = 1 + std::int64_t(rng.next() % 8);
            std::int64_t window = std::int64_t(rng.next() % 4);
            MatchProblem p{u, v, horizon, window, cfg.fk.dp_cap};
            std::uint64_t dp = max_fit(p).fit;
            std::uint64_t bf = brute_force_fit(u, v, horizon, window);
            c.expect(dp == bf,
                     "dp disagrees with enumeration at instance " +
                         std::to_string(i));
            ++instances;
        }
        c.expect(instances >= 200, "fewer than 200 instances");
    });

    gate.run("match-gap-certification", 120.0, [&](Checker& c) {
        std::vector<std::int64_t> mults;
        std::int64_t maxmult = 1;
        for (int m : cfg.fk.multiples) {
            mults.push_back(m);
            maxmult = std::max<std::int64_t>(maxmult, m);
        }
        int dp_levels = 0;
        for (int n = 1; n + 1 <= 13; ++n) {
            const Stage& su = stages[std::size_t(n)];
            const Stage& sv = stages[std::size_t(n + 1)];
            std::uint64_t N = su.pi * sv.pi;
            if (std::int64_t(N) * maxmult > cfg.fk.dp_cap) break;
            PeriodicPoint u(su.xi), v(sv.xi);
            FbarProfile prof = fbar_delta(u, v, n, mults, cfg.fk.dp_cap);
            double gap_target = double(sv.R + 2 * std::uint64_t(n)) /
                                double(sv.pi);
            for (double g : prof.gaps)
                c.expect(g <= gap_target, at("dp gap over the block target", n));
            double value = std::ldexp(1.0, -n) + prof.estimate;
            double target = cauchy_bound(sv, n) + 1.0 / double(N);
            c.expect(value <= target, at("dp value over the cauchy target", n));
            ++dp_levels;
        }
        c.expect(dp_levels >= 1, "no level fits under the dp cap");
        for (int n = 1; n <= 12; ++n) {
            BlockMatchBound bm =
                block_match_bound(stages[std::size_t(n)],
                                  stages[std::size_t(n + 1)], n);
            c.expect(bm.certified, at("block bound uncertified", n));
            c.expect(bm.total_fit == bm.fit_per_block * bm.blocks,
                     at("block fit arithmetic", n));
            c.expect(std::ldexp(1.0, -n) + bm.gap_upper <=
                         cauchy_bound(stages[std::size_t(n + 1)], n),
                     at("certified value over the cauchy target", n));
        }
    });

    gate.run("spanning-count-bound", 30.0, [&](Checker& c) {
        c.expect(cfg.measure.spanning.size() == 9,
                 "expected the 3x3 horizon/eps grid");
        PeriodicPoint xi(stages.back().xi);
        for (const SpanningSpec& spec : cfg.measure.spanning) {
            SpanningResult r = fiber_spanning_count(fam, xi, spec.n, spec.eps);
            std::uint64_t kb =
                std::uint64_t(std::floor(1.0 / spec.eps + 1e-9));
            std::string where = " at n=" + std::to_string(spec.n) +
                                " eps=" + format_double(spec.eps);
            c.expect(r.bound == std::uint64_t(spec.n) * (kb + 1),
                     "bound formula" + where);
            c.expect(r.within_bound && r.count <= r.bound,
                     "count over the linear bound" + where);
            c.expect(r.verified, "grid verification missing" + where);
        }
    });

    gate.run("derivative-histogram-hygiene", 0.0, [&](Checker& c) {
        SplitMix rng(cfg.seed + 1);
        const double h = 1e-7;
        for (int i = 0; i < 100; ++i) {
            Word w = random_word(rng, 6);
            double x = rng.unit();
            double wd = word_derivative(fam, w, x);
            double fd = signed_gap(eval_word(fam, w, wrap_unit(x - h)),
                                   eval_word(fam, w, wrap_unit(x + h))) /
                        (2.0 * h);
            c.expect(std::abs(fd - wd) <= 1e-6 * std::abs(wd),
                     "finite difference off at sample " + std::to_string(i));
        }
        for (int i = 0; i < 50; ++i) {
            Word u = random_word(rng, 6);
            Word v = random_word(rng, 6);
            double x = rng.unit();
            double lhs = word_derivative(fam, Word::concat(u, v), x);
            double rhs = word_derivative(fam, u, x) *
                         word_derivative(fam, v, eval_word(fam, u, x));
            c.expect(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs),
                     "chain rule drift at sample " + std::to_string(i));
            c.expect(circle_dist(eval_word(fam, Word::concat(u, v), x),
                                 eval_word(fam, v, eval_word(fam, u, x))) <=
                         1e-12,
                     "composition drift at sample " + std::to_string(i));
            double y = x, pw = 1.0;
            for (int rep = 0; rep < 3; ++rep) {
                pw *= word_derivative(fam, u, y);
                y = eval_word(fam, u, y);
            }
            double p3 = word_derivative(fam, Word::power(u, 3), x);
            c.expect(std::abs(p3 - pw) <= 1e-12 * std::max(1.0, pw),
                     "power chain drift at sample " + std::to_string(i));
        }
        for (int m : {2, 4, 6}) {
            OrbitMeasure om = orbit_fiber_points(fam, stages[std::size_t(m)],
                                                 cfg.measure.sample_cap);
            const Word& xi = stages[std::size_t(m)].xi;
            DisintegrationReport rep = disintegration_histogram(
                om, xi, cfg.measure.window, cfg.measure.bins);
            c.expect(std::abs(rep.mass_checksum - 1.0) <= 1e-12,
                     at("histogram mass checksum", m));
            c.expect(rep.aggregate_heaviest > 0.0 &&
                         rep.aggregate_heaviest <= 1.0,
                     at("aggregate heaviest out of range", m));

            // regroup the orbit from scratch and re-add each histogram
            PeriodicPoint base(xi);
            const int w = cfg.measure.window, B = cfg.measure.bins;
            std::map<std::string, std::vector<std::uint64_t>> hist;
            for (std::int64_t l = 1; l <= std::int64_t(om.pi); ++l) {
                std::string key;
                for (std::int64_t d = -w; d <= w; ++d)
                    key.push_back(char('0' + base.symbol_at(l + d)));
                double x = om.pts[std::size_t(l - 1)];
                int bin = std::min(B - 1, int(x * B));
                auto& v = hist[key];
                if (v.empty()) v.assign(std::size_t(B), 0);
                ++v[std::size_t(bin)];
            }
            c.expect(hist.size() == rep.rows.size(),
                     at("cylinder families disagree", m));
            std::uint64_t grand = 0;
            std::size_t idx = 0;
            for (const auto& [key, bins] : hist) {
                std::uint64_t total = 0;
                double norm = 0.0;
                for (std::uint64_t cnt : bins) total += cnt;
                for (std::uint64_t cnt : bins)
                    norm += double(cnt) / double(total);
                grand += total;
                c.expect(std::abs(norm - 1.0) <= 1e-12,
                         at("histogram does not sum to one", m));
                if (idx < rep.rows.size()) {
                    c.expect(rep.rows[idx].cylinder == key &&
                                 rep.rows[idx].total == total,
                             at("cylinder row mismatch", m));
                }
                ++idx;
            }
            c.expect(grand == om.pi, at("phases lost in regrouping", m));
        }
    });

    gate.run("pipeline-byte-determinism", 0.0, [&](Checker& c) {
        fs::path root = fs::temp_directory_path() /
                        ("skewlab_acceptance_" + std::to_string(::getpid()));
        fs::remove_all(root);
        fs::create_directories(root);
        auto run_once = [&](const fs::path& out) -> int {
            std::string cmd = std::string(SKEWLAB_BIN) +
                              " report-all --config " + REFERENCE_CONFIG +
                              " --out \"" + out.string() + "\" >/dev/null 2>&1";
            int rc = std::system(cmd.c_str());
            if (rc == -1 || !WIFEXITED(rc)) return -1;
            return WEXITSTATUS(rc);
        };
        int rc1 = run_once(root / "run1");
        int rc2 = run_once(root / "run2");
        c.expect(rc1 == 0, "first run exited " + std::to_string(rc1));
        c.expect(rc2 == 0, "second run exited " + std::to_string(rc2));
        if (c.ok) {
            auto a = snapshot_dir(root / "run1");
            auto b = snapshot_dir(root / "run2");
            c.expect(!a.empty(), "no files produced");
            c.expect(a.size() == b.size(), "file sets differ");
            for (const auto& [rel, bytes] : a) {
                auto it = b.find(rel);
                c.expect(it != b.end(), "missing in second run: " + rel);
                if (it != b.end())
                    c.expect(it->second == bytes, "bytes differ: " + rel);
            }
        }
        fs::remove_all(root);
    });

    std::printf("RESULT %d/9 PASS\n", gate.passed);
    return gate.passed == 9 ? 0 : 1;
}
