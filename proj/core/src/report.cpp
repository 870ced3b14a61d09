#include "skewlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "skewlab/errors.hpp"
#include "skewlab/stage_io.hpp"

namespace skewlab {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("write failed for " + path);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory " + dir + ": " + ec.message());
}

std::string u64(std::uint64_t v) { return std::to_string(v); }
std::string i64(std::int64_t v) { return std::to_string(v); }
std::string b01(bool v) { return v ? "1" : "0"; }

}  // namespace

std::string csv_field(const std::string& raw) {
    bool quote = raw.find_first_of(",\"\r\n") != std::string::npos;
    if (!quote) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_csv_file(const std::string& path,
                    const std::vector<std::vector<std::string>>& rows) {
    std::string doc;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) doc += ',';
            doc += csv_field(row[i]);
        }
        doc += "\r\n";
    }
    write_text(path, doc);
}

std::vector<Stage> build_schedule(const ExperimentConfig& cfg,
                                  std::uint64_t seed, int max_stage) {
    MapFamily fam = make_family(cfg);
    std::vector<Stage> stages;
    stages.push_back(
        init_stage0(fam, Word::literal(cfg.omega0), cfg.j0, cfg.builder));
    int n = 0;
    for (const ScheduleEntry& e : cfg.schedule) {
        ++n;
        if (max_stage >= 0 && n > max_stage) break;
        if (!e.fixed_word.empty()) {
            stages.push_back(build_next_stage(fam, stages.back(), e.k,
                                              Word::literal(e.fixed_word),
                                              cfg.builder));
        } else {
            SearchOutcome got = build_with_noise_search(
                fam, stages.back(), e.k, static_cast<std::uint64_t>(e.R),
                e.noise, cfg.builder, seed + static_cast<std::uint64_t>(n));
            stages.push_back(std::move(got.stage));
        }
    }
    return stages;
}

ValidateOutcome compute_validate(const ExperimentConfig& cfg,
                                 const std::vector<Stage>& stages) {
    MapFamily fam = make_family(cfg);
    ValidateOutcome out;
    out.cert = validate(fam, stages, cfg.tail, cfg.builder);
    out.trend = contraction_trend_report(stages, fam);
    return out;
}

FkOutcome compute_fk(const ExperimentConfig& cfg,
                     const std::vector<Stage>& stages) {
    FkOutcome out;
    const int M = static_cast<int>(stages.size()) - 1;
    bool all = true;

    for (int n = 1; n + 1 <= M; ++n) {
        FkBlockRow r;
        r.n = n;
        r.pi_u = stages[static_cast<std::size_t>(n)].pi;
        r.pi_v = stages[static_cast<std::size_t>(n + 1)].pi;
        r.window = n;
        bool certified_ok = true;
        try {
            r.bound = block_match_bound(stages[static_cast<std::size_t>(n)],
                                        stages[static_cast<std::size_t>(n + 1)],
                                        n);
        } catch (const CheckError&) {
            certified_ok = false;
        }
        r.fk_upper = std::ldexp(1.0, -n) + r.bound.gap_upper;
        r.cauchy = cauchy_bound(stages[static_cast<std::size_t>(n + 1)], n);
        r.pass = certified_ok && r.bound.certified && r.fk_upper <= r.cauchy;
        all = all && r.pass;
        out.block.push_back(r);
    }

    std::int64_t maxmult = 1;
    std::vector<std::int64_t> mults;
    for (int m : cfg.fk.multiples) {
        mults.push_back(m);
        maxmult = std::max<std::int64_t>(maxmult, m);
    }
    for (int n = 1; n + 1 <= M; ++n) {
        const Stage& su = stages[static_cast<std::size_t>(n)];
        const Stage& sv = stages[static_cast<std::size_t>(n + 1)];
        std::uint64_t N = su.pi * sv.pi;
        if (static_cast<std::int64_t>(N) * maxmult >
            cfg.fk.dp_cap)
            break;
        PeriodicPoint u(su.xi), v(sv.xi);
        FbarProfile prof = fbar_delta(u, v, n, mults, cfg.fk.dp_cap);
        for (std::size_t i = 0; i < prof.horizons.size(); ++i) {
            FkDpRow d;
            d.n = n;
            d.pi_u = su.pi;
            d.pi_v = sv.pi;
            d.window = n;
            d.horizon = prof.horizons[i];
            d.gap = prof.gaps[i];
            d.fit = static_cast<std::uint64_t>(
                std::llround((1.0 - d.gap) * double(d.horizon)));
            out.dp.push_back(d);
        }
        FkDistanceRow dist;
        dist.n = n;
        dist.pi_u = su.pi;
        dist.pi_v = sv.pi;
        FkDistanceResult res =
            fk_distance(u, v, cfg.fk.m_max, mults, cfg.fk.dp_cap);
        dist.value = res.value;
        dist.exact_zero = res.exact_zero;
        out.distance.push_back(dist);
    }

    out.all_pass = all;
    return out;
}

MeasureOutcome compute_measure(const ExperimentConfig& cfg,
                               const std::vector<Stage>& stages) {
    MapFamily fam = make_family(cfg);
    MeasureOutcome out;
    const int M = static_cast<int>(stages.size()) - 1;
    const double slack = cfg.measure.membership_slack;

    std::vector<OrbitMeasure> orbits;
    orbits.reserve(static_cast<std::size_t>(M) + 1);
    for (int m = 0; m <= M; ++m)
        orbits.push_back(orbit_fiber_points(
            fam, stages[static_cast<std::size_t>(m)], cfg.measure.sample_cap));

    out.lyapunov.resize(static_cast<std::size_t>(M) + 1);
    for (int m = 0; m <= M; ++m)
        out.lyapunov[static_cast<std::size_t>(m)] = lyapunov_exponent(
            fam, stages[static_cast<std::size_t>(m)],
            orbits[static_cast<std::size_t>(m)]);

    // strip families per level; theta is nudged upward a hair when an orbit
    // point lands too close to an arc endpoint without being inside
    const double nudge = 1.0 + std::ldexp(1.0, -20);
    for (int n = 1; n + 1 <= M; ++n) {
        StripsRow row;
        row.n = n;
        bool built = false;
        std::string fail;
        double th = cfg.measure.theta;
        for (int attempt = 0; attempt < 8; ++attempt) {
            try {
                StripFamily sf = build_strips(fam, stages, n, th);
                double dmin = 1.0;
                for (int m = n; m <= M; ++m)
                    dmin = std::min(
                        dmin, min_outside_endpoint_distance(
                                  orbits[static_cast<std::size_t>(m)], sf,
                                  slack));
                if (dmin >= 3.0 * slack || attempt == 7) {
                    row.strips = std::move(sf);
                    row.theta_used = th;
                    built = true;
                    break;
                }
            } catch (const CheckError& ex) {
                fail = ex.what();
                break;
            } catch (const BuildError& ex) {
                fail = ex.what();
                break;
            }
            th *= nudge;
        }
        if (!built) {
            out.failures.push_back("strips level " + std::to_string(n) + ": " +
                                   (fail.empty() ? "endpoint nudge exhausted"
                                                 : fail));
            continue;
        }
        for (int m = n; m <= M; ++m) {
            OccupancyRow orow;
            orow.n = n;
            orow.m = m;
            const Stage& sm = stages[static_cast<std::size_t>(m)];
            orow.pi = sm.pi;
            orow.res = occupancy(orbits[static_cast<std::size_t>(m)],
                                 row.strips, sm.rho_num, sm.rho_den, slack);
            if (!orow.res.pass)
                out.failures.push_back(
                    "occupancy below threshold at level " + std::to_string(n) +
                    " orbit " + std::to_string(m) + ": " +
                    std::to_string(orow.res.count) + " < " +
                    std::to_string(orow.res.threshold));
            out.occupancy.push_back(orow);
        }
        out.strips.push_back(std::move(row));
    }

    PeriodicPoint xi(stages[static_cast<std::size_t>(M)].xi);
    for (const SpanningSpec& spec : cfg.measure.spanning) {
        SpanningRow r;
        r.spec = spec;
        try {
            r.res = fiber_spanning_count(fam, xi, spec.n, spec.eps);
        } catch (const CheckError& ex) {
            out.failures.push_back(std::string("spanning: ") + ex.what());
            out.spanning.push_back(r);
            continue;
        }
        if (!r.res.within_bound)
            out.failures.push_back(
                "spanning count exceeds bound at n=" + std::to_string(spec.n) +
                " eps=" + format_double(spec.eps));
        out.spanning.push_back(r);
    }

    for (int m = std::max(1, M - 2); m <= M; ++m)
        out.disintegration.push_back(disintegration_histogram(
            orbits[static_cast<std::size_t>(m)],
            stages[static_cast<std::size_t>(m)].xi, cfg.measure.window,
            cfg.measure.bins));

    for (int m = 1; m + 1 <= M; ++m) {
        WeakStarRow w;
        w.m = m;
        w.gapj = moment_gap(orbits[static_cast<std::size_t>(m)],
                            orbits[static_cast<std::size_t>(m + 1)], 8);
        out.weakstar.push_back(w);
    }

    out.all_pass = out.failures.empty();
    return out;
}

namespace {

ojson certificate_json(const ValidateOutcome& vo) {
    ojson doc;
    doc["schema_version"] = 1;
    doc["valid"] = vo.cert.valid;
    doc["lambda_partial_sum"] = format_double(vo.cert.lambda_partial_sum);
    doc["lambda_hat"] = format_double(vo.cert.lambda_hat);
    doc["rho_last"] = format_double(vo.cert.rho_last);
    doc["rho_lower_bound"] = format_double(vo.cert.rho_lower_bound);
    ojson checks = ojson::array();
    for (const CheckRow& r : vo.cert.rows) {
        ojson c;
        c["name"] = r.name;
        c["stage"] = r.stage;
        c["pass"] = r.pass;
        c["detail"] = r.detail;
        checks.push_back(std::move(c));
    }
    doc["checks"] = std::move(checks);
    ojson trows = ojson::array();
    for (const TrendRow& r : vo.trend.rows) {
        ojson t;
        t["n"] = r.n;
        t["lyapunov"] = format_double(r.lyapunov);
        t["halving"] = r.halving;
        t["gamma_log10"] = format_double(r.gamma_log10);
        trows.push_back(std::move(t));
    }
    doc["trend"] = {{"rows", std::move(trows)},
                    {"gamma_trend_decreasing", vo.trend.gamma_trend_decreasing}};
    return doc;
}

void write_fk_files(const std::string& out_dir, const FkOutcome& fko) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"kind", "n", "pi_u", "pi_v", "window", "horizon", "fit",
                    "gap", "gap_upper", "fk_upper", "cauchy_bound", "pass"});
    for (const FkBlockRow& r : fko.block)
        rows.push_back({"block", i64(r.n), u64(r.pi_u), u64(r.pi_v),
                        i64(r.window), u64(r.pi_u * r.pi_v),
                        u64(r.bound.total_fit), "",
                        format_double(r.bound.gap_upper),
                        format_double(r.fk_upper), format_double(r.cauchy),
                        b01(r.pass)});
    for (const FkDpRow& r : fko.dp)
        rows.push_back({"dp", i64(r.n), u64(r.pi_u), u64(r.pi_v),
                        i64(r.window), i64(r.horizon), u64(r.fit),
                        format_double(r.gap), "", "", "", ""});
    write_csv_file(join_path(out_dir, "fk.csv"), rows);

    ojson doc;
    doc["schema_version"] = 1;
    doc["all_pass"] = fko.all_pass;
    ojson block = ojson::array();
    for (const FkBlockRow& r : fko.block) {
        ojson b;
        b["n"] = r.n;
        b["pi_u"] = r.pi_u;
        b["pi_v"] = r.pi_v;
        b["window"] = r.window;
        b["fit_per_block"] = r.bound.fit_per_block;
        b["blocks"] = r.bound.blocks;
        b["total_fit"] = r.bound.total_fit;
        b["pairs_checked"] = r.bound.pairs_checked;
        b["certified"] = r.bound.certified;
        b["gap_upper"] = format_double(r.bound.gap_upper);
        b["fk_upper"] = format_double(r.fk_upper);
        b["cauchy_bound"] = format_double(r.cauchy);
        b["pass"] = r.pass;
        block.push_back(std::move(b));
    }
    doc["block"] = std::move(block);
    ojson dp = ojson::array();
    for (const FkDpRow& r : fko.dp) {
        ojson d;
        d["n"] = r.n;
        d["window"] = r.window;
        d["horizon"] = r.horizon;
        d["fit"] = r.fit;
        d["gap"] = format_double(r.gap);
        dp.push_back(std::move(d));
    }
    doc["dp"] = std::move(dp);
    ojson dist = ojson::array();
    for (const FkDistanceRow& r : fko.distance) {
        ojson d;
        d["n"] = r.n;
        d["pi_u"] = r.pi_u;
        d["pi_v"] = r.pi_v;
        d["value"] = format_double(r.value);
        d["exact_zero"] = r.exact_zero;
        dist.push_back(std::move(d));
    }
    doc["distance"] = std::move(dist);
    write_text(join_path(out_dir, "fk.json"), doc.dump(2) + "\n");
}

void write_measure_files(const std::string& out_dir, const MeasureOutcome& mo,
                         const std::vector<Stage>& stages,
                         const ExperimentConfig& cfg) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"n", "theta_used", "arcs", "core_arcs", "total_length",
                    "min_gap", "unresolved_pairs", "Jprime_anchor",
                    "Jprime_length"});
    for (const StripsRow& r : mo.strips)
        rows.push_back({i64(r.n), format_double(r.theta_used),
                        u64(r.strips.arcs.size()), u64(r.strips.core_arcs),
                        format_double(r.strips.total_length),
                        format_double(r.strips.min_gap),
                        u64(r.strips.unresolved_pairs),
                        format_double(r.strips.Jprime.anchor),
                        format_double(r.strips.Jprime.length)});
    write_csv_file(join_path(out_dir, "strips.csv"), rows);

    rows.clear();
    rows.push_back({"n", "m", "pi_m", "count", "threshold", "proportion",
                    "pass"});
    for (const OccupancyRow& r : mo.occupancy)
        rows.push_back({i64(r.n), i64(r.m), u64(r.pi), u64(r.res.count),
                        u64(r.res.threshold), format_double(r.res.proportion),
                        b01(r.res.pass)});
    write_csv_file(join_path(out_dir, "occupancy.csv"), rows);

    rows.clear();
    rows.push_back({"n", "eps", "count", "bound", "within_bound", "verified"});
    for (const SpanningRow& r : mo.spanning)
        rows.push_back({i64(r.spec.n), format_double(r.spec.eps),
                        u64(r.res.count), u64(r.res.bound),
                        b01(r.res.within_bound), b01(r.res.verified)});
    write_csv_file(join_path(out_dir, "spanning.csv"), rows);

    rows.clear();
    rows.push_back({"n", "pi", "lyapunov"});
    for (std::size_t m = 0; m < mo.lyapunov.size(); ++m)
        rows.push_back({u64(m), u64(stages[m].pi),
                        format_double(mo.lyapunov[m])});
    write_csv_file(join_path(out_dir, "lyapunov.csv"), rows);

    rows.clear();
    rows.push_back({"m", "window", "bins", "cylinder", "total",
                    "heaviest_bin", "heaviest_mass"});
    for (const DisintegrationReport& rep : mo.disintegration)
        for (const CylinderRow& r : rep.rows)
            rows.push_back({i64(rep.m), i64(rep.window), i64(rep.bins),
                            r.cylinder, u64(r.total), i64(r.heaviest_bin),
                            format_double(r.heaviest_mass)});
    write_csv_file(join_path(out_dir, "disintegration.csv"), rows);

    rows.clear();
    rows.push_back({"m", "pi_m", "pi_m1", "max_moment_gap",
                    "mean_moment_gap"});
    for (const WeakStarRow& r : mo.weakstar)
        rows.push_back({i64(r.m), u64(stages[static_cast<std::size_t>(r.m)].pi),
                        u64(stages[static_cast<std::size_t>(r.m) + 1].pi),
                        format_double(r.gapj.max_gap),
                        format_double(r.gapj.mean_gap)});
    write_csv_file(join_path(out_dir, "weakstar.csv"), rows);

    ojson doc;
    doc["schema_version"] = 1;
    doc["all_pass"] = mo.all_pass;
    doc["theta"] = format_double(cfg.measure.theta);
    doc["membership_slack"] = format_double(cfg.measure.membership_slack);
    std::uint64_t unresolved = 0;
    for (const StripsRow& r : mo.strips) unresolved += r.strips.unresolved_pairs;
    doc["unresolved_pairs_total"] = unresolved;
    std::uint64_t occ_pass = 0;
    for (const OccupancyRow& r : mo.occupancy) occ_pass += r.res.pass ? 1 : 0;
    doc["occupancy_rows"] = mo.occupancy.size();
    doc["occupancy_pass"] = occ_pass;
    bool span_ok = true;
    for (const SpanningRow& r : mo.spanning)
        span_ok = span_ok && r.res.within_bound && r.res.verified;
    doc["spanning_all_within_bounds"] = span_ok;
    ojson atom = ojson::array();
    for (const DisintegrationReport& rep : mo.disintegration) {
        ojson a;
        a["m"] = rep.m;
        a["aggregate_heaviest"] = format_double(rep.aggregate_heaviest);
        a["mass_checksum"] = format_double(rep.mass_checksum);
        atom.push_back(std::move(a));
    }
    doc["atomicity_trend"] = std::move(atom);
    ojson fails = ojson::array();
    for (const std::string& f : mo.failures) fails.push_back(f);
    doc["failures"] = std::move(fails);
    write_text(join_path(out_dir, "measure.json"), doc.dump(2) + "\n");
}

void write_plot_files(const std::string& out_dir,
                      const std::vector<Stage>& stages, const FkOutcome& fko,
                      const MeasureOutcome& mo) {
    std::string plot_dir = join_path(out_dir, "plot");
    ensure_dir(plot_dir);
    auto dat = [&](const std::string& name,
                   const std::vector<std::pair<double, double>>& pts) {
        std::string doc;
        for (const auto& [x, y] : pts)
            doc += format_double(x) + " " + format_double(y) + "\n";
        write_text(join_path(plot_dir, name), doc);
    };

    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 1; i < stages.size(); ++i)
        pts.push_back({double(stages[i].n), stages[i].lambda});
    dat("lambda.dat", pts);

    pts.clear();
    for (const Stage& s : stages) pts.push_back({double(s.n), s.rho});
    dat("rho.dat", pts);

    pts.clear();
    for (const Stage& s : stages) pts.push_back({double(s.n), s.J.length});
    dat("interval_length.dat", pts);

    pts.clear();
    for (std::size_t m = 0; m < mo.lyapunov.size(); ++m)
        pts.push_back({double(m), mo.lyapunov[m]});
    dat("lyapunov.dat", pts);

    pts.clear();
    for (const FkBlockRow& r : fko.block)
        pts.push_back({double(r.n), r.fk_upper});
    dat("fk_upper.dat", pts);

    pts.clear();
    for (const StripsRow& r : mo.strips)
        pts.push_back({double(r.n), r.strips.total_length});
    dat("strip_mass.dat", pts);

    pts.clear();
    for (const DisintegrationReport& rep : mo.disintegration)
        pts.push_back({double(rep.m), rep.aggregate_heaviest});
    dat("atomicity.dat", pts);

    pts.clear();
    for (const WeakStarRow& r : mo.weakstar)
        pts.push_back({double(r.m), r.gapj.max_gap});
    dat("weakstar.dat", pts);
}

}  // namespace

void run_build(const ExperimentConfig& cfg, const std::string& out_dir,
               std::uint64_t seed, int max_stage) {
    ensure_dir(out_dir);
    std::vector<Stage> stages = build_schedule(cfg, seed, max_stage);
    save_stages(join_path(out_dir, "stages.json"), stages);
}

void run_validate(const ExperimentConfig& cfg,
                  const std::vector<Stage>& stages,
                  const std::string& out_dir) {
    ensure_dir(out_dir);
    ValidateOutcome vo = compute_validate(cfg, stages);
    write_text(join_path(out_dir, "certificate.json"),
               certificate_json(vo).dump(2) + "\n");
    if (!vo.cert.valid) {
        std::string failed;
        for (const CheckRow& r : vo.cert.rows)
            if (!r.pass) failed += (failed.empty() ? "" : ", ") + r.name;
        throw CheckError("pattern-certificate", "failed checks: " + failed);
    }
}

void run_fk(const ExperimentConfig& cfg, const std::vector<Stage>& stages,
            const std::string& out_dir) {
    ensure_dir(out_dir);
    FkOutcome fko = compute_fk(cfg, stages);
    write_fk_files(out_dir, fko);
    if (!fko.all_pass)
        throw CheckError("fk-cauchy-bound",
                         "a certified gap bound exceeds its target");
}

void run_measure(const ExperimentConfig& cfg, const std::vector<Stage>& stages,
                 const std::string& out_dir) {
    ensure_dir(out_dir);
    MeasureOutcome mo = compute_measure(cfg, stages);
    write_measure_files(out_dir, mo, stages, cfg);
    if (!mo.all_pass) {
        std::string msg;
        for (const std::string& f : mo.failures)
            msg += (msg.empty() ? "" : "; ") + f;
        throw CheckError("measure", msg);
    }
}

void run_report_all(const ExperimentConfig& cfg,
                    const std::vector<Stage>& stages,
                    const std::string& out_dir) {
    ensure_dir(out_dir);
    save_stages(join_path(out_dir, "stages.json"), stages);

    ValidateOutcome vo = compute_validate(cfg, stages);
    write_text(join_path(out_dir, "certificate.json"),
               certificate_json(vo).dump(2) + "\n");

    FkOutcome fko = compute_fk(cfg, stages);
    write_fk_files(out_dir, fko);

    MeasureOutcome mo = compute_measure(cfg, stages);
    write_measure_files(out_dir, mo, stages, cfg);

    write_plot_files(out_dir, stages, fko, mo);

    ojson doc;
    doc["schema_version"] = 1;
    doc["stages"] = stages.size();
    doc["final_period"] = stages.back().pi;
    doc["lambda_hat"] = format_double(vo.cert.lambda_hat);
    doc["rho_last"] = format_double(vo.cert.rho_last);
    doc["rho_lower_bound"] = format_double(vo.cert.rho_lower_bound);
    doc["certificate_valid"] = vo.cert.valid;
    doc["fk_all_pass"] = fko.all_pass;
    doc["measure_all_pass"] = mo.all_pass;
    std::uint64_t unresolved = 0;
    for (const StripsRow& r : mo.strips) unresolved += r.strips.unresolved_pairs;
    doc["unresolved_pairs_total"] = unresolved;
    if (!mo.disintegration.empty())
        doc["final_aggregate_heaviest"] =
            format_double(mo.disintegration.back().aggregate_heaviest);
    ojson fails = ojson::array();
    for (const std::string& f : mo.failures) fails.push_back(f);
    doc["measure_failures"] = std::move(fails);
    write_text(join_path(out_dir, "summary.json"), doc.dump(2) + "\n");

    if (!vo.cert.valid)
        throw CheckError("pattern-certificate", "certificate is invalid");
    if (!fko.all_pass)
        throw CheckError("fk-cauchy-bound",
                         "a certified gap bound exceeds its target");
    if (!mo.all_pass) {
        std::string msg;
        for (const std::string& f : mo.failures)
            msg += (msg.empty() ? "" : "; ") + f;
        throw CheckError("measure", msg);
    }
}

}  // namespace skewlab
