#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/config.hpp"
#include "skewlab/fk.hpp"
#include "skewlab/measure.hpp"
#include "skewlab/pattern.hpp"
#include "skewlab/stage.hpp"

namespace skewlab {

// stage 0 plus every schedule entry up to max_stage (-1 = all); seed feeds
// the sampled noise searches only
std::vector<Stage> build_schedule(const ExperimentConfig& cfg,
                                  std::uint64_t seed, int max_stage);

struct ValidateOutcome {
    PatternCertificate cert;
    TrendReport trend;
};

struct FkBlockRow {
    int n = 0;
    std::uint64_t pi_u = 0, pi_v = 0;
    std::int64_t window = 0;
    BlockMatchBound bound;
    double fk_upper = 1.0;      // 2^-n + certified gap bound
    double cauchy = 0.0;        // lambda_{n+1} + (n+1) 2^-n
    bool pass = false;
};

struct FkDpRow {
    int n = 0;
    std::uint64_t pi_u = 0, pi_v = 0;
    std::int64_t window = 0;
    std::int64_t horizon = 0;
    std::uint64_t fit = 0;
    double gap = 1.0;
};

struct FkDistanceRow {
    int n = 0;
    std::uint64_t pi_u = 0, pi_v = 0;
    double value = 1.0;
    bool exact_zero = false;
};

struct FkOutcome {
    std::vector<FkBlockRow> block;
    std::vector<FkDpRow> dp;
    std::vector<FkDistanceRow> distance;
    bool all_pass = false;
};

struct StripsRow {
    int n = 0;
    double theta_used = 0.0;
    StripFamily strips;
};

struct OccupancyRow {
    int n = 0;  // strip level
    int m = 0;  // orbit stage
    OccupancyResult res;
    std::uint64_t pi = 0;
};

struct SpanningRow {
    SpanningSpec spec;
    SpanningResult res;
};

struct WeakStarRow {
    int m = 0;
    MomentGap gapj;
};

struct MeasureOutcome {
    std::vector<StripsRow> strips;
    std::vector<OccupancyRow> occupancy;
    std::vector<double> lyapunov;  // index = stage
    std::vector<SpanningRow> spanning;
    std::vector<DisintegrationReport> disintegration;
    std::vector<WeakStarRow> weakstar;
    std::vector<std::string> failures;
    bool all_pass = false;
};

ValidateOutcome compute_validate(const ExperimentConfig& cfg,
                                 const std::vector<Stage>& stages);
FkOutcome compute_fk(const ExperimentConfig& cfg,
                     const std::vector<Stage>& stages);
MeasureOutcome compute_measure(const ExperimentConfig& cfg,
                               const std::vector<Stage>& stages);

// Subcommand entry points. Each writes its files into out_dir first and only
// then reports failed checks by throwing CheckError, so a nonzero exit still
// leaves the full evidence on disk.
void run_build(const ExperimentConfig& cfg, const std::string& out_dir,
               std::uint64_t seed, int max_stage);
void run_validate(const ExperimentConfig& cfg, const std::vector<Stage>& stages,
                  const std::string& out_dir);
void run_fk(const ExperimentConfig& cfg, const std::vector<Stage>& stages,
            const std::string& out_dir);
void run_measure(const ExperimentConfig& cfg, const std::vector<Stage>& stages,
                 const std::string& out_dir);
void run_report_all(const ExperimentConfig& cfg,
                    const std::vector<Stage>& stages,
                    const std::string& out_dir);

// RFC 4180: quote when a field holds comma, quote, or line break
std::string csv_field(const std::string& raw);
void write_csv_file(const std::string& path,
                    const std::vector<std::vector<std::string>>& rows);

}  // namespace skewlab
