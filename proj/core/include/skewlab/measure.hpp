#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "skewlab/periodic.hpp"
#include "skewlab/stage.hpp"

namespace skewlab {

// Uniform empirical measure on one periodic orbit: fiber point at phase l is
// the image of q_m under the first l symbols of xi_m, l = 1..pi_m.
struct OrbitMeasure {
    int m = 0;
    std::uint64_t pi = 0;
    double q = 0.0;
    std::vector<double> pts;  // pts[l-1], l = 1..pi
};

OrbitMeasure orbit_fiber_points(const MapFamily& fam, const Stage& stage,
                                std::uint64_t sample_cap = 10000000);

// Arc unions of level n built from J': the core family applies
// g_{i-1}^{l_i}, l_i in {0..k_i}, innermost level first, and the full family
// adds the base-word prefix images of the core.
struct StripFamily {
    int n = 0;
    Arc Jprime;
    std::size_t core_arcs = 0;          // before prefix images
    std::vector<Arc> arcs;              // sorted by anchor, deduplicated
    double total_length = 0.0;
    double min_gap = 1.0;               // over resolvable pairs
    std::uint64_t unresolved_pairs = 0;  // pairs below float resolution
};

// J' is the arc centered at q_n of length max((1+theta)|J_{n+1}|,
// theta |J_n|) clipped into J_n and extended by hull to contain J_{n+1}.
// Disjointness is asserted at float resolution: overlapping pairs that are
// both longer than the resolution floor raise CheckError; contacts between
// sub-resolution arcs are only counted.
StripFamily build_strips(const MapFamily& fam, const std::vector<Stage>& stages,
                         int n, double theta);

struct OccupancyResult {
    std::uint64_t count = 0;
    double proportion = 0.0;
    std::uint64_t threshold = 0;  // ceil(rho_m * pi_m), exact integers
    bool pass = false;
};

// Exact count of orbit phases whose fiber point lies in the arc union.
// Membership uses closed arcs thickened by `slack` (absolute), the float
// guard for points that are provably interior at scales below double
// rounding. rho of the orbit's own stage sets the threshold.
OccupancyResult occupancy(const OrbitMeasure& orbit, const StripFamily& strips,
                          std::uint64_t rho_num, std::uint64_t rho_den,
                          double slack = 1e-14);

// Smallest distance from any orbit point to any arc endpoint, over points
// not interior to the thickened arcs; used for the boundary-avoidance nudge.
double min_outside_endpoint_distance(const OrbitMeasure& orbit,
                                     const StripFamily& strips, double slack);

double lyapunov_exponent(const MapFamily& fam, const Stage& stage,
                         const OrbitMeasure& orbit);

struct SpanningResult {
    std::uint64_t count = 0;
    std::uint64_t bound = 0;  // n * (floor(1/eps) + 1)
    bool within_bound = false;
    bool verified = false;  // grid shadowing check
    std::vector<double> time0_points;
};

// Forward construction of an (n,eps)-spanning set on the fiber over xi:
// start from an eps-net, push forward, fill gaps that exceed eps and pull
// the fillers back to time 0 through the monotone one-step inverses. The
// verification grid tracks each test point against its two bracketing rails.
SpanningResult fiber_spanning_count(const MapFamily& fam,
                                    const PeriodicPoint& xi, std::int64_t n,
                                    double eps);

struct CylinderRow {
    std::string cylinder;
    std::uint64_t total = 0;
    double heaviest_mass = 0.0;
    int heaviest_bin = -1;
};

struct DisintegrationReport {
    int m = 0;
    int window = 0;
    int bins = 0;
    std::vector<CylinderRow> rows;  // sorted by cylinder word
    double aggregate_heaviest = 0.0;
    double mass_checksum = 0.0;  // sum over cylinders of frequency * mass
};

// Conditional fiber histograms over base cylinders: group phases by the
// (2w+1)-symbol window of the base word, histogram fiber points into B bins,
// report the heaviest-bin mass per cylinder and its frequency-weighted
// aggregate (the atomicity trend diagnostic).
DisintegrationReport disintegration_histogram(const OrbitMeasure& orbit,
                                              const Word& xi, int w, int B);

// Weak-star diagnostic between two orbit measures: max and mean gap of the
// first `jmax` trigonometric fiber moments.
struct MomentGap {
    double max_gap = 0.0;
    double mean_gap = 0.0;
};
MomentGap moment_gap(const OrbitMeasure& a, const OrbitMeasure& b, int jmax);

}  // namespace skewlab
