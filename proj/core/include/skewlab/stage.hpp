#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/maps.hpp"
#include "skewlab/word.hpp"

namespace skewlab {

// One level of the construction. Level n >= 1 satisfies
//   xi_n = xi_{n-1}^{k_n} alpha_n,  pi_n = k_n pi_{n-1} + R_n,
//   lambda_n = R_n / (k_n pi_{n-1}),
//   rho_n = prod_{i<=n} 1/(1+lambda_i) = (pi_0 prod k_i) / pi_n.
// rho is also kept as the exact integer pair (rho_num, rho_den) so that
// occupancy thresholds ceil(rho_m * pi) never suffer float rounding.
struct Stage {
    int n = 0;
    Word xi;
    std::uint64_t pi = 0;

    int k = 0;        // 0 at level 0
    Word alpha;       // empty at level 0
    std::uint64_t R = 0;

    double q = 0.0;
    Arc J;
    double c = 0.0;      // grid sup of |g_n'| on J_n (underflows for deep n)
    double c_log = 0.0;  // log of the same sup, finite

    double lambda = 0.0;  // level >= 1
    double rho = 1.0;     // level >= 1 (1 at level 0 by convention)
    std::uint64_t rho_num = 1;
    std::uint64_t rho_den = 1;
};

struct StageOptions {
    double c_target = 0.9;
    int grid_points = 4096;
    double tol = 1e-12;
    std::int64_t max_iter = 1000000;
    // Extra cap on |J_n|: psi * distance(q_n, q_{n-1}). Keeps the nested
    // intervals on the scale of the fixed-point drift so that the level-n
    // strip around q_n stays clear of the deeper maps' images. Very large
    // psi disables the cap.
    double psi = 1.1;
    double shrink_step = 0.9;
    int max_shrink_iters = 400;
    std::uint64_t expand_cap = 1u << 24;
};

// ceil(rho * pi) computed exactly from the integer pair.
std::uint64_t occupancy_threshold(std::uint64_t rho_num, std::uint64_t rho_den,
                                  std::uint64_t pi);

// Closed forms for the uniform schedule k_n = k, R_n = R from pi_0:
// handy for tests against the recursion.
std::uint64_t uniform_schedule_pi(std::uint64_t pi0, std::uint64_t k,
                                  std::uint64_t R, int n);

}  // namespace skewlab
