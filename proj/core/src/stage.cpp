#include "skewlab/stage.hpp"

#include "skewlab/errors.hpp"

namespace skewlab {

std::uint64_t occupancy_threshold(std::uint64_t rho_num, std::uint64_t rho_den,
                                  std::uint64_t pi) {
    if (rho_den == 0) throw Error("occupancy threshold with zero denominator");
    unsigned __int128 num =
        static_cast<unsigned __int128>(rho_num) * static_cast<unsigned __int128>(pi);
    unsigned __int128 den = rho_den;
    return static_cast<std::uint64_t>((num + den - 1) / den);
}

std::uint64_t uniform_schedule_pi(std::uint64_t pi0, std::uint64_t k,
                                  std::uint64_t R, int n) {
    std::uint64_t pi = pi0;
    for (int i = 0; i < n; ++i) pi = k * pi + R;
    return pi;
}

}  // namespace skewlab
