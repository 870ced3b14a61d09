#include "skewlab/periodic.hpp"

#include <cmath>

namespace skewlab {

PeriodicPoint::PeriodicPoint(Word period_word)
    : word_(std::move(period_word)), pi_(word_.length()) {
    if (pi_ == 0) throw Error("periodic point needs a nonempty period word");
}

Symbol PeriodicPoint::symbol_at(std::int64_t i) const {
    std::int64_t p = static_cast<std::int64_t>(pi_);
    std::int64_t r = i % p;
    if (r < 0) r += p;
    if (!flat_.empty()) return flat_[static_cast<std::size_t>(r)];
    return word_.at(static_cast<std::uint64_t>(r));
}

const std::vector<Symbol>& PeriodicPoint::flat(std::uint64_t cap) const {
    if (flat_.empty()) flat_ = word_.expand(cap);
    return flat_;
}

bool window_agree(const PeriodicPoint& u, std::int64_t i,
                  const PeriodicPoint& v, std::int64_t j, std::int64_t m) {
    if (m < 0) throw Error("window must be >= 0");
    for (std::int64_t l = -m; l <= m; ++l)
        if (u.symbol_at(i + l) != v.symbol_at(j + l)) return false;
    return true;
}

bool same_phased_sequence(const PeriodicPoint& u, std::int64_t i,
                          const PeriodicPoint& v, std::int64_t j) {
    // two periodic sequences with periods p and q that agree on p+q
    // consecutive coordinates are equal everywhere
    std::int64_t span =
        static_cast<std::int64_t>(u.period() + v.period());
    for (std::int64_t l = 0; l < span; ++l)
        if (u.symbol_at(i + l) != v.symbol_at(j + l)) return false;
    return true;
}

double shift_distance(const PeriodicPoint& u, std::int64_t i,
                      const PeriodicPoint& v, std::int64_t j,
                      std::int64_t cutoff) {
    for (std::int64_t m = 0; m <= cutoff; ++m) {
        if (u.symbol_at(i + m) != v.symbol_at(j + m) ||
            u.symbol_at(i - m) != v.symbol_at(j - m))
            return std::ldexp(1.0, static_cast<int>(-m));
    }
    if (same_phased_sequence(u, i, v, j)) return 0.0;
    return std::ldexp(1.0, static_cast<int>(-(cutoff + 1)));
}

}  // namespace skewlab
