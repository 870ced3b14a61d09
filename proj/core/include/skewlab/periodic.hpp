#pragma once

#include <cstdint>
#include <vector>

#include "skewlab/word.hpp"

namespace skewlab {

// A periodic two-sided sequence, identified with its generating finite word.
// Coordinate i (any sign) reads the period word at i mod period.
class PeriodicPoint {
  public:
    explicit PeriodicPoint(Word period_word);

    const Word& word() const { return word_; }
    std::uint64_t period() const { return pi_; }

    Symbol symbol_at(std::int64_t i) const;

    // Period word expanded once; cached, guarded by cap.
    const std::vector<Symbol>& flat(std::uint64_t cap = (1u << 24)) const;

  private:
    Word word_;
    std::uint64_t pi_;
    mutable std::vector<Symbol> flat_;
};

// True iff the sequences agree on every coordinate within distance m of the
// centers i and j. Window-m agreement is exactly shift distance < 2^-m.
bool window_agree(const PeriodicPoint& u, std::int64_t i,
                  const PeriodicPoint& v, std::int64_t j, std::int64_t m);

// True iff the phased sequences are identical (agreement over one combined
// period forces global equality for periodic sequences).
bool same_phased_sequence(const PeriodicPoint& u, std::int64_t i,
                          const PeriodicPoint& v, std::int64_t j);

// 2^-m* with m* the smallest |coordinate| of disagreement, scanned up to
// cutoff M. Agreement through M: 0 if the phased sequences are equal,
// otherwise 2^-(M+1) (an upper bound; the scan saw no disagreement).
double shift_distance(const PeriodicPoint& u, std::int64_t i,
                      const PeriodicPoint& v, std::int64_t j,
                      std::int64_t cutoff = 64);

}  // namespace skewlab
