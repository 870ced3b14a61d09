#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

// Exit code contract: 0 ok, 1 unexpected, 2 construction failed,
// 3 a numeric check failed, 4 a resource cap was hit.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 1; }
};

// Stage construction could not satisfy one of its side conditions
// (no admissible symbol, fixed point search failed, arc does not fit, ...).
struct BuildError : Error {
    std::string condition;  // short machine-readable tag, e.g. "no-admissible-alpha"
    int stage = -1;
    BuildError(std::string cond, int stage_, const std::string& msg)
        : Error(msg), condition(std::move(cond)), stage(stage_) {}
    int exit_code() const override { return 2; }
};

// A verification predicate evaluated to false (occupancy too low,
// bound violated, strips overlap, ...).
struct CheckError : Error {
    std::string check;
    CheckError(std::string check_, const std::string& msg)
        : Error(msg), check(std::move(check_)) {}
    int exit_code() const override { return 3; }
};

// Work required exceeds a configured cap (word too long to flatten,
// DP table too large, sample budget exhausted, ...).
struct LimitError : Error {
    std::string limit;
    LimitError(std::string limit_, const std::string& msg)
        : Error(msg), limit(std::move(limit_)) {}
    int exit_code() const override { return 4; }
};

}  // namespace skewlab
