#pragma once

#include <vector>

#include "skewlab/config.hpp"
#include "skewlab/report.hpp"

// reference experiment fixtures shared by the suites; stages are cached
// because the exhaustive-search rebuild is the slow part
inline const skewlab::ExperimentConfig& reference_config() {
    static skewlab::ExperimentConfig cfg =
        skewlab::parse_config(skewlab::reference_config_text());
    return cfg;
}

inline skewlab::MapFamily reference_family() {
    return skewlab::make_family(reference_config());
}

// stages 0..max_stage; deeper requests extend the cached build, shallower
// ones get a prefix copy
inline std::vector<skewlab::Stage> reference_stages(int max_stage) {
    static std::vector<skewlab::Stage> cache;
    if (static_cast<int>(cache.size()) < max_stage + 1) {
        const skewlab::ExperimentConfig& cfg = reference_config();
        cache = skewlab::build_schedule(cfg, cfg.seed, max_stage);
    }
    return {cache.begin(), cache.begin() + (max_stage + 1)};
}
