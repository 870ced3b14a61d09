#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/circle.hpp"
#include "skewlab/maps.hpp"
#include "skewlab/pattern.hpp"
#include "skewlab/stage.hpp"

namespace skewlab {

// one experiment = maps + base word + seed interval + stage schedule + the
// knobs of every downstream pass, read from a single versioned json document;
// every non-integer number is carried as decimal text so the document has one
// unambiguous byte representation
struct MapSpec {
    std::string family;  // only "sine" for now
    double a = 0.0;
    double b = 0.0;
};

struct ScheduleEntry {
    int k = 2;
    int R = 1;
    NoiseStrategy noise;          // search modes
    std::string fixed_word;       // nonempty picks the word directly
};

struct SpanningSpec {
    std::int64_t n = 0;
    double eps = 0.0;
};

struct FkConfig {
    int m_max = 8;
    std::vector<int> multiples{1, 2, 4};
    std::int64_t dp_cap = 20000;
};

struct MeasureConfig {
    double theta = 0.5;
    int window = 2;
    int bins = 64;
    std::uint64_t sample_cap = 10000000;
    double membership_slack = 1e-14;
    std::vector<SpanningSpec> spanning;
};

struct ExperimentConfig {
    int schema_version = 1;
    int alphabet = 0;
    std::vector<MapSpec> maps;
    std::string omega0;
    Arc j0{0.0, 0.0};
    std::vector<ScheduleEntry> schedule;
    TailModel tail;
    StageOptions builder;
    FkConfig fk;
    MeasureConfig measure;
    std::uint64_t seed = 0;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

MapFamily make_family(const ExperimentConfig& cfg);

// canonical built-in experiment; configs/reference.json carries these bytes
std::string reference_config_text();

}  // namespace skewlab
