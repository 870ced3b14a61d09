#pragma once

#include <string>
#include <vector>

#include "skewlab/stage.hpp"

namespace skewlab {

// shortest decimal text that round-trips the double exactly
std::string format_double(double v);
double parse_double_text(const std::string& text);

// versioned json document holding a full stage sequence; doubles travel as
// round-trip decimal text so saved and reloaded runs agree bit for bit
std::string stages_to_json(const std::vector<Stage>& stages);
std::vector<Stage> stages_from_json(const std::string& text);

void save_stages(const std::string& path, const std::vector<Stage>& stages);
std::vector<Stage> load_stages(const std::string& path);

}  // namespace skewlab
