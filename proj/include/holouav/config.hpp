#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "holouav/scenario.hpp"
#include "holouav/sweep.hpp"

namespace holouav {

struct FileConfig {
    Scenario scenario;
    SweepSpec sweep;
};

// "8x8" -> {8, 8}.  Throws std::invalid_argument on anything else.
std::pair<Index, Index> parse_surface_size(const std::string& text);

// "proposed" | "benchmark" | "both".
SweepMode parse_mode(const std::string& text);

// Parses a JSON document with optional "scenario" and "sweep" sections;
// absent fields keep their defaults.  Unknown keys are rejected so typos
// fail loudly.  // and /* */ comments are allowed.
FileConfig parse_config(const std::string& text);

// parse_config over the contents of `path`.
FileConfig load_config(const std::filesystem::path& path);

} // namespace holouav
