#pragma once

#include <filesystem>
#include <string_view>

#include "rectfree/measure.hpp"

namespace rectfree {

/// Parses `{"atoms": [...], "weights": [...]}` (weights optional, uniform when
/// absent) or a bare array of singular values.
DiscreteMeasure parse_measure_json(std::string_view text);

/// Reads a measure file; errors name the path.
DiscreteMeasure load_measure(const std::filesystem::path& path);

} // namespace rectfree
