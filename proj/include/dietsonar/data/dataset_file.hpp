#pragma once

#include <string>
#include <vector>

#include "dietsonar/data/windows.hpp"

namespace dietsonar::data {

// MSDS container: magic "MSDS", version, tensor dims, label and group name
// tables, fixed-size index entries (label, group, start time, duration,
// block offset), then one float32 tensor block per sample. All samples share
// one tensor shape.
void save_dataset(const std::string& path, const std::vector<WindowedSample>& samples);
std::vector<WindowedSample> load_dataset(const std::string& path);

}  // namespace dietsonar::data
