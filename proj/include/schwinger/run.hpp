#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "schwinger/config.hpp"

namespace schwinger {

struct RunSummary {
    std::vector<std::string> files;  // relative to config.out
    std::vector<std::string> warnings;
    nlohmann::json manifest;
};

/// Executes the experiment and writes CSVs plus manifest.json into config.out.
/// Throws the library's error types; see exit_code().
RunSummary run(const RunConfig& config);

/// 0 success, 2 configuration / parameter errors, 3 numerical or fit
/// failures, 1 anything else.
int exit_code(const std::exception& e);

const char* tool_version();
const char* build_describe();

} // namespace schwinger
