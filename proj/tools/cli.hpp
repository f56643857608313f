#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "elopt/constructions.hpp"
#include "elopt/surfaces.hpp"

namespace elopt::cli {

inline constexpr const char* kSchema = "elopt-job/1";

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kConfigError = 2,
  kValidationFailure = 3,
  kSuiteFailure = 4,
  kSolverFailure = 5,
};

enum class Format { Text, Json };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Job description read from a JSON document:
//   {"schema": "elopt-job/1", "surface": {...}, "constructions": [...],
//    "expr": {...} | "expr_file": "path", "seed": 1, "samples": 10000,
//    "surface_samples": 1000, "grid": [16, 32], "workers": 1,
//    "sample_resolution": 21, "sample_extent": 1.5, "lp_dump": false, "out": "dir"}
// Only "schema" and "surface" are required. Unknown keys are rejected.
struct JobConfig {
  Surface surface = Hyperplane{{1.0, 1.0}, 1.0};
  std::vector<ConstructionKind> constructions;
  std::optional<nlohmann::json> expr;
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  std::size_t surface_samples = 1000;
  std::vector<std::size_t> grid;
  unsigned workers = 1;
  std::size_t sample_resolution = 21;
  double sample_extent = 1.5;
  bool lp_dump = false;
  std::optional<std::filesystem::path> out;
};

// Relative "expr_file" paths resolve against base_dir.
JobConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

std::vector<std::size_t> parse_grid_list(const std::string& text);

// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elopt::cli
