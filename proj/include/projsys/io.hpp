#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "projsys/analysis.hpp"
#include "projsys/core.hpp"
#include "projsys/dynamics.hpp"
#include "projsys/reduce.hpp"

namespace projsys::io {

using nlohmann::json;

/// Malformed input; field() names the offending key.
class FormatError : public Error {
 public:
  FormatError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Original system as stored on disk:
///   {"k": 2, "alpha": [..], "beta": [[..],[..]], "A": [..], "B": [[..],[..]],
///    "x0": [..], "labels": ["x", "y"]}     (x0 and labels optional)
struct SpecFile {
  SystemSpec spec;
  std::optional<State> x0;
  std::vector<std::string> labels;
};

/// Reduced system as stored on disk: {"kind": "HyperbolicReduced", "pivot": 3,
/// "components": [{"num_a": {"c": .., "coeffs": [..]}, "num_b": .., "den_a": ..,
/// "den_b": ..}, ..], "x0": [..]}. The "kind" key tells the two formats apart.
struct ReducedFile {
  ReducedSystem system;
  std::optional<State> x0;  ///< in reduced coordinates
};

using SystemFile = std::variant<SpecFile, ReducedFile>;

SpecFile spec_from_json(const json& j);
json to_json(const SpecFile& file);

ReducedFile reduced_from_json(const json& j);
json to_json(const ReducedFile& file);

SystemFile system_from_json(const json& j);

/// Reads and parses a file; I/O failures and JSON syntax errors throw FormatError.
json read_json(const std::filesystem::path& path);
SystemFile load_system(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

json to_json(const ValidationReport& report);
json to_json(const LimitReport& report);
json to_json(const ConjugacyReport& report);
json to_json(const Breakdown& breakdown);
json to_json(const Example2Params& p, const Example2Limits& limits);
json to_json(const Example3Analysis& analysis);
json to_json(const Example3Limits& limits);
json to_json(const Example4Params& p, const Example4Limits& limits);

/// Flattens a JSON object into "key = value" lines; nested keys are joined with '.'.
std::string to_key_value(const json& j);

}  // namespace projsys::io
