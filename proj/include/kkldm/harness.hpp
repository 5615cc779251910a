#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace kkldm {

using json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat format);
OutputFormat output_format_from_string(const std::string& name);

struct ExperimentSpec {
  std::string command;
  json params = json::object();
  std::uint64_t seed = 0;
  std::string out;  // empty: nothing is written, the rendered text stays in the record
  OutputFormat format = OutputFormat::csv;

  json to_json() const;
  static ExperimentSpec from_json(const json& j);
};

struct RunRecord {
  ExperimentSpec spec;
  std::string version = kArtifactVersion;
  double wall_seconds = 0.0;
  json payload;
  std::vector<std::string> warnings;
  std::vector<std::string> files;
  std::string rendered;  // main output in the requested format; not serialized

  json to_json() const;
  static RunRecord from_json(const json& j);
};

/// Subcommands understood by dispatch.
const std::vector<std::string>& subcommands();

/// Parameter map with defaults filled in; throws ValidationError on unknown
/// keys, wrong types, or out-of-range values.
json validate_params(const std::string& command, const json& params);

/// Runs one subcommand. Output files are written atomically.
RunRecord dispatch(const ExperimentSpec& spec);

/// Re-runs the embedded spec in a scratch directory and returns the new record.
RunRecord replay(const RunRecord& record);

const std::vector<std::string>& figure_presets();

/// Writes every CSV for a desk-scale version of the named figure into `out_dir`.
RunRecord figure_pipeline(const std::string& name, const std::filesystem::path& out_dir, std::uint64_t seed);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace kkldm
