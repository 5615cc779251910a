#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kkldm/errors.hpp"
#include "kkldm/harness.hpp"

namespace {

using kkldm::json;

enum class Arg { integer, real, text, flag };

struct Option {
  std::string flag;
  std::string key;
  Arg arg;
  bool list;
  std::string help;
};

const std::map<std::string, std::pair<std::string, std::vector<Option>>>& command_table() {
  static const std::map<std::string, std::pair<std::string, std::vector<Option>>> t = {
      {"ldm-sim",
       {"Monte Carlo mean of the LDM (or PDM) discrepancy on uniform instances",
        {{"--n", "n", Arg::integer, true, "instance size(s), comma separated"},
         {"--trials", "trials", Arg::integer, false, "trials per n"},
         {"--bits", "bits", Arg::integer, false, "fixed-point bits (0 picks a safe default)"},
         {"--method", "method", Arg::text, false, "ldm or pdm"},
         {"--hist-bins", "hist_bins", Arg::integer, false, "also write L/<L> histograms with this many bins"}}}},
      {"exact-pdf",
       {"exact exponential-mixture coefficients of the final difference",
        {{"--n", "n", Arg::integer, false, "number of inputs"},
         {"--max-n", "max_n", Arg::integer, false, "refuse larger n"}}}},
      {"lambda-walk",
       {"random walks through the branch tree; statistics of lambda_2",
        {{"--n", "n", Arg::integer, true, "size(s)"},
         {"--trials", "trials", Arg::integer, false, "walks per n"},
         {"--hist-bins", "hist_bins", Arg::integer, false, "also write lambda_2/<lambda_2> histograms"}}}},
      {"rate-eq",
       {"deterministic rate equation; final lambda_1",
        {{"--n", "n", Arg::integer, true, "size(s)"},
         {"--field", "field", Arg::flag, false, "also dump ln lambda over the (t, i) triangle"}}}},
      {"fibonacci",
       {"F(n) = F(n-1) + F(n/2) scaling values",
        {{"--n", "n", Arg::integer, true, "index(es)"},
         {"--check", "check", Arg::flag, false, "verify the boundary recursion and generating function"},
         {"--check-limit", "check_limit", Arg::integer, false, "boundary check up to this n"},
         {"--order", "order", Arg::integer, false, "generating-function order"}}}},
      {"series",
       {"continuum series f(n) against its asymptotic expansion",
        {{"--log2-n", "log2_n", Arg::real, true, "log2 of n, comma separated"},
         {"--precision", "precision", Arg::integer, false, "working precision in bits"}}}},
      {"gamma",
       {"piecewise gamma solution diagnostics",
        {{"--n", "n", Arg::real, false, "parameter n"},
         {"--k-max", "k_max", Arg::integer, false, "last piece"},
         {"--samples", "samples", Arg::integer, false, "check points per piece"}}}},
      {"fit",
       {"fit scaling corrections (loglog) or a naive n^{-c ln n} law to a CSV",
        {{"--input", "input", Arg::text, false, "CSV with n or log2_n and scaled_value or mean_L"},
         {"--mode", "mode", Arg::text, false, "loglog or naive"},
         {"--range", "range", Arg::text, false, "nmin:nmax, e.g. 1e3:1e5 or 2^50:2^500"}}}},
      {"figure",
       {"write all CSVs for a desk-scale figure preset into --out",
        {{"--name", "name", Arg::text, false, "fig2, fig3, fig5 or fig6"}}}},
  };
  return t;
}

json parse_value(const std::string& text, Arg arg, const std::string& flag) {
  if (arg == Arg::text) return text;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw kkldm::ValidationError(flag + ": not a number: '" + text + "'");
  }
  if (arg == Arg::integer) {
    if (v != std::floor(v) || std::abs(v) > 9e15) throw kkldm::ValidationError(flag + ": not an integer: '" + text + "'");
    return static_cast<std::int64_t>(v);
  }
  return v;
}

void write_text(const std::string& path, const std::string& text) { kkldm::write_atomic(path, text); }

int run(int argc, char** argv) {
  CLI::App app{"Karmarkar-Karp differencing laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  std::string record_path;
  app.add_option("--seed", seed, "base seed for all random streams");
  app.add_option("--out", out, "output file (directory for figure)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--record", record_path, "also write the run record (spec, payload, timing) as JSON");

  std::map<std::string, std::map<std::string, std::vector<std::string>>> raw;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : command_table()) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    subs[name] = sub;
    for (const auto& o : entry.second) {
      if (o.arg == Arg::flag) {
        sub->add_flag(o.flag, flags[name][o.key], o.help);
      } else {
        auto* opt = sub->add_option(o.flag, raw[name][o.key], o.help);
        if (o.list) opt->delimiter(',');
      }
    }
  }

  std::string replay_path;
  CLI::App* replay_cmd = app.add_subcommand("replay", "re-run a saved record and compare payloads");
  replay_cmd->add_option("record", replay_path, "run record JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kkldm::kExitOk : kkldm::kExitValidation;
  }

  if (replay_cmd->parsed()) {
    std::ifstream in(replay_path);
    if (!in) throw kkldm::ValidationError("cannot read " + replay_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw kkldm::ValidationError(replay_path + ": " + e.what());
    }
    const auto original = kkldm::RunRecord::from_json(j);
    const auto again = kkldm::replay(original);
    if (again.payload == original.payload) {
      std::cout << "replay of '" << original.spec.command << "': payload identical\n";
      return kkldm::kExitOk;
    }
    std::cout << "replay of '" << original.spec.command << "': payload differs\n";
    return 1;
  }

  kkldm::ExperimentSpec spec;
  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    spec.command = name;
    for (const auto& o : command_table().at(name).second) {
      if (o.arg == Arg::flag) {
        if (flags[name][o.key]) spec.params[o.key] = true;
        continue;
      }
      const auto& values = raw[name][o.key];
      if (values.empty()) continue;
      if (o.list) {
        json list = json::array();
        for (const auto& v : values) list.push_back(parse_value(v, o.arg, o.flag));
        spec.params[o.key] = list;
      } else {
        spec.params[o.key] = parse_value(values.back(), o.arg, o.flag);
      }
    }
  }
  spec.seed = seed;
  spec.out = out;
  if (!format.empty()) {
    spec.format = kkldm::output_format_from_string(format);
  } else {
    const bool structured = spec.command == "exact-pdf" || spec.command == "fit" || spec.command == "figure";
    spec.format = structured ? kkldm::OutputFormat::json : kkldm::OutputFormat::csv;
  }

  const auto record = kkldm::dispatch(spec);
  for (const auto& w : record.warnings) std::cerr << "warning: " << w << "\n";
  if (out.empty() || spec.command == "figure") std::cout << record.rendered;
  if (!out.empty()) {
    for (const auto& f : record.files) std::cerr << "wrote " << f << "\n";
  }
  if (!record_path.empty()) write_text(record_path, record.to_json().dump(2) + "\n");
  return kkldm::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const kkldm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kkldm::kExitValidation;
  } catch (const kkldm::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kkldm::kExitResourceLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
