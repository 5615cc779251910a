#include "kkldm/harness.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "kkldm/analysis_fit.hpp"
#include "kkldm/continuum_series.hpp"
#include "kkldm/core_ldm.hpp"
#include "kkldm/errors.hpp"
#include "kkldm/exact_recursion.hpp"
#include "kkldm/fibonacci_model.hpp"
#include "kkldm/lambda_walk.hpp"
#include "kkldm/rate_equation.hpp"
#include "kkldm/rng.hpp"
#include "kkldm/stats.hpp"

namespace kkldm {

namespace fs = std::filesystem;

namespace {

enum class Kind { integer, real, text, boolean, integer_list, real_list };

struct Param {
  std::string name;
  Kind kind;
  bool required;
  json fallback;
  double min = -INFINITY;
  double max = INFINITY;
};

using Schema = std::vector<Param>;

json series_ladder() {
  json l = json::array();
  for (int k = 50; k <= 500; k += 50) l.push_back(k);
  return l;
}

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> s = {
      {"ldm-sim",
       {{"n", Kind::integer_list, true, nullptr, 1, 1e8},
        {"trials", Kind::integer, false, 1000, 1, 1e9},
        {"bits", Kind::integer, false, 0, 0, kMaxSimBits},
        {"method", Kind::text, false, "ldm"},
        {"hist_bins", Kind::integer, false, 0, 0, 1e6}}},
      {"exact-pdf",
       {{"n", Kind::integer, true, nullptr, 2, 64}, {"max_n", Kind::integer, false, kDefaultEnumerationCap, 2, 16}}},
      {"lambda-walk",
       {{"n", Kind::integer_list, true, nullptr, 2, 1e7},
        {"trials", Kind::integer, false, 1000, 1, 1e9},
        {"hist_bins", Kind::integer, false, 0, 0, 1e6}}},
      {"rate-eq",
       {{"n", Kind::integer_list, true, nullptr, 2, kRateEquationMaxN}, {"field", Kind::boolean, false, false}}},
      {"fibonacci",
       {{"n", Kind::integer_list, true, nullptr, 3, 1e15},
        {"check", Kind::boolean, false, false},
        {"check_limit", Kind::integer, false, 10000, 1, 1e6},
        {"order", Kind::integer, false, static_cast<int>(kGenfunMaxOrder), 0, static_cast<double>(kGenfunMaxOrder)}}},
      {"series",
       {{"log2_n", Kind::real_list, false, series_ladder(), 2, 1e7},
        {"precision", Kind::integer, false, static_cast<int>(kDefaultSeriesPrecision), 64, 1 << 16}}},
      {"gamma",
       {{"n", Kind::real, false, 1.0, 0, 1e6},
        {"k_max", Kind::integer, false, 10, 0, kGammaCheckMaxK},
        {"samples", Kind::integer, false, 16, 1, 1000}}},
      {"fit",
       {{"input", Kind::text, true, nullptr},
        {"mode", Kind::text, false, "loglog"},
        {"range", Kind::text, false, ""}}},
      {"figure", {{"name", Kind::text, true, nullptr}}},
  };
  return s;
}

bool integral(const json& v) {
  if (v.is_number_integer()) return true;
  if (v.is_number_float()) {
    const double d = v.get<double>();
    return std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.007199254740992e15;
  }
  return false;
}

json check_scalar(const std::string& cmd, const Param& p, const json& v, Kind kind) {
  const std::string where = cmd + ": parameter '" + p.name + "'";
  json out;
  switch (kind) {
    case Kind::integer:
      if (!integral(v)) throw ValidationError(where + " must be an integer");
      out = v.is_number_integer() ? v : json(static_cast<std::int64_t>(v.get<double>()));
      break;
    case Kind::real:
      if (!v.is_number()) throw ValidationError(where + " must be a number");
      out = v.get<double>();
      break;
    case Kind::text:
      if (!v.is_string()) throw ValidationError(where + " must be a string");
      return v;
    case Kind::boolean:
      if (!v.is_boolean()) throw ValidationError(where + " must be true or false");
      return v;
    default:
      break;
  }
  const double d = out.get<double>();
  if (!(d >= p.min && d <= p.max)) {
    throw ValidationError(where + " = " + out.dump() + " outside [" + format_double(p.min) + ", " +
                          format_double(p.max) + "]");
  }
  return out;
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t n) { return splitmix64(seed ^ splitmix64(n)); }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      s += '\n';
    }
    return s;
  }
};

std::string cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

struct Output {
  json payload = json::object();
  Table table;
  std::vector<std::pair<std::string, Table>> side;
  std::vector<std::string> warnings;

  void add_row(const std::vector<std::pair<std::string, json>>& values) {
    if (table.columns.empty()) {
      for (const auto& [k, v] : values) table.columns.push_back(k);
    }
    json row = json::object();
    std::vector<std::string> cells;
    for (const auto& [k, v] : values) {
      row[k] = v;
      cells.push_back(cell(v));
    }
    payload["rows"].push_back(row);
    table.rows.push_back(std::move(cells));
  }
};

Table histogram_table(const Histogram& h) {
  Table t{{"bin_center", "density"}, {}};
  for (std::size_t i = 0; i < h.center.size(); ++i) {
    t.rows.push_back({format_double(h.center[i]), format_double(h.density[i])});
  }
  return t;
}

json histogram_json(const Histogram& h) {
  return {{"bin_width", h.bin_width}, {"center", h.center}, {"density", h.density}};
}

fs::path side_path(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return p.string() + "." + suffix + ".csv";
}

// ---------------------------------------------------------------------------

Output run_ldm_sim(const json& p, std::uint64_t seed) {
  const std::string method = p["method"];
  if (method != "ldm" && method != "pdm") throw ValidationError("ldm-sim: method must be 'ldm' or 'pdm'");
  const auto bins = p["hist_bins"].get<std::size_t>();
  Output o;
  for (const auto& nv : p["n"]) {
    const auto n = nv.get<std::size_t>();
    SimConfig c{n, p["bits"].get<unsigned>(), p["trials"].get<std::size_t>(), point_seed(seed, n)};
    const SimResult r = method == "ldm" ? sample_mean_ldm(c) : sample_mean_pdm(c);
    o.add_row({{"n", n}, {"trials", c.trials}, {"bits", r.bits}, {"seed", seed}, {"mean_L", r.mean},
               {"stderr_L", r.stderr_mean}});
    if (r.resolution_warning) {
      o.warnings.push_back("n=" + std::to_string(n) + ": " + std::to_string(r.zero_count) +
                           " trials ended at zero; raise --bits");
    }
    if (bins > 0) {
      const auto h = unit_mean_histogram(r.samples, bins);
      o.payload["histograms"][std::to_string(n)] = histogram_json(h);
      o.side.emplace_back("n" + std::to_string(n) + ".hist", histogram_table(h));
    }
  }
  return o;
}

Output run_exact_pdf(const json& p) {
  const int n = p["n"];
  const auto mix = enumerate_pdf(n, p["max_n"].get<int>());
  Output o;
  o.table.columns = {"k", "a_k"};
  json coeffs = json::object();
  for (const auto& [rate, a] : mix.coeffs) {
    coeffs[to_fraction_string(rate)] = to_fraction_string(a);
    o.table.rows.push_back({to_fraction_string(rate), to_fraction_string(a)});
  }
  o.payload = {{"n", n},
               {"coeffs", coeffs},
               {"mean_Lhat", to_fraction_string(mixture_mean(mix))},
               {"mean_L", to_fraction_string(mean_uniform_discrepancy(mix, n))}};
  return o;
}

Output run_lambda_walk(const json& p, std::uint64_t seed) {
  const auto bins = p["hist_bins"].get<std::size_t>();
  const auto trials = p["trials"].get<std::size_t>();
  Output o;
  for (const auto& nv : p["n"]) {
    const int n = nv;
    const auto e = walk_ensemble(n, trials, point_seed(seed, static_cast<std::uint64_t>(n)));
    o.add_row({{"n", n}, {"trials", trials}, {"mean_lambda2", e.mean_lambda2}, {"stderr", e.stderr_lambda2}});
    if (bins > 0) {
      const auto h = unit_mean_histogram(e.samples, bins);
      o.payload["histograms"][std::to_string(n)] = histogram_json(h);
      o.side.emplace_back("n" + std::to_string(n) + ".hist", histogram_table(h));
    }
  }
  return o;
}

Output run_rate_eq(const json& p) {
  const bool field = p["field"];
  Output o;
  for (const auto& nv : p["n"]) {
    const int n = nv;
    const double l = solve(n);
    o.add_row({{"n", n}, {"lambda1_final", l}, {"log_lambda1", std::log(l)}});
    if (field) {
      const auto f = contour_field(n);
      Table t{{"t", "i", "ln_lambda"}, {}};
      for (std::size_t ti = 0; ti < f.size(); ++ti) {
        for (std::size_t i = 0; i < f[ti].size(); ++i) {
          t.rows.push_back({std::to_string(ti), std::to_string(i + 1), format_double(f[ti][i])});
        }
      }
      o.side.emplace_back("n" + std::to_string(n) + ".field", std::move(t));
    }
  }
  return o;
}

Output run_fibonacci(const json& p) {
  std::vector<std::uint64_t> points;
  for (const auto& nv : p["n"]) points.push_back(nv.get<std::uint64_t>());
  Output o;
  for (const auto& pt : fib_scaling_curve(points)) {
    o.add_row({{"n", pt.n}, {"ln_F", pt.ln_f}, {"scaled_value", pt.scaled_value}});
  }
  if (p["check"].get<bool>()) {
    const auto limit = p["check_limit"].get<std::uint64_t>();
    const auto mismatch = first_boundary_mismatch(limit);
    const auto g = genfun_check(p["order"].get<std::size_t>());
    o.payload["checks"] = {{"boundary_limit", limit},
                           {"boundary_first_mismatch", mismatch},
                           {"genfun_order", g.order},
                           {"functional_equation", g.functional_equation_holds},
                           {"product_form", g.product_form_holds}};
    if (mismatch != 0) o.warnings.push_back("boundary recursion differs from F at n=" + std::to_string(mismatch));
    if (!g.functional_equation_holds || !g.product_form_holds) {
      o.warnings.push_back("generating-function identity fails at coefficient " + std::to_string(g.first_mismatch));
    }
  }
  return o;
}

Output run_series(const json& p) {
  const unsigned prec = p["precision"];
  PrecisionScope scope(prec);
  Output o;
  for (const auto& v : p["log2_n"]) {
    const double log2_n = v;
    const Real ln_n = Real(log2_n) * ln_of_pow2(1);
    const auto f = f_series(ln_n, prec);
    const Real scaled = scaled_series_value(f, ln_n);
    const auto a = asympt_expansion(ln_n);
    o.add_row({{"log2_n", log2_n},
               {"ln_f", static_cast<double>(f.ln_value)},
               {"scaled_value", static_cast<double>(scaled)},
               {"asympt_value", static_cast<double>(a.expansion_value)},
               {"residual", static_cast<double>(scaled - a.expansion_value)}});
  }
  return o;
}

Output run_gamma(const json& p) {
  const double n = p["n"];
  const int k_max = p["k_max"];
  const int samples = p["samples"];
  Output o;
  for (int k = 0; k <= k_max; ++k) {
    const double s0 = k == 0 ? -1.0 : 1.0 - std::ldexp(1.0, 1 - k);
    const double s1 = k == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -k);
    const double residual = k < kGammaCheckMaxK ? gamma_recursion_check(k, n, samples) : NAN;
    o.add_row({{"k", k},
               {"s_start", s0},
               {"s_end", s1},
               {"gamma_end", gamma_piece_end(k, n)},
               {"recursion_residual", residual}});
  }
  o.payload["series_value"] = std::exp(static_cast<double>(ln_f_at(n)));
  return o;
}

double parse_number(const std::string& text) {
  const auto caret = text.find('^');
  if (caret != std::string::npos) {
    return std::pow(parse_number(text.substr(0, caret)), parse_number(text.substr(caret + 1)));
  }
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw ValidationError("not a number: '" + text + "'");
  return v;
}

std::pair<double, double> parse_range(const std::string& range) {
  if (range.empty()) return {0.0, INFINITY};
  const auto colon = range.find(':');
  if (colon == std::string::npos) throw ValidationError("range must look like nmin:nmax");
  const std::string lo = range.substr(0, colon);
  const std::string hi = range.substr(colon + 1);
  const double a = lo.empty() ? 0.0 : parse_number(lo);
  const double b = hi.empty() ? INFINITY : parse_number(hi);
  if (!(a <= b)) throw ValidationError("range is empty: " + range);
  return {a, b};
}

std::map<std::string, std::vector<double>> read_csv_columns(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + " is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) header.push_back(col);
  }
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string c;
    std::size_t i = 0;
    for (; std::getline(ss, c, ','); ++i) {
      if (i >= header.size()) throw ValidationError(path.string() + ": row wider than header");
      cols[header[i]].push_back(parse_number(c));
    }
    if (i != header.size()) throw ValidationError(path.string() + ": short row");
  }
  return cols;
}

Output run_fit(const json& p) {
  const std::string mode = p["mode"];
  const auto cols = read_csv_columns(p["input"].get<std::string>());
  const auto [lo, hi] = parse_range(p["range"]);
  const auto has = [&](const char* c) { return cols.count(c) > 0; };

  std::vector<double> ln_n;
  if (has("log2_n")) {
    for (double v : cols.at("log2_n")) ln_n.push_back(v * std::log(2.0));
  } else if (has("n")) {
    for (double v : cols.at("n")) ln_n.push_back(std::log(v));
  } else {
    throw ValidationError("fit input needs an 'n' or 'log2_n' column");
  }
  const auto in_range = [&](double l) { return std::exp(l) >= lo && std::exp(l) <= hi; };

  Output o;
  if (mode == "loglog") {
    if (!has("scaled_value")) throw ValidationError("loglog fit needs a 'scaled_value' column");
    std::vector<ScaledSample> s;
    for (std::size_t i = 0; i < ln_n.size(); ++i) {
      if (in_range(ln_n[i])) s.push_back({ln_n[i], cols.at("scaled_value")[i]});
    }
    const auto r = fit_loglog(s);
    o.payload = {{"c1", r.c1},
                 {"c2", r.c2},
                 {"c3", r.c3},
                 {"residual", r.residual_norm},
                 {"condition_number", r.condition_number},
                 {"points", r.points}};
    o.add_row({{"c1", r.c1}, {"c2", r.c2}, {"c3", r.c3}, {"residual", r.residual_norm}});
    o.payload.erase("rows");
  } else if (mode == "naive") {
    if (!has("mean_L")) throw ValidationError("naive fit needs a 'mean_L' column");
    std::vector<MeanSample> s;
    for (std::size_t i = 0; i < ln_n.size(); ++i) {
      if (in_range(ln_n[i])) s.push_back({std::exp(ln_n[i]), cols.at("mean_L")[i]});
    }
    const auto r = naive_fit(s);
    o.payload = {{"intercept", r.intercept}, {"slope", r.slope}, {"points", s.size()}};
    o.add_row({{"intercept", r.intercept}, {"slope", r.slope}});
    o.payload.erase("rows");
  } else {
    throw ValidationError("fit: mode must be 'loglog' or 'naive'");
  }
  return o;
}

std::string render(const Output& o, OutputFormat f) {
  return f == OutputFormat::csv ? o.table.csv() : o.payload.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

struct FigureWriter {
  fs::path dir;
  json files = json::array();
  std::vector<std::string> paths;

  void csv(const std::string& name, const Table& t) { write(name, t.csv()); }
  void write(const std::string& name, const std::string& content) {
    write_atomic(dir / name, content);
    files.push_back(name);
    paths.push_back((dir / name).string());
  }
};

Table rows_table(const json& rows, const std::vector<std::string>& columns) {
  Table t{columns, {}};
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    for (const auto& c : columns) cells.push_back(cell(r.at(c)));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

json figure_fig2(FigureWriter& w, std::uint64_t seed) {
  const Output o = run_ldm_sim(json{{"n", {100, 316, 1000, 3162, 10000}},
                                    {"trials", 2000},
                                    {"bits", 0},
                                    {"method", "ldm"},
                                    {"hist_bins", 0}},
                               seed);
  w.csv("fig2_points.csv", o.table);
  std::vector<MeanSample> s;
  for (const auto& r : o.payload["rows"]) s.push_back({r["n"].get<double>(), r["mean_L"].get<double>()});
  const auto f = naive_fit(s);
  const json fit = {{"intercept", f.intercept}, {"slope", f.slope}, {"asymptotic_slope", scaling_constant()}};
  w.write("fig2_fit.json", fit.dump(2) + "\n");
  return {{"points", o.payload["rows"]}, {"naive_fit", fit}};
}

json figure_fig3(FigureWriter& w, std::uint64_t seed) {
  json summary = json::object();
  std::vector<std::vector<double>> normalized;
  for (std::size_t n : {1000u, 10000u}) {
    const auto r = sample_mean_ldm(SimConfig{n, 0, 5000, point_seed(seed, n)});
    const auto h = unit_mean_histogram(r.samples, 60);
    double mass = 0.0;
    for (double d : h.density) mass += d * h.bin_width;
    w.csv("fig3_hist_n" + std::to_string(n) + ".csv", histogram_table(h));
    summary["n" + std::to_string(n)] = {{"mean_L", r.mean}, {"mass", mass}};
    std::vector<double> x = r.samples;
    for (double& v : x) v /= r.mean;
    normalized.push_back(std::move(x));
  }
  summary["ks_distance"] = ks_distance(normalized[0], normalized[1]);
  return summary;
}

json figure_fig5(FigureWriter& w, std::uint64_t seed) {
  json summary = json::object();
  for (int n : {32, 128, 512}) {
    const auto e = walk_ensemble(n, 10000, point_seed(seed, static_cast<std::uint64_t>(n)));
    w.csv("fig5_hist_n" + std::to_string(n) + ".csv", histogram_table(unit_mean_histogram(e.samples, 60)));
    summary["n" + std::to_string(n)] = {{"mean_lambda2", e.mean_lambda2}, {"stderr", e.stderr_lambda2}};
  }
  return summary;
}

json figure_fig6(FigureWriter& w, std::uint64_t seed) {
  const std::vector<std::string> schema{"n", "scaled_value"};
  json summary = json::object();
  const auto emit = [&](const std::string& model, const json& rows) {
    w.csv("fig6_" + model + ".csv", rows_table(rows, schema));
    summary[model] = rows.size();
  };

  json sim = json::array();
  for (int k = 5; k <= 12; ++k) {
    const std::size_t n = std::size_t{1} << k;
    const auto r = sample_mean_ldm(SimConfig{n, 0, 2000, point_seed(seed, n)});
    const double ln_z = -std::log(static_cast<double>(n)) - std::log(r.mean);
    sim.push_back({{"n", n}, {"scaled_value", scaled_value(ScalingPoint::from_log(std::log(n), ln_z,
                                                                                  ModelTag::simulation))}});
  }
  emit("simulation", sim);

  json rate = json::array();
  for (int k = 4; k <= 16; ++k) {
    const int n = 1 << k;
    rate.push_back({{"n", n}, {"scaled_value", scaled_value(ScalingPoint::from_raw(n, solve(n), ModelTag::rate))}});
  }
  emit("rate", rate);

  std::vector<std::uint64_t> fib_points;
  for (int k = 4; k <= 24; ++k) fib_points.push_back(std::uint64_t{1} << k);
  json fib = json::array();
  for (const auto& pt : fib_scaling_curve(fib_points)) fib.push_back({{"n", pt.n}, {"scaled_value", pt.scaled_value}});
  emit("fibonacci", fib);

  json series = json::array();
  {
    PrecisionScope scope(kDefaultSeriesPrecision);
    for (int k = 4; k <= 200; k += 4) {
      const Real ln_n = ln_of_pow2(k);
      const auto f = f_series(ln_n);
      series.push_back({{"n", std::ldexp(1.0, k)}, {"scaled_value", static_cast<double>(scaled_series_value(f, ln_n))}});
    }
  }
  emit("series", series);
  return summary;
}

Output run_figure(const json& p, const std::string& out, std::uint64_t seed, std::vector<std::string>& paths) {
  const std::string name = p["name"];
  if (out.empty()) throw ValidationError("figure: --out must name an output directory");
  const RunRecord r = figure_pipeline(name, out, seed);
  paths = r.files;
  Output o;
  o.payload = r.payload;
  o.warnings = r.warnings;
  return o;
}

}  // namespace

std::string to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ValidationError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

json ExperimentSpec::to_json() const {
  return {{"command", command}, {"params", params}, {"seed", seed}, {"out", out}, {"format", kkldm::to_string(format)}};
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
  try {
    ExperimentSpec s;
    s.command = j.at("command").get<std::string>();
    s.params = j.value("params", json::object());
    s.seed = j.value("seed", std::uint64_t{0});
    s.out = j.value("out", std::string());
    s.format = output_format_from_string(j.value("format", std::string("csv")));
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed experiment spec: ") + e.what());
  }
}

json RunRecord::to_json() const {
  return {{"spec", spec.to_json()}, {"version", version},   {"wall_seconds", wall_seconds},
          {"payload", payload},     {"warnings", warnings}, {"files", files}};
}

RunRecord RunRecord::from_json(const json& j) {
  try {
    RunRecord r;
    r.spec = ExperimentSpec::from_json(j.at("spec"));
    r.version = j.at("version").get<std::string>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.payload = j.at("payload");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.files = j.at("files").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run record: ") + e.what());
  }
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, s] : schemas()) v.push_back(k);
    return v;
  }();
  return names;
}

json validate_params(const std::string& command, const json& params) {
  const auto it = schemas().find(command);
  if (it == schemas().end()) throw ValidationError("unknown subcommand '" + command + "'");
  if (!params.is_object()) throw ValidationError(command + ": parameters must be an object");
  for (const auto& [key, v] : params.items()) {
    bool known = false;
    for (const auto& p : it->second) known |= p.name == key;
    if (!known) throw ValidationError(command + ": unknown parameter '" + key + "'");
  }
  json out = json::object();
  for (const auto& p : it->second) {
    if (!params.contains(p.name) || params[p.name].is_null()) {
      if (p.required) throw ValidationError(command + ": missing required parameter '" + p.name + "'");
      out[p.name] = p.fallback;
      continue;
    }
    const json& v = params[p.name];
    if (p.kind == Kind::integer_list || p.kind == Kind::real_list) {
      const Kind elem = p.kind == Kind::integer_list ? Kind::integer : Kind::real;
      json list = json::array();
      if (v.is_array()) {
        for (const auto& e : v) list.push_back(check_scalar(command, p, e, elem));
      } else {
        list.push_back(check_scalar(command, p, v, elem));
      }
      if (list.empty()) throw ValidationError(command + ": parameter '" + p.name + "' is empty");
      out[p.name] = list;
    } else {
      out[p.name] = check_scalar(command, p, v, p.kind);
    }
  }
  return out;
}

RunRecord dispatch(const ExperimentSpec& spec) {
  RunRecord rec;
  rec.spec = spec;
  rec.spec.params = validate_params(spec.command, spec.params);
  const json& p = rec.spec.params;
  const auto start = std::chrono::steady_clock::now();

  Output o;
  std::vector<std::string> figure_paths;
  const std::string& c = spec.command;
  if (c == "ldm-sim") {
    o = run_ldm_sim(p, spec.seed);
  } else if (c == "exact-pdf") {
    o = run_exact_pdf(p);
  } else if (c == "lambda-walk") {
    o = run_lambda_walk(p, spec.seed);
  } else if (c == "rate-eq") {
    o = run_rate_eq(p);
  } else if (c == "fibonacci") {
    o = run_fibonacci(p);
  } else if (c == "series") {
    o = run_series(p);
  } else if (c == "gamma") {
    o = run_gamma(p);
  } else if (c == "fit") {
    o = run_fit(p);
  } else {
    o = run_figure(p, spec.out, spec.seed, figure_paths);
  }

  if (c == "figure") {
    rec.rendered = o.payload.dump(2) + "\n";
    rec.files = figure_paths;
  } else {
    rec.rendered = render(o, spec.format);
    if (!o.side.empty() && spec.out.empty()) {
      throw ValidationError(c + ": histogram and field dumps need --out");
    }
    if (!spec.out.empty()) {
      write_atomic(spec.out, rec.rendered);
      rec.files.push_back(spec.out);
      for (const auto& [suffix, table] : o.side) {
        const fs::path sp = side_path(spec.out, suffix);
        write_atomic(sp, table.csv());
        rec.files.push_back(sp.string());
      }
    }
  }
  rec.payload = std::move(o.payload);
  rec.warnings = std::move(o.warnings);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

RunRecord replay(const RunRecord& record) {
  ExperimentSpec spec = record.spec;
  const fs::path dir = fs::temp_directory_path() / ("kkldm-replay-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  if (!spec.out.empty()) {
    spec.out = (spec.command == "figure" ? dir : dir / fs::path(spec.out).filename()).string();
  }
  RunRecord r;
  try {
    r = dispatch(spec);
  } catch (...) {
    fs::remove_all(dir);
    throw;
  }
  fs::remove_all(dir);
  r.spec = record.spec;
  r.files.clear();
  return r;
}

const std::vector<std::string>& figure_presets() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig5", "fig6"};
  return names;
}

RunRecord figure_pipeline(const std::string& name, const fs::path& out_dir, std::uint64_t seed) {
  const auto& names = figure_presets();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ValidationError("unknown figure preset '" + name + "' (expected fig2, fig3, fig5 or fig6)");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw ValidationError("cannot create directory " + out_dir.string());

  const auto start = std::chrono::steady_clock::now();
  FigureWriter w{out_dir, json::array(), {}};
  json summary;
  if (name == "fig2") {
    summary = figure_fig2(w, seed);
  } else if (name == "fig3") {
    summary = figure_fig3(w, seed);
  } else if (name == "fig5") {
    summary = figure_fig5(w, seed);
  } else {
    summary = figure_fig6(w, seed);
  }

  RunRecord r;
  r.spec.command = "figure";
  r.spec.params = {{"name", name}};
  r.spec.seed = seed;
  r.spec.out = out_dir.string();
  r.spec.format = OutputFormat::json;
  r.payload = {{"figure", name}, {"files", w.files}, {"summary", summary}};
  r.files = w.paths;
  r.rendered = r.payload.dump(2) + "\n";
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << content;
    f.flush();
    if (!f) {
      fs::remove(tmp);
      throw ValidationError("cannot write " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot write " + path.string() + ": " + ec.message());
  }
}

}  // namespace kkldm
