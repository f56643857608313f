#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "elopt/analysis.hpp"
#include "elopt/io.hpp"
#include "elopt/lp_oracle.hpp"
#include "elopt/report.hpp"

namespace elopt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest round-trip text, locale independent.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
T get_unsigned(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(std::string(key) + ": expected a non-negative integer");
  return v.get<T>();
}

std::vector<ConstructionKind> parse_kinds(const json& v) {
  if (!v.is_array()) throw ConfigError("constructions: expected an array of names");
  std::vector<ConstructionKind> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError("constructions: expected names");
    try {
      out.push_back(parse_construction_kind(e.get<std::string>()));
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("constructions: ") + ex.what());
    }
  }
  return out;
}

struct Named {
  std::string name;
  ELExpr expr;
};

ConstructionResult build(ConstructionKind kind, const Surface& surface) {
  if (kind == ConstructionKind::Linear) {
    if (const auto* h = std::get_if<Hyperplane>(&surface)) return linear_opt(*h);
    return linear_opt(as_hyperplane(std::get<Curve2D>(surface)));
  }
  const auto* curve = std::get_if<Curve2D>(&surface);
  if (!curve) throw std::invalid_argument(std::string(to_string(kind)) + " needs a curve surface");
  switch (kind) {
    case ConstructionKind::ConvexPlateau:
      return convex_plateau(*curve);
    case ConstructionKind::ConvexDiag:
      return convex_diag(*curve);
    case ConstructionKind::ConcaveStep:
      return concave_construct(*curve);
    case ConstructionKind::Linear:
      break;
  }
  throw std::logic_error("unreachable");
}

// Explicit list, else both convex builders when a T-point exists, else the
// shape-matching one.
std::vector<ConstructionKind> default_kinds(const JobConfig& cfg) {
  if (!cfg.constructions.empty()) return cfg.constructions;
  if (const auto* c = std::get_if<Curve2D>(&cfg.surface)) {
    if (c->shape() == Shape::StrictlyConvex && t_point(*c)) {
      return {ConstructionKind::ConvexPlateau, ConstructionKind::ConvexDiag};
    }
  }
  return {construct_for(cfg.surface).kind};
}

std::vector<Named> functions_under_test(const JobConfig& cfg) {
  if (cfg.expr) return {Named{"expr", io::expr_from_json(*cfg.expr)}};
  std::vector<Named> out;
  for (auto kind : default_kinds(cfg)) out.push_back(Named{std::string(to_string(kind)), build(kind, cfg.surface).expr});
  return out;
}

std::vector<double> suite_box(const JobConfig& cfg) {
  auto box = intercept_box(cfg.surface);
  for (auto& b : box) b *= cfg.sample_extent;
  return box;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

class Emitter {
 public:
  Emitter(const JobConfig& cfg, Format format, std::ostream& out) : cfg_(cfg), format_(format), out_(out) {}

  // JSON goes to stdout in json mode and to <out>/<file> when --out is set;
  // text mode prints `text` instead.
  void emit(const std::string& file, const json& doc, const std::string& text) {
    const std::string dumped = doc.dump(2) + "\n";
    if (cfg_.out) write_file(*cfg_.out / file, dumped);
    if (format_ == Format::Json) {
      out_ << dumped;
    } else {
      out_ << text;
    }
  }

 private:
  const JobConfig& cfg_;
  Format format_;
  std::ostream& out_;
};

int cmd_validate(const JobConfig& cfg, Emitter& em) {
  const auto r = validate(cfg.surface);
  std::ostringstream text;
  text << "surface " << (r.valid ? "valid" : "INVALID") << ", slope range [" << num(r.slope_min) << ", "
       << num(r.slope_max) << "]";
  if (r.shape) text << ", shape " << to_string(*r.shape);
  text << "\n";
  for (const auto& v : r.violations) text << "  " << v << "\n";
  em.emit("validate.json", io::to_json(r), text.str());
  return r.valid ? kOk : kValidationFailure;
}

int cmd_bound(const JobConfig& cfg, Emitter& em) {
  const auto b = theorem1_bound(cfg.surface);
  std::ostringstream text;
  text << "normal-ratio bound " << num(b.value) << " (witness i=" << b.witness.i << " j=" << b.witness.j
       << ", point";
  for (double x : b.witness.point) text << " " << num(x);
  text << (b.note.empty() ? "" : ", " + b.note) << ")\n";
  em.emit("bound.json", io::to_json(b), text.str());
  return kOk;
}

int cmd_construct(const JobConfig& cfg, Emitter& em, std::ostream& out, Format format) {
  json all = json::array();
  std::ostringstream text;
  const auto* curve = std::get_if<Curve2D>(&cfg.surface);
  const auto t = curve ? t_point(*curve) : std::nullopt;
  for (auto kind : default_kinds(cfg)) {
    const auto r = build(kind, cfg.surface);
    json doc = io::to_json(r);
    text << to_string(kind) << ": cost " << num(cost(r.expr)) << ", cost_total "
         << (doc["cost_total"].is_null() ? std::string("unbounded") : num(doc["cost_total"].get<double>()));
    if (t) {
      const double p[2] = {t->tx, t->ty};
      doc["value_at_t"] = eval(r.expr, p);
      text << ", f(T) " << num(eval(r.expr, p));
    }
    if (r.fallback) text << " [single-branch]";
    text << "\n";
    if (cfg.out) write_file(*cfg.out / ("construction_" + std::string(to_string(kind)) + ".json"), doc.dump(2) + "\n");
    all.push_back(std::move(doc));
  }
  if (format == Format::Json) {
    out << all.dump(2) << "\n";
  } else {
    out << text.str();
  }
  (void)em;
  return kOk;
}

int cmd_check(const JobConfig& cfg, Emitter& em) {
  const auto box = suite_box(cfg);
  SuiteOptions opts;
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  bool ok = true;
  json results = json::array();
  std::ostringstream text;
  for (const auto& f : functions_under_test(cfg)) {
    const auto suite = check_el(f.expr, box, opts);
    const auto feas = check_feasible(f.expr, cfg.surface, cfg.surface_samples, cfg.seed);
    ok = ok && suite.passed() && feas.feasible;
    results.push_back(json{{"name", f.name}, {"el", io::to_json(suite)}, {"feasibility", io::to_json(feas)}});
    text << f.name << ": EL suite " << (suite.passed() ? "pass" : "FAIL") << ", feasibility "
         << (feas.feasible ? "pass" : "FAIL") << " (min_jump " << num(feas.min_jump) << ")\n";
    for (const auto& p : suite.properties) {
      if (!p.passed) text << "  " << p.name << " violated by " << num(p.worst_violation) << "\n";
    }
  }
  em.emit("check.json", json{{"passed", ok}, {"results", results}}, text.str());
  return ok ? kOk : kSuiteFailure;
}

int cmd_lp(const JobConfig& cfg, Emitter& em) {
  if (cfg.grid.empty()) throw ConfigError("lp: no grid sizes (use --grid or \"grid\")");
  if (cfg.lp_dump && cfg.out) {
    for (std::size_t m : cfg.grid) {
      std::ostringstream dump;
      write_lp_format(build_lp(cfg.surface, m), dump);
      write_file(*cfg.out / ("grid_m" + std::to_string(m) + ".lp"), dump.str());
    }
  }
  const auto sweep = lp_sweep(cfg.surface, cfg.grid, cfg.workers);
  json rows = json::array();
  std::ostringstream text;
  bool ok = true;
  for (const auto& b : sweep) {
    rows.push_back(io::to_json(b));
    ok = ok && b.status == LpStatus::Optimal;
    text << "m=" << b.m << " " << to_string(b.status) << " value " << num(b.value) << " (" << to_string(b.method)
         << ", " << b.iterations << " iterations, " << b.crossing_rows << " crossing rows)\n";
  }
  em.emit("lp.json", json{{"runs", rows}}, text.str());
  return ok ? kOk : kSolverFailure;
}

int cmd_report(const JobConfig& cfg, Emitter& em) {
  const auto r = gap_report(cfg.surface, cfg.grid, cfg.workers);
  std::ostringstream text;
  text << "normal-ratio bound  " << num(r.thm1.value) << "\n"
       << "construction        " << to_string(r.construction) << " cost " << num(r.construction_cost) << "\n"
       << "gap cost - bound    " << num(r.gap_construction_thm1) << "\n";
  if (r.lp_bound) {
    text << "grid LP bound       " << num(*r.lp_bound) << "\n"
         << "gap bound - LP      " << num(*r.gap_thm1_lp) << "\n";
  }
  em.emit("report.json", io::to_json(r), text.str());
  const bool solved = std::all_of(r.lp.begin(), r.lp.end(), [](const auto& b) { return b.status == LpStatus::Optimal; });
  return solved ? kOk : kSolverFailure;
}

int cmd_sample(const JobConfig& cfg, std::ostream& out) {
  if (dimension(cfg.surface) != 2) throw ConfigError("sample: needs a 2-D surface");
  if (cfg.sample_resolution < 2) throw ConfigError("sample_resolution must be at least 2");
  const auto fns = functions_under_test(cfg);
  const auto box = suite_box(cfg);
  std::ostringstream csv;
  csv << "x,y,f,fx_left,fx_right,fy_left,fy_right\n";
  const double steps = static_cast<double>(cfg.sample_resolution - 1);
  for (std::size_t i = 0; i < cfg.sample_resolution; ++i) {
    for (std::size_t j = 0; j < cfg.sample_resolution; ++j) {
      const double p[2] = {box[0] * static_cast<double>(i) / steps, box[1] * static_cast<double>(j) / steps};
      const auto g = one_sided_partials(fns.front().expr, p);
      csv << num(p[0]) << ',' << num(p[1]) << ',' << num(eval(fns.front().expr, p)) << ',' << num(g.left[0]) << ','
          << num(g.right[0]) << ',' << num(g.left[1]) << ',' << num(g.right[1]) << '\n';
    }
  }
  if (cfg.out) {
    write_file(*cfg.out / ("sample_" + fns.front().name + ".csv"), csv.str());
  } else {
    out << csv.str();
  }
  return kOk;
}

}  // namespace

std::vector<std::size_t> parse_grid_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) throw ConfigError("bad grid size '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty grid list");
  return out;
}

JobConfig parse_config(const json& doc, const fs::path& base_dir) {
  try {
    io::reject_unknown_keys(doc,
                            {"schema", "surface", "constructions", "expr", "expr_file", "seed", "samples",
                             "surface_samples", "grid", "workers", "sample_resolution", "sample_extent", "lp_dump",
                             "out"},
                            "config");
    if (!doc.contains("schema") || doc["schema"] != kSchema) {
      throw ConfigError(std::string("config: \"schema\" must be \"") + kSchema + "\"");
    }
    if (!doc.contains("surface")) throw ConfigError("config: missing \"surface\"");
    JobConfig cfg;
    cfg.surface = io::surface_from_json(doc["surface"]);
    if (doc.contains("constructions")) cfg.constructions = parse_kinds(doc["constructions"]);
    if (doc.contains("expr") && doc.contains("expr_file")) throw ConfigError("config: give expr or expr_file, not both");
    if (doc.contains("expr")) cfg.expr = doc["expr"];
    if (doc.contains("expr_file")) {
      if (!doc["expr_file"].is_string()) throw ConfigError("expr_file: expected a path");
      const fs::path p = base_dir / doc["expr_file"].get<std::string>();
      std::ifstream f(p);
      if (!f) throw ConfigError("expr_file: cannot open " + p.string());
      json loaded = json::parse(f);
      // A construct output file wraps the expression.
      cfg.expr = loaded.contains("expr") && loaded.contains("kind") ? loaded["expr"] : loaded;
    }
    cfg.seed = get_unsigned(doc, "seed", cfg.seed);
    cfg.samples = get_unsigned(doc, "samples", cfg.samples);
    cfg.surface_samples = get_unsigned(doc, "surface_samples", cfg.surface_samples);
    cfg.workers = get_unsigned(doc, "workers", cfg.workers);
    cfg.sample_resolution = get_unsigned(doc, "sample_resolution", cfg.sample_resolution);
    if (doc.contains("grid")) {
      if (!doc["grid"].is_array()) throw ConfigError("grid: expected an array");
      for (const auto& m : doc["grid"]) {
        if (!m.is_number_unsigned()) throw ConfigError("grid: expected non-negative integers");
        cfg.grid.push_back(m.get<std::size_t>());
      }
    }
    if (doc.contains("sample_extent")) {
      if (!doc["sample_extent"].is_number() || !(doc["sample_extent"].get<double>() > 0.0)) {
        throw ConfigError("sample_extent: expected a positive number");
      }
      cfg.sample_extent = doc["sample_extent"].get<double>();
    }
    if (doc.contains("lp_dump")) {
      if (!doc["lp_dump"].is_boolean()) throw ConfigError("lp_dump: expected true or false");
      cfg.lp_dump = doc["lp_dump"].get<bool>();
    }
    if (doc.contains("out")) {
      if (!doc["out"].is_string()) throw ConfigError("out: expected a path");
      cfg.out = base_dir / doc["out"].get<std::string>();
    }
    return cfg;
  } catch (const io::SchemaError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy-like function optimization toolkit"};
  app.require_subcommand(0);
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string grid;
  std::string out_dir;
  std::string format_name = "text";
  app.add_option("command", command, "validate | bound | construct | check | lp | report | sample")
      ->required()
      ->check(CLI::IsMember({"validate", "bound", "construct", "check", "lp", "report", "sample"}));
  app.add_option("--config", config_path, "JSON job file")->required();
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--samples", samples, "EL suite sample count");
  app.add_option("--grid", grid, "grid sizes, e.g. 16,32,64");
  app.add_option("--out", out_dir, "directory for output files");
  app.add_option("--format", format_name, "stdout format")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  JobConfig cfg;
  try {
    std::ifstream f(config_path);
    if (!f) throw ConfigError("cannot open config " + config_path);
    json doc;
    try {
      doc = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = parse_config(doc, fs::path(config_path).parent_path());
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    if (!grid.empty()) cfg.grid = parse_grid_list(grid);
    if (!out_dir.empty()) cfg.out = fs::path(out_dir);
    for (std::size_t m : cfg.grid) {
      if (m < kMinGrid || m > kMaxGrid) {
        throw ConfigError("grid size " + std::to_string(m) + " outside [" + std::to_string(kMinGrid) + ", " +
                          std::to_string(kMaxGrid) + "]");
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  const Format format = format_name == "json" ? Format::Json : Format::Text;
  Emitter em(cfg, format, out);
  try {
    if (command != "validate" && command != "bound") {
      const auto report = validate(cfg.surface);
      if (!report.valid) {
        err << "surface fails validation: " << report.violations.front() << "\n";
        return kValidationFailure;
      }
    }
    if (command == "validate") return cmd_validate(cfg, em);
    if (command == "bound") {
      if (!validate(cfg.surface).valid) {
        err << "surface fails validation\n";
        return kValidationFailure;
      }
      return cmd_bound(cfg, em);
    }
    if (command == "construct") return cmd_construct(cfg, em, out, format);
    if (command == "check") return cmd_check(cfg, em);
    if (command == "lp") return cmd_lp(cfg, em);
    if (command == "report") return cmd_report(cfg, em);
    return cmd_sample(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const io::SchemaError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const LpError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    err << "rejected: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace elopt::cli
