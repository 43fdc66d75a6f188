#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bvloc/catalog.hpp"
#include "bvloc/localization.hpp"
#include "bvloc/report_io.hpp"
#include "bvloc/verify.hpp"
#include "json.hpp"

using namespace bvloc;
using nlohmann::json;

namespace {

json load_config(const std::string& path) {
  std::string text = read_file(path);
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::exception& ex) {
    throw PreconditionError(std::string("config is not valid json: ") +
                            ex.what());
  }
  static const std::set<std::string> allowed = {
      "entry", "evaluator", "speed",  "k",      "order",  "phi",  "t_max",
      "t_steps", "tol",     "out_dir", "format", "filter", "fault", "box"};
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (!allowed.count(it.key()))
      throw PreconditionError("config: unknown key '" + it.key() + "'");
  if (cfg.contains("speed") && cfg.contains("k"))
    throw PreconditionError("config: give either 'speed' or 'k', not both");
  return cfg;
}

// Flags beat config values; config values beat defaults.
template <typename T>
void merge(const CLI::App* sub, const char* flag, const json& cfg,
           const char* key, T& target) {
  if (sub->count(flag) == 0 && cfg.contains(key)) target = cfg[key].get<T>();
}

void check_format(const std::string& f) {
  if (f != "json" && f != "csv" && f != "table")
    throw PreconditionError("format must be one of json, csv, table");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IOError("cannot create directory '" + dir + "'");
}

CatalogEntry build_entry(const std::string& id, double speed,
                         const json& cfg) {
  CatalogEntry e = make_entry(id, speed);
  if (cfg.contains("box")) {
    const json& b = cfg["box"];
    auto lo = b.at("lo").get<std::vector<double>>();
    auto hi = b.at("hi").get<std::vector<double>>();
    Chart& c = e.geom.charts.at(0).chart;
    if (static_cast<int>(lo.size()) != c.n ||
        static_cast<int>(hi.size()) != c.n)
      throw PreconditionError("config: box override has the wrong dimension");
    for (int d = 0; d < c.n; ++d) {
      if (!(lo[d] < hi[d]))
        throw PreconditionError("config: box override is empty on axis " +
                                std::to_string(d));
      c.box.lo[d] = lo[d];
      c.box.hi[d] = hi[d];
    }
  }
  return e;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (const std::string& s : v) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

int cmd_list(const std::string& evaluator, const std::string& format) {
  std::vector<const CatalogEntry*> rows;
  std::vector<CatalogEntry> all;
  for (const std::string& id : catalog_ids()) all.push_back(make_entry(id));
  for (const CatalogEntry& e : all) {
    if (!evaluator.empty() &&
        std::find(e.evaluators.begin(), e.evaluators.end(), evaluator) ==
            e.evaluators.end())
      continue;
    rows.push_back(&e);
  }
  if (format == "json") {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["kind"] = "list";
    j["entries"] = nlohmann::ordered_json::array();
    for (const CatalogEntry* e : rows) {
      nlohmann::ordered_json q;
      q["id"] = e->id;
      q["evaluators"] = e->evaluators;
      q["expected"] = e->expected;
      j["entries"].push_back(q);
    }
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
  } else if (format == "csv") {
    std::string out = "id,evaluators,expected\n";
    for (const CatalogEntry* e : rows)
      out += e->id + "," + csv_quote(join(e->evaluators, ";")) + "," +
             csv_quote(e->expected) + "\n";
    std::fputs(out.c_str(), stdout);
  } else {
    std::size_t wid = 2, wev = 10;
    for (const CatalogEntry* e : rows) {
      wid = std::max(wid, e->id.size());
      wev = std::max(wev, join(e->evaluators, ",").size());
    }
    auto pad = [](std::string s, std::size_t w) {
      s.resize(std::max(s.size(), w), ' ');
      return s;
    };
    std::string out = pad("id", wid) + "  " + pad("evaluators", wev) +
                      "  expected\n";
    for (const CatalogEntry* e : rows)
      out += pad(e->id, wid) + "  " + pad(join(e->evaluators, ","), wev) +
             "  " + e->expected + "\n";
    std::fputs(out.c_str(), stdout);
  }
  return 0;
}

std::string localization_csv(const LocalizationReport& r) {
  std::string out = "field,value\n";
  auto kv = [&](const char* k, const std::string& v) {
    out += std::string(k) + "," + v + "\n";
  };
  kv("entry", r.entry);
  kv("evaluator", r.evaluator);
  kv("speed", format_double(r.speed));
  kv("phi", format_double(r.phi));
  kv("order", std::to_string(r.order));
  kv("direct", format_double(r.direct));
  kv("localized", format_double(r.localized));
  kv("abs_residual", format_double(r.abs_residual));
  kv("rel_residual", format_double(r.rel_residual));
  kv("closedness", format_double(r.closedness));
  kv("closed", r.closed ? "true" : "false");
  for (const LocusReport& l : r.loci)
    kv(("locus." + l.id).c_str(), format_double(l.value));
  return out;
}

int cmd_localize(const CatalogEntry& e, const std::string& evaluator,
                 double phi, int order, double tol, const std::string& out_dir,
                 const std::string& format) {
  if (std::find(e.evaluators.begin(), e.evaluators.end(), evaluator) ==
      e.evaluators.end())
    throw PreconditionError("entry '" + e.id + "' has no evaluator '" +
                            evaluator + "'; it offers: " +
                            join(e.evaluators, ", "));
  LocalizationReport r;
  if (evaluator == "fixed_loci")
    r = localize_fixed_loci(e, phi, order);
  else if (evaluator == "locus_pairing")
    r = localize_locus_pairing(e, phi, order);
  else if (evaluator == "moment_map")
    r = localize_moment(e, order);
  else if (evaluator == "map_discrete")
    r = localize_map(e, true, phi, order);
  else if (evaluator == "map_zeros")
    r = localize_map(e, false, phi, order);
  else
    throw PreconditionError(
        "evaluator '" + evaluator +
        "' is not a localization route; use the matching subcommand");
  std::string body = format == "json"    ? localization_json(r)
                     : format == "csv"   ? localization_csv(r)
                                         : localization_table(r);
  std::fputs(body.c_str(), stdout);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    const char* ext = format == "json" ? ".json"
                      : format == "csv" ? ".csv"
                                        : ".txt";
    write_file(out_dir + "/localize_" + e.id + "_" + evaluator + ext, body);
  }
  return r.rel_residual <= tol ? 0 : 1;
}

int cmd_sweep(const CatalogEntry& e, double phi, double t_max, int t_steps,
              int order, const std::string& out_dir,
              const std::string& format) {
  SweepResult s = gamma_sweep(e, phi, t_max, t_steps, order);
  std::string body = format == "json"   ? sweep_json(s)
                     : format == "csv"  ? sweep_csv(s)
                                        : sweep_table(s);
  std::fputs(body.c_str(), stdout);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_file(out_dir + "/sweep_" + e.id + ".csv", sweep_csv(s));
    write_file(out_dir + "/sweep_" + e.id + ".svg", sweep_svg(s));
  }
  return s.flat == e.expect_flat_sweep ? 0 : 1;
}

int cmd_phase(const CatalogEntry& e, std::vector<double> ts, double tol,
              const std::string& out_dir, const std::string& format) {
  if (ts.empty()) ts = {25.0, 50.0};
  std::sort(ts.begin(), ts.end());
  std::vector<PhasePoint> pts = phase_compare(e, ts);
  std::string body =
      format == "json" ? phase_json(e.id, pts) : phase_table(e.id, pts);
  std::fputs(body.c_str(), stdout);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_file(out_dir + "/phase_" + e.id + (format == "json" ? ".json"
                                                              : ".txt"),
               body);
  }
  return pts.back().rel_err <= tol ? 0 : 1;
}

int cmd_verify(const std::string& filter, const std::string& fault,
               const std::string& format) {
  VerifyOptions opt;
  opt.filter = filter;
  if (!fault.empty()) {
    if (fault != "metric-skew")
      throw PreconditionError("unknown fault '" + fault +
                              "'; only metric-skew is available");
    opt.skew_fault = true;
  }
  auto t0 = std::chrono::steady_clock::now();
  std::vector<VerifyCheck> checks = run_verify(opt);
  auto ms = std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::fputs((format == "json" ? verify_json(checks) : verify_lines(checks))
                 .c_str(),
             stdout);
  std::fprintf(stderr, "%zu checks in %.0f ms\n", checks.size(), ms);
  return all_pass(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"localization workbench for circle actions on compact charts"};
  app.require_subcommand(1);

  std::string config_path, entry_id, evaluator, out_dir, filter, fault;
  std::string format = "table";
  double speed = 1.0, phi = 1.0, t_max = 5.0, tol = 1e-6, phase_tol = 0.05;
  int order = 0, t_steps = 11;
  std::vector<double> ts;

  CLI::App* list = app.add_subcommand("list", "catalog entries and their evaluators");
  list->add_option("--evaluator", evaluator, "only entries offering this evaluator");
  list->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "table"}));

  CLI::App* loc = app.add_subcommand("localize", "direct integral against a localization route");
  loc->add_option("--config", config_path, "json file with defaults for the flags");
  loc->add_option("--entry", entry_id);
  loc->add_option("--evaluator", evaluator, "fixed_loci, locus_pairing, moment_map, map_discrete or map_zeros");
  loc->add_option("--speed", speed, "action speed k");
  loc->add_option("--phi", phi, "equivariant parameter");
  loc->add_option("--order", order, "quadrature order per axis, 0 = entry default");
  loc->add_option("--tol", tol, "relative residual accepted as a pass");
  loc->add_option("--out-dir", out_dir, "also write the report here");
  loc->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "table"}));

  CLI::App* sw = app.add_subcommand("sweep", "deformation sweep of the pairing over t");
  sw->add_option("--config", config_path);
  sw->add_option("--entry", entry_id);
  sw->add_option("--speed", speed);
  sw->add_option("--phi", phi);
  sw->add_option("--t-max", t_max);
  sw->add_option("--t-steps", t_steps);
  sw->add_option("--order", order);
  sw->add_option("--out-dir", out_dir, "write csv and svg of the sweep here");
  sw->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "table"}));

  CLI::App* ph = app.add_subcommand("phase", "stationary phase estimate against direct oscillatory quadrature");
  ph->add_option("--config", config_path);
  ph->add_option("--entry", entry_id);
  ph->add_option("--speed", speed);
  ph->add_option("--t", ts, "phase scale, repeatable");
  ph->add_option("--tol", phase_tol, "relative error accepted at the largest t");
  ph->add_option("--out-dir", out_dir);
  ph->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

  CLI::App* ver = app.add_subcommand("verify", "self-checks over the whole catalog");
  ver->add_option("--config", config_path);
  ver->add_option("--filter", filter, "run only checks whose name contains this");
  ver->add_option("--fault-inject", fault, "metric-skew: perturb the metric, the check suite must notice");
  ver->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    json cfg = json::object();
    if (!config_path.empty()) cfg = load_config(config_path);
    merge(sub, "--entry", cfg, "entry", entry_id);
    if (sub != list) merge(sub, "--evaluator", cfg, "evaluator", evaluator);
    merge(sub, "--speed", cfg, "speed", speed);
    merge(sub, "--speed", cfg, "k", speed);
    merge(sub, "--phi", cfg, "phi", phi);
    merge(sub, "--order", cfg, "order", order);
    merge(sub, "--t-max", cfg, "t_max", t_max);
    merge(sub, "--t-steps", cfg, "t_steps", t_steps);
    merge(sub, "--tol", cfg, "tol", tol);
    merge(sub, "--out-dir", cfg, "out_dir", out_dir);
    merge(sub, "--format", cfg, "format", format);
    merge(sub, "--filter", cfg, "filter", filter);
    merge(sub, "--fault-inject", cfg, "fault", fault);
    check_format(format);

    if (sub == list) return cmd_list(evaluator, format);
    if (sub == ver) return cmd_verify(filter, fault, format);

    if (entry_id.empty())
      throw PreconditionError("an entry is required; see 'list'");
    CatalogEntry e = build_entry(entry_id, speed, cfg);
    if (order <= 0) order = e.geom.default_order;

    if (sub == loc) {
      if (evaluator.empty())
        throw PreconditionError("an evaluator is required; entry '" + e.id +
                                "' offers: " + join(e.evaluators, ", "));
      return cmd_localize(e, evaluator, phi, order, tol, out_dir, format);
    }
    if (sub == sw) return cmd_sweep(e, phi, t_max, t_steps, order, out_dir, format);
    if (sub == ph) return cmd_phase(e, ts, phase_tol, out_dir, format);
    return 0;
  } catch (const PreconditionError& ex) {
    std::fprintf(stderr, "precondition failed: %s\n", ex.what());
    return 2;
  } catch (const InvariantError& ex) {
    std::fprintf(stderr, "invariant violated: %s\n", ex.what());
    return 1;
  } catch (const IOError& ex) {
    std::fprintf(stderr, "io error: %s\n", ex.what());
    return 3;
  }
}
