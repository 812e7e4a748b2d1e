#include "mevsim/cli.hpp"

#include <fstream>
#include <iostream>
#include <set>

#include "mevsim/analysis.hpp"
#include "mevsim/csv.hpp"
#include "mevsim/orbits.hpp"
#include "mevsim/scenarios.hpp"
#include "mevsim/svg.hpp"

namespace mevsim::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string join_path(const std::string& ctx, const std::string& key) {
  return ctx.empty() ? key : ctx + "." + key;
}

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& ctx) {
  if (!j.is_object()) fail("expected an object at '" + ctx + "'");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) fail("unknown key '" + join_path(ctx, key) + "'");
  }
}

const json& need(const json& j, const std::string& key, const std::string& ctx) {
  const auto it = j.find(key);
  if (it == j.end()) fail("missing key '" + join_path(ctx, key) + "'");
  return *it;
}

double need_number(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_number()) fail("key '" + join_path(ctx, key) + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& ctx,
                 double fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail("key '" + join_path(ctx, key) + "' must be a number");
  return it->get<double>();
}

std::int64_t int_or(const json& j, const std::string& key, const std::string& ctx,
                    std::int64_t fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) fail("key '" + join_path(ctx, key) + "' must be an integer");
  return it->get<std::int64_t>();
}

std::string need_string(const json& j, const std::string& key,
                        const std::string& ctx) {
  const json& v = need(j, key, ctx);
  if (!v.is_string()) fail("key '" + join_path(ctx, key) + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

ToleranceDistribution parse_distribution(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("expected a distribution object at '" + ctx + "'");
  const std::string kind = need_string(j, "kind", ctx);
  try {
    if (kind == "beta") {
      reject_unknown(j, {"kind", "a", "b"}, ctx);
      return ToleranceDistribution::beta(need_number(j, "a", ctx),
                                         need_number(j, "b", ctx));
    }
    if (kind == "uniform") {
      reject_unknown(j, {"kind", "lo", "hi"}, ctx);
      return ToleranceDistribution::uniform(need_number(j, "lo", ctx),
                                            need_number(j, "hi", ctx));
    }
    if (kind == "normal") {
      reject_unknown(j, {"kind", "mu", "sigma2"}, ctx);
      return ToleranceDistribution::truncated_normal(
          need_number(j, "mu", ctx), need_number(j, "sigma2", ctx));
    }
  } catch (const std::invalid_argument& e) {
    fail("invalid distribution at '" + ctx + "': " + e.what());
  }
  fail("key '" + join_path(ctx, "kind") +
       "' must be one of beta | uniform | normal");
}

namespace {

BurnPolicy parse_burn(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("expected a burn object at '" + ctx + "'");
  const std::string mode = need_string(j, "mode", ctx);
  try {
    if (mode == "none") {
      reject_unknown(j, {"mode"}, ctx);
      return BurnPolicy::none();
    }
    if (mode == "constant") {
      reject_unknown(j, {"mode", "k"}, ctx);
      return BurnPolicy::constant(need_number(j, "k", ctx));
    }
    if (mode == "sampled") {
      reject_unknown(j, {"mode", "lo", "hi", "seed"}, ctx);
      return BurnPolicy::sampled(need_number(j, "lo", ctx),
                                 need_number(j, "hi", ctx),
                                 int_or(j, "seed", ctx, 0));
    }
  } catch (const std::invalid_argument& e) {
    fail("invalid burn policy at '" + ctx + "': " + e.what());
  }
  fail("key '" + join_path(ctx, "mode") +
       "' must be one of none | constant | sampled");
}

MevSequence parse_mev(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("expected a mev object at '" + ctx + "'");
  const std::string mode = need_string(j, "mode", ctx);
  try {
    if (mode == "constant") {
      reject_unknown(j, {"mode", "m"}, ctx);
      return MevSequence::constant(number_or(j, "m", ctx, 1.0));
    }
    if (mode == "series") {
      reject_unknown(j, {"mode", "values"}, ctx);
      const json& v = need(j, "values", ctx);
      if (!v.is_array()) fail("key '" + join_path(ctx, "values") + "' must be an array");
      std::vector<double> values;
      for (const json& e : v) {
        if (!e.is_number()) fail("mev series values must be numbers at '" + ctx + "'");
        values.push_back(e.get<double>());
      }
      return MevSequence::series(std::move(values));
    }
    if (mode == "sampled") {
      reject_unknown(j, {"mode", "lo", "hi", "seed"}, ctx);
      return MevSequence::sampled(need_number(j, "lo", ctx),
                                  need_number(j, "hi", ctx),
                                  int_or(j, "seed", ctx, 0));
    }
  } catch (const std::invalid_argument& e) {
    fail("invalid mev sequence at '" + ctx + "': " + e.what());
  }
  fail("key '" + join_path(ctx, "mode") +
       "' must be one of constant | series | sampled");
}

}  // namespace

MarketInstance parse_market(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("expected a market object at '" + ctx + "'");
  reject_unknown(j, {"users", "miners", "w", "burn"}, ctx);
  const BurnPolicy burn = j.contains("burn")
                              ? parse_burn(j.at("burn"), join_path(ctx, "burn"))
                              : BurnPolicy::none();
  try {
    return MarketInstance(
        parse_distribution(need(j, "users", ctx), join_path(ctx, "users")),
        parse_distribution(need(j, "miners", ctx), join_path(ctx, "miners")),
        need_number(j, "w", ctx), burn);
  } catch (const std::invalid_argument& e) {
    fail("invalid market at '" + ctx + "': " + e.what());
  }
}

UpdateRule parse_rule(const json& j, const std::string& ctx) {
  if (!j.is_string()) fail("key '" + ctx + "' must be a string");
  const std::string name = j.get<std::string>();
  for (UpdateRule r : {UpdateRule::Full, UpdateRule::MinerScaled,
                       UpdateRule::UserScaled, UpdateRule::Plain})
    if (name == rule_name(r)) return r;
  fail("key '" + ctx +
       "' must be one of full | miner-scaled | user-scaled | plain");
}

namespace {

// ---- schema -----------------------------------------------------------

void validate_distribution_schema(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("expected a distribution object at '" + ctx + "'");
  const std::string kind = need_string(j, "kind", ctx);
  if (kind == "beta") {
    reject_unknown(j, {"kind", "a", "b"}, ctx);
    need_number(j, "a", ctx);
    need_number(j, "b", ctx);
  } else if (kind == "uniform") {
    reject_unknown(j, {"kind", "lo", "hi"}, ctx);
    need_number(j, "lo", ctx);
    need_number(j, "hi", ctx);
  } else if (kind == "normal") {
    reject_unknown(j, {"kind", "mu", "sigma2"}, ctx);
    need_number(j, "mu", ctx);
    need_number(j, "sigma2", ctx);
  } else {
    fail("key '" + join_path(ctx, "kind") +
         "' must be one of beta | uniform | normal");
  }
}

void validate_burn_schema(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("expected a burn object at '" + ctx + "'");
  const std::string mode = need_string(j, "mode", ctx);
  if (mode == "none") {
    reject_unknown(j, {"mode"}, ctx);
  } else if (mode == "constant") {
    reject_unknown(j, {"mode", "k"}, ctx);
    need_number(j, "k", ctx);
  } else if (mode == "sampled") {
    reject_unknown(j, {"mode", "lo", "hi", "seed"}, ctx);
    need_number(j, "lo", ctx);
    need_number(j, "hi", ctx);
  } else {
    fail("key '" + join_path(ctx, "mode") +
         "' must be one of none | constant | sampled");
  }
}

void validate_market_schema(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("expected a market object at '" + ctx + "'");
  reject_unknown(j, {"users", "miners", "w", "burn"}, ctx);
  validate_distribution_schema(need(j, "users", ctx), join_path(ctx, "users"));
  validate_distribution_schema(need(j, "miners", ctx), join_path(ctx, "miners"));
  need_number(j, "w", ctx);
  if (j.contains("burn")) validate_burn_schema(j.at("burn"), join_path(ctx, "burn"));
}

void validate_mev_schema(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail("expected a mev object at '" + ctx + "'");
  const std::string mode = need_string(j, "mode", ctx);
  if (mode == "constant") {
    reject_unknown(j, {"mode", "m"}, ctx);
  } else if (mode == "series") {
    reject_unknown(j, {"mode", "values"}, ctx);
    if (!need(j, "values", ctx).is_array())
      fail("key '" + join_path(ctx, "values") + "' must be an array");
  } else if (mode == "sampled") {
    reject_unknown(j, {"mode", "lo", "hi", "seed"}, ctx);
    need_number(j, "lo", ctx);
    need_number(j, "hi", ctx);
  } else {
    fail("key '" + join_path(ctx, "mode") +
         "' must be one of constant | series | sampled");
  }
}

const std::set<std::string> kCommonKeys = {"out", "seed", "svg", "precision"};

void validate_common(json& cfg, const std::string& command) {
  if (!cfg.is_object()) fail("config root must be a JSON object");
  if (!cfg.contains("out")) fail("missing key 'out'");
  if (!cfg.at("out").is_string()) fail("key 'out' must be a string");
  if (!cfg.contains("seed")) cfg["seed"] = 0;
  if (!cfg.at("seed").is_number_integer() || cfg.at("seed").get<std::int64_t>() < 0)
    fail("key 'seed' must be a nonnegative integer");
  if (!cfg.contains("svg")) cfg["svg"] = false;
  if (!cfg.at("svg").is_boolean()) fail("key 'svg' must be a boolean");
  if (!cfg.contains("precision")) cfg["precision"] = json::object();
  reject_unknown(cfg.at("precision"), {"lambda_star_tol", "period_tol"},
                 "precision");
  if (!cfg["precision"].contains("lambda_star_tol"))
    cfg["precision"]["lambda_star_tol"] = 1e-12;
  if (!cfg["precision"].contains("period_tol"))
    cfg["precision"]["period_tol"] = 1e-10;
  (void)command;
}

void validate_command_schema(const std::string& command, json& cfg) {
  validate_common(cfg, command);
  std::set<std::string> keys = kCommonKeys;
  if (command == "simulate") {
    keys.insert({"market", "rule", "lambda0", "eta", "mev", "steps"});
    reject_unknown(cfg, keys, "");
    validate_market_schema(need(cfg, "market", ""), "market");
    need(cfg, "eta", "");
    if (!cfg.contains("rule")) cfg["rule"] = "full";
    if (!cfg.contains("lambda0")) cfg["lambda0"] = 0.3;
    if (!cfg.contains("steps")) cfg["steps"] = 1000;
    if (!cfg.contains("mev")) cfg["mev"] = {{"mode", "constant"}, {"m", 1.0}};
    validate_mev_schema(cfg.at("mev"), "mev");
  } else if (command == "thresholds") {
    keys.insert({"market", "eta", "grid_n"});
    reject_unknown(cfg, keys, "");
    validate_market_schema(need(cfg, "market", ""), "market");
    need(cfg, "eta", "");
    if (!cfg.contains("grid_n")) cfg["grid_n"] = 1000000;
  } else if (command == "bifurcate") {
    keys.insert({"market", "rule", "axis", "burn_in", "n_record", "lambda0"});
    reject_unknown(cfg, keys, "");
    need(cfg, "axis", "");
    if (!cfg.contains("rule")) cfg["rule"] = "full";
    if (!cfg.contains("burn_in")) cfg["burn_in"] = 200;
    if (!cfg.contains("n_record")) cfg["n_record"] = 200;
    if (!cfg.contains("lambda0")) cfg["lambda0"] = 0.3;
    json& axis = cfg.at("axis");
    reject_unknown(axis,
                   {"type", "min", "max", "count", "eta", "user_center",
                    "miner_center"},
                   "axis");
    const std::string type = need_string(axis, "type", "axis");
    if (type != "eta" && type != "range")
      fail("key 'axis.type' must be eta | range");
    need_number(axis, "min", "axis");
    need_number(axis, "max", "axis");
    if (!axis.contains("count")) axis["count"] = 200;
    if (type == "eta") {
      validate_market_schema(need(cfg, "market", ""), "market");
    } else {
      need_number(axis, "eta", "axis");
      if (!axis.contains("user_center")) axis["user_center"] = 0.5;
      if (!axis.contains("miner_center")) axis["miner_center"] = 0.4;
      if (!cfg.contains("market"))
        cfg["market"] = {{"users", {{"kind", "uniform"}, {"lo", 0.25}, {"hi", 0.75}}},
                         {"miners", {{"kind", "uniform"}, {"lo", 0.25}, {"hi", 0.75}}},
                         {"w", 1.0}};
      validate_market_schema(cfg.at("market"), "market");
    }
  } else if (command == "periods") {
    keys.insert({"market", "rule", "eta", "ks", "grid_n", "tol"});
    reject_unknown(cfg, keys, "");
    validate_market_schema(need(cfg, "market", ""), "market");
    need(cfg, "eta", "");
    need(cfg, "ks", "");
    if (!cfg.at("ks").is_array() || cfg.at("ks").empty())
      fail("key 'ks' must be a nonempty array of positive integers");
    for (const json& jk : cfg.at("ks"))
      if (!jk.is_number_integer() || jk.get<int>() < 1)
        fail("key 'ks' must contain positive integers");
    if (!cfg.contains("rule")) cfg["rule"] = "full";
    if (!cfg.contains("grid_n")) cfg["grid_n"] = 0;
    if (!cfg.contains("tol")) cfg["tol"] = 1e-10;
  } else if (command == "chaos-witness") {
    keys.insert({"eta", "w", "a0", "search_steps"});
    reject_unknown(cfg, keys, "");
    need(cfg, "eta", "");
    need(cfg, "w", "");
    if (!cfg.contains("a0")) cfg["a0"] = 0.1;
    if (!cfg.contains("search_steps")) cfg["search_steps"] = 200;
  } else if (command == "scenario") {
    keys.insert({"type", "regime", "stress", "burn_run", "rules", "lambda0"});
    reject_unknown(cfg, keys, "");
    const std::string type = need_string(cfg, "type", "");
    if (!cfg.contains("lambda0")) cfg["lambda0"] = 0.3;
    if (type == "regime") {
      if (!need(cfg, "regime", "").is_object()) fail("key 'regime' must be an object");
      json& r = cfg.at("regime");
      reject_unknown(r, {"market1", "eta1", "market2", "eta2", "theta",
                         "total_steps", "epoch_len"},
                     "regime");
      validate_market_schema(need(r, "market1", "regime"), "regime.market1");
      validate_market_schema(need(r, "market2", "regime"), "regime.market2");
      need_number(r, "eta1", "regime");
      need_number(r, "eta2", "regime");
      need_number(r, "theta", "regime");
      if (!r.contains("total_steps")) r["total_steps"] = 5000;
      if (!r.contains("epoch_len")) r["epoch_len"] = 50;
    } else if (type == "stress") {
      if (!need(cfg, "stress", "").is_object()) fail("key 'stress' must be an object");
      json& s = cfg.at("stress");
      reject_unknown(s,
                     {"n_epochs", "blocks_per_epoch", "eta_lo", "eta_hi",
                      "w_lo", "w_hi", "beta_perturb_every", "shape_lo",
                      "shape_hi"},
                     "stress");
      if (!s.contains("n_epochs")) s["n_epochs"] = 100;
      if (!s.contains("blocks_per_epoch")) s["blocks_per_epoch"] = 50;
      if (!s.contains("eta_lo")) s["eta_lo"] = 0.4;
      if (!s.contains("eta_hi")) s["eta_hi"] = 1.0;
      if (!s.contains("w_lo")) s["w_lo"] = 0.5;
      if (!s.contains("w_hi")) s["w_hi"] = 2.0;
      if (!s.contains("beta_perturb_every")) s["beta_perturb_every"] = 10;
      if (!s.contains("shape_lo")) s["shape_lo"] = 1.5;
      if (!s.contains("shape_hi")) s["shape_hi"] = 6.0;
    } else if (type == "burn") {
      if (!need(cfg, "burn_run", "").is_object()) fail("key 'burn_run' must be an object");
      json& b = cfg.at("burn_run");
      reject_unknown(b, {"market", "burn", "eta", "steps"}, "burn_run");
      validate_market_schema(need(b, "market", "burn_run"), "burn_run.market");
      validate_burn_schema(need(b, "burn", "burn_run"), "burn_run.burn");
      need_number(b, "eta", "burn_run");
      if (!b.contains("steps")) b["steps"] = 2000;
    } else if (type == "rule-comparison") {
      if (!need(cfg, "rules", "").is_object()) fail("key 'rules' must be an object");
      json& rc = cfg.at("rules");
      reject_unknown(rc, {"market", "eta", "steps"}, "rules");
      validate_market_schema(need(rc, "market", "rules"), "rules.market");
      need_number(rc, "eta", "rules");
      if (!rc.contains("steps")) rc["steps"] = 200;
    } else {
      fail("key 'type' must be one of regime | stress | burn | rule-comparison");
    }
  } else {
    fail("unknown command '" + command + "'");
  }
}

json* navigate(json& root, const std::string& dotted) {
  json* cur = &root;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', pos);
    const std::string key = dotted.substr(pos, dot - pos);
    if (key.empty()) return nullptr;
    if (!cur->is_object()) return nullptr;
    cur = &(*cur)[key];
    if (dot == std::string::npos) return cur;
    pos = dot + 1;
  }
}

void apply_overrides(json& cfg, const Overrides& o) {
  for (const auto& [path, raw] : o.sets) {
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;  // treat unparsable values as strings
    }
    json* slot = navigate(cfg, path);
    if (!slot) fail("cannot apply override to path '" + path + "'");
    *slot = value;
  }
  if (o.out) cfg["out"] = *o.out;
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.svg) cfg["svg"] = *o.svg;
}

// ---- output helpers ----------------------------------------------------

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file " + path.string());
  return os;
}

void write_echo(const json& cfg, const std::filesystem::path& dir) {
  auto os = open_out(dir / "config.json");
  os << cfg.dump(2) << '\n';
}

void svg_trace(const std::filesystem::path& path, const OrbitTrace& trace) {
  svg::Plot plot;
  plot.title = "orbit";
  plot.x_label = "t";
  plot.y_label = "lambda / delta";
  svg::Series lam, del;
  lam.line = del.line = true;
  lam.color = "#1f77b4";
  lam.label = "lambda_t";
  del.color = "#d62728";
  del.label = "delta(lambda_t)";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    lam.x.push_back(static_cast<double>(t));
    lam.y.push_back(trace.lambdas[t]);
    del.x.push_back(static_cast<double>(t));
    del.y.push_back(trace.deltas[t]);
  }
  plot.series = {lam, del};
  auto os = open_out(path);
  svg::render(os, plot);
}

void svg_scan(const std::filesystem::path& path, const BifurcationScan& scan) {
  svg::Plot plot;
  plot.title = "bifurcation scan";
  plot.x_label = scan.axis.type == ScanAxis::Type::Eta ? "eta" : "tolerance range r";
  plot.y_label = "lambda";
  svg::Series dots;
  dots.radius = 0.6;
  for (const ScanRecord& row : scan.rows) {
    for (double v : row.lambdas) {
      dots.x.push_back(row.param);
      dots.y.push_back(v);
    }
  }
  plot.series = {dots};
  auto os = open_out(path);
  svg::render(os, plot);
}

// ---- commands ----------------------------------------------------------

int cmd_simulate(const json& cfg, const std::filesystem::path& out) {
  const MarketInstance inst = parse_market(cfg.at("market"), "market");
  const UpdateRule rule = parse_rule(cfg.at("rule"), "rule");
  const MevSequence mev = parse_mev(cfg.at("mev"), "mev");
  const OrbitTrace trace =
      simulate(inst, rule, cfg.at("lambda0").get<double>(),
               cfg.at("eta").get<double>(), mev, cfg.at("steps").get<int>());
  {
    auto os = open_out(out / "trace.csv");
    write_trace_csv(os, trace);
  }
  if (cfg.at("svg").get<bool>()) svg_trace(out / "trace.svg", trace);
  std::cout << "wrote " << (out / "trace.csv").string() << " (" << trace.size()
            << " rows)\n";
  return kOk;
}

int cmd_thresholds(const json& cfg, const std::filesystem::path& out) {
  const MarketInstance inst = parse_market(cfg.at("market"), "market");
  const ThresholdReport rep =
      report(inst, cfg.at("eta").get<double>(), cfg.at("grid_n").get<std::int64_t>());
  const std::string text = threshold_report_text(rep);
  std::cout << text;
  {
    auto os = open_out(out / "thresholds.txt");
    os << text;
  }
  {
    auto os = open_out(out / "thresholds.csv");
    write_threshold_csv(os, rep);
  }
  return kOk;
}

int cmd_bifurcate(const json& cfg, const std::filesystem::path& out) {
  const json& jaxis = cfg.at("axis");
  ScanAxis axis;
  const std::string type = jaxis.at("type").get<std::string>();
  axis.type = type == "eta" ? ScanAxis::Type::Eta : ScanAxis::Type::ToleranceRange;
  axis.min = jaxis.at("min").get<double>();
  axis.max = jaxis.at("max").get<double>();
  axis.count = jaxis.at("count").get<int>();
  if (axis.type == ScanAxis::Type::ToleranceRange) {
    axis.eta = jaxis.at("eta").get<double>();
    axis.user_center = jaxis.at("user_center").get<double>();
    axis.miner_center = jaxis.at("miner_center").get<double>();
  }
  const MarketInstance inst = parse_market(cfg.at("market"), "market");
  const UpdateRule rule = parse_rule(cfg.at("rule"), "rule");
  const BifurcationScan scan =
      bifurcation_scan(inst, rule, axis, cfg.at("burn_in").get<int>(),
                       cfg.at("n_record").get<int>(), cfg.at("lambda0").get<double>());
  {
    auto os = open_out(out / "scan.csv");
    write_scan_csv(os, scan);
  }
  {
    auto os = open_out(out / "scan_summary.csv");
    write_scan_summary_csv(os, scan);
  }
  if (cfg.at("svg").get<bool>()) svg_scan(out / "scan.svg", scan);
  std::cout << "wrote " << (out / "scan.csv").string() << " ("
            << scan.rows.size() << " parameter values)\n";
  return kOk;
}

int cmd_periods(const json& cfg, const std::filesystem::path& out) {
  const MarketInstance inst = parse_market(cfg.at("market"), "market");
  const UpdateRule rule = parse_rule(cfg.at("rule"), "rule");
  const double eta = cfg.at("eta").get<double>();
  auto os = open_out(out / "periods.csv");
  os << "k,fixed_point,least_period,stable\n";
  for (const json& jk : cfg.at("ks")) {
    const int k = jk.get<int>();
    const PeriodReport rep =
        find_periodic_points(inst, rule, eta, k, cfg.at("grid_n").get<std::int64_t>(),
                             cfg.at("tol").get<double>());
    for (const PeriodicPoint& pt : rep.points) {
      os << rep.k << ',' << format_double(pt.point) << ',' << pt.least_period
         << ',' << stability_name(pt.stability) << '\n';
    }
    std::cout << "k=" << k << ": " << rep.points.size() << " fixed points";
    if (rep.tangency_suspected) std::cout << " (tangency suspected)";
    std::cout << '\n';
  }
  return kOk;
}

int cmd_chaos_witness(const json& cfg, const std::filesystem::path& out) {
  const ChaosWitness wit =
      chaos_witness(cfg.at("eta").get<double>(), cfg.at("w").get<double>(),
                    cfg.at("a0").get<double>(), cfg.at("search_steps").get<int>());
  const std::string text = chaos_witness_text(wit);
  std::cout << text;
  auto os = open_out(out / "witness.txt");
  os << text;
  return kOk;
}

int cmd_scenario(const json& cfg, const std::filesystem::path& out) {
  const std::string type = cfg.at("type").get<std::string>();
  const double lambda0 = cfg.at("lambda0").get<double>();
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();

  if (type == "rule-comparison") {
    const json& rc = cfg.at("rules");
    const MarketInstance inst = parse_market(rc.at("market"), "rules.market");
    const auto traces = run_rule_comparison(inst, rc.at("eta").get<double>(),
                                            lambda0, rc.at("steps").get<int>());
    auto os = open_out(out / "rules.csv");
    write_rule_comparison_csv(os, traces);
    std::cout << "wrote " << (out / "rules.csv").string() << '\n';
    return kOk;
  }

  ScenarioResult result;
  if (type == "regime") {
    const json& r = cfg.at("regime");
    RegimeConfig rc{
        RegimeSpec{parse_market(r.at("market1"), "regime.market1"),
                   r.at("eta1").get<double>()},
        RegimeSpec{parse_market(r.at("market2"), "regime.market2"),
                   r.at("eta2").get<double>()},
        r.at("theta").get<double>(), r.at("total_steps").get<int>(),
        r.at("epoch_len").get<int>()};
    result = run_regime(rc, lambda0, seed);
  } else if (type == "stress") {
    const json& s = cfg.at("stress");
    StressConfig sc;
    sc.n_epochs = s.at("n_epochs").get<int>();
    sc.blocks_per_epoch = s.at("blocks_per_epoch").get<int>();
    sc.eta_lo = s.at("eta_lo").get<double>();
    sc.eta_hi = s.at("eta_hi").get<double>();
    sc.w_lo = s.at("w_lo").get<double>();
    sc.w_hi = s.at("w_hi").get<double>();
    sc.beta_perturb_every = s.at("beta_perturb_every").get<int>();
    sc.shape_lo = s.at("shape_lo").get<double>();
    sc.shape_hi = s.at("shape_hi").get<double>();
    sc.seed = seed;
    result = run_stress(sc, lambda0);
  } else {  // burn
    const json& b = cfg.at("burn_run");
    const MarketInstance inst = parse_market(b.at("market"), "burn_run.market");
    const BurnPolicy burn = parse_burn(b.at("burn"), "burn_run.burn");
    result = run_burn(inst, burn, b.at("eta").get<double>(), lambda0,
                      b.at("steps").get<int>(), seed);
  }

  {
    auto os = open_out(out / "trace.csv");
    write_scenario_trace_csv(os, result);
  }
  if (type == "stress" || type == "regime") {
    auto os = open_out(out / "epochs.csv");
    write_epochs_csv(os, result);
  }
  if (cfg.at("svg").get<bool>()) svg_trace(out / "trace.svg", result.trace);
  std::cout << "wrote " << (out / "trace.csv").string() << " ("
            << result.trace.size() << " rows)\n";
  return kOk;
}

}  // namespace

json load_effective_config(const std::string& command,
                           const std::filesystem::path& config_path,
                           const Overrides& overrides) {
  std::ifstream is(config_path);
  if (!is) fail("cannot open config file " + config_path.string());
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  apply_overrides(cfg, overrides);
  validate_command_schema(command, cfg);
  return cfg;
}

int run_command(const std::string& command,
                const std::filesystem::path& config_path,
                const Overrides& overrides) {
  json cfg;
  try {
    cfg = load_effective_config(command, config_path, overrides);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const std::filesystem::path out = cfg.at("out").get<std::string>();
    std::filesystem::create_directories(out);
    write_echo(cfg, out);
    if (command == "simulate") return cmd_simulate(cfg, out);
    if (command == "thresholds") return cmd_thresholds(cfg, out);
    if (command == "bifurcate") return cmd_bifurcate(cfg, out);
    if (command == "periods") return cmd_periods(cfg, out);
    if (command == "chaos-witness") return cmd_chaos_witness(cfg, out);
    if (command == "scenario") return cmd_scenario(cfg, out);
    std::cerr << "config error: unknown command '" << command << "'\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const WitnessSearchExhausted& e) {
    std::cerr << "search exhausted: " << e.what() << '\n';
    std::cerr << chaos_witness_text(e.last_state());
    return kSearchExhausted;
  } catch (const std::invalid_argument& e) {
    std::cerr << "precondition error: " << e.what() << '\n';
    return kPreconditionError;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition error: " << e.what() << '\n';
    return kPreconditionError;
  }
}

}  // namespace mevsim::cli
