#pragma once

// Command dispatch for the `lcoai` tool. Kept in a header so tests can drive
// the exact byte output and exit codes in-process.
//
// Exit codes: 0 ok, 1 usage, 2 not found, 3 metric undefined, 4 parse error.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcoai/config.hpp"
#include "lcoai/cost.hpp"
#include "lcoai/decision.hpp"
#include "lcoai/errors.hpp"
#include "lcoai/ingest.hpp"
#include "lcoai/report.hpp"
#include "lcoai/sensitivity.hpp"

namespace lcoai::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNotFound = 2, kUndefined = 3, kParse = 4 };

class UsageError : public Error {
 public:
  using Error::Error;
};

inline const std::vector<std::string>& table_columns() {
  static const std::vector<std::string> columns{
      "Scenario",           "CAPEX (USD)",        "OPEX per Inference (USD)", "Annual Inference Volume",
      "Total OPEX (USD)",   "LCOAI ($/1,000 Inferences)"};
  return columns;
}

inline ReportTable comparison_table(const std::vector<ComparisonRow>& rows) {
  ReportTable t(table_columns());
  for (const auto& r : rows) {
    t.add_row({r.scenario_name, format_usd(r.capex_total), format_rate(r.opex_rate), format_count(r.volume),
               format_usd(r.opex_total), format_usd(r.per_thousand)});
  }
  return t;
}

// Exact match first, then a unique case-insensitive substring.
inline const CostScenario& find_scenario(const std::vector<CostScenario>& all, const std::string& name) {
  for (const auto& s : all) {
    if (s.name() == name) return s;
  }
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  const auto needle = lower(name);
  const CostScenario* hit = nullptr;
  std::string candidates;
  for (const auto& s : all) {
    if (lower(s.name()).find(needle) == std::string::npos) continue;
    candidates += (candidates.empty() ? "" : ", ") + ("'" + s.name() + "'");
    if (hit) throw NotFound("scenario name '" + name + "' is ambiguous: " + candidates);
    hit = &s;
  }
  if (!hit) throw NotFound("no scenario named '" + name + "'");
  return *hit;
}

namespace detail {

template <class F>
auto as_usage(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw UsageError(what + ": " + e.what());
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// RANGE is "START:STOP:STEP" or an explicit "a,b,c" list. Values are exact
// decimals; points run from START while <= STOP.
inline std::vector<std::int64_t> expand_range(const std::string& spec, bool integral) {
  auto parse = [&](const std::string& text) {
    return as_usage("range value '" + text + "'", [&] {
      const auto v = lcoai::detail::parse_micros(text);
      if (integral && v % kMicrosPerUnit != 0) throw InvalidArgument("expected an integer");
      return integral ? v / kMicrosPerUnit : v;
    });
  };
  if (spec.find(':') == std::string::npos) {
    std::vector<std::int64_t> out;
    for (const auto& p : split(spec, ',')) out.push_back(parse(p));
    return out;
  }
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw UsageError("range must be START:STOP:STEP, got '" + spec + "'");
  const auto start = parse(parts[0]), stop = parse(parts[1]), step = parse(parts[2]);
  if (step <= 0) throw UsageError("range step must be positive");
  if (stop < start) throw UsageError("range stop precedes start");
  std::vector<std::int64_t> out;
  for (auto v = start; v <= stop; v += step) {
    out.push_back(v);
    if (v > stop - step) break;
  }
  return out;
}

inline SweepSpec sweep_spec(SweepParameter p, const std::string& range) {
  const auto values = expand_range(range, p == SweepParameter::volume);
  return as_usage("sweep points", [&] {
    switch (p) {
      case SweepParameter::volume: {
        std::vector<std::uint64_t> v;
        for (auto x : values) {
          if (x < 0) throw InvalidArgument("volume points must be non-negative");
          v.push_back(static_cast<std::uint64_t>(x));
        }
        return SweepSpec::volume(v);
      }
      case SweepParameter::opex_rate: {
        std::vector<PerInferenceRate> v;
        for (auto x : values) v.push_back(PerInferenceRate::from_micros(x));
        return SweepSpec::opex_rate(v);
      }
      case SweepParameter::capex_multiplier: {
        std::vector<Ratio> v;
        for (auto x : values) v.emplace_back(x, kMicrosPerUnit);
        return SweepSpec::capex_multiplier(v);
      }
    }
    throw InvalidArgument("unknown sweep parameter");
  });
}

inline std::string sweep_value_cell(const SweepValue& v) {
  if (const auto* r = std::get_if<PerInferenceRate>(&v)) return format_rate_plain(*r);
  return to_string(v);
}

inline ReportTable key_values(std::vector<std::pair<std::string, std::string>> rows) {
  ReportTable t({"Field", "Value"});
  for (auto& [k, v] : rows) t.add_row({std::move(k), std::move(v)});
  return t;
}

inline Money usd_arg(const std::string& flag, const std::string& text) {
  return as_usage(flag, [&] { return Money::parse(text); });
}

inline PerInferenceRate rate_arg(const std::string& flag, const std::string& text) {
  return as_usage(flag, [&] { return PerInferenceRate::parse(text); });
}

}  // namespace detail

struct Options {
  std::optional<std::string> format;
  bool strict = false;
};

inline TableFormat table_format(const Options& o, TableFormat fallback = TableFormat::markdown) {
  if (!o.format) return fallback;
  return parse_table_format(*o.format);
}

inline int cmd_compute(const Options& o, const std::string& file, const std::string& name, std::ostream& out,
                       std::ostream& err) {
  const auto scenarios = load_scenarios(file);
  const auto& s = find_scenario(scenarios, name);
  const auto r = compute_lcoai(s);
  if (r.short_horizon_discount) {
    err << "warning: discounting applied to a horizon of " << s.horizon().span_months()
        << " months; horizons of 24 months or less are normally left undiscounted\n";
  }
  const auto fmt = table_format(o);
  std::vector<std::pair<std::string, std::string>> rows{
      {"Scenario", r.scenario_name},
      {"Total CAPEX charged (USD)", format_usd(r.total_capex_charged)},
      {"Total OPEX (USD)", format_usd(r.total_opex)},
      {"Valid inferences", format_count(r.total_inferences)},
      {"LCOAI per inference (USD)", format_rate(r.per_inference)},
      {"LCOAI ($/1,000 Inferences)", format_usd(r.per_thousand)},
      {"Discounted", r.discounted ? "yes" : "no"}};
  out << detail::key_values(std::move(rows)).render(fmt);
  if (fmt == TableFormat::markdown) out << "\nLCOAI: " << format_usd(r.per_thousand) << " per 1,000 inferences\n";
  return kOk;
}

inline int cmd_table(const Options& o, const std::string& file, std::ostream& out) {
  const auto scenarios = load_scenarios(file);
  out << comparison_table(compare(scenarios)).render(table_format(o));
  return kOk;
}

inline int cmd_sweep(const Options& o, const std::string& file, const std::string& name, const std::string& param,
                     const std::string& range, std::ostream& out) {
  const auto parameter = detail::as_usage("parameter", [&] { return parse_sweep_parameter(param); });
  const auto spec = detail::sweep_spec(parameter, range);
  const auto scenarios = load_scenarios(file);
  const auto result = sweep(find_scenario(scenarios, name), spec);
  ReportTable t({std::string(to_string(parameter)), "lcoai_per_1000_usd"});
  for (const auto& p : result.series) {
    t.add_row({detail::sweep_value_cell(p.value), p.per_thousand ? format_cents_plain(*p.per_thousand) : "NA"});
  }
  out << t.render(table_format(o, TableFormat::csv));
  return kOk;
}

inline int cmd_tornado(const Options& o, const std::string& file, const std::string& name, const std::string& swing,
                       const std::vector<std::string>& params, std::ostream& out) {
  const auto k = detail::as_usage("--swing", [&] { return Ratio::parse(swing); });
  std::set<TornadoParameter> set;
  for (const auto& p : params) {
    if (p == "capex") set.insert(TornadoParameter::capex);
    else if (p == "opex_rate") set.insert(TornadoParameter::opex_rate);
    else if (p == "fixed_opex") set.insert(TornadoParameter::fixed_opex);
    else if (p == "volume") set.insert(TornadoParameter::volume);
    else throw UsageError("unknown tornado parameter '" + p + "'");
  }
  const auto scenarios = load_scenarios(file);
  const auto bars = detail::as_usage("tornado", [&] { return tornado(find_scenario(scenarios, name), k, set); });
  ReportTable t({"Parameter", "Low ($/1,000)", "High ($/1,000)", "Spread ($/1,000)"});
  for (const auto& b : bars) {
    t.add_row({std::string(to_string(b.parameter)), format_usd(b.low), format_usd(b.high), format_usd(b.spread())});
  }
  out << t.render(table_format(o));
  return kOk;
}

inline int cmd_breakeven(const Options& o, const std::string& file, const std::string& a, const std::string& b,
                         std::uint64_t search_max, std::ostream& out) {
  const auto scenarios = load_scenarios(file);
  const auto r = break_even(find_scenario(scenarios, a), find_scenario(scenarios, b), search_max);
  const std::string crossover = r.crossover_volume ? format_count(*r.crossover_volume)
                                                   : (r.search_exhausted ? "none (search exhausted)" : "none");
  out << detail::key_values({{"Scenario A", r.scenario_a},
                             {"Scenario B", r.scenario_b},
                             {"Break-even volume (inferences)", crossover},
                             {"Cheaper below", r.cheaper_below},
                             {"Cheaper above", r.cheaper_above},
                             {"Method", r.analytic ? "closed form" : "bisection"}})
             .render(table_format(o));
  return kOk;
}

inline int cmd_finetune(const Options& o, const std::string& base, const std::string& tuned,
                        const std::string& capex, std::ostream& out) {
  const auto d = fine_tune_threshold(detail::rate_arg("--base", base), detail::rate_arg("--tuned", tuned),
                                     detail::usd_arg("--capex", capex));
  out << detail::key_values({{"Base rate (USD)", format_rate(d.base_rate)},
                             {"Tuned rate (USD)", format_rate(d.tuned_rate)},
                             {"Tuning CAPEX (USD)", format_usd(d.tuning_capex)},
                             {"Viable above (inferences)",
                              d.threshold_volume ? format_count(*d.threshold_volume) : "never"}})
             .render(table_format(o));
  return kOk;
}

inline int cmd_baseline(const Options& o, const std::string& file, const std::string& name,
                        const std::string& baseline, std::ostream& out) {
  const auto base = detail::usd_arg("--baseline", baseline);
  if (base < Money{}) throw UsageError("--baseline must be non-negative");
  const auto scenarios = load_scenarios(file);
  const auto c = baseline_savings(compute_lcoai(find_scenario(scenarios, name)), base);
  std::string ratio = "n/a";
  if (c.savings_ratio) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << c.savings_ratio->to_long_double() * 100 << "%";
    ratio = s.str();
  }
  out << detail::key_values({{"Baseline ($/1,000)", format_usd(c.baseline_cost_per_thousand)},
                             {"LCOAI ($/1,000)", format_usd(c.lcoai_per_thousand)},
                             {"Savings ($/1,000)", format_usd(c.savings_per_thousand)},
                             {"Savings ratio", ratio}})
             .render(table_format(o));
  return kOk;
}

inline int cmd_ingest(const Options& o, const std::string& log, const std::string& start, int periods,
                      int period_months, bool count_failed, std::ostream& out, std::ostream& err) {
  const auto t0 = parse_rfc3339(start);
  if (!t0) throw UsageError("--start: invalid RFC 3339 timestamp '" + start + "'");
  const auto horizon = detail::as_usage("horizon", [&] { return Horizon(periods, period_months); });
  std::ifstream in(log, std::ios::binary);
  if (!in) throw NotFound("cannot open log file '" + log + "'");
  const auto parsed = parse_log(in, o.strict ? ParseMode::strict : ParseMode::lenient);
  for (const auto& s : parsed.skipped) err << "skipped line " << s.line << ": " << s.reason << "\n";
  const auto c = count_valid(parsed.records, horizon, *t0, {count_failed});
  std::vector<std::pair<std::string, std::string>> rows{
      {"valid", std::to_string(c.valid)},
      {"excluded_nonproductive", std::to_string(c.excluded_nonproductive)},
      {"excluded_failed", std::to_string(c.excluded_failed)},
      {"out_of_range", std::to_string(c.out_of_range)},
      {"malformed_skipped", std::to_string(parsed.skipped.size())}};
  for (std::size_t i = 0; i < c.period_buckets.size(); ++i) {
    rows.emplace_back("period_" + std::to_string(i + 1), std::to_string(c.period_buckets[i]));
  }
  out << detail::key_values(std::move(rows)).render(table_format(o));
  return kOk;
}

// Entry point. args[0] is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Levelized cost of AI (LCOAI) toolkit", "lcoai"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format: markdown or csv")
      ->check(CLI::IsMember({"markdown", "md", "csv"}));
  app.add_flag("--strict", o.strict, "Abort on the first malformed log line");

  std::string file, name, name_b, param, range, base, tuned, capex, baseline, log, start, swing = "0.3";
  std::vector<std::string> tornado_params{"capex", "opex_rate", "fixed_opex", "volume"};
  std::uint64_t search_max = kDefaultSearchMax;
  int periods = 1, period_months = 12;
  bool count_failed = false;

  auto* compute = app.add_subcommand("compute", "Compute LCOAI for one scenario");
  compute->add_option("file", file, "Scenario file")->required();
  compute->add_option("scenario", name, "Scenario name")->required();

  auto* table = app.add_subcommand("table", "Comparison table of every scenario in a file");
  table->add_option("file", file, "Scenario file")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "LCOAI series over one varied parameter (CSV)");
  sweep_cmd->add_option("file", file, "Scenario file")->required();
  sweep_cmd->add_option("scenario", name, "Scenario name")->required();
  sweep_cmd->add_option("parameter", param, "volume | opex_rate | capex_multiplier")->required();
  sweep_cmd->add_option("range", range, "START:STOP:STEP or a,b,c")->required();

  auto* tornado_cmd = app.add_subcommand("tornado", "One-at-a-time +/- swing ranking");
  tornado_cmd->add_option("file", file, "Scenario file")->required();
  tornado_cmd->add_option("scenario", name, "Scenario name")->required();
  tornado_cmd->add_option("--swing", swing, "Fractional swing, default 0.3");
  tornado_cmd->add_option("--params", tornado_params, "capex,opex_rate,fixed_opex,volume")->delimiter(',');

  auto* breakeven = app.add_subcommand("breakeven", "Break-even inference volume between two scenarios");
  breakeven->add_option("file", file, "Scenario file")->required();
  breakeven->add_option("scenario_a", name, "First scenario")->required();
  breakeven->add_option("scenario_b", name_b, "Second scenario")->required();
  breakeven->add_option("--search-max", search_max, "Upper bound of the volume search");

  auto* finetune = app.add_subcommand("finetune", "Volume at which fine-tuning pays off");
  finetune->add_option("--base", base, "Base per-inference rate (USD)")->required();
  finetune->add_option("--tuned", tuned, "Tuned per-inference rate (USD)")->required();
  finetune->add_option("--capex", capex, "Tuning CAPEX (USD)")->required();

  auto* baseline_cmd = app.add_subcommand("baseline", "Savings versus a non-AI cost per 1,000");
  baseline_cmd->add_option("file", file, "Scenario file")->required();
  baseline_cmd->add_option("scenario", name, "Scenario name")->required();
  baseline_cmd->add_option("--baseline", baseline, "Baseline cost per 1,000 (USD)")->required();

  auto* ingest = app.add_subcommand("ingest", "Count valid inferences in a JSON-lines telemetry log");
  ingest->add_option("log", log, "Log file")->required();
  ingest->add_option("--start", start, "Horizon start (RFC 3339)")->required();
  ingest->add_option("--periods", periods, "Horizon periods");
  ingest->add_option("--period-months", period_months, "Months per period");
  ingest->add_flag("--count-failed", count_failed, "Count errored inferences as valid");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (compute->parsed()) return cmd_compute(o, file, name, out, err);
    if (table->parsed()) return cmd_table(o, file, out);
    if (sweep_cmd->parsed()) return cmd_sweep(o, file, name, param, range, out);
    if (tornado_cmd->parsed()) return cmd_tornado(o, file, name, swing, tornado_params, out);
    if (breakeven->parsed()) return cmd_breakeven(o, file, name, name_b, search_max, out);
    if (finetune->parsed()) return cmd_finetune(o, base, tuned, capex, out);
    if (baseline_cmd->parsed()) return cmd_baseline(o, file, name, baseline, out);
    if (ingest->parsed()) return cmd_ingest(o, log, start, periods, period_months, count_failed, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotFound& e) {
    err << "error: " << e.what() << "\n";
    return kNotFound;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const UndefinedMetric& e) {
    err << "error: " << e.what() << "\n";
    return kUndefined;
  } catch (const IncompatibleScenarios& e) {
    err << "error: " << e.what() << "\n";
    return kUndefined;
  } catch (const Overflow& e) {
    err << "error: " << e.what() << "\n";
    return kUndefined;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace lcoai::cli
