#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lcoai/cost.hpp"
#include "lcoai/money.hpp"
#include "lcoai/scenario.hpp"

namespace lcoai {

// One row of the comparison table.
struct ComparisonRow {
  std::string scenario_name;
  Money capex_total;
  PerInferenceRate opex_rate;
  std::uint64_t volume = 0;
  Money opex_total;
  Money per_thousand;
};

// Rows ascending by LCOAI per 1,000; ties by CAPEX, then name.
inline std::vector<ComparisonRow> compare(const std::vector<CostScenario>& scenarios) {
  std::set<std::string> seen;
  for (const auto& s : scenarios) {
    if (!seen.insert(s.name()).second) throw InvalidArgument("duplicate scenario name '" + s.name() + "'");
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    const auto r = compute_lcoai(s);
    rows.push_back({s.name(), s.capex_total(), s.opex().per_inference(), r.total_inferences, r.total_opex,
                    r.per_thousand});
  }
  std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    if (a.per_thousand != b.per_thousand) return a.per_thousand < b.per_thousand;
    if (a.capex_total != b.capex_total) return a.capex_total < b.capex_total;
    return a.scenario_name < b.scenario_name;
  });
  return rows;
}

struct BaselineComparison {
  Money baseline_cost_per_thousand;
  Money lcoai_per_thousand;
  Money savings_per_thousand;          // baseline - lcoai, may be negative
  std::optional<Ratio> savings_ratio;  // savings / baseline; empty for a zero baseline
};

inline BaselineComparison baseline_savings(Money lcoai_per_thousand, Money baseline_per_thousand) {
  if (baseline_per_thousand < Money{}) throw InvalidArgument("baseline cost must be non-negative");
  BaselineComparison c{baseline_per_thousand, lcoai_per_thousand, baseline_per_thousand - lcoai_per_thousand,
                       std::nullopt};
  if (baseline_per_thousand > Money{}) {
    c.savings_ratio = Ratio(c.savings_per_thousand.micros(), baseline_per_thousand.micros());
  }
  return c;
}

inline BaselineComparison baseline_savings(const LcoaiResult& lcoai, Money baseline_per_thousand) {
  return baseline_savings(lcoai.per_thousand, baseline_per_thousand);
}

struct FineTuneDecision {
  PerInferenceRate base_rate;
  PerInferenceRate tuned_rate;
  Money tuning_capex;
  std::optional<std::uint64_t> threshold_volume;  // empty: never pays off
};

// Smallest V with tuning_capex / V + tuned_rate < base_rate.
inline FineTuneDecision fine_tune_threshold(PerInferenceRate base_rate, PerInferenceRate tuned_rate,
                                            Money tuning_capex) {
  if (tuning_capex < Money{}) throw InvalidArgument("tuning CAPEX must be non-negative");
  FineTuneDecision d{base_rate, tuned_rate, tuning_capex, std::nullopt};
  if (tuned_rate >= base_rate) return d;
  const std::int64_t saving = base_rate.micros() - tuned_rate.micros();
  d.threshold_volume = static_cast<std::uint64_t>(tuning_capex.micros() / saving + 1);
  return d;
}

}  // namespace lcoai
