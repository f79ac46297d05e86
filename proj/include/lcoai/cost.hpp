#pragma once

// Levelized cost per valid inference:
//
//            CAPEX charged within the horizon + sum_t OPEX_t
//   LCOAI = -----------------------------------------------
//                      sum_t valid inferences_t
//
// Optional WACC discounting multiplies OPEX_t by 1/(1+r)^y_t. CAPEX is
// committed at commissioning (period 0) and keeps factor 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcoai/errors.hpp"
#include "lcoai/money.hpp"
#include "lcoai/scenario.hpp"

namespace lcoai {

namespace detail {

// Charge one item into `stream`. The charged portion is spread over the
// months of life that fall inside the horizon, floor-allocated per period
// with the leftover micro-dollars landing in the last charged period.
inline void amortize_item(const CapexItem& item, const Horizon& h, std::vector<Money>& stream) {
  const int span = h.span_months();
  const int life = item.asset_life().months_within(h);
  const int covered = std::min(life, span);
  const int len = h.period_length_months();

  const wide amount = item.amount().micros();
  const wide charged = life > span ? div_round(amount * span, life) : amount;
  if (charged == 0) return;

  wide allocated = 0;
  int last = 0;
  for (int p = 0; p < h.periods(); ++p) {
    const int months = std::clamp(covered - p * len, 0, len);
    if (months == 0) break;
    const wide part = charged * months / covered;
    stream[p] += Money::from_micros(narrow(part));
    allocated += part;
    last = p;
  }
  stream[last] += Money::from_micros(narrow(charged - allocated));
}

}  // namespace detail

// Per-period CAPEX charge over the horizon. Sum never exceeds the item total.
inline std::vector<Money> amortize_capex(std::span<const CapexItem> items, const Horizon& horizon) {
  std::vector<Money> stream(static_cast<std::size_t>(horizon.periods()));
  for (const auto& item : items) detail::amortize_item(item, horizon, stream);
  return stream;
}

// Present-value factor for the cash flow at the end of `period_index`
// (1-based; 0 is commissioning). y = period_index * period_length / 12 years.
inline long double discount_factor(const DiscountPolicy& policy, int period_index, int period_length_months = 12) {
  if (period_index < 0) throw InvalidArgument("period index must be non-negative");
  if (period_length_months <= 0) throw InvalidArgument("period length must be positive");
  if (!policy.is_effective() || period_index == 0) return 1.0L;
  const long double years = static_cast<long double>(period_index) * period_length_months / 12.0L;
  return std::pow(1.0L + policy.annual_rate().to_long_double(), -years);
}

// Numerator/denominator decomposition of one scenario, before division.
struct CostBreakdown {
  std::vector<Money> capex_stream;
  Money capex_charged;
  Money opex;  // present value when discounted
  std::uint64_t inferences = 0;
  long double effective_inferences = 0;  // discounted when the denominator is
  bool discounted = false;
  bool discounted_denominator = false;

  Money numerator() const { return capex_charged + opex; }
};

inline CostBreakdown evaluate(const CostScenario& s) {
  CostBreakdown b;
  const auto& h = s.horizon();
  const auto& policy = s.discount();
  b.capex_stream = amortize_capex(s.capex(), h);
  for (auto m : b.capex_stream) b.capex_charged += m;

  b.discounted = policy.is_effective();
  b.discounted_denominator = b.discounted && policy.discount_denominator();

  const auto& volume = s.volume().per_period();
  for (int t = 0; t < h.periods(); ++t) {
    const Money opex_t = s.opex().period_total(volume[t]);
    if (!b.discounted) {
      b.opex += opex_t;
      continue;
    }
    const long double f = discount_factor(policy, t + 1, h.period_length_months());
    b.opex += Money::from_micros(detail::narrow(static_cast<detail::wide>(std::roundl(opex_t.micros() * f))));
    if (b.discounted_denominator) b.effective_inferences += f * static_cast<long double>(volume[t]);
  }
  b.inferences = s.volume().total();
  if (!b.discounted_denominator) b.effective_inferences = static_cast<long double>(b.inferences);
  return b;
}

struct LcoaiResult {
  std::string scenario_name;
  Money total_capex_charged;
  Money total_opex;
  std::uint64_t total_inferences = 0;
  long double effective_inferences = 0;
  PerInferenceRate per_inference;
  Money per_thousand;  // per_inference * 1000, exact
  bool discounted = false;
  // Discounting was requested on a horizon of 24 months or less, where the
  // default convention omits it.
  bool short_horizon_discount = false;

  Money per_thousand_cents() const { return per_thousand.round_to_cents(); }
};

inline LcoaiResult compute_lcoai(const CostScenario& s) {
  const auto b = evaluate(s);
  if (b.inferences == 0) {
    throw UndefinedMetric("scenario '" + s.name() + "' has zero valid inferences; LCOAI is undefined");
  }
  LcoaiResult r;
  r.scenario_name = s.name();
  r.total_capex_charged = b.capex_charged;
  r.total_opex = b.opex;
  r.total_inferences = b.inferences;
  r.effective_inferences = b.effective_inferences;
  r.discounted = b.discounted;
  r.short_horizon_discount = b.discounted && s.horizon().span_months() <= 24;
  if (b.discounted_denominator) {
    if (!(b.effective_inferences > 0)) throw UndefinedMetric("scenario '" + s.name() + "' has no discounted volume");
    const long double rate = std::roundl(static_cast<long double>(b.numerator().micros()) / b.effective_inferences);
    r.per_inference = PerInferenceRate::from_micros(detail::narrow(static_cast<detail::wide>(rate)));
  } else {
    r.per_inference = b.numerator().per(b.inferences);
  }
  r.per_thousand = r.per_inference.per_thousand();
  return r;
}

}  // namespace lcoai
