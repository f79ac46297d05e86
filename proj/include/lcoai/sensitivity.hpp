#pragma once

// One-at-a-time sensitivity sweeps, tornado ranking and break-even volumes
// between two deployment alternatives.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lcoai/cost.hpp"
#include "lcoai/errors.hpp"
#include "lcoai/money.hpp"
#include "lcoai/scenario.hpp"

namespace lcoai {

enum class SweepParameter { volume, opex_rate, capex_multiplier };

inline std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::volume: return "volume";
    case SweepParameter::opex_rate: return "opex_rate";
    case SweepParameter::capex_multiplier: return "capex_multiplier";
  }
  return "?";
}

inline SweepParameter parse_sweep_parameter(std::string_view s) {
  if (s == "volume") return SweepParameter::volume;
  if (s == "opex_rate" || s == "opex") return SweepParameter::opex_rate;
  if (s == "capex_multiplier" || s == "capex") return SweepParameter::capex_multiplier;
  throw InvalidArgument("unknown sweep parameter '" + std::string(s) + "'");
}

// Value of the varied parameter at one sweep point: a total inference
// volume, a per-inference OPEX rate, or a multiplier applied to every CAPEX item.
using SweepValue = std::variant<std::uint64_t, PerInferenceRate, Ratio>;

inline std::string to_string(const SweepValue& v) {
  struct {
    std::string operator()(std::uint64_t n) const { return std::to_string(n); }
    std::string operator()(const PerInferenceRate& r) const { return r.to_decimal_string(); }
    std::string operator()(const Ratio& k) const { return k.to_decimal_string(); }
  } visitor;
  return std::visit(visitor, v);
}

class SweepSpec {
 public:
  static SweepSpec volume(const std::vector<std::uint64_t>& points) {
    return SweepSpec(SweepParameter::volume, {points.begin(), points.end()});
  }
  static SweepSpec opex_rate(const std::vector<PerInferenceRate>& points) {
    return SweepSpec(SweepParameter::opex_rate, {points.begin(), points.end()});
  }
  static SweepSpec capex_multiplier(const std::vector<Ratio>& points) {
    for (const auto& k : points) {
      if (k <= Ratio{}) throw InvalidArgument("CAPEX multipliers must be positive");
    }
    return SweepSpec(SweepParameter::capex_multiplier, {points.begin(), points.end()});
  }

  SweepParameter parameter() const noexcept { return parameter_; }
  const std::vector<SweepValue>& points() const noexcept { return points_; }

 private:
  SweepSpec(SweepParameter p, std::vector<SweepValue> points) : parameter_(p), points_(std::move(points)) {
    if (points_.empty()) throw InvalidArgument("sweep needs at least one point");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (!(points_[i - 1] < points_[i])) throw InvalidArgument("sweep points must be strictly increasing");
    }
  }

  SweepParameter parameter_;
  std::vector<SweepValue> points_;
};

struct SweepPoint {
  SweepValue value;
  std::optional<Money> per_thousand;  // empty when the metric is undefined (zero volume)
};

struct SweepResult {
  std::string scenario_name;
  SweepParameter parameter;
  std::vector<SweepPoint> series;
};

// The scenario with one parameter replaced; `base` is untouched.
inline CostScenario apply_sweep_value(const CostScenario& base, const SweepValue& value) {
  if (const auto* v = std::get_if<std::uint64_t>(&value)) return base.with_volume_total(*v);
  if (const auto* r = std::get_if<PerInferenceRate>(&value)) {
    return base.with_opex(OpexModel(*r, base.opex().fixed_per_period()));
  }
  return base.with_capex_scaled(std::get<Ratio>(value));
}

inline SweepResult sweep(const CostScenario& scenario, const SweepSpec& spec) {
  SweepResult out{scenario.name(), spec.parameter(), {}};
  out.series.reserve(spec.points().size());
  for (const auto& value : spec.points()) {
    const auto derived = apply_sweep_value(scenario, value);
    if (derived.volume().total() == 0) {
      out.series.push_back({value, std::nullopt});
      continue;
    }
    out.series.push_back({value, compute_lcoai(derived).per_thousand});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tornado

enum class TornadoParameter { capex, opex_rate, fixed_opex, volume };

inline std::string_view to_string(TornadoParameter p) {
  switch (p) {
    case TornadoParameter::capex: return "capex";
    case TornadoParameter::opex_rate: return "opex_rate";
    case TornadoParameter::fixed_opex: return "fixed_opex";
    case TornadoParameter::volume: return "volume";
  }
  return "?";
}

struct TornadoBar {
  TornadoParameter parameter;
  Money low;   // LCOAI per 1,000 at (1 - swing) x baseline
  Money high;  // LCOAI per 1,000 at (1 + swing) x baseline

  Money spread() const { return high > low ? high - low : low - high; }
};

namespace detail {

inline CostScenario scale_parameter(const CostScenario& s, TornadoParameter p, const Ratio& k) {
  switch (p) {
    case TornadoParameter::capex: return s.with_capex_scaled(k);
    case TornadoParameter::opex_rate:
      return s.with_opex(OpexModel(s.opex().per_inference().scaled(k), s.opex().fixed_per_period()));
    case TornadoParameter::fixed_opex:
      return s.with_opex(OpexModel(s.opex().per_inference(), s.opex().fixed_per_period().scaled(k)));
    case TornadoParameter::volume: {
      const auto v = div_round(static_cast<wide>(s.volume().total()) * k.num(), k.den());
      return s.with_volume_total(static_cast<std::uint64_t>(v));
    }
  }
  return s;
}

}  // namespace detail

// Bars ordered by descending spread; ties keep enum order.
inline std::vector<TornadoBar> tornado(const CostScenario& scenario, const Ratio& swing,
                                       const std::set<TornadoParameter>& parameters) {
  if (swing <= Ratio{} || swing >= Ratio::integer(1)) throw InvalidArgument("tornado swing must lie in (0, 1)");
  const Ratio down(swing.den() - swing.num(), swing.den());
  const Ratio up(swing.den() + swing.num(), swing.den());
  std::vector<TornadoBar> bars;
  for (auto p : parameters) {
    bars.push_back({p, compute_lcoai(detail::scale_parameter(scenario, p, down)).per_thousand,
                    compute_lcoai(detail::scale_parameter(scenario, p, up)).per_thousand});
  }
  std::stable_sort(bars.begin(), bars.end(), [](const auto& a, const auto& b) { return a.spread() > b.spread(); });
  return bars;
}

// ---------------------------------------------------------------------------
// Break-even

inline constexpr std::uint64_t kDefaultSearchMax = 1'000'000'000;

struct BreakEvenResult {
  std::string scenario_a;
  std::string scenario_b;
  std::optional<std::uint64_t> crossover_volume;  // empty: no crossing
  std::string cheaper_below;
  std::string cheaper_above;
  // No crossing found up to search_max, but one may exist beyond it.
  bool search_exhausted = false;
  bool analytic = false;
};

// Single period, no effective discounting, no fixed OPEX: total cost is
// affine in volume and the crossing has a closed form.
inline bool in_analytic_regime(const CostScenario& s) {
  return s.horizon().periods() == 1 && !s.discount().is_effective() && s.opex().fixed_per_period() == Money{};
}

namespace detail {

inline void check_comparable(const CostScenario& a, const CostScenario& b, std::uint64_t search_max) {
  if (search_max == 0) throw InvalidArgument("break-even search_max must be positive");
  if (a.horizon() != b.horizon()) {
    throw IncompatibleScenarios("scenarios '" + a.name() + "' and '" + b.name() + "' have different horizons");
  }
}

inline Money charged_capex(const CostScenario& s) {
  Money total;
  for (auto m : amortize_capex(s.capex(), s.horizon())) total += m;
  return total;
}

inline BreakEvenResult no_crossing(const CostScenario& a, const CostScenario& b, const std::string& dominant,
                                   bool exhausted, bool analytic) {
  return {a.name(), b.name(), std::nullopt, dominant, dominant, exhausted, analytic};
}

// Sign of LCOAI(a) - LCOAI(b) with both scenarios rescaled to `volume`, plus
// the per-inference gap in micro-dollars.
struct Comparison {
  int sign;
  long double gap;
};

inline Comparison compare_at(const CostScenario& a, const CostScenario& b, std::uint64_t volume) {
  const auto ea = evaluate(a.with_volume_total(volume));
  const auto eb = evaluate(b.with_volume_total(volume));
  const long double per_a = static_cast<long double>(ea.numerator().micros()) / ea.effective_inferences;
  const long double per_b = static_cast<long double>(eb.numerator().micros()) / eb.effective_inferences;
  if (!ea.discounted_denominator && !eb.discounted_denominator) {
    // Equal integer denominators: compare numerators exactly.
    const auto na = ea.numerator(), nb = eb.numerator();
    return {na < nb ? -1 : (na > nb ? 1 : 0), per_a - per_b};
  }
  const long double lhs = static_cast<long double>(ea.numerator().micros()) * eb.effective_inferences;
  const long double rhs = static_cast<long double>(eb.numerator().micros()) * ea.effective_inferences;
  return {lhs < rhs ? -1 : (lhs > rhs ? 1 : 0), per_a - per_b};
}

}  // namespace detail

// Crossing by monotone bisection over [1, search_max]. Works for any pair of
// scenarios on the same horizon; volumes are rescaled proportionally.
inline BreakEvenResult break_even_bisection(const CostScenario& a, const CostScenario& b,
                                            std::uint64_t search_max = kDefaultSearchMax) {
  detail::check_comparable(a, b, search_max);
  const auto at_one = detail::compare_at(a, b, 1);
  bool a_is_low;
  if (at_one.sign != 0) {
    a_is_low = at_one.sign < 0;
  } else {
    a_is_low = detail::charged_capex(a) <= detail::charged_capex(b);
  }
  const CostScenario& low = a_is_low ? a : b;
  const CostScenario& other = a_is_low ? b : a;

  auto other_cheaper = [&](std::uint64_t v) { return detail::compare_at(other, low, v).sign < 0; };

  if (!other_cheaper(search_max)) {
    // Flag an unfinished search when the total-cost gap is still closing.
    const std::uint64_t mid = std::max<std::uint64_t>(1, search_max / 2);
    const long double gap_end = detail::compare_at(other, low, search_max).gap * search_max;
    const long double gap_mid = detail::compare_at(other, low, mid).gap * mid;
    const bool closing = search_max > 1 && gap_end < gap_mid - 1e-9L * std::fabs(gap_mid) - 1.0L;
    return detail::no_crossing(a, b, low.name(), closing, false);
  }
  std::uint64_t lo = 1, hi = search_max;  // pred(lo) false, pred(hi) true
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (other_cheaper(mid) ? hi : lo) = mid;
  }
  return {a.name(), b.name(), hi, low.name(), other.name(), false, false};
}

// Smallest integer volume at which the higher-CAPEX scenario is strictly
// cheaper. Closed form inside the analytic regime, bisection otherwise.
inline BreakEvenResult break_even(const CostScenario& a, const CostScenario& b,
                                  std::uint64_t search_max = kDefaultSearchMax) {
  detail::check_comparable(a, b, search_max);
  if (!in_analytic_regime(a) || !in_analytic_regime(b)) return break_even_bisection(a, b, search_max);

  const auto ca = detail::charged_capex(a).micros();
  const auto cb = detail::charged_capex(b).micros();
  const auto ra = a.opex().per_inference().micros();
  const auto rb = b.opex().per_inference().micros();

  if (ca == cb) {
    // Same fixed cost: the lower rate wins everywhere (identical curves name a).
    return detail::no_crossing(a, b, rb < ra ? b.name() : a.name(), false, true);
  }
  const bool a_high = ca > cb;
  const CostScenario& high = a_high ? a : b;
  const CostScenario& low = a_high ? b : a;
  const auto c_gap = static_cast<detail::wide>(a_high ? ca - cb : cb - ca);
  const auto r_high = a_high ? ra : rb;
  const auto r_low = a_high ? rb : ra;
  if (r_high >= r_low) return detail::no_crossing(a, b, low.name(), false, true);

  // high cheaper  <=>  c_gap < (r_low - r_high) * V
  const auto crossing = detail::div_floor(c_gap, r_low - r_high) + 1;
  if (crossing == 1) return detail::no_crossing(a, b, high.name(), false, true);
  if (crossing > static_cast<detail::wide>(search_max)) return detail::no_crossing(a, b, low.name(), true, true);
  return {a.name(), b.name(), static_cast<std::uint64_t>(crossing), low.name(), high.name(), false, true};
}

}  // namespace lcoai
