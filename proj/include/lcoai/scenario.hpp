#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcoai/errors.hpp"
#include "lcoai/money.hpp"

namespace lcoai {

// Analysis span: `periods` uniform periods of `period_length_months` each.
class Horizon {
 public:
  explicit Horizon(int periods = 1, int period_length_months = 12)
      : periods_(periods), period_length_months_(period_length_months) {
    if (periods <= 0) throw InvalidArgument("invalid horizon: period count must be positive");
    if (period_length_months <= 0) throw InvalidArgument("invalid horizon: period length must be positive");
  }

  int periods() const noexcept { return periods_; }
  int period_length_months() const noexcept { return period_length_months_; }
  int span_months() const noexcept { return periods_ * period_length_months_; }

  friend bool operator==(const Horizon&, const Horizon&) = default;

 private:
  int periods_;
  int period_length_months_;
};

// Useful life of a capital item: a month count, or the whole analysis horizon.
class AssetLife {
 public:
  static AssetLife horizon() { return AssetLife(std::nullopt); }
  static AssetLife months(int m) {
    if (m <= 0) throw InvalidArgument("asset life must be a positive month count");
    return AssetLife(m);
  }

  bool is_horizon() const noexcept { return !months_; }
  // Months of life; the horizon span when is_horizon().
  int months_within(const Horizon& h) const noexcept { return months_ ? *months_ : h.span_months(); }
  std::optional<int> months() const noexcept { return months_; }

  friend bool operator==(const AssetLife&, const AssetLife&) = default;

 private:
  explicit AssetLife(std::optional<int> m) : months_(m) {}
  std::optional<int> months_;
};

class CapexItem {
 public:
  CapexItem(std::string label, Money amount, AssetLife life = AssetLife::horizon())
      : label_(std::move(label)), amount_(amount), life_(life) {
    if (amount < Money{}) throw InvalidArgument("CAPEX item '" + label_ + "' has a negative amount");
  }

  const std::string& label() const noexcept { return label_; }
  Money amount() const noexcept { return amount_; }
  const AssetLife& asset_life() const noexcept { return life_; }

  CapexItem scaled(const Ratio& k) const { return CapexItem(label_, amount_.scaled(k), life_); }

  friend bool operator==(const CapexItem&, const CapexItem&) = default;

 private:
  std::string label_;
  Money amount_;
  AssetLife life_;
};

// Recurring cost: a per-inference charge plus an optional fixed charge per period.
class OpexModel {
 public:
  explicit OpexModel(PerInferenceRate per_inference = {}, Money fixed_per_period = {})
      : per_inference_(per_inference), fixed_per_period_(fixed_per_period) {
    if (fixed_per_period < Money{}) throw InvalidArgument("fixed OPEX per period must be non-negative");
  }

  PerInferenceRate per_inference() const noexcept { return per_inference_; }
  Money fixed_per_period() const noexcept { return fixed_per_period_; }

  Money period_total(std::uint64_t period_inferences) const {
    return fixed_per_period_ + per_inference_.times(period_inferences);
  }

  friend bool operator==(const OpexModel&, const OpexModel&) = default;

 private:
  PerInferenceRate per_inference_;
  Money fixed_per_period_;
};

class VolumeProjection {
 public:
  VolumeProjection() = default;
  explicit VolumeProjection(std::vector<std::uint64_t> per_period) : per_period_(std::move(per_period)) {
    std::uint64_t total = 0;
    for (auto v : per_period_) {
      if (__builtin_add_overflow(total, v, &total)) throw Overflow("inference volume total out of range");
    }
    total_ = total;
  }
  static VolumeProjection single(std::uint64_t annual) { return VolumeProjection({annual}); }

  const std::vector<std::uint64_t>& per_period() const noexcept { return per_period_; }
  std::size_t size() const noexcept { return per_period_.size(); }
  std::uint64_t total() const noexcept { return total_; }

  // Same shape, new total. Shares follow the current projection; the
  // largest-remainder method keeps the total exact. A zero projection is
  // spread uniformly.
  VolumeProjection rescaled_to(std::uint64_t new_total) const {
    const std::size_t n = per_period_.size();
    if (n == 0) throw InvalidArgument("cannot rescale an empty volume projection");
    std::vector<std::uint64_t> out(n);
    std::vector<std::pair<detail::wide, std::size_t>> remainders;
    remainders.reserve(n);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const detail::wide weight = total_ == 0 ? 1 : per_period_[i];
      const detail::wide denom = total_ == 0 ? static_cast<detail::wide>(n) : total_;
      const detail::wide share = static_cast<detail::wide>(new_total) * weight;
      out[i] = static_cast<std::uint64_t>(share / denom);
      assigned += out[i];
      remainders.emplace_back(share % denom, i);
    }
    // Larger remainders first; earlier periods win ties.
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < new_total; ++k, ++assigned) ++out[remainders[k].second];
    return VolumeProjection(std::move(out));
  }

  friend bool operator==(const VolumeProjection&, const VolumeProjection&) = default;

 private:
  std::vector<std::uint64_t> per_period_;
  std::uint64_t total_ = 0;
};

enum class DiscountMode { none, wacc };

class DiscountPolicy {
 public:
  DiscountPolicy() = default;
  static DiscountPolicy none() { return {}; }
  static DiscountPolicy wacc(Ratio annual_rate, bool discount_denominator = false) {
    if (annual_rate < Ratio{} || annual_rate >= Ratio::integer(1)) {
      throw InvalidArgument("WACC annual rate must lie in [0, 1)");
    }
    DiscountPolicy p;
    p.mode_ = DiscountMode::wacc;
    p.annual_rate_ = annual_rate;
    p.discount_denominator_ = discount_denominator;
    return p;
  }

  DiscountMode mode() const noexcept { return mode_; }
  Ratio annual_rate() const noexcept { return annual_rate_; }
  bool discount_denominator() const noexcept { return discount_denominator_; }
  // True when cash flows actually change; a 0% WACC behaves like none.
  bool is_effective() const noexcept { return mode_ == DiscountMode::wacc && annual_rate_ != Ratio{}; }

  friend bool operator==(const DiscountPolicy&, const DiscountPolicy&) = default;

 private:
  DiscountMode mode_ = DiscountMode::none;
  Ratio annual_rate_;
  bool discount_denominator_ = false;
};

// A named deployment alternative. Zero total volume is allowed here and
// rejected when the metric is computed.
class CostScenario {
 public:
  CostScenario(std::string name, std::vector<CapexItem> capex, OpexModel opex, VolumeProjection volume,
               Horizon horizon = Horizon{}, DiscountPolicy discount = DiscountPolicy::none())
      : name_(std::move(name)),
        capex_(std::move(capex)),
        opex_(opex),
        volume_(std::move(volume)),
        horizon_(horizon),
        discount_(discount) {
    if (name_.empty()) throw InvalidArgument("scenario name must be non-empty");
    if (volume_.size() != static_cast<std::size_t>(horizon_.periods())) {
      throw InvalidArgument("scenario '" + name_ + "': volume projection has " + std::to_string(volume_.size()) +
                            " entries but the horizon has " + std::to_string(horizon_.periods()) + " periods");
    }
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<CapexItem>& capex() const noexcept { return capex_; }
  const OpexModel& opex() const noexcept { return opex_; }
  const VolumeProjection& volume() const noexcept { return volume_; }
  const Horizon& horizon() const noexcept { return horizon_; }
  const DiscountPolicy& discount() const noexcept { return discount_; }

  Money capex_total() const {
    return std::accumulate(capex_.begin(), capex_.end(), Money{},
                           [](Money acc, const CapexItem& c) { return acc + c.amount(); });
  }

  CostScenario with_name(std::string name) const {
    auto s = *this;
    if (name.empty()) throw InvalidArgument("scenario name must be non-empty");
    s.name_ = std::move(name);
    return s;
  }
  CostScenario with_volume_total(std::uint64_t total) const {
    auto s = *this;
    s.volume_ = volume_.rescaled_to(total);
    return s;
  }
  CostScenario with_opex(OpexModel opex) const {
    auto s = *this;
    s.opex_ = opex;
    return s;
  }
  CostScenario with_capex(std::vector<CapexItem> capex) const {
    auto s = *this;
    s.capex_ = std::move(capex);
    return s;
  }
  CostScenario with_capex_scaled(const Ratio& k) const {
    std::vector<CapexItem> items;
    items.reserve(capex_.size());
    for (const auto& c : capex_) items.push_back(c.scaled(k));
    return with_capex(std::move(items));
  }

  friend bool operator==(const CostScenario&, const CostScenario&) = default;

 private:
  std::string name_;
  std::vector<CapexItem> capex_;
  OpexModel opex_;
  VolumeProjection volume_;
  Horizon horizon_;
  DiscountPolicy discount_;
};

}  // namespace lcoai
