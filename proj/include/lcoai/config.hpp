#pragma once

// Scenario files (JSON, schema version 1). Money is always a decimal string
// in USD so that "0.0048" parses to exactly 4,800 micro-dollars.
//
// {"version": 1,
//  "scenarios": [{
//    "name": "...",
//    "capex": [{"label": "...", "amount_usd": "50000", "asset_life_months": "horizon" | 36}],
//    "opex": {"per_inference_usd": "0.0048", "fixed_per_period_usd": "0"},
//    "volume": {"per_period": [10000000]},
//    "horizon": {"periods": 1, "period_length_months": 12},
//    "discount": {"mode": "none" | "wacc", "annual_rate": "0.08", "discount_denominator": false}}]}

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lcoai/errors.hpp"
#include "lcoai/money.hpp"
#include "lcoai/scenario.hpp"

namespace lcoai {

inline constexpr int kScenarioFileVersion = 1;

namespace detail {

using nlohmann::json;

class ScenarioReader {
 public:
  std::vector<CostScenario> read_file(const json& root) {
    require_object(root, "");
    only_keys(root, "", {"version", "scenarios"});
    const auto& version = at(root, "", "version");
    if (!version.is_number_integer()) fail("version", "must be an integer");
    if (version.get<long long>() != kScenarioFileVersion) {
      fail("version", "unsupported scenario file version " + version.dump());
    }
    const auto& list = at(root, "", "scenarios");
    if (!list.is_array()) fail("scenarios", "must be an array");
    std::vector<CostScenario> out;
    std::set<std::string> names;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "scenarios[" + std::to_string(i) + "]";
      out.push_back(read_scenario(list[i], path));
      if (!names.insert(out.back().name()).second) {
        fail(path + ".name", "duplicate scenario name '" + out.back().name() + "'");
      }
    }
    return out;
  }

 private:
  [[noreturn]] static void fail(const std::string& path, const std::string& what) { throw ParseError(path, what); }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  static void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object");
  }

  static void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, _] : j.items()) {
      bool known = false;
      for (auto k : keys) known = known || k == key;
      if (!known) fail(join(path, key), "unknown field");
    }
  }

  static const json& at(const json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(join(path, key), "required field missing");
    return *it;
  }

  static std::string string_field(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "must be a string");
    return j.get<std::string>();
  }

  static std::int64_t micros_field(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "must be a decimal string, e.g. \"0.0048\"");
    try {
      return parse_micros(j.get<std::string>());
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }

  static int positive_int(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() <= 0 || j.get<long long>() > 1'000'000) {
      fail(path, "must be a positive integer");
    }
    return j.get<int>();
  }

  CostScenario read_scenario(const json& j, const std::string& path) {
    require_object(j, path);
    only_keys(j, path, {"name", "capex", "opex", "volume", "horizon", "discount"});
    const auto name = string_field(at(j, path, "name"), join(path, "name"));
    if (name.empty()) fail(join(path, "name"), "must be non-empty");

    std::vector<CapexItem> capex;
    if (const auto it = j.find("capex"); it != j.end()) {
      if (!it->is_array()) fail(join(path, "capex"), "must be an array");
      for (std::size_t i = 0; i < it->size(); ++i) {
        capex.push_back(read_capex((*it)[i], join(path, "capex") + "[" + std::to_string(i) + "]"));
      }
    }

    const auto opex_path = join(path, "opex");
    const auto& opex_json = at(j, path, "opex");
    require_object(opex_json, opex_path);
    only_keys(opex_json, opex_path, {"per_inference_usd", "fixed_per_period_usd"});
    const auto rate_path = join(opex_path, "per_inference_usd");
    const auto rate = micros_field(at(opex_json, opex_path, "per_inference_usd"), rate_path);
    if (rate < 0) fail(rate_path, "must be non-negative");
    std::int64_t fixed = 0;
    if (const auto it = opex_json.find("fixed_per_period_usd"); it != opex_json.end()) {
      fixed = micros_field(*it, join(opex_path, "fixed_per_period_usd"));
      if (fixed < 0) fail(join(opex_path, "fixed_per_period_usd"), "must be non-negative");
    }

    const auto volume_path = join(path, "volume");
    const auto& volume_json = at(j, path, "volume");
    require_object(volume_json, volume_path);
    only_keys(volume_json, volume_path, {"per_period"});
    const auto& per_period = at(volume_json, volume_path, "per_period");
    const auto pp_path = join(volume_path, "per_period");
    if (!per_period.is_array()) fail(pp_path, "must be an array");
    std::vector<std::uint64_t> volumes;
    for (std::size_t i = 0; i < per_period.size(); ++i) {
      if (!per_period[i].is_number_unsigned()) {
        fail(pp_path + "[" + std::to_string(i) + "]", "must be a non-negative integer");
      }
      volumes.push_back(per_period[i].get<std::uint64_t>());
    }

    int periods = 1, length = 12;
    if (const auto it = j.find("horizon"); it != j.end()) {
      const auto hp = join(path, "horizon");
      require_object(*it, hp);
      only_keys(*it, hp, {"periods", "period_length_months"});
      if (it->contains("periods")) periods = positive_int((*it)["periods"], join(hp, "periods"));
      if (it->contains("period_length_months")) {
        length = positive_int((*it)["period_length_months"], join(hp, "period_length_months"));
      }
    }

    DiscountPolicy discount;
    if (const auto it = j.find("discount"); it != j.end()) discount = read_discount(*it, join(path, "discount"));

    try {
      return CostScenario(name, std::move(capex),
                          OpexModel(PerInferenceRate::from_micros(rate), Money::from_micros(fixed)),
                          VolumeProjection(std::move(volumes)), Horizon(periods, length), discount);
    } catch (const InvalidArgument& e) {
      fail(path, e.what());
    } catch (const Overflow& e) {
      fail(path, e.what());
    }
  }

  static CapexItem read_capex(const json& j, const std::string& path) {
    require_object(j, path);
    only_keys(j, path, {"label", "amount_usd", "asset_life_months"});
    const auto label = string_field(at(j, path, "label"), join(path, "label"));
    const auto amount = micros_field(at(j, path, "amount_usd"), join(path, "amount_usd"));
    if (amount < 0) fail(join(path, "amount_usd"), "must be non-negative");
    AssetLife life = AssetLife::horizon();
    if (const auto it = j.find("asset_life_months"); it != j.end()) {
      const auto lp = join(path, "asset_life_months");
      if (it->is_string()) {
        if (it->get<std::string>() != "horizon") fail(lp, "must be a positive integer or \"horizon\"");
      } else {
        life = AssetLife::months(positive_int(*it, lp));
      }
    }
    return CapexItem(label, Money::from_micros(amount), life);
  }

  static DiscountPolicy read_discount(const json& j, const std::string& path) {
    require_object(j, path);
    only_keys(j, path, {"mode", "annual_rate", "discount_denominator"});
    const auto mode = string_field(at(j, path, "mode"), join(path, "mode"));
    bool denominator = false;
    if (const auto it = j.find("discount_denominator"); it != j.end()) {
      if (!it->is_boolean()) fail(join(path, "discount_denominator"), "must be a boolean");
      denominator = it->get<bool>();
    }
    if (mode == "none") return DiscountPolicy::none();
    if (mode != "wacc") fail(join(path, "mode"), "must be \"none\" or \"wacc\"");
    const auto rp = join(path, "annual_rate");
    const auto rate = micros_field(at(j, path, "annual_rate"), rp);
    try {
      return DiscountPolicy::wacc(Ratio(rate, kMicrosPerUnit), denominator);
    } catch (const InvalidArgument& e) {
      fail(rp, e.what());
    }
  }
};

}  // namespace detail

inline std::vector<CostScenario> parse_scenarios(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", std::string("invalid JSON: ") + e.what());
  }
  return detail::ScenarioReader{}.read_file(root);
}

inline std::vector<CostScenario> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenarios(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + (e.where().empty() ? "" : ": " + e.where()), e.message());
  }
}

// Canonical JSON for a scenario list; every field is written explicitly.
inline nlohmann::ordered_json scenarios_to_json(const std::vector<CostScenario>& scenarios) {
  using json = nlohmann::ordered_json;
  json list = json::array();
  for (const auto& s : scenarios) {
    json capex = json::array();
    for (const auto& c : s.capex()) {
      json life = c.asset_life().is_horizon() ? json("horizon") : json(*c.asset_life().months());
      capex.push_back({{"label", c.label()}, {"amount_usd", c.amount().to_decimal_string()},
                       {"asset_life_months", life}});
    }
    json discount = {{"mode", s.discount().mode() == DiscountMode::wacc ? "wacc" : "none"}};
    if (s.discount().mode() == DiscountMode::wacc) {
      discount["annual_rate"] = s.discount().annual_rate().to_decimal_string();
      discount["discount_denominator"] = s.discount().discount_denominator();
    }
    list.push_back({{"name", s.name()},
                    {"capex", capex},
                    {"opex",
                     {{"per_inference_usd", s.opex().per_inference().to_decimal_string()},
                      {"fixed_per_period_usd", s.opex().fixed_per_period().to_decimal_string()}}},
                    {"volume", {{"per_period", s.volume().per_period()}}},
                    {"horizon",
                     {{"periods", s.horizon().periods()},
                      {"period_length_months", s.horizon().period_length_months()}}},
                    {"discount", discount}});
  }
  return {{"version", kScenarioFileVersion}, {"scenarios", list}};
}

inline std::string serialize_scenarios(const std::vector<CostScenario>& scenarios) {
  return scenarios_to_json(scenarios).dump(2) + "\n";
}

}  // namespace lcoai
