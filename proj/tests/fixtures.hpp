#pragma once

// The three reference deployments: one year, 10M valid inferences, no
// discounting.

#include <string>

#include "lcoai/scenario.hpp"

namespace fixtures {

inline lcoai::CostScenario simple(const std::string& name, const char* capex_usd, const char* rate_usd,
                                  std::uint64_t volume = 10'000'000) {
  using namespace lcoai;
  return CostScenario(name, {CapexItem("capex", Money::parse(capex_usd))},
                      OpexModel(PerInferenceRate::parse(rate_usd)), VolumeProjection::single(volume));
}

inline lcoai::CostScenario gpt41() { return simple("OpenAI GPT-4.1 (API-based)", "50000", "0.01"); }
inline lcoai::CostScenario claude_haiku() { return simple("Claude Haiku (API-based)", "50000", "0.0048"); }
inline lcoai::CostScenario llama() { return simple("LLaMA-2-13B (Self-hosted)", "200000", "0.0048"); }
// Only the $5.75 per 1,000 total is reported for this vendor; the split
// below is a calibration that reproduces it.
inline lcoai::CostScenario gemini_flash() { return simple("Gemini Flash (API-based, calibrated)", "50000", "0.00075"); }

inline std::string source_path(const std::string& relative) { return std::string(LCOAI_SOURCE_DIR) + "/" + relative; }

}  // namespace fixtures
