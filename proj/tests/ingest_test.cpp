#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "lcoai/ingest.hpp"

using namespace lcoai;

namespace {

UtcInstant at(const char* ts) { return parse_rfc3339(ts).value(); }

std::string line(const std::string& ts, const std::string& kind, const std::string& status) {
  return R"({"ts":")" + ts + R"(","kind":")" + kind + R"(","status":")" + status + "\"}\n";
}

}  // namespace

TEST(Rfc3339Test, ParsesOffsetsAndFractions) {
  EXPECT_EQ(at("2025-01-01T01:00:00+01:00"), at("2025-01-01T00:00:00Z"));
  EXPECT_EQ(at("2024-12-31T19:00:00-05:00"), at("2025-01-01T00:00:00Z"));
  EXPECT_EQ(at("2025-01-01T00:00:00.5Z") - at("2025-01-01T00:00:00Z"), std::chrono::milliseconds(500));
  EXPECT_EQ(at("2025-01-01t00:00:00z"), at("2025-01-01T00:00:00Z"));
  EXPECT_EQ(at("2024-02-29T00:00:00Z") + std::chrono::hours(24), at("2024-03-01T00:00:00Z"));
}

TEST(Rfc3339Test, RejectsInvalid) {
  for (const char* bad : {"2025-01-01", "2025-01-01T00:00:00", "2025-13-01T00:00:00Z", "2025-02-30T00:00:00Z",
                          "2025-01-01T24:00:00Z", "2025-01-01T00:00:00+1:00", "2025-01-01T00:00:00Zjunk",
                          "2025-01-01T00:00:00.Z", "yesterday"}) {
    EXPECT_FALSE(parse_rfc3339(bad).has_value()) << bad;
  }
}

TEST(ParseLogTest, EmptyInput) {
  EXPECT_TRUE(parse_log("").records.empty());
  EXPECT_TRUE(parse_log("\n  \n").records.empty());
}

TEST(ParseLogTest, SingleInferenceLine) {
  const auto log = parse_log(line("2025-01-01T00:00:00Z", "inference", "ok"));
  ASSERT_EQ(log.records.size(), 1u);
  EXPECT_EQ(log.records[0].kind, RecordKind::inference);
  EXPECT_EQ(log.records[0].status, RecordStatus::ok);
  EXPECT_EQ(log.records[0].line, 1u);
}

TEST(ParseLogTest, UnknownKindNamesLine) {
  try {
    parse_log(line("2025-01-01T00:00:00Z", "warmup", "ok"));
    FAIL() << "expected LogParseError";
  } catch (const LogParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("warmup"), std::string::npos);
  }
}

TEST(ParseLogTest, ExtraFieldsIgnoredMissingFieldsRejected) {
  EXPECT_EQ(parse_log(R"({"ts":"2025-01-01T00:00:00Z","kind":"admin","status":"ok","latency_ms":12})").records.size(),
            1u);
  EXPECT_THROW(parse_log(R"({"ts":"2025-01-01T00:00:00Z","kind":"admin"})"), LogParseError);
  EXPECT_THROW(parse_log(R"({"ts":"2025-01-01T00:00:00Z","kind":"admin","status":200})"), LogParseError);
  EXPECT_THROW(parse_log(R"(["ts"])"), LogParseError);
  EXPECT_THROW(parse_log("{not json"), LogParseError);
  EXPECT_THROW(parse_log(line("2025-01-01T00:00:00Z", "inference", "timeout")), LogParseError);
}

TEST(ParseLogTest, RejectsInvalidUtf8) {
  const std::string bad = "{\"ts\":\"2025-01-01T00:00:00Z\",\"kind\":\"inference\",\"status\":\"ok\",\"x\":\"\xff\"}";
  EXPECT_THROW(parse_log(bad), LogParseError);
}

TEST(ParseLogTest, LenientModeSkipsAndTallies) {
  const std::string text = line("2025-01-01T00:00:00Z", "inference", "ok") + "garbage\n" +
                           line("2025-01-01T00:00:00Z", "warmup", "ok") +
                           line("2025-01-02T00:00:00Z", "inference", "ok");
  EXPECT_THROW(parse_log(text, ParseMode::strict), LogParseError);
  const auto log = parse_log(text, ParseMode::lenient);
  EXPECT_EQ(log.records.size(), 2u);
  ASSERT_EQ(log.skipped.size(), 2u);
  EXPECT_EQ(log.skipped[0].line, 2u);
  EXPECT_EQ(log.skipped[1].line, 3u);
  EXPECT_EQ(log.records[1].line, 4u);
}

TEST(CountValidTest, FiveRecordFixture) {
  std::ifstream in(fixtures::source_path("fixtures/telemetry_sample.jsonl"));
  const auto log = parse_log(in);
  ASSERT_EQ(log.records.size(), 5u);
  const auto c = count_valid(log.records, Horizon(1, 12), at("2025-01-01T00:00:00Z"));
  EXPECT_EQ(c.valid, 3u);
  EXPECT_EQ(c.excluded_nonproductive, 2u);
  EXPECT_EQ(c.excluded_failed, 0u);
  EXPECT_EQ(c.out_of_range, 0u);
  EXPECT_EQ(c.period_buckets, std::vector<std::uint64_t>{3});
}

TEST(CountValidTest, AllHealthChecks) {
  const auto log = parse_log(line("2025-01-01T00:00:00Z", "health_check", "ok") +
                             line("2025-01-01T00:01:00Z", "health_check", "error"));
  const auto c = count_valid(log.records, Horizon(), at("2025-01-01T00:00:00Z"));
  EXPECT_EQ(c.valid, 0u);
  EXPECT_EQ(c.excluded_nonproductive, 2u);
}

TEST(CountValidTest, FailedInference) {
  const auto log = parse_log(line("2025-01-01T00:00:00Z", "inference", "error"));
  const auto strict = count_valid(log.records, Horizon(), at("2025-01-01T00:00:00Z"));
  EXPECT_EQ(strict.valid, 0u);
  EXPECT_EQ(strict.excluded_failed, 1u);
  const auto lenient = count_valid(log.records, Horizon(), at("2025-01-01T00:00:00Z"), {.failed_inferences_valid = true});
  EXPECT_EQ(lenient.valid, 1u);
  EXPECT_EQ(lenient.excluded_failed, 0u);
}

TEST(CountValidTest, BucketsByCalendarMonth) {
  // Quarterly periods over one year, starting Jan 31.
  const auto start = at("2025-01-31T12:00:00Z");
  const auto log = parse_log(line("2025-01-31T11:59:59Z", "inference", "ok") +  // before start
                             line("2025-04-30T11:59:59Z", "inference", "ok") +  // 2 months, 30 days: Q1
                             line("2025-04-30T12:00:00Z", "inference", "ok") +  // Jan 31 + 3 months clamps to Apr 30: Q2
                             line("2025-12-31T00:00:00Z", "inference", "ok") +  // Q4
                             line("2026-01-31T12:00:00Z", "inference", "ok"));  // exactly 12 months: out
  const auto c = count_valid(log.records, Horizon(4, 3), start);
  EXPECT_EQ(c.period_buckets, (std::vector<std::uint64_t>{1, 1, 0, 1}));
  EXPECT_EQ(c.valid, 3u);
  EXPECT_EQ(c.out_of_range, 2u);
}

TEST(CountValidTest, MonthArithmetic) {
  EXPECT_EQ(add_months(at("2024-01-31T00:00:00Z"), 1), at("2024-02-29T00:00:00Z"));
  EXPECT_EQ(add_months(at("2025-11-15T08:00:00Z"), 3), at("2026-02-15T08:00:00Z"));
  EXPECT_EQ(elapsed_months(at("2025-01-15T00:00:00Z"), at("2025-02-14T23:59:59Z")), 0);
  EXPECT_EQ(elapsed_months(at("2025-01-15T00:00:00Z"), at("2025-02-15T00:00:00Z")), 1);
  EXPECT_EQ(elapsed_months(at("2025-01-15T00:00:00Z"), at("2027-01-15T00:00:00Z")), 24);
}

// --- properties -------------------------------------------------------------

namespace {

std::vector<InferenceRecord> random_records(std::mt19937_64& rng, std::size_t n) {
  const auto start = at("2025-01-01T00:00:00Z");
  std::vector<InferenceRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto offset = std::chrono::seconds(static_cast<std::int64_t>(rng() % (3LL * 366 * 86400)) - 30LL * 86400);
    out.push_back({start + offset, static_cast<RecordKind>(rng() % 4), static_cast<RecordStatus>(rng() % 2), i + 1});
  }
  return out;
}

}  // namespace

TEST(CountValidPropertyTest, PartitionPermutationAdditivity) {
  std::mt19937_64 rng(53);
  const auto start = at("2025-01-01T00:00:00Z");
  for (int iter = 0; iter < 150; ++iter) {
    const Horizon h(static_cast<int>(rng() % 4) + 1, static_cast<int>(rng() % 12) + 1);
    auto a = random_records(rng, rng() % 200);
    const auto b = random_records(rng, rng() % 200);
    const auto ca = count_valid(a, h, start);
    const auto cb = count_valid(b, h, start);

    ASSERT_EQ(ca.total(), a.size());
    std::uint64_t bucketed = 0;
    for (auto v : ca.period_buckets) bucketed += v;
    ASSERT_EQ(bucketed, ca.valid);

    auto joined = a;
    joined.insert(joined.end(), b.begin(), b.end());
    ASSERT_EQ(count_valid(joined, h, start), ca + cb);

    std::shuffle(a.begin(), a.end(), rng);
    ASSERT_EQ(count_valid(a, h, start), ca);
  }
}

TEST(CountValidPropertyTest, ShuffledLinesParseToSameCounts) {
  std::mt19937_64 rng(59);
  const char* kinds[] = {"inference", "health_check", "admin", "background"};
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<std::string> lines;
    for (int i = static_cast<int>(rng() % 50); i > 0; --i) {
      const int day = static_cast<int>(rng() % 28) + 1;
      const int month = static_cast<int>(rng() % 12) + 1;
      char ts[32];
      std::snprintf(ts, sizeof ts, "2025-%02d-%02dT10:00:00Z", month, day);
      lines.push_back(line(ts, kinds[rng() % 4], rng() % 5 ? "ok" : "error"));
    }
    auto join = [](const std::vector<std::string>& ls) {
      std::string s;
      for (const auto& l : ls) s += l;
      return s;
    };
    const auto before = count_valid(parse_log(join(lines)).records, Horizon(4, 3), at("2025-01-01T00:00:00Z"));
    std::shuffle(lines.begin(), lines.end(), rng);
    const auto after = count_valid(parse_log(join(lines)).records, Horizon(4, 3), at("2025-01-01T00:00:00Z"));
    ASSERT_EQ(before, after);
  }
}
