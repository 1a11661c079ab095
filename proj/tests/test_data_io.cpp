#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "fairrank/data_io.hpp"

using namespace fairrank;
using namespace fairrank::io;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

struct TempFile {
  std::filesystem::path path;

  explicit TempFile(const std::string& name, const std::string& contents = "") {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

}  // namespace

TEST_CASE("csv matrix parses plain numeric rows") {
  TempFile f("fr_scores_basic.csv", "5,1\n3,3\n");
  const auto m = load_relevance_csv(f.path.string(), RatingScale{1.0, 5.0});
  REQUIRE(m.users() == 2);
  REQUIRE(m.items() == 2);
  CHECK(m.rows[0] == std::vector<double>{5.0, 1.0});
  CHECK(m.rows[1] == std::vector<double>{3.0, 3.0});
}

TEST_CASE("csv matrix skips a single header row") {
  TempFile f("fr_scores_header.csv", "item_a,item_b\n4,2\n");
  const auto m = load_relevance_csv(f.path.string(), RatingScale{1.0, 5.0});
  REQUIRE(m.users() == 1);
  CHECK(m.rows[0] == std::vector<double>{4.0, 2.0});
}

TEST_CASE("out-of-scale entries are rejected with their location") {
  TempFile f("fr_scores_range.csv", "5,1\n3,6.0\n");
  try {
    load_relevance_csv(f.path.string(), RatingScale{1.0, 5.0});
    FAIL("expected IngestError");
  } catch (const IngestError& e) {
    CHECK_THAT(e.what(), ContainsSubstring("row 2"));
    CHECK_THAT(e.what(), ContainsSubstring("column 2"));
  }
}

TEST_CASE("ragged and non-numeric rows are rejected with their location") {
  TempFile ragged("fr_scores_ragged.csv", "5,1\n3\n");
  CHECK_THROWS_MATCHES(load_relevance_csv(ragged.path.string(), RatingScale{1.0, 5.0}),
                       IngestError, Catch::Matchers::MessageMatches(
                                        ContainsSubstring("ragged row 2")));

  TempFile bad("fr_scores_nan.csv", "5,1\n3,zebra\n");
  CHECK_THROWS_MATCHES(load_relevance_csv(bad.path.string(), RatingScale{1.0, 5.0}),
                       IngestError, Catch::Matchers::MessageMatches(
                                        ContainsSubstring("row 2, column 2")));
}

TEST_CASE("empty and missing files are rejected") {
  TempFile empty("fr_scores_empty.csv", "");
  CHECK_THROWS_AS(load_relevance_csv(empty.path.string(), RatingScale{1.0, 5.0}),
                  IngestError);
  CHECK_THROWS_AS(load_relevance_csv("/nonexistent/fr.csv", RatingScale{1.0, 5.0}),
                  IngestError);

  TempFile header_only("fr_scores_header_only.csv", "a,b\n");
  CHECK_THROWS_AS(
      load_relevance_csv(header_only.path.string(), RatingScale{1.0, 5.0}),
      IngestError);
}

TEST_CASE("synthetic matrices are reproducible and in range") {
  const RatingScale scale{1.0, 5.0};
  const auto a = synth_relevance(20, 7, 99, scale, SynthDistribution::uniform);
  const auto b = synth_relevance(20, 7, 99, scale, SynthDistribution::uniform);
  CHECK(a.rows == b.rows);

  const auto c = synth_relevance(20, 7, 100, scale, SynthDistribution::uniform);
  CHECK(a.rows != c.rows);

  for (const auto& row : a.rows)
    for (double x : row) {
      CHECK(x >= scale.min);
      CHECK(x <= scale.max);
    }
}

TEST_CASE("uniform synthesis is centered on the scale midpoint") {
  const RatingScale scale{1.0, 5.0};
  const auto m = synth_relevance(200, 100, 7, scale, SynthDistribution::uniform);
  double mean = 0.0;
  for (const auto& row : m.rows)
    for (double x : row) mean += x;
  mean /= double(m.users() * m.items());
  CHECK_THAT(mean, WithinAbs(3.0, 0.02 * 3.0));
}

TEST_CASE("skewed synthesis leans toward the scale minimum") {
  const RatingScale scale{1.0, 5.0};
  const auto m = synth_relevance(100, 100, 7, scale, SynthDistribution::skewed);
  double mean = 0.0;
  for (const auto& row : m.rows)
    for (double x : row) mean += x;
  mean /= double(m.users() * m.items());
  CHECK(mean < 2.2);  // uniform would sit near 3
}

TEST_CASE("single-item synthesis yields trivial rankings") {
  const auto m = synth_relevance(5, 1, 3, RatingScale{1.0, 5.0},
                                 SynthDistribution::uniform);
  for (const auto& row : m.rows) {
    const auto p = make_profile(row, m.scale);
    CHECK(p.ranking == std::vector<int>{0});
  }
}

TEST_CASE("report csv writes a header and roundtrips") {
  TempFile f("fr_report.csv");

  write_report_csv({}, f.path.string());
  {
    std::ifstream in(f.path);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header ==
          "epsilon,seed,unfairness_none,unfairness_central_fair,"
          "unfairness_private,mean_ndcg,min_ndcg,aborts,runtime_ms");
    std::string extra;
    CHECK_FALSE(std::getline(in, extra));
  }

  std::vector<ReportRow> rows(2);
  rows[0] = {0.5, 1, 12.3456789012345, 3.14159, 4.2, 0.987654321, 0.81, 0, 1234.5};
  rows[1] = {100000.0, 7, 8.0 / 3.0, 1e-7, 2.0000000001, 1.0, 0.9999999999, 2, 9.25};
  write_report_csv(rows, f.path.string());
  const auto back = read_report_csv(f.path.string());
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK_THAT(back[i].epsilon, WithinAbs(rows[i].epsilon, 1e-9));
    CHECK(back[i].seed == rows[i].seed);
    CHECK_THAT(back[i].unfairness_none, WithinAbs(rows[i].unfairness_none, 1e-9));
    CHECK_THAT(back[i].unfairness_central_fair,
               WithinAbs(rows[i].unfairness_central_fair, 1e-9));
    CHECK_THAT(back[i].unfairness_private,
               WithinAbs(rows[i].unfairness_private, 1e-9));
    CHECK_THAT(back[i].mean_ndcg, WithinAbs(rows[i].mean_ndcg, 1e-9));
    CHECK_THAT(back[i].min_ndcg, WithinAbs(rows[i].min_ndcg, 1e-9));
    CHECK(back[i].aborts == rows[i].aborts);
    CHECK_THAT(back[i].runtime_ms, WithinAbs(rows[i].runtime_ms, 1e-9));
  }
}

TEST_CASE("report write failure names the path") {
  CHECK_THROWS_MATCHES(write_report_csv({}, "/nonexistent_dir/report.csv"),
                       IngestError, Catch::Matchers::MessageMatches(
                                        ContainsSubstring("/nonexistent_dir")));
}
