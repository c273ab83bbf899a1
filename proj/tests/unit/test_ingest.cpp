#include <initializer_list>
#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "bfp/error.hpp"
#include "bfp/ingest.hpp"
#include "doctest.h"

using namespace bfp;

namespace {

const std::string kHeader =
    "firm_id,fiscal_year,label,total_assets,total_liabilities,current_assets,current_liabilities,"
    "total_debt,shareholder_equity,retained_earnings,sales,ebit,net_income,market_value_equity\n";

std::string row(const std::string& id, int year, int label, const std::string& total_assets = "400") {
  return id + "," + std::to_string(year) + "," + std::to_string(label) + "," + total_assets +
         ",250,120,60,180,150,40,120,30,12,200\n";
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

std::vector<int> labels_45_45() {
  std::vector<int> y(90);
  for (std::size_t i = 0; i < 90; ++i) y[i] = i % 2 == 0 ? 1 : 0;
  return y;
}

}  // namespace

TEST_CASE("fixture parses to 90 labelled firms") {
  const auto data = parse_firm_records(read_text_file(BFP_TEST_DATA "/firms_90.csv"));
  REQUIRE(data.size() == 90);
  const auto bankrupt = std::count_if(data.records.begin(), data.records.end(), [](auto& r) { return r.label == 1; });
  CHECK(bankrupt == 45);
}

TEST_CASE("header only gives an empty dataset") {
  CHECK(parse_firm_records(kHeader).empty());
}

TEST_CASE("unparseable number names row and column") {
  std::string csv = kHeader + row("A", 2017, 1);
  csv += "B,2017,0,400,250,abc,60,180,150,40,120,30,12,200\n";
  try {
    parse_firm_records(csv);
    FAIL("expected UnparseableNumber");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnparseableNumber);
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("current_assets") != std::string::npos);
    CHECK(msg.find("abc") != std::string::npos);
  }
}

TEST_CASE("ingest errors") {
  CHECK(code_of([&] { parse_firm_records("firm_id,label\nA,1\n"); }) == ErrorCode::MissingColumn);
  CHECK(code_of([&] { parse_firm_records(kHeader + row("A", 2017, 2)); }) == ErrorCode::InvalidLabel);
  CHECK(code_of([&] { parse_firm_records(kHeader + row("A", 2017, 1, "0")); }) == ErrorCode::NonPositiveTotalAssets);
  CHECK(code_of([&] { parse_firm_records(kHeader + row("A", 2017, 1) + row("A", 2017, 0)); }) ==
        ErrorCode::DuplicateFirmYear);
  CHECK(code_of([&] { parse_firm_records(kHeader + "A,2017,1,400,,120,60,180,150,40,120,30,12,200\n"); }) ==
        ErrorCode::MissingValue);
  // same firm, different years is fine
  CHECK(parse_firm_records(kHeader + row("A", 2017, 1) + row("A", 2018, 1)).size() == 2);
}

TEST_CASE("working capital column is checked against its parts") {
  const std::string head = kHeader.substr(0, kHeader.size() - 1) + ",working_capital\n";
  CHECK(parse_firm_records(head + "A,2017,1,400,250,120,60,180,150,40,120,30,12,200,60.2\n").size() == 1);
  CHECK(code_of([&] { parse_firm_records(head + "A,2017,1,400,250,120,60,180,150,40,120,30,12,200,70\n"); }) ==
        ErrorCode::WorkingCapitalMismatch);
}

TEST_CASE("serialize and parse round-trip") {
  const auto a = parse_firm_records(read_text_file(BFP_TEST_DATA "/firms_90.csv"));
  const auto b = parse_firm_records(serialize_firm_records(a));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.records[i].firm_id == b.records[i].firm_id);
    CHECK(a.records[i].label == b.records[i].label);
    CHECK(a.records[i].total_assets == b.records[i].total_assets);
    CHECK(a.records[i].net_income == b.records[i].net_income);
    CHECK(a.records[i].working_capital == b.records[i].working_capital);
  }
}

TEST_CASE("ratio csv rejects unknown columns") {
  CHECK(code_of([&] { parse_ratio_records("firm_id,label,roa,foo\nA,1,0.1,2\n"); }) == ErrorCode::FeatureMismatch);
  const auto r = parse_ratio_records("firm_id,label,roa\nA,1,0.1\n");
  REQUIRE(r.size() == 1);
  CHECK(r.records[0].ratios.roa() == doctest::Approx(0.1));
}

TEST_CASE("random split sizes") {
  const auto y = labels_45_45();
  const auto s = split_indices(y, {0.7, 42, false});
  CHECK(s.train.size() == 63);
  CHECK(s.test.size() == 27);

  const std::vector<int> ten{1, 0, 1, 0, 1, 0, 1, 0, 1, 0};
  const auto all = split_indices(ten, {1.0, 3, false});
  CHECK(all.train.size() == 10);
  CHECK(all.test.empty());
}

TEST_CASE("split is a deterministic partition") {
  const auto y = labels_45_45();
  for (std::uint64_t seed : {0ULL, 1ULL, 17ULL, 123456789ULL}) {
    for (bool strat : {false, true}) {
      const auto a = split_indices(y, {0.7, seed, strat});
      const auto b = split_indices(y, {0.7, seed, strat});
      CHECK(a.train == b.train);
      CHECK(a.test == b.test);
      CHECK(std::is_sorted(a.train.begin(), a.train.end()));
      CHECK(std::is_sorted(a.test.begin(), a.test.end()));
      std::vector<std::size_t> u = a.train;
      u.insert(u.end(), a.test.begin(), a.test.end());
      std::sort(u.begin(), u.end());
      std::vector<std::size_t> want(90);
      std::iota(want.begin(), want.end(), 0);
      CHECK(u == want);
    }
  }
}

TEST_CASE("stratified split keeps class sizes and depends on the seed") {
  const auto y = labels_45_45();
  const auto a = split_indices(y, {0.7, 1, true});
  const auto b = split_indices(y, {0.7, 2, true});
  CHECK(a.train != b.train);
  for (const auto& s : {a, b}) {
    std::size_t ones = 0;
    for (auto i : s.train) ones += y[i];
    // 31.5 each; the tie goes to class 0
    CHECK(ones == 31);
    CHECK(s.train.size() - ones == 32);
  }
}

TEST_CASE("round_half_up") {
  CHECK(round_half_up(62.5) == 63);
  CHECK(round_half_up(0.7 * 90) == 63);
  CHECK(round_half_up(0.35 * 10) == 4);
  CHECK(round_half_up(2.49) == 2);
}

TEST_CASE("splitmix64 reference values") {
  // first outputs for seed 1234567 from the reference implementation
  SplitMix64 g(1234567);
  CHECK(g.next() == 6457827717110365317ULL);
  CHECK(g.next() == 3203168211198807973ULL);
  CHECK(g.next() == 9817491932198370423ULL);
}
