#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bfp/ratios.hpp"

namespace bfp {

/// One firm-year of raw statement fields. All currency fields share a unit.
struct FirmRecord {
  std::string firm_id;
  int fiscal_year = 0;
  int label = 0;  // 1 = bankrupt, 0 = non-bankrupt
  double total_assets = 0;
  double total_liabilities = 0;
  double current_assets = 0;
  double current_liabilities = 0;
  double total_debt = 0;
  double shareholder_equity = 0;
  double retained_earnings = 0;
  double working_capital = 0;  // always current_assets - current_liabilities
  double sales = 0;
  double ebit = 0;
  double net_income = 0;
  double market_value_equity = 0;
  std::optional<double> receivables;
};

struct Dataset {
  std::vector<FirmRecord> records;
  std::vector<std::string> feature_names;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

/// A firm-year reduced to its covariates, as read from a ratio-mode CSV or
/// derived from a FirmRecord.
struct RatioRecord {
  std::string firm_id;
  std::optional<int> fiscal_year;
  std::optional<int> label;
  RatioVector ratios;
};

struct RatioDataset {
  std::vector<RatioRecord> records;
  std::vector<std::string> feature_names;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

/// Required header columns of the raw statement CSV, in canonical order.
std::span<const std::string_view> firm_record_columns() noexcept;

/// Parses the raw statement CSV. `working_capital` and `receivables` are
/// optional columns; a stored working capital must agree with
/// current_assets - current_liabilities within 0.5 currency units.
Dataset parse_firm_records(std::string_view csv_text);

/// Writes records back in canonical column order with shortest round-trip
/// number formatting.
std::string serialize_firm_records(const Dataset& data);

/// Parses a ratio-mode CSV: `firm_id`, optional `fiscal_year`, `label`
/// (optional when `require_label` is false) and one column per ratio id.
/// Columns outside that set are rejected.
RatioDataset parse_ratio_records(std::string_view csv_text, bool require_label = true);

RatioDataset to_ratio_dataset(const Dataset& data);

std::string read_text_file(const std::string& path);

/// SplitMix64: state += 0x9E3779B97F4A7C15, then the xor-shift-multiply
/// finalizer (30, 0xBF58476D1CE4E5B9, 27, 0x94D049BB133111EB, 31).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;

 private:
  std::uint64_t state_;
};

/// Fisher-Yates from the last element down: j = next() mod (i + 1).
void shuffle_indices(std::vector<std::size_t>& idx, SplitMix64& rng);

/// floor(x + 0.5), with a 1e-9 allowance so that decimal halves stored
/// slightly below .5 in binary still round up.
std::size_t round_half_up(double x) noexcept;

struct SplitConfig {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  bool stratified = false;
};

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Partitions indices 0..n-1. The train size is round_half_up(f * n); under
/// stratification that total is apportioned across classes by largest
/// remainder and each class is shuffled separately.
SplitIndices split_indices(std::span<const int> labels, const SplitConfig& cfg);

std::pair<Dataset, Dataset> split_train_test(const Dataset& data, const SplitConfig& cfg);
std::pair<RatioDataset, RatioDataset> split_train_test(const RatioDataset& data,
                                                       const SplitConfig& cfg);

}  // namespace bfp
