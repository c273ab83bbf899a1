#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bfp {

struct FirmRecord;

/// Candidate covariates. The first eleven are always computed; DebtorsRatio
/// only exists when the input carries a `receivables` column.
enum class Ratio : std::size_t {
  EbitMargin,
  ReturnOnEquity,
  ReturnOnAssets,
  CurrentRatio,
  DebtRatio,
  DebtToEquity,
  AltmanA,  // working capital / total assets
  AltmanB,  // retained earnings / total assets
  AltmanC,  // EBIT / total assets
  AltmanD,  // market value of equity / total liabilities
  AltmanE,  // sales / total assets
  DebtorsRatio,
};

inline constexpr std::size_t kRatioCount = 12;
inline constexpr std::size_t kCoreRatioCount = 11;

/// Canonical column name, e.g. "roa". Used as the model feature name and as
/// the header in ratio-mode CSV files.
std::string_view ratio_id(Ratio r) noexcept;
/// Human label as it appears in report tables, e.g. "RoA".
std::string_view ratio_display_name(Ratio r) noexcept;
std::optional<Ratio> ratio_from_id(std::string_view id) noexcept;
/// Display name for a feature id; falls back to the id itself.
std::string_view display_name_for(std::string_view id) noexcept;

std::span<const Ratio> core_ratios() noexcept;

/// One firm-year's covariates. A ratio whose denominator is zero is left
/// undefined instead of failing the whole vector.
class RatioVector {
 public:
  bool has(Ratio r) const noexcept { return values_[index(r)].has_value(); }
  std::optional<double> get(Ratio r) const noexcept { return values_[index(r)]; }
  /// Throws ZeroDenominator naming the ratio when it is undefined.
  double at(Ratio r) const;
  void set(Ratio r, std::optional<double> v) noexcept { values_[index(r)] = v; }

  /// Ratios that could not be computed because a denominator was zero.
  std::vector<Ratio> undefined(std::span<const Ratio> among) const;

  double ebit_margin() const { return at(Ratio::EbitMargin); }
  double roe() const { return at(Ratio::ReturnOnEquity); }
  double roa() const { return at(Ratio::ReturnOnAssets); }
  double current_ratio() const { return at(Ratio::CurrentRatio); }
  double debt_ratio() const { return at(Ratio::DebtRatio); }
  double debt_to_equity() const { return at(Ratio::DebtToEquity); }
  double altman_a() const { return at(Ratio::AltmanA); }
  double altman_b() const { return at(Ratio::AltmanB); }
  double altman_c() const { return at(Ratio::AltmanC); }
  double altman_d() const { return at(Ratio::AltmanD); }
  double altman_e() const { return at(Ratio::AltmanE); }

 private:
  static constexpr std::size_t index(Ratio r) noexcept { return static_cast<std::size_t>(r); }
  std::array<std::optional<double>, kRatioCount> values_{};
};

/// Computes every candidate ratio for one firm-year.
///
/// Definitions: ebit_margin = ebit/sales, roe = net_income/equity,
/// roa = net_income/total_assets, current_ratio = current_assets/current_liabilities,
/// debt_ratio = total_debt/total_assets, debt_to_equity = total_debt/equity,
/// Altman A-E as in the enum. Signs are preserved for negative equity.
/// Throws NonPositiveTotalAssets when total_assets <= 0.
RatioVector compute_ratio_vector(const FirmRecord& rec);

}  // namespace bfp
