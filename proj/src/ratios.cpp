#include "bfp/ratios.hpp"

#include <string>

#include "bfp/error.hpp"
#include "bfp/ingest.hpp"

namespace bfp {
namespace {

struct RatioInfo {
  Ratio ratio;
  std::string_view id;
  std::string_view display;
};

constexpr std::array<RatioInfo, kRatioCount> kRatioInfo{{
    {Ratio::EbitMargin, "ebit_margin", "EBIT Margin"},
    {Ratio::ReturnOnEquity, "roe", "RoE"},
    {Ratio::ReturnOnAssets, "roa", "RoA"},
    {Ratio::CurrentRatio, "current_ratio", "Current Ratio"},
    {Ratio::DebtRatio, "debt_ratio", "Debt Ratio"},
    {Ratio::DebtToEquity, "debt_to_equity", "D/E Ratio"},
    {Ratio::AltmanA, "altman_a", "Working Capital/Total Assets"},
    {Ratio::AltmanB, "altman_b", "Retained Earnings/Total Assets"},
    {Ratio::AltmanC, "altman_c", "EBIT/Total Assets"},
    {Ratio::AltmanD, "altman_d", "Market Value of Equity/Total Liabilities"},
    {Ratio::AltmanE, "altman_e", "Sales/Total Assets"},
    {Ratio::DebtorsRatio, "debtors_ratio", "Debtors Ratio"},
}};

constexpr std::array<Ratio, kCoreRatioCount> kCore{
    Ratio::EbitMargin, Ratio::ReturnOnEquity, Ratio::ReturnOnAssets, Ratio::CurrentRatio,
    Ratio::DebtRatio,  Ratio::DebtToEquity,   Ratio::AltmanA,        Ratio::AltmanB,
    Ratio::AltmanC,    Ratio::AltmanD,        Ratio::AltmanE,
};

std::optional<double> safe_div(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

std::string_view ratio_id(Ratio r) noexcept { return kRatioInfo[static_cast<std::size_t>(r)].id; }

std::string_view ratio_display_name(Ratio r) noexcept {
  return kRatioInfo[static_cast<std::size_t>(r)].display;
}

std::optional<Ratio> ratio_from_id(std::string_view id) noexcept {
  for (const auto& info : kRatioInfo) {
    if (info.id == id) return info.ratio;
  }
  return std::nullopt;
}

std::string_view display_name_for(std::string_view id) noexcept {
  if (auto r = ratio_from_id(id)) return ratio_display_name(*r);
  return id;
}

std::span<const Ratio> core_ratios() noexcept { return kCore; }

double RatioVector::at(Ratio r) const {
  const auto& v = values_[index(r)];
  if (!v) {
    throw Error(ErrorCode::ZeroDenominator,
                "ratio '" + std::string(ratio_id(r)) + "' is undefined (zero denominator)");
  }
  return *v;
}

std::vector<Ratio> RatioVector::undefined(std::span<const Ratio> among) const {
  std::vector<Ratio> out;
  for (Ratio r : among) {
    if (!has(r)) out.push_back(r);
  }
  return out;
}

RatioVector compute_ratio_vector(const FirmRecord& rec) {
  if (!(rec.total_assets > 0.0)) {
    throw Error(ErrorCode::NonPositiveTotalAssets,
                "firm '" + rec.firm_id + "' has total_assets <= 0");
  }
  const double ta = rec.total_assets;
  RatioVector v;
  v.set(Ratio::EbitMargin, safe_div(rec.ebit, rec.sales));
  v.set(Ratio::ReturnOnEquity, safe_div(rec.net_income, rec.shareholder_equity));
  v.set(Ratio::ReturnOnAssets, rec.net_income / ta);
  v.set(Ratio::CurrentRatio, safe_div(rec.current_assets, rec.current_liabilities));
  v.set(Ratio::DebtRatio, rec.total_debt / ta);
  v.set(Ratio::DebtToEquity, safe_div(rec.total_debt, rec.shareholder_equity));
  v.set(Ratio::AltmanA, rec.working_capital / ta);
  v.set(Ratio::AltmanB, rec.retained_earnings / ta);
  v.set(Ratio::AltmanC, rec.ebit / ta);
  v.set(Ratio::AltmanD, safe_div(rec.market_value_equity, rec.total_liabilities));
  v.set(Ratio::AltmanE, rec.sales / ta);
  if (rec.receivables) v.set(Ratio::DebtorsRatio, safe_div(rec.sales, *rec.receivables));
  return v;
}

}  // namespace bfp
