#include "bfp/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bfp/error.hpp"
#include "csv.hpp"

namespace bfp {
namespace {

using detail::CsvRow;

constexpr std::array<std::string_view, 14> kFirmColumns{
    "firm_id",           "fiscal_year",        "label",          "total_assets",
    "total_liabilities", "current_assets",     "current_liabilities",
    "total_debt",        "shareholder_equity", "retained_earnings", "sales",
    "ebit",              "net_income",         "market_value_equity",
};

constexpr double kWorkingCapitalTolerance = 0.5;

class Header {
 public:
  explicit Header(const CsvRow& header) {
    for (std::size_t i = 0; i < header.size(); ++i) index_.emplace(header[i], i);
    names_ = header;
  }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(std::string_view name) const {
    auto i = find(name);
    if (!i) throw Error(ErrorCode::MissingColumn, "required column '" + std::string(name) + "' not found");
    return *i;
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
};

std::string where(std::size_t row, std::string_view column) {
  return "row " + std::to_string(row) + ", column '" + std::string(column) + "'";
}

const std::string& cell(const CsvRow& r, std::size_t col, std::size_t row_no, std::string_view name) {
  if (col >= r.size() || r[col].empty()) {
    throw Error(ErrorCode::MissingValue, where(row_no, name) + " is empty");
  }
  return r[col];
}

double parse_number(const std::string& s, std::size_t row_no, std::string_view name) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw Error(ErrorCode::UnparseableNumber, where(row_no, name) + ": '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, std::size_t row_no, std::string_view name) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::UnparseableNumber, where(row_no, name) + ": '" + s + "'");
  }
  return v;
}

int parse_label(const std::string& s, std::size_t row_no) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw Error(ErrorCode::InvalidLabel, where(row_no, "label") + ": '" + s + "' is not 0 or 1");
}

std::vector<CsvRow> rows_of(std::string_view csv_text, CsvRow& header_out) {
  auto rows = detail::parse_csv(csv_text);
  if (rows.empty()) throw Error(ErrorCode::MissingColumn, "CSV has no header row");
  header_out = std::move(rows.front());
  rows.erase(rows.begin());
  return rows;
}

template <class Record>
std::vector<Record> take(const std::vector<Record>& all, const std::vector<std::size_t>& idx) {
  std::vector<Record> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

}  // namespace

std::span<const std::string_view> firm_record_columns() noexcept { return kFirmColumns; }

Dataset parse_firm_records(std::string_view csv_text) {
  CsvRow header_row;
  const auto rows = rows_of(csv_text, header_row);
  const Header header(header_row);

  std::array<std::size_t, kFirmColumns.size()> col{};
  for (std::size_t i = 0; i < kFirmColumns.size(); ++i) col[i] = header.require(kFirmColumns[i]);
  const auto wc_col = header.find("working_capital");
  const auto recv_col = header.find("receivables");

  Dataset data;
  data.records.reserve(rows.size());
  std::set<std::pair<std::string, int>> seen;

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t row_no = r + 1;
    auto num = [&](std::size_t k) {
      return parse_number(cell(row, col[k], row_no, kFirmColumns[k]), row_no, kFirmColumns[k]);
    };

    FirmRecord rec;
    rec.firm_id = cell(row, col[0], row_no, "firm_id");
    rec.fiscal_year = parse_int(cell(row, col[1], row_no, "fiscal_year"), row_no, "fiscal_year");
    rec.label = parse_label(cell(row, col[2], row_no, "label"), row_no);
    rec.total_assets = num(3);
    rec.total_liabilities = num(4);
    rec.current_assets = num(5);
    rec.current_liabilities = num(6);
    rec.total_debt = num(7);
    rec.shareholder_equity = num(8);
    rec.retained_earnings = num(9);
    rec.sales = num(10);
    rec.ebit = num(11);
    rec.net_income = num(12);
    rec.market_value_equity = num(13);
    rec.working_capital = rec.current_assets - rec.current_liabilities;

    if (!(rec.total_assets > 0.0)) {
      throw Error(ErrorCode::NonPositiveTotalAssets,
                  "row " + std::to_string(row_no) + ": total_assets must be > 0");
    }
    if (wc_col && *wc_col < row.size() && !row[*wc_col].empty()) {
      const double stored = parse_number(row[*wc_col], row_no, "working_capital");
      if (std::abs(stored - rec.working_capital) > kWorkingCapitalTolerance) {
        throw Error(ErrorCode::WorkingCapitalMismatch,
                    where(row_no, "working_capital") + ": stored " + row[*wc_col] +
                        " differs from current_assets - current_liabilities");
      }
    }
    if (recv_col) {
      rec.receivables = parse_number(cell(row, *recv_col, row_no, "receivables"), row_no, "receivables");
    }
    if (!seen.emplace(rec.firm_id, rec.fiscal_year).second) {
      throw Error(ErrorCode::DuplicateFirmYear,
                  "firm '" + rec.firm_id + "' appears twice in fiscal year " + std::to_string(rec.fiscal_year));
    }
    data.records.push_back(std::move(rec));
  }

  for (Ratio r : core_ratios()) data.feature_names.emplace_back(ratio_id(r));
  if (recv_col) data.feature_names.emplace_back(ratio_id(Ratio::DebtorsRatio));
  return data;
}

std::string serialize_firm_records(const Dataset& data) {
  const bool with_receivables =
      std::any_of(data.records.begin(), data.records.end(), [](const FirmRecord& r) { return r.receivables.has_value(); });
  std::ostringstream out;
  for (std::size_t i = 0; i < kFirmColumns.size(); ++i) out << (i ? "," : "") << kFirmColumns[i];
  out << ",working_capital";
  if (with_receivables) out << ",receivables";
  out << '\n';
  using detail::format_double;
  for (const auto& r : data.records) {
    out << detail::csv_escape(r.firm_id) << ',' << r.fiscal_year << ',' << r.label << ','
        << format_double(r.total_assets) << ',' << format_double(r.total_liabilities) << ','
        << format_double(r.current_assets) << ',' << format_double(r.current_liabilities) << ','
        << format_double(r.total_debt) << ',' << format_double(r.shareholder_equity) << ','
        << format_double(r.retained_earnings) << ',' << format_double(r.sales) << ','
        << format_double(r.ebit) << ',' << format_double(r.net_income) << ','
        << format_double(r.market_value_equity) << ',' << format_double(r.working_capital);
    if (with_receivables) out << ',' << (r.receivables ? format_double(*r.receivables) : "");
    out << '\n';
  }
  return out.str();
}

RatioDataset parse_ratio_records(std::string_view csv_text, bool require_label) {
  CsvRow header_row;
  const auto rows = rows_of(csv_text, header_row);
  const Header header(header_row);

  const std::size_t id_col = header.require("firm_id");
  const auto year_col = header.find("fiscal_year");
  const auto label_col = require_label ? std::optional(header.require("label")) : header.find("label");

  std::vector<std::pair<std::size_t, Ratio>> ratio_cols;
  std::string unknown;
  RatioDataset data;
  for (std::size_t i = 0; i < header.names().size(); ++i) {
    const auto& name = header.names()[i];
    if (name == "firm_id" || name == "fiscal_year" || name == "label") continue;
    auto r = ratio_from_id(name);
    if (!r) {
      unknown += (unknown.empty() ? "'" : ", '") + name + "'";
      continue;
    }
    ratio_cols.emplace_back(i, *r);
    data.feature_names.push_back(name);
  }
  if (!unknown.empty()) throw Error(ErrorCode::FeatureMismatch, "unknown ratio columns: " + unknown);
  if (ratio_cols.empty()) throw Error(ErrorCode::MissingColumn, "no ratio columns present");

  std::set<std::pair<std::string, int>> seen;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t row_no = r + 1;
    RatioRecord rec;
    rec.firm_id = cell(row, id_col, row_no, "firm_id");
    if (year_col) rec.fiscal_year = parse_int(cell(row, *year_col, row_no, "fiscal_year"), row_no, "fiscal_year");
    if (label_col) rec.label = parse_label(cell(row, *label_col, row_no, "label"), row_no);
    for (auto [c, ratio] : ratio_cols) {
      const auto name = ratio_id(ratio);
      rec.ratios.set(ratio, parse_number(cell(row, c, row_no, name), row_no, name));
    }
    if (!seen.emplace(rec.firm_id, rec.fiscal_year.value_or(0)).second) {
      throw Error(ErrorCode::DuplicateFirmYear, "firm '" + rec.firm_id + "' appears twice");
    }
    data.records.push_back(std::move(rec));
  }
  return data;
}

RatioDataset to_ratio_dataset(const Dataset& data) {
  RatioDataset out;
  out.feature_names = data.feature_names;
  out.records.reserve(data.size());
  for (const auto& rec : data.records) {
    out.records.push_back({rec.firm_id, rec.fiscal_year, rec.label, compute_ratio_vector(rec)});
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void shuffle_indices(std::vector<std::size_t>& idx, SplitMix64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

std::size_t round_half_up(double x) noexcept {
  return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
}

SplitIndices split_indices(std::span<const int> labels, const SplitConfig& cfg) {
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train_fraction must lie in (0, 1]");
  }
  const std::size_t n = labels.size();
  if (n == 0) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  const std::size_t n_train = std::min(n, round_half_up(cfg.train_fraction * static_cast<double>(n)));

  SplitMix64 rng(cfg.seed);
  SplitIndices out;

  if (!cfg.stratified) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle_indices(idx, rng);
    out.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  } else {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] != 0 && labels[i] != 1) throw Error(ErrorCode::InvalidLabel, "labels must be 0 or 1");
      by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    // Largest-remainder apportionment of n_train; ties go to label 0 first.
    std::array<std::size_t, 2> quota{};
    std::array<double, 2> remainder{};
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < 2; ++c) {
      const double exact = static_cast<double>(n_train) * static_cast<double>(by_class[c].size()) /
                           static_cast<double>(n);
      quota[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
      remainder[c] = exact - static_cast<double>(quota[c]);
      assigned += quota[c];
    }
    while (assigned < n_train) {
      const std::size_t c = (remainder[1] > remainder[0] + 1e-12) ? 1 : 0;
      const std::size_t pick = quota[c] < by_class[c].size() ? c : 1 - c;
      ++quota[pick];
      remainder[pick] = -1.0;
      ++assigned;
    }
    for (std::size_t c = 0; c < 2; ++c) {
      shuffle_indices(by_class[c], rng);
      auto split = by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]);
      out.train.insert(out.train.end(), by_class[c].begin(), split);
      out.test.insert(out.test.end(), split, by_class[c].end());
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data, const SplitConfig& cfg) {
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const auto& r : data.records) labels.push_back(r.label);
  const auto idx = split_indices(labels, cfg);
  return {Dataset{take(data.records, idx.train), data.feature_names},
          Dataset{take(data.records, idx.test), data.feature_names}};
}

std::pair<RatioDataset, RatioDataset> split_train_test(const RatioDataset& data, const SplitConfig& cfg) {
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const auto& r : data.records) {
    if (!r.label) throw Error(ErrorCode::InvalidArgument, "split requires labelled records");
    labels.push_back(*r.label);
  }
  const auto idx = split_indices(labels, cfg);
  return {RatioDataset{take(data.records, idx.train), data.feature_names},
          RatioDataset{take(data.records, idx.test), data.feature_names}};
}

}  // namespace bfp
