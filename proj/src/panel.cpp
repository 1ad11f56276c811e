#include "awpri/panel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "awpri/errors.hpp"
#include "awpri/kvconfig.hpp"
#include "awpri/text.hpp"

namespace awpri {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string to_string(Layer layer) {
  switch (layer) {
    case Layer::L1: return "L1";
    case Layer::L2: return "L2";
    case Layer::L3: return "L3";
  }
  return "?";
}

Layer parse_layer(std::string_view s) {
  s = text::trim(s);
  if (s == "L1" || s == "1") return Layer::L1;
  if (s == "L2" || s == "2") return Layer::L2;
  if (s == "L3" || s == "3") return Layer::L3;
  throw ConfigError("unknown layer '" + std::string(s) + "'");
}

std::string to_string(IncomeGroup g) {
  switch (g) {
    case IncomeGroup::high: return "high";
    case IncomeGroup::upper_middle: return "upper-middle";
    case IncomeGroup::lower_middle: return "lower-middle";
    case IncomeGroup::low: return "low";
    case IncomeGroup::unknown: break;
  }
  return "";
}

IncomeGroup parse_income_group(std::string_view s) {
  std::string v(text::trim(s));
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) {
    return c == '_' || c == ' ' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (v.empty()) return IncomeGroup::unknown;
  if (v == "high") return IncomeGroup::high;
  if (v == "upper-middle") return IncomeGroup::upper_middle;
  if (v == "lower-middle") return IncomeGroup::lower_middle;
  if (v == "low") return IncomeGroup::low;
  throw DataError("unknown income group '" + std::string(s) + "'");
}

std::vector<IndicatorSpec> read_indicator_specs(std::istream& in) {
  const auto kv = KvFile::parse(in);
  std::vector<IndicatorSpec> specs;
  for (const auto& section : kv.sections()) {
    if (section.empty()) throw ConfigError("indicator keys must sit under a [code] section");
    IndicatorSpec spec;
    spec.code = section;
    const auto layer = kv.get(section, "layer");
    if (!layer) throw ConfigError("indicator '" + section + "' has no layer");
    spec.layer = parse_layer(*layer);
    if (const auto inv = kv.get(section, "invert")) {
      const auto b = text::parse_bool(*inv);
      if (!b) throw ConfigError("indicator '" + section + "': invert must be true/false");
      spec.invert = *b;
    }
    spec.source_label = kv.get(section, "source_label").value_or("");
    specs.push_back(std::move(spec));
  }
  validate_specs(specs, false);
  return specs;
}

std::vector<IndicatorSpec> read_indicator_specs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open indicator spec file " + path);
  return read_indicator_specs(in);
}

void validate_specs(std::span<const IndicatorSpec> specs, bool index_design) {
  std::set<std::string> seen;
  std::array<int, 3> per_layer{0, 0, 0};
  for (const auto& s : specs) {
    if (s.code.empty()) throw ConfigError("indicator with empty code");
    if (!seen.insert(s.code).second) throw ConfigError("duplicate indicator code '" + s.code + "'");
    ++per_layer[static_cast<int>(s.layer)];
  }
  if (index_design) {
    for (int j = 0; j < 3; ++j) {
      if (per_layer[j] != 5) {
        throw ConfigError("layer L" + std::to_string(j + 1) + " has " +
                          std::to_string(per_layer[j]) + " indicators, expected 5");
      }
    }
  }
}

PanelDataset::PanelDataset(std::vector<CountryMeta> countries, int first_year, int n_years,
                           std::vector<std::string> codes, Eigen::MatrixXd values,
                           bool normalized)
    : countries_(std::move(countries)),
      first_year_(first_year),
      n_years_(n_years),
      codes_(std::move(codes)),
      values_(std::move(values)),
      normalized_(normalized) {
  if (n_years_ < 1) throw DataError("panel needs at least one year");
  if (values_.rows() != static_cast<Eigen::Index>(countries_.size()) * n_years_ ||
      values_.cols() != static_cast<Eigen::Index>(codes_.size())) {
    throw DataError("panel value matrix does not match countries x years x codes");
  }
  std::set<std::string> ids;
  for (const auto& c : countries_) {
    if (!ids.insert(c.country_id).second) throw DataError("duplicate country '" + c.country_id + "'");
  }
}

std::vector<int> PanelDataset::years() const {
  std::vector<int> out(static_cast<std::size_t>(n_years_));
  for (int t = 0; t < n_years_; ++t) out[static_cast<std::size_t>(t)] = first_year_ + t;
  return out;
}

std::optional<std::size_t> PanelDataset::country_index(std::string_view id) const {
  for (std::size_t i = 0; i < countries_.size(); ++i) {
    if (countries_[i].country_id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> PanelDataset::code_index(std::string_view code) const {
  for (std::size_t k = 0; k < codes_.size(); ++k) {
    if (codes_[k] == code) return k;
  }
  return std::nullopt;
}

std::optional<double> PanelDataset::value(std::size_t country, int year, std::size_t code) const {
  if (country >= countries_.size() || year < first_year_ || year > last_year() ||
      code >= codes_.size()) {
    return std::nullopt;
  }
  const double v = values_(row(country, year), static_cast<Eigen::Index>(code));
  if (std::isnan(v)) return std::nullopt;
  return v;
}

std::optional<double> PanelDataset::value(std::string_view country, int year,
                                          std::string_view code) const {
  const auto c = country_index(country);
  const auto k = code_index(code);
  if (!c || !k) return std::nullopt;
  return value(*c, year, *k);
}

Eigen::MatrixXd PanelDataset::cross_section(int year) const {
  if (year < first_year_ || year > last_year()) {
    throw DataError("year " + std::to_string(year) + " outside panel");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(countries_.size()), values_.cols());
  for (std::size_t i = 0; i < countries_.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = values_.row(row(i, year));
  }
  return out;
}

std::size_t PanelDataset::missing_count() const {
  return static_cast<std::size_t>(values_.array().isNaN().count());
}

LoadResult load_panel(std::istream& in, std::span<const IndicatorSpec> specs,
                      const LoadOptions& opts) {
  validate_specs(specs, false);
  std::vector<std::string> warnings;
  std::string line;
  int line_no = 0;
  // Leading '#' lines carry provenance and are skipped.
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    have_header = true;
    break;
  }
  if (!have_header) throw DataError("empty input: no header row");
  const auto header = text::split_record(line, opts.delimiter);

  std::optional<std::size_t> country_col, year_col, region_col, income_col;
  std::vector<std::optional<std::size_t>> code_col(specs.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& h = header[c];
    bool known = true;
    if (h == "country") country_col = c;
    else if (h == "year") year_col = c;
    else if (h == "region") region_col = c;
    else if (h == "income_group") income_col = c;
    else {
      known = false;
      for (std::size_t k = 0; k < specs.size(); ++k) {
        if (specs[k].code == h) {
          if (code_col[k]) throw DataError("column '" + h + "' appears twice");
          code_col[k] = c;
          known = true;
        }
      }
    }
    if (!known) warnings.push_back("ignoring unknown column '" + h + "'");
  }
  if (!country_col) throw DataError("missing required column 'country'");
  if (!year_col) throw DataError("missing required column 'year'");
  for (std::size_t k = 0; k < specs.size(); ++k) {
    if (!code_col[k]) throw DataError("missing required column '" + specs[k].code + "'");
  }

  struct Row {
    std::size_t country;
    int year;
    std::vector<double> cells;
  };
  std::vector<CountryMeta> countries;
  std::unordered_map<std::string, std::size_t> country_lookup;
  std::vector<Row> rows;
  std::set<std::pair<std::size_t, int>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;
    const auto fields = text::split_record(line, opts.delimiter);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    const auto& id = fields[*country_col];
    if (id.empty()) throw DataError("line " + std::to_string(line_no) + ": empty country");
    const auto year = text::parse_int(fields[*year_col]);
    if (!year) {
      throw DataError("line " + std::to_string(line_no) + ": year '" + fields[*year_col] +
                      "' is not an integer");
    }
    auto [it, inserted] = country_lookup.try_emplace(id, countries.size());
    if (inserted) {
      CountryMeta meta;
      meta.country_id = id;
      if (region_col) meta.region = fields[*region_col];
      if (income_col) meta.income_group = parse_income_group(fields[*income_col]);
      countries.push_back(std::move(meta));
    }
    if (!seen.emplace(it->second, static_cast<int>(*year)).second) {
      throw DataError("duplicate row (" + id + ", " + std::to_string(*year) + ")");
    }
    Row r{it->second, static_cast<int>(*year), std::vector<double>(specs.size(), kMissing)};
    for (std::size_t k = 0; k < specs.size(); ++k) {
      const auto& f = fields[*code_col[k]];
      if (f.empty() || f == "NA" || f == "NaN") continue;
      const auto v = text::parse_double(f);
      if (!v || !std::isfinite(*v)) {
        throw DataError("line " + std::to_string(line_no) + ": '" + f + "' is not a number");
      }
      r.cells[k] = *v;
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw DataError("no data rows");

  std::set<int> years;
  for (const auto& r : rows) years.insert(r.year);
  const int first = *years.begin();
  const int last = *years.rbegin();
  if (static_cast<int>(years.size()) != last - first + 1) {
    throw DataError("years " + std::to_string(first) + "-" + std::to_string(last) +
                    " are not contiguous");
  }
  const int n_years = last - first + 1;

  Eigen::MatrixXd values = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(countries.size()) * n_years,
      static_cast<Eigen::Index>(specs.size()), kMissing);
  for (const auto& r : rows) {
    const auto row = static_cast<Eigen::Index>(r.country) * n_years + (r.year - first);
    for (std::size_t k = 0; k < specs.size(); ++k) values(row, static_cast<Eigen::Index>(k)) = r.cells[k];
  }
  std::vector<std::string> codes;
  for (const auto& s : specs) codes.push_back(s.code);
  return {PanelDataset(std::move(countries), first, n_years, std::move(codes), std::move(values), false),
          std::move(warnings)};
}

void write_panel(std::ostream& out, const PanelDataset& ds, char delimiter) {
  const bool with_meta = std::any_of(ds.countries().begin(), ds.countries().end(), [](const auto& c) {
    return !c.region.empty() || c.income_group != IncomeGroup::unknown;
  });
  out << "country" << delimiter << "year";
  for (const auto& c : ds.codes()) out << delimiter << c;
  if (with_meta) out << delimiter << "region" << delimiter << "income_group";
  out << '\n';
  for (std::size_t i = 0; i < ds.n_countries(); ++i) {
    const auto& meta = ds.countries()[i];
    for (int y = ds.first_year(); y <= ds.last_year(); ++y) {
      out << meta.country_id << delimiter << y;
      for (std::size_t k = 0; k < ds.codes().size(); ++k) {
        out << delimiter;
        if (const auto v = ds.value(i, y, k)) out << text::format_double(*v);
      }
      if (with_meta) out << delimiter << meta.region << delimiter << to_string(meta.income_group);
      out << '\n';
    }
  }
}

ImputeResult impute_linear(const PanelDataset& ds) {
  Eigen::MatrixXd values = ds.values();
  std::size_t imputed = 0;
  const int T = ds.n_years();
  for (std::size_t i = 0; i < ds.n_countries(); ++i) {
    for (Eigen::Index k = 0; k < values.cols(); ++k) {
      auto s = values.col(k).segment(ds.row(i, ds.first_year()), T);
      std::vector<int> observed;
      for (int t = 0; t < T; ++t) {
        if (!std::isnan(s(t))) observed.push_back(t);
      }
      if (observed.empty()) {
        throw DataError("series (" + ds.countries()[i].country_id + ", " +
                        ds.codes()[static_cast<std::size_t>(k)] + ") has no observed values");
      }
      for (int t = 0; t < observed.front(); ++t, ++imputed) s(t) = s(observed.front());
      for (int t = observed.back() + 1; t < T; ++t, ++imputed) s(t) = s(observed.back());
      for (std::size_t j = 0; j + 1 < observed.size(); ++j) {
        const int a = observed[j];
        const int b = observed[j + 1];
        for (int t = a + 1; t < b; ++t, ++imputed) {
          const double frac = static_cast<double>(t - a) / (b - a);
          s(t) = s(a) + frac * (s(b) - s(a));
        }
      }
    }
  }
  return {PanelDataset(ds.countries(), ds.first_year(), T, ds.codes(), std::move(values),
                       ds.normalized()),
          imputed};
}

NormalizeResult normalize_minmax(const PanelDataset& ds, std::span<const IndicatorSpec> specs) {
  if (ds.missing_count() != 0) {
    throw DataError("normalization needs a complete panel; run imputation first");
  }
  std::vector<std::string> warnings;
  Eigen::MatrixXd values = ds.values();
  for (std::size_t k = 0; k < ds.codes().size(); ++k) {
    const auto& code = ds.codes()[k];
    const auto spec = std::find_if(specs.begin(), specs.end(),
                                   [&](const IndicatorSpec& s) { return s.code == code; });
    if (spec == specs.end()) throw ConfigError("no indicator spec for column '" + code + "'");
    auto col = values.col(static_cast<Eigen::Index>(k));
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    if (hi == lo) {
      col.setConstant(0.5);
      warnings.push_back("indicator '" + code + "' is constant; mapped to 0.5");
      continue;
    }
    col = (col.array() - lo) / (hi - lo);
    if (spec->invert) col = 1.0 - col.array();
  }
  return {PanelDataset(ds.countries(), ds.first_year(), ds.n_years(), ds.codes(), std::move(values), true),
          std::move(warnings)};
}

}  // namespace awpri
