#include "awpri/index.hpp"

#include <cmath>
#include <map>
#include <set>

#include "awpri/errors.hpp"
#include "awpri/text.hpp"

namespace awpri {

LayerWeights::LayerWeights(double w1, double w2, double w3) : w_{w1, w2, w3} {
  for (double w : w_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("layer weights must be strictly positive");
  }
  if (std::abs(w1 + w2 + w3 - 1.0) > 1e-12) throw ConfigError("layer weights must sum to 1");
}

std::string to_string(Tier t) {
  switch (t) {
    case Tier::Critical: return "Critical";
    case Tier::High: return "High";
    case Tier::Moderate: return "Moderate";
    case Tier::Low: return "Low";
  }
  return "?";
}

void TierThresholds::validate() const {
  if (!(critical > high && high > moderate)) {
    throw ConfigError("tier thresholds must satisfy critical > high > moderate");
  }
}

Tier assign_tier(double score, const TierThresholds& th) {
  if (std::isnan(score)) throw NumericalError("cannot assign a tier to NaN");
  if (score >= th.critical) return Tier::Critical;
  if (score >= th.high) return Tier::High;
  if (score >= th.moderate) return Tier::Moderate;
  return Tier::Low;
}

Eigen::MatrixX3d layer_scores(const PanelDataset& ds, std::span<const IndicatorSpec> specs) {
  validate_specs(specs, true);
  if (!ds.normalized()) throw DataError("layer scores need a normalized panel");
  Eigen::MatrixX3d out = Eigen::MatrixX3d::Zero(ds.values().rows(), 3);
  for (const auto& s : specs) {
    const auto k = ds.code_index(s.code);
    if (!k) throw ConfigError("panel has no column '" + s.code + "'");
    out.col(static_cast<int>(s.layer)) += ds.values().col(static_cast<Eigen::Index>(*k));
  }
  out /= 5.0;
  if (out.array().isNaN().any()) throw DataError("layer scores need a complete panel");
  return out;
}

ScoreTable::ScoreTable(std::vector<std::string> countries, int first_year, int n_years,
                       Eigen::MatrixX3d layers, const LayerWeights& weights,
                       const TierThresholds& thresholds)
    : countries_(std::move(countries)),
      first_year_(first_year),
      n_years_(n_years),
      layers_(std::move(layers)),
      weights_(weights),
      thresholds_(thresholds) {
  thresholds_.validate();
  if (n_years_ < 1) throw DataError("score table needs at least one year");
  if (layers_.rows() != static_cast<Eigen::Index>(countries_.size()) * n_years_) {
    throw DataError("layer matrix does not match countries x years");
  }
  awpri_ = composite(layers_, weights_);
  tiers_.reserve(static_cast<std::size_t>(awpri_.size()));
  for (Eigen::Index r = 0; r < awpri_.size(); ++r) tiers_.push_back(assign_tier(awpri_(r), thresholds_));
}

std::optional<std::size_t> ScoreTable::country_index(std::string_view id) const {
  for (std::size_t i = 0; i < countries_.size(); ++i) {
    if (countries_[i] == id) return i;
  }
  return std::nullopt;
}

Eigen::MatrixX4d ScoreTable::cross_section(int year) const {
  if (year < first_year_ || year > last_year()) {
    throw DataError("year " + std::to_string(year) + " outside score table");
  }
  Eigen::MatrixX4d out(static_cast<Eigen::Index>(countries_.size()), 4);
  for (std::size_t i = 0; i < countries_.size(); ++i) {
    const auto r = row(i, year);
    const auto ii = static_cast<Eigen::Index>(i);
    out(ii, 0) = awpri_(r);
    out.block<1, 3>(ii, 1) = layers_.row(r);
  }
  return out;
}

Eigen::VectorXd ScoreTable::outcome(int column) const {
  if (column == 0) return awpri_;
  if (column >= 1 && column <= 3) return layers_.col(column - 1);
  throw ConfigError("outcome column must be 0..3");
}

ScoreTable ScoreTable::reweighted(const LayerWeights& w) const {
  return ScoreTable(countries_, first_year_, n_years_, layers_, w, thresholds_);
}

ScoreTable score_panel(const PanelDataset& ds, std::span<const IndicatorSpec> specs,
                       const LayerWeights& w, const TierThresholds& th) {
  std::vector<std::string> ids;
  for (const auto& c : ds.countries()) ids.push_back(c.country_id);
  return ScoreTable(std::move(ids), ds.first_year(), ds.n_years(), layer_scores(ds, specs), w, th);
}

void write_scores(std::ostream& out, const ScoreTable& st, char d) {
  out << "country" << d << "year" << d << "L1" << d << "L2" << d << "L3" << d << "awpri" << d
      << "tier\n";
  for (std::size_t i = 0; i < st.n_countries(); ++i) {
    for (int y = st.first_year(); y <= st.last_year(); ++y) {
      const auto r = st.row(i, y);
      out << st.countries()[i] << d << y;
      for (int j = 0; j < 3; ++j) out << d << text::format_double(st.layers()(r, j));
      out << d << text::format_double(st.awpri()(r)) << d
          << to_string(st.tiers()[static_cast<std::size_t>(r)]) << '\n';
    }
  }
}

ScoreTable read_layer_table(std::istream& in, const LayerWeights& w, const TierThresholds& th,
                            char delimiter) {
  std::string line;
  while (std::getline(in, line) && (text::trim(line).empty() || text::trim(line).front() == '#')) {
  }
  if (text::trim(line).empty()) throw DataError("empty layer table");
  const auto header = text::split_record(line, delimiter);
  auto find = [&](const char* name) -> std::size_t {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    throw DataError(std::string("layer table missing column '") + name + "'");
  };
  const std::size_t cc = find("country"), yc = find("year");
  const std::array<std::size_t, 3> lc{find("L1"), find("L2"), find("L3")};

  std::vector<std::string> countries;
  std::map<std::string, std::size_t> lookup;
  std::map<std::pair<std::size_t, int>, Eigen::RowVector3d> cells;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty() || text::trim(line).front() == '#') continue;
    const auto f = text::split_record(line, delimiter);
    if (f.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": wrong field count");
    }
    const auto year = text::parse_int(f[yc]);
    if (!year) throw DataError("line " + std::to_string(line_no) + ": bad year '" + f[yc] + "'");
    auto [it, inserted] = lookup.try_emplace(f[cc], countries.size());
    if (inserted) countries.push_back(f[cc]);
    Eigen::RowVector3d v;
    for (int j = 0; j < 3; ++j) {
      const auto x = text::parse_double(f[lc[static_cast<std::size_t>(j)]]);
      if (!x || !std::isfinite(*x)) {
        throw DataError("line " + std::to_string(line_no) + ": bad layer value");
      }
      v(j) = *x;
    }
    if (!cells.emplace(std::pair{it->second, static_cast<int>(*year)}, v).second) {
      throw DataError("duplicate row (" + f[cc] + ", " + std::to_string(*year) + ")");
    }
  }
  if (cells.empty()) throw DataError("layer table has no rows");
  std::set<int> years;
  for (const auto& [key, v] : cells) years.insert(key.second);
  const int first = *years.begin();
  const int n_years = *years.rbegin() - first + 1;
  if (cells.size() != countries.size() * static_cast<std::size_t>(n_years)) {
    throw DataError("layer table is not a balanced country x year panel");
  }
  Eigen::MatrixX3d layers(static_cast<Eigen::Index>(cells.size()), 3);
  for (const auto& [key, v] : cells) {
    layers.row(static_cast<Eigen::Index>(key.first) * n_years + (key.second - first)) = v;
  }
  return ScoreTable(std::move(countries), first, n_years, std::move(layers), w, th);
}

}  // namespace awpri
