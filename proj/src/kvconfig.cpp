#include "awpri/kvconfig.hpp"

#include <algorithm>
#include <fstream>

#include "awpri/errors.hpp"
#include "awpri/text.hpp"

namespace awpri {

KvFile KvFile::parse(std::istream& in) {
  KvFile file;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      }
      section = std::string(text::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    KvEntry e{section, std::string(text::trim(line.substr(0, eq))),
              std::string(text::trim(line.substr(eq + 1))), line_no};
    if (e.key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (file.get(e.section, e.key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + e.key + "'");
    }
    file.entries_.push_back(std::move(e));
  }
  return file;
}

KvFile KvFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return parse(in);
}

std::vector<std::string> KvFile::sections() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (std::find(out.begin(), out.end(), e.section) == out.end()) out.push_back(e.section);
  }
  return out;
}

std::optional<std::string> KvFile::get(const std::string& section, const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) return e.value;
  }
  return std::nullopt;
}

}  // namespace awpri
