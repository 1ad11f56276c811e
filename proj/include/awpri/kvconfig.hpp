#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace awpri {

/// Plain-text key-value file:
///
///   # comment
///   [section]
///   key = value
///
/// Keys before the first section header belong to section "". Entries keep
/// file order; a repeated key in the same section is a ConfigError.
struct KvEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

class KvFile {
 public:
  static KvFile parse(std::istream& in);
  static KvFile load(const std::string& path);

  const std::vector<KvEntry>& entries() const { return entries_; }
  std::vector<std::string> sections() const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;

 private:
  std::vector<KvEntry> entries_;
};

}  // namespace awpri
