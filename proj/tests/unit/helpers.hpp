#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "awpri/panel.hpp"

namespace awpri::fixtures {

inline std::vector<IndicatorSpec> make_specs(int per_layer) {
  std::vector<IndicatorSpec> specs;
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < per_layer; ++j)
      specs.push_back({"x" + std::to_string(l + 1) + std::to_string(j + 1), static_cast<Layer>(l), false, ""});
  return specs;
}

inline std::string data_path(const std::string& name) { return std::string(AWPRI_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace awpri::fixtures
