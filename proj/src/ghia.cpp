#include <cstdlib>
#include <fstream>
#include <sstream>

#include "igalbm/benchmarks.hpp"

namespace igalbm {

std::string default_ghia_path() {
  if (const char* dir = std::getenv("IGALBM_DATA_DIR")) return std::string(dir) + "/ghia_re100.txt";
  return std::string(IGALBM_DATA_DIR) + "/ghia_re100.txt";
}

GhiaReference load_ghia(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference data " + path);
  GhiaReference ref;
  std::vector<Sample>* table = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (!table) ref.provenance += line.substr(first + 1) + "\n";
      continue;
    }
    if (line.compare(first, 12, "[u_vertical]") == 0) {
      table = &ref.u_vertical;
      continue;
    }
    if (line.compare(first, 14, "[v_horizontal]") == 0) {
      table = &ref.v_horizontal;
      continue;
    }
    std::istringstream row(line);
    Sample s;
    if (!table || !(row >> s.coordinate >> s.value)) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed reference row");
    }
    if (!table->empty() && !(s.coordinate > table->back().coordinate)) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": coordinates must increase");
    }
    if (s.coordinate < 0.0 || s.coordinate > 1.0) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": coordinate outside [0, 1]");
    }
    table->push_back(s);
  }
  if (ref.u_vertical.empty() || ref.v_horizontal.empty()) throw ConfigError(path + ": missing table");
  return ref;
}

GhiaReference load_ghia_re100() { return load_ghia(default_ghia_path()); }

}  // namespace igalbm
