#ifndef BVARCAST_CSV_HPP
#define BVARCAST_CSV_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bvarcast/common.hpp"

namespace bvarcast {
namespace csv {

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace and CR
    size_t a = cell.find_first_not_of(" \t\r");
    size_t b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open '" + path + "'");
  Table t;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (t.header.empty()) {
      t.header = cells;
    } else {
      if (cells.size() != t.header.size())
        fail(path + ":" + std::to_string(lineno) + ": expected " +
             std::to_string(t.header.size()) + " columns, got " +
             std::to_string(cells.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  require(!t.header.empty(), path + ": empty file");
  return t;
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) fail("");
    return v;
  } catch (...) {
    throw Error(where + ": not a number: '" + s + "'");
  }
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot write '" + path + "'");
  return out;
}

} // namespace csv
} // namespace bvarcast

#endif
