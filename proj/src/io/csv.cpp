#include "gbf/io/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <vector>

namespace gbf::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + msg);
}

double field(const std::string& raw, std::size_t line, const char* name) {
  const std::string s = trim(raw);
  if (s.empty()) parse_error(line, std::string("empty ") + name);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    parse_error(line, std::string("cannot parse ") + name + " '" + s + "'");
  return v;
}

}  // namespace

ConcentrationSeries read_concentration_csv(std::istream& in, ConcentrationUnit unit) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<SamplePoint> pts;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (!header) {
      std::string h;
      for (char c : t)
        if (c != ' ' && c != '\t') h += c;
      if (h != "t,c") parse_error(lineno, "expected header 't,c'");
      header = true;
      continue;
    }
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos)
      parse_error(lineno, "expected two comma-separated fields");
    const double tv = field(t.substr(0, comma), lineno, "time");
    const double cv = field(t.substr(comma + 1), lineno, "concentration");
    if (tv < 0.0) parse_error(lineno, "time must be >= 0");
    if (cv < 0.0) parse_error(lineno, "concentration must be >= 0");
    if (!pts.empty() && !(tv > pts.back().t)) parse_error(lineno, "times must be strictly increasing");
    pts.push_back({tv, cv});
  }
  if (!header) parse_error(lineno == 0 ? 1 : lineno, "missing header 't,c'");
  return ConcentrationSeries(std::move(pts), unit);
}

ConcentrationSeries read_concentration_csv_file(const std::string& path, ConcentrationUnit unit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  return read_concentration_csv(in, unit);
}

std::string format_g6(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace gbf::io
