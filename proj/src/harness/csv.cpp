#include "thermjump/harness/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace thermjump::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(line, "bad number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, int line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad integer '" + s + "'");
  }
  return v;
}

JumpKind parse_kind(const std::string& s, int line) {
  if (s == "up") return JumpKind::Up;
  if (s == "down") return JumpKind::Down;
  throw ParseError(line, "bad jump kind '" + s + "'");
}

// Reads the header, then calls `row` with the fields of every data line.
template <typename Row>
void read_table(std::istream& is, const std::string& header, std::size_t columns, Row row) {
  std::string line;
  int lineno = 1;
  if (!std::getline(is, line)) throw ParseError(lineno, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ParseError(lineno, "expected header '" + header + "'");
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != columns) throw ParseError(lineno, "wrong number of fields");
    row(fields, lineno);
  }
}

}  // namespace

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_events(std::ostream& os, const std::vector<JumpEvent>& events) {
  os << "t,kind\n";
  for (const auto& e : events) os << format_double(e.time) << ',' << to_string(e.kind) << '\n';
}

std::vector<JumpEvent> read_events(std::istream& is) {
  std::vector<JumpEvent> out;
  read_table(is, "t,kind", 2, [&](const auto& f, int line) {
    out.push_back({parse_double(f[0], line), parse_kind(f[1], line)});
  });
  return out;
}

void write_driven_series(std::ostream& os, const std::vector<DrivenTrajectoryPoint>& series) {
  os << "t,pe,coh_re,coh_im\n";
  for (const auto& p : series) {
    os << format_double(p.t) << ',' << format_double(p.p_e) << ',' << format_double(p.coh_re)
       << ',' << format_double(p.coh_im) << '\n';
  }
}

std::vector<DrivenTrajectoryPoint> read_driven_series(std::istream& is) {
  std::vector<DrivenTrajectoryPoint> out;
  read_table(is, "t,pe,coh_re,coh_im", 4, [&](const auto& f, int line) {
    out.push_back({parse_double(f[0], line), parse_double(f[1], line),
                   parse_double(f[2], line), parse_double(f[3], line)});
  });
  return out;
}

void write_mode_series(std::ostream& os, const std::vector<ModeTrajectoryPoint>& series) {
  os << "t,n_expect,pe\n";
  for (const auto& p : series) {
    os << format_double(p.t) << ',' << format_double(p.n_expect) << ','
       << format_double(p.p_e) << '\n';
  }
}

std::vector<ModeTrajectoryPoint> read_mode_series(std::istream& is) {
  std::vector<ModeTrajectoryPoint> out;
  read_table(is, "t,n_expect,pe", 3, [&](const auto& f, int line) {
    out.push_back({parse_double(f[0], line), parse_double(f[1], line),
                   parse_double(f[2], line), -1});
  });
  return out;
}

void write_mode_events(std::ostream& os, const std::vector<ClassifiedJumpEvent>& events) {
  os << "t,kind,n_before,n_after,anomalous\n";
  for (const auto& e : events) {
    os << format_double(e.event.time) << ',' << to_string(e.event.kind) << ',' << e.n_before
       << ',' << e.n_after << ',' << (e.anomalous ? 1 : 0) << '\n';
  }
}

std::vector<ClassifiedJumpEvent> read_mode_events(std::istream& is) {
  std::vector<ClassifiedJumpEvent> out;
  read_table(is, "t,kind,n_before,n_after,anomalous", 5, [&](const auto& f, int line) {
    const int flag = parse_int(f[4], line);
    if (flag != 0 && flag != 1) throw ParseError(line, "anomalous must be 0 or 1");
    out.push_back({{parse_double(f[0], line), parse_kind(f[1], line)},
                   parse_int(f[2], line),
                   parse_int(f[3], line),
                   flag == 1});
  });
  return out;
}

}  // namespace thermjump::csv
