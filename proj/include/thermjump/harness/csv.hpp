#pragma once

// CSV encodings of records and series. Doubles are written with 17
// significant digits so that parse(serialize(x)) == x.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermjump/driven.hpp"
#include "thermjump/record.hpp"
#include "thermjump/single_mode.hpp"

namespace thermjump::csv {

/// Thrown on malformed input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

std::string format_double(double v);

void write_events(std::ostream& os, const std::vector<JumpEvent>& events);
std::vector<JumpEvent> read_events(std::istream& is);

void write_driven_series(std::ostream& os, const std::vector<DrivenTrajectoryPoint>& series);
std::vector<DrivenTrajectoryPoint> read_driven_series(std::istream& is);

void write_mode_series(std::ostream& os, const std::vector<ModeTrajectoryPoint>& series);
/// n_index is not part of the encoding and reads back as -1.
std::vector<ModeTrajectoryPoint> read_mode_series(std::istream& is);

void write_mode_events(std::ostream& os, const std::vector<ClassifiedJumpEvent>& events);
std::vector<ClassifiedJumpEvent> read_mode_events(std::istream& is);

}  // namespace thermjump::csv
