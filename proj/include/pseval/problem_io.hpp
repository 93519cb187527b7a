#pragma once

// Line-oriented text serialization of problems. Coefficients are written as
// hexadecimal binary64 limbs, so a write/read cycle reproduces every bit;
// plain decimal values are accepted on input. Parse failures carry the
// 1-based line number of the offending line.

#include <stdexcept>
#include <string>

#include "pseval/gen.hpp"

namespace pseval {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

std::string problem_to_text(const Problem& p);
Problem problem_from_text(const std::string& text);

void write_problem(const std::string& path, const Problem& p);
Problem read_problem(const std::string& path);  // throws on open failure too

}  // namespace pseval
