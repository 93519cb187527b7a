#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <string>

#include "doctest.h"
#include "pseval/gen.hpp"
#include "pseval/problem_io.hpp"
#include "pseval/pseries.hpp"

using namespace pseval;

namespace {

bool problems_bitwise_equal(const Problem& a, const Problem& b) {
  if (a.id != b.id || a.seed != b.seed) return false;
  if (a.poly.n != b.poly.n || a.poly.d != b.poly.d) return false;
  if (!series_bitwise_equal(a.poly.a0, b.poly.a0)) return false;
  if (a.poly.monomials.size() != b.poly.monomials.size()) return false;
  for (size_t k = 0; k < a.poly.monomials.size(); ++k) {
    const Monomial& x = a.poly.monomials[k];
    const Monomial& y = b.poly.monomials[k];
    if (x.indices != y.indices || x.exponents != y.exponents) return false;
    if (!series_bitwise_equal(x.coeff, y.coeff)) return false;
  }
  if (a.z.size() != b.z.size()) return false;
  for (size_t i = 0; i < a.z.size(); ++i)
    if (!series_bitwise_equal(a.z[i], b.z[i])) return false;
  return true;
}

// returns the parse error message, or "" if the text parsed cleanly
std::string fail_msg(const std::string& text, int* line_out = nullptr) {
  try {
    problem_from_text(text);
  } catch (const ParseError& e) {
    if (line_out) *line_out = e.line();
    return e.what();
  }
  return "";
}

const std::string kSmall =
    "pseval 1\n"
    "problem t 2 1 0 1 real 7\n"
    "constant\n"
    "0x1p+0\n"
    "monomial 2\n"
    "indices 1 2\n"
    "0x1p+1\n"
    "input 1\n"
    "0x1.8p+1\n"
    "input 2\n"
    "0x1p+2\n"
    "end\n";

std::string with_line(const std::string& text, size_t lineno, const std::string& repl) {
  std::string out;
  size_t pos = 0, cur = 1;
  while (pos < text.size()) {
    const size_t nl = text.find('\n', pos);
    if (cur == lineno)
      out += repl;
    else
      out.append(text, pos, nl - pos);
    out += '\n';
    pos = nl + 1;
    ++cur;
  }
  return out;
}

}  // namespace

TEST_CASE("text round trip reproduces every bit of a generated problem") {
  const Problem p = gen_benchmark("p1", 4, 2, Mode::real, 12345);
  const Problem q = problem_from_text(problem_to_text(p));
  CHECK(problems_bitwise_equal(p, q));
}

TEST_CASE("round trip keeps complex limbs and per-variable exponents") {
  Problem p;
  p.id = "file";
  p.seed = 99;
  p.poly.n = 3;
  p.poly.d = 2;
  p.poly.a0 = random_series(1, 2, 5, Mode::cplx);
  Monomial m1;
  m1.indices = {1, 3};
  m1.exponents = {2, 1};
  m1.coeff = random_series(2, 2, 5, Mode::cplx);
  Monomial m2;
  m2.indices = {1, 2, 3};
  m2.coeff = random_series(3, 2, 5, Mode::cplx);
  p.poly.monomials = {m1, m2};
  for (int i = 0; i < 3; ++i)
    p.z.push_back(random_series(10 + static_cast<std::uint64_t>(i), 2, 5, Mode::cplx));

  const Problem q = problem_from_text(problem_to_text(p));
  CHECK(problems_bitwise_equal(p, q));
  CHECK(q.poly.monomials[0].exponents == std::vector<int>{2, 1});
  CHECK(q.poly.monomials[1].exponents.empty());
}

TEST_CASE("file round trip through write_problem and read_problem") {
  const Problem p = gen_benchmark("p2", 3, 3, Mode::cplx, 77);
  const std::string path = "test_problem_io_tmp.txt";
  write_problem(path, p);
  const Problem q = read_problem(path);
  std::remove(path.c_str());
  CHECK(problems_bitwise_equal(p, q));
}

TEST_CASE("decimal coefficient values are accepted on input") {
  const std::string text = with_line(with_line(kSmall, 4, "1.5"), 9, "-0.25");
  const Problem p = problem_from_text(text);
  CHECK(p.poly.a0.c[0].re.limb[0] == 1.5);
  CHECK(p.z[0].c[0].re.limb[0] == -0.25);
}

TEST_CASE("blank lines and trailing carriage returns are tolerated") {
  std::string text;
  size_t pos = 0;
  while (pos < kSmall.size()) {
    const size_t nl = kSmall.find('\n', pos);
    text.append(kSmall, pos, nl - pos);
    text += "\r\n\n";
    pos = nl + 1;
  }
  const Problem p = problem_from_text(text);
  CHECK(p.poly.a0.c[0].re.limb[0] == 1.0);
  CHECK(p.z[1].c[0].re.limb[0] == 4.0);
}

TEST_CASE("parse failures carry the offending line number") {
  int line = 0;

  CHECK(fail_msg(with_line(kSmall, 1, "pseval 2"), &line).find("not a pseval problem file") !=
        std::string::npos);
  CHECK(line == 1);

  CHECK(fail_msg(with_line(kSmall, 2, "problem t 2 1 0 7 real 7"), &line)
            .find("unsupported precision level") != std::string::npos);
  CHECK(line == 2);

  CHECK(fail_msg(with_line(kSmall, 2, "problem t 2 1 0 1 quad 7"), &line)
            .find("unknown mode") != std::string::npos);
  CHECK(line == 2);

  CHECK(fail_msg(with_line(kSmall, 6, "indices 1 1"), &line).find("duplicate variable index") !=
        std::string::npos);
  CHECK(line == 6);

  CHECK(fail_msg(with_line(kSmall, 6, "indices 2 1"), &line)
            .find("indices must be strictly increasing") != std::string::npos);
  CHECK(line == 6);

  CHECK(fail_msg(with_line(kSmall, 4, "0x1p+0 0x1p+0"), &line)
            .find("expected 1 values, got 2") != std::string::npos);
  CHECK(line == 4);

  CHECK(fail_msg(with_line(kSmall, 4, "nope"), &line).find("malformed number") !=
        std::string::npos);
  CHECK(line == 4);

  CHECK(fail_msg(with_line(kSmall, 12, ""), &line).find("expected the end marker") !=
        std::string::npos);

  // an exponents line with a zero entry
  std::string text = with_line(kSmall, 6, "indices 1 2\nexponents 0 1");
  CHECK(fail_msg(text, &line).find("exponents must be positive") != std::string::npos);
  CHECK(line == 7);

  // the full error text is prefixed with the line number
  const std::string msg = fail_msg(with_line(kSmall, 6, "indices 2 1"));
  CHECK(msg.find("line 6:") == 0);
}

TEST_CASE("read_problem reports an unopenable path") {
  CHECK_THROWS_AS(read_problem("no_such_directory/missing.txt"), std::runtime_error);
}
