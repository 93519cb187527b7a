#include "pseval/problem_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace pseval {

namespace {

// The format, one record per line:
//   pseval 1
//   problem <id> <n> <N> <d> <m> <real|complex> <seed>
//   constant            followed by d+1 coefficient lines
//   monomial <nk>
//   indices i1 ... ink
//   exponents e1 ... enk   (optional)
//   <d+1 coefficient lines>
//   input <i>            for i = 1..n, each followed by d+1 coefficient lines
//   end
// A coefficient line holds the m limbs of one coefficient (2m in complex
// mode: real limbs then imaginary limbs).

std::string hex_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

void append_series(std::string& out, const Series& s) {
  for (const Coeff& co : s.c) {
    for (int l = 0; l < s.m; ++l) {
      if (l) out += ' ';
      out += hex_double(co.re.limb[static_cast<size_t>(l)]);
    }
    if (s.mode == Mode::cplx)
      for (int l = 0; l < s.m; ++l) {
        out += ' ';
        out += hex_double(co.im.limb[static_cast<size_t>(l)]);
      }
    out += '\n';
  }
}

struct LineReader {
  std::istringstream in;
  int line = 0;
  std::string cur;
  bool pushed = false;

  explicit LineReader(const std::string& text) : in(text) {}

  bool next() {
    if (pushed) {
      pushed = false;
      return true;
    }
    while (std::getline(in, cur)) {
      ++line;
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      if (cur.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  void push_back() { pushed = true; }

  std::string want(const std::string& what) {
    if (!next()) throw ParseError(line, "unexpected end of file, expected " + what);
    return cur;
  }
};

std::vector<std::string> tokens_of(const std::string& s) {
  std::istringstream iss(s);
  std::vector<std::string> t;
  std::string w;
  while (iss >> w) t.push_back(w);
  return t;
}

double parse_double(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end != s + tok.size()) throw ParseError(line, "malformed number '" + tok + "'");
  return v;
}

long parse_long(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end != s + tok.size()) throw ParseError(line, "malformed integer '" + tok + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (end != s + tok.size() || tok[0] == '-')
    throw ParseError(line, "malformed seed '" + tok + "'");
  return v;
}

Series read_series(LineReader& r, int d, int m, Mode mode, const std::string& what) {
  Series s = make_series(d, m, mode);
  const size_t per = static_cast<size_t>(mode == Mode::cplx ? 2 * m : m);
  for (int k = 0; k <= d; ++k) {
    auto t = tokens_of(r.want(what + " coefficient line"));
    if (t.size() != per)
      throw ParseError(r.line, what + ": expected " + std::to_string(per) + " values, got " +
                                   std::to_string(t.size()));
    for (int l = 0; l < m; ++l)
      s.c[static_cast<size_t>(k)].re.limb[static_cast<size_t>(l)] =
          parse_double(t[static_cast<size_t>(l)], r.line);
    if (mode == Mode::cplx)
      for (int l = 0; l < m; ++l)
        s.c[static_cast<size_t>(k)].im.limb[static_cast<size_t>(l)] =
            parse_double(t[static_cast<size_t>(m + l)], r.line);
  }
  return s;
}

}  // namespace

std::string problem_to_text(const Problem& p) {
  std::string out;
  out += "pseval 1\n";
  out += "problem " + p.id + ' ' + std::to_string(p.poly.n) + ' ' +
         std::to_string(p.poly.monomials.size()) + ' ' + std::to_string(p.poly.d) + ' ' +
         std::to_string(p.poly.a0.m) + ' ' +
         (p.poly.a0.mode == Mode::cplx ? "complex" : "real") + ' ' + std::to_string(p.seed) + '\n';
  out += "constant\n";
  append_series(out, p.poly.a0);
  for (const Monomial& mo : p.poly.monomials) {
    out += "monomial " + std::to_string(mo.indices.size()) + '\n';
    out += "indices";
    for (int i : mo.indices) out += ' ' + std::to_string(i);
    out += '\n';
    if (!mo.exponents.empty()) {
      out += "exponents";
      for (int e : mo.exponents) out += ' ' + std::to_string(e);
      out += '\n';
    }
    append_series(out, mo.coeff);
  }
  for (size_t i = 0; i < p.z.size(); ++i) {
    out += "input " + std::to_string(i + 1) + '\n';
    append_series(out, p.z[i]);
  }
  out += "end\n";
  return out;
}

Problem problem_from_text(const std::string& text) {
  LineReader r(text);

  auto magic = tokens_of(r.want("the format header"));
  if (magic.size() != 2 || magic[0] != "pseval" || magic[1] != "1")
    throw ParseError(r.line, "not a pseval problem file (expected 'pseval 1')");

  auto h = tokens_of(r.want("the problem header"));
  if (h.size() != 8 || h[0] != "problem")
    throw ParseError(r.line, "malformed problem header");
  Problem p;
  p.id = h[1];
  const long n = parse_long(h[2], r.line);
  const long N = parse_long(h[3], r.line);
  const long d = parse_long(h[4], r.line);
  const long m = parse_long(h[5], r.line);
  if (n < 1) throw ParseError(r.line, "variable count must be positive");
  if (N < 1) throw ParseError(r.line, "monomial count must be positive");
  if (d < 0) throw ParseError(r.line, "negative truncation degree");
  if (!valid_precision(static_cast<int>(m)))
    throw ParseError(r.line, "unsupported precision level " + h[5]);
  Mode mode;
  if (h[6] == "real")
    mode = Mode::real;
  else if (h[6] == "complex")
    mode = Mode::cplx;
  else
    throw ParseError(r.line, "unknown mode '" + h[6] + "'");
  p.seed = parse_u64(h[7], r.line);
  p.poly.n = static_cast<int>(n);
  p.poly.d = static_cast<int>(d);

  auto c = tokens_of(r.want("the constant record"));
  if (c.size() != 1 || c[0] != "constant")
    throw ParseError(r.line, "expected the constant record");
  p.poly.a0 = read_series(r, p.poly.d, static_cast<int>(m), mode, "constant");

  for (long k = 0; k < N; ++k) {
    auto mt = tokens_of(r.want("a monomial record"));
    if (mt.size() != 2 || mt[0] != "monomial")
      throw ParseError(r.line, "expected 'monomial <count>'");
    const long nk = parse_long(mt[1], r.line);
    if (nk < 1) throw ParseError(r.line, "monomial needs at least one variable");

    Monomial mo;
    auto it = tokens_of(r.want("the indices line"));
    if (it.empty() || it[0] != "indices") throw ParseError(r.line, "expected the indices line");
    if (static_cast<long>(it.size()) - 1 != nk)
      throw ParseError(r.line, "expected " + std::to_string(nk) + " indices");
    int prev = 0;
    for (size_t t = 1; t < it.size(); ++t) {
      const long idx = parse_long(it[t], r.line);
      if (idx < 1 || idx > n) throw ParseError(r.line, "variable index out of range");
      if (idx == prev) throw ParseError(r.line, "duplicate variable index");
      if (idx < prev) throw ParseError(r.line, "indices must be strictly increasing");
      prev = static_cast<int>(idx);
      mo.indices.push_back(static_cast<int>(idx));
    }

    auto maybe = tokens_of(r.want("a coefficient or exponents line"));
    if (!maybe.empty() && maybe[0] == "exponents") {
      if (static_cast<long>(maybe.size()) - 1 != nk)
        throw ParseError(r.line, "expected " + std::to_string(nk) + " exponents");
      for (size_t t = 1; t < maybe.size(); ++t) {
        const long e = parse_long(maybe[t], r.line);
        if (e < 1) throw ParseError(r.line, "exponents must be positive");
        mo.exponents.push_back(static_cast<int>(e));
      }
    } else {
      r.push_back();
    }

    mo.coeff = read_series(r, p.poly.d, static_cast<int>(m), mode, "monomial coefficient");
    p.poly.monomials.push_back(std::move(mo));
  }

  for (long i = 1; i <= n; ++i) {
    auto zt = tokens_of(r.want("an input record"));
    if (zt.size() != 2 || zt[0] != "input" || parse_long(zt[1], r.line) != i)
      throw ParseError(r.line, "expected 'input " + std::to_string(i) + "'");
    p.z.push_back(read_series(r, p.poly.d, static_cast<int>(m), mode, "input"));
  }

  auto e = tokens_of(r.want("the end marker"));
  if (e.size() != 1 || e[0] != "end") throw ParseError(r.line, "expected the end marker");
  return p;
}

void write_problem(const std::string& path, const Problem& p) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  const std::string text = problem_to_text(p);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

Problem read_problem(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return problem_from_text(ss.str());
}

}  // namespace pseval
