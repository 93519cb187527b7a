#include "pseval/bigreal.hpp"

#include <cstdio>
#include <vector>

namespace pseval {

std::string BigReal::str(int digits) const {
  std::vector<char> buf(static_cast<size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

double rel_error_vs(const MultiDouble& x, const BigReal& ref) {
  BigReal xv(ref.bits());
  xv.set_md(x);
  BigReal diff(ref.bits());
  diff.sub(xv, ref);
  diff.abs_inplace();
  if (ref.is_zero()) return diff.to_double();
  BigReal denom = ref;
  denom.abs_inplace();
  BigReal q(ref.bits());
  q.div(diff, denom);
  return q.to_double();
}

}  // namespace pseval
