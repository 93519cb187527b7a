#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pseval/executor.hpp"
#include "pseval/gen.hpp"
#include "pseval/oracle.hpp"
#include "pseval/oracle_bigfloat.hpp"
#include "testutil.hpp"

using namespace pseval;
using testutil::Instance;

namespace {

Polynomial example_poly(Rng& rng, int d, int m) {
  Polynomial p;
  p.n = 6;
  p.d = d;
  p.a0 = testutil::md_series(rng, d, m, Mode::real);
  for (const auto& idx :
       std::vector<std::vector<int>>{{1, 3, 6}, {1, 2, 5, 6}, {2, 3, 4}}) {
    Monomial mo;
    mo.indices = idx;
    mo.coeff = testutil::md_series(rng, d, m, Mode::real);
    p.monomials.push_back(std::move(mo));
  }
  return p;
}

double big_norm(const std::vector<BigReal>& s) {
  double norm = 0.0;
  for (const BigReal& v : s) norm = std::max(norm, std::abs(v.to_double()));
  return std::max(norm, 0x1p-300);
}

double big_abs_gap(const MultiDouble& x, const BigReal& ref) {
  BigReal diff(ref.bits());
  diff.set_md(x);
  diff.sub(diff, ref);
  diff.abs_inplace();
  return diff.to_double();
}

}  // namespace

TEST_CASE("staging fills the static region and zeroes the dynamic region") {
  Rng rng(501);
  Polynomial p = example_poly(rng, 1, 2);
  std::vector<Series> z;
  for (int i = 0; i < 6; ++i) z.push_back(testutil::md_series(rng, 1, 2, Mode::real));

  DataArray a = stage(p, z);
  CHECK(a.total_slots == 28);
  REQUIRE(a.re.size() == 2);
  CHECK(a.re[0].size() == 56);  // 28 slots of d+1 = 2 doubles per limb
  CHECK(a.re[1].size() == 56);
  CHECK(a.im.empty());

  Offsets off = offsets(p);
  CHECK(series_bitwise_equal(a.read_slot(off.a0_slot()), p.a0));
  CHECK(series_bitwise_equal(a.read_slot(off.a_slot(2)), p.monomials[2].coeff));
  CHECK(series_bitwise_equal(a.read_slot(off.z_slot(1)), z[0]));
  CHECK(series_bitwise_equal(a.read_slot(off.z_slot(6)), z[5]));
  for (long s = off.f_base(); s < off.total_slots; ++s)
    CHECK(series_bitwise_equal(a.read_slot(s), make_series(1, 2, Mode::real)));
}

TEST_CASE("staging rejects inconsistent inputs") {
  Rng rng(502);
  Polynomial p = example_poly(rng, 2, 1);
  std::vector<Series> z;
  for (int i = 0; i < 6; ++i) z.push_back(testutil::md_series(rng, 2, 1, Mode::real));

  std::vector<Series> short_z(z.begin(), z.end() - 1);
  CHECK_THROWS_AS(stage(p, short_z), std::invalid_argument);

  std::vector<Series> wrong_d = z;
  wrong_d[0] = testutil::md_series(rng, 3, 1, Mode::real);
  CHECK_THROWS_AS(stage(p, wrong_d), std::invalid_argument);

  std::vector<Series> wrong_m = z;
  wrong_m[0] = testutil::md_series(rng, 2, 2, Mode::real);
  CHECK_THROWS_AS(stage(p, wrong_m), std::invalid_argument);

  Polynomial unfolded = p;
  unfolded.monomials[0].exponents = {2, 1, 1};
  CHECK_THROWS_AS(stage(unfolded, z), std::invalid_argument);
}

TEST_CASE("single-variable monomial: value a0 + a1*z1, gradient a1") {
  Rng rng(503);
  Polynomial p;
  p.n = 1;
  p.d = 4;
  p.a0 = testutil::md_series(rng, 4, 3, Mode::real);
  Monomial mo;
  mo.indices = {1};
  mo.coeff = testutil::md_series(rng, 4, 3, Mode::real);
  p.monomials.push_back(mo);
  std::vector<Series> z{testutil::md_series(rng, 4, 3, Mode::real)};

  RunReport r = evaluate(p, z);
  CHECK(series_bitwise_equal(r.value, series_add(conv(mo.coeff, z[0]), p.a0)));
  CHECK(series_bitwise_equal(r.gradient[0], mo.coeff));
  CHECK(r.conv_jobs_executed == 2);  // one product, one derivative copy
  CHECK(r.add_jobs_executed == 1);
}

TEST_CASE("uniform exponent folds into the coefficient and scales at extraction") {
  Rng rng(504);
  Polynomial p;
  p.n = 1;
  p.d = 3;
  p.a0 = testutil::md_series(rng, 3, 2, Mode::real);
  Monomial mo;
  mo.indices = {1};
  mo.exponents = {3};
  mo.coeff = testutil::md_series(rng, 3, 2, Mode::real);
  p.monomials.push_back(mo);
  std::vector<Series> z{testutil::md_series(rng, 3, 2, Mode::real)};

  RunReport r = evaluate(p, z);
  Series folded = conv(mo.coeff, conv(z[0], z[0]));
  CHECK(series_bitwise_equal(r.value, series_add(conv(folded, z[0]), p.a0)));
  CHECK(series_bitwise_equal(r.gradient[0], series_scale_int(folded, 3)));
}

TEST_CASE("variables absent from every monomial get a zero gradient") {
  Rng rng(505);
  Polynomial p;
  p.n = 3;
  p.d = 2;
  p.a0 = testutil::md_series(rng, 2, 2, Mode::real);
  Monomial mo;
  mo.indices = {1, 3};
  mo.coeff = testutil::md_series(rng, 2, 2, Mode::real);
  p.monomials.push_back(mo);
  std::vector<Series> z;
  for (int i = 0; i < 3; ++i) z.push_back(testutil::md_series(rng, 2, 2, Mode::real));

  RunReport r = evaluate(p, z);
  CHECK(series_bitwise_equal(r.gradient[1], make_series(2, 2, Mode::real)));
}

TEST_CASE("engine equals the direct oracle bitwise on 200 integer instances") {
  Rng rng(506);
  for (int it = 0; it < 200; ++it) {
    Instance inst = testutil::random_int_instance(rng, it % 2 == 1);
    Evaluation ref = eval_direct(inst.poly, inst.z);
    RunReport run = evaluate(inst.poly, inst.z, it % 5 == 0 ? 2 : 0);
    CHECK(series_bitwise_equal(run.value, ref.value));
    for (int i = 0; i < inst.poly.n; ++i)
      CHECK(series_bitwise_equal(run.gradient[static_cast<size_t>(i)],
                                 ref.gradient[static_cast<size_t>(i)]));
  }
}

TEST_CASE("complex mode agrees with the oracle on integer instances") {
  Rng rng(507);
  for (int it = 0; it < 40; ++it) {
    Instance inst = testutil::random_int_instance(rng, false);
    // rebuild the same shape with complex integer series
    Polynomial p = inst.poly;
    p.a0 = testutil::int_series(rng, p.d, 1, Mode::cplx, 1, 9);
    for (auto& mo : p.monomials) mo.coeff = testutil::int_series(rng, p.d, 1, Mode::cplx, 1, 9);
    std::vector<Series> z;
    for (int i = 0; i < p.n; ++i) z.push_back(testutil::int_series(rng, p.d, 1, Mode::cplx, 1, 3));

    Evaluation ref = eval_direct(p, z);
    RunReport run = evaluate(p, z);
    CHECK(series_bitwise_equal(run.value, ref.value));
    for (int i = 0; i < p.n; ++i)
      CHECK(series_bitwise_equal(run.gradient[static_cast<size_t>(i)],
                                 ref.gradient[static_cast<size_t>(i)]));
  }
}

TEST_CASE("parallel runs are bitwise identical to sequential") {
  Problem p1 = gen_benchmark("p1", 8, 2, Mode::real, 7);
  JobGraph g = build_jobgraph(p1.poly);

  DataArray as = stage(p1.poly, p1.z);
  RunReport seq = run_sequential(g, as);
  CHECK(seq.conv_jobs_executed == g.conv_job_count());
  CHECK(seq.add_jobs_executed == g.add_job_count());
  CHECK(seq.conv_layer_ms.size() == g.conv_layers.size());
  CHECK(seq.add_layer_ms.size() == g.add_layers.size());

  for (int w : {1, 2, 4, 8}) {
    DataArray ap = stage(p1.poly, p1.z);
    RunReport par = run_parallel(g, ap, w);
    CHECK(par.conv_jobs_executed == g.conv_job_count());
    CHECK(par.add_jobs_executed == g.add_job_count());
    CHECK(series_bitwise_equal(par.value, seq.value));
    for (int i = 0; i < p1.poly.n; ++i)
      CHECK(series_bitwise_equal(par.gradient[static_cast<size_t>(i)],
                                 seq.gradient[static_cast<size_t>(i)]));
  }
}

TEST_CASE("repeated parallel runs produce identical bits") {
  Problem p1 = gen_benchmark("p1", 8, 1, Mode::real, 11);
  JobGraph g = build_jobgraph(p1.poly);
  DataArray a0 = stage(p1.poly, p1.z);
  RunReport first = run_parallel(g, a0, 4);
  for (int rep = 0; rep < 3; ++rep) {
    DataArray a = stage(p1.poly, p1.z);
    RunReport r = run_parallel(g, a, 4);
    CHECK(series_bitwise_equal(r.value, first.value));
    for (int i = 0; i < p1.poly.n; ++i)
      CHECK(series_bitwise_equal(r.gradient[static_cast<size_t>(i)],
                                 first.gradient[static_cast<size_t>(i)]));
  }
}

TEST_CASE("single-monomial degree identity, exact on integers") {
  Rng rng(508);
  for (int it = 0; it < 30; ++it) {
    Instance inst = testutil::random_int_instance(rng, true);
    Polynomial p = inst.poly;
    p.monomials.resize(1);
    p.a0 = make_series(p.d, 1, Mode::real);

    RunReport r = evaluate(p, inst.z);
    Series lhs = conv(inst.z[0], r.gradient[0]);
    for (int i = 1; i < p.n; ++i)
      lhs = series_add(lhs, conv(inst.z[static_cast<size_t>(i)], r.gradient[static_cast<size_t>(i)]));
    long q = 0;
    for (size_t j = 0; j < p.monomials[0].indices.size(); ++j)
      q += p.monomials[0].exponents.empty() ? 1 : p.monomials[0].exponents[j];
    CHECK(series_bitwise_equal(lhs, series_scale_int(r.value, q)));
  }
}

TEST_CASE("single-monomial degree identity within the multi-double envelope") {
  Rng rng(509);
  for (int m : {2, 4}) {
    for (int it = 0; it < 10; ++it) {
      Instance inst = testutil::random_md_instance(rng, m, Mode::real, 6, 2, 5, true);
      Polynomial p = inst.poly;
      p.monomials.resize(1);
      p.a0 = make_series(p.d, m, Mode::real);

      RunReport r = evaluate(p, inst.z);
      Series lhs = conv(inst.z[0], r.gradient[0]);
      double termnorm = 0.0;
      for (int i = 1; i < p.n; ++i)
        lhs = series_add(lhs, conv(inst.z[static_cast<size_t>(i)], r.gradient[static_cast<size_t>(i)]));
      for (int i = 0; i < p.n; ++i) {
        Series t = conv(inst.z[static_cast<size_t>(i)], r.gradient[static_cast<size_t>(i)]);
        for (const Coeff& co : t.c) termnorm = std::max(termnorm, std::abs(md_to_double(co.re)));
      }
      long q = 0;
      for (size_t j = 0; j < p.monomials[0].indices.size(); ++j)
        q += p.monomials[0].exponents.empty() ? 1 : p.monomials[0].exponents[j];
      Series rhs = series_scale_int(r.value, q);

      const double tol = std::ldexp(1.0, 20 - 52 * m) * std::max(termnorm, 1.0);
      for (int k = 0; k <= p.d; ++k) {
        double gap = std::abs(md_to_double(md_sub(lhs.c[static_cast<size_t>(k)].re,
                                                  rhs.c[static_cast<size_t>(k)].re)));
        CHECK(gap <= tol);
      }
    }
  }
}

TEST_CASE("degree-0 finite difference matches the gradient") {
  Rng rng(510);
  for (int it = 0; it < 10; ++it) {
    const int m = 2 + (it % 2);
    Instance inst = testutil::random_md_instance(rng, m, Mode::real);
    RunReport base = evaluate(inst.poly, inst.z);

    const int var = inst.poly.monomials[0].indices[0] - 1;
    const double h = 0x1p-20;
    std::vector<Series> zp = inst.z;
    zp[static_cast<size_t>(var)].c[0].re =
        md_add(zp[static_cast<size_t>(var)].c[0].re, md_from_double(h, m));
    RunReport pert = evaluate(inst.poly, zp);

    const double dv =
        md_to_double(md_sub(pert.value.c[0].re, base.value.c[0].re)) / h;
    const double gd = md_to_double(base.gradient[static_cast<size_t>(var)].c[0].re);
    CHECK(std::abs(dv - gd) <= 1e-6 * std::max(std::abs(gd), 1e-3));
  }
}

TEST_CASE("engine accuracy against the big-float reference") {
  Rng rng(511);
  Instance inst = testutil::random_md_instance(rng, 4, Mode::real, 5, 6, 16, false, 16);
  BigEvaluation ref = eval_bigfloat(inst.poly, inst.z, oracle_bits(4) + 64);
  RunReport run = evaluate(inst.poly, inst.z);

  const double tol = std::ldexp(1.0, 16 - 52 * 4) * 64.0;
  const double vnorm = big_norm(ref.value);
  for (int k = 0; k <= inst.poly.d; ++k)
    CHECK(big_abs_gap(run.value.c[static_cast<size_t>(k)].re, ref.value[static_cast<size_t>(k)]) <=
          tol * vnorm);
  for (int i = 0; i < inst.poly.n; ++i) {
    const double gnorm = big_norm(ref.gradient[static_cast<size_t>(i)]);
    for (int k = 0; k <= inst.poly.d; ++k)
      CHECK(big_abs_gap(run.gradient[static_cast<size_t>(i)].c[static_cast<size_t>(k)].re,
                        ref.gradient[static_cast<size_t>(i)][static_cast<size_t>(k)]) <=
            tol * gnorm);
  }
}

TEST_CASE("operation counting reproduces the published totals") {
  Problem p1 = gen_benchmark("p1", 8, 1, Mode::real, 1);
  JobGraph g = build_jobgraph(p1.poly);
  const OpCost deca{397, 3089};
  CHECK(flop_count_mul(g, 152, Mode::real, deca) == 1'184'444'368'380LL);
  CHECK(flop_count_add(g, 152, Mode::real, deca) == 151'782'283'404LL);
  CHECK(flop_count(g, 152, Mode::real, deca) == 1'336'226'651'784LL);
}

TEST_CASE("operation counting small cases") {
  JobGraph g;
  g.n = 1;
  g.N = 1;
  g.total_slots = 4;
  g.conv_layers = {{ConvJob{1, 2, 3, 1, false}}};
  const OpCost unit{1, 1};

  // one conv job at d=0: a single multiplication
  CHECK(flop_count(g, 0, Mode::real, unit) == 1);

  // d=1: 4 products + 2 accumulations; complex: 4x products, cross adds
  CHECK(flop_count(g, 1, Mode::real, unit) == 6);
  CHECK(flop_count_mul(g, 1, Mode::cplx, unit) == 16);
  CHECK(flop_count_add(g, 1, Mode::cplx, unit) == 12);

  // copy jobs are free
  g.conv_layers[0].push_back(ConvJob{1, 0, 2, 1, true});
  CHECK(flop_count(g, 1, Mode::real, unit) == 6);

  // one addition job moves d+1 coefficients: 2 additions, 4 in complex
  g.add_layers = {{AddJob{3, 2, 1}}};
  CHECK(flop_count(g, 1, Mode::real, unit) == 8);
  CHECK(flop_count_add(g, 1, Mode::cplx, unit) == 16);
}

TEST_CASE("run reports carry the reporting-cost operation total") {
  Rng rng(512);
  Instance inst = testutil::random_int_instance(rng, false);
  JobGraph g = build_jobgraph(inst.poly);
  RunReport r = evaluate(inst.poly, inst.z);
  CHECK(r.double_op_count ==
        flop_count(g, inst.poly.d, Mode::real, reporting_cost(1)));
  CHECK(r.double_op_count > 0);
}
