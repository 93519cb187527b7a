#pragma once

// Compiles a sparse polynomial into a flat slot layout and a layered schedule
// of convolution and addition jobs.
//
// Per monomial k with variables z_{i1},...,z_{i_nk} the convolution jobs are
//   forward   f_1 = a_k * z_{i1},  f_l = f_{l-1} * z_{il}
//   backward  b_1 = z_{i_nk} * z_{i_nk-1},  b_l = b_{l-1} * z_{i_nk-l},
//             then the in-place coefficient fold  b_{nk-2} *= a_k
//   cross     c_j = f_j * b_{nk-2-j},  c_{nk-2} = f_{nk-2} * z_{i_nk}
// which yields the monomial value in f_nk and every partial derivative in
// f_{nk-1}, the folded b_{nk-2}, or a c_j, with 3*nk-3 products for nk >= 3.
//
// Jobs are grouped into layers: everything a job reads was written in an
// earlier layer, so all jobs of one layer can run concurrently. Addition jobs
// then reduce the monomial values into p(z) and the per-variable terms into
// the gradient, pairing consecutive survivors level by level.

#include <string>
#include <vector>

#include "pseval/pseries.hpp"

namespace pseval {

struct Monomial {
  Series coeff;                // a_k
  std::vector<int> indices;    // strictly increasing, 1-based, <= n
  std::vector<int> exponents;  // empty means all 1; else positive, same length
};

struct Polynomial {
  int n = 0;  // variable count
  int d = 0;  // truncation degree
  Series a0;  // constant term
  std::vector<Monomial> monomials;
};

// slot indices are series-granular: raw double offset = slot * (d+1)
struct ConvJob {
  long in1 = 0, in2 = 0, out = 0;
  int layer = 0;
  bool copy = false;  // degenerate single-variable derivative: out := in1
};

struct AddJob {
  long src = 0, dst = 0;  // dst := dst + src
  int layer = 0;
};

// post-convolution integer scaling of one slot (chain-rule exponent factors
// that differ between monomials sharing a variable)
struct TermScale {
  long slot = 0;
  long factor = 1;
};

struct Offsets {
  int n = 0, N = 0;
  // alpha[k]: start of monomial k's forward block within the f region;
  // beta/gamma likewise for backward/cross, all relative to the f base.
  // Entry [N] is the region's total extent.
  std::vector<long> alpha, beta, gamma;
  long total_slots = 0;

  long a0_slot() const { return 0; }
  long a_slot(int k) const { return 1 + k; }          // k is 0-based
  long z_slot(int i) const { return N + i; }          // i is 1-based
  long f_base() const { return 1 + N + n; }
  long f_slot(int k, int l) const { return f_base() + alpha[k] + (l - 1); }  // l = 1..nk
  long b_slot(int k, int l) const { return f_base() + beta[k] + (l - 1); }
  long c_slot(int k, int j) const { return f_base() + gamma[k] + (j - 1); }
};

struct JobGraph {
  int n = 0, N = 0, d = 0;
  long total_slots = 0;
  std::vector<std::vector<ConvJob>> conv_layers;
  std::vector<std::vector<AddJob>> add_layers;
  long value_slot = -1;
  std::vector<long> gradient_slots;   // size n; -1 marks a variable absent everywhere
  std::vector<long> multipliers;      // size n; applied to gradients at extraction
  std::vector<TermScale> term_scales; // applied between the conv and add stages

  long conv_job_count() const;
  long add_job_count() const;
  long copy_job_count() const;
  std::vector<long> conv_layer_sizes() const;
  std::vector<long> add_layer_sizes() const;
};

void check_polynomial(const Polynomial& p);

Offsets offsets(const Polynomial& p);

// the conv jobs of monomial k (0-based), layers 1-based
std::vector<ConvJob> monomial_conv_jobs(int k, const Monomial& mono, const Offsets& off);

// pairwise reduction of each term list into its last slot; jobs of the same
// level across all lists share a layer
std::vector<std::vector<AddJob>> addition_schedule(const std::vector<std::vector<long>>& term_lists);

// per variable (0-based), the slots holding that variable's per-monomial
// derivative terms, ordered by monomial
std::vector<std::vector<long>> gradient_term_map(const Polynomial& p, const Offsets& off);

// folds exponents > 1 into the coefficient: a' = a * prod z_i^(e_i - 1),
// computed with a table of powers; returns the folded coefficient and the
// per-position integer multipliers (the exponents themselves)
std::pair<Series, std::vector<long>> fold_exponents(const Monomial& mono,
                                                    const std::vector<Series>& z, int d);

// applies fold_exponents to every monomial; the result carries exponent-free
// semantics for staging (exponent metadata is preserved on the input)
Polynomial fold_polynomial(const Polynomial& p, const std::vector<Series>& z);

JobGraph build_jobgraph(const Polynomial& p);

struct Validation {
  bool ok = true;
  std::string message;
};

// checks layer-dependency validity, disjoint writes per layer, the
// conv-before-add contract, and slot coverage; reports the first violation
Validation validate(const JobGraph& g);

}  // namespace pseval
