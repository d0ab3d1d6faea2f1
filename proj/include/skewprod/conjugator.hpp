#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "skewprod/germ.hpp"

namespace skewprod {

/// Output of the normalization pipeline:
///   g(z, w) = w + jet_{k+1} w^(k+1) + ... + jet_{k+h+1} w^(k+h+1) + sum_m tail_m(z) w^m
/// with tail_m(0) equal to the original g_0 coefficients.
struct NormalForm {
  int k = 1;
  int h = 0;
  std::vector<ScaledComplex> jet;     // constants of w^(k+1) .. w^(k+h+1)
  std::optional<std::complex<double>> b;  // coefficient of w^(2k+1) after the parabolic reduction
  int tail_start = 0;                 // w-degree of tail.front()
  std::vector<TruncatedSeries> tail;  // z-dependent coefficients from tail_start to D_w
  SkewGerm germ;                      // the conjugated germ itself

  const ScaledComplex& jet_coefficient(int m) const { return jet.at(static_cast<std::size_t>(m - k - 1)); }
};

struct StageResidual {
  std::string stage;
  double residual = 0.0;
};

/// Everything applied by normalize, in order. sigma is the base
/// linearization (absent when the base was already linear).
struct ChangeLog {
  int z_order = 0;
  int w_degree = 0;
  std::optional<TruncatedSeries> sigma;
  std::vector<FiberChange> changes;
  std::vector<StageResidual> residuals;
};

/// sigma with sigma(lambda z) = f(sigma(z)), sigma_1 = 1, for f(z) = lambda z + O(z^2).
TruncatedSeries linearize_base(const TruncatedSeries& f, const LambdaPowers& powers);
/// sigma(lambda z) - f(sigma(z))
TruncatedSeries base_residual(const TruncatedSeries& f, const TruncatedSeries& sigma, const LambdaPowers& powers);
/// Replaces every a_j(z) by a_j(sigma(z)).
SkewGerm pull_back_base(const SkewGerm& F, const TruncatedSeries& sigma);

/// Invariant curve {w = phi(z)} with phi_0 = 0; needs a_0(0) = 0, a_1(0) = 1.
TruncatedSeries solve_invariant_curve(const SkewGerm& F);
/// psi making the linear coefficient identically 1; needs a_0 == 0, a_1(0) = 1.
TruncatedSeries solve_linear_gauge(const SkewGerm& F);
/// xi making the w^(k+1) coefficient constant; needs w + constants up to w^k.
TruncatedSeries solve_order_bump(const SkewGerm& F, int k);

/// Least k with g_{0,k+1} != 0, ignoring coefficients below rel_tol times the
/// largest z = 0 coefficient. Throws IdenticallyLinearFiber if none.
int detect_parabolic_order(const SkewGerm& F, double rel_tol = 1e-10);

/// max residual coefficient over the scale of the terms that produced it.
double invariant_curve_residual(const SkewGerm& F, const TruncatedSeries& phi);
/// Largest z-dependent part of coefficient w^m relative to the germ's scale.
double z_dependence(const SkewGerm& F, int m);

struct NormalizeResult {
  NormalForm form;
  ChangeLog log;
};

/// Invariant curve -> linear gauge -> order bumps for every w-degree 2..k+h+1.
/// `base`, when given, is f(z) = lambda z + O(z^2) and is linearized first.
NormalizeResult normalize(const SkewGerm& F, int h_target, int z_order, int w_degree,
                          const std::optional<TruncatedSeries>& base = std::nullopt);

/// Re-applies the log to F with series::conjugate.
SkewGerm replay(const SkewGerm& F, const ChangeLog& log);
/// Composes every logged change into one map Phi and returns the relative
/// defect of F o Phi = Phi o F~ (independent of the inverse formulas).
double semiconjugacy_residual(const SkewGerm& F, const ChangeLog& log, const SkewGerm& normal);

struct ReducedForm {
  NormalForm form;          // k, jet (w^(k+1)..w^(2k+1)), b, tail from 2k+2
  std::complex<double> c;   // WScale factor, c^k g_{0,k+1} = -1
  std::vector<std::pair<int, ScaledComplex>> q;  // (eliminated degree, coefficient)
  std::vector<FiberChange> changes;
};

/// Brings a normal form of depth h >= k to w - w^(k+1) + b w^(2k+1) + O(w^(2k+2)).
ReducedForm reduce_parabolic_tail(const NormalForm& nf, int w_degree);

}  // namespace skewprod
