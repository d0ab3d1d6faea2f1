#include "skewprod/conjugator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skewprod/errors.hpp"

namespace skewprod {

namespace {

constexpr double kPreconditionTol = 1e-8;

ScaledComplex germ_scale(const SkewGerm& F) {
  ScaledComplex scale = 1.0;
  for (int j = 0; j <= F.w_degree(); ++j) {
    const auto m = max_modulus(F.g[j]);
    if (abs_less(scale, m)) scale = m;
  }
  return scale;
}

double ratio(const ScaledComplex& x, const ScaledComplex& scale) {
  if (x.is_zero()) return 0.0;
  return std::exp(x.log_abs() - scale.log_abs());
}

double max_tail_ratio(const TruncatedSeries& s, int from, const ScaledComplex& scale) {
  double worst = 0.0;
  for (int n = from; n <= s.order(); ++n) worst = std::max(worst, ratio(s[n], scale));
  return worst;
}

void require_parabolic_fiber(const SkewGerm& F, const char* who) {
  if (F.w_degree() < 1) throw MalformedInput(std::string(who) + ": germ has no linear term");
  const double scale = std::max(1.0, std::exp(germ_scale(F).log_abs()));
  if (std::abs(F.g[0][0].to_complex()) > kPreconditionTol * scale ||
      std::abs(F.g[1][0].to_complex() - 1.0) > kPreconditionTol * scale)
    throw MalformedInput(std::string(who) + ": needs a_0(0) = 0 and a_1(0) = 1");
}

void require_zero_series(const TruncatedSeries& s, const ScaledComplex& scale, int from, const char* what) {
  if (max_tail_ratio(s, from, scale) > kPreconditionTol)
    throw MalformedInput(std::string(what));
}

}  // namespace

TruncatedSeries linearize_base(const TruncatedSeries& f, const LambdaPowers& powers) {
  const int n = f.order();
  if (n < 1) throw MalformedInput("linearize_base needs order >= 1");
  if (n > powers.n_max()) throw TruncationMismatch("power table shorter than base series");
  if (!f[0].is_zero() || std::abs(f[1].to_complex() - powers.lambda()) > 1e-12)
    throw MalformedInput("linearize_base needs f(0) = 0 and f'(0) = lambda");
  TruncatedSeries sigma = TruncatedSeries::monomial(n, 1);
  for (int p = 2; p <= n; ++p) {
    // sigma_p is still zero here, so [z^p] f(sigma) collects only known terms.
    const TruncatedSeries image = compose(f, sigma);
    sigma[p] = image[p] / powers.divisor_lambda(p);
  }
  return sigma;
}

TruncatedSeries base_residual(const TruncatedSeries& f, const TruncatedSeries& sigma, const LambdaPowers& powers) {
  return rotate(sigma, powers) - compose(f, sigma);
}

SkewGerm pull_back_base(const SkewGerm& F, const TruncatedSeries& sigma) {
  SkewGerm out = F;
  for (int j = 0; j <= F.w_degree(); ++j) out.g[j] = compose(F.g[j], sigma);
  return out;
}

TruncatedSeries solve_invariant_curve(const SkewGerm& F) {
  require_parabolic_fiber(F, "solve_invariant_curve");
  const int n = F.z_order();
  const int top = F.g.effective_degree();
  TruncatedSeries phi(n);
  for (int p = 1; p <= n; ++p) {
    // Horner for sum_j a_j phi^j with phi_p = 0; only coefficient p is used.
    TruncatedSeries acc(n);
    for (int j = top; j >= 0; --j) {
      acc = series_mul(acc, phi);
      acc += F.g[j];
    }
    phi[p] = acc[p] / F.powers->divisor(p);
  }
  return phi;
}

TruncatedSeries solve_linear_gauge(const SkewGerm& F) {
  require_parabolic_fiber(F, "solve_linear_gauge");
  const ScaledComplex scale = germ_scale(F);
  require_zero_series(F.g[0], scale, 0, "solve_linear_gauge needs a_0 == 0");
  const int n = F.z_order();
  const TruncatedSeries& a1 = F.g[1];
  TruncatedSeries psi(n);
  for (int p = 1; p <= n; ++p) {
    ScaledComplex acc = a1[p];
    for (int m = 1; m < p; ++m) acc += a1[m] * psi[p - m];
    psi[p] = acc / F.powers->divisor(p);
  }
  return psi;
}

TruncatedSeries solve_order_bump(const SkewGerm& F, int k) {
  if (k < 1) throw MalformedInput("solve_order_bump needs k >= 1");
  if (k + 1 > F.w_degree()) throw MalformedInput("solve_order_bump: w^(k+1) beyond truncation");
  require_parabolic_fiber(F, "solve_order_bump");
  const ScaledComplex scale = germ_scale(F);
  require_zero_series(F.g[0], scale, 0, "solve_order_bump needs a_0 == 0");
  for (int j = 1; j <= k; ++j)
    require_zero_series(F.g[j], scale, 1, "solve_order_bump needs constant coefficients below w^(k+1)");
  const int n = F.z_order();
  const TruncatedSeries& alpha = F.g[k + 1];
  TruncatedSeries xi(n);
  for (int p = 1; p <= n; ++p) xi[p] = alpha[p] / F.powers->divisor(p);
  return xi;
}

int detect_parabolic_order(const SkewGerm& F, double rel_tol) {
  double biggest = 0.0;
  for (int j = 2; j <= F.w_degree(); ++j) biggest = std::max(biggest, std::abs(F.g[j][0].to_complex()));
  if (biggest > 0.0) {
    for (int j = 2; j <= F.w_degree(); ++j)
      if (std::abs(F.g[j][0].to_complex()) >= rel_tol * biggest) return j - 1;
  }
  throw IdenticallyLinearFiber("g_0(w) is identically w to truncation");
}

double invariant_curve_residual(const SkewGerm& F, const TruncatedSeries& phi) {
  const TruncatedSeries r = residual_invariant_curve(F, phi);
  ScaledComplex scale = germ_scale(F);
  if (const auto m = max_modulus(phi); abs_less(scale, m)) scale = m;
  return max_tail_ratio(r, 0, scale);
}

double z_dependence(const SkewGerm& F, int m) {
  return max_tail_ratio(F.g[m], 1, germ_scale(F));
}

NormalizeResult normalize(const SkewGerm& F, int h_target, int z_order, int w_degree,
                          const std::optional<TruncatedSeries>& base) {
  if (h_target < 0) throw MalformedInput("normalize needs h >= 0");
  SkewGerm G = retruncate(F, z_order, w_degree);
  ChangeLog log;
  log.z_order = z_order;
  log.w_degree = w_degree;

  if (base) {
    const TruncatedSeries f = retruncate(*base, z_order);
    TruncatedSeries sigma = linearize_base(f, *G.powers);
    log.residuals.push_back({"base_linearization", max_relative_difference(rotate(sigma, *G.powers), compose(f, sigma))});
    G = pull_back_base(G, sigma);
    log.sigma = std::move(sigma);
  }
  const SkewGerm start = G;

  require_parabolic_fiber(G, "normalize");
  const int k = detect_parabolic_order(G);
  const int top = k + h_target + 1;
  if (top > w_degree) throw MalformedInput("normalize: k + h + 1 exceeds the w truncation");

  const TruncatedSeries phi = solve_invariant_curve(G);
  log.residuals.push_back({"invariant_curve", invariant_curve_residual(G, phi)});
  log.changes.emplace_back(Shift{phi});
  G = conjugate(G, log.changes.back());

  const TruncatedSeries psi = solve_linear_gauge(G);
  log.changes.emplace_back(Gauge{psi});
  G = conjugate(G, log.changes.back());
  log.residuals.push_back({"linear_gauge", z_dependence(G, 1)});

  for (int m = 2; m <= top; ++m) {
    const TruncatedSeries xi = solve_order_bump(G, m - 1);
    log.changes.emplace_back(Bump{xi, m - 1});
    G = conjugate(G, log.changes.back());
    log.residuals.push_back({"order_bump_w" + std::to_string(m), z_dependence(G, m)});
  }

  NormalForm form;
  form.k = k;
  form.h = h_target;
  for (int m = k + 1; m <= top; ++m) form.jet.push_back(G.g[m][0]);
  form.tail_start = top + 1;
  for (int m = top + 1; m <= w_degree; ++m) form.tail.push_back(G.g[m]);
  form.germ = G;

  // Tail constants must be the untouched z = 0 coefficients.
  double tail_defect = 0.0;
  const ScaledComplex scale = germ_scale(start);
  for (int m = top + 1; m <= w_degree; ++m) tail_defect = std::max(tail_defect, ratio(G.g[m][0] - start.g[m][0], scale));
  log.residuals.push_back({"tail_constants", tail_defect});
  log.residuals.push_back({"replay", max_relative_difference(replay(F, log).g, G.g)});
  log.residuals.push_back({"semiconjugacy", semiconjugacy_residual(F, log, G)});
  return {std::move(form), std::move(log)};
}

SkewGerm replay(const SkewGerm& F, const ChangeLog& log) {
  SkewGerm G = retruncate(F, log.z_order, log.w_degree);
  if (log.sigma) G = pull_back_base(G, *log.sigma);
  for (const auto& ch : log.changes) G = conjugate(G, ch);
  return G;
}

double semiconjugacy_residual(const SkewGerm& F, const ChangeLog& log, const SkewGerm& normal) {
  SkewGerm G = retruncate(F, log.z_order, log.w_degree);
  if (log.sigma) G = pull_back_base(G, *log.sigma);
  const int n = log.z_order;
  const int d = log.w_degree;
  VerticalPoly phi = VerticalPoly::identity(n, d);
  for (auto it = log.changes.rbegin(); it != log.changes.rend(); ++it)
    phi = substitute(fiber_polynomial(*it, n, d), phi);
  const VerticalPoly lhs = substitute(G.g, phi);
  const VerticalPoly rhs = substitute(rotate(phi, *G.powers), normal.g);
  return max_relative_difference(lhs, rhs);
}

ReducedForm reduce_parabolic_tail(const NormalForm& nf, int w_degree) {
  const int k = nf.k;
  if (nf.h < k) throw MalformedInput("reduce_parabolic_tail needs normalization depth h >= k");
  if (2 * k + 1 > w_degree) throw MalformedInput("reduce_parabolic_tail needs D_w >= 2k + 1");
  ReducedForm out;
  SkewGerm G = retruncate(nf.germ, nf.germ.z_order(), w_degree);
  const std::complex<double> lead = G.g[k + 1][0].to_complex();
  if (lead == std::complex<double>(0.0, 0.0)) throw MalformedInput("reduce_parabolic_tail: g_{0,k+1} = 0");
  out.c = std::pow(-1.0 / lead, 1.0 / k);
  out.changes.emplace_back(WScale{out.c});
  G = conjugate(G, out.changes.back());
  for (int m = k + 2; m <= 2 * k; ++m) {
    // w + q w^p moves the w^m coefficient by (p - k - 1) q, p = m - k <= k.
    const int p = m - k;
    const ScaledComplex q = G.g[m][0] / ScaledComplex(static_cast<double>(k + 1 - p));
    out.q.emplace_back(m, q);
    if (q.is_zero()) continue;
    out.changes.emplace_back(Bump{TruncatedSeries::constant(G.z_order(), q), p - 1});
    G = conjugate(G, out.changes.back());
  }
  NormalForm& form = out.form;
  form.k = k;
  form.h = k;
  for (int m = k + 1; m <= 2 * k + 1; ++m) form.jet.push_back(G.g[m][0]);
  form.b = G.g[2 * k + 1][0].to_complex();
  form.tail_start = 2 * k + 2;
  for (int m = 2 * k + 2; m <= w_degree; ++m) form.tail.push_back(G.g[m]);
  form.germ = std::move(G);
  return out;
}

}  // namespace skewprod
