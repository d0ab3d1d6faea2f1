#include "skewprod/germ.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "skewprod/errors.hpp"

namespace skewprod {

namespace {

void require_same_shape(const VerticalPoly& p, const VerticalPoly& q) {
  if (p.z_order() != q.z_order() || p.w_degree() != q.w_degree())
    throw TruncationMismatch("vertical polynomial truncation mismatch");
}

void require_order(const TruncatedSeries& s, int order, const char* what) {
  if (s.order() != order)
    throw TruncationMismatch(std::string(what) + " has z-order " + std::to_string(s.order()) +
                             ", germ has " + std::to_string(order));
}

}  // namespace

VerticalPoly::VerticalPoly(int z_order, int w_degree) : z_order_(z_order) {
  if (w_degree < 0) throw MalformedInput("w-degree must be nonnegative");
  coeffs_.assign(static_cast<std::size_t>(w_degree) + 1, TruncatedSeries(z_order));
}

VerticalPoly VerticalPoly::identity(int z_order, int w_degree) {
  VerticalPoly out(z_order, w_degree);
  if (w_degree >= 1) out[1][0] = 1.0;
  return out;
}

std::complex<double> VerticalPoly::evaluate(std::complex<double> z, std::complex<double> w) const {
  std::complex<double> acc = 0.0;
  for (int j = w_degree(); j >= 0; --j) acc = acc * w + (*this)[j].evaluate(z);
  return acc;
}

int VerticalPoly::effective_degree() const {
  for (int j = w_degree(); j >= 0; --j)
    if (!(*this)[j].is_zero()) return j;
  return -1;
}

VerticalPoly& VerticalPoly::operator+=(const VerticalPoly& o) {
  require_same_shape(*this, o);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
  return *this;
}

VerticalPoly& VerticalPoly::operator-=(const VerticalPoly& o) {
  require_same_shape(*this, o);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
  return *this;
}

VerticalPoly operator+(VerticalPoly p, const VerticalPoly& q) { return p += q; }
VerticalPoly operator-(VerticalPoly p, const VerticalPoly& q) { return p -= q; }

VerticalPoly operator*(const VerticalPoly& p, const VerticalPoly& q) {
  require_same_shape(p, q);
  const int d = p.w_degree();
  VerticalPoly out(p.z_order(), d);
  for (int i = 0; i <= d; ++i) {
    if (p[i].is_zero()) continue;
    for (int j = 0; i + j <= d; ++j) {
      if (q[j].is_zero()) continue;
      out[i + j] += series_mul(p[i], q[j]);
    }
  }
  return out;
}

VerticalPoly operator*(const TruncatedSeries& s, const VerticalPoly& p) {
  VerticalPoly out(p.z_order(), p.w_degree());
  for (int j = 0; j <= p.w_degree(); ++j)
    if (!p[j].is_zero()) out[j] = series_mul(s, p[j]);
  return out;
}

VerticalPoly substitute(const VerticalPoly& p, const VerticalPoly& q) {
  require_same_shape(p, q);
  const int top = p.effective_degree();
  VerticalPoly acc(p.z_order(), p.w_degree());
  for (int j = top; j >= 0; --j) {
    if (j != top) acc = acc * q;
    acc[0] += p[j];
  }
  return acc;
}

VerticalPoly rotate(const VerticalPoly& p, const LambdaPowers& powers) {
  VerticalPoly out(p.z_order(), p.w_degree());
  for (int j = 0; j <= p.w_degree(); ++j) out[j] = rotate(p[j], powers);
  return out;
}

double max_relative_difference(const VerticalPoly& p, const VerticalPoly& q) {
  require_same_shape(p, q);
  ScaledComplex scale;
  for (int j = 0; j <= p.w_degree(); ++j) {
    for (const auto* s : {&p[j], &q[j]}) {
      const auto m = max_modulus(*s);
      if (abs_less(scale, m)) scale = m;
    }
  }
  const ScaledComplex floor = ScaledComplex::from_parts(1.0, -1000);
  if (abs_less(scale, floor)) scale = floor;
  double worst = 0.0;
  for (int j = 0; j <= p.w_degree(); ++j) {
    for (int n = 0; n <= p.z_order(); ++n) {
      const ScaledComplex diff = p[j][n] - q[j][n];
      if (!diff.is_zero()) worst = std::max(worst, std::exp(diff.log_abs() - scale.log_abs()));
    }
  }
  return worst;
}

bool SkewGerm::parabolic_fiber(double tol) const {
  if (w_degree() < 1) return false;
  return std::abs(g[0][0].to_complex()) <= tol && std::abs(g[1][0].to_complex() - 1.0) <= tol;
}

SkewGerm make_germ(RotationNumber rot, int degree, int z_order, int w_degree) {
  if (degree < 1) throw MalformedInput("germ degree must be >= 1");
  if (w_degree < degree) throw MalformedInput("w truncation must be at least the germ degree");
  if (z_order < 0) throw MalformedInput("z truncation must be nonnegative");
  SkewGerm F;
  auto r = std::make_shared<const RotationNumber>(std::move(rot));
  F.powers = std::make_shared<const LambdaPowers>(*r, std::max(z_order, 1));
  F.rotation = std::move(r);
  F.degree = degree;
  F.g = VerticalPoly(z_order, w_degree);
  return F;
}

SkewGerm retruncate(const SkewGerm& F, int z_order, int w_degree) {
  if (w_degree < F.degree) throw MalformedInput("w truncation must be at least the germ degree");
  SkewGerm out = F;
  if (z_order > F.powers->n_max()) out.powers = std::make_shared<const LambdaPowers>(*F.rotation, z_order);
  out.g = VerticalPoly(z_order, w_degree);
  for (int j = 0; j <= std::min(w_degree, F.w_degree()); ++j) out.g[j] = retruncate(F.g[j], z_order);
  return out;
}

const char* kind_name(const FiberChange& ch) {
  struct Visitor {
    const char* operator()(const Shift&) const { return "shift"; }
    const char* operator()(const Gauge&) const { return "gauge"; }
    const char* operator()(const Bump&) const { return "bump"; }
    const char* operator()(const WScale&) const { return "wscale"; }
  };
  return std::visit(Visitor{}, ch);
}

VerticalPoly fiber_polynomial(const FiberChange& ch, int z_order, int w_degree) {
  VerticalPoly out = VerticalPoly::identity(z_order, w_degree);
  if (const auto* s = std::get_if<Shift>(&ch)) {
    require_order(s->phi, z_order, "shift series");
    out[0] = s->phi;
  } else if (const auto* gch = std::get_if<Gauge>(&ch)) {
    require_order(gch->psi, z_order, "gauge series");
    out[1] = out[1] + gch->psi;
  } else if (const auto* b = std::get_if<Bump>(&ch)) {
    require_order(b->h, z_order, "bump series");
    if (b->k < 1) throw MalformedInput("bump order k must be >= 1");
    if (b->k + 1 <= w_degree) out[b->k + 1] = b->h;
  } else {
    const auto c = std::get<WScale>(ch).c;
    out[1] = TruncatedSeries::constant(z_order, c);
  }
  return out;
}

FiberChange inverse(const FiberChange& ch) {
  if (const auto* s = std::get_if<Shift>(&ch)) return Shift{-s->phi};
  if (const auto* gch = std::get_if<Gauge>(&ch)) {
    TruncatedSeries one_plus = gch->psi;
    one_plus[0] += 1.0;
    TruncatedSeries inv = reciprocal(one_plus);
    inv[0] -= 1.0;
    return Gauge{inv};
  }
  if (const auto* w = std::get_if<WScale>(&ch)) {
    if (w->c == std::complex<double>(0.0, 0.0)) throw MalformedInput("WScale needs c != 0");
    return WScale{1.0 / w->c};
  }
  throw MalformedInput("bump changes have no inverse of the same kind");
}

VerticalPoly reversion_in_w(const TruncatedSeries& h, int k, int w_degree) {
  if (k < 1) throw MalformedInput("reversion_in_w needs k >= 1");
  const int n = h.order();
  const VerticalPoly w = VerticalPoly::identity(n, w_degree);
  if (k + 1 > w_degree || h.is_zero()) return w;
  // R = w - h R^(k+1); each pass fixes at least k more degrees.
  VerticalPoly R = w;
  const int passes = w_degree / k + 1;
  for (int pass = 0; pass < passes; ++pass) {
    VerticalPoly power = R;
    for (int e = 1; e <= k; ++e) power = power * R;
    R = w - h * power;
  }
  return R;
}

SkewGerm conjugate(const SkewGerm& F, const FiberChange& ch) {
  const int n = F.z_order();
  const int d = F.w_degree();
  SkewGerm out = F;
  const LambdaPowers& powers = *F.powers;
  if (const auto* s = std::get_if<Shift>(&ch)) {
    out.g = substitute(F.g, fiber_polynomial(ch, n, d));
    out.g[0] -= rotate(s->phi, powers);
  } else if (const auto* gch = std::get_if<Gauge>(&ch)) {
    require_order(gch->psi, n, "gauge series");
    TruncatedSeries one_plus = gch->psi;
    one_plus[0] += 1.0;
    if (one_plus[0].is_zero()) throw std::domain_error("gauge change with 1 + psi(0) = 0");
    const TruncatedSeries inv = reciprocal(rotate(one_plus, powers));
    out.g = inv * substitute(F.g, fiber_polynomial(ch, n, d));
  } else if (const auto* b = std::get_if<Bump>(&ch)) {
    const VerticalPoly inner = substitute(F.g, fiber_polynomial(ch, n, d));
    const VerticalPoly outer = rotate(reversion_in_w(b->h, b->k, d), powers);
    out.g = substitute(outer, inner);
  } else {
    const auto c = std::get<WScale>(ch).c;
    if (c == std::complex<double>(0.0, 0.0)) throw MalformedInput("WScale needs c != 0");
    ScaledComplex factor = ScaledComplex(1.0 / c);
    const ScaledComplex cs(c);
    for (int j = 0; j <= d; ++j) {
      out.g[j] = F.g[j] * factor;
      factor *= cs;
    }
  }
  return out;
}

TruncatedSeries residual_invariant_curve(const SkewGerm& F, const TruncatedSeries& phi) {
  require_order(phi, F.z_order(), "curve series");
  TruncatedSeries acc(F.z_order());
  for (int j = F.g.effective_degree(); j >= 0; --j) {
    acc = series_mul(acc, phi);
    acc += F.g[j];
  }
  return acc - rotate(phi, *F.powers);
}

}  // namespace skewprod
