#pragma once

// Univariate polynomials over Scalar: symmetric functions, products,
// companion matrices and real-root extraction.

#include "numerics.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#include <span>

namespace quadra {

/// Dense polynomial, coefficient i multiplies x^i. Trailing zeros are
/// stripped, so the zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {
    coeffs_ = to_mode(std::move(coeffs_), mode_of(coeffs_));
    trim();
  }
  Polynomial(std::initializer_list<Scalar> coeffs) : Polynomial(std::vector<Scalar>(coeffs)) {}

  static Polynomial constant(Scalar c) { return Polynomial(std::vector<Scalar>{std::move(c)}); }
  static Polynomial monomial(std::size_t k) {
    std::vector<Scalar> c(k + 1);
    c[k] = 1;
    return Polynomial(std::move(c));
  }
  /// x - a
  static Polynomial linear_factor(const Scalar& a) { return Polynomial({-a, a.is_exact() ? Scalar(1) : Scalar::floating(1)}); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  Scalar coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Scalar(0); }
  Scalar leading() const { return is_zero() ? Scalar(0) : coeffs_.back(); }
  bool is_monic() const { return !is_zero() && coeffs_.back() == Scalar(1); }
  Mode mode() const { return mode_of(coeffs_); }

  Scalar operator()(const Scalar& x) const {
    Scalar acc = mode() == Mode::Float ? Scalar::floating(0) : Scalar(0);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
  }

  Rational eval_exact(const Rational& x) const {
    Rational acc = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i].rational();
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Scalar> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = Scalar(static_cast<long>(i)) * coeffs_[i];
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<Scalar> c(std::max(p.coeffs_.size(), q.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff(i) + q.coeff(i);
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) {
    std::vector<Scalar> c(std::max(p.coeffs_.size(), q.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeff(i) - q.coeff(i);
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Scalar& s, const Polynomial& p) {
    std::vector<Scalar> c = p.coeffs_;
    for (auto& x : c) x = s * x;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);

  friend bool operator==(const Polynomial& p, const Polynomial& q) { return p.coeffs_ == q.coeffs_; }

  /// Highest degree first, e.g. "x^2 - 12*x + 11".
  std::string str(const char* var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      const Scalar& c = coeffs_[i];
      if (c.is_zero()) continue;
      const bool neg = c.sign() < 0;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      const Scalar mag = c.abs();
      const bool unit = mag == Scalar(1);
      if (!unit || i == 0) out += mag.str();
      if (i > 0) {
        if (!unit) out += "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<Scalar> coeffs_;
};

inline Polynomial poly_mul(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<Scalar> c(p.coeffs().size() + q.coeffs().size() - 1);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i)
    for (std::size_t j = 0; j < q.coeffs().size(); ++j) c[i + j] += p.coeffs()[i] * q.coeffs()[j];
  return Polynomial(std::move(c));
}

inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return poly_mul(p, q); }

/// (e_0, ..., e_k) of the given points, by iterated convolution with (1 + x_j t).
inline std::vector<Scalar> elementary_symmetric(std::span<const Scalar> points) {
  std::vector<Scalar> e{mode_of(std::vector<Scalar>(points.begin(), points.end())) == Mode::Float
                            ? Scalar::floating(1)
                            : Scalar(1)};
  for (const auto& x : points) {
    e.push_back(Scalar(0));
    for (std::size_t i = e.size() - 1; i > 0; --i) e[i] += x * e[i - 1];
  }
  return e;
}

/// Monic polynomial with the given roots; the x^{k-i} coefficient is (-1)^i e_i.
inline Polynomial poly_from_roots(std::span<const Scalar> roots) {
  auto e = elementary_symmetric(roots);
  const std::size_t k = roots.size();
  std::vector<Scalar> c(k + 1);
  for (std::size_t i = 0; i <= k; ++i) c[k - i] = (i % 2) ? -e[i] : e[i];
  return Polynomial(std::move(c));
}

/// Companion matrix of a monic p = x^k - sum lambda_i x^i: ones on the
/// subdiagonal, (lambda_0, ..., lambda_{k-1}) in the last column.
inline Matrix companion_matrix(const Polynomial& p) {
  if (!p.is_monic()) throw Error(ErrorCode::NotMonic, "companion matrix needs a monic polynomial");
  const auto k = static_cast<std::size_t>(p.degree());
  if (k == 0) throw Error(ErrorCode::DegreeTooHigh, "companion matrix needs degree >= 1");
  const Scalar one = p.mode() == Mode::Float ? Scalar::floating(1) : Scalar(1);
  Matrix c(k, k);
  for (std::size_t i = 0; i + 1 < k; ++i) c(i + 1, i) = one;
  for (std::size_t i = 0; i < k; ++i) c(i, k - 1) = -p.coeff(i);
  return Matrix(k, k, c.entries());
}

enum class Degeneracy { None, ComplexRoot, RepeatedRoot };

inline const char* to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::None: return "None";
    case Degeneracy::ComplexRoot: return "ComplexRoot";
    case Degeneracy::RepeatedRoot: return "RepeatedRoot";
  }
  return "Unknown";
}

struct RealRoots {
  Degeneracy degeneracy = Degeneracy::None;
  std::vector<double> roots;  // ascending, valid when all_real_distinct()

  bool all_real_distinct() const { return degeneracy == Degeneracy::None; }
};

namespace detail {

// Parlett-Reinsch diagonal similarity with radix 2.
inline void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      if (c == 0 || r == 0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        a.row(i) *= g;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace detail

/// All roots of a monic polynomial as eigenvalues of its balanced companion
/// matrix, each polished by one Newton step. Reports ComplexRoot or
/// RepeatedRoot instead of roots when the classification thresholds fail.
inline RealRoots real_roots(const Polynomial& p, const Tolerances& tol = {}) {
  if (!p.is_monic()) throw Error(ErrorCode::NotMonic, "real_roots needs a monic polynomial");
  RealRoots out;
  const int k = p.degree();
  if (k == 0) return out;

  std::vector<long double> c(p.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.coeffs()[i].to_double();

  Eigen::MatrixXd comp = to_eigen(companion_matrix(p));
  detail::balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  if (solver.info() != Eigen::Success) {
    out.degeneracy = Degeneracy::ComplexRoot;
    return out;
  }

  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const std::complex<double> z = solver.eigenvalues()(i);
    if (std::abs(z.imag()) > tol.root_imag * std::max(1.0, std::abs(z))) {
      out.degeneracy = Degeneracy::ComplexRoot;
      out.roots.clear();
      return out;
    }
    long double x = z.real();
    long double val = 0, der = 0;
    for (std::size_t j = c.size(); j-- > 0;) {
      der = der * x + val;
      val = val * x + c[j];
    }
    if (der != 0) {
      const long double next = x - val / der;
      if (std::isfinite(static_cast<double>(next))) x = next;
    }
    out.roots.push_back(static_cast<double>(x));
  }
  std::sort(out.roots.begin(), out.roots.end());
  for (std::size_t i = 1; i < out.roots.size(); ++i) {
    const double scale = std::max({1.0, std::abs(out.roots[i]), std::abs(out.roots[i - 1])});
    if (!(out.roots[i] - out.roots[i - 1] > tol.root_separation * scale)) {
      out.degeneracy = Degeneracy::RepeatedRoot;
      out.roots.clear();
      return out;
    }
  }
  return out;
}

/// Rounds q to `bits` significant bits.
inline Rational round_bits(const Rational& q, unsigned bits) {
  mpf_class f(q, bits);
  return Rational(f);
}

/// Newton iteration on a polynomial with exact coefficients, carried out in
/// rationals rounded to `bits` significant bits after every step.
inline Rational refine_root(const Polynomial& p, const Rational& start, unsigned bits = 256) {
  const Polynomial dp = p.derivative();
  Rational x = start;
  const Rational eps = Rational(1, 1) / Rational(mpz_class(1) << (bits > 16 ? bits - 16 : 1));
  for (int iter = 0; iter < 64; ++iter) {
    const Rational fx = p.eval_exact(x);
    if (fx == 0) break;
    const Rational dfx = dp.eval_exact(x);
    if (dfx == 0) break;
    const Rational step = fx / dfx;
    x = round_bits(Rational(x - step), bits);
    Rational scale = abs(x) > 1 ? Rational(abs(x)) : Rational(1);
    if (abs(step) <= eps * scale) break;
  }
  return x;
}

/// Looks for an exact rational root of p within `radius` of x among the
/// continued fraction convergents of x with denominator <= max_den.
inline std::optional<Rational> exact_root_near(const Polynomial& p, const Rational& x, const Rational& radius,
                                               const mpz_class& max_den = mpz_class("1000000000000")) {
  if (p.eval_exact(x) == 0) return x;
  mpz_class h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  Rational rest = x;
  for (int iter = 0; iter < 200; ++iter) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
    mpz_class h = a * h_prev + h_prev2;
    mpz_class k = a * k_prev + k_prev2;
    if (k > max_den) break;
    Rational cand(h, k);
    cand.canonicalize();
    if (abs(cand - x) <= radius && p.eval_exact(cand) == 0) return cand;
    Rational frac = rest - Rational(a);
    if (frac == 0) break;
    rest = 1 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

/// Interpolating polynomial through (xs[i], ys[i]) by Newton divided differences.
inline Polynomial interpolate(std::span<const Scalar> xs, std::span<const Scalar> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::DimensionMismatch, "interpolation data");
  const std::size_t n = xs.size();
  std::vector<Scalar> dd(ys.begin(), ys.end());
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      const Scalar gap = xs[i] - xs[i - level];
      if (gap.is_zero()) throw Error(ErrorCode::RepeatedPoint, "interpolation nodes repeat");
      dd[i] = (dd[i] - dd[i - 1]) / gap;
    }
  Polynomial result;
  for (std::size_t i = n; i-- > 0;) {
    result = poly_mul(result, Polynomial::linear_factor(xs[i])) + Polynomial::constant(dd[i]);
  }
  return result;
}

}  // namespace quadra
