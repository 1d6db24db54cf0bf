#pragma once

// Shared fixtures, seeded generators and brute-force oracles for the tests.

#include <quadra/verify.hpp>

#include <random>

namespace qt {

using namespace quadra;

inline Scalar q(const char* text) { return parse_scalar(text); }

inline std::vector<Scalar> qs(std::initializer_list<const char*> texts) {
  std::vector<Scalar> out;
  for (const char* t : texts) out.push_back(q(t));
  return out;
}

inline Matrix qm(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::vector<Scalar> entries;
  std::size_t n = 0, m = 0;
  for (const auto& row : rows) {
    m = row.size();
    ++n;
    for (const char* t : row) entries.push_back(q(t));
  }
  return Matrix(n, m, std::move(entries));
}

/// gamma_i = i!, i = 0..degree
inline MomentSequence factorial_moments(std::size_t degree) {
  std::vector<Scalar> g;
  Rational f = 1;
  for (std::size_t i = 0; i <= degree; ++i) {
    if (i > 0) f *= static_cast<unsigned long>(i);
    g.push_back(Scalar(f));
  }
  return MomentSequence(std::move(g));
}

struct Gen {
  std::mt19937_64 rng;

  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  bool coin() { return integer(0, 1) == 1; }

  /// k / den with k uniform in [lo * den, hi * den]
  Scalar rational(long lo, long hi, long den) { return Scalar(integer(lo * den, hi * den), den); }

  Scalar nonzero_rational(long lo, long hi, long den) {
    for (;;) {
      Scalar s = rational(lo, hi, den);
      if (!s.is_zero()) return s;
    }
  }

  std::vector<Scalar> distinct_rationals(std::size_t n, long lo, long hi, long den, long min_gap = 1) {
    std::vector<long> ks;
    while (ks.size() < n) {
      const long k = integer(lo * den, hi * den);
      bool ok = true;
      for (long o : ks) ok = ok && std::abs(o - k) >= min_gap;
      if (ok) ks.push_back(k);
    }
    std::vector<Scalar> out;
    for (long k : ks) out.push_back(Scalar(k, den));
    return out;
  }

  Matrix matrix(std::size_t rows, std::size_t cols, long lo, long hi, long den) {
    std::vector<Scalar> e;
    for (std::size_t i = 0; i < rows * cols; ++i) e.push_back(rational(lo, hi, den));
    return Matrix(rows, cols, std::move(e));
  }

  /// Exact measure with `atoms` distinct real atoms of positive density.
  Measure measure(std::size_t atoms, long lo = -10, long hi = 10, long den = 100) {
    std::vector<WeightedAtom> w;
    for (const auto& x : distinct_rationals(atoms, lo, hi, den))
      w.push_back({Atom::real(x), Scalar(integer(10, 300), 100)});
    return Measure(std::move(w));
  }
};

/// Laplace expansion along the first row; exponential, for small matrices only.
inline Scalar cofactor_det(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return Scalar(1);
  if (n == 1) return a(0, 0);
  Scalar acc = a.mode() == Mode::Float ? Scalar::floating(0) : Scalar(0);
  for (std::size_t c = 0; c < n; ++c) {
    if (a(0, c).is_zero()) continue;
    std::vector<Scalar> minor;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) minor.push_back(a(i, j));
    const Scalar term = a(0, c) * cofactor_det(Matrix(n - 1, n - 1, std::move(minor)));
    acc += (c % 2) ? -term : term;
  }
  return acc;
}

/// A_k ... A_1, where A_i is (d-i+1) x (d-i+2) with -x_i on the diagonal and
/// 1 on the superdiagonal.
inline Matrix band_by_product(std::span<const Scalar> points, std::size_t d) {
  Matrix acc = Matrix::identity(d + 1);
  for (std::size_t i = 1; i <= points.size(); ++i) {
    const std::size_t rows = d - i + 1, cols = d - i + 2;
    Matrix a(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      a(r, r) = -points[i - 1];
      a(r, r + 1) = Scalar(1);
    }
    acc = Matrix(rows, cols, a.entries()) * acc;
  }
  return acc;
}

/// Principal submatrix on the index set encoded by `mask`.
inline Matrix principal(const Matrix& a, unsigned mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (mask & (1u << i)) idx.push_back(i);
  std::vector<Scalar> e;
  for (auto i : idx)
    for (auto j : idx) e.push_back(a(i, j));
  return Matrix(idx.size(), idx.size(), std::move(e));
}

/// Positive semidefinite iff every principal minor is >= 0 (exact).
inline bool psd_by_principal_minors(const Matrix& a) {
  for (unsigned mask = 1; mask < (1u << a.rows()); ++mask)
    if (cofactor_det(principal(a, mask)).sign() < 0) return false;
  return true;
}

/// Positive definite iff every leading principal minor is > 0, by cofactors.
inline bool pd_by_leading_minors(const Matrix& a) {
  for (std::size_t k = 1; k <= a.rows(); ++k)
    if (cofactor_det(a.leading(k)).sign() <= 0) return false;
  return true;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace qt
