#pragma once

// Moment sequences, the Riesz functional, Hankel moment and localizing
// matrices, the banded elimination matrix B_k and recursive extension.

#include "polynomials.hpp"

namespace quadra {

/// gamma_0, ..., gamma_D. Never empty.
class MomentSequence {
 public:
  explicit MomentSequence(std::vector<Scalar> gamma) : gamma_(std::move(gamma)) {
    if (gamma_.empty()) throw Error(ErrorCode::InvalidInput, "moment sequence is empty");
    gamma_ = to_mode(std::move(gamma_), mode_of(gamma_));
  }
  MomentSequence(std::initializer_list<Scalar> gamma) : MomentSequence(std::vector<Scalar>(gamma)) {}

  std::size_t degree() const { return gamma_.size() - 1; }
  std::size_t size() const { return gamma_.size(); }
  const Scalar& operator[](std::size_t i) const { return gamma_[i]; }
  const std::vector<Scalar>& values() const { return gamma_; }
  Mode mode() const { return mode_of(gamma_); }

  /// gamma_0, ..., gamma_degree
  MomentSequence truncated(std::size_t degree) const {
    if (degree > this->degree()) throw Error(ErrorCode::IndexOutOfRange, "truncation above degree");
    return MomentSequence(std::vector<Scalar>(gamma_.begin(), gamma_.begin() + degree + 1));
  }

  MomentSequence appended(std::span<const Scalar> tail) const {
    std::vector<Scalar> g = gamma_;
    g.insert(g.end(), tail.begin(), tail.end());
    return MomentSequence(std::move(g));
  }

  friend bool operator==(const MomentSequence& a, const MomentSequence& b) { return a.gamma_ == b.gamma_; }

 private:
  std::vector<Scalar> gamma_;
};

struct LocalizedSequence {
  MomentSequence base;
  Polynomial f;
  std::vector<Scalar> values;  // L(f x^i), i = 0 .. D - deg f
};

/// L(p) = sum p_i gamma_i.
inline Scalar riesz_eval(const MomentSequence& gamma, const Polynomial& p) {
  if (p.degree() > static_cast<int>(gamma.degree()))
    throw Error(ErrorCode::DegreeTooHigh, "polynomial degree exceeds the moment degree");
  Scalar acc = combine(gamma.mode(), p.mode()) == Mode::Float ? Scalar::floating(0) : Scalar(0);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) acc += p.coeffs()[i] * gamma[i];
  return acc;
}

/// (gamma_i, ..., gamma_{i+j})
inline Vector moment_vector(const MomentSequence& gamma, std::size_t i, std::size_t j) {
  if (i + j > gamma.degree()) throw Error(ErrorCode::IndexOutOfRange, "moment vector past degree");
  return Vector(gamma.values().begin() + static_cast<std::ptrdiff_t>(i),
                gamma.values().begin() + static_cast<std::ptrdiff_t>(i + j + 1));
}

namespace detail {

inline Matrix hankel(std::span<const Scalar> s, std::size_t n) {
  std::vector<Scalar> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) entries.push_back(s[i + j]);
  return Matrix(n, n, std::move(entries));
}

}  // namespace detail

/// M_ell: (ell+1) x (ell+1) Hankel matrix with entry (i, j) = gamma_{i+j}.
inline Matrix moment_matrix(const MomentSequence& gamma, std::size_t ell) {
  if (2 * ell > gamma.degree()) throw Error(ErrorCode::OrderTooHigh, "moment matrix order too high");
  return detail::hankel(gamma.values(), ell + 1);
}

inline LocalizedSequence localize(const MomentSequence& gamma, const Polynomial& f) {
  if (f.is_zero()) throw Error(ErrorCode::InvalidInput, "cannot localize at the zero polynomial");
  const int df = f.degree();
  if (df > static_cast<int>(gamma.degree()))
    throw Error(ErrorCode::DegreeTooHigh, "localizing polynomial degree exceeds the moment degree");
  std::vector<Scalar> values;
  const std::size_t count = gamma.degree() - static_cast<std::size_t>(df) + 1;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) values.push_back(riesz_eval(gamma, poly_mul(f, Polynomial::monomial(i))));
  return {gamma, f, std::move(values)};
}

/// H_f(ell), the ell-th moment matrix of f . gamma. ell = -1 gives the 0x0 matrix.
inline Matrix localizing_matrix(const MomentSequence& gamma, const Polynomial& f, int ell) {
  if (ell < -1) throw Error(ErrorCode::OrderTooHigh, "localizing order below -1");
  if (ell == -1) return Matrix(0, 0);
  if (2 * ell + f.degree() > static_cast<int>(gamma.degree()))
    throw Error(ErrorCode::OrderTooHigh, "localizing matrix order too high");
  const auto loc = localize(gamma, f);
  return detail::hankel(loc.values, static_cast<std::size_t>(ell) + 1);
}

/// B_k of size (d-k+1) x (d+1) built from its entry rule:
/// b_ij = (-1)^{k+i-j} e_{k+i-j} for i <= j <= i+k (1-based), else 0.
inline Matrix band_matrix(std::span<const Scalar> points, std::size_t d) {
  const std::size_t k = points.size();
  if (k >= d) throw Error(ErrorCode::TooManyPoints, "band matrix needs fewer points than its order");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (points[a] == points[b]) throw Error(ErrorCode::RepeatedPoint, "band matrix points repeat");
  const auto e = elementary_symmetric(points);
  const Scalar zero = mode_of(e) == Mode::Float ? Scalar::floating(0) : Scalar(0);
  Matrix b(d - k + 1, d + 1, std::vector<Scalar>((d - k + 1) * (d + 1), zero));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = i; j <= i + k; ++j) {
      const std::size_t idx = k + i - j;
      b(i, j) = (idx % 2) ? -e[idx] : e[idx];
    }
  return b;
}

/// Appends n entries, each the phi-weighted combination of the previous r
/// entries, for monic h = x^r - sum phi_i x^i.
inline MomentSequence recursive_extend(const MomentSequence& gamma, const Polynomial& h, std::size_t n) {
  if (!h.is_monic()) throw Error(ErrorCode::NotMonic, "recursion polynomial must be monic");
  const auto r = static_cast<std::size_t>(h.degree());
  if (r > gamma.size()) throw Error(ErrorCode::DegreeTooHigh, "recursion longer than the sequence");
  std::vector<Scalar> g = gamma.values();
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t j = g.size();
    Scalar next = combine(gamma.mode(), h.mode()) == Mode::Float ? Scalar::floating(0) : Scalar(0);
    for (std::size_t i = 0; i < r; ++i) next -= h.coeff(i) * g[j - r + i];
    g.push_back(next);
  }
  return MomentSequence(std::move(g));
}

}  // namespace quadra
