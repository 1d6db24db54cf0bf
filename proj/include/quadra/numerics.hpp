#pragma once

// Scalar field (exact rational or binary64) and the small dense linear
// algebra used by the moment and quadrature code.

#include <gmpxx.h>

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <concepts>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace quadra {

using Rational = mpq_class;

enum class Mode { Exact, Float };

enum class ErrorCode {
  SingularMatrix,
  NotSymmetric,
  NotSquare,
  DimensionMismatch,
  DivisionByZero,
  NotExact,
  NotMonic,
  DegreeTooHigh,
  IndexOutOfRange,
  OrderTooHigh,
  TooManyPoints,
  RepeatedPoint,
  OddDegree,
  NonpositiveMass,
  NotSingular,
  NotPrg,
  NotPD,
  Indeterminate,
  InvalidInput,
  LengthMismatch,
  InfeasibleSpec,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::TooManyPoints: return "TooManyPoints";
    case ErrorCode::RepeatedPoint: return "RepeatedPoint";
    case ErrorCode::OddDegree: return "OddDegree";
    case ErrorCode::NonpositiveMass: return "NonpositiveMass";
    case ErrorCode::NotSingular: return "NotSingular";
    case ErrorCode::NotPrg: return "NotPrg";
    case ErrorCode::NotPD: return "NotPD";
    case ErrorCode::Indeterminate: return "Indeterminate";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numeric thresholds for the float pipeline and for root classification.
/// Exact-mode decisions ignore everything here except the root constants.
struct Tolerances {
  double symmetry = 1e-12;        // relative, float symmetry check
  double singular_pivot = 1e-9;   // relative to max |a_ij| (solve) or max |a_ii| (Cholesky)
  double eigen_pd_slack = 1e-6;   // eigenvalue cross-check slack, relative to the max norm
  double root_imag = 1e-8;        // |imag| <= root_imag * max(1, |root|)
  double root_separation = 1e-8;  // pairwise gap > root_separation * max(1, |root|)
  double float_equality = 1e-9;   // relative, float-mode tail equality and sign tests
  double moment_match = 1e-6;     // relative, reproduction of input moments by a float measure
  unsigned refine_bits = 256;     // precision of the rational Newton refinement of roots
};

class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  template <std::integral T>
  Scalar(T v) : value_(Rational(mpz_class(std::to_string(v), 10))) {}
  Scalar(Rational q) : value_(std::move(q)) { std::get<Rational>(value_).canonicalize(); }
  Scalar(long num, long den) {
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    value_ = std::move(q);
  }

  static Scalar floating(double v) {
    Scalar s;
    s.value_ = v;
    return s;
  }

  Mode mode() const { return is_exact() ? Mode::Exact : Mode::Float; }
  bool is_exact() const { return std::holds_alternative<Rational>(value_); }

  const Rational& rational() const {
    if (!is_exact()) throw Error(ErrorCode::NotExact, "scalar is a float");
    return std::get<Rational>(value_);
  }

  /// Exact value; a float converts to the rational it represents.
  Rational to_rational() const {
    if (is_exact()) return std::get<Rational>(value_);
    return Rational(std::get<double>(value_));
  }

  double to_double() const {
    if (is_exact()) return std::get<Rational>(value_).get_d();
    return std::get<double>(value_);
  }

  Scalar to_float() const { return floating(to_double()); }
  Scalar to_mode(Mode m) const { return m == Mode::Float ? to_float() : *this; }

  int sign() const {
    if (is_exact()) return sgn(std::get<Rational>(value_));
    double v = std::get<double>(value_);
    return (v > 0) - (v < 0);
  }
  bool is_zero() const { return sign() == 0; }

  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  /// "p/q" (or "p") when exact; shortest round-trip decimal when float.
  std::string str() const {
    if (is_exact()) return std::get<Rational>(value_).get_str();
    return format_double(std::get<double>(value_));
  }

  static std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }

  friend Scalar operator-(const Scalar& a) {
    if (a.is_exact()) return Scalar(Rational(-std::get<Rational>(a.value_)));
    return floating(-std::get<double>(a.value_));
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rational() + b.rational()));
    return floating(a.to_double() + b.to_double());
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rational() - b.rational()));
    return floating(a.to_double() - b.to_double());
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rational() * b.rational()));
    return floating(a.to_double() * b.to_double());
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "scalar division by zero");
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rational() / b.rational()));
    return floating(a.to_double() / b.to_double());
  }

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  // Value comparison. A float is compared through the rational it represents,
  // so mixed comparisons are exact.
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (!a.is_exact() && !b.is_exact()) return a.to_double() == b.to_double();
    if ((!a.is_exact() && !std::isfinite(a.to_double())) ||
        (!b.is_exact() && !std::isfinite(b.to_double())))
      return false;
    return a.to_rational() == b.to_rational();
  }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (!a.is_exact() && !b.is_exact()) return a.to_double() < b.to_double();
    return a.to_rational() < b.to_rational();
  }
  friend bool operator>(const Scalar& a, const Scalar& b) { return b < a; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return !(b < a); }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return !(a < b); }

 private:
  static int sgn(const Rational& q) { return ::sgn(q); }

  std::variant<Rational, double> value_;
};

inline Mode combine(Mode a, Mode b) {
  return (a == Mode::Float || b == Mode::Float) ? Mode::Float : Mode::Exact;
}

inline Mode mode_of(const std::vector<Scalar>& v) {
  for (const auto& s : v)
    if (!s.is_exact()) return Mode::Float;
  return Mode::Exact;
}

inline std::vector<Scalar> to_mode(std::vector<Scalar> v, Mode m) {
  if (m == Mode::Float)
    for (auto& s : v) s = s.to_float();
  return v;
}

/// Parses "p/q", an integer, or a decimal with optional exponent into an
/// exact rational. Decimals are converted digit-for-digit ("0.25" -> 1/4).
inline Scalar parse_scalar(std::string_view text) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::ParseError, "'" + std::string(text) + "': " + why);
  };
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t first = 0;
  while (first < s.size() && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
  s = s.substr(first);
  if (s.empty()) throw fail("empty number");

  auto parse_int = [&](const std::string& part) -> mpz_class {
    std::size_t i = (part[0] == '+' || part[0] == '-') ? 1 : 0;
    if (i == part.size()) throw fail("missing digits");
    for (std::size_t j = i; j < part.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(part[j]))) throw fail("bad digit");
    mpz_class z(part[0] == '+' ? part.substr(1) : part, 10);
    return z;
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num = parse_int(s.substr(0, slash));
    std::string den_text = s.substr(slash + 1);
    if (den_text.empty()) throw fail("missing denominator");
    mpz_class den = parse_int(den_text);
    if (den == 0) throw fail("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return Scalar(q);
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw fail("missing digits");
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw fail("unexpected character");
    std::string exp_text = s.substr(pos + 1);
    if (exp_text.empty()) throw fail("missing exponent");
    mpz_class e = parse_int(exp_text);
    if (!e.fits_slong_p() || abs(e) > 10000) throw fail("exponent out of range");
    exponent = e.get_si();
  }
  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long shift = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift < 0 ? Rational(mantissa, ten_pow) : Rational(mantissa * ten_pow);
  q.canonicalize();
  return Scalar(q);
}

using Vector = std::vector<Scalar>;

/// Dense row-major matrix of Scalars. Construction homogenises the mode: if
/// any entry is a float, all entries are stored as floats.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw Error(ErrorCode::DimensionMismatch, "entry count does not match shape");
    data_ = to_mode(std::move(data_), mode_of(data_));
  }
  Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
    data_ = to_mode(std::move(data_), mode_of(data_));
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  Mode mode() const { return mode_of(data_); }
  const std::vector<Scalar>& entries() const { return data_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Leading n x n principal block.
  Matrix leading(std::size_t n) const {
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = (*this)(i, j);
    return b;
  }

  Matrix to_float() const { return Matrix(rows_, cols_, to_mode(data_, Mode::Float)); }

  double max_abs() const {
    double m = 0;
    for (const auto& s : data_) m = std::max(m, std::abs(s.to_double()));
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        Scalar acc;
        for (std::size_t k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
        c(i, j) = acc;
      }
    return c;
  }
  friend Vector operator*(const Matrix& a, const Vector& x) {
    if (a.cols_ != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape");
    Vector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) y[i] += a(i, k) * x[k];
    return y;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) { return a.zip(b, 1); }
  friend Matrix operator-(const Matrix& a, const Matrix& b) { return a.zip(b, -1); }
  friend Matrix operator*(const Scalar& s, const Matrix& a) {
    Matrix c = a;
    for (auto& e : c.data_) e = s * e;
    return c;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Matrix zip(const Matrix& b, int sign) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw Error(ErrorCode::DimensionMismatch, "matrix sum shape");
    Matrix c = *this;
    for (std::size_t i = 0; i < data_.size(); ++i)
      c.data_[i] = sign > 0 ? data_[i] + b.data_[i] : data_[i] - b.data_[i];
    return c;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

inline void require_square(const Matrix& a, const char* what) {
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, what);
}

inline bool is_symmetric(const Matrix& a, const Tolerances& tol = {}) {
  if (!a.is_square()) return false;
  const bool exact = a.mode() == Mode::Exact;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      if (exact) {
        if (!(a(i, j) == a(j, i))) return false;
      } else {
        double x = a(i, j).to_double(), y = a(j, i).to_double();
        double scale = std::max({1.0, std::abs(x), std::abs(y)});
        if (std::abs(x - y) > tol.symmetry * scale) return false;
      }
    }
  return true;
}

namespace detail {

// Gaussian elimination on [A | B] in place. Exact mode pivots on the first
// nonzero entry; float mode uses partial pivoting and declares a pivot zero
// below tol.singular_pivot * max|A|. Returns the row-echelon pivot columns.
struct Elimination {
  std::vector<std::size_t> pivot_cols;
  int swaps = 0;
};

inline Elimination eliminate(Matrix& a, std::size_t ncols_to_reduce, const Tolerances& tol) {
  Elimination out;
  const bool exact = a.mode() == Mode::Exact;
  double threshold = 0;
  if (!exact) {
    double m = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < ncols_to_reduce; ++j) m = std::max(m, std::abs(a(i, j).to_double()));
    threshold = tol.singular_pivot * m;
  }
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols_to_reduce && row < a.rows(); ++col) {
    std::size_t piv = a.rows();
    if (exact) {
      for (std::size_t r = row; r < a.rows(); ++r)
        if (!a(r, col).is_zero()) {
          piv = r;
          break;
        }
    } else {
      double best = threshold;
      for (std::size_t r = row; r < a.rows(); ++r) {
        double v = std::abs(a(r, col).to_double());
        if (v > best) {
          best = v;
          piv = r;
        }
      }
    }
    if (piv == a.rows()) continue;
    if (piv != row) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
      ++out.swaps;
    }
    const Scalar p = a(row, col);
    for (std::size_t r = row + 1; r < a.rows(); ++r) {
      if (a(r, col).is_zero()) continue;
      const Scalar factor = a(r, col) / p;
      for (std::size_t j = col; j < a.cols(); ++j) a(r, j) -= factor * a(row, j);
      a(r, col) = exact ? Scalar(0) : Scalar::floating(0);
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  return out;
}

}  // namespace detail

/// Solves A x = b. Throws SingularMatrix when A has no inverse (exactly, or
/// up to the float pivot tolerance).
inline Vector solve_linear(const Matrix& a, const Vector& b, const Tolerances& tol = {}) {
  require_square(a, "solve_linear needs a square matrix");
  if (a.rows() != b.size()) throw Error(ErrorCode::DimensionMismatch, "rhs length");
  const std::size_t n = a.rows();
  const Mode mode = combine(a.mode(), mode_of(b));
  std::vector<Scalar> aug;
  aug.reserve(n * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.push_back(a(i, j).to_mode(mode));
    aug.push_back(b[i].to_mode(mode));
  }
  Matrix m(n, n + 1, std::move(aug));
  auto elim = detail::eliminate(m, n, tol);
  if (elim.pivot_cols.size() != n)
    throw Error(ErrorCode::SingularMatrix, "matrix of order " + std::to_string(n) + " is singular");
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Scalar acc = m(ii, n);
    for (std::size_t j = ii + 1; j < n; ++j) acc -= m(ii, j) * x[j];
    x[ii] = acc / m(ii, ii);
  }
  return x;
}

/// Determinant by Gaussian elimination; exact over the rationals in exact
/// mode. The 0x0 matrix has determinant 1.
inline Scalar determinant(const Matrix& a) {
  require_square(a, "determinant needs a square matrix");
  const std::size_t n = a.rows();
  const bool exact = a.mode() == Mode::Exact;
  if (n == 0) return exact ? Scalar(1) : Scalar::floating(1);
  Matrix m = a;
  Tolerances zero_tol;
  zero_tol.singular_pivot = 0;
  auto elim = detail::eliminate(m, n, zero_tol);
  if (elim.pivot_cols.size() != n) return exact ? Scalar(0) : Scalar::floating(0);
  Scalar det = (elim.swaps % 2) ? Scalar(-1) : Scalar(1);
  for (std::size_t i = 0; i < n; ++i) det *= m(i, i);
  return det;
}

inline std::size_t rank(const Matrix& a, const Tolerances& tol = {}) {
  Matrix m = a;
  return detail::eliminate(m, a.cols(), tol).pivot_cols.size();
}

struct PdResult {
  bool positive = true;
  std::size_t witness_order = 0;  // order of the first failing leading minor (1-based)
  std::optional<Scalar> witness_minor;  // exact mode: value of that minor

  explicit operator bool() const { return positive; }
};

/// Exact mode: every leading principal minor is > 0 (elimination without
/// pivoting, pivot k = minor_k / minor_{k-1}). Float mode: Cholesky with
/// pivot tolerance singular_pivot * max|a_ii|.
inline PdResult is_positive_definite(const Matrix& a, const Tolerances& tol = {}) {
  require_square(a, "is_positive_definite needs a square matrix");
  if (!is_symmetric(a, tol)) throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
  const std::size_t n = a.rows();
  PdResult res;
  if (a.mode() == Mode::Exact) {
    Matrix m = a;
    Scalar minor = 1;
    for (std::size_t k = 0; k < n; ++k) {
      const Scalar pivot = m(k, k);
      Scalar next = minor * pivot;
      if (pivot.sign() <= 0) {
        // The eliminated pivot equals minor_k / minor_{k-1}; when it is zero
        // the order-k minor vanishes.
        res.positive = false;
        res.witness_order = k + 1;
        res.witness_minor = next;
        return res;
      }
      minor = next;
      for (std::size_t r = k + 1; r < n; ++r) {
        if (m(r, k).is_zero()) continue;
        const Scalar f = m(r, k) / pivot;
        for (std::size_t j = k; j < n; ++j) m(r, j) -= f * m(k, j);
      }
    }
    return res;
  }

  double diag_max = 0;
  for (std::size_t i = 0; i < n; ++i) diag_max = std::max(diag_max, std::abs(a(i, i).to_double()));
  const double threshold = tol.singular_pivot * diag_max;
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j).to_double();
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > threshold)) {
      res.positive = false;
      res.witness_order = j + 1;
      return res;
    }
    const double root = std::sqrt(d);
    l[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j).to_double();
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / root;
    }
  }
  return res;
}

inline Eigen::MatrixXd to_eigen(const Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j).to_double();
  return m;
}

/// Eigenvalues of a symmetric matrix in descending order, always in binary64.
inline std::vector<double> symmetric_eigenvalues(const Matrix& a, const Tolerances& tol = {}) {
  require_square(a, "symmetric_eigenvalues needs a square matrix");
  if (!is_symmetric(a, tol)) throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric");
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(a), Eigen::EigenvaluesOnly);
  std::vector<double> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

}  // namespace quadra
