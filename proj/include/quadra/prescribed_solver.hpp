#pragma once

// Minimal quadrature rules containing prescribed nodes.
//
// Given gamma of degree D = d1 + 2 d2 - 1 with M_{floor(D/2)} positive
// definite and distinct nodes x_1..x_{d1}, let f = prod (x - x_i). A
// (d1+d2)-atomic representing measure containing the x_i exists iff
//   (a) H_f(d2-1) is invertible, and
//   (b) with lambda = H_f(d2-1)^{-1} (L(f x^{d2}), ..., L(f x^{2 d2 - 1})),
//       g = x^{d2} - sum lambda_i x^i and h = f g, the extension of gamma by
//       the recursion of h has a positive definite M_{d1+d2-1}.
// The remaining nodes are then the roots of g. Allowing the evaluation at
// infinity as an atom adds a second route: the same construction one order
// lower on (gamma_0..gamma_{D-2}) must reproduce gamma_{D-1} exactly and fall
// strictly short of gamma_D; the shortfall is the mass at infinity.

#include "tmp_solver.hpp"

namespace quadra {

class PrescribedProblem {
 public:
  /// Validates D == d1 + 2 d2 - 1, distinct nodes and M_{floor(D/2)} PD.
  /// d2 = 0 is accepted and asks for a measure supported on the nodes alone.
  PrescribedProblem(MomentSequence gamma, std::vector<Scalar> prescribed, std::size_t d2,
                    bool allow_infinity = false, const Tolerances& tol = {})
      : gamma_(std::move(gamma)), prescribed_(std::move(prescribed)), d2_(d2), allow_infinity_(allow_infinity) {
    if (gamma_.degree() + 1 != prescribed_.size() + 2 * d2_)
      throw Error(ErrorCode::InvalidInput, "moment degree " + std::to_string(gamma_.degree()) +
                                               " does not equal d1 + 2*d2 - 1 with d1 = " +
                                               std::to_string(prescribed_.size()) + ", d2 = " + std::to_string(d2_));
    for (std::size_t a = 0; a < prescribed_.size(); ++a)
      for (std::size_t b = a + 1; b < prescribed_.size(); ++b)
        if (prescribed_[a] == prescribed_[b])
          throw Error(ErrorCode::InvalidInput, "prescribed nodes must be distinct");
    const Matrix m = moment_matrix(gamma_, gamma_.degree() / 2);
    if (!is_positive_definite(m, tol))
      throw Error(ErrorCode::InvalidInput, "moment matrix M_" + std::to_string(gamma_.degree() / 2) +
                                               " is not positive definite");
  }

  /// d2 = (number of moments - d1) / 2; rejects a non-integral result.
  static PrescribedProblem infer(MomentSequence gamma, std::vector<Scalar> prescribed, bool allow_infinity = false,
                                 const Tolerances& tol = {}) {
    const std::size_t n = gamma.size(), d1 = prescribed.size();
    if (n < d1 || (n - d1) % 2)
      throw Error(ErrorCode::InvalidInput, "cannot infer d2 from " + std::to_string(n) + " moments and " +
                                               std::to_string(d1) + " prescribed nodes");
    return PrescribedProblem(std::move(gamma), std::move(prescribed), (n - d1) / 2, allow_infinity, tol);
  }

  const MomentSequence& gamma() const { return gamma_; }
  const std::vector<Scalar>& prescribed() const { return prescribed_; }
  std::size_t d1() const { return prescribed_.size(); }
  std::size_t d2() const { return d2_; }
  std::size_t degree() const { return gamma_.degree(); }
  bool allow_infinity() const { return allow_infinity_; }
  Mode mode() const { return combine(gamma_.mode(), mode_of(prescribed_)); }

 private:
  MomentSequence gamma_;
  std::vector<Scalar> prescribed_;
  std::size_t d2_;
  bool allow_infinity_;
};

enum class Stage {
  LocalizingSingular,
  ExtendedNotPD,
  TailMismatch,
  InfinityMassNonpositive,
  RootDegeneracy,
  VerificationFailed,
};

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::LocalizingSingular: return "LocalizingSingular";
    case Stage::ExtendedNotPD: return "ExtendedNotPD";
    case Stage::TailMismatch: return "TailMismatch";
    case Stage::InfinityMassNonpositive: return "InfinityMassNonpositive";
    case Stage::RootDegeneracy: return "RootDegeneracy";
    case Stage::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

struct Certificate {
  Stage stage = Stage::VerificationFailed;
  std::size_t index = 0;          // ExtendedNotPD: minor order; TailMismatch: moment index
  std::optional<Matrix> matrix;   // the singular / non-PD matrix
  std::optional<Scalar> value;    // failing minor, computed moment, or alpha
  std::optional<Scalar> expected; // TailMismatch: the input moment
  std::string detail;
};

struct EigenReport {
  std::string label;
  std::vector<double> values;  // descending
};

/// Intermediate objects of one branch, kept for reporting and inspection.
struct Trace {
  std::optional<Polynomial> f;
  std::optional<Matrix> localizing;
  Vector lambda;
  std::optional<Polynomial> g;
  std::optional<Polynomial> h;
  std::optional<MomentSequence> extended;
  std::optional<Matrix> extended_matrix;
  std::vector<EigenReport> eigenvalues;
};

enum class VerdictStatus { Exists, NotExists, Indeterminate };

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Exists: return "Exists";
    case VerdictStatus::NotExists: return "NotExists";
    case VerdictStatus::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

struct QuadratureVerdict {
  VerdictStatus status = VerdictStatus::NotExists;
  std::optional<Measure> measure;        // Exists
  std::optional<Certificate> certificate;  // NotExists / Indeterminate
  Trace trace;                           // branch that produced the verdict
  std::optional<Trace> real_trace;       // generalized solve: the real attempt, when it was superseded
  bool infinity_branch = false;

  bool exists() const { return status == VerdictStatus::Exists; }
};

namespace detail {

inline std::string order_label(const char* name, long order) {
  return std::string(name) + "(" + std::to_string(order) + ")";
}

inline QuadratureVerdict with_certificate(VerdictStatus status, Certificate cert, Trace trace) {
  QuadratureVerdict v;
  v.status = status;
  v.certificate = std::move(cert);
  v.trace = std::move(trace);
  return v;
}

// lambda, g, h and the recursive extension for the order-m system on `base`
// (degree d1 + 2m - 1). Returns false when H_f(m-1) is singular.
inline bool build_candidate(const MomentSequence& base, const Polynomial& f, std::size_t m, std::size_t steps,
                            Trace& trace, const Tolerances& tol) {
  const auto ell = static_cast<int>(m) - 1;
  trace.f = f;
  trace.localizing = localizing_matrix(base, f, ell);
  trace.eigenvalues.push_back({order_label("H_f", ell), symmetric_eigenvalues(*trace.localizing, tol)});
  Vector rhs;
  if (m > 0) {
    const auto loc = localize(base, f);
    rhs.assign(loc.values.begin() + static_cast<std::ptrdiff_t>(m),
               loc.values.begin() + static_cast<std::ptrdiff_t>(2 * m));
  }
  try {
    trace.lambda = solve_linear(*trace.localizing, rhs, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    return false;
  }
  trace.g = monic_from_phi(trace.lambda);
  if (f.mode() == Mode::Float) trace.g = Polynomial(to_mode(trace.g->coeffs(), Mode::Float));
  trace.h = poly_mul(f, *trace.g);
  trace.extended = recursive_extend(base, *trace.h, steps);
  return true;
}

inline std::vector<Node> prescribed_nodes(const std::vector<Scalar>& xs) {
  std::vector<Node> out;
  for (const auto& x : xs) out.push_back({x.to_rational(), x.is_exact()});
  return out;
}

inline QuadratureVerdict finish_with_roots(const PrescribedProblem& problem, Trace trace,
                                           const std::optional<Scalar>& infinity_mass, const Tolerances& tol) {
  auto roots = recover_roots(*trace.g, tol);
  if (roots.degeneracy != Degeneracy::None) {
    Certificate c{Stage::RootDegeneracy, 0, std::nullopt, std::nullopt, std::nullopt,
                  std::string("roots of g degenerate (") + to_string(roots.degeneracy) +
                      "); retry with tighter root tolerances"};
    return with_certificate(VerdictStatus::Indeterminate, std::move(c), std::move(trace));
  }
  auto nodes = prescribed_nodes(problem.prescribed());
  if (problem.mode() == Mode::Float)
    for (auto& n : nodes) n.exact = false;
  nodes.insert(nodes.end(), roots.nodes.begin(), roots.nodes.end());
  auto rec = reconstruct_measure(std::move(nodes), problem.gamma(), infinity_mass, tol);
  if (!rec.measure) {
    const bool coincide = rec.failure == "nodes coincide";
    Certificate c{coincide ? Stage::RootDegeneracy : Stage::VerificationFailed, 0, std::nullopt, std::nullopt,
                  std::nullopt,
                  coincide ? "a root of g coincides with a prescribed node" : rec.failure};
    return with_certificate(VerdictStatus::Indeterminate, std::move(c), std::move(trace));
  }
  QuadratureVerdict v;
  v.status = VerdictStatus::Exists;
  v.measure = std::move(rec.measure);
  v.trace = std::move(trace);
  v.infinity_branch = infinity_mass.has_value();
  return v;
}

// No prescribed nodes: the unique minimal measure comes from the flat
// extension of (gamma_0..gamma_{D-1}) with gamma_D as the odd moment.
inline QuadratureVerdict solve_without_nodes(const PrescribedProblem& problem, const Tolerances& tol) {
  const auto& gamma = problem.gamma();
  const std::size_t D = gamma.degree();
  Trace trace;
  trace.f = Polynomial::constant(Scalar(1));
  trace.extended = flat_extension(gamma.truncated(D - 1), gamma[D], tol);
  trace.extended_matrix = moment_matrix(*trace.extended, problem.d2());
  trace.eigenvalues.push_back({order_label("M", static_cast<long>(problem.d2())),
                               symmetric_eigenvalues(*trace.extended_matrix, tol)});
  try {
    auto tmp = solve_tmp(*trace.extended, tol);
    trace.g = tmp.generating;
    trace.h = tmp.generating;
    QuadratureVerdict v;
    v.status = VerdictStatus::Exists;
    v.measure = std::move(tmp.measure);
    v.trace = std::move(trace);
    return v;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Indeterminate) throw;
    Certificate c{Stage::VerificationFailed, 0, std::nullopt, std::nullopt, std::nullopt, e.what()};
    return with_certificate(VerdictStatus::Indeterminate, std::move(c), std::move(trace));
  }
}

}  // namespace detail

/// Real minimal rule with the prescribed nodes (d1 + d2 real atoms).
inline QuadratureVerdict solve_prescribed_real(const PrescribedProblem& problem, const Tolerances& tol = {}) {
  const std::size_t d1 = problem.d1(), d2 = problem.d2();
  if (d1 == 0) return detail::solve_without_nodes(problem, tol);

  Trace trace;
  const Polynomial f = poly_from_roots(problem.prescribed());
  if (!detail::build_candidate(problem.gamma(), f, d2, d1 + 1, trace, tol)) {
    Certificate c{Stage::LocalizingSingular, 0, trace.localizing, determinant(*trace.localizing), std::nullopt,
                  "localizing matrix " + detail::order_label("H_f", static_cast<long>(d2) - 1) + " is singular"};
    return detail::with_certificate(VerdictStatus::NotExists, std::move(c), std::move(trace));
  }

  const std::size_t order = d1 + d2 - 1;
  trace.extended_matrix = moment_matrix(*trace.extended, order);
  trace.eigenvalues.push_back(
      {detail::order_label("M", static_cast<long>(order)), symmetric_eigenvalues(*trace.extended_matrix, tol)});
  if (auto pd = is_positive_definite(*trace.extended_matrix, tol); !pd) {
    Certificate c{Stage::ExtendedNotPD, pd.witness_order, trace.extended_matrix, pd.witness_minor, std::nullopt,
                  "extended moment matrix " + detail::order_label("M", static_cast<long>(order)) +
                      " has a non-positive leading minor of order " + std::to_string(pd.witness_order)};
    return detail::with_certificate(VerdictStatus::NotExists, std::move(c), std::move(trace));
  }
  return detail::finish_with_roots(problem, std::move(trace), std::nullopt, tol);
}

/// Minimal rule that may include the evaluation at infinity. The real rule
/// takes precedence; otherwise the order d2-1 construction on
/// (gamma_0..gamma_{D-2}) must match gamma_{D-1} and leave alpha > 0 at gamma_D.
inline QuadratureVerdict solve_prescribed_generalized(const PrescribedProblem& problem, const Tolerances& tol = {}) {
  auto real = solve_prescribed_real(problem, tol);
  if (real.status != VerdictStatus::NotExists || problem.d2() == 0) return real;

  const std::size_t d1 = problem.d1(), d2 = problem.d2();
  const std::size_t D = problem.degree();
  const auto& gamma = problem.gamma();
  const MomentSequence head = gamma.truncated(D - 2);

  Trace trace;
  const Polynomial f = poly_from_roots(problem.prescribed());
  QuadratureVerdict out;
  if (!detail::build_candidate(head, f, d2 - 1, d1 + 1, trace, tol)) {
    Certificate c{Stage::LocalizingSingular, 0, trace.localizing, determinant(*trace.localizing), std::nullopt,
                  "localizing matrix " + detail::order_label("H_f", static_cast<long>(d2) - 2) + " is singular"};
    out = detail::with_certificate(VerdictStatus::NotExists, std::move(c), std::move(trace));
  } else {
    const auto& ext = *trace.extended;
    const std::size_t order = d1 + d2 - 2;
    trace.extended_matrix = moment_matrix(ext, order);
    trace.eigenvalues.push_back(
        {detail::order_label("M", static_cast<long>(order)), symmetric_eigenvalues(*trace.extended_matrix, tol)});
    const auto pd = is_positive_definite(*trace.extended_matrix, tol);
    const Scalar alpha = gamma[D] - ext[D];

    if (!detail::scalar_equal(ext[D - 1], gamma[D - 1], tol)) {
      Certificate c{Stage::TailMismatch, D - 1, std::nullopt, ext[D - 1], gamma[D - 1],
                    "candidate moment " + std::to_string(D - 1) + " differs from the input"};
      out = detail::with_certificate(VerdictStatus::NotExists, std::move(c), std::move(trace));
    } else if (!pd) {
      Certificate c{Stage::ExtendedNotPD, pd.witness_order, trace.extended_matrix, pd.witness_minor, std::nullopt,
                    "extended moment matrix " + detail::order_label("M", static_cast<long>(order)) +
                        " has a non-positive leading minor of order " + std::to_string(pd.witness_order)};
      out = detail::with_certificate(VerdictStatus::NotExists, std::move(c), std::move(trace));
    } else if (alpha.sign() <= 0 ||
               (!alpha.is_exact() && alpha.to_double() <= tol.float_equality *
                                                             std::max(1.0, std::abs(gamma[D].to_double())))) {
      Certificate c{Stage::InfinityMassNonpositive, D, std::nullopt, alpha, std::nullopt,
                    "mass left for the infinity atom is not positive"};
      out = detail::with_certificate(VerdictStatus::NotExists, std::move(c), std::move(trace));
    } else {
      out = detail::finish_with_roots(problem, std::move(trace), alpha, tol);
    }
  }
  out.real_trace = std::move(real.trace);
  out.infinity_branch = true;
  return out;
}

struct SearchResult {
  std::size_t atom_count = 0;  // includes the infinity atom when present
  std::size_t level = 0;       // number of non-prescribed real atoms tried last
  QuadratureVerdict verdict;
};

/// Smallest rule containing the prescribed nodes: for i = 0, 1, ... solve the
/// real problem on the truncation of degree d1 + 2i - 1 and accept its unique
/// measure when it also reproduces the remaining moments, up to a
/// nonnegative excess at gamma_D (an infinity atom, if allowed).
inline SearchResult search_minimal(const MomentSequence& gamma, const std::vector<Scalar>& prescribed,
                                   bool allow_infinity, const Tolerances& tol = {}) {
  const std::size_t d1 = prescribed.size(), D = gamma.degree();
  if (D + 1 < d1) throw Error(ErrorCode::InvalidInput, "too few moments for the prescribed nodes");
  // No definiteness gate on the whole sequence: data coming from a measure
  // with fewer than d1 + d2 atoms has a singular M_{D/2}. Only the full
  // level reports invalid data.
  SearchResult last;
  for (std::size_t i = d1 == 0 ? 1 : 0; d1 + 2 * i <= D + 1; ++i) {
    const std::size_t Di = d1 + 2 * i - 1;
    const std::size_t atoms = d1 + i;
    last.level = i;
    last.atom_count = atoms;
    if (Di == D) {
      PrescribedProblem full(gamma, prescribed, i, allow_infinity, tol);
      last.verdict = allow_infinity ? solve_prescribed_generalized(full, tol) : solve_prescribed_real(full, tol);
      return last;
    }
    const MomentSequence head = gamma.truncated(Di);
    std::optional<PrescribedProblem> problem;
    try {
      problem.emplace(head, prescribed, i, false, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidInput) throw;
      continue;  // a singular truncation has no measure with d1 + i atoms
    }
    auto verdict = solve_prescribed_real(*problem, tol);
    last.verdict = verdict;
    if (verdict.status == VerdictStatus::NotExists) continue;
    if (!verdict.trace.h) return last;

    // The candidate measure is supported on the roots of h, so its higher
    // moments follow the recursion of h exactly.
    const auto tail = recursive_extend(head, *verdict.trace.h, D - Di);
    std::optional<Certificate> mismatch;
    for (std::size_t j = Di + 1; j < D && !mismatch; ++j)
      if (!detail::scalar_equal(tail[j], gamma[j], tol))
        mismatch = Certificate{Stage::TailMismatch, j, std::nullopt, tail[j], gamma[j],
                               "measure of the degree-" + std::to_string(Di) + " truncation misses moment " +
                                   std::to_string(j)};
    const Scalar alpha = gamma[D] - tail[D];
    const bool alpha_zero = detail::scalar_equal(tail[D], gamma[D], tol);
    if (!mismatch && !alpha_zero && (alpha.sign() < 0 || !allow_infinity))
      mismatch = Certificate{Stage::InfinityMassNonpositive, D, std::nullopt, alpha, gamma[D],
                             allow_infinity ? "excess at the top moment is negative"
                                            : "excess at the top moment needs an infinity atom"};
    if (mismatch) {
      last.verdict = detail::with_certificate(VerdictStatus::NotExists, std::move(*mismatch), verdict.trace);
      continue;
    }
    if (verdict.status == VerdictStatus::Indeterminate) return last;
    if (!alpha_zero) {
      verdict.measure = verdict.measure->with_infinity(alpha);
      verdict.infinity_branch = true;
      last.atom_count = atoms + 1;
    }
    last.verdict = std::move(verdict);
    return last;
  }
  return last;
}

/// Roots in y of F(y) = det H_{(x - x1)(x - y)}(d2 - 1), obtained by exact
/// interpolation of F at y = 0..d2. For one prescribed node they coincide
/// with the roots of g.
inline std::vector<double> determinantal_cross_check(const MomentSequence& gamma, const Scalar& x1, std::size_t d2,
                                                     const Tolerances& tol = {}) {
  if (d2 == 0) throw Error(ErrorCode::InvalidInput, "d2 must be positive");
  const Polynomial f = Polynomial::linear_factor(x1);
  const Matrix h = localizing_matrix(gamma, f, static_cast<int>(d2) - 1);
  if (determinant(h).is_zero() || (h.mode() == Mode::Float && rank(h, tol) < h.rows()))
    throw Error(ErrorCode::SingularMatrix, "H_f(d2-1) is singular");
  std::vector<Scalar> ys, values;
  for (std::size_t k = 0; k <= d2; ++k) {
    Scalar y = x1.is_exact() ? Scalar(static_cast<long>(k)) : Scalar::floating(static_cast<double>(k));
    values.push_back(determinant(localizing_matrix(gamma, poly_mul(f, Polynomial::linear_factor(y)),
                                                   static_cast<int>(d2) - 1)));
    ys.push_back(std::move(y));
  }
  const Polynomial F = interpolate(ys, values);
  const Polynomial monic = (Scalar(1) / F.leading()) * F;
  const auto roots = real_roots(monic, tol);
  if (!roots.all_real_distinct())
    throw Error(ErrorCode::Indeterminate, std::string("F(x1, y) roots degenerate: ") + to_string(roots.degeneracy));
  return roots.roots;
}

}  // namespace quadra
