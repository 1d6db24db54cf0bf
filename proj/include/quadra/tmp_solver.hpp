#pragma once

// Atomic measures (with an optional evaluation-at-infinity atom) and the
// truncated Hamburger moment problem: rank, positive recursive generation,
// generating polynomial, flat extension and the unique minimal measure.

#include "moments.hpp"

namespace quadra {

/// A real point, or the evaluation at infinity (the functional reading off
/// the top coefficient of a degree-D polynomial).
class Atom {
 public:
  static Atom real(Scalar x) { return Atom(std::move(x)); }
  static Atom infinity() { return Atom(); }

  bool is_infinity() const { return !position_.has_value(); }
  const Scalar& position() const {
    if (!position_) throw Error(ErrorCode::InvalidInput, "infinity atom has no position");
    return *position_;
  }

  std::string str() const { return position_ ? position_->str() : "infinity"; }

 private:
  Atom() = default;
  explicit Atom(Scalar x) : position_(std::move(x)) {}

  std::optional<Scalar> position_;
};

struct WeightedAtom {
  Atom atom;
  Scalar density;
};

/// Finitely atomic positive (generalized) measure. Real atoms are kept
/// ascending and pairwise distinct; an infinity atom, if any, comes last.
class Measure {
 public:
  Measure() = default;
  explicit Measure(std::vector<WeightedAtom> atoms) : atoms_(std::move(atoms)) {
    std::size_t infinities = 0;
    for (const auto& a : atoms_) {
      if (a.density.sign() <= 0) throw Error(ErrorCode::InvalidInput, "densities must be positive");
      infinities += a.atom.is_infinity();
    }
    if (infinities > 1) throw Error(ErrorCode::InvalidInput, "more than one infinity atom");
    std::stable_sort(atoms_.begin(), atoms_.end(), [](const WeightedAtom& x, const WeightedAtom& y) {
      if (x.atom.is_infinity() || y.atom.is_infinity()) return y.atom.is_infinity() && !x.atom.is_infinity();
      return x.atom.position() < y.atom.position();
    });
    for (std::size_t i = 1; i < atoms_.size(); ++i)
      if (!atoms_[i].atom.is_infinity() && atoms_[i].atom.position() == atoms_[i - 1].atom.position())
        throw Error(ErrorCode::RepeatedPoint, "measure atoms repeat");
  }

  const std::vector<WeightedAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool has_infinity() const { return !atoms_.empty() && atoms_.back().atom.is_infinity(); }
  std::optional<Scalar> infinity_mass() const {
    if (!has_infinity()) return std::nullopt;
    return atoms_.back().density;
  }

  std::vector<Scalar> nodes() const {
    std::vector<Scalar> out;
    for (const auto& a : atoms_)
      if (!a.atom.is_infinity()) out.push_back(a.atom.position());
    return out;
  }
  std::vector<Scalar> densities() const {
    std::vector<Scalar> out;
    for (const auto& a : atoms_) out.push_back(a.density);
    return out;
  }

  bool is_exact() const {
    for (const auto& a : atoms_) {
      if (!a.density.is_exact()) return false;
      if (!a.atom.is_infinity() && !a.atom.position().is_exact()) return false;
    }
    return true;
  }

  Measure with_infinity(Scalar mass) const {
    if (has_infinity()) throw Error(ErrorCode::InvalidInput, "measure already has an infinity atom");
    auto atoms = atoms_;
    atoms.push_back({Atom::infinity(), std::move(mass)});
    return Measure(std::move(atoms));
  }

 private:
  std::vector<WeightedAtom> atoms_;
};

namespace detail {

// A quadrature node as seen by the reconstruction step: either an exact
// rational or a high-precision rational approximation of an irrational root.
struct Node {
  Rational value;
  bool exact = true;
};

struct RecoveredRoots {
  Degeneracy degeneracy = Degeneracy::None;
  std::vector<Node> nodes;
};

// Real roots of a monic polynomial. With exact coefficients every float root
// is tested for being an exact small-denominator rational, otherwise refined
// by rational Newton to tol.refine_bits bits.
inline RecoveredRoots recover_roots(const Polynomial& p, const Tolerances& tol) {
  RecoveredRoots out;
  const auto approx = real_roots(p, tol);
  if (!approx.all_real_distinct()) {
    out.degeneracy = approx.degeneracy;
    return out;
  }
  const bool exact = p.mode() == Mode::Exact;
  const auto& rs = approx.roots;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double r = rs[i];
    const Rational start(r);
    if (!exact) {
      out.nodes.push_back({start, false});
      continue;
    }
    // An exact candidate must stay closer to this root than to its neighbours.
    double gap = std::max(1.0, std::abs(r));
    if (i > 0) gap = std::min(gap, r - rs[i - 1]);
    if (i + 1 < rs.size()) gap = std::min(gap, rs[i + 1] - r);
    const Rational radius(gap / 4);
    if (auto q = exact_root_near(p, start, radius)) {
      out.nodes.push_back({*q, true});
      continue;
    }
    Rational refined = refine_root(p, start, tol.refine_bits);
    if (auto q = exact_root_near(p, refined, radius)) {
      out.nodes.push_back({*q, true});
      continue;
    }
    const double drift = std::abs(refined.get_d() - r);
    if (drift > 1e-6 * std::max(1.0, std::abs(r))) {
      out.degeneracy = Degeneracy::RepeatedRoot;
      out.nodes.clear();
      return out;
    }
    out.nodes.push_back({std::move(refined), false});
  }
  return out;
}

struct Reconstruction {
  std::optional<Measure> measure;
  std::string failure;
};

// Densities on the given nodes from the Vandermonde system against
// gamma_0..gamma_{n-1}, then positivity and reproduction of every entry of
// `target` (with `infinity_mass` added to the last one, when present).
inline Reconstruction reconstruct_measure(std::vector<Node> nodes, const MomentSequence& target,
                                          const std::optional<Scalar>& infinity_mass,
                                          const Tolerances& tol) {
  Reconstruction out;
  const std::size_t n = nodes.size();
  const bool float_mode = target.mode() == Mode::Float || (infinity_mass && !infinity_mass->is_exact());
  if (n > target.size()) {
    out.failure = "more nodes than moments";
    return out;
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.value < b.value; });
  for (std::size_t i = 1; i < n; ++i) {
    const double a = nodes[i - 1].value.get_d(), b = nodes[i].value.get_d();
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (nodes[i].value == nodes[i - 1].value || (!(nodes[i].exact && nodes[i - 1].exact) &&
                                                 b - a <= tol.root_separation * scale)) {
      out.failure = "nodes coincide";
      return out;
    }
  }
  bool all_exact = !float_mode;
  for (const auto& nd : nodes) all_exact = all_exact && nd.exact;

  if (float_mode) {
    Matrix v(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      double p = 1;
      for (std::size_t i = 0; i < n; ++i, p *= nodes[j].value.get_d()) v(i, j) = Scalar::floating(p);
    }
    Vector rhs;
    for (std::size_t i = 0; i < n; ++i) rhs.push_back(target[i].to_float());
    Vector rho;
    try {
      rho = solve_linear(v, rhs, tol);
    } catch (const Error&) {
      out.failure = "Vandermonde system is singular";
      return out;
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!(rho[j].to_double() > 0)) {
        out.failure = "density " + std::to_string(j) + " is not positive";
        return out;
      }
    for (std::size_t i = 0; i < target.size(); ++i) {
      double m = 0;
      for (std::size_t j = 0; j < n; ++j) m += rho[j].to_double() * std::pow(nodes[j].value.get_d(), static_cast<double>(i));
      if (infinity_mass && i + 1 == target.size()) m += infinity_mass->to_double();
      const double g = target[i].to_double();
      if (std::abs(m - g) > tol.moment_match * std::max(1.0, std::abs(g))) {
        out.failure = "measure does not reproduce moment " + std::to_string(i);
        return out;
      }
    }
    std::vector<WeightedAtom> atoms;
    for (std::size_t j = 0; j < n; ++j)
      atoms.push_back({Atom::real(Scalar::floating(nodes[j].value.get_d())), rho[j]});
    if (infinity_mass) atoms.push_back({Atom::infinity(), infinity_mass->to_float()});
    out.measure = Measure(std::move(atoms));
    return out;
  }

  // Exact arithmetic over the (possibly refined) rational nodes.
  std::vector<Rational> rho(n);
  {
    Matrix v(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Rational p = 1;
      for (std::size_t i = 0; i < n; ++i, p *= nodes[j].value) v(i, j) = Scalar(p);
    }
    Vector rhs(target.values().begin(), target.values().begin() + static_cast<std::ptrdiff_t>(n));
    Vector sol;
    try {
      sol = solve_linear(v, rhs, tol);
    } catch (const Error&) {
      out.failure = "Vandermonde system is singular";
      return out;
    }
    for (std::size_t j = 0; j < n; ++j) rho[j] = sol[j].rational();
  }
  for (std::size_t j = 0; j < n; ++j)
    if (sgn(rho[j]) <= 0) {
      out.failure = "density at node " + std::to_string(j) + " is not positive";
      return out;
    }
  std::vector<Rational> powers(n, Rational(1));
  for (std::size_t i = 0; i < target.size(); ++i) {
    Rational m = 0;
    for (std::size_t j = 0; j < n; ++j) {
      m += rho[j] * powers[j];
      powers[j] *= nodes[j].value;
    }
    if (infinity_mass && i + 1 == target.size()) m += infinity_mass->rational();
    const Rational& g = target[i].rational();
    if (all_exact) {
      if (m != g) {
        out.failure = "measure does not reproduce moment " + std::to_string(i);
        return out;
      }
    } else {
      const double diff = Rational(m - g).get_d();
      if (std::abs(diff) > tol.moment_match * std::max(1.0, std::abs(g.get_d()))) {
        out.failure = "measure does not reproduce moment " + std::to_string(i);
        return out;
      }
    }
  }
  std::vector<WeightedAtom> atoms;
  for (std::size_t j = 0; j < n; ++j) {
    Scalar pos = nodes[j].exact ? Scalar(nodes[j].value) : Scalar::floating(nodes[j].value.get_d());
    Scalar den = all_exact ? Scalar(rho[j]) : Scalar::floating(rho[j].get_d());
    atoms.push_back({Atom::real(std::move(pos)), std::move(den)});
  }
  if (infinity_mass) atoms.push_back({Atom::infinity(), *infinity_mass});
  out.measure = Measure(std::move(atoms));
  return out;
}

inline std::size_t half_degree(const MomentSequence& gamma) {
  if (gamma.degree() % 2) throw Error(ErrorCode::OddDegree, "sequence must have even degree");
  return gamma.degree() / 2;
}

inline void require_positive_mass(const MomentSequence& gamma) {
  if (gamma[0].sign() <= 0) throw Error(ErrorCode::NonpositiveMass, "gamma_0 must be positive");
}

inline bool scalar_equal(const Scalar& a, const Scalar& b, const Tolerances& tol) {
  if (a.is_exact() && b.is_exact()) return a == b;
  const double x = a.to_double(), y = b.to_double();
  return std::abs(x - y) <= tol.float_equality * std::max({1.0, std::abs(x), std::abs(y)});
}

}  // namespace detail

/// d+1 when M_d is nonsingular, else the least i with column i of M_d in the
/// span of columns 0..i-1.
inline std::size_t rank_of_sequence(const MomentSequence& gamma, const Tolerances& tol = {}) {
  const std::size_t d = detail::half_degree(gamma);
  detail::require_positive_mass(gamma);
  const Matrix m = moment_matrix(gamma, d);
  if (rank(m, tol) == d + 1) return d + 1;
  std::size_t previous = 1;  // column 0 is nonzero since gamma_0 > 0
  for (std::size_t i = 1; i <= d; ++i) {
    Matrix cols(d + 1, i + 1);
    for (std::size_t r = 0; r <= d; ++r)
      for (std::size_t c = 0; c <= i; ++c) cols(r, c) = m(r, c);
    cols = Matrix(d + 1, i + 1, cols.entries());
    const std::size_t rk = rank(cols, tol);
    if (rk == previous) return i;
    previous = rk;
  }
  return d + 1;
}

enum class PrgFailure { None, MinorNotPositive, RecursionBroken };

struct PrgResult {
  bool ok = true;
  PrgFailure failure = PrgFailure::None;
  std::size_t index = 0;  // failing minor order, or first j where the recursion breaks
  std::size_t rank = 0;
  Vector phi;             // generating coefficients when rank <= d

  explicit operator bool() const { return ok; }
};

/// Positive recursive generation: M_{r-1} is PD for r = rank, and when r <= d
/// every gamma_j, j = r..2d, follows the recursion with phi = M_{r-1}^{-1} v_r.
inline PrgResult check_prg(const MomentSequence& gamma, const Tolerances& tol = {}) {
  const std::size_t d = detail::half_degree(gamma);
  PrgResult res;
  res.rank = rank_of_sequence(gamma, tol);
  const std::size_t r = res.rank;
  const Matrix head = moment_matrix(gamma, r - 1);
  if (auto pd = is_positive_definite(head, tol); !pd) {
    res.ok = false;
    res.failure = PrgFailure::MinorNotPositive;
    res.index = pd.witness_order;
    return res;
  }
  if (r == d + 1) return res;
  res.phi = solve_linear(head, moment_vector(gamma, r, r - 1), tol);
  for (std::size_t j = r; j <= 2 * d; ++j) {
    Scalar predicted = res.phi[0] * gamma[j - r];
    for (std::size_t i = 1; i < r; ++i) predicted += res.phi[i] * gamma[j - r + i];
    if (!detail::scalar_equal(predicted, gamma[j], tol)) {
      res.ok = false;
      res.failure = PrgFailure::RecursionBroken;
      res.index = j;
      return res;
    }
  }
  return res;
}

namespace detail {

inline Polynomial monic_from_phi(const Vector& phi) {
  std::vector<Scalar> c;
  for (const auto& p : phi) c.push_back(-p);
  c.push_back(mode_of(phi) == Mode::Float ? Scalar::floating(1) : Scalar(1));
  return Polynomial(std::move(c));
}

}  // namespace detail

/// x^r - sum phi_i x^i of a singular prg sequence.
inline Polynomial generating_polynomial(const MomentSequence& gamma, const Tolerances& tol = {}) {
  const std::size_t d = detail::half_degree(gamma);
  const auto prg = check_prg(gamma, tol);
  if (prg.rank == d + 1) throw Error(ErrorCode::NotSingular, "sequence is nonsingular");
  if (!prg) throw Error(ErrorCode::NotPrg, "sequence is not positively recursively generated");
  return detail::monic_from_phi(prg.phi);
}

/// Solves V rho = (gamma_0, ..., gamma_{r-1}) for the Vandermonde matrix of
/// the nodes. Positivity is not checked.
inline Vector densities_from_nodes(const MomentSequence& gamma, std::span<const Scalar> nodes,
                                   const Tolerances& tol = {}) {
  const std::size_t r = nodes.size();
  if (r > gamma.size()) throw Error(ErrorCode::DimensionMismatch, "more nodes than moments");
  Matrix v(r, r);
  for (std::size_t j = 0; j < r; ++j) {
    Scalar p = nodes[j].is_exact() ? Scalar(1) : Scalar::floating(1);
    for (std::size_t i = 0; i < r; ++i, p *= nodes[j]) v(i, j) = p;
  }
  v = Matrix(r, r, v.entries());
  return solve_linear(v, moment_vector(gamma, 0, r - 1), tol);
}

enum class TmpStatus { Unique, InfinitelyMany, NotRepresentable };

inline const char* to_string(TmpStatus s) {
  switch (s) {
    case TmpStatus::Unique: return "Unique";
    case TmpStatus::InfinitelyMany: return "InfinitelyMany";
    case TmpStatus::NotRepresentable: return "NotRepresentable";
  }
  return "Unknown";
}

struct TmpVerdict {
  TmpStatus status = TmpStatus::NotRepresentable;
  std::size_t rank = 0;
  std::optional<Measure> measure;            // Unique
  std::optional<Polynomial> generating;      // Unique
  PrgResult prg;                             // the deciding certificate
};

/// Truncated Hamburger problem for an even-degree sequence. Decides through
/// the exact prg test; Unique carries the rank-atomic measure supported on
/// the roots of the generating polynomial.
inline TmpVerdict solve_tmp(const MomentSequence& gamma, const Tolerances& tol = {}) {
  const std::size_t d = detail::half_degree(gamma);
  detail::require_positive_mass(gamma);
  TmpVerdict v;
  v.prg = check_prg(gamma, tol);
  v.rank = v.prg.rank;
  if (!v.prg) {
    v.status = TmpStatus::NotRepresentable;
    return v;
  }
  if (v.rank == d + 1) {
    v.status = TmpStatus::InfinitelyMany;
    return v;
  }
  const Polynomial p = detail::monic_from_phi(v.prg.phi);
  auto roots = detail::recover_roots(p, tol);
  if (roots.degeneracy != Degeneracy::None)
    throw Error(ErrorCode::Indeterminate,
                std::string("generating polynomial roots degenerate: ") + to_string(roots.degeneracy));
  auto rec = detail::reconstruct_measure(std::move(roots.nodes), gamma, std::nullopt, tol);
  if (!rec.measure) throw Error(ErrorCode::Indeterminate, "measure verification failed: " + rec.failure);
  v.status = TmpStatus::Unique;
  v.generating = p;
  v.measure = std::move(rec.measure);
  return v;
}

/// Appends gamma_{2d+1} = next_odd and gamma_{2d+2} = v^T M_d^{-1} v with
/// v = (gamma_{d+1}, ..., gamma_{2d+1}); requires M_d positive definite.
inline MomentSequence flat_extension(const MomentSequence& gamma, const Scalar& next_odd,
                                     const Tolerances& tol = {}) {
  const std::size_t d = detail::half_degree(gamma);
  const Matrix m = moment_matrix(gamma, d);
  if (!is_positive_definite(m, tol)) throw Error(ErrorCode::NotPD, "M_d is not positive definite");
  Vector v(gamma.values().begin() + static_cast<std::ptrdiff_t>(d + 1), gamma.values().end());
  v.push_back(next_odd);
  const Vector w = solve_linear(m, v, tol);
  Scalar top = v[0] * w[0];
  for (std::size_t i = 1; i < v.size(); ++i) top += v[i] * w[i];
  return gamma.appended(std::vector<Scalar>{next_odd, top});
}

}  // namespace quadra
