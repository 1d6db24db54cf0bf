#pragma once

// Brute-force moments of a measure, sequence comparison, and seeded random
// instances for round-trip testing.

#include "prescribed_solver.hpp"

#include <random>

namespace quadra {

/// gamma_i = sum rho_j y_j^i over the real atoms, plus the infinity mass on
/// gamma_D only.
inline MomentSequence moments_of(const Measure& measure, std::size_t degree) {
  const bool exact = measure.is_exact();
  std::vector<Scalar> gamma(degree + 1, exact ? Scalar(0) : Scalar::floating(0));
  for (const auto& a : measure.atoms()) {
    if (a.atom.is_infinity()) {
      gamma[degree] += a.density;
      continue;
    }
    Scalar p = exact ? Scalar(1) : Scalar::floating(1);
    for (std::size_t i = 0; i <= degree; ++i, p *= a.atom.position()) gamma[i] += a.density * p;
  }
  return MomentSequence(std::move(gamma));
}

struct CompareResult {
  bool match = true;
  std::size_t index = 0;  // first mismatching entry
  double delta = 0;       // actual - expected at that entry

  explicit operator bool() const { return match; }
};

/// Exact when both sequences are exact; otherwise |actual - expected| must
/// stay within tol * max(1, |expected_i|).
inline CompareResult compare(const MomentSequence& expected, const MomentSequence& actual, double tol = 1e-6) {
  if (expected.size() != actual.size()) throw Error(ErrorCode::LengthMismatch, "sequences differ in length");
  const bool exact = expected.mode() == Mode::Exact && actual.mode() == Mode::Exact;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const Scalar diff = actual[i] - expected[i];
    const bool ok = exact ? diff.is_zero()
                          : std::abs(diff.to_double()) <= tol * std::max(1.0, std::abs(expected[i].to_double()));
    if (!ok) return {false, i, diff.to_double()};
  }
  return {};
}

struct InstanceSpec {
  std::size_t atom_count = 3;  // includes the infinity atom when include_infinity
  double atom_lo = -10, atom_hi = 10;
  double density_lo = 0.1, density_hi = 2;
  std::size_t prescribe = 1;
  bool include_infinity = false;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  Measure measure;
  MomentSequence moments;
  PrescribedProblem problem;
};

/// Atoms and densities are k/1000 with integer k. Real atoms are pairwise at
/// least 1e-3 * (atom_hi - atom_lo) apart; the first `prescribe` drawn atoms
/// become the prescribed nodes. D = d1 + 2 d2 - 1 with d1 = prescribe and
/// d2 = atom_count - prescribe.
inline GeneratedInstance random_instance(const InstanceSpec& spec) {
  const std::size_t real_count = spec.atom_count - (spec.include_infinity ? 1 : 0);
  if (spec.atom_count == 0 || (spec.include_infinity && spec.atom_count < 2))
    throw Error(ErrorCode::InfeasibleSpec, "not enough atoms");
  if (spec.prescribe > real_count) throw Error(ErrorCode::InfeasibleSpec, "prescribing more atoms than real atoms");
  // With no prescribed node D is odd, the infinity mass misses M_{floor(D/2)}
  // and the real atoms alone are one too few for it to be definite.
  if (spec.include_infinity && spec.prescribe == 0)
    throw Error(ErrorCode::InfeasibleSpec, "an infinity atom needs at least one prescribed node");
  if (!(spec.atom_lo < spec.atom_hi) || !(0 < spec.density_lo && spec.density_lo <= spec.density_hi))
    throw Error(ErrorCode::InfeasibleSpec, "empty range");

  const auto lo = static_cast<long>(std::ceil(spec.atom_lo * 1000));
  const auto hi = static_cast<long>(std::floor(spec.atom_hi * 1000));
  const auto dlo = std::max(1L, static_cast<long>(std::ceil(spec.density_lo * 1000)));
  const auto dhi = static_cast<long>(std::floor(spec.density_hi * 1000));
  const auto gap = static_cast<long>(std::ceil((spec.atom_hi - spec.atom_lo) * 1e-3 * 1000));
  if (hi < lo || dhi < dlo) throw Error(ErrorCode::InfeasibleSpec, "no grid point in range");
  if (real_count > 1 && static_cast<long>(real_count - 1) * gap > hi - lo)
    throw Error(ErrorCode::InfeasibleSpec, "cannot place separated atoms");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<long> pick_atom(lo, hi), pick_density(dlo, dhi);
  std::vector<long> ks;
  for (int attempt = 0; ks.size() < real_count; ++attempt) {
    if (attempt > 100000) throw Error(ErrorCode::InfeasibleSpec, "cannot place separated atoms");
    const long k = pick_atom(rng);
    if (std::all_of(ks.begin(), ks.end(), [&](long o) { return std::abs(o - k) >= gap; })) ks.push_back(k);
  }
  std::vector<WeightedAtom> atoms;
  std::vector<Scalar> prescribed;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    Scalar x(ks[j], 1000);
    if (j < spec.prescribe) prescribed.push_back(x);
    atoms.push_back({Atom::real(x), Scalar(pick_density(rng), 1000)});
  }
  if (spec.include_infinity) atoms.push_back({Atom::infinity(), Scalar(pick_density(rng), 1000)});

  const std::size_t d1 = spec.prescribe, d2 = spec.atom_count - spec.prescribe;
  if (d1 + 2 * d2 == 0) throw Error(ErrorCode::InfeasibleSpec, "empty moment sequence");
  Measure measure(std::move(atoms));
  MomentSequence moments = moments_of(measure, d1 + 2 * d2 - 1);
  PrescribedProblem problem(moments, prescribed, d2, spec.include_infinity);
  return {std::move(measure), std::move(moments), std::move(problem)};
}

}  // namespace quadra
