// Acceptance run: criteria 1-7, one PASS/FAIL line each. Exit status is
// nonzero if any criterion fails.

#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

using namespace qt;

namespace {

// pinned tolerances
constexpr double kNodeTol = 5e-3;           // displayed node values, absolute
constexpr double kMomentRelTol = 1e-6;      // reconstructed moments, relative
constexpr double kAtomTol = 1e-7;           // round-trip atoms, absolute (relative above 1)
constexpr double kDensityRelTol = 1e-6;     // round-trip densities
constexpr double kCrossCheckTol = 1e-6;     // determinantal roots vs roots of g

struct Check {
  std::vector<std::string> failures;
  std::string note;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 10) failures.push_back(what);
    if (!ok && failures.size() == 10) failures.push_back("...");
  }
};

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

const EigenReport* report(const std::vector<EigenReport>& reports, const std::string& label) {
  for (const auto& r : reports)
    if (r.label == label) return &r;
  return nullptr;
}

double round_sig(double x, int digits) {
  if (x == 0) return 0;
  const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
  return std::round(x * scale) / scale;
}

// ---------------------------------------------------------------------------

void criterion1(Check& c) {
  const auto v = solve_prescribed_real(PrescribedProblem(factorial_moments(9), qs({"1/3", "11"}), 4));
  c.expect(v.trace.localizing && *v.trace.localizing == qm({{"-17/3", "-13", "-110/3", "-130"},
                                                            {"-13", "-110/3", "-130", "-552"},
                                                            {"-110/3", "-130", "-552", "-2680"},
                                                            {"-130", "-552", "-2680", "-14160"}}),
           "H_f(3) differs from the displayed matrix");
  c.expect(v.trace.lambda == qs({"-46998216/137503", "41197920/137503", "-11282760/137503", "1695024/137503"}),
           "lambda differs");
  c.expect(v.trace.extended && (*v.trace.extended)[10] == q("492324551232/137503"), "gamma_10 differs");
  c.expect(v.status == VerdictStatus::NotExists && v.certificate && v.certificate->stage == Stage::ExtendedNotPD,
           "verdict is not NotExists(ExtendedNotPD)");
  const auto* m5 = report(v.trace.eigenvalues, "M(5)");
  bool found = false;
  if (m5)
    for (double x : m5->values) found = found || (x < 0 && round_sig(x, 2) == round_sig(-0.436, 2));
  c.expect(found, "M(5) eigenvalue report has no value matching -0.436 to 2 significant figures");
}

void criterion2(Check& c) {
  const auto v = solve_prescribed_generalized(PrescribedProblem(factorial_moments(9), qs({"1/3", "11"}), 4, true));
  c.expect(v.trace.localizing &&
               *v.trace.localizing == qm({{"-17/3", "-13", "-110/3"}, {"-13", "-110/3", "-130"}, {"-110/3", "-130", "-552"}}),
           "H_f(2) differs from the displayed matrix");
  c.expect(v.trace.extended && (*v.trace.extended)[8] == q("73385484/1861"), "extended gamma_8 differs");
  c.expect(v.status == VerdictStatus::NotExists && v.certificate && v.certificate->stage == Stage::TailMismatch &&
               v.certificate->index == 8,
           "verdict is not NotExists(TailMismatch, 8)");
  const auto* m4 = report(v.trace.eigenvalues, "M(4)");
  bool found = false;
  if (m4)
    for (double x : m4->values) found = found || round_sig(x, 1) == -0.03;
  c.expect(found, "M(4) eigenvalue report has no value near -0.03");
}

void criterion3(Check& c) {
  const MomentSequence gamma = factorial_moments(9);
  const auto v = solve_prescribed_real(PrescribedProblem(gamma, qs({"1", "11"}), 4));
  c.expect(v.trace.g && *v.trace.g == Polynomial(qs({"220344/1601", "-1476768/1601", "753912/1601", "-95824/1601", "1"})),
           "g differs");
  c.expect(v.trace.h && *v.trace.h == Polynomial(qs({"2423784/1601", "-18888576/1601", "26234592/1601",
                                                     "-11577776/1601", "1921411/1601", "-115036/1601", "1"})),
           "h differs");
  c.expect(v.trace.extended && (*v.trace.extended)[10] == q("5944515264/1601"), "gamma_10 differs");
  c.expect(v.trace.extended_matrix && v.trace.extended_matrix->mode() == Mode::Exact &&
               is_positive_definite(*v.trace.extended_matrix),
           "M_5 is not exactly positive definite");
  if (v.status != VerdictStatus::Exists || !v.measure) {
    c.expect(false, "verdict is not Exists");
    return;
  }
  std::vector<double> remaining;
  for (const auto& a : v.measure->atoms()) {
    c.expect(a.density.to_double() > 0, "nonpositive weight");
    const Scalar& x = a.atom.position();
    if (x != Scalar(1) && x != Scalar(11)) remaining.push_back(x.to_double());
  }
  const double want[] = {0.16, 2.81, 5.91, 50.97};
  c.expect(v.measure->size() == 6 && remaining.size() == 4, "expected six atoms including 1 and 11");
  for (std::size_t i = 0; i < remaining.size() && i < 4; ++i)
    c.expect(std::abs(remaining[i] - want[i]) <= kNodeTol, "node " + std::to_string(remaining[i]));
  c.expect(static_cast<bool>(compare(gamma, moments_of(*v.measure, 9), kMomentRelTol)), "moments not reproduced");
}

void criterion4(Check& c) {
  Gen gen(4001);
  int shapes = 0;
  for (std::size_t d = 1; d <= 8; ++d)
    for (std::size_t k = 1; k <= 4 && k < d; ++k)
      for (int rep = 0; rep < 5; ++rep, ++shapes) {
        const auto pts = gen.distinct_rationals(k, -6, 6, 7);
        c.expect(band_matrix(pts, d) == band_by_product(pts, d),
                 "band rule vs product, d=" + std::to_string(d) + " k=" + std::to_string(k));
      }

  auto random_sequence = [&](std::size_t d, bool definite) {
    if (definite) return moments_of(gen.measure(d + 1 + static_cast<std::size_t>(gen.integer(0, 2))), 2 * d);
    std::vector<Scalar> g;
    for (std::size_t i = 0; i <= 2 * d; ++i) g.push_back(gen.rational(-20, 20, 7));
    return MomentSequence(std::move(g));
  };

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = static_cast<std::size_t>(gen.integer(2, 7));
    const std::size_t k = static_cast<std::size_t>(gen.integer(1, std::min<long>(4, static_cast<long>(d) - 1)));
    const MomentSequence g = random_sequence(d, gen.coin());
    const auto pts = gen.distinct_rationals(k, -5, 5, 6);
    const Matrix b = band_matrix(pts, d);
    const Matrix bm = b * moment_matrix(g, d);
    const auto loc = localize(g, poly_from_roots(pts)).values;
    bool entry_rule = true;
    for (std::size_t i = 0; i < bm.rows(); ++i)
      for (std::size_t j = 0; j < bm.cols(); ++j) entry_rule = entry_rule && bm(i, j) == loc[i + j];
    c.expect(entry_rule, "(B_k M_d)_{ij} != L(f x^{i+j}) in trial " + std::to_string(trial));

    const auto e = elementary_symmetric(pts);
    const Polynomial f = poly_from_roots(pts);
    Matrix rhs(d - k + 1, d - k + 1);
    for (std::size_t i = 0; i <= k; ++i)
      rhs = rhs + ((i % 2) ? -e[i] : e[i]) *
                      localizing_matrix(g, poly_mul(Polynomial::monomial(k - i), f), static_cast<int>(d - k));
    c.expect(b * moment_matrix(g, d) * b.transpose() == rhs, "congruence identity fails in trial " + std::to_string(trial));
  }

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = static_cast<std::size_t>(gen.integer(2, 7));
    const std::size_t k = static_cast<std::size_t>(gen.integer(1, std::min<long>(4, static_cast<long>(d) - 1)));
    const MomentSequence g = random_sequence(d, true);
    const auto pts = gen.distinct_rationals(k, -5, 5, 6);
    const Matrix m = moment_matrix(g, d);
    if (!is_positive_definite(m)) {
      c.expect(false, "generated M_d is not positive definite");
      continue;
    }
    const Matrix b = band_matrix(pts, d);
    c.expect(static_cast<bool>(is_positive_definite(b * m * b.transpose())),
             "B M B^T not positive definite in trial " + std::to_string(trial));
  }
  c.note = std::to_string(shapes) + " band shapes, 200 + 200 + 200 identity instances";
}

bool same_measure(const Measure& got, const Measure& want, std::string& why) {
  if (got.size() != want.size()) {
    why = "atom count " + std::to_string(got.size()) + " vs " + std::to_string(want.size());
    return false;
  }
  for (std::size_t j = 0; j < got.size(); ++j) {
    const auto& a = got.atoms()[j];
    const auto& b = want.atoms()[j];
    if (a.atom.is_infinity() != b.atom.is_infinity()) {
      why = "infinity atom mismatch";
      return false;
    }
    if (!a.atom.is_infinity()) {
      const double x = a.atom.position().to_double(), y = b.atom.position().to_double();
      if (std::abs(x - y) > kAtomTol * std::max(1.0, std::abs(y))) {
        why = "atom " + std::to_string(x) + " vs " + std::to_string(y);
        return false;
      }
    }
    if (rel(a.density.to_double(), b.density.to_double()) > kDensityRelTol) {
      why = "density " + a.density.str() + " vs " + b.density.str();
      return false;
    }
  }
  return true;
}

InstanceSpec spec_for(std::uint64_t seed) {
  InstanceSpec spec;
  spec.seed = seed;
  spec.atom_count = 1 + seed % 6;
  spec.include_infinity = spec.atom_count >= 2 && (seed / 6) % 2 == 1;
  const std::size_t real = spec.atom_count - spec.include_infinity;
  spec.prescribe = 1 + (seed / 12) % real;
  return spec;
}

void criterion5(Check& c) {
  int with_infinity = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const InstanceSpec spec = spec_for(seed);
    with_infinity += spec.include_infinity;
    const auto g = random_instance(spec);
    const PrescribedProblem p(g.moments, g.problem.prescribed(), g.problem.d2(), spec.include_infinity);
    const auto v = spec.include_infinity ? solve_prescribed_generalized(p) : solve_prescribed_real(p);
    if (v.status != VerdictStatus::Exists) {
      c.expect(false, "seed " + std::to_string(seed) + ": " + to_string(v.status));
      continue;
    }
    std::string why;
    c.expect(same_measure(*v.measure, g.measure, why), "seed " + std::to_string(seed) + ": " + why);
  }

  int perturbed = 0, rejected = 0, exists = 0;
  Gen gen(5001);
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const InstanceSpec spec = spec_for(10000 + seed);
    const auto g = random_instance(spec);
    auto values = g.moments.values();
    const long last = static_cast<long>(values.size()) - 1;
    const std::size_t idx = static_cast<std::size_t>(gen.integer(std::min(1L, last), last));
    values[idx] += gen.nonzero_rational(-2, 2, 13);
    const MomentSequence gamma(values);
    ++perturbed;
    std::optional<PrescribedProblem> p;
    try {
      p.emplace(gamma, g.problem.prescribed(), g.problem.d2(), spec.include_infinity);
    } catch (const Error&) {
      ++rejected;  // perturbed data is not even positive definite
      continue;
    }
    const auto v = spec.include_infinity ? solve_prescribed_generalized(*p) : solve_prescribed_real(*p);
    if (v.status != VerdictStatus::Exists) continue;
    ++exists;
    c.expect(static_cast<bool>(compare(gamma, moments_of(*v.measure, gamma.degree()), kMomentRelTol)),
             "false Exists for perturbed seed " + std::to_string(seed));
  }
  c.note = "500 round trips (" + std::to_string(with_infinity) + " with infinity); " + std::to_string(perturbed) +
           " perturbed, " + std::to_string(rejected) + " rejected as invalid, " + std::to_string(exists) +
           " verified Exists";
}

void criterion6(Check& c) {
  Gen gen(6001);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = static_cast<std::size_t>(gen.integer(1, 3));
    std::vector<Scalar> g;
    if (gen.coin()) {
      g = moments_of(gen.measure(static_cast<std::size_t>(gen.integer(1, 5)), -3, 3, 4), 2 * d).values();
      if (gen.coin()) g[2 * d] += gen.rational(-1, 1, 3);
    } else {
      g.push_back(Scalar(gen.integer(1, 5)));
      for (std::size_t i = 1; i <= 2 * d; ++i) g.push_back(gen.rational(-3, 3, 2));
    }
    const MomentSequence gamma(g);
    const Matrix m = moment_matrix(gamma, d);
    const bool psd = psd_by_principal_minors(m);
    const bool pd_or_flat = pd_by_leading_minors(m) || (psd && rank(m) == rank(moment_matrix(gamma, d - 1)));
    c.expect(static_cast<bool>(check_prg(gamma)) == pd_or_flat, "prg disagrees in trial " + std::to_string(trial));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = static_cast<std::size_t>(gen.integer(0, 4));
    const MomentSequence g = moments_of(gen.measure(d + 1 + static_cast<std::size_t>(gen.integer(0, 3))), 2 * d);
    const auto ext = flat_extension(g, gen.rational(-50, 50, 7));
    c.expect(rank_of_sequence(ext) == d + 1, "flat extension rank in trial " + std::to_string(trial));
    const auto v = solve_tmp(ext);
    c.expect(v.status == TmpStatus::Unique && v.measure && v.measure->size() == d + 1 &&
                 compare(ext, moments_of(*v.measure, ext.degree())),
             "flat extension measure in trial " + std::to_string(trial));
  }
  c.note = "300 prg comparisons, 100 flat extensions";
}

void criterion7(Check& c) {
  Gen gen(7001);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d2 = static_cast<std::size_t>(gen.integer(1, 4));
    const auto xs = gen.distinct_rationals(1 + d2, -10, 10, 1000, 20);
    std::vector<WeightedAtom> atoms;
    for (const auto& x : xs) atoms.push_back({Atom::real(x), Scalar(gen.integer(100, 2000), 1000)});
    const MomentSequence gamma = moments_of(Measure(atoms), 2 * d2);
    const auto v = solve_prescribed_real(PrescribedProblem(gamma, {xs[0]}, d2));
    if (!v.trace.g) {
      c.expect(false, "no g in trial " + std::to_string(trial));
      continue;
    }
    const auto want = real_roots(*v.trace.g);
    const auto got = determinantal_cross_check(gamma, xs[0], d2);
    bool agree = want.all_real_distinct() && got.size() == want.roots.size();
    for (std::size_t i = 0; agree && i < got.size(); ++i) agree = rel(got[i], want.roots[i]) <= kCrossCheckTol;
    c.expect(agree, "cross-check roots differ in trial " + std::to_string(trial));
  }

  int singular = 0;
  while (singular < 50) {
    const std::size_t d2 = static_cast<std::size_t>(gen.integer(1, 4));
    const Scalar x1 = gen.rational(-5, 5, 3);
    auto g = moments_of(gen.measure(d2 + 2), 2 * d2).values();
    const Polynomial f = Polynomial::linear_factor(x1);
    auto det_at = [&](const Scalar& t) {
      auto h = g;
      h[2 * d2 - 1] = t;
      return determinant(localizing_matrix(MomentSequence(h), f, static_cast<int>(d2) - 1));
    };
    const Scalar a = det_at(Scalar(0)), slope = det_at(Scalar(1)) - a;
    if (slope.is_zero()) continue;
    g[2 * d2 - 1] = -a / slope;
    const MomentSequence gamma(g);
    const Matrix m = moment_matrix(gamma, d2 - 1);
    if (determinant(m).is_zero()) continue;
    ++singular;
    const Vector phi = solve_linear(m, moment_vector(gamma, d2, d2 - 1));
    std::vector<Scalar> coeffs;
    for (const auto& x : phi) coeffs.push_back(-x);
    coeffs.push_back(Scalar(1));
    c.expect(determinant(localizing_matrix(gamma, f, static_cast<int>(d2) - 1)).is_zero() && Polynomial(coeffs)(x1).is_zero(),
             "x1 is not a root of p with singular H_f");
  }

  // measures with m real atoms tested at a degree that allows more
  int minimal = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d1 = static_cast<std::size_t>(gen.integer(1, 3));
    const std::size_t m = d1 + static_cast<std::size_t>(gen.integer(0, 2));
    const std::size_t d2 = m - d1 + 1 + static_cast<std::size_t>(gen.integer(0, 1));
    const std::size_t D = d1 + 2 * d2 - 1;
    const auto xs = gen.distinct_rationals(m, -10, 10, 100, 20);
    std::vector<WeightedAtom> atoms;
    for (const auto& x : xs) atoms.push_back({Atom::real(x), Scalar(gen.integer(10, 300), 100)});
    const Measure mu(atoms);
    const std::vector<Scalar> prescribed(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(d1));
    const auto r = search_minimal(moments_of(mu, D), prescribed, false);
    ++minimal;
    std::string why;
    c.expect(r.atom_count == m && r.verdict.status == VerdictStatus::Exists && r.verdict.measure &&
                 same_measure(*r.verdict.measure, mu, why),
             "search_minimal found " + std::to_string(r.atom_count) + " atoms, expected " + std::to_string(m) + " " + why);
  }
  c.note = "50 cross-checks, " + std::to_string(singular) + " singular H_f instances, " + std::to_string(minimal) +
           " minimal-count searches";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "non-existence example", 1, criterion1},
      {2, "generalized non-existence example", 1, criterion2},
      {3, "existence example", 1, criterion3},
      {4, "band matrix and congruence identities", 30, criterion4},
      {5, "round trips and perturbations", 120, criterion5},
      {6, "truncated moment problem", 30, criterion6},
      {7, "cross-check, singular H_f, minimal search", 60, criterion7},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= cr.budget_seconds)
      c.failures.push_back("took " + std::to_string(secs) + " s, budget " + std::to_string(cr.budget_seconds) + " s");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s criterion %d (%s) %.3f s%s%s\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                c.note.empty() ? "" : ": ", c.note.c_str());
    for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  }
  return failed == 0 ? 0 : 1;
}
