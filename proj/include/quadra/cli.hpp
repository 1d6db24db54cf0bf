#pragma once

// Command implementations behind the `quadra` executable. Each command takes
// already-parsed options and returns the exit code plus the text destined for
// stdout and stderr, so the commands are testable without spawning processes.

#include "verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace quadra::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode : int { Exists = 0, NotExists = 1, InvalidInput = 2, Indeterminate = 3 };

inline int exit_code(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Exists: return Exists;
    case VerdictStatus::NotExists: return NotExists;
    case VerdictStatus::Indeterminate: return Indeterminate;
  }
  return Indeterminate;
}

struct Outcome {
  int code = Exists;
  std::string out;  // stdout; always empty when code == InvalidInput
  std::string err;  // stderr
};

struct Instance {
  std::vector<Scalar> moments;
  std::vector<Scalar> prescribed;
  std::optional<std::size_t> d2;
  bool allow_infinity = false;
  Mode mode = Mode::Exact;
};

// ---------------------------------------------------------------------------
// JSON <-> numbers

/// Strings go through parse_scalar, integers are exact, and JSON floats are
/// rationalized from their shortest round-trip decimal. Always exact.
inline Scalar scalar_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_scalar(j.get<std::string>());
    if (j.is_number_integer()) return parse_scalar(j.dump());
    if (j.is_number_float()) {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, "non-finite number");
      return parse_scalar(Scalar::format_double(v));
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, where + ": " + e.what());
  }
  throw Error(ErrorCode::ParseError, where + ": expected a number or a numeric string");
}

/// Measure values: like scalar_from_json, except that JSON floats stay
/// floats because they are approximations rather than data.
inline Scalar measure_scalar_from_json(const json& j, const std::string& where) {
  if (j.is_number_float()) return Scalar::floating(j.get<double>());
  return scalar_from_json(j, where);
}

inline json to_json(const Scalar& s) {
  if (s.is_exact()) return s.str();
  return s.to_double();
}

inline json to_json(const std::vector<Scalar>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(to_json(s));
  return out;
}

inline json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

/// Coefficients from the highest degree down, as polynomials are written.
inline json coeffs_json(const Polynomial& p) {
  json out = json::array();
  for (std::size_t i = p.coeffs().size(); i-- > 0;) out.push_back(to_json(p.coeffs()[i]));
  return out;
}

inline json measure_json(const Measure& m) {
  json nodes = json::array(), weights = json::array();
  for (const auto& a : m.atoms()) {
    nodes.push_back(a.atom.is_infinity() ? json("infinity") : to_json(a.atom.position()));
    weights.push_back(to_json(a.density));
  }
  return {{"nodes", std::move(nodes)}, {"weights", std::move(weights)}};
}

inline Measure parse_measure(const json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("weights") || !j["nodes"].is_array() ||
      !j["weights"].is_array())
    throw Error(ErrorCode::ParseError, "measure needs 'nodes' and 'weights' arrays");
  const auto& nodes = j["nodes"];
  const auto& weights = j["weights"];
  if (nodes.size() != weights.size())
    throw Error(ErrorCode::ParseError, "'nodes' and 'weights' differ in length");
  std::vector<WeightedAtom> atoms;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string at = "weights[" + std::to_string(i) + "]";
    Scalar w = measure_scalar_from_json(weights[i], at);
    if (nodes[i].is_string() && nodes[i].get<std::string>() == "infinity")
      atoms.push_back({Atom::infinity(), std::move(w)});
    else
      atoms.push_back({Atom::real(measure_scalar_from_json(nodes[i], "nodes[" + std::to_string(i) + "]")),
                       std::move(w)});
  }
  return Measure(std::move(atoms));
}

inline Instance parse_instance(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "instance must be a JSON object");
  if (!j.contains("moments") || !j["moments"].is_array())
    throw Error(ErrorCode::ParseError, "instance needs a 'moments' array");
  Instance inst;
  for (std::size_t i = 0; i < j["moments"].size(); ++i)
    inst.moments.push_back(scalar_from_json(j["moments"][i], "moments[" + std::to_string(i) + "]"));
  if (inst.moments.empty()) throw Error(ErrorCode::ParseError, "'moments' is empty");
  if (j.contains("prescribed_nodes")) {
    if (!j["prescribed_nodes"].is_array()) throw Error(ErrorCode::ParseError, "'prescribed_nodes' must be an array");
    for (std::size_t i = 0; i < j["prescribed_nodes"].size(); ++i)
      inst.prescribed.push_back(
          scalar_from_json(j["prescribed_nodes"][i], "prescribed_nodes[" + std::to_string(i) + "]"));
  }
  if (j.contains("d2") && !j["d2"].is_null()) {
    if (!j["d2"].is_number_unsigned()) throw Error(ErrorCode::ParseError, "'d2' must be a non-negative integer");
    inst.d2 = j["d2"].get<std::size_t>();
  }
  if (j.contains("allow_infinity")) {
    if (!j["allow_infinity"].is_boolean()) throw Error(ErrorCode::ParseError, "'allow_infinity' must be a boolean");
    inst.allow_infinity = j["allow_infinity"].get<bool>();
  }
  if (j.contains("mode")) {
    const auto m = j["mode"].is_string() ? j["mode"].get<std::string>() : std::string();
    if (m == "exact")
      inst.mode = Mode::Exact;
    else if (m == "float")
      inst.mode = Mode::Float;
    else
      throw Error(ErrorCode::ParseError, "'mode' must be \"exact\" or \"float\"");
  }
  return inst;
}

inline json instance_json(const Instance& inst) {
  json j = {{"moments", to_json(inst.moments)},
            {"prescribed_nodes", to_json(inst.prescribed)},
            {"allow_infinity", inst.allow_infinity},
            {"mode", inst.mode == Mode::Exact ? "exact" : "float"}};
  if (inst.d2) j["d2"] = *inst.d2;
  return j;
}

/// Reads and parses a JSON file; the parser's byte offset is kept in the message.
inline json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                path.string() + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline PrescribedProblem make_problem(const Instance& inst, bool allow_infinity, bool force_float) {
  const Mode mode = force_float ? Mode::Float : inst.mode;
  MomentSequence gamma(to_mode(inst.moments, mode));
  auto nodes = to_mode(inst.prescribed, mode);
  if (inst.d2) return PrescribedProblem(std::move(gamma), std::move(nodes), *inst.d2, allow_infinity);
  return PrescribedProblem::infer(std::move(gamma), std::move(nodes), allow_infinity);
}

// ---------------------------------------------------------------------------
// reports

inline json certificate_json(const Certificate& c) {
  json j = {{"stage", to_string(c.stage)}, {"index", c.index}, {"detail", c.detail}};
  if (c.value) j["value"] = to_json(*c.value);
  if (c.expected) j["expected"] = to_json(*c.expected);
  if (c.matrix) j["matrix"] = to_json(*c.matrix);
  return j;
}

inline void append_eigen(json& out, const Trace& t, const char* branch) {
  for (const auto& e : t.eigenvalues) out.push_back({{"label", e.label}, {"branch", branch}, {"values", e.values}});
}

inline json report_json(const QuadratureVerdict& v) {
  json j = {{"status", to_string(v.status)}, {"branch", v.infinity_branch ? "infinity" : "real"}};
  if (v.certificate) j["certificate"] = certificate_json(*v.certificate);
  const json m = v.measure ? measure_json(*v.measure) : json{{"nodes", json::array()}, {"weights", json::array()}};
  j["nodes"] = m["nodes"];
  j["weights"] = m["weights"];
  j["g_coeffs"] = v.trace.g ? coeffs_json(*v.trace.g) : json::array();
  j["h_coeffs"] = v.trace.h ? coeffs_json(*v.trace.h) : json::array();
  j["extended_moments"] = v.trace.extended ? to_json(v.trace.extended->values()) : json::array();
  json eig = json::array();
  if (v.real_trace) append_eigen(eig, *v.real_trace, "real");
  append_eigen(eig, v.trace, v.infinity_branch ? "infinity" : "real");
  j["eigenvalue_report"] = std::move(eig);
  return j;
}

inline std::string human_summary(const QuadratureVerdict& v) {
  std::ostringstream os;
  os << "status: " << to_string(v.status) << (v.infinity_branch ? " (evaluation at infinity allowed)" : "") << "\n";
  if (v.certificate)
    os << "certificate: " << to_string(v.certificate->stage) << " at " << v.certificate->index << ": "
       << v.certificate->detail << "\n";
  if (v.trace.g) os << "g = " << v.trace.g->str() << "\n";
  if (v.measure)
    for (const auto& a : v.measure->atoms()) {
      const std::string node = a.atom.is_infinity() ? "infinity" : Scalar::format_double(a.atom.position().to_double());
      os << "  node " << node << "  weight " << Scalar::format_double(a.density.to_double()) << "\n";
    }
  return os.str();
}

// ---------------------------------------------------------------------------
// solve

struct SolveOptions {
  bool allow_infinity = false;  // OR-ed with the instance flag
  bool force_float = false;
  unsigned jobs = 1;
};

inline Outcome solve_file(const fs::path& path, const SolveOptions& opt) {
  Outcome o;
  try {
    const Instance inst = parse_instance(read_json(path));
    const bool infinity = opt.allow_infinity || inst.allow_infinity;
    const PrescribedProblem problem = make_problem(inst, infinity, opt.force_float);
    const auto verdict = infinity ? solve_prescribed_generalized(problem) : solve_prescribed_real(problem);
    o.code = exit_code(verdict.status);
    o.out = report_json(verdict).dump(2) + "\n";
    o.err = human_summary(verdict);
  } catch (const Error& e) {
    o.code = e.code() == ErrorCode::Indeterminate ? Indeterminate : InvalidInput;
    o.out.clear();
    o.err = path.string() + ": " + e.what() + "\n";
  }
  return o;
}

// Batch exit code: any invalid input dominates, then indeterminate, then
// non-existence.
inline int combine_codes(int a, int b) {
  auto rank = [](int c) { return c == InvalidInput ? 3 : c == Indeterminate ? 2 : c == NotExists ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

inline std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

// Runs task(i) for i in [0, n) on up to `jobs` threads.
template <class Task>
void parallel_for(std::size_t n, unsigned jobs, Task task) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) task(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

/// A file gives one report. A directory solves every *.json in it and prints
/// a JSON array of {file, exit_code, report}.
inline Outcome cmd_solve(const fs::path& path, const SolveOptions& opt) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) return solve_file(path, opt);

  const auto files = json_files(path);
  std::vector<Outcome> results(files.size());
  parallel_for(files.size(), opt.jobs, [&](std::size_t i) { results[i] = solve_file(files[i], opt); });

  Outcome o;
  json batch = json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    o.code = combine_codes(o.code, results[i].code);
    json entry = {{"file", files[i].filename().string()}, {"exit_code", results[i].code}};
    if (!results[i].out.empty()) entry["report"] = json::parse(results[i].out);
    else entry["error"] = results[i].err;
    batch.push_back(std::move(entry));
    o.err += results[i].err;
  }
  o.out = batch.dump(2) + "\n";
  return o;
}

// ---------------------------------------------------------------------------
// tmp

/// Unique and InfinitelyMany exit 0, NotRepresentable 1. With next_odd an
/// InfinitelyMany sequence is flat-extended and the resulting measure reported.
inline Outcome cmd_tmp(const fs::path& path, const std::optional<std::string>& next_odd) {
  Outcome o;
  try {
    const Instance inst = parse_instance(read_json(path));
    const MomentSequence gamma(to_mode(inst.moments, inst.mode));
    const auto v = solve_tmp(gamma);
    json j = {{"status", to_string(v.status)}, {"rank", v.rank}};
    if (!v.prg) j["prg_failure"] = {{"kind", v.prg.failure == PrgFailure::MinorNotPositive ? "MinorNotPositive"
                                                                                            : "RecursionBroken"},
                                    {"index", v.prg.index}};
    std::optional<Measure> measure = v.measure;
    std::optional<Polynomial> generating = v.generating;
    if (v.status == TmpStatus::InfinitelyMany && next_odd) {
      Scalar odd = parse_scalar(*next_odd).to_mode(gamma.mode());
      const auto ext = flat_extension(gamma, odd);
      const auto flat = solve_tmp(ext);
      if (flat.status != TmpStatus::Unique)
        throw Error(ErrorCode::Indeterminate, "flat extension did not produce a unique measure");
      j["flat_extension"] = to_json(std::vector<Scalar>{ext[ext.degree() - 1], ext[ext.degree()]});
      measure = flat.measure;
      generating = flat.generating;
    }
    if (measure) {
      const json m = measure_json(*measure);
      j["nodes"] = m["nodes"];
      j["weights"] = m["weights"];
      const auto check = compare(gamma, moments_of(*measure, gamma.degree()));
      j["moments_verified"] = check.match;
    }
    if (generating) j["generating_coeffs"] = coeffs_json(*generating);
    o.code = v.status == TmpStatus::NotRepresentable ? NotExists : Exists;
    o.out = j.dump(2) + "\n";
    o.err = std::string("status: ") + to_string(v.status) + ", rank " + std::to_string(v.rank) + "\n";
  } catch (const Error& e) {
    o.code = e.code() == ErrorCode::Indeterminate ? Indeterminate : InvalidInput;
    o.out.clear();
    o.err = path.string() + ": " + e.what() + "\n";
  }
  return o;
}

// ---------------------------------------------------------------------------
// verify

/// Match exits 0, Mismatch 1. The measure file may be a solve report.
inline Outcome cmd_verify(const fs::path& measure_path, const fs::path& instance_path, double tol) {
  Outcome o;
  try {
    const Measure measure = parse_measure(read_json(measure_path));
    const Instance inst = parse_instance(read_json(instance_path));
    const MomentSequence expected(to_mode(inst.moments, inst.mode));
    const auto r = compare(expected, moments_of(measure, expected.degree()), tol);
    json j = {{"result", r.match ? "Match" : "Mismatch"}};
    if (!r.match) {
      j["index"] = r.index;
      j["delta"] = r.delta;
    }
    o.code = r.match ? 0 : 1;
    o.out = j.dump(2) + "\n";
  } catch (const Error& e) {
    o.code = InvalidInput;
    o.out.clear();
    o.err = std::string(e.what()) + "\n";
  }
  return o;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
  InstanceSpec spec;
  std::size_t count = 1;  // seeds spec.seed, spec.seed + 1, ...
  fs::path out = ".";
  unsigned jobs = 1;
};

/// Writes instance_<seed>.json and solution_<seed>.json per seed.
inline Outcome cmd_gen(const GenOptions& opt) {
  Outcome o;
  try {
    fs::create_directories(opt.out);
    std::vector<std::string> errors(opt.count);
    parallel_for(opt.count, opt.jobs, [&](std::size_t i) {
      InstanceSpec spec = opt.spec;
      spec.seed += i;
      try {
        const auto g = random_instance(spec);
        Instance inst;
        inst.moments = g.moments.values();
        inst.prescribed = g.problem.prescribed();
        inst.d2 = g.problem.d2();
        // An infinity atom is not switched on in the file: solving such an
        // instance is meant to need an explicit --allow-infinity.
        const std::string stem = std::to_string(spec.seed);
        std::ofstream(opt.out / ("instance_" + stem + ".json")) << instance_json(inst).dump(2) << "\n";
        std::ofstream(opt.out / ("solution_" + stem + ".json")) << measure_json(g.measure).dump(2) << "\n";
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    });
    for (const auto& e : errors)
      if (!e.empty()) throw Error(ErrorCode::InfeasibleSpec, e);
    o.out = "wrote " + std::to_string(opt.count) + " instance(s) to " + opt.out.string() + "\n";
  } catch (const Error& e) {
    o.code = InvalidInput;
    o.out.clear();
    o.err = std::string(e.what()) + "\n";
  } catch (const fs::filesystem_error& e) {
    o.code = InvalidInput;
    o.out.clear();
    o.err = std::string(e.what()) + "\n";
  }
  return o;
}

}  // namespace quadra::cli
