#include "framekit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "framekit/controlled.hpp"
#include "framekit/error.hpp"
#include "framekit/generators.hpp"
#include "framekit/io.hpp"
#include "framekit/kframe.hpp"
#include "framekit/perturbation.hpp"
#include "framekit/solver.hpp"

namespace framekit::cli {

namespace {

using io::Json;

struct Range {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

struct Options {
  std::string command;
  std::string input, k, c, perturbed, rhs, out;
  std::string format = "json";
  std::string direction;
  std::string mode = "kframe";
  std::string kind = "frame";
  std::string dims = "2:6";
  std::string counts = "2:12";
  std::string seeds;
  std::optional<double> lower, upper, tol;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double gamma_frac = 0.5;
  double e_frac = 1.0;
  double magnitude = 0.0;
  double scale = 1.0;
  double tol_res = 1e-10;
  std::uint64_t seed = 0;
  std::size_t trials = 256;
  std::size_t max_iter = 10000;
  std::size_t dim = 4;
  std::size_t count = 8;
  std::size_t rank = 0;
  std::optional<std::size_t> k_rank;
};

// Input problems the CLI detects itself; reported like library input errors.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Json report;
  int code = kExitOk;
  // Rows for --format csv; empty means "flatten the report".
  std::string csv;
};

const std::string& need(const std::string& value, const char* flag, const std::string& command) {
  if (value.empty()) throw InputError(std::string("missing required option ") + flag + " for command '" + command + "'");
  return value;
}

double need(const std::optional<double>& value, const char* flag, const std::string& command) {
  if (!value) throw InputError(std::string("missing required option ") + flag + " for command '" + command + "'");
  return *value;
}

Range parse_range(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  Range r;
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      r.lo = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      r.hi = r.lo + 1;
      return r;
    }
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    r.lo = std::stoull(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    r.hi = std::stoull(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
  } catch (const std::logic_error&) {
    throw InputError(std::string(flag) + ": expected 'lo:hi', got '" + text + "'");
  }
  return r;
}

Json bounds_json(const FrameBounds& b) {
  Json j;
  j["lower"] = io::number(b.lower);
  j["upper"] = io::number(b.upper);
  j["lower_optimal"] = b.lower_optimal;
  j["upper_optimal"] = b.upper_optimal;
  return j;
}

Json cert_json(const CertReport& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["bounds"] = bounds_json(r.bounds);
  j["margin"] = io::number(r.margin);
  j["scale"] = io::number(r.scale);
  j["witness"] = io::to_json(std::span<const cplx>(r.witness));
  j["anti_hermitian_residual"] = io::number(r.anti_hermitian_residual);
  j["commute_residual"] = io::number(r.commute_residual);
  return j;
}

Json condition_json(const ConditionReport& c) {
  Json j;
  j["mode"] = std::string(to_string(c.mode));
  j["e_norm"] = io::number(c.e_norm);
  j["gate_value"] = io::number(c.gate_value);
  j["gate_passes"] = c.gate_passes;
  j["trials"] = c.trials;
  j["worst_slack"] = io::number(c.worst_slack);
  j["seed"] = c.seed;
  return j;
}

Json perturbation_json(const PerturbationReport& r) {
  Json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["admissible"] = r.admissible;
  j["gate_value"] = io::number(r.gate_value);
  j["predicted"] = r.predicted ? bounds_json(*r.predicted) : Json(nullptr);
  j["empirical"] = r.empirical ? bounds_json(*r.empirical) : Json(nullptr);
  j["e_norm"] = io::number(r.e_norm);
  j["lower_slack"] = io::number(r.lower_slack);
  j["upper_slack"] = io::number(r.upper_slack);
  j["scale"] = io::number(r.scale);
  j["violation"] = r.violation;
  j["projector_rank"] = r.projector_rank;
  if (r.condition) j["condition"] = condition_json(*r.condition);
  return j;
}

Json spec_json(const PerturbationSpec& s) {
  Json j;
  j["alpha"] = io::number(s.alpha);
  j["beta"] = io::number(s.beta);
  j["gamma"] = io::number(s.gamma);
  return j;
}

int exit_for(Verdict v) { return v == Verdict::Certified ? kExitOk : kExitRefuted; }

Json header(const Options& o, const char* anchor, const Tolerance& tol) {
  Json j;
  j["command"] = o.command;
  j["anchor"] = anchor;
  Json t;
  t["rel_eps"] = io::number(tol.rel_eps);
  t["rank_eps"] = io::number(tol.rank_eps);
  j["tolerance"] = std::move(t);
  return j;
}

// --- commands ---------------------------------------------------------------

Outcome cmd_bounds(const Options& o, const Tolerance& tol) {
  const FrameFamily f = io::read_frame(need(o.input, "--input", o.command));
  Outcome out;
  out.report = header(o, "frame-bounds", tol);
  const FrameBounds b = optimal_frame_bounds(f, tol);
  out.report["dim"] = f.dim();
  out.report["count"] = f.count();
  out.report["optimal"] = bounds_json(b);
  if (o.lower || o.upper) {
    const double a = need(o.lower, "--lower", o.command);
    const double bb = need(o.upper, "--upper", o.command);
    const CertReport r = certify_kframe(KFrameProblem(f, DenseOperator::identity(f.dim())), a, bb, tol);
    out.report["certificate"] = cert_json(r);
    out.report["verdict"] = std::string(to_string(r.verdict));
    out.code = exit_for(r.verdict);
  } else {
    const bool frame = is_frame(b, tol);
    out.report["verdict"] = frame ? "Certified" : "Refuted";
    out.code = frame ? kExitOk : kExitRefuted;
  }
  return out;
}

Outcome cmd_certify_k(const Options& o, const Tolerance& tol) {
  const FrameFamily f = io::read_frame(need(o.input, "--input", o.command));
  const DenseOperator k = io::read_matrix(need(o.k, "--k", o.command));
  const KFrameProblem p(f, k);
  Outcome out;
  out.report = header(o, "kframe-certificate", tol);
  const FrameBounds opt = optimal_kframe_bounds(p, tol);
  out.report["optimal"] = bounds_json(opt);
  const double a = o.lower ? *o.lower : opt.lower;
  const double b = o.upper ? *o.upper : opt.upper;
  if (!(a > 0.0)) {
    out.report["verdict"] = "Refuted";
    out.report["reason"] = "optimal lower K-frame bound is zero";
    out.code = kExitRefuted;
    return out;
  }
  const CertReport r = certify_kframe(p, a, b, tol);
  out.report["verdict"] = std::string(to_string(r.verdict));
  out.report["certificate"] = cert_json(r);
  if (r.verdict == Verdict::Certified) {
    const CertReport rc = range_restricted_check(p, a, b, tol, o.seed);
    Json jr = cert_json(rc);
    jr["seed"] = o.seed;
    out.report["range_check"] = std::move(jr);
  }
  out.code = exit_for(r.verdict);
  return out;
}

Outcome cmd_certify_controlled(const Options& o, const Tolerance& tol) {
  const FrameFamily f = io::read_frame(need(o.input, "--input", o.command));
  const DenseOperator c = io::read_matrix(need(o.c, "--c", o.command));
  Outcome out;
  if (o.k.empty()) {
    out.report = header(o, "controlled-frame-certificate", tol);
    const CertReport r = certify_controlled_frame(f, c, tol);
    out.report["optimal"] = cert_json(r);
    Verdict v = r.verdict;
    if (v == Verdict::Certified && (o.lower || o.upper)) {
      const double a = need(o.lower, "--lower", o.command);
      const double b = need(o.upper, "--upper", o.command);
      if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::BadBounds, "frame bounds must be positive");
      const double slack = std::min(r.bounds.lower - a, b - r.bounds.upper);
      out.report["margin"] = io::number(slack);
      v = slack >= -tol.rel_eps * r.scale ? Verdict::Certified : Verdict::Refuted;
    }
    out.report["verdict"] = std::string(to_string(v));
    out.code = exit_for(v);
    return out;
  }
  out.report = header(o, "controlled-kframe-certificate", tol);
  const ControlledProblem p(f, io::read_matrix(o.k), c, tol);
  const FrameBounds opt = optimal_controlled_kframe_bounds(p, tol);
  out.report["optimal"] = bounds_json(opt);
  const double a = o.lower ? *o.lower : opt.lower;
  const double b = o.upper ? *o.upper : opt.upper;
  if (!(a > 0.0)) {
    out.report["verdict"] = "Refuted";
    out.report["reason"] = "optimal lower controlled K-frame bound is zero";
    out.code = kExitRefuted;
    return out;
  }
  const CertReport r = certify_controlled_kframe(p, a, b, tol);
  out.report["verdict"] = std::string(to_string(r.verdict));
  out.report["certificate"] = cert_json(r);
  out.code = exit_for(r.verdict);
  return out;
}

Outcome cmd_transfer(const Options& o, const Tolerance& tol) {
  const DenseOperator c = io::read_matrix(need(o.c, "--c", o.command));
  FrameBounds in;
  in.lower = need(o.lower, "--lower", o.command);
  in.upper = need(o.upper, "--upper", o.command);
  const bool c2k = o.direction == "c2k";
  if (!c2k && o.direction != "k2c") throw InputError("--direction: expected 'c2k' or 'k2c', got '" + o.direction + "'");
  Outcome out;
  out.report = header(o, c2k ? "controlled-to-kframe-transfer" : "kframe-to-controlled-transfer", tol);
  out.report["direction"] = o.direction;
  out.report["input_bounds"] = bounds_json(in);
  const FrameBounds t = c2k ? transfer_controlled_to_k(in, c, tol) : transfer_k_to_controlled(in, c, tol);
  out.report["bounds"] = bounds_json(t);
  if (!o.input.empty() && !o.k.empty()) {
    const FrameFamily f = io::read_frame(o.input);
    const DenseOperator k = io::read_matrix(o.k);
    const CertReport r = c2k ? certify_kframe(KFrameProblem(f, k), t.lower, t.upper, tol)
                             : certify_controlled_kframe(ControlledProblem(f, k, c, tol), t.lower, t.upper, tol);
    out.report["verdict"] = std::string(to_string(r.verdict));
    out.report["certificate"] = cert_json(r);
    out.code = exit_for(r.verdict);
  } else {
    out.report["verdict"] = "Computed";
  }
  return out;
}

PerturbationSpec spec_from(const Options& o) {
  PerturbationSpec s{o.alpha, o.beta, o.gamma};
  s.validate();
  return s;
}

Outcome cmd_perturb_predict(const Options& o, const Tolerance& tol) {
  const DenseOperator k = io::read_matrix(need(o.k, "--k", o.command));
  const PerturbationSpec s = spec_from(o);
  const double a = need(o.lower, "--lower", o.command);
  const double b = need(o.upper, "--upper", o.command);
  Outcome out;
  out.report = header(o, "kframe-perturbation-bounds", tol);
  out.report["spec"] = spec_json(s);
  const PerturbationReport r = kframe_perturb_predict(a, b, k, s, tol);
  out.report["admissible"] = r.admissible;
  out.report["gate_value"] = io::number(r.gate_value);
  out.report["predicted"] = r.predicted ? bounds_json(*r.predicted) : Json(nullptr);
  out.report["verdict"] = r.admissible ? "Certified" : "Refuted";
  out.code = r.admissible ? kExitOk : kExitRefuted;
  return out;
}

Outcome cmd_perturb_verify(const Options& o, const Tolerance& tol) {
  const FrameFamily f = io::read_frame(need(o.input, "--input", o.command));
  const FrameFamily g = io::read_frame(need(o.perturbed, "--perturbed", o.command));
  const DenseOperator k = io::read_matrix(need(o.k, "--k", o.command));
  Outcome out;
  if (!o.c.empty()) {
    out.report = header(o, "compact-perturbation", tol);
    const ControlledProblem p(f, k, io::read_matrix(o.c), tol);
    const PerturbationReport r = certify_perturbed_controlled(p, g, tol);
    Json j = perturbation_json(r);
    j["bessel_bound"] = io::number(r.bessel_bound);
    j["bessel_reference"] = io::number(r.bessel_reference);
    j["synthesis_residual"] = io::number(r.synthesis_residual);
    j["frame_operator_residual"] = io::number(r.frame_operator_residual);
    j["span_is_full"] = r.span_is_full;
    j["span_commute_residual"] = io::number(r.commute_residual);
    out.report["result"] = std::move(j);
    out.report["verdict"] = std::string(to_string(r.verdict));
    out.code = r.violation ? kExitRefuted : exit_for(r.verdict);
    return out;
  }
  out.report = header(o, "kframe-perturbation-bounds", tol);
  const PerturbationSpec s = spec_from(o);
  out.report["spec"] = spec_json(s);
  out.report["seed"] = o.seed;
  out.report["trials"] = o.trials;
  const PerturbationReport r = verify_perturbed_kframe(f, g, k, s, tol, o.trials, o.seed);
  out.report["result"] = perturbation_json(r);
  out.report["verdict"] = std::string(to_string(r.verdict));
  out.code = r.violation ? kExitRefuted : exit_for(r.verdict);
  return out;
}

Json trace_json(const SolveTrace& t) {
  Json j;
  j["iterations"] = t.iterations;
  j["converged"] = t.converged;
  j["diverged"] = t.diverged;
  j["relaxation"] = io::number(t.relaxation);
  j["contraction_bound"] = io::number(t.contraction_bound);
  j["rate_estimate"] = io::number(t.rate_estimate);
  Json h = Json::array();
  for (double v : t.residual_history) h.push_back(io::number(v));
  j["residual_history"] = std::move(h);
  return j;
}

Outcome cmd_solve(const Options& o, const Tolerance& tol) {
  const FrameFamily f = io::read_frame(need(o.input, "--input", o.command));
  const Vector g = io::read_vector(need(o.rhs, "--rhs", o.command));
  Outcome out;
  out.report = header(o, o.c.empty() ? "frame-algorithm" : "preconditioned-frame-algorithm", tol);
  SolveResult res;
  if (o.c.empty()) {
    res = frame_algorithm(f, g, o.tol_res, o.max_iter, tol);
  } else {
    const DenseOperator c = io::read_matrix(o.c);
    res = preconditioned_frame_algorithm(f, c, g, o.tol_res, o.max_iter, tol);
    const ConditionNumbers cn = condition_report(f, c, tol);
    Json jc;
    jc["plain"] = io::number(cn.plain);
    jc["controlled"] = io::number(cn.controlled);
    out.report["condition"] = std::move(jc);
  }
  out.report["tol_res"] = io::number(o.tol_res);
  out.report["max_iter"] = o.max_iter;
  out.report["trace"] = trace_json(res.trace);
  out.report["solution"] = io::to_json(std::span<const cplx>(res.solution));
  out.report["verdict"] = res.trace.converged ? "Certified" : "Refuted";
  out.code = res.trace.converged ? kExitOk : kExitRefuted;
  return out;
}

Outcome cmd_gen(const Options& o, const Tolerance& tol) {
  const GenSpec spec{o.dim, o.count, o.seed, o.scale};
  spec.validate();
  Outcome out;
  if (o.kind == "frame") {
    out.report = io::to_json(random_frame(spec));
  } else if (o.kind == "pair") {
    const CommutingPair p = commuting_pair(spec, o.rank);
    out.report["k"] = io::to_json(p.k);
    out.report["c"] = io::to_json(p.c);
  } else if (o.kind == "perturb") {
    const FrameFamily f = io::read_frame(need(o.input, "--input", o.command));
    out.report = io::to_json(perturb_family(f, o.magnitude, o.seed).family);
  } else {
    throw InputError("--kind: expected 'frame', 'pair' or 'perturb', got '" + o.kind + "'");
  }
  (void)tol;
  return out;
}

// --- sweep ------------------------------------------------------------------

struct SweepRow {
  std::uint64_t seed = 0;
  std::size_t d = 0;
  std::size_t n = 0;
  double e_norm = 0.0;
  std::optional<double> gate;
  double pred_lower = 0.0;
  double pred_upper = 0.0;
  double emp_lower = 0.0;
  double emp_upper = 0.0;
  bool violation = false;
  std::string error;
};

std::size_t draw_between(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return static_cast<std::size_t>(lo + rng.next_u64() % (hi - lo + 1));
}

SweepRow sweep_kframe(const Options& o, Range dims, Range counts, std::uint64_t seed, const Tolerance& tol) {
  SweepRow row;
  row.seed = seed;
  Rng rng(seed, streams::kScaling);
  row.d = draw_between(rng, dims.lo, dims.hi);
  row.n = std::max<std::size_t>(row.d, draw_between(rng, counts.lo, counts.hi));
  const FrameFamily f = random_frame({row.d, row.n, seed, o.scale});
  DenseOperator k = DenseOperator::identity(row.d);
  if (o.k_rank) {
    const std::size_t r = std::clamp<std::size_t>(*o.k_rank, 1, row.d);
    Rng krng(seed, streams::kKSpectrum);
    k = krng.complex_gaussian_matrix(row.d, r) * krng.complex_gaussian_matrix(r, row.d);
  }
  const KFrameProblem p(f, k);
  const FrameBounds fb = optimal_kframe_bounds(p, tol);
  const double k_pinv = operator_norm(pseudo_inverse(k, tol));
  const double gamma = o.gamma_frac * std::sqrt(fb.lower) / k_pinv;
  const PerturbedFamily g = perturb_family(f, gamma, seed);
  const PerturbationReport r = verify_perturbed_kframe(f, g.family, k, {0.0, 0.0, gamma}, tol, o.trials, seed);
  row.e_norm = r.e_norm;
  row.gate = r.gate_value;
  if (r.predicted) {
    row.pred_lower = r.predicted->lower;
    row.pred_upper = r.predicted->upper;
  }
  row.emp_lower = r.empirical->lower;
  row.emp_upper = r.empirical->upper;
  row.violation = r.violation;
  return row;
}

SweepRow sweep_compact(const Options& o, Range dims, Range counts, std::uint64_t seed, const Tolerance& tol) {
  SweepRow row;
  row.seed = seed;
  Rng rng(seed, streams::kScaling);
  row.d = draw_between(rng, dims.lo, dims.hi);
  row.n = std::max<std::size_t>(row.d, draw_between(rng, counts.lo, counts.hi));
  const GenSpec spec{row.d, row.n, seed, o.scale};
  const CommutingPair pair = commuting_pair(spec, row.d);
  std::vector<double> spectrum(row.d);
  for (double& s : spectrum) s = rng.uniform(0.2, 3.0);
  const FrameFamily f = commuting_frame(spec, pair.basis, spectrum);
  const ControlledProblem p(f, pair.k, pair.c, tol);
  const double t_norm = operator_norm(synthesis(f));
  const PerturbedFamily g = perturb_family(f, o.e_frac * t_norm * rng.uniform(), seed);
  const PerturbationReport r = certify_perturbed_controlled(p, g.family, tol);
  row.e_norm = r.e_norm;
  row.pred_upper = r.bessel_bound;
  row.emp_lower = r.empirical ? r.empirical->lower : 0.0;
  row.emp_upper = r.empirical ? r.empirical->upper : 0.0;
  row.violation = r.violation;
  return row;
}

Outcome cmd_sweep(const Options& o, const Tolerance& tol) {
  const Range seeds = parse_range(need(o.seeds, "--seeds", o.command), "--seeds");
  if (seeds.hi <= seeds.lo) throw InputError("--seeds: empty seed range '" + o.seeds + "'");
  const Range dims = parse_range(o.dims, "--dims");
  const Range counts = parse_range(o.counts, "--counts");
  if (dims.lo < 1 || dims.hi < dims.lo || dims.hi > 64) throw InputError("--dims: range must satisfy 1 <= lo <= hi <= 64");
  if (counts.lo < 1 || counts.hi < counts.lo || counts.hi > 256) {
    throw InputError("--counts: range must satisfy 1 <= lo <= hi <= 256");
  }
  const bool compact = o.mode == "compact";
  if (!compact && o.mode != "kframe") throw InputError("--mode: expected 'kframe' or 'compact', got '" + o.mode + "'");
  if (!(o.gamma_frac >= 0.0 && o.gamma_frac < 1.0)) throw InputError("--gamma-frac: must lie in [0, 1)");
  if (!(o.e_frac >= 0.0) || !std::isfinite(o.e_frac)) throw InputError("--e-frac: must be finite and >= 0");

  std::vector<std::future<SweepRow>> jobs;
  for (std::uint64_t s = seeds.lo; s < seeds.hi; ++s) {
    jobs.push_back(std::async(std::launch::async, [&, s] {
      try {
        return compact ? sweep_compact(o, dims, counts, s, tol) : sweep_kframe(o, dims, counts, s, tol);
      } catch (const Error& e) {
        SweepRow row;
        row.seed = s;
        row.error = e.what();
        return row;
      }
    }));
  }
  std::vector<SweepRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());

  std::size_t violations = 0;
  std::size_t failures = 0;
  std::ostringstream csv;
  csv << "seed,d,n,e_norm,gate,predicted_lower,predicted_upper,empirical_lower,empirical_upper,violation\n";
  Json jrows = Json::array();
  for (const SweepRow& r : rows) {
    violations += r.violation ? 1 : 0;
    if (!r.error.empty()) {
      ++failures;
      csv << r.seed << ",,,,,,,,,error\n";
      Json j;
      j["seed"] = r.seed;
      j["error"] = r.error;
      jrows.push_back(std::move(j));
      continue;
    }
    csv << r.seed << ',' << r.d << ',' << r.n << ',' << io::format_double(r.e_norm) << ','
        << (r.gate ? io::format_double(*r.gate) : "") << ',' << io::format_double(r.pred_lower) << ','
        << io::format_double(r.pred_upper) << ',' << io::format_double(r.emp_lower) << ','
        << io::format_double(r.emp_upper) << ',' << (r.violation ? 1 : 0) << '\n';
    Json j;
    j["seed"] = r.seed;
    j["d"] = r.d;
    j["n"] = r.n;
    j["e_norm"] = io::number(r.e_norm);
    j["gate"] = r.gate ? io::number(*r.gate) : Json(nullptr);
    j["predicted_lower"] = io::number(r.pred_lower);
    j["predicted_upper"] = io::number(r.pred_upper);
    j["empirical_lower"] = io::number(r.emp_lower);
    j["empirical_upper"] = io::number(r.emp_upper);
    j["violation"] = r.violation;
    jrows.push_back(std::move(j));
  }
  csv << "summary," << rows.size() << ",violations," << violations << ",errors," << failures << '\n';

  Outcome out;
  out.report = header(o, compact ? "compact-perturbation-sweep" : "kframe-perturbation-sweep", tol);
  out.report["mode"] = o.mode;
  out.report["seeds"] = o.seeds;
  out.report["dims"] = o.dims;
  out.report["counts"] = o.counts;
  out.report["rows"] = std::move(jrows);
  Json summary;
  summary["instances"] = rows.size();
  summary["violations"] = violations;
  summary["errors"] = failures;
  out.report["summary"] = std::move(summary);
  out.report["verdict"] = violations == 0 && failures == 0 ? "Certified" : "Refuted";
  out.code = violations == 0 && failures == 0 ? kExitOk : kExitRefuted;
  out.csv = csv.str();
  return out;
}

// Outcomes that refute the instance rather than signal bad input.
bool is_refutation(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConditionFailed:
    case ErrorCode::NotCertified:
    case ErrorCode::NotAFrame:
    case ErrorCode::DegenerateProjector:
    case ErrorCode::SpanCollapse:
    case ErrorCode::CommutationViolated:
      return true;
    default:
      return false;
  }
}

const char* anchor_for(const std::string& command) {
  if (command == "bounds") return "frame-bounds";
  if (command == "certify-k") return "kframe-certificate";
  if (command == "certify-controlled") return "controlled-kframe-certificate";
  if (command == "transfer") return "controlled-kframe-transfer";
  if (command == "perturb-predict" || command == "perturb-verify") return "kframe-perturbation-bounds";
  if (command == "solve") return "frame-algorithm";
  return "perturbation-sweep";
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else {
    os << prefix << ',' << (j.is_number_float() ? io::format_double(j.get<double>()) : j.is_string() ? j.get<std::string>() : j.dump())
       << '\n';
  }
}

std::string render(const Outcome& o, const std::string& format) {
  if (format == "json") return io::dump(o.report);
  if (!o.csv.empty()) return o.csv;
  std::ostringstream os;
  os << "key,value\n";
  flatten(o.report, "", os);
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Certify frame, K-frame and controlled K-frame inequalities", "framekit"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"bounds", "optimal frame bounds of a family"},
      {"certify-k", "certify a K-frame inequality"},
      {"certify-controlled", "certify a controlled frame or controlled K-frame"},
      {"transfer", "move bounds between controlled K-frames and K-frames"},
      {"perturb-predict", "predicted bounds for a perturbed K-frame"},
      {"perturb-verify", "check a perturbed family against its prediction"},
      {"solve", "invert the frame operator iteratively"},
      {"sweep", "run a seeded perturbation ensemble"},
      {"gen", "generate seeded instances"},
  };
  for (const auto& [name, desc] : commands) app.add_subcommand(name, desc);

  app.add_option("--input", o.input, "frame file (JSON or CSV synthesis matrix)");
  app.add_option("--k", o.k, "matrix file for K");
  app.add_option("--c", o.c, "matrix file for the control operator C");
  app.add_option("--perturbed", o.perturbed, "perturbed frame file");
  app.add_option("--rhs", o.rhs, "right-hand side vector file");
  app.add_option("--lower", o.lower, "lower bound A");
  app.add_option("--upper", o.upper, "upper bound B");
  app.add_option("--tol", o.tol, "relative tolerance, in (0, 1e-2)");
  app.add_option("--seed", o.seed, "seed");
  app.add_option("--trials", o.trials, "sampled coefficient sequences");
  app.add_option("--out", o.out, "report path (stdout when omitted)");
  app.add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--direction", o.direction, "transfer direction: c2k or k2c");
  app.add_option("--alpha", o.alpha, "perturbation constant alpha");
  app.add_option("--beta", o.beta, "perturbation constant beta");
  app.add_option("--gamma", o.gamma, "perturbation constant gamma");
  app.add_option("--tol-res", o.tol_res, "solver residual tolerance");
  app.add_option("--max-iter", o.max_iter, "solver iteration limit");
  app.add_option("--mode", o.mode, "sweep mode: kframe or compact");
  app.add_option("--seeds", o.seeds, "sweep seed range lo:hi (hi exclusive)");
  app.add_option("--dims", o.dims, "sweep dimension range lo:hi (inclusive)");
  app.add_option("--counts", o.counts, "sweep family size range lo:hi (inclusive)");
  app.add_option("--gamma-frac", o.gamma_frac, "sweep gamma as a fraction of the admissible limit");
  app.add_option("--e-frac", o.e_frac, "sweep ||E|| limit as a fraction of ||T_F||");
  app.add_option("--k-rank", o.k_rank, "sweep K rank (identity when omitted)");
  app.add_option("--kind", o.kind, "gen kind: frame, pair or perturb");
  app.add_option("--dim", o.dim, "gen dimension");
  app.add_option("--count", o.count, "gen family size");
  app.add_option("--scale", o.scale, "gen scale");
  app.add_option("--rank", o.rank, "gen rank of K");
  app.add_option("--magnitude", o.magnitude, "gen perturbation magnitude");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "framekit: " << e.what() << '\n';
    return kExitInput;
  }
  o.command = app.get_subcommands().front()->get_name();

  Tolerance tol;
  Outcome result;
  try {
    tol = Tolerance::from_environment();
    if (o.tol) {
      if (!(std::isfinite(*o.tol) && *o.tol > 0.0 && *o.tol < 1e-2)) {
        throw InputError("--tol: must lie in (0, 1e-2)");
      }
      tol.rel_eps = *o.tol;
    }
    if (o.command == "bounds") result = cmd_bounds(o, tol);
    else if (o.command == "certify-k") result = cmd_certify_k(o, tol);
    else if (o.command == "certify-controlled") result = cmd_certify_controlled(o, tol);
    else if (o.command == "transfer") result = cmd_transfer(o, tol);
    else if (o.command == "perturb-predict") result = cmd_perturb_predict(o, tol);
    else if (o.command == "perturb-verify") result = cmd_perturb_verify(o, tol);
    else if (o.command == "solve") result = cmd_solve(o, tol);
    else if (o.command == "sweep") result = cmd_sweep(o, tol);
    else result = cmd_gen(o, tol);
  } catch (const InputError& e) {
    err << "framekit: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    if (!is_refutation(e.code())) {
      err << "framekit: " << e.what() << '\n';
      return kExitInput;
    }
    result.report = header(o, anchor_for(o.command), tol);
    result.report["verdict"] = "Refuted";
    result.report["reason"] = e.what();
    result.code = kExitRefuted;
  }

  const std::string text = render(result, o.format);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text)) {
      err << "framekit: cannot write report to " << o.out << '\n';
      return kExitInput;
    }
  }
  return result.code;
}

}  // namespace framekit::cli
