#include "popa/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "popa/json_io.hpp"

namespace popa::cli {

namespace {

using json_io::Json;

struct Options {
  std::string input;
  std::string output;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  double box_radius = 0.4;
  std::size_t max_iter = kDefaultMaxIter;
  std::size_t n_roots = 10;
};

struct Outcome {
  Json report;
  bool passed = true;
};

void merge(Json& dst, const Json& src) {
  for (const auto& [k, v] : src.items()) dst[k] = v;
}

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json load(const Options& o) {
  if (o.input.empty()) throw InputError("--input is required for this command");
  std::string text;
  if (o.input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw InputError("cannot read " + o.input);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  return json_io::parse(text);
}

// Accepts a bare solution or any report carrying one under "solution".
GsSolution solution_of(const Json& j) {
  if (j.is_object() && j.contains("solution") && !j.contains("variant")) {
    return json_io::solution_from_json(j["solution"]);
  }
  return json_io::solution_from_json(j);
}

Element element_of(const Json& j, const GsSolution& sol, const char* field) {
  return json_io::element_from_json(json_io::require(j, field), sol.algebra(), field);
}

Json classification_of(const GsSolution& sol) {
  if (!sol.algebra().componentwise() || sol.algebra().dim() != 2) return Json();
  return json_io::to_json(classify_2d(sol));
}

Outcome classify(const Options& o) {
  const Json in = load(o);
  Outcome res;
  if (in.is_object() && in.contains("sigma") && !in.contains("variant")) {
    const Matrix sigma = json_io::matrix_from_json(in["sigma"], "sigma");
    if (sigma.rows() != sigma.cols()) throw Error(ErrorCode::InvalidInput, "field 'sigma': expected a square matrix");
    if (!validate_sigma(sigma, o.tol)) {
      res.report = Json{{"valid", false}, {"reason", "sigma_ij != 0 for a pair of unequal rows"}};
      res.passed = false;
      return res;
    }
    const StructureReport sr = factorize(sigma, o.tol);
    if (sigma.rows() == 2) {
      const Json c = classification_of(GsSolution::partition(Algebra::hadamard(2), *sr.partition));
      res.report["class"] = c["class"];
      res.report["params"] = c["params"];
    }
    merge(res.report, json_io::to_json(sr));
    return res;
  }
  const GsSolution sol = solution_of(in);
  const Json c = classification_of(sol);
  if (!c.is_null()) {
    res.report["class"] = c["class"];
    res.report["params"] = c["params"];
  }
  res.report["variant"] = std::string(sol.name());
  const auto basis = kernel_basis(sol);
  res.report["kernel_dim"] = basis.size();
  Json kb = Json::array();
  for (const auto& b : basis) kb.push_back(json_io::coords_json(b));
  res.report["kernel_basis"] = std::move(kb);
  return res;
}

Json verification(const GsSolution& sol, const Options& o, bool& passed) {
  VerifyOptions vo;
  vo.n_samples = o.samples;
  vo.seed = o.seed;
  vo.box_radius = o.box_radius;
  const GoldieResidualReport r = verify_gs(sol, vo);
  Json j{{"samples", o.samples}, {"seed", o.seed}, {"box_radius", o.box_radius}, {"tol", o.tol}};
  merge(j, json_io::to_json(r));
  passed = r.max_gs_residual <= o.tol && r.max_goldie_residual <= o.tol;
  j["passed"] = passed;
  return j;
}

Outcome verify(const Options& o) {
  const GsSolution sol = solution_of(load(o));
  Outcome res;
  res.report["solution"] = json_io::to_json(sol);
  merge(res.report, verification(sol, o, res.passed));
  return res;
}

Outcome tilt(const Options& o) {
  const Json in = load(o);
  const GsSolution sol = solution_of(in);
  const Element u = element_of(in, sol, "u");
  const double t = in.contains("t") ? json_io::number(in, "t") : 1.0;
  const Element tu = tilt_T_scaled(sol, u, t);
  Outcome res;
  res.report = Json{{"u", json_io::to_json(u)},
                    {"t", t},
                    {"T", json_io::to_json(tu)},
                    {"lambda", json_io::to_json(lambda_scale(sol, u, t))},
                    {"N_T", json_io::to_json(adjustor_N(sol, tu))}};
  return res;
}

Outcome invert_tilt(const Options& o) {
  const Json in = load(o);
  const GsSolution sol = solution_of(in);
  const Element v = element_of(in, sol, "v");
  const Element u = tilt_inverse(sol, v);
  const double residual = norm(tilt_T(sol, u) - v);
  Outcome res;
  res.passed = residual <= o.tol;
  res.report = Json{{"v", json_io::to_json(v)}, {"u", json_io::to_json(u)}, {"residual", residual}, {"passed", res.passed}};
  return res;
}

Outcome solve_tilt(const Options& o) {
  const Json in = load(o);
  const GsSolution sol = solution_of(in);
  const Element v = element_of(in, sol, "v");
  Outcome res;
  res.report["v"] = json_io::to_json(v);
  merge(res.report, json_io::to_json(tilt_solve_fixed_point(sol, v, o.max_iter)));
  return res;
}

Outcome solve_st(const Options& o) {
  Outcome res;
  const auto roots = st_roots(o.n_roots);
  res.report = json_io::to_json(roots);
  res.passed = roots.size() == o.n_roots;
  return res;
}

Outcome xi(const Options&) {
  const double x = xi_root();
  const double residual = std::abs(std::exp(-x) - (x - 1.0));
  Outcome res;
  res.report = Json{{"xi", x}, {"residual", residual}};
  res.passed = residual < 1e-13;
  return res;
}

Outcome wj(const Options& o) {
  const Json in = load(o);
  const GsSolution sol = solution_of(in);
  const Json& lambdas = json_io::require(in, "lambdas");
  if (!lambdas.is_array() || lambdas.empty()) throw Error(ErrorCode::InvalidInput, "field 'lambdas': expected a non-empty array");
  std::vector<Element> samples;
  for (const auto& l : lambdas) samples.push_back(json_io::element_from_json(l, sol.algebra(), "lambdas"));

  const WjTriple triple = wj_extract(sol, samples);
  const WjDiagnostics diag = wj_diagnose(triple);
  Outcome res;
  Json kb = Json::array();
  for (const auto& b : triple.kernel_basis) kb.push_back(json_io::coords_json(b));
  Json preimages = Json::array();
  double roundtrip = 0.0;
  for (const auto& l : samples) {
    const Element w = triple.W(l);
    preimages.push_back(json_io::to_json(w));
    roundtrip = std::max(roundtrip, norm(eval_S(sol, w) - l));
  }
  res.passed = diag.ok() && roundtrip <= o.tol;
  res.report = Json{{"kernel_basis", std::move(kb)},
                    {"preimages", std::move(preimages)},
                    {"diagnostics", json_io::to_json(diag)},
                    {"max_roundtrip_defect", roundtrip},
                    {"passed", res.passed}};
  return res;
}

Outcome report(const Options& o) {
  const GsSolution sol = solution_of(load(o));
  Outcome res;
  Json& j = res.report;
  j["solution"] = json_io::to_json(sol);
  try {
    j["rho"] = json_io::to_json(rho_of(sol));
  } catch (const Error&) {
    j["rho"] = nullptr;
  }
  try {
    j["gamma_matrix"] = json_io::to_json(gamma_matrix(sol));
    const GuaranteeRadii r = guarantee_radii(sol);
    j["gamma_norm"] = r.gamma_norm;
    j["delta"] = r.delta;
    j["eta"] = r.eta;
    Json kb = Json::array();
    for (const auto& b : kernel_basis(sol)) kb.push_back(json_io::coords_json(b));
    j["kernel_basis"] = std::move(kb);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDifferentiable) throw;
    j["gamma_matrix"] = nullptr;
  }
  const Json c = classification_of(sol);
  if (!c.is_null()) j["classification"] = c;
  j["verification"] = verification(sol, o, res.passed);
  return res;
}

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::UnsupportedDimension:
    case ErrorCode::NotOrthogonalIdempotents:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Golab-Schinzel solutions over commutative Banach algebras", "popa"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--input", o.input, "JSON input file ('-' for stdin)");
  app.add_option("--output", o.output, "write the report here instead of stdout");
  app.add_option("--samples", o.samples, "sampled pairs for verification")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "sampling seed");
  app.add_option("--tol", o.tol, "pass/fail tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--box-radius", o.box_radius, "sampling box radius")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", o.max_iter, "fixed-point iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--n-roots", o.n_roots, "roots of e^w = 1 + w to report")->check(CLI::PositiveNumber);

  using Verb = Outcome (*)(const Options&);
  const std::vector<std::tuple<const char*, const char*, Verb>> verbs{
      {"classify", "validate a Sigma matrix or classify a solution", classify},
      {"verify", "sample the GS and Goldie identities", verify},
      {"tilt", "evaluate T_t(u), lambda_u(t) and N(T_t(u))", tilt},
      {"invert-tilt", "closed-form tilt inverse", invert_tilt},
      {"solve-tilt", "fixed-point tilt inverse", solve_tilt},
      {"solve-st", "roots of e^w = 1 + w with Re w > 0", solve_st},
      {"xi", "the root of e^{-x} = x - 1", xi},
      {"wj", "extract and check the Wolodzko-Javor triple", wj},
      {"report", "solution summary with verification", report},
  };
  Verb chosen = nullptr;
  for (const auto& [name, help, fn] : verbs) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&chosen, f = fn] { chosen = f; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "popa: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    const Outcome res = chosen(o);
    const std::string text = json_io::dump(res.report);
    if (o.output.empty()) {
      out << text;
    } else {
      std::ofstream f(o.output, std::ios::binary);
      if (!f) throw InputError("cannot write " + o.output);
      f << text;
    }
    return res.passed ? kExitOk : kExitFailed;
  } catch (const InputError& e) {
    err << "popa: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "popa: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInput : kExitFailed;
  } catch (const nlohmann::json::exception& e) {
    err << "popa: InvalidInput: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace popa::cli
