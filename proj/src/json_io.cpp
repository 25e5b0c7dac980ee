#include "popa/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace popa::json_io {

namespace {

[[noreturn]] void bad(std::string_view field, std::string_view what) {
  throw Error(ErrorCode::InvalidInput, "field '" + std::string(field) + "': " + std::string(what));
}

std::vector<double> numbers(const Json& j, std::string_view field) {
  if (!j.is_array()) bad(field, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) bad(field, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t index_1based(const Json& v, std::string_view field) {
  if (!v.is_number_integer() || v.get<long long>() < 1) bad(field, "indices are integers >= 1");
  return static_cast<std::size_t>(v.get<long long>() - 1);
}

std::vector<std::vector<std::size_t>> parts_from_json(const Json& j, std::string_view field) {
  if (!j.is_array()) bad(field, "expected an array of index lists");
  std::vector<std::vector<std::size_t>> parts;
  for (const auto& part : j) {
    if (!part.is_array() || part.empty()) bad(field, "expected non-empty index lists");
    std::vector<std::size_t> p;
    for (const auto& v : part) p.push_back(index_1based(v, field));
    parts.push_back(std::move(p));
  }
  return parts;
}

Json parts_to_json(const std::vector<std::vector<std::size_t>>& parts) {
  Json out = Json::array();
  for (const auto& part : parts) {
    Json p = Json::array();
    for (std::size_t i : part) p.push_back(i + 1);
    out.push_back(std::move(p));
  }
  return out;
}

Json numbers_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

std::string_view form_name(DegenerateForm f) {
  switch (f) {
    case DegenerateForm::OneExp: return "OneExp";
    case DegenerateForm::AffinePower: return "AffinePower";
    case DegenerateForm::PurePower: return "PurePower";
  }
  return "Unknown";
}

DegenerateForm form_from(const Json& j) {
  if (!j.is_string()) bad("form", "expected a string");
  const auto s = j.get<std::string>();
  if (s == "OneExp") return DegenerateForm::OneExp;
  if (s == "AffinePower") return DegenerateForm::AffinePower;
  if (s == "PurePower") return DegenerateForm::PurePower;
  bad("form", "expected OneExp, AffinePower or PurePower");
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  const std::string inner(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(k).dump() + ": ";
        write(out, v, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Flat numeric arrays stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && v.is_primitive();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i > 0) out += ", ";
          write(out, j[i], depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        out += inner;
        write(out, j[i], depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

const Json& require(const Json& j, std::string_view name) {
  if (!j.is_object()) bad(name, "expected an object holding this field");
  const auto it = j.find(std::string(name));
  if (it == j.end()) bad(name, "missing");
  return *it;
}

double number(const Json& j, std::string_view name) {
  const Json& v = require(j, name);
  if (!v.is_number()) bad(name, "expected a number");
  return v.get<double>();
}

Json to_json(const Algebra& a) {
  switch (a.kind()) {
    case AlgebraKind::HadamardRd: return Json{{"kind", "Hadamard"}, {"dim", a.dim()}};
    case AlgebraKind::ComplexAsR2: return Json{{"kind", "Complex"}};
    case AlgebraKind::GridCInterval: return Json{{"kind", "GridCInterval"}, {"grid", numbers_json(a.abscissae())}};
  }
  return Json();
}

Algebra algebra_from_json(const Json& j) {
  const Json& kind = require(j, "kind");
  if (!kind.is_string()) bad("kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "Hadamard") {
    const Json& d = require(j, "dim");
    if (!d.is_number_integer() || d.get<long long>() < 1) bad("dim", "expected an integer >= 1");
    return Algebra::hadamard(static_cast<std::size_t>(d.get<long long>()));
  }
  if (k == "Complex") return Algebra::complex_plane();
  if (k == "GridCInterval") return Algebra::grid(numbers(require(j, "grid"), "grid"));
  bad("kind", "expected Hadamard, Complex or GridCInterval");
}

Json to_json(const Element& e) {
  return Json{{"algebra", to_json(e.algebra())}, {"coords", numbers_json(e.coords())}};
}

Json coords_json(const Element& e) { return numbers_json(e.coords()); }

Element element_from_json(const Json& j, const Algebra& algebra, std::string_view field) {
  if (j.is_object()) {
    const Algebra own = algebra_from_json(require(j, "algebra"));
    if (!(own == algebra)) bad(field, "element lives in a different algebra");
    return element_from_json(require(j, "coords"), algebra, field);
  }
  auto coords = numbers(j, field);
  if (coords.size() != algebra.dim()) bad(field, "expected " + std::to_string(algebra.dim()) + " coordinates");
  return Element(algebra, std::move(coords));
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const Json& j, std::string_view field) {
  if (!j.is_array() || j.empty()) bad(field, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = numbers(j[static_cast<std::size_t>(r)], field);
    if (r == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != m.cols() || row.empty()) bad(field, "rows must have equal length");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

Json to_json(const GsSolution& sol) {
  Json j;
  j["variant"] = std::string(sol.name());
  j["algebra"] = to_json(sol.algebra());
  if (const auto* c = sol.get_if<variant::Canonical>()) {
    j["rho"] = coords_json(c->rho);
  } else if (const auto* p = sol.get_if<variant::Partition>()) {
    j["parts"] = parts_to_json(p->spec.parts);
    j["rho"] = numbers_json(p->spec.rho);
  } else if (const auto* s = sol.get_if<variant::SigmaAffine>()) {
    j["sigma"] = to_json(s->sigma);
  } else if (const auto* d = sol.get_if<variant::DegenerateExp>()) {
    j["form"] = std::string(form_name(d->form));
    j["rho"] = d->rho;
    j["gamma"] = d->gamma_exp;
    j["axis"] = d->axis + 1;
    if (!d->functional.empty()) j["functional"] = numbers_json(d->functional);
  } else if (const auto* z = sol.get_if<variant::ComplexReIm>()) {
    j["a"] = z->a;
    j["b"] = z->b;
  } else if (const auto* ib = sol.get_if<variant::IdempotentBuilt>()) {
    Json ids = Json::array();
    for (const auto& e : ib->idempotents) ids.push_back(coords_json(e));
    j["idempotents"] = std::move(ids);
    j["sigma"] = numbers_json(ib->sigma);
  }
  return j;
}

GsSolution solution_from_json(const Json& j) {
  const Json& v = require(j, "variant");
  if (!v.is_string()) bad("variant", "expected a string");
  const auto name = v.get<std::string>();
  const bool has_algebra = j.contains("algebra");
  auto algebra_or = [&](std::size_t d) { return has_algebra ? algebra_from_json(j["algebra"]) : Algebra::hadamard(d); };

  if (name == "Canonical") {
    const Json& rho = require(j, "rho");
    if (!rho.is_array() || rho.empty()) bad("rho", "expected an array of numbers");
    return GsSolution::canonical(element_from_json(rho, algebra_or(rho.size()), "rho"));
  }
  if (name == "Partition") {
    auto rho = numbers(require(j, "rho"), "rho");
    auto parts = parts_from_json(require(j, "parts"), "parts");
    const Algebra alg = algebra_or(rho.size());
    PartitionSpec spec{std::move(parts), std::move(rho)};
    try {
      spec.validate(alg.dim());
    } catch (const Error& e) {
      bad("parts", e.what());
    }
    return GsSolution::partition(alg, std::move(spec));
  }
  if (name == "SigmaAffine") {
    Matrix sigma = matrix_from_json(require(j, "sigma"), "sigma");
    if (sigma.rows() != sigma.cols()) bad("sigma", "expected a square matrix");
    const Algebra alg = algebra_or(static_cast<std::size_t>(sigma.rows()));
    return GsSolution::sigma_affine(alg, std::move(sigma));
  }
  if (name == "DegenerateExp") {
    variant::DegenerateExp p;
    p.form = j.contains("form") ? form_from(j["form"]) : DegenerateForm::OneExp;
    p.rho = j.contains("rho") ? number(j, "rho") : 0.0;
    p.gamma_exp = number(j, "gamma");
    p.axis = j.contains("axis") ? index_1based(j["axis"], "axis") : 0;
    if (j.contains("functional")) p.functional = numbers(j["functional"], "functional");
    std::size_t dim = p.functional.empty() ? 2 : p.functional.size();
    if (has_algebra) dim = algebra_from_json(j["algebra"]).dim();
    return GsSolution::degenerate_exp(std::move(p), dim);
  }
  if (name == "ComplexReIm") return GsSolution::complex_re_im(number(j, "a"), number(j, "b"));
  if (name == "IdempotentBuilt") {
    auto sigma = numbers(require(j, "sigma"), "sigma");
    const Algebra alg = algebra_or(sigma.size());
    const Json& ids = require(j, "idempotents");
    if (!ids.is_array()) bad("idempotents", "expected an array of elements");
    std::vector<Element> es;
    for (const auto& e : ids) es.push_back(element_from_json(e, alg, "idempotents"));
    return GsSolution::idempotent_built(alg, std::move(es), std::move(sigma));
  }
  bad("variant", "unknown variant '" + name + "'");
}

Json to_json(const PartitionSpec& p) {
  return Json{{"parts", parts_to_json(p.parts)}, {"rho", numbers_json(p.rho)}};
}

Json to_json(const StructureReport& r) {
  Json j;
  j["valid"] = r.valid;
  if (r.partition) j["partition"] = parts_to_json(r.partition->parts);
  if (r.partition) j["rho"] = numbers_json(r.partition->rho);
  j["kernel_dim"] = r.kernel_dim;
  Json basis = Json::array();
  for (const auto& b : r.kernel_basis) basis.push_back(coords_json(b));
  j["kernel_basis"] = std::move(basis);
  Json factors = Json::array();
  for (const auto& f : r.factors) {
    Json idx = Json::array();
    for (std::size_t i : f.part) idx.push_back(i + 1);
    factors.push_back(Json{{"part", std::move(idx)}, {"generator", numbers_json(f.generator)}});
  }
  j["factors"] = std::move(factors);
  j["max_factor_defect"] = r.max_factor_defect;
  return j;
}

Json to_json(const TwoDClassification& c) {
  Json j;
  j["class"] = std::string(to_string(c.cls));
  Json params = Json::object();
  for (const auto& [k, v] : c.params) {
    if (k == "form") {
      params[k] = std::string(form_name(static_cast<DegenerateForm>(static_cast<int>(v))));
    } else if (k == "axis") {
      params[k] = static_cast<long long>(v);
    } else {
      params[k] = v;
    }
  }
  j["params"] = std::move(params);
  return j;
}

Json to_json(const GoldieResidualReport& r) {
  Json j;
  j["max_gs_residual"] = r.max_gs_residual;
  j["max_goldie_residual"] = r.max_goldie_residual;
  j["samples_tested"] = r.samples_tested;
  j["samples_rejected"] = r.samples_rejected;
  j["worst_pair"] = Json::array({to_json(r.worst_pair.first), to_json(r.worst_pair.second)});
  return j;
}

Json to_json(const TiltResult& r) {
  Json j;
  j["u"] = to_json(r.u);
  j["iterations"] = r.iterations;
  j["final_residual"] = r.final_residual;
  j["guaranteed"] = r.guaranteed;
  j["eta"] = r.eta;
  j["max_contraction"] = r.max_contraction;
  return j;
}

Json to_json(const StSolution& s) {
  return Json{{"x", s.x}, {"y", s.y}, {"branch", s.branch}, {"residual", s.residual}};
}

Json to_json(const std::vector<StSolution>& roots) {
  Json out = Json::array();
  for (const auto& r : roots) out.push_back(to_json(r));
  return out;
}

Json to_json(const WjDiagnostics& d) {
  return Json{{"invariant_kernel", d.invariant_kernel},
              {"kernel_iff_unit", d.kernel_iff_unit},
              {"cocycle", d.cocycle},
              {"max_cocycle_defect", d.max_cocycle_defect}};
}

}  // namespace popa::json_io
