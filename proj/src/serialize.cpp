#include "expolat/serialize.hpp"

namespace expolat::json {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

void require(bool ok, const std::string& what) {
  if (!ok) fail(what);
}

const Json& field(const Json& j, const char* name) {
  require(j.is_object(), std::string("expected an object with field '") + name + "'");
  auto it = j.find(name);
  require(it != j.end(), std::string("missing field '") + name + "'");
  return *it;
}

std::int64_t integer(const Json& j, const char* what) {
  require(j.is_number_integer(), std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

std::string exact_part(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
  return std::to_string(j.get<std::int64_t>());
}

}  // namespace

Json to_json(const Scalar& s) {
  if (s.is_exact()) return Json::array({s.as_exact().re().get_str(), s.as_exact().im().get_str()});
  const Complex z = s.to_complex();
  return Json::array({z.real(), z.imag()});
}

Scalar scalar_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2, "scalar must be a pair [re, im]");
  auto exact_like = [](const Json& p) { return p.is_string() || p.is_number_integer(); };
  if (exact_like(j[0]) && exact_like(j[1])) return GaussianRational::parse(exact_part(j[0]), exact_part(j[1]));
  require(j[0].is_number() && j[1].is_number(), "scalar parts must be numbers or rational strings");
  return Scalar::floating(j[0].get<double>(), j[1].get<double>());
}

Json to_json(const LatticePoint& p) {
  Json j = Json::array();
  for (auto c : p.coords()) j.push_back(c);
  return j;
}

LatticePoint point_from_json(const Json& j) {
  require(j.is_array(), "lattice point must be an array of integers");
  std::vector<std::int64_t> c;
  for (const auto& e : j) c.push_back(integer(e, "lattice coordinate"));
  return LatticePoint(std::move(c));
}

std::vector<LatticePoint> points_from_json(const Json& j) {
  require(j.is_array(), "expected an array of lattice points");
  std::vector<LatticePoint> out;
  for (const auto& e : j) out.push_back(point_from_json(e));
  return out;
}

Json to_json(const MultiIndex& a) {
  Json j = Json::array();
  for (auto e : a.entries()) j.push_back(e);
  return j;
}

MultiIndex multi_index_from_json(const Json& j) {
  require(j.is_array(), "alpha must be an array");
  std::vector<std::uint32_t> e;
  for (const auto& x : j) {
    const auto v = integer(x, "alpha entry");
    require(v >= 0, "alpha entries must be nonnegative");
    e.push_back(static_cast<std::uint32_t>(v));
  }
  return MultiIndex(std::move(e));
}

Json to_json(const ExponentialWitness& w) {
  Json j = Json::array();
  for (const auto& l : w.lambda()) j.push_back(to_json(l));
  return j;
}

ExponentialWitness witness_from_json(const Json& j) {
  require(j.is_array(), "lambda must be an array of scalars");
  std::vector<Scalar> lam;
  for (const auto& e : j) lam.push_back(scalar_from_json(e));
  return ExponentialWitness(std::move(lam));
}

Json to_json(const ExpPoly& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json coeffs = Json::array();
    for (const auto& [alpha, c] : t.coeffs) coeffs.push_back(Json{{"alpha", to_json(alpha)}, {"c", to_json(c)}});
    terms.push_back(Json{{"lambda", to_json(t.witness)}, {"coeffs", std::move(coeffs)}});
  }
  return Json{{"dim", f.dim()}, {"terms", std::move(terms)}};
}

ExpPoly exppoly_from_json(const Json& j) {
  const auto dim = integer(field(j, "dim"), "dim");
  require(dim >= 1, "dim must be positive");
  const Json& terms = field(j, "terms");
  require(terms.is_array(), "terms must be an array");
  std::vector<ExpTerm> out;
  for (const auto& t : terms) {
    ExpTerm term{witness_from_json(field(t, "lambda")), {}};
    const Json& coeffs = field(t, "coeffs");
    require(coeffs.is_array(), "coeffs must be an array");
    for (const auto& c : coeffs) {
      MultiIndex alpha = multi_index_from_json(field(c, "alpha"));
      Scalar value = scalar_from_json(field(c, "c"));
      auto [it, inserted] = term.coeffs.emplace(alpha, value);
      if (!inserted) it->second += value;
    }
    out.push_back(std::move(term));
  }
  return ExpPoly(static_cast<std::size_t>(dim), std::move(out));
}

Json to_json(const PhiTable& t) {
  Json j = Json::array();
  for (const auto& [y, v] : t) j.push_back(Json{{"y", to_json(y)}, {"value", to_json(v)}});
  return j;
}

PhiTable phi_table_from_json(const Json& j) {
  require(j.is_array(), "phi must be an array of {y, value}");
  PhiTable t;
  for (const auto& e : j) t[point_from_json(field(e, "y"))] = scalar_from_json(field(e, "value"));
  return t;
}

Json to_json(const DiffProduct& p) {
  Json factors = Json::array();
  for (const auto& f : p.factors) {
    Json e = Json::object();
    if (const auto* w = std::get_if<ExponentialWitness>(&f.phi)) {
      e["lambda"] = to_json(*w);
    } else {
      e["phi"] = to_json(std::get<PhiTable>(f.phi));
    }
    e["shift"] = to_json(f.shift);
    e["power"] = f.power;
    factors.push_back(std::move(e));
  }
  return Json{{"factors", std::move(factors)}};
}

DiffProduct product_from_json(const Json& j) {
  const Json& factors = field(j, "factors");
  require(factors.is_array(), "factors must be an array");
  DiffProduct p;
  for (const auto& f : factors) {
    OpFactor op;
    if (f.contains("lambda")) {
      op.phi = witness_from_json(f.at("lambda"));
    } else {
      op.phi = phi_table_from_json(field(f, "phi"));
    }
    op.shift = point_from_json(field(f, "shift"));
    const auto power = integer(field(f, "power"), "power");
    require(power >= 0, "power must be nonnegative");
    op.power = static_cast<unsigned>(power);
    p.factors.push_back(std::move(op));
  }
  return p;
}

Json to_json(const SampledFunction& s) {
  Json values = Json::array();
  for (const auto& v : s.values()) values.push_back(to_json(v));
  return Json{{"dim", s.dim()}, {"lo", to_json(s.box().lo())}, {"hi", to_json(s.box().hi())}, {"values", values}};
}

SampledFunction sampled_from_json(const Json& j) {
  const auto dim = integer(field(j, "dim"), "dim");
  LatticePoint lo = point_from_json(field(j, "lo"));
  LatticePoint hi = point_from_json(field(j, "hi"));
  if (lo.dim() != static_cast<std::size_t>(dim) || hi.dim() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorCode::dimension_mismatch, "lo/hi dimension differs from dim");
  }
  const Json& values = field(j, "values");
  require(values.is_array(), "values must be an array");
  std::vector<Scalar> v;
  v.reserve(values.size());
  for (const auto& e : values) v.push_back(scalar_from_json(e));
  return SampledFunction(Box(lo, hi), std::move(v));
}

Json to_json(const SpanSpace& v) {
  Json basis = Json::array();
  for (const auto& b : v.basis()) basis.push_back(to_json(b));
  return Json{{"dim", v.dimension()}, {"basis", std::move(basis)}};
}

SpanSpace span_from_json(const Json& j) {
  const Json& basis = field(j, "basis");
  require(basis.is_array(), "basis must be an array");
  std::vector<ExpPoly> gens;
  for (const auto& b : basis) gens.push_back(exppoly_from_json(b));
  const std::size_t dim = gens.empty() ? static_cast<std::size_t>(integer(field(j, "ambient_dim"), "ambient_dim"))
                                       : gens.front().dim();
  return SpanSpace::span(dim, gens);
}

Json to_json(const OperatorMatrix& m, const GradedLexBasis& basis) {
  Json monomials = Json::array();
  for (const auto& a : basis.monomials) monomials.push_back(to_json(a));
  Json rows = Json::array();
  for (const auto& row : m.entries) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(to_json(e));
    rows.push_back(std::move(r));
  }
  return Json{{"lambda", to_json(basis.witness)},
              {"order", "graded-lex"},
              {"monomials", std::move(monomials)},
              {"layout", "row-major; column j = image of basis element j"},
              {"entries", std::move(rows)},
              {"upper_triangular", m.is_upper_triangular()}};
}

Json to_json(const MontelCertificate& c) {
  Json shifts = Json::array();
  for (const auto& s : c.shifts) shifts.push_back(to_json(s));
  Json phis = Json::array();
  for (const auto& p : c.phi_values) phis.push_back(to_json(p));
  Json j{{"verdict", c.verdict == Verdict::annihilated ? "annihilated" : "violated"},
         {"shifts", std::move(shifts)},
         {"orders", c.orders},
         {"phi", std::move(phis)},
         {"generates_lattice", c.generates_lattice},
         {"subgroup_only", c.subgroup_only()}};
  if (c.violation) {
    j["violation"] = Json{{"point", to_json(c.violation->point)},
                          {"shift_index", c.violation->shift_index},
                          {"value", to_json(c.violation->value)}};
  } else {
    j["violation"] = nullptr;
  }
  return j;
}

Json to_json(const std::vector<std::optional<unsigned>>& orders) {
  Json j = Json::array();
  for (const auto& o : orders) {
    if (o) {
      j.push_back(*o);
    } else {
      j.push_back(nullptr);
    }
  }
  return Json{{"orders", std::move(j)}};
}

Json to_json(const Root& r) { return Json{{"value", to_json(Scalar(r.value))}, {"multiplicity", r.multiplicity}}; }

Json to_json(const WitnessCandidates& w) {
  Json per_shift = Json::array();
  for (const auto& roots : w.per_shift) {
    Json r = Json::array();
    for (const auto& root : roots) r.push_back(to_json(root));
    per_shift.push_back(std::move(r));
  }
  Json assignments = Json::array();
  for (const auto& a : w.assignments) {
    Json r = Json::array();
    for (const auto& v : a) r.push_back(to_json(v));
    assignments.push_back(std::move(r));
  }
  return Json{{"all", w.all}, {"per_shift", std::move(per_shift)}, {"assignments", std::move(assignments)}};
}

Json to_json(const MinimalityReport& r) {
  Json nr = Json::array();
  for (bool b : r.non_redundant) nr.push_back(b);
  return Json{{"non_redundant", std::move(nr)}, {"equation_holds", r.equation_holds}, {"minimal", r.minimal}};
}

Json to_json(const ExtendResult& r) {
  return Json{{"space", to_json(r.space)}, {"precondition_met", r.precondition_met}, {"invariant", r.invariant}};
}

Json to_json(const ChainResult& r) {
  Json steps = Json::array();
  for (bool b : r.step_precondition) steps.push_back(b);
  return Json{{"space", to_json(r.space)},
              {"step_precondition", std::move(steps)},
              {"precondition_unmet", r.precondition_unmet},
              {"invariant_under_all", r.invariant_under_all}};
}

Json to_json(const Decomposition& d) {
  Json spectra = Json::array();
  for (const auto& s : d.spectra) {
    Json roots = Json::array();
    for (const auto& r : s.roots) roots.push_back(to_json(r));
    spectra.push_back(Json{{"axis", s.axis}, {"roots", std::move(roots)}});
  }
  Json j{{"success", d.success},
         {"result", to_json(d.result)},
         {"spectra", std::move(spectra)},
         {"residual", d.residual},
         {"abs_residual", d.abs_residual},
         {"flags", d.flags}};
  if (d.exact_result) j["exact_result"] = to_json(*d.exact_result);
  return j;
}

Json to_json(const oracle::FrechetResult& r) {
  return Json{{"dim1", r.dim1},
              {"dim2", r.dim2},
              {"equal", r.equal},
              {"sampled", r.sampled},
              {"exact_checked", r.exact_checked}};
}

Json error_json(ErrorCode code, const std::string& detail) {
  return Json{{"error", std::string(to_string(code))}, {"detail", detail}};
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
}

}  // namespace expolat::json
