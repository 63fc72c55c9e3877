#include "cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "expolat/acceptance.hpp"
#include "expolat/montel.hpp"
#include "expolat/oracle.hpp"
#include "expolat/recover.hpp"
#include "expolat/serialize.hpp"
#include "expolat/subspace.hpp"

namespace expolat::cli {

namespace {

using json::Json;

struct Options {
  std::string f;
  std::string samples;
  std::string shifts;
  std::string powers;
  std::string phi;
  std::string group;
  std::string at;
  std::string lambda;
  std::string product;
  std::string space;
  std::string ops;
  unsigned n = 1;
  unsigned degree = 0;
  RecoveryConfig recovery;
  bool exact = false;
  bool floating = false;
  std::uint64_t seed = 0;
};

// A value starting with '{' or '[' is inline JSON, anything else a file path.
Json load(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::invalid_argument, std::string("missing ") + flag);
  const auto start = value.find_first_not_of(" \t\n");
  if (start != std::string::npos && (value[start] == '{' || value[start] == '[')) return json::parse(value);
  std::ifstream in(value);
  if (!in) throw Error(ErrorCode::parse_error, std::string("cannot read ") + flag + " file '" + value + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

std::vector<Scalar> scalars(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::parse_error, "expected an array of [re, im] pairs");
  std::vector<Scalar> out;
  for (const auto& e : j) out.push_back(json::scalar_from_json(e));
  return out;
}

std::vector<unsigned> unsigned_list(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::parse_error, "expected an array of nonnegative integers");
  std::vector<unsigned> out;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<std::int64_t>() < 0) {
      throw Error(ErrorCode::parse_error, "expected nonnegative integers");
    }
    out.push_back(e.get<unsigned>());
  }
  return out;
}

void check_backend(bool exact_input, const Options& o) {
  if (o.exact && !exact_input) throw Error(ErrorCode::invalid_argument, "--exact given but the input has float values");
}

ExpPoly load_f(const Options& o) {
  ExpPoly f = json::exppoly_from_json(load(o.f, "--f"));
  check_backend(f.is_exact(), o);
  return o.floating ? f.to_float() : f;
}

SampledFunction load_samples(const Options& o) {
  SampledFunction s = json::sampled_from_json(load(o.samples, "--samples"));
  check_backend(std::all_of(s.values().begin(), s.values().end(), [](const Scalar& v) { return v.is_exact(); }), o);
  return o.floating ? s.to_float() : s;
}

void require_one_input(const Options& o) {
  if (o.f.empty() == o.samples.empty()) throw Error(ErrorCode::invalid_argument, "give exactly one of --f, --samples");
}

// --shifts / --powers / --phi as parallel lists, one phi value per shift.
struct ShiftData {
  std::vector<LatticePoint> shifts;
  std::vector<unsigned> powers;
  std::vector<Scalar> phi;
};

ShiftData shift_data(const Options& o, bool need_powers) {
  ShiftData d;
  d.shifts = json::points_from_json(load(o.shifts, "--shifts"));
  if (need_powers) d.powers = unsigned_list(load(o.powers, "--powers"));
  if (!o.phi.empty()) d.phi = scalars(load(o.phi, "--phi"));
  if (need_powers && d.powers.size() != d.shifts.size()) {
    throw Error(ErrorCode::invalid_argument, "--powers needs one entry per shift");
  }
  return d;
}

DiffProduct product_from_flags(const Options& o) {
  if (!o.product.empty()) return json::product_from_json(load(o.product, "--product"));
  const ShiftData d = shift_data(o, true);
  if (d.phi.size() != d.shifts.size()) throw Error(ErrorCode::invalid_argument, "--phi needs one value per shift");
  DiffProduct p;
  for (std::size_t k = 0; k < d.shifts.size(); ++k) {
    p.factors.push_back(OpFactor{PhiTable{{d.shifts[k], d.phi[k]}}, d.shifts[k], d.powers[k]});
  }
  return p;
}

int cmd_eval(const Options& o, Json& out) {
  const ExpPoly f = load_f(o);
  Json values = Json::array();
  for (const auto& x : json::points_from_json(load(o.at, "--at"))) {
    values.push_back(Json{{"point", json::to_json(x)}, {"value", json::to_json(f.eval(x))}});
  }
  out = Json{{"values", std::move(values)}};
  return 0;
}

int cmd_apply(const Options& o, Json& out) {
  require_one_input(o);
  const DiffProduct p = product_from_flags(o);
  if (!o.samples.empty()) {
    out = json::to_json(apply_sampled(load_samples(o), p));
    return 0;
  }
  ExpPoly f = load_f(o);
  const bool witnesses = std::all_of(p.factors.begin(), p.factors.end(), [](const OpFactor& k) { return k.is_witness(); });
  if (witnesses) {
    f = apply_product(f, p);
  } else {
    // A tabulated phi enters each factor only through phi(shift).
    for (const auto& k : p.factors) f = apply_difference(f, k.phi_at_shift(), k.shift, k.power);
  }
  out = json::to_json(f);
  return 0;
}

int cmd_verify(const Options& o, Json& out) {
  require_one_input(o);
  const ShiftData d = shift_data(o, true);
  const MontelCertificate c = o.samples.empty() ? verify_annihilation(load_f(o), d.shifts, d.powers, d.phi)
                                                : verify_annihilation(load_samples(o), d.shifts, d.powers, d.phi);
  out = json::to_json(c);
  return c.verdict == Verdict::annihilated ? 0 : 1;
}

int cmd_orders(const Options& o, Json& out) {
  require_one_input(o);
  const ShiftData d = shift_data(o, false);
  const unsigned max_power = o.recovery.max_order;
  out = json::to_json(o.samples.empty() ? minimal_orders(load_f(o), d.shifts, d.phi, max_power)
                                        : minimal_orders(load_samples(o), d.shifts, d.phi, max_power));
  return 0;
}

int cmd_witness(const Options& o, Json& out) {
  MontelConfig cfg;
  cfg.rank_tol = o.recovery.rank_tol;
  cfg.cluster_tol = o.recovery.cluster_tol;
  const ShiftData d = shift_data(o, false);
  out = json::to_json(certify_witness(load_samples(o), d.shifts, o.recovery.max_order, cfg));
  return 0;
}

int cmd_decompose(const Options& o, Json& out) {
  RecoveryConfig cfg = o.recovery;
  cfg.exact_lift = o.exact;
  Options plain = o;
  plain.exact = false;
  const Decomposition d = recover(load_samples(plain), cfg);
  out = json::to_json(d);
  return d.success ? 0 : 1;
}

int cmd_closure(const Options& o, Json& out) {
  const SpanSpace v = json::span_from_json(load(o.space, "--space"));
  const DiffProduct ops = json::product_from_json(load(o.ops, "--ops"));
  for (const auto& k : ops.factors) {
    if (!k.is_witness()) throw Error(ErrorCode::invalid_argument, "closure operators need an exponential lambda");
  }
  const std::vector<unsigned> powers = unsigned_list(load(o.powers, "--powers"));
  out = json::to_json(closure_chain(v, ops.factors, powers));
  return 0;
}

int cmd_matrix(const Options& o, Json& out) {
  const ExponentialWitness w = json::witness_from_json(load(o.lambda, "--lambda"));
  const ShiftData d = shift_data(o, false);
  if (d.shifts.size() != 1 || d.phi.size() != 1) {
    throw Error(ErrorCode::invalid_argument, "matrix needs exactly one shift and one phi value");
  }
  const GradedLexBasis basis(w, o.degree);
  out = json::to_json(operator_matrix(basis, d.phi[0], d.shifts[0]), basis);
  return 0;
}

int cmd_frechet(const Options& o, Json& out) {
  oracle::FiniteGroupSpec g;
  std::stringstream in(o.group);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      g.moduli.push_back(std::stoll(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::parse_error, "--group expects comma-separated moduli");
    }
  }
  oracle::FrechetOptions opts;
  opts.seed = o.seed;
  const auto r = oracle::frechet_nullspaces(g, o.n, opts);
  out = json::to_json(r);
  return r.equal ? 0 : 1;
}

int cmd_selftest(Json& out) {
  Json criteria = Json::array();
  bool all = true;
  for (const auto& r : acceptance::run_all()) {
    all = all && r.passed;
    criteria.push_back(Json{{"id", r.id},
                            {"name", r.name},
                            {"passed", r.passed},
                            {"detail", r.detail},
                            {"seconds", r.seconds},
                            {"budget_seconds", r.budget_seconds}});
  }
  out = Json{{"passed", all}, {"criteria", std::move(criteria)}};
  return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Exponential polynomials on Z^d: difference operators, certificates, recovery", "expolat"};
  app.require_subcommand(1);
  Options o;

  auto input = [&](CLI::App* c, bool symbolic = true) {
    if (symbolic) c->add_option("--f", o.f, "ExpPoly JSON (file or inline)");
    c->add_option("--samples", o.samples, "SampledFunction JSON (file or inline)");
    auto* ex = c->add_flag("--exact", o.exact, "require exact input");
    auto* fl = c->add_flag("--float", o.floating, "convert input to the float backend");
    ex->excludes(fl);
  };
  auto shifts = [&](CLI::App* c, bool powers) {
    c->add_option("--shifts", o.shifts, "JSON list of shifts, e.g. [[1],[2]]");
    c->add_option("--phi", o.phi, "JSON list of phi(shift) values, e.g. [[2,0]]");
    if (powers) c->add_option("--powers", o.powers, "JSON list of powers, one per shift");
  };
  auto tolerances = [&](CLI::App* c) {
    c->add_option("--max-order", o.recovery.max_order, "largest annihilator degree / power searched");
    c->add_option("--rank-tol", o.recovery.rank_tol);
    c->add_option("--cluster-tol", o.recovery.cluster_tol);
    c->add_option("--residual-tol", o.recovery.residual_tol);
  };

  auto* eval = app.add_subcommand("eval", "evaluate an ExpPoly at points");
  input(eval);
  eval->add_option("--at", o.at, "JSON list of points");

  auto* apply = app.add_subcommand("apply", "apply a product of modified difference operators");
  input(apply);
  shifts(apply, true);
  apply->add_option("--product", o.product, "DiffProduct JSON (instead of --shifts/--powers/--phi)");

  auto* verify = app.add_subcommand("verify", "check annihilation by the given operator powers");
  input(verify);
  shifts(verify, true);

  auto* orders = app.add_subcommand("orders", "least annihilating power per shift");
  input(orders);
  shifts(orders, false);
  orders->add_option("--max-order", o.recovery.max_order, "largest power tried");

  auto* witness = app.add_subcommand("witness", "candidate phi values from sampled data");
  input(witness, false);
  shifts(witness, false);
  tolerances(witness);

  auto* decompose = app.add_subcommand("decompose", "recover an exponential polynomial from samples");
  input(decompose, false);
  tolerances(decompose);

  auto* closure = app.add_subcommand("closure", "closure chain of a span under commuting operators");
  closure->add_option("--space", o.space, "SpanSpace JSON");
  closure->add_option("--ops", o.ops, "DiffProduct JSON listing the operators");
  closure->add_option("--powers", o.powers, "JSON list of powers s_i");

  auto* matrix = app.add_subcommand("matrix", "graded-lex matrix of a modified difference operator");
  matrix->add_option("--lambda", o.lambda, "witness, e.g. [[2,0]]");
  matrix->add_option("--degree", o.degree, "degree bound of the basis");
  shifts(matrix, false);

  auto* frechet = app.add_subcommand("frechet", "compare the two Frechet equations on a finite group");
  frechet->add_option("--group", o.group, "moduli, e.g. 4 or 2,2")->required();
  frechet->add_option("--n", o.n, "order n");
  frechet->add_option("--seed", o.seed, "seed for sampled tuple enumeration");

  auto* selftest = app.add_subcommand("selftest", "run the acceptance property suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    out << Json{{"error", "usage"}, {"detail", e.what()}}.dump(2) << '\n';
    return 2;
  }

  Json result;
  int code = 0;
  try {
    o.recovery.validate();
    if (eval->parsed()) code = cmd_eval(o, result);
    if (apply->parsed()) code = cmd_apply(o, result);
    if (verify->parsed()) code = cmd_verify(o, result);
    if (orders->parsed()) code = cmd_orders(o, result);
    if (witness->parsed()) code = cmd_witness(o, result);
    if (decompose->parsed()) code = cmd_decompose(o, result);
    if (closure->parsed()) code = cmd_closure(o, result);
    if (matrix->parsed()) code = cmd_matrix(o, result);
    if (frechet->parsed()) code = cmd_frechet(o, result);
    if (selftest->parsed()) code = cmd_selftest(result);
  } catch (const Error& e) {
    result = json::error_json(e.code(), e.what());
    code = 2;
  } catch (const nlohmann::json::exception& e) {
    result = json::error_json(ErrorCode::parse_error, e.what());
    code = 2;
  }
  out << result.dump(2) << '\n';
  return code;
}

}  // namespace expolat::cli
