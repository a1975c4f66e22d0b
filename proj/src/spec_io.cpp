#include "gsf/spec_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gsf/error.hpp"

namespace gsf::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

void only_keys(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw SpecError(join(where, it.key()), "unknown field");
  }
}

double get_number(const nlohmann::json& obj, const std::string& key, const std::string& where,
                  std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key) || obj[key].is_null()) {
    if (fallback) return *fallback;
    throw SpecError(join(where, key), "required number is missing");
  }
  if (!obj[key].is_number()) throw SpecError(join(where, key), "must be a number");
  const double v = obj[key].get<double>();
  if (!std::isfinite(v)) throw SpecError(join(where, key), "must be finite");
  return v;
}

int get_int(const nlohmann::json& obj, const std::string& key, const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw SpecError(join(where, key), "must be an integer");
  return obj[key].get<int>();
}

std::vector<double> get_coeffs(const nlohmann::json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_array()) throw SpecError(join(where, key), "must be an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < obj[key].size(); ++i) {
    if (!obj[key][i].is_number()) throw SpecError(join(where, key) + "[" + std::to_string(i) + "]", "must be a number");
    out.push_back(obj[key][i].get<double>());
  }
  return out;
}

double interval_end(const nlohmann::json& v, const std::string& where) {
  if (v.is_null()) return kInf;
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    throw SpecError(where, "interval end must be a number, \"inf\" or null");
  }
  if (!v.is_number()) throw SpecError(where, "interval end must be a number, \"inf\" or null");
  return v.get<double>();
}

Json end_json(double v) { return std::isinf(v) ? Json("inf") : number(v); }

struct ParsedPiece {
  DensityPiece piece;
  Json normalized;
};

ParsedPiece parse_piece(const nlohmann::json& d, const std::string& where) {
  if (!d.is_object()) throw SpecError(where, "density entry must be an object");
  only_keys(d, {"interval", "family", "params", "max_order"}, where);
  double a = 0.0, b = kInf;
  if (d.contains("interval")) {
    const auto& iv = d["interval"];
    if (!iv.is_array() || iv.size() != 2) throw SpecError(join(where, "interval"), "must be [a, b]");
    if (!iv[0].is_number()) throw SpecError(join(where, "interval") + "[0]", "must be a number");
    a = iv[0].get<double>();
    b = interval_end(iv[1], join(where, "interval") + "[1]");
  }
  if (!(a >= 0.0) || !(b > a)) throw SpecError(join(where, "interval"), "must satisfy 0 <= a < b");
  if (!d.contains("family") || !d["family"].is_string()) {
    throw SpecError(join(where, "family"), "must be one of exp, powerlaw, rational, expr");
  }
  const std::string family = d["family"].get<std::string>();
  const nlohmann::json params = d.contains("params") ? d["params"] : nlohmann::json::object();
  if (!params.is_object()) throw SpecError(join(where, "params"), "must be an object");
  const std::string pw = join(where, "params");
  Json np = Json::object();
  const int default_order = family == "expr" ? 4 : SmoothDensity::kClosedFormOrder;
  const int J = get_int(d, "max_order", where, default_order);
  if (J < 0) throw SpecError(join(where, "max_order"), "must be non-negative");
  std::optional<SmoothDensity> dens;
  try {
    if (family == "exp") {
      only_keys(params, {"A", "p", "b"}, pw);
      const double A = get_number(params, "A", pw, 1.0), p = get_number(params, "p", pw, 0.0),
                   bb = get_number(params, "b", pw, 1.0);
      np["A"] = number(A);
      np["p"] = number(p);
      np["b"] = number(bb);
      dens = SmoothDensity::exponential(A, p, bb, J);
    } else if (family == "powerlaw") {
      only_keys(params, {"A", "p"}, pw);
      const double A = get_number(params, "A", pw, 1.0), p = get_number(params, "p", pw, 0.0);
      np["A"] = number(A);
      np["p"] = number(p);
      dens = SmoothDensity::power_law(A, p, J);
    } else if (family == "rational") {
      only_keys(params, {"num", "den"}, pw);
      auto num = get_coeffs(params, "num", pw);
      auto den = get_coeffs(params, "den", pw);
      np["num"] = Json::array();
      for (double v : num) np["num"].push_back(number(v));
      np["den"] = Json::array();
      for (double v : den) np["den"].push_back(number(v));
      dens = SmoothDensity::rational(num, den, J);
    } else if (family == "expr") {
      only_keys(params, {"expr", "zero_exponent"}, pw);
      if (!params.contains("expr") || !params["expr"].is_string())
        throw SpecError(join(pw, "expr"), "must be a string");
      const std::string text = params["expr"].get<std::string>();
      const double ze = get_number(params, "zero_exponent", pw, 0.0);
      np["expr"] = text;
      np["zero_exponent"] = number(ze);
      dens = SmoothDensity::expression(text, J, ze);
    } else {
      throw SpecError(join(where, "family"), "unknown family '" + family + "' (exp, powerlaw, rational, expr)");
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(where, e.what());
  }
  Json norm;
  norm["interval"] = Json::array({number(a), end_json(b)});
  norm["family"] = family;
  norm["params"] = np;
  norm["max_order"] = J;
  return {{a, b, *dens}, norm};
}

Measure parse_measure_impl(const nlohmann::json& doc, const std::string& where, Json* normalized) {
  std::vector<Atom> atoms;
  Json natoms = Json::array();
  if (doc.contains("atoms")) {
    const auto& arr = doc["atoms"];
    if (!arr.is_array()) throw SpecError(join(where, "atoms"), "must be an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      const std::string w = join(where, "atoms") + "[" + std::to_string(i) + "]";
      if (!arr[i].is_object()) throw SpecError(w, "atom must be an object {\"s\": .., \"w\": ..}");
      only_keys(arr[i], {"s", "w"}, w);
      const double s = get_number(arr[i], "s", w);
      const double wt = get_number(arr[i], "w", w, 1.0);
      if (!(s > 0.0)) throw SpecError(join(w, "s"), "atom location must be positive");
      if (wt < 0.0) throw SpecError(join(w, "w"), "weight must be non-negative (atom " + std::to_string(i) + ")");
      atoms.push_back({s, wt});
      natoms.push_back(Json{{"s", number(s)}, {"w", number(wt)}});
    }
  }
  std::vector<DensityPiece> pieces;
  Json npieces = Json::array();
  if (doc.contains("density")) {
    const auto& arr = doc["density"];
    if (!arr.is_array()) throw SpecError(join(where, "density"), "must be an array");
    for (size_t i = 0; i < arr.size(); ++i) {
      auto parsed = parse_piece(arr[i], join(where, "density") + "[" + std::to_string(i) + "]");
      pieces.push_back(parsed.piece);
      npieces.push_back(parsed.normalized);
    }
  }
  if (normalized) {
    (*normalized)["atoms"] = natoms;
    (*normalized)["density"] = npieces;
  }
  try {
    return Measure(std::move(atoms), std::move(pieces));
  } catch (const std::exception& e) {
    throw SpecError(join(where, "density"), e.what());
  }
}

void check_density_sign(const Measure& mu, const ScanGrid& grid, const std::string& where) {
  for (size_t i = 0; i < mu.pieces().size(); ++i) {
    const auto& p = mu.pieces()[i];
    PositivityReport r;
    try {
      r = positivity_scan(Measure({}, {p}), grid);
    } catch (const std::exception& e) {
      throw SpecError(join(where, "density") + "[" + std::to_string(i) + "]", e.what());
    }
    if (r.verdict == Verdict::fail) {
      std::ostringstream os;
      os.precision(12);
      os << "density is negative at s=" << r.witness << " (value " << r.min_value << ")";
      throw SpecError(join(where, "density") + "[" + std::to_string(i) + "]", os.str());
    }
  }
}

std::vector<ClosedFormTerm> parse_closed_form(const nlohmann::json& cf, Json& norm) {
  if (!cf.is_object()) throw SpecError("closed_form", "must be an object {\"terms\": [...]}");
  only_keys(cf, {"terms"}, "closed_form");
  if (!cf.contains("terms") || !cf["terms"].is_array()) throw SpecError("closed_form.terms", "must be an array");
  std::vector<ClosedFormTerm> terms;
  norm = Json::object();
  norm["terms"] = Json::array();
  for (size_t i = 0; i < cf["terms"].size(); ++i) {
    const auto& t = cf["terms"][i];
    const std::string w = "closed_form.terms[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string()) {
      throw SpecError(w, "term needs a kind: power_kernel, exponential or constant");
    }
    const std::string kind = t["kind"].get<std::string>();
    Json nt;
    nt["kind"] = kind;
    if (kind == "power_kernel") {
      only_keys(t, {"kind", "coef", "t", "p"}, w);
      const double coef = get_number(t, "coef", w, 1.0), loc = get_number(t, "t", w, 0.0), p = get_number(t, "p", w);
      if (!(loc >= 0.0)) throw SpecError(join(w, "t"), "must be non-negative");
      if (!(p > 0.0)) throw SpecError(join(w, "p"), "must be positive");
      terms.push_back(ClosedFormTerm::power_kernel(coef, loc, p));
      nt["coef"] = number(coef);
      nt["t"] = number(loc);
      nt["p"] = number(p);
    } else if (kind == "exponential") {
      only_keys(t, {"kind", "coef", "t", "q"}, w);
      const double coef = get_number(t, "coef", w, 1.0), loc = get_number(t, "t", w);
      if (!(loc > 0.0)) throw SpecError(join(w, "t"), "must be positive");
      const double q = get_number(t, "q", w, std::numeric_limits<double>::quiet_NaN());
      terms.push_back(ClosedFormTerm::exponential(coef, loc, q));
      nt["coef"] = number(coef);
      nt["t"] = number(loc);
      nt["q"] = std::isnan(q) ? Json("lambda-1") : number(q);
    } else if (kind == "constant") {
      only_keys(t, {"kind", "coef"}, w);
      const double coef = get_number(t, "coef", w, 1.0);
      terms.push_back(ClosedFormTerm::constant(coef));
      nt["coef"] = number(coef);
    } else {
      throw SpecError(join(w, "kind"), "unknown kind '" + kind + "'");
    }
    norm["terms"].push_back(nt);
  }
  return terms;
}

}  // namespace

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

double Spec::lambda() const {
  if (!lam) throw SpecError("lambda", "lambda is required (in the spec file or via --lambda)");
  return *lam;
}

GSFunction Spec::function() const {
  GSFunction::Parts p;
  p.lam = lambda();
  p.c = c;
  p.zero_atom = zero_atom;
  p.closed_form = closed_form;
  if (!measure.empty()) {
    if (side == "stieltjes") {
      p.stieltjes = measure;
    } else {
      p.laplace = measure;
    }
  }
  return GSFunction(std::move(p));
}

Measure parse_measure(const nlohmann::json& doc, const std::string& where) {
  if (!doc.is_object()) throw SpecError(where, "measure spec must be an object");
  return parse_measure_impl(doc, where, nullptr);
}

Spec parse_spec(const nlohmann::json& doc, std::optional<double> lambda_override) {
  if (!doc.is_object()) throw SpecError("", "spec must be a JSON object");
  only_keys(doc, {"lambda", "c", "zero_atom", "side", "atoms", "density", "measure", "closed_form", "grid"}, "");
  Spec spec;
  Json& norm = spec.normalized;
  if (lambda_override) {
    spec.lam = *lambda_override;
  } else if (doc.contains("lambda")) {
    spec.lam = get_number(doc, "lambda", "");
  }
  if (spec.lam && !(*spec.lam > 0.0)) throw SpecError("lambda", "lambda must be positive");
  norm["lambda"] = spec.lam ? number(*spec.lam) : Json(nullptr);
  spec.c = get_number(doc, "c", "", 0.0);
  if (spec.c < 0.0) throw SpecError("c", "must be non-negative");
  spec.zero_atom = get_number(doc, "zero_atom", "", 0.0);
  if (spec.zero_atom < 0.0) throw SpecError("zero_atom", "must be non-negative");
  norm["c"] = number(spec.c);
  norm["zero_atom"] = number(spec.zero_atom);
  if (doc.contains("side")) {
    if (!doc["side"].is_string()) throw SpecError("side", "must be \"laplace\" or \"stieltjes\"");
    spec.side = doc["side"].get<std::string>();
    if (spec.side != "laplace" && spec.side != "stieltjes")
      throw SpecError("side", "must be \"laplace\" or \"stieltjes\"");
  }
  norm["side"] = spec.side;

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    if (!g.is_object()) throw SpecError("grid", "must be an object");
    only_keys(g, {"min", "max", "points", "tolerance"}, "grid");
    const double lo = get_number(g, "min", "grid", 1e-3), hi = get_number(g, "max", "grid", 1e3);
    const int n = get_int(g, "points", "grid", 64);
    const double tol = get_number(g, "tolerance", "grid", 1e-9);
    if (!(lo > 0.0) || !(hi >= lo)) throw SpecError("grid", "need 0 < min <= max");
    if (n < 1) throw SpecError("grid.points", "must be at least 1");
    if (tol < 0.0) throw SpecError("grid.tolerance", "must be non-negative");
    spec.grid = ScanGrid::log_spaced(lo, hi, n, tol);
    spec.grid_given = true;
  }
  norm["grid"] = Json{{"min", number(spec.grid.points.front())},
                      {"max", number(spec.grid.points.back())},
                      {"points", spec.grid.points.size()},
                      {"tolerance", number(spec.grid.tolerance)}};

  Json mnorm = Json::object();
  if (doc.contains("measure")) {
    if (doc.contains("atoms") || doc.contains("density")) {
      throw SpecError("measure", "give the measure either nested under \"measure\" or at top level, not both");
    }
    if (!doc["measure"].is_object()) throw SpecError("measure", "must be an object");
    only_keys(doc["measure"], {"atoms", "density"}, "measure");
    spec.measure = parse_measure_impl(doc["measure"], "measure", &mnorm);
    check_density_sign(spec.measure, spec.grid, "measure");
  } else {
    spec.measure = parse_measure_impl(doc, "", &mnorm);
    check_density_sign(spec.measure, spec.grid, "");
  }
  norm["atoms"] = mnorm["atoms"];
  norm["density"] = mnorm["density"];

  if (doc.contains("closed_form")) {
    Json cf;
    spec.closed_form = parse_closed_form(doc["closed_form"], cf);
    norm["closed_form"] = cf;
  } else {
    norm["closed_form"] = nullptr;
  }

  if (spec.lam && !spec.closed_form.empty() && !spec.measure.empty()) {
    double gap = 0.0;
    try {
      gap = spec.function().representation_gap(ScanGrid::log_spaced(1e-2, 1e2, 9).points);
    } catch (const std::exception& e) {
      throw SpecError("closed_form", std::string("cannot compare representations: ") + e.what());
    }
    if (gap > 1e-7) {
      throw SpecError("closed_form", "closed form and measure disagree (relative gap " + std::to_string(gap) + ")");
    }
  }
  if (spec.lam) {
    try {
      spec.function();
    } catch (const std::exception& e) {
      throw SpecError("closed_form", e.what());
    }
  }
  return spec;
}

Spec parse_spec_text(const std::string& text, std::optional<double> lambda_override) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("", e.what());
  }
  return parse_spec(doc, lambda_override);
}

Spec load_spec(const std::string& path, std::optional<double> lambda_override) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot read spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str(), lambda_override);
}

Json to_json(const CMReport& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["verdict"] = to_string(r.verdict);
  j["tolerance"] = number(r.tolerance);
  if (r.method == CMMethod::finite_difference) j["h"] = number(r.h);
  j["fail_order"] = r.fail_order ? Json(*r.fail_order) : Json(nullptr);
  j["orders"] = Json::array();
  for (const auto& o : r.orders) {
    Json e;
    e["n"] = o.n;
    e["min"] = number(o.min_value);
    e["witness"] = number(o.witness);
    e["tolerance"] = number(o.tolerance);
    e["verdict"] = to_string(o.verdict);
    if (!o.note.empty()) e["note"] = o.note;
    j["orders"].push_back(e);
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const PositivityReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["min"] = number(r.min_value);
  j["witness"] = number(r.witness);
  j["points_checked"] = r.points_checked;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const ClassReport& r) {
  Json j;
  j["lambda"] = number(r.lam);
  j["N"] = r.N;
  j["verdict"] = to_string(r.verdict);
  j["member_up_to"] = r.member_up_to;
  j["fails_at"] = r.fails_at ? Json(*r.fails_at) : Json(nullptr);
  j["entries"] = Json::array();
  for (const auto& e : r.entries) {
    Json x;
    x["k"] = e.k;
    x["derivative_orders"] = e.derivative_orders;
    x["cm"] = to_json(e.report);
    Json m;
    m["available"] = e.measure.available;
    if (e.measure.available) {
      m["scan"] = to_json(e.measure.scan);
      m["agrees"] = e.measure.agrees;
    }
    if (!e.measure.note.empty()) m["note"] = e.measure.note;
    x["measure_side"] = m;
    j["entries"].push_back(x);
  }
  j["caveat"] = r.caveat;
  return j;
}

Json to_json(const DecayProbe& p) {
  Json j;
  j["points"] = Json::array();
  for (double v : p.points) j["points"].push_back(number(v));
  j["values"] = Json::array();
  for (double v : p.values) j["values"].push_back(number(v));
  j["verdict"] = to_string(p.verdict);
  return j;
}

Json to_json(const SignLimitReport& r) {
  Json j;
  j["lambda"] = number(r.lam);
  j["k"] = r.k;
  j["hypothesis_certified"] = r.hypothesis_certified;
  j["verdict"] = to_string(r.verdict);
  j["nonnegativity"] = Json::array();
  for (const auto& o : r.nonnegativity) {
    j["nonnegativity"].push_back(Json{
        {"j", o.n}, {"min", number(o.min_value)}, {"witness", number(o.witness)}, {"verdict", to_string(o.verdict)}});
  }
  auto probe = [](const LimitProbe& p) {
    Json x;
    x["j"] = p.j;
    x["xs"] = Json::array();
    for (double v : p.xs) x["xs"].push_back(number(v));
    x["values"] = Json::array();
    for (double v : p.values) x["values"].push_back(number(v));
    x["limit"] = number(p.limit);
    x["verdict"] = to_string(p.verdict);
    return x;
  };
  j["vanishing"] = Json::array();
  for (const auto& p : r.vanishing) j["vanishing"].push_back(probe(p));
  j["finite"] = r.finite ? probe(*r.finite) : Json(nullptr);
  return j;
}

Json to_json(const OperatorTable& t) {
  Json j;
  j["lambda"] = number(t.lam);
  j["k_max"] = t.k_max;
  j["n_max"] = t.n_max;
  j["discrepancy"] = number(t.discrepancy);
  j["entries"] = Json::array();
  for (const auto& e : t.entries) {
    Json x;
    x["x"] = number(e.x);
    x["k"] = e.k;
    for (Route r : kAllRoutes) x[to_string(r)] = number(e.values[static_cast<int>(r)]);
    x["T"] = Json::array();
    for (double v : e.t_values) x["T"].push_back(number(v));
    j["entries"].push_back(x);
  }
  return j;
}

Json to_json(const ChainSignReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["orders"] = Json::array();
  for (const auto& o : r.orders) {
    j["orders"].push_back(Json{{"j", o.j},
                               {"min", number(o.min_value)},
                               {"min_half_step", number(o.min_value_half)},
                               {"witness", number(o.witness)},
                               {"tolerance", number(o.tolerance)},
                               {"verdict", to_string(o.verdict)}});
  }
  return j;
}

Json to_json(const NChainReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["max_integral_gap"] = number(r.max_integral_gap);
  j["boundary_derivatives"] = Json::array();
  for (const auto& p : r.boundary_derivs) j["boundary_derivatives"].push_back(to_json(p));
  return j;
}

Json to_json(const RhoReport& r) {
  Json j;
  j["points"] = r.points;
  j["tolerance"] = number(r.tolerance);
  j["max_differential_gap"] = number(r.max_differential_gap);
  j["max_convolution_gap"] = number(r.max_convolution_gap);
  j["differential"] = to_string(r.differential);
  j["convolution"] = to_string(r.convolution);
  return j;
}

}  // namespace gsf::io
