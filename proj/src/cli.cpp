#include "gsf/cli.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "gsf/error.hpp"
#include "gsf/spec_io.hpp"

namespace gsf::cli {

namespace {

using io::Json;
using io::number;

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static std::string cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

  std::string str() const {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
    return os.str();
  }
};

struct Outcome {
  int exit_code = kPass;
  Json result;
  Csv csv;
  std::optional<Json> witness;
};

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return kPass;
    case Verdict::fail:
      return kFail;
    case Verdict::inconclusive:
      return kInconclusive;
  }
  return kInconclusive;
}

const char* verdict_name(int code) {
  switch (code) {
    case kPass:
      return "pass";
    case kFail:
      return "fail";
    case kInconclusive:
      return "inconclusive";
    default:
      return "error";
  }
}

struct Context {
  const RunConfig& cfg;
  std::optional<io::Spec> spec;
  ScanGrid grid;
  double tol = kDefaultCMTolerance;

  const io::Spec& need_spec() const {
    if (!spec) throw SpecError("--spec", "command '" + cfg.command + "' needs a spec file");
    return *spec;
  }
  std::vector<double> points_or_grid() const { return cfg.xs.empty() ? grid.points : cfg.xs; }
};

Json config_json(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  Json j;
  j["command"] = c.command;
  j["lambda"] = c.lam ? number(*c.lam) : (ctx.spec && ctx.spec->lam ? number(*ctx.spec->lam) : Json(nullptr));
  if (c.N) j["N"] = *c.N;
  if (c.k) j["k"] = *c.k;
  if (c.n) j["n"] = *c.n;
  if (!c.xs.empty()) {
    j["x"] = Json::array();
    for (double x : c.xs) j["x"].push_back(number(x));
  }
  j["grid"] = Json{{"min", number(ctx.grid.points.front())},
                   {"max", number(ctx.grid.points.back())},
                   {"points", ctx.grid.points.size()},
                   {"tolerance", number(ctx.grid.tolerance)}};
  j["tol"] = number(ctx.tol);
  if (c.command == "bernstein") {
    j["alpha"] = number(c.alpha);
    j["beta"] = number(c.beta);
  }
  if (c.command == "identities") j["max"] = c.max;
  if (c.command == "cm-check") {
    j["method"] = c.method;
    j["h"] = number(c.h);
  }
  if (c.command == "chain") j["j_max"] = c.j_max;
  j["format"] = c.format;
  if (ctx.spec) j["spec"] = ctx.spec->normalized;
  return j;
}

Json cm_witness(const CMReport& r) {
  for (const auto& o : r.orders) {
    if (o.verdict == Verdict::fail) return Json{{"n", o.n}, {"x", number(o.witness)}, {"value", number(o.min_value)}};
  }
  return nullptr;
}

void cm_csv(Csv& csv, const CMReport& r, std::optional<int> k = std::nullopt) {
  for (const auto& o : r.orders) {
    std::vector<std::string> row;
    if (k) row.push_back(Csv::cell(*k));
    row.insert(row.end(), {Csv::cell(o.n), Csv::cell(o.min_value), Csv::cell(o.witness), Csv::cell(o.tolerance),
                           to_string(o.verdict)});
    csv.rows.push_back(row);
  }
}

Outcome cmd_eval(const Context& ctx) {
  const GSFunction f = ctx.need_spec().function();
  const int n = ctx.cfg.n.value_or(0);
  Outcome out;
  out.result["n"] = n;
  out.result["values"] = Json::array();
  out.csv.header = {"x", "value"};
  for (double x : ctx.points_or_grid()) {
    const double v = f.derivative(n, x);
    out.result["values"].push_back(Json{{"x", number(x)}, {"value", number(v)}});
    out.csv.rows.push_back({Csv::cell(x), Csv::cell(v)});
  }
  return out;
}

Outcome cmd_operator(const Context& ctx) {
  const GSFunction f = ctx.need_spec().function();
  const OperatorTable t = operator_table(f, ctx.cfg.k.value_or(1), ctx.cfg.n.value_or(0), ctx.points_or_grid());
  Outcome out;
  out.result = io::to_json(t);
  out.csv.header = {"x", "k", "leibniz", "key_identity", "recursion"};
  for (int n = 0; n <= t.n_max; ++n) out.csv.header.push_back("T_" + std::to_string(n));
  for (const auto& e : t.entries) {
    std::vector<std::string> row{Csv::cell(e.x), Csv::cell(e.k), Csv::cell(e.values[0]), Csv::cell(e.values[1]),
                                 Csv::cell(e.values[2])};
    for (double v : e.t_values) row.push_back(Csv::cell(v));
    out.csv.rows.push_back(row);
  }
  const bool agree = t.discrepancy <= 1e-8;
  out.result["routes_agree"] = agree;
  out.exit_code = agree ? kPass : kInconclusive;
  return out;
}

Outcome cmd_cm_check(const Context& ctx) {
  const GSFunction f = ctx.need_spec().function();
  const int N = ctx.cfg.N.value_or(kDefaultCMOrder);
  CMReport r;
  if (ctx.cfg.method == "derivatives") {
    r = cm_check_derivatives(f, N, ctx.grid, ctx.tol);
  } else if (ctx.cfg.method == "differences") {
    r = cm_check_differences(f, N, ctx.grid, ctx.cfg.h, ctx.tol);
  } else {
    throw SpecError("--method", "must be 'derivatives' or 'differences'");
  }
  Outcome out;
  out.result = io::to_json(r);
  out.csv.header = {"n", "min", "witness", "tolerance", "verdict"};
  cm_csv(out.csv, r);
  out.exit_code = exit_for(r.verdict);
  if (r.verdict == Verdict::fail) out.witness = cm_witness(r);
  return out;
}

Outcome cmd_class(const Context& ctx) {
  const GSFunction f = ctx.need_spec().function();
  const ClassReport r = class_membership(f, ctx.cfg.N.value_or(kDefaultCMOrder), ctx.grid, ctx.tol);
  Outcome out;
  out.result = io::to_json(r);
  std::ostringstream summary;
  if (r.member_up_to >= 0)
    summary << "member of C_" << r.member_up_to;
  else
    summary << "not completely monotonic";
  if (r.fails_at) summary << ", fails at k=" << *r.fails_at;
  out.result["summary"] = summary.str();
  out.csv.header = {"k", "n", "min", "witness", "tolerance", "verdict"};
  for (const auto& e : r.entries) cm_csv(out.csv, e.report, e.k);
  out.exit_code = exit_for(r.verdict);
  if (r.fails_at) {
    const auto& e = r.entries[*r.fails_at];
    Json w = cm_witness(e.report);
    w["k"] = e.k;
    if (e.measure.available && e.measure.scan.verdict == Verdict::fail) {
      w["measure_side"] = Json{{"s", number(e.measure.scan.witness)}, {"value", number(e.measure.scan.min_value)}};
    }
    out.witness = w;
  }
  return out;
}

Outcome cmd_identities(const Context& ctx) {
  if (!ctx.cfg.lam && !(ctx.spec && ctx.spec->lam)) throw SpecError("--lambda", "lambda is required");
  const double lam = ctx.cfg.lam ? *ctx.cfg.lam : *ctx.spec->lam;
  const int M = ctx.cfg.max;
  if (M < 0) throw SpecError("--max", "must be non-negative");
  Outcome out;
  out.csv.header = {"n", "k", "m", "lhs", "rhs", "gap", "rel_gap"};
  double max_gap = 0.0, max_rel = 0.0;
  Json worst = nullptr;
  int count = 0;
  for (int n = 0; n <= M; ++n) {
    for (int k = 0; k <= M; ++k) {
      for (int m = 0; m <= k; ++m) {
        const ChuVandermonde cv = chu_vandermonde_check(lam, n, k, m);
        ++count;
        max_gap = std::max(max_gap, cv.gap);
        if (cv.rel_gap >= max_rel) {
          max_rel = cv.rel_gap;
          worst = Json{{"n", n},
                       {"k", k},
                       {"m", m},
                       {"lhs", number(cv.lhs)},
                       {"rhs", number(cv.rhs)},
                       {"rel_gap", number(cv.rel_gap)}};
        }
        out.csv.rows.push_back({Csv::cell(n), Csv::cell(k), Csv::cell(m), Csv::cell(cv.lhs), Csv::cell(cv.rhs),
                                Csv::cell(cv.gap), Csv::cell(cv.rel_gap)});
      }
    }
  }
  out.result["identity"] = "chu_vandermonde";
  out.result["lambda"] = number(lam);
  out.result["cases"] = count;
  out.result["max_abs_gap"] = number(max_gap);
  out.result["max_rel_gap"] = number(max_rel);
  out.result["threshold_rel"] = number(1e-10);
  out.exit_code = max_rel <= 1e-10 ? kPass : kFail;
  if (out.exit_code == kFail) out.witness = worst;
  return out;
}

Outcome cmd_asymptotics(const Context& ctx) {
  const io::Spec& spec = ctx.need_spec();
  if (spec.side != "stieltjes") throw SpecError("side", "asymptotics needs a stieltjes-side spec");
  const int n = ctx.cfg.n.value_or(3);
  const AsymptoticExpansion e = asymptotic_expand(spec.measure, spec.lambda(), n);
  const auto probes = asymptotic_decay(e, n);
  Outcome out;
  out.result["lambda"] = number(e.lam);
  out.result["measure_side"] = "stieltjes";
  out.result["note"] = "expansion of the integral part; c and zero_atom are not included";
  out.result["alpha"] = Json::array();
  for (double a : e.alpha) out.result["alpha"].push_back(number(a));
  out.result["decay"] = Json::array();
  bool ok = true;
  for (size_t m = 0; m < probes.size(); ++m) {
    Json p = io::to_json(probes[m]);
    p["n"] = static_cast<int>(m);
    out.result["decay"].push_back(p);
    if (probes[m].verdict != Verdict::pass) {
      if (ok) out.witness = Json{{"n", static_cast<int>(m)}, {"values", p["values"]}};
      ok = false;
    }
  }
  out.csv.header = {"x", "r_n", "x^n*r_n"};
  std::vector<double> xs{10.0, 100.0, 1000.0};
  xs.insert(xs.end(), ctx.cfg.xs.begin(), ctx.cfg.xs.end());
  for (double x : xs) {
    const double r = e.remainder(n, x);
    out.csv.rows.push_back({Csv::cell(x), Csv::cell(r), Csv::cell(std::pow(x, n) * r)});
  }
  out.exit_code = ok ? kPass : kFail;
  return out;
}

Outcome cmd_bernstein(const Context& ctx) {
  const io::Spec& spec = ctx.need_spec();
  const double lam = spec.lambda();
  const BernsteinFunction g = bernstein_build(ctx.cfg.alpha, ctx.cfg.beta, lam, spec.measure);
  const Admissibility adm = levy_admissibility(spec.measure, lam);
  const CMReport r = cm_check_derivatives(g.cm_part(), ctx.cfg.N.value_or(6), ctx.grid, ctx.tol);
  Outcome out;
  out.result["admissibility"] =
      Json{{"admissible", adm.admissible}, {"mass_near_zero", number(adm.mass_near_zero)}, {"tail", number(adm.tail)}};
  out.result["cm_part"] = io::to_json(r);
  out.result["values"] = Json::array();
  out.csv.header = {"x", "g", "g_prime", "h"};
  for (double x : ctx.points_or_grid()) {
    const double gv = g.value(x), gd = g.derivative(x), hv = g.cm_part().eval(x);
    out.result["values"].push_back(
        Json{{"x", number(x)}, {"g", number(gv)}, {"g_prime", number(gd)}, {"h", number(hv)}});
    out.csv.rows.push_back({Csv::cell(x), Csv::cell(gv), Csv::cell(gd), Csv::cell(hv)});
  }
  out.exit_code = exit_for(r.verdict);
  if (r.verdict == Verdict::fail) out.witness = cm_witness(r);
  return out;
}

Outcome cmd_chain(const Context& ctx) {
  const io::Spec& spec = ctx.need_spec();
  const GSFunction f = spec.function();
  const int k = ctx.cfg.k.value_or(2);
  const MChain chain = m_chain_from_function(f, k);
  Outcome out;
  out.result["lambda"] = number(chain.lam);
  out.result["k"] = k;
  out.result["l_k"] = number(chain.l_k);
  out.result["b_k"] = number(chain.b_k);

  out.csv.header = {"u"};
  for (int j = k; j >= 1; --j) out.csv.header.push_back("M_" + std::to_string(j));
  Json table = Json::array();
  for (double u : ctx.grid.points) {
    Json row{{"u", number(u)}};
    std::vector<std::string> cells{Csv::cell(u)};
    for (int j = k; j >= 1; --j) {
      const double v = chain.M(j, u);
      row["M_" + std::to_string(j)] = number(v);
      cells.push_back(Csv::cell(v));
    }
    table.push_back(row);
    out.csv.rows.push_back(cells);
  }
  out.result["M"] = table;

  std::vector<double> sample;
  for (size_t i = 0; i < ctx.grid.points.size(); i += 4) sample.push_back(ctx.grid.points[i]);
  const double rec_gap = m_recursion_gap(chain, sample);
  const ChainSignReport signs = chain_inequalities_check(chain, ctx.cfg.j_max, ctx.grid);
  const DecayProbe tail_decay = tail_decay_probe(chain);
  const NChainReport nc = n_chain(chain, ctx.grid);
  const std::vector<double> xs = ctx.cfg.xs.empty() ? std::vector<double>{0.5, 1.0, 2.0} : ctx.cfg.xs;
  const ReconstructionReport rec = reconstruction_check(f, chain, xs);

  out.result["m_recursion_gap"] = number(rec_gap);
  out.result["chain_inequalities"] = io::to_json(signs);
  out.result["tail_decay"] = io::to_json(tail_decay);
  out.result["n_chain"] = io::to_json(nc);
  Json rj;
  rj["max_gap"] = number(rec.max_gap);
  rj["points"] = Json::array();
  for (size_t i = 0; i < rec.xs.size(); ++i) {
    rj["points"].push_back(Json{
        {"x", number(rec.xs[i])}, {"f", number(rec.f_values[i])}, {"reconstructed", number(rec.reconstructed[i])}});
  }
  out.result["reconstruction"] = rj;

  Json failures = Json::array();
  if (rec_gap > 1e-7) failures.push_back(Json{{"check", "m_recursion"}, {"gap", number(rec_gap)}});
  for (const auto& o : signs.orders) {
    if (o.verdict == Verdict::fail) {
      failures.push_back(Json{{"check", "chain_inequalities"},
                              {"j", o.j},
                              {"u", number(o.witness)},
                              {"value", number(std::min(o.min_value, o.min_value_half))}});
    }
  }
  if (tail_decay.verdict == Verdict::fail)
    failures.push_back(Json{{"check", "tail_decay"}, {"values", io::to_json(tail_decay)["values"]}});
  if (nc.verdict == Verdict::fail) failures.push_back(Json{{"check", "n_chain"}, {"gap", number(nc.max_integral_gap)}});
  if (rec.max_gap > 1e-5) failures.push_back(Json{{"check", "reconstruction"}, {"gap", number(rec.max_gap)}});
  out.exit_code = failures.empty() ? kPass : kFail;
  if (!failures.empty()) out.witness = failures[0];
  return out;
}

const std::set<std::string> kCommands{"eval",        "operator",  "cm-check", "class",   "identities",
                                      "asymptotics", "bernstein", "chain",    "validate"};

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult res;
  Json config = nullptr;
  try {
    if (!kCommands.count(cfg.command)) throw SpecError("command", "unknown command '" + cfg.command + "'");
    if (cfg.format != "json" && cfg.format != "csv") throw SpecError("--format", "must be json or csv");
    if (cfg.lam && !(*cfg.lam > 0.0)) throw SpecError("--lambda", "lambda must be positive");
    for (auto [name, v] : {std::pair{"--N", cfg.N}, std::pair{"--k", cfg.k}, std::pair{"--n", cfg.n}}) {
      if (v && *v < 0) throw SpecError(name, "must be non-negative");
    }
    for (double x : cfg.xs)
      if (!(x > 0.0)) throw SpecError("--x", "evaluation points must be positive");
    if (cfg.tol && !(*cfg.tol >= 0.0)) throw SpecError("--tol", "must be non-negative");

    Context ctx{cfg, std::nullopt, ScanGrid::standard()};
    if (!cfg.spec_path.empty()) ctx.spec = io::load_spec(cfg.spec_path, cfg.lam);
    if (cfg.command != "identities" && cfg.command != "validate" && !ctx.spec) {
      throw SpecError("--spec", "command '" + cfg.command + "' needs a spec file");
    }
    if (cfg.command == "validate") {
      if (cfg.format != "json") throw SpecError("--format", "validate emits json only");
      if (!ctx.spec) throw SpecError("--spec", "validate needs a spec file");
      res.report = ctx.spec->normalized.dump(2) + "\n";
      return res;
    }

    if (ctx.spec && (ctx.spec->grid_given || cfg.command != "chain")) {
      ctx.grid = ctx.spec->grid;
    } else if (cfg.command == "chain") {
      ctx.grid = ScanGrid::log_spaced(1e-2, 1e2, 16);
    }
    if (cfg.grid_min || cfg.grid_max || cfg.grid_points) {
      const double lo = cfg.grid_min.value_or(ctx.grid.points.front());
      const double hi = cfg.grid_max.value_or(ctx.grid.points.back());
      const int np = cfg.grid_points.value_or(static_cast<int>(ctx.grid.points.size()));
      if (!(lo > 0.0) || !(hi >= lo) || np < 1)
        throw SpecError("--grid-min/--grid-max/--grid-points", "need 0 < min <= max and points >= 1");
      ctx.grid = ScanGrid::log_spaced(lo, hi, np, ctx.grid.tolerance);
    }
    ctx.tol = cfg.tol.value_or(ctx.grid.tolerance);
    ctx.grid.tolerance = ctx.tol;
    config = config_json(ctx);

    Outcome out;
    if (cfg.command == "eval")
      out = cmd_eval(ctx);
    else if (cfg.command == "operator")
      out = cmd_operator(ctx);
    else if (cfg.command == "cm-check")
      out = cmd_cm_check(ctx);
    else if (cfg.command == "class")
      out = cmd_class(ctx);
    else if (cfg.command == "identities")
      out = cmd_identities(ctx);
    else if (cfg.command == "asymptotics")
      out = cmd_asymptotics(ctx);
    else if (cfg.command == "bernstein")
      out = cmd_bernstein(ctx);
    else
      out = cmd_chain(ctx);

    res.exit_code = out.exit_code;
    if (cfg.format == "csv") {
      res.report = out.csv.str();
    } else {
      Json report;
      report["command"] = cfg.command;
      report["config"] = config;
      report["verdict"] = verdict_name(out.exit_code);
      report["result"] = out.result;
      if (out.witness) report["witness"] = *out.witness;
      res.report = report.dump(2) + "\n";
    }
    if (out.exit_code == kFail) res.diagnostics = "mathematical failure (witness in report)";
    if (out.exit_code == kInconclusive) res.diagnostics = "numerically inconclusive";
  } catch (const SpecError& e) {
    res.exit_code = kUsage;
    res.diagnostics = std::string("error: ") + e.what();
  } catch (const DomainError& e) {
    res.exit_code = kUsage;
    res.diagnostics = std::string("error: ") + e.what();
  } catch (const ConstructionError& e) {
    res.exit_code = kUsage;
    res.diagnostics = std::string("error: ") + e.what();
  } catch (const NotAMeasureError& e) {
    res.exit_code = kFail;
    res.diagnostics = std::string("not a measure: ") + e.what();
    Json report{{"command", cfg.command},
                {"config", config},
                {"verdict", "fail"},
                {"witness", Json{{"not_a_measure", e.what()}}}};
    res.report = report.dump(2) + "\n";
  } catch (const std::exception& e) {
    res.exit_code = kInconclusive;
    res.diagnostics = std::string("numerical failure: ") + e.what();
  }
  return res;
}

}  // namespace gsf::cli
