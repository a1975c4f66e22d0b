// Acceptance run: one line per criterion, exit status 1 if any criterion fails.
#include <sys/wait.h>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "gsf/cmtest.hpp"
#include "gsf/error.hpp"
#include "gsf/operators.hpp"
#include "gsf/represent.hpp"

using namespace gsf;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Named {
  std::string name;
  GSFunction f;
};

std::vector<Named> route_family() {
  const auto exp = [](double A, double p, double b) { return Measure::density(SmoothDensity::exponential(A, p, b)); };
  const Measure rational = Measure::density(SmoothDensity::rational({1}, {1, 0, 1}));
  const Measure rational2 = Measure::density(SmoothDensity::rational({1, 1}, {8, 12, 6, 1}));
  return {
      {"delta_1 laplace", GSFunction::laplace(2, Measure::atom(1))},
      {"two atoms laplace", GSFunction::laplace(M_PI, Measure({{0.5, 0.5}, {3, 2}}, {}))},
      {"delta_2 stieltjes", GSFunction::stieltjes(1, Measure::atom(2))},
      {"e^-s laplace", GSFunction::laplace(1.7, exp(1, 0, 1))},
      {"s e^-2s laplace", GSFunction::laplace(0.35, exp(1, 1, 2))},
      {"1/(1+s^2) laplace", GSFunction::laplace(1.2, rational)},
      {"(1+s)/(2+s)^3 stieltjes", GSFunction::stieltjes(2.3, rational2)},
      {"constant 3", GSFunction::constant(1.5, 3.0)},
      {"zero atom", GSFunction::laplace(1.3, Measure(), 0.0, 2.0)},
      {"mixed", GSFunction::stieltjes(M_E, Measure::atom(1), 1.0, 0.5)},
  };
}

Outcome criterion1() {
  double worst = 0.0, worst_abs = 0.0;
  for (double lam : {0.5, 1.0, 1.5, 2.0, M_PI})
    for (int n = 0; n <= 8; ++n)
      for (int k = 0; k <= 8; ++k)
        for (int m = 0; m <= k; ++m) {
          const ChuVandermonde c = chu_vandermonde_check(lam, n, k, m);
          worst = std::max(worst, c.rel_gap);
          worst_abs = std::max(worst_abs, c.gap);
        }
  return {worst <= 1e-10, "max relative gap " + fmt(worst) + " (absolute " + fmt(worst_abs) + "), threshold 1e-10"};
}

Outcome criterion2() {
  const auto grid = ScanGrid::log_spaced(1e-3, 1e3, 32).points;
  double worst = 0.0;
  std::string where;
  for (const auto& [name, f] : route_family()) {
    for (int k = 0; k <= 6; ++k) {
      for (double x : grid) {
        const double ref = c_op(f, k, x, Route::leibniz);
        for (Route r : {Route::key_identity, Route::recursion}) {
          const double d = std::abs(c_op(f, k, x, r) - ref) / (1 + std::abs(ref));
          if (d > worst) {
            worst = d;
            where = name + ", k=" + std::to_string(k) + ", x=" + fmt(x) + ", " + to_string(r);
          }
        }
      }
    }
  }
  return {worst <= 1e-8, "10 functions, k<=6, 32 points; worst " + fmt(worst) + " at " + where + ", threshold 1e-8"};
}

Outcome criterion3() {
  const std::vector<Named> family{
      {"e^-x", GSFunction::laplace(2, Measure::atom(1))},
      {"(x+1)^-2", GSFunction::stieltjes(2, Measure::atom(1))},
      {"two kernels",
       GSFunction::closed(1.5, {ClosedFormTerm::power_kernel(1, 0.5, 1.5), ClosedFormTerm::exponential(2, 3.0)})},
      {"constant", GSFunction::constant(0.7, 4.0)},
      {"zero atom", GSFunction::laplace(1.3, Measure(), 1.0, 2.0)},
  };
  double worst = 0.0;
  std::string where;
  for (const auto& [name, f] : family)
    for (int n = 0; n <= 2; ++n)
      for (int k = 0; k <= 4; ++k)
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
          const TDerivReport r = t_equals_deriv_c_check(f, n, k, x);
          if (r.rel_gap > worst) {
            worst = r.rel_gap;
            where = name + ", n=" + std::to_string(n) + ", k=" + std::to_string(k) + ", x=" + fmt(x);
          }
        }
  return {worst <= 1e-4,
          "worst relative gap " + fmt(worst) + (where.empty() ? "" : " at " + where) + ", threshold 1e-4"};
}

Outcome criterion4() {
  struct Case {
    std::string name;
    Measure mu;
    double lam;
    int k_max;
  };
  const std::vector<Case> cases{
      {"e^-s", Measure::density(SmoothDensity::exponential(1, 0, 1)), 1.5, 4},
      {"s e^-2s", Measure::density(SmoothDensity::exponential(1, 1, 2)), 0.5, 4},
      {"1/(1+s^2)", Measure::density(SmoothDensity::rational({1}, {1, 0, 1})), 1.0, 4},
      {"expr e^-s/(1+s)", Measure::density(SmoothDensity::expression("exp(-s)/(1+s)", 4)), 2.0, 4},
      {"(1-s) on (0,1)", Measure::density(SmoothDensity::rational({1, -1}, {1}), 0.0, 1.0), 1.5, 2},
  };
  const auto grid = ScanGrid::log_spaced(1e-2, 1e2, 16).points;
  double worst = 0.0;
  std::string where;
  for (const auto& c : cases) {
    const GSFunction f = GSFunction::laplace(c.lam, c.mu);
    for (int k = 0; k <= c.k_max; ++k)
      for (double x : grid) {
        const double fs = c_op(f, k, x);
        const double ms = c_op_measure_side(c.mu, c.lam, k, x);
        const double d = std::abs(fs - ms) / (1 + std::abs(fs));
        if (d > worst) {
          worst = d;
          where = c.name + ", k=" + std::to_string(k) + ", x=" + fmt(x);
        }
      }
  }
  const ClassReport r = class_membership(
      GSFunction::laplace(1, Measure::density(SmoothDensity::rational({1}, {1, 0, 1}))), 2, ScanGrid::standard());
  bool cls = r.member_up_to == 1 && r.fails_at && *r.fails_at == 2;
  double wv = 0.0, ws = 0.0;
  if (cls) {
    const auto& m = r.entries[2].measure;
    wv = m.scan.min_value;
    ws = m.scan.witness;
    cls = m.available && m.scan.verdict == Verdict::fail && wv <= -0.05 && ws > 0.0 && ws < 1 / std::sqrt(3.0);
  }
  std::ostringstream os;
  os << "measure vs function side worst " << fmt(worst) << " at " << where << " (threshold 1e-6); "
     << "1/(1+s^2): member of C_" << r.member_up_to
     << ", fails at k=" << (r.fails_at ? std::to_string(*r.fails_at) : "none") << ", mu_2 witness " << fmt(wv)
     << " at s=" << fmt(ws);
  return {worst <= 1e-6 && cls, os.str()};
}

Outcome criterion5() {
  const GSFunction f = GSFunction::laplace(2, Measure::atom(1));
  double worst = 0.0;
  for (double x : ScanGrid::standard().points) {
    const double want = (2 - x) * std::exp(-x);
    worst = std::max(worst, std::abs(c_op(f, 1, x) - want) / (1 + std::abs(want)));
  }
  const ClassReport r = class_membership(f, 1, ScanGrid{{1.0, 2.0, 3.0}, 1e-9}, 1e-9, 0);
  const OrderMinimum& o = r.entries[1].report.orders[0];
  const bool ok = worst <= 1e-12 && r.fails_at && *r.fails_at == 1 && o.verdict == Verdict::fail && o.witness == 3.0 &&
                  std::abs(o.min_value + std::exp(-3.0)) <= 1e-9;
  return {ok, "c_1 vs (2-x)e^-x worst " + fmt(worst) + "; witness x=" + fmt(o.witness) + ", value " + fmt(o.min_value) +
                  " (|value + e^-3| = " + fmt(std::abs(o.min_value + std::exp(-3.0))) + ")"};
}

Outcome criterion6() {
  bool ok = true;
  double worst_c1 = 0.0, worst_h = 0.0;
  for (double lam : {1.0, 1.5, 2.0}) {
    const BernsteinFunction g = bernstein_build(0, 0, lam, Measure::atom(1));
    ok = ok && cm_check_derivatives(g.cm_part(), 6, ScanGrid::standard()).verdict == Verdict::pass;
    const GSFunction f = levy_tail_build(0, 0, lam, Measure::atom(1));
    for (double x : ScanGrid::log_spaced(1e-2, 1e2, 16).points) {
      const double hx = std::pow(x, 1 - lam) * g.derivative(x);
      worst_h = std::max(worst_h, std::abs(hx - g.cm_part().eval(x)) / (1 + std::abs(hx)));
      worst_c1 = std::max(worst_c1, std::abs(c_op(f, 1, x) - std::exp(-x)));
    }
  }
  ok = ok && worst_c1 <= 1e-6 && worst_h <= 1e-9;
  return {ok, "x^{1-lam} g' CM-pass at N=6 for lam in {1, 1.5, 2}; |x^{1-lam} g' - h| " + fmt(worst_h) +
                  "; |c_1(f) - e^-x| worst " + fmt(worst_c1) + ", threshold 1e-6"};
}

Outcome criterion7() {
  const Measure w = Measure::density(SmoothDensity::exponential(1, 0, 1));
  const ScanGrid g = ScanGrid::log_spaced(1e-2, 30, 32);
  bool ok = true;
  double dg = 0.0, cg = 0.0;
  for (double lam : {1.0, 1.5, 2.0})
    for (int k = 0; k <= 3; ++k) {
      const RhoReport r = rho_recursion_check(w, lam, k, g, 1e-7);
      ok = ok && r.differential == Verdict::pass && r.convolution == Verdict::pass;
      dg = std::max(dg, r.max_differential_gap);
      cg = std::max(cg, r.max_convolution_gap);
    }
  return {ok, "differential gap " + fmt(dg) + ", convolution gap " + fmt(cg) + ", tolerance 1e-7"};
}

Outcome criterion8() {
  // mu_2 of (1-s) on (0,1) is delta_1; the j=2 sign check runs on the k=3 chain with mu_3 = delta_1.
  struct Case {
    std::string name;
    Measure mu;
    bool atom_chain;
  };
  const std::vector<Case> cases{
      {"delta_1", Measure::density(SmoothDensity::rational({1, -1}, {1}), 0.0, 1.0), true},
      {"e^-s", Measure::density(SmoothDensity::exponential(1, 0, 1)), false},
  };
  const ScanGrid grid = ScanGrid::log_spaced(1e-2, 1e2, 16);
  const std::vector<double> xs{0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0};
  bool ok = true;
  double rec = 0.0;
  std::string bad;
  for (double lam : {1.0, 1.5, 2.0}) {
    for (const auto& c : cases) {
      const GSFunction f = GSFunction::laplace(lam, c.mu);
      const MChain c2 = m_chain_from_function(f, 2);
      rec = std::max(rec, reconstruction_check(f, c2, xs).max_gap);
      const MChain c3 = c.atom_chain ? m_chain(Measure::atom(1), lam, 3) : m_chain_from_function(f, 3);
      const bool signs = chain_inequalities_check(c2, 2, grid).verdict == Verdict::pass &&
                         chain_inequalities_check(c3, 2, grid).verdict == Verdict::pass;
      const bool tail_decay =
          tail_decay_probe(c2).verdict == Verdict::pass && tail_decay_probe(c3).verdict == Verdict::pass;
      if (!signs || !tail_decay) {
        ok = false;
        bad +=
            " " + c.name + "/lam=" + fmt(lam) + (signs ? "" : " sign inequalities") + (tail_decay ? "" : " tail decay");
      }
    }
  }
  ok = ok && rec <= 1e-5;
  return {ok, "reconstruction gap " + fmt(rec) + " (threshold 1e-5); sign inequalities j<=2 and tail decay " +
                  (bad.empty() ? std::string("pass") : "fail:" + bad)};
}

Outcome criterion9() {
  const AsymptoticExpansion e = asymptotic_expand(Measure::atom(1), 2, 7);
  bool alpha = true;
  for (int k = 0; k <= 6; ++k) alpha = alpha && e.alpha[k] == (k % 2 ? -1.0 : 1.0) * (k + 1);
  const double r2 = e.remainder(2, 10);
  bool decay = true;
  for (const auto& p : asymptotic_decay(e, 3)) decay = decay && p.verdict == Verdict::pass;
  const bool ok = alpha && std::abs(r2 - 0.0026446) <= 1e-7 && decay;
  return {ok, std::string("alpha_k exact: ") + (alpha ? "yes" : "no") + "; r_2(10) = " + fmt(r2) +
                  " (|r_2(10) - 0.0026446| = " + fmt(std::abs(r2 - 0.0026446)) + "); decay n<=3 " +
                  (decay ? "pass" : "fail")};
}

Outcome criterion10() {
  struct Case {
    std::string name;
    Measure mu;
    double lam;
  };
  const std::vector<Case> cases{
      {"e^-s", Measure::density(SmoothDensity::exponential(1, 0, 1)), 1.0},
      {"s e^-2s", Measure::density(SmoothDensity::exponential(1, 1, 2)), 0.5},
      {"1/(1+s^2)", Measure::density(SmoothDensity::rational({1}, {1, 0, 1})), 1.0},
      {"(1-s) on (0,1)", Measure::density(SmoothDensity::rational({1, -1}, {1}), 0.0, 1.0), 1.5},
      {"s^2/(1+s)^4", Measure::density(SmoothDensity::rational({0, 0, 1}, {1, 4, 6, 4, 1})), 1.0},
  };
  const int N = 3;
  const ScanGrid grid = ScanGrid::log_spaced(1e-2, 1e2, 24);
  bool ok = true;
  std::ostringstream os;
  int shifts = 0;
  for (const auto& c : cases) {
    const GSFunction f = GSFunction::laplace(c.lam, c.mu);
    const ClassReport base = class_membership(f, N, grid);
    std::vector<int> up;
    for (double d : {0.5, 1.0, 2.0}) {
      const ClassReport shifted = class_membership(f.with_order(c.lam + d), N, grid);
      up.push_back(shifted.member_up_to);
      if (shifted.member_up_to < base.member_up_to) ok = false;
      for (int k = 0; k <= base.member_up_to; ++k) {
        try {
          const LambdaShift s = lambda_shift_density(c.mu, c.lam, c.lam + d, k, grid);
          ++shifts;
          if (s.scan.verdict != Verdict::pass) ok = false;
        } catch (const NotAMeasureError&) {
          ok = false;
        }
      }
    }
    os << c.name << " C_" << base.member_up_to << "->{" << up[0] << "," << up[1] << "," << up[2] << "} ";
  }
  os << "| " << shifts << " shifted densities scanned";
  return {ok, os.str()};
}

struct Proc {
  int code = -1;
  std::string out;
};

Proc run_cli(const std::string& args) {
  const std::string cmd = std::string(GSF_CLI_PATH) + " " + args + " 2>/dev/null";
  Proc p;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

Outcome criterion11() {
  const std::string dir = GSF_SPEC_DIR;
  const std::string pass_args = "identities --lambda 1.5 --max 8";
  const std::string fail_args = "class --lambda 1 --N 2 --spec " + dir + "/rational_w.json";
  const std::string bad_args = "class --spec " + dir + "/malformed.json";
  bool same = true;
  for (const std::string& a : {pass_args, fail_args, "chain --k 2 --spec " + dir + "/exp_density.json"}) {
    const Proc x = run_cli(a), y = run_cli(a), z = run_cli(a);
    same = same && !x.out.empty() && x.out == y.out && y.out == z.out && x.code == y.code;
  }
  const Proc p = run_cli(pass_args), f = run_cli(fail_args), b = run_cli(bad_args);
  const bool witness = f.out.find("\"witness\"") != std::string::npos;
  const bool ok = same && p.code == 0 && f.code == 1 && witness && b.code == 2;
  return {ok, std::string("byte-identical reruns: ") + (same ? "yes" : "no") +
                  "; exit codes pass/fail/malformed = " + std::to_string(p.code) + "/" + std::to_string(f.code) + "/" +
                  std::to_string(b.code) + (witness ? ", fail report has witness" : ", fail report lacks witness")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"identity suite (Chu-Vandermonde)", criterion1},
      {"route agreement", criterion2},
      {"T_{n,k} = (-1)^n c_k^{(n)}", criterion3},
      {"measure-side consistency and C_1 classification", criterion4},
      {"atom negative case", criterion5},
      {"Bernstein duality", criterion6},
      {"recursion and convolution", criterion7},
      {"M chain reconstruction", criterion8},
      {"asymptotics", criterion9},
      {"lambda monotonicity", criterion10},
      {"CLI determinism and exit codes", criterion11},
  };
  int failed = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto s = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - s).count();
    if (!o.pass) ++failed;
    std::printf("criterion %2zu: %s  %s: %s [%.2fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of %zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
              total);
  return failed == 0 ? 0 : 1;
}
