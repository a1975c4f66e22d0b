#pragma once

#include <string>
#include <vector>

#include "gsf/cmtest.hpp"
#include "gsf/function.hpp"

namespace gsf {

// g(x) = alpha x^lam + beta + int gamma(lam, x t) t^{-lam} dmu(t).
class BernsteinFunction {
 public:
  BernsteinFunction(double alpha, double beta, double lam, Measure mu);
  double value(double x) const;
  double derivative(double x) const;
  // h(x) = x^{1-lam} g'(x) = alpha lam + int e^{-xt} dmu(t), as an order-1 Laplace function.
  const GSFunction& cm_part() const noexcept { return h_; }
  double lam() const noexcept { return lam_; }

 private:
  double alpha_, beta_, lam_;
  Measure mu_;
  GSFunction h_;
};

// Both builders throw ConstructionError unless int_(0,1] dmu and
// int_(1,inf) t^{-lam} dmu are finite.
BernsteinFunction bernstein_build(double alpha, double beta, double lam, const Measure& mu);
// f(x) = alpha + beta x^{-lam} + int e^{-xs} s^{lam-1} M(s) ds, M(s) = int_(s,inf) t^{-lam} dmu(t).
GSFunction levy_tail_build(double alpha, double beta, double lam, const Measure& mu);
// The density M(s) ds, split at the atoms and piece boundaries of mu.
Measure tail_density_measure(const Measure& mu, double lam);

// M_k(u) = int_(u,inf) s^{-lam} dmu_k(s), M_j(u) = int_u^inf M_{j+1}(s) s^{-2} ds,
// evaluated in closed form as
// M_j(u) = 1/(k-j)! int_(u,inf) (1/u - 1/s)^{k-j} s^{-lam} dmu_k(s).
struct MChain {
  double lam = 1.0;
  int k = 1;
  Measure mu_k;
  double l_k = 0.0;
  double b_k = 0.0;
  std::vector<double> breakpoints;

  double M(int j, double u) const;
  double N(int j, double u) const { return M(j, 1.0 / u); }
};

MChain m_chain(const Measure& mu_k, double lam, int k);
// mu_k = s^{lam-1} (-1)^k s^k d^k mu for f's Laplace measure mu, with
// l_k = lim_{x->0} (x^{lam-1+k} f)^{(k-1)} and b_k = lim_{x->inf} c_k(f).
MChain m_chain_from_function(const GSFunction& f, int k);

// b_k/(lam)_k + l_k x^{-lam}/(k-1)! + int M_1(u) u^{k-1} e^{-xu} u^{lam-1} du
double reconstruct(const MChain& chain, double x);

struct ReconstructionReport {
  std::vector<double> xs, f_values, reconstructed;
  double max_gap = 0.0;  // |rec - f| / max(1, |f|)
};
ReconstructionReport reconstruction_check(const GSFunction& f, const MChain& chain, const std::vector<double>& xs);

// Largest |M_j(u) - int_u^inf M_{j+1}(s)/s^2 ds| / max(1, |M_j(u)|) over j and the points.
double m_recursion_gap(const MChain& chain, const std::vector<double>& us);

struct ChainSignOrder {
  int j = 0;
  double min_value = 0.0;       // min of (-1)^j d^j (M_{k-j+1}(u) u^{j-1}) at step h
  double min_value_half = 0.0;  // same at step h/2
  double witness = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::pass;
};

struct ChainSignReport {
  std::vector<ChainSignOrder> orders;
  Verdict verdict = Verdict::pass;
};

// Central differences with h = 1e-2 u, cross-checked at h/2, 1 <= j <= min(j_max, k-1, 3).
ChainSignReport chain_inequalities_check(const MChain& chain, int j_max, const ScanGrid& grid);

struct DecayProbe {
  std::vector<double> points;
  std::vector<double> values;
  Verdict verdict = Verdict::pass;
};

// u^lam M_k(u) at u = 10^-1 .. 10^-6: strictly decreasing toward 0.
DecayProbe tail_decay_probe(const MChain& chain);

struct NChainReport {
  double max_integral_gap = 0.0;            // N_j(u) - int_0^u N_{j+1}
  std::vector<DecayProbe> boundary_derivs;  // N_1^{(j)} at u = 10^-1..10^-4, j <= k-1
  Verdict verdict = Verdict::pass;
};

NChainReport n_chain(const MChain& chain, const ScanGrid& grid);

struct AsymptoticExpansion {
  double lam = 1.0;
  std::vector<double> alpha;  // alpha_k = (-1)^k (lam)_k s_k(mu) / k!
  GSFunction f;               // order-lam Stieltjes transform of mu

  // r_n(x) = x^{lam-1} f(x) - sum_{k<n} alpha_k x^{-k-1}, n <= alpha.size()
  double remainder(int n, double x) const;
};

// DivergenceError naming the first infinite moment order.
AsymptoticExpansion asymptotic_expand(const Measure& mu, double lam, int n);
// |x^m r_m(x)| at x = 10, 100, 1000 strictly decreasing, for each m <= n.
std::vector<DecayProbe> asymptotic_decay(const AsymptoticExpansion& e, int n);

struct RhoReport {
  double max_differential_gap = 0.0;  // s v_k' vs (lam+k-1) v_k - v_{k+1}
  double max_convolution_gap = 0.0;   // s v_k vs int_0^s [(lam+k) v_k - v_{k+1}]
  int points = 0;
  Verdict differential = Verdict::pass;
  Verdict convolution = Verdict::pass;
  double tolerance = 1e-7;
};

RhoReport rho_recursion_check(const Measure& mu, double lam, int k, const ScanGrid& grid, double tol = 1e-7);

struct LambdaShift {
  Measure shifted;  // (-1)^k s^k d^k (s^{lam1-lam2} mu) by the Leibniz expansion
  PositivityReport scan;
  double cross_check_gap = 0.0;  // vs derived_measure of s^{lam1-lam2} mu on the grid
};

LambdaShift lambda_shift_density(const Measure& mu, double lam1, double lam2, int k, const ScanGrid& grid);

}  // namespace gsf
