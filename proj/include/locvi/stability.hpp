#pragma once

#include <map>
#include <string>

#include "locvi/qvi.hpp"
#include "locvi/quasiconvex.hpp"

namespace locvi {

// A perturbed problem family: operator T(., lambda), constraint set K(mu),
// optional objective f(., lambda), and (for quasi-optimization trials) a
// jointly parametric constraint map K(., mu). All evaluators must be pure.
struct PerturbedFamily {
    int x_dim = 0;
    int lambda_dim = 0;
    int mu_dim = 0;
    std::function<std::vector<Vec>(const Vec& x, const Vec& lambda)> T;
    std::function<Region(const Vec& mu)> K;
    std::function<double(const Vec& x, const Vec& lambda)> f;          // optional
    std::function<Region(const Vec& x, const Vec& mu)> K_joint;        // optional (lqopt)
    Region box;

    DualMap dual_map(const Vec& lambda, bool exclude_zero) const;
};

// Zero-excluded local Stampacchia solutions of the instance (lambda, mu).
SolutionSet solve_lsvi_star(const PerturbedFamily& fam, const Vec& lambda, const Vec& mu,
                            double h, double r, double eps);

// Weak-int local solutions: for every interior competitor some nonzero dual
// vector works (the multiplier may depend on the competitor). The strict
// inequality is tested at > -eps; the minimal attained margin is reported in
// the notes.
SolutionSet solve_weak_int(const PerturbedFamily& fam, const Vec& lambda, const Vec& mu,
                           double h, double r, double eps);

// Local minimizers of f(., lambda) over K(mu).
SolutionSet solve_lopt(const PerturbedFamily& fam, const Vec& lambda, const Vec& mu,
                       double h, double r, double eps);

// One convergent probe for the int-dual lower semicontinuity test.
struct LscProbe {
    std::vector<Vec> y_seq, z_seq, lambda_seq, mu_seq;
    Vec y, z, lambda, mu;
};

struct LscResult {
    bool ok = true;
    double worst_margin = 0;  // max over probes of lhs - liminf proxy
    std::string diagnostic;
};

// Checks sup_{y* in T(y,l)\0} <y*, z-y> <= liminf_n sup <y_n*, z_n-y_n>
// with the liminf proxied by the min over the tail quartile.
LscResult check_int_dual_lsc(const PerturbedFamily& fam, const std::vector<LscProbe>& probes,
                             double eps);

enum class TrialKind { WeakInt, Star, LOpt, LQOpt };
enum class Verdict { True, False, Inconclusive };

struct TraceResult {
    std::vector<std::pair<Vec, Vec>> params;  // (lambda_n, mu_n)
    std::vector<Vec> matched;                 // solution chain x_n
    std::vector<std::size_t> instance_sizes;
    Vec limit_x;
    Verdict verdict = Verdict::Inconclusive;
    std::map<std::string, bool> hypotheses;
    std::vector<std::string> failed_hypotheses;
    std::string diagnostic;
};

// Solves every instance along the trace, extracts a convergent solution
// chain by nearest-point matching, and sets the verdict to membership of the
// limit point in the limit-instance solution set (tolerance 2*eps, radius
// r/2, point match within 2h). Hypothesis checks (set convergence,
// quasimonotonicity, int-dual lsc on derived probes, and the
// objective-specific conditions for (L)QOpt kinds) are recorded.
TraceResult closedness_trial(const PerturbedFamily& fam, TrialKind kind,
                             const std::vector<std::pair<Vec, Vec>>& params,
                             const Vec& lambda0, const Vec& mu0, double h, double r,
                             double eps);

}  // namespace locvi
