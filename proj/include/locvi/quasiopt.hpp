#pragma once

#include "locvi/qvi.hpp"
#include "locvi/quasiconvex.hpp"

namespace locvi {

// A local quasi-optimization problem: minimize f over the self-referential
// constraint set K(x), locally around each candidate.
struct QuasiOptProblem {
    std::function<double(const Vec&)> f;
    std::function<std::vector<Vec>(const Vec&)> f_duals;  // optional: normalized normal map
    double f_lip = 0;  // Lipschitz bound of f; widens the VI cross-check band
    ConstraintMap K;
    Region box;
    double h = 0;
    double r = 0;

    // Tolerance for comparing the optimization and VI routes: grid jitter
    // plus the argmin-detection band 2*Lip(f)*h of the normal map.
    double crosscheck_tol() const { return h + 2.0 * f_lip * h; }
};

QuasiOptProblem make_qopt(const QuasiconvexFn& f, ConstraintMap K, Region box, double h,
                          double r, int k = 64);

// Direct definition: grid fixed points x of K with f(x) minimal on
// K(x) within B(x, r).
SolutionSet solve_lqopt_direct(const QuasiOptProblem& P, double eps);

enum class UnionInner { Opt, VI, Both };

// Union decomposition over certified fixed points (uncertified ones fall
// back to the direct check). Inner solves run either as local optimization,
// as the VI reformulation through the normalized normal map, or as both with
// a cross-check; a cross-check disagreement beyond h throws
// "reformulation mismatch".
SolutionSet solve_lqopt_union(const QuasiOptProblem& P, double eps,
                              UnionInner inner = UnionInner::Opt, double r_cert_max = 0,
                              bool crosscheck_enabled = true);

}  // namespace locvi
