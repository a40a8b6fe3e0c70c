#pragma once

#include <optional>
#include <string>

#include "locvi/operators.hpp"

namespace locvi {

enum class SolutionKind { LSVI, SVI, LMVI, MVI, LSVIStar, WeakInt, LOpt, LQOpt };

const char* to_string(SolutionKind k);

// A solution certificate: the point, the dual multiplier that certifies it
// (Stampacchia kinds only), the largest radius at which the certificate was
// re-verified, and the tolerances used.
struct LocalSolution {
    Vec x;
    std::optional<Vec> multiplier;
    double radius = 0;
    double epsilon = 0;
    double grid_h = 0;
    SolutionKind kind = SolutionKind::LSVI;
};

struct SolutionSet {
    SolutionKind kind = SolutionKind::LSVI;
    std::vector<LocalSolution> solutions;
    double h = 0;
    std::vector<std::string> notes;

    std::vector<Vec> points() const;
    bool contains_point(const Vec& p, double tol) const;
};

// True when two solution sets coincide as point sets up to tol (two-sided).
bool same_points(const SolutionSet& a, const SolutionSet& b, double tol);

// Local Stampacchia solutions on the h-grid of C: grid points x for which
// some sampled x* in T(x) satisfies <x*, y-x> >= -eps (scaled by the dual
// norm) against every grid competitor within the Euclidean ball B(x, r).
// Certified radii are extended by doubling up to the region diameter.
SolutionSet solve_lsvi(const DualMap& T, const Region& C, double h, double r, double eps);
// Global version (r = region diameter).
SolutionSet solve_svi(const DualMap& T, const Region& C, double h, double eps);
// Minty versions: <y*, y-x> >= -eps for every competitor y and every sampled
// y* in T(y).
SolutionSet solve_lmvi(const DualMap& T, const Region& C, double h, double r, double eps);
SolutionSet solve_mvi(const DualMap& T, const Region& C, double h, double eps);

// Re-runs the defining inequality of s.kind on a fresh grid of step
// grid_h/2 at tolerance 2*epsilon. VI kinds only.
bool verify_solution(const LocalSolution& s, const DualMap& T, const Region& C);

namespace detail {

// Shared worker used by the VI, QVI and stability solvers. Candidates are
// checked against competitors drawn from `pts`; candidate_mask restricts
// which points may appear as solutions (empty = all).
struct LocalSolveSpec {
    double h = 0;
    double r = 0;
    double eps = 0;
    bool minty = false;
    SolutionKind kind = SolutionKind::LSVI;
    double diam_cap = 0;  // radius doubling stops at this cap
};

SolutionSet solve_on_points(const DualMap& T, const std::vector<Vec>& pts,
                            const std::vector<char>& candidate_mask,
                            const LocalSolveSpec& spec);

void dedup_solutions(SolutionSet& set);

}  // namespace detail

}  // namespace locvi
