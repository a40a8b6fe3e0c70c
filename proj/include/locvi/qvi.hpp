#pragma once

#include <functional>
#include <optional>

#include "locvi/vi.hpp"

namespace locvi {

// Parametric constraint map K: point -> Region. Evaluators must be
// deterministic and return nonempty compact regions on the working box.
struct ConstraintMap {
    enum class Kind { Table, Separable, LinearTranslation, Analytic };

    Kind kind = Kind::Analytic;
    int dim = 0;
    std::function<Region(const Vec&)> map;

    Region operator()(const Vec& x) const { return map(x); }

    static ConstraintMap constant(Region C);
    // K(x) = base + L*x (rows of L are per-output-coordinate).
    static ConstraintMap linear_translation(Region base, std::vector<Vec> L);
    // The closed-disk slice map K(x) = [-sqrt(1-x^2), sqrt(1-x^2)] on [-1,1].
    static ConstraintMap circle();
    // The two-branch interval map K(x) = [0,1] for x < 1 and [0,2] for x >= 1.
    static ConstraintMap step();
};

// Grid fixed points of K on the box: points x with d(x, K(x)) below
// max(eps, h) (the h term admits fixed points whose boundary falls between
// grid lines, e.g. curved maps). The strict comparison keeps exact
// lattice/box maps from absorbing neighbours at distance exactly h.
std::vector<Vec> fixed_points(const ConstraintMap& K, const Region& box, double h,
                              double eps);

struct ReproWitness {
    Vec z_prime;  // the competing point in K(z) near z
    Vec y;        // a point witnessing K(z) cap U != K(z') cap U
    double gap = 0;
};

struct ReproCertificate {
    Vec z;
    double radius = 0;  // largest passing radius (certified only)
    bool certified = false;
    std::vector<double> passing_radii;
    std::optional<ReproWitness> witness;  // present when refuted
};

// Single-radius reproducibility check: grid Hausdorff distance between
// K(z) cap B(z,r) and K(z') cap B(z,r) must stay within eps_set for every
// grid z' in K(z) cap B(z,r).
bool repro_check_at_radius(const ConstraintMap& K, const Vec& z, double r, double h,
                           double eps_set, ReproWitness* witness = nullptr);

// Searches radii r_max, r_max/2, ... down to 4h (4h itself is appended when
// the chain passes below it); records every passing radius and certifies at
// the largest. Refuted certificates carry the witness found at the smallest
// tested radius. Throws if z is not a fixed point.
ReproCertificate certify_local_repro(const ConstraintMap& K, const Vec& z, double r_max,
                                     double h, double eps_set);

// Looks for r such that the product ball B(z, r/sqrt(2)) x B(z, r/sqrt(2))
// lies inside the graph of K (grid-checked with a one-step margin); returns
// r/sqrt(2) when found.
std::optional<double> repro_from_interior_graph(const ConstraintMap& K, const Vec& z,
                                                double h, double r_max);

enum class QviMethod { Union, Direct, Both };

struct QviOptions {
    double h = 0;
    double r = 0;          // local VI radius (2h recommended; see notes)
    double eps = 1e-7;
    double r_cert_max = 0; // 0 = box diameter / 2
    double eps_set = 0;    // 0 = 2h
};

// Stampacchia QVI local solutions via the union decomposition over certified
// fixed points, with the direct definition as fallback at uncertified ones.
SolutionSet solve_lsqvi(const DualMap& T, const ConstraintMap& K, const Region& box,
                        const QviOptions& opt);
// Direct-definition solver (every grid fixed point checked in its own K(x)).
SolutionSet solve_lsqvi_direct(const DualMap& T, const ConstraintMap& K, const Region& box,
                               const QviOptions& opt);
SolutionSet solve_lmqvi(const DualMap& T, const ConstraintMap& K, const Region& box,
                        const QviOptions& opt);
SolutionSet solve_lmqvi_direct(const DualMap& T, const ConstraintMap& K, const Region& box,
                               const QviOptions& opt);

// Tolerance used for fixed-point membership: max(eps, h*(1-1e-9)).
double fixed_point_tolerance(double h, double eps);

}  // namespace locvi
