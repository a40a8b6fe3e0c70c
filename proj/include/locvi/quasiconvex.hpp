#pragma once

#include <optional>
#include <utility>

#include "locvi/operators.hpp"

namespace locvi {

// Evaluable scalar function from a fixed catalog. Every kind is total on R^n
// and quasiconvex by construction except Table1D, which must pass
// check_quasiconvex before being used in ff_map.
class QuasiconvexFn {
  public:
    enum class Kind { Affine, AbsAffine, DistToPiece, MaxAffine, Table1D };

    Kind kind = Kind::Affine;

    double operator()(const Vec& x) const;
    int dim() const { return n_; }
    double lipschitz() const;
    // Subdifferential-style gradient samples (kink points return the extreme
    // slopes; interior of a distance function's piece returns {0}).
    std::vector<Vec> gradient_sample(const Vec& x) const;
    QuasiconvexFn translated(const Vec& shift) const;  // x -> f(x - shift)

    static QuasiconvexFn affine(Vec c, double d);
    static QuasiconvexFn abs_affine(Vec a, double b);
    static QuasiconvexFn dist_to(ConvexPiece piece);
    static QuasiconvexFn max_affine(std::vector<std::pair<Vec, double>> terms);
    // Piecewise-linear interpolation of values on a uniform 1-D node grid,
    // clamped outside [lo, hi].
    static QuasiconvexFn table1d(double lo, double hi, std::vector<double> values);

    const Vec& coef() const { return coef_; }
    double offset() const { return offset_; }
    const std::vector<std::pair<Vec, double>>& terms() const { return terms_; }
    const std::optional<ConvexPiece>& piece() const { return piece_; }

  private:
    int n_ = 0;
    Vec coef_;
    double offset_ = 0;
    std::optional<ConvexPiece> piece_;
    std::vector<std::pair<Vec, double>> terms_;
    double tlo_ = 0, thi_ = 0;
    std::vector<double> tvals_;
};

// Grid snapshot of the sublevel machinery at a base point x: S_f(x), the
// strict sublevel set, rho = d(x, strict set), and the adjusted set.
struct AdjustedLevelData {
    Vec x;
    double fx = 0;
    std::vector<Vec> sublevel;
    std::vector<Vec> strict;
    std::vector<Vec> adjusted;
    double rho = 0;
    bool argmin = false;  // strict sublevel empty on the grid
};

AdjustedLevelData adjusted_sublevel(const QuasiconvexFn& f, const Vec& x, const Region& box,
                                    double h);

// k uniformly distributed unit directions (2 in 1-D, circle in 2-D,
// Fibonacci sphere in 3-D and up). Deterministic.
std::vector<Vec> unit_directions(int dim, int k);

// Unit-sphere slice of the adjusted normal cone: directions u with
// max_{y in S_adj} <u, y-x> <= eps. An empty result means the cone is {0}.
std::vector<Vec> normal_adjusted(const QuasiconvexFn& f, const Vec& x, const Region& box,
                                 double h, int k, double eps = 1e-9);

struct CheckResult {
    bool ok = true;
    std::vector<Vec> witness;  // violating points, empty when ok
};

// f(m) <= max(f(y), f(z)) + eps over grid pairs and segment samples.
CheckResult check_quasiconvex(const QuasiconvexFn& f, const Region& box, double h);
// f(y) < f(x) implies f strictly below f(x) on [y,x).
CheckResult check_semistrict(const QuasiconvexFn& f, const Region& box, double h);
// f(y) < f(x) implies [y,x) meets the interior of the adjusted sublevel set
// at x (interior probed at margin h/2 against the continuum predicate).
bool check_sub_boundarily_constant(const QuasiconvexFn& f, const Region& box, double h);

// The normalized adjusted-normal map: at grid-detected argmin points the
// image is {0} plus the sphere slice (a sample of the cone intersected with
// the unit ball); elsewhere it is the midpoint-closed sample of the convex
// hull of the slice. Throws if f fails the quasiconvexity or
// sub-boundarily-constant checks on the box.
DualMap ff_map(const QuasiconvexFn& f, const Region& box, double h, int k = 64,
               bool exclude_zero = false);

}  // namespace locvi
