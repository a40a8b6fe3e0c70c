#pragma once

#include <functional>
#include <optional>
#include <tuple>

#include "locvi/geometry.hpp"

namespace locvi {

// A sampled set-valued dual map T: point -> finite list of dual vectors.
// Evaluators must be deterministic and pure. The optional submap models a
// compact convex-valued selection inside T \ {0} (the local
// upper-sign-continuity witness); submap(x, y) is the value at y of the
// selection attached to the base point x.
struct DualMap {
    int dim = 0;
    std::function<std::vector<Vec>(const Vec&)> images;
    bool exclude_zero = false;
    std::function<std::vector<Vec>(const Vec&, const Vec&)> submap;  // may be empty

    // Sampled T(x), filtered by the zero-exclusion flag. Throws
    // "operator vanishes" when the filtered image is empty.
    std::vector<Vec> eval(const Vec& x) const;
    bool has_submap() const { return static_cast<bool>(submap); }
    DualMap without_zero() const;

    static DualMap constant(Vec value);
};

enum class MonotoneClass { Pseudomonotone, ProperlyQuasimonotone, Quasimonotone, None };

const char* to_string(MonotoneClass c);

struct MonotonicityReport {
    MonotoneClass cls = MonotoneClass::None;
    // For class None: a re-checkable quasimonotonicity violation
    // (x, y, x* with <x*,y-x> > eps, y* with <y*,y-x> < -eps).
    std::optional<std::tuple<Vec, Vec, Vec, Vec>> witness;
    bool pseudo_ok = false;
    bool proper_ok = false;
    bool quasi_ok = false;
};

// Tests the three generalized-monotonicity definitions on the h-grid of C and
// returns the strongest class that passes. The strictness margin eps applies
// to the ">" premise of quasimonotonicity; ">=" conclusions are tested at
// >= -eps. Proper quasimonotonicity enumerates tuples of size <= dim+1 with
// convex weights on a fixed simplex grid.
MonotonicityReport classify_monotonicity(const DualMap& T, const Region& C, double h,
                                         double eps);

// Upper sign-continuity along the segment [x, y] inside convex C: if the
// sampled infimum inequality holds at every t in t_grid, the supremum
// inequality must hold at x. When T carries a submap, the submap values are
// used (the compact-selection sense); otherwise the raw images are used
// (the neighbourhood sense). Vacuously true when the antecedent fails.
bool check_upper_sign_continuity(const DualMap& T, const Region& C, const Vec& x,
                                 const Vec& y, const std::vector<double>& t_grid,
                                 double eps);

}  // namespace locvi
