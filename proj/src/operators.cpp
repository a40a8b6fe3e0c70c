#include "locvi/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace locvi {

std::vector<Vec> DualMap::eval(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("dimension mismatch");
    std::vector<Vec> vals = images(x);
    if (exclude_zero) {
        std::vector<Vec> kept;
        for (Vec& v : vals)
            if (norm(v) >= kEpsZero) kept.push_back(std::move(v));
        vals = std::move(kept);
    }
    if (vals.empty()) throw std::runtime_error("operator vanishes");
    return vals;
}

DualMap DualMap::without_zero() const {
    DualMap t = *this;
    t.exclude_zero = true;
    return t;
}

DualMap DualMap::constant(Vec value) {
    DualMap t;
    t.dim = static_cast<int>(value.size());
    t.images = [v = std::move(value)](const Vec&) { return std::vector<Vec>{v}; };
    return t;
}

const char* to_string(MonotoneClass c) {
    switch (c) {
        case MonotoneClass::Pseudomonotone: return "pseudomonotone";
        case MonotoneClass::ProperlyQuasimonotone: return "properly-quasimonotone";
        case MonotoneClass::Quasimonotone: return "quasimonotone";
        default: return "none";
    }
}

namespace {

// Convex weight grids (step 1/4) for tuples of size 2 and 3, endpoints
// excluded: degenerate weights reduce to the pair/singleton case.
const double kPairWeights[] = {0.25, 0.5, 0.75};

struct GridImages {
    std::vector<Vec> pts;
    std::vector<std::vector<Vec>> duals;
};

GridImages evaluate_on_grid(const DualMap& T, const Region& C, double h) {
    GridImages g;
    g.pts = grid(C, h).points;
    g.duals.reserve(g.pts.size());
    for (const Vec& p : g.pts) g.duals.push_back(T.eval(p));
    return g;
}

bool conclusion_holds(const std::vector<Vec>& yduals, const Vec& v, double eps) {
    for (const Vec& ystar : yduals) {
        const double s = std::max(1.0, norm(ystar));
        if (dot(ystar, v) < -eps * s) return false;
    }
    return true;
}

}  // namespace

MonotonicityReport classify_monotonicity(const DualMap& T, const Region& C, double h,
                                         double eps) {
    GridImages g = evaluate_on_grid(T, C, h);
    if (g.pts.empty()) throw std::invalid_argument("empty grid");
    const std::size_t m = g.pts.size();

    MonotonicityReport rep;
    rep.quasi_ok = true;
    rep.pseudo_ok = true;

    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            const Vec v = sub(g.pts[j], g.pts[i]);
            bool premise_quasi = false, premise_pseudo = false;
            Vec trigger;
            for (const Vec& xstar : g.duals[i]) {
                const double val = dot(xstar, v);
                const double s = std::max(1.0, norm(xstar));
                if (val > eps * s) {
                    premise_quasi = true;
                    trigger = xstar;
                }
                if (val >= 0) premise_pseudo = true;
                if (premise_quasi && premise_pseudo) break;
            }
            if (!premise_quasi && !premise_pseudo) continue;
            const bool concl = conclusion_holds(g.duals[j], v, eps);
            if (!concl) {
                if (premise_pseudo) rep.pseudo_ok = false;
                if (premise_quasi && rep.quasi_ok) {
                    rep.quasi_ok = false;
                    Vec bad;
                    for (const Vec& ystar : g.duals[j])
                        if (dot(ystar, v) < -eps * std::max(1.0, norm(ystar))) {
                            bad = ystar;
                            break;
                        }
                    rep.witness = std::make_tuple(g.pts[i], g.pts[j], trigger, bad);
                }
            }
        }
    }

    // Proper quasimonotonicity over tuples of size <= dim+1 (Caratheodory
    // bound) with simplex-grid convex combinations.
    rep.proper_ok = true;
    const int n = C.dim();
    auto tuple_ok = [&](const std::vector<std::size_t>& idx, const Vec& x) {
        for (std::size_t i : idx) {
            bool all_ok = true;
            for (const Vec& xs : g.duals[i]) {
                if (dot(xs, sub(g.pts[i], x)) < -eps * std::max(1.0, norm(xs))) {
                    all_ok = false;
                    break;
                }
            }
            if (all_ok) return true;
        }
        return false;
    };
    for (std::size_t i = 0; i < m && rep.proper_ok; ++i) {
        for (std::size_t j = i + 1; j < m && rep.proper_ok; ++j) {
            for (double w : kPairWeights) {
                const Vec x = lerp(g.pts[i], g.pts[j], w);
                if (!tuple_ok({i, j}, x)) {
                    rep.proper_ok = false;
                    break;
                }
            }
            if (n >= 2 && rep.proper_ok) {
                for (std::size_t k = j + 1; k < m && rep.proper_ok; ++k) {
                    for (double a = 0.25; a <= 0.75; a += 0.25) {
                        for (double b = 0.25; a + b <= 0.9; b += 0.25) {
                            const double c = 1.0 - a - b;
                            Vec x = add(add(scale(a, g.pts[i]), scale(b, g.pts[j])),
                                        scale(c, g.pts[k]));
                            if (!tuple_ok({i, j, k}, x)) {
                                rep.proper_ok = false;
                                break;
                            }
                        }
                        if (!rep.proper_ok) break;
                    }
                }
            }
        }
    }

    if (rep.pseudo_ok)
        rep.cls = MonotoneClass::Pseudomonotone;
    else if (rep.proper_ok)
        rep.cls = MonotoneClass::ProperlyQuasimonotone;
    else if (rep.quasi_ok)
        rep.cls = MonotoneClass::Quasimonotone;
    else
        rep.cls = MonotoneClass::None;
    return rep;
}

bool check_upper_sign_continuity(const DualMap& T, const Region& C, const Vec& x,
                                 const Vec& y, const std::vector<double>& t_grid,
                                 double eps) {
    if (!contains(C, x, 10 * kEpsMembership) || !contains(C, y, 10 * kEpsMembership))
        throw std::invalid_argument("segment endpoints must lie in C");
    for (double t : t_grid) {
        if (t <= 0.0 || t >= 1.0) throw std::invalid_argument("t_grid must lie in (0,1)");
        if (!contains(C, lerp(x, y, t), 10 * kEpsMembership))
            throw std::invalid_argument("segment leaves C");
    }

    auto values_at = [&](const Vec& base, const Vec& at) {
        if (T.has_submap()) return T.submap(base, at);
        return T.eval(at);
    };

    const Vec v = sub(y, x);
    for (double t : t_grid) {
        const Vec xt = lerp(x, y, t);
        double inf = std::numeric_limits<double>::infinity();
        for (const Vec& d : values_at(x, xt)) inf = std::min(inf, dot(d, v));
        if (inf < -eps) return true;  // antecedent fails: implication vacuous
    }
    double sup = -std::numeric_limits<double>::infinity();
    for (const Vec& d : values_at(x, x)) sup = std::max(sup, dot(d, v));
    return sup >= -eps;
}

}  // namespace locvi
