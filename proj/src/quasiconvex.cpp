#include "locvi/quasiconvex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace locvi {

namespace {

constexpr double kStrictEps = 1e-12;

double strict_margin(double fx) { return kStrictEps * std::max(1.0, std::abs(fx)); }

}  // namespace

double QuasiconvexFn::operator()(const Vec& x) const {
    switch (kind) {
        case Kind::Affine:
            return dot(coef_, x) + offset_;
        case Kind::AbsAffine:
            return std::abs(dot(coef_, x) + offset_);
        case Kind::DistToPiece:
            return piece_->distance(x);
        case Kind::MaxAffine: {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& [c, d] : terms_) best = std::max(best, dot(c, x) + d);
            return best;
        }
        case Kind::Table1D: {
            const double t = std::clamp(x[0], tlo_, thi_);
            if (tvals_.size() == 1) return tvals_[0];
            const double step = (thi_ - tlo_) / static_cast<double>(tvals_.size() - 1);
            const double pos = (t - tlo_) / step;
            const std::size_t i =
                std::min(static_cast<std::size_t>(std::floor(pos)), tvals_.size() - 2);
            const double frac = pos - static_cast<double>(i);
            return tvals_[i] + frac * (tvals_[i + 1] - tvals_[i]);
        }
    }
    return 0;
}

double QuasiconvexFn::lipschitz() const {
    switch (kind) {
        case Kind::Affine:
        case Kind::AbsAffine:
            return norm(coef_);
        case Kind::DistToPiece:
            return 1.0;
        case Kind::MaxAffine: {
            double best = 0;
            for (const auto& [c, d] : terms_) best = std::max(best, norm(c));
            return best;
        }
        case Kind::Table1D: {
            if (tvals_.size() < 2) return 0.0;
            const double step = (thi_ - tlo_) / static_cast<double>(tvals_.size() - 1);
            double best = 0;
            for (std::size_t i = 0; i + 1 < tvals_.size(); ++i)
                best = std::max(best, std::abs(tvals_[i + 1] - tvals_[i]) / step);
            return best;
        }
    }
    return 0;
}

std::vector<Vec> QuasiconvexFn::gradient_sample(const Vec& x) const {
    switch (kind) {
        case Kind::Affine:
            return {coef_};
        case Kind::AbsAffine: {
            const double v = dot(coef_, x) + offset_;
            if (v > kStrictEps) return {coef_};
            if (v < -kStrictEps) return {scale(-1.0, coef_)};
            return {scale(-1.0, coef_), coef_};
        }
        case Kind::DistToPiece: {
            const Vec p = piece_->project(x);
            const double d = dist(x, p);
            if (d < 1e-9) return {Vec(x.size(), 0.0)};
            return {scale(1.0 / d, sub(x, p))};
        }
        case Kind::MaxAffine: {
            double best = (*this)(x);
            std::vector<Vec> grads;
            for (const auto& [c, d] : terms_)
                if (dot(c, x) + d >= best - strict_margin(best)) grads.push_back(c);
            return grads;
        }
        case Kind::Table1D: {
            if (tvals_.size() < 2 || x[0] < tlo_ || x[0] > thi_) return {Vec{0.0}};
            const double step = (thi_ - tlo_) / static_cast<double>(tvals_.size() - 1);
            const double pos = (x[0] - tlo_) / step;
            const std::size_t i =
                std::min(static_cast<std::size_t>(std::floor(pos)), tvals_.size() - 2);
            return {Vec{(tvals_[i + 1] - tvals_[i]) / step}};
        }
    }
    return {};
}

QuasiconvexFn QuasiconvexFn::translated(const Vec& shift) const {
    QuasiconvexFn g = *this;
    switch (kind) {
        case Kind::Affine:
        case Kind::AbsAffine:
            g.offset_ = offset_ - dot(coef_, shift);
            break;
        case Kind::DistToPiece:
            g.piece_ = piece_->translated(shift);
            break;
        case Kind::MaxAffine:
            for (auto& [c, d] : g.terms_) d -= dot(c, shift);
            break;
        case Kind::Table1D:
            g.tlo_ = tlo_ + shift[0];
            g.thi_ = thi_ + shift[0];
            break;
    }
    return g;
}

QuasiconvexFn QuasiconvexFn::affine(Vec c, double d) {
    QuasiconvexFn f;
    f.kind = Kind::Affine;
    f.n_ = static_cast<int>(c.size());
    f.coef_ = std::move(c);
    f.offset_ = d;
    return f;
}

QuasiconvexFn QuasiconvexFn::abs_affine(Vec a, double b) {
    QuasiconvexFn f;
    f.kind = Kind::AbsAffine;
    f.n_ = static_cast<int>(a.size());
    f.coef_ = std::move(a);
    f.offset_ = b;
    return f;
}

QuasiconvexFn QuasiconvexFn::dist_to(ConvexPiece piece) {
    QuasiconvexFn f;
    f.kind = Kind::DistToPiece;
    f.n_ = piece.dim();
    f.piece_ = std::move(piece);
    return f;
}

QuasiconvexFn QuasiconvexFn::max_affine(std::vector<std::pair<Vec, double>> terms) {
    if (terms.empty()) throw std::invalid_argument("max_affine needs at least one term");
    QuasiconvexFn f;
    f.kind = Kind::MaxAffine;
    f.n_ = static_cast<int>(terms.front().first.size());
    f.terms_ = std::move(terms);
    return f;
}

QuasiconvexFn QuasiconvexFn::table1d(double lo, double hi, std::vector<double> values) {
    if (values.empty() || hi <= lo) throw std::invalid_argument("invalid table");
    QuasiconvexFn f;
    f.kind = Kind::Table1D;
    f.n_ = 1;
    f.tlo_ = lo;
    f.thi_ = hi;
    f.tvals_ = std::move(values);
    return f;
}

AdjustedLevelData adjusted_sublevel(const QuasiconvexFn& f, const Vec& x, const Region& box,
                                    double h) {
    AdjustedLevelData data;
    data.x = x;
    data.fx = f(x);
    const double margin = strict_margin(data.fx);
    for (const Vec& y : grid(box, h).points) {
        const double fy = f(y);
        if (fy <= data.fx + margin) data.sublevel.push_back(y);
        if (fy < data.fx - margin) data.strict.push_back(y);
    }
    data.argmin = data.strict.empty();
    if (data.argmin) {
        data.adjusted = data.sublevel;
        data.rho = 0;
        return data;
    }
    data.rho = dist_to_set(x, data.strict);
    for (const Vec& y : data.sublevel)
        if (dist_to_set(y, data.strict) <= data.rho + 1e-9) data.adjusted.push_back(y);
    return data;
}

std::vector<Vec> unit_directions(int dim, int k) {
    std::vector<Vec> dirs;
    if (dim == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
        return dirs;
    }
    if (dim == 2) {
        for (int j = 0; j < k; ++j) {
            const double a = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(k);
            dirs.push_back({std::cos(a), std::sin(a)});
        }
        return dirs;
    }
    // Fibonacci sphere for dim 3; higher dims extend with axis signs.
    if (dim == 3) {
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < k; ++j) {
            const double z = 1.0 - 2.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(k);
            const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double a = golden * static_cast<double>(j);
            dirs.push_back({rad * std::cos(a), rad * std::sin(a), z});
        }
        return dirs;
    }
    for (int i = 0; i < dim; ++i)
        for (double s : {1.0, -1.0}) {
            Vec u(dim, 0.0);
            u[i] = s;
            dirs.push_back(u);
        }
    return dirs;
}

namespace {

std::vector<Vec> normal_slice(const AdjustedLevelData& data, int dim, int k, double eps) {
    std::vector<Vec> slice;
    for (const Vec& u : unit_directions(dim, k)) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const Vec& y : data.adjusted) worst = std::max(worst, dot(u, sub(y, data.x)));
        if (data.adjusted.empty()) worst = 0.0;
        if (worst <= eps) slice.push_back(u);
    }
    return slice;
}

std::vector<Vec> midpoint_closure(std::vector<Vec> vals) {
    // Coarse sample of the convex hull: pairwise midpoints at 0.02 spacing,
    // capped at 128 vectors. Hull-interior points are dominated in every
    // sup/min the solvers evaluate, so a coarse sample is sufficient; the
    // extreme points (the slice itself) are always kept.
    constexpr double spacing = 0.02;
    constexpr std::size_t cap = 128;
    bool grew = true;
    int rounds = 0;
    while (grew && rounds < 3 && vals.size() < cap) {
        grew = false;
        ++rounds;
        const std::size_t sz = vals.size();
        for (std::size_t i = 0; i < sz && vals.size() < cap; ++i)
            for (std::size_t j = i + 1; j < sz && vals.size() < cap; ++j) {
                Vec mid = scale(0.5, add(vals[i], vals[j]));
                bool fresh = true;
                for (const Vec& v : vals)
                    if (dist(v, mid) < spacing) {
                        fresh = false;
                        break;
                    }
                if (fresh) {
                    vals.push_back(std::move(mid));
                    grew = true;
                }
            }
    }
    std::sort(vals.begin(), vals.end(), lex_less);
    return vals;
}

}  // namespace

std::vector<Vec> normal_adjusted(const QuasiconvexFn& f, const Vec& x, const Region& box,
                                 double h, int k, double eps) {
    return normal_slice(adjusted_sublevel(f, x, box, h), box.dim(), k, eps);
}

CheckResult check_quasiconvex(const QuasiconvexFn& f, const Region& box, double h) {
    const auto pts = grid(box, h).points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double fi = f(pts[i]);
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double fj = f(pts[j]);
            const double cap = std::max(fi, fj);
            for (double t : {0.25, 0.5, 0.75}) {
                const Vec m = lerp(pts[i], pts[j], t);
                if (f(m) > cap + 1e-9 * std::max(1.0, std::abs(cap)))
                    return {false, {pts[i], pts[j], m}};
            }
        }
    }
    return {};
}

CheckResult check_semistrict(const QuasiconvexFn& f, const Region& box, double h) {
    const auto pts = grid(box, h).points;
    for (const Vec& x : pts) {
        const double fx = f(x);
        const double margin = strict_margin(fx);
        for (const Vec& y : pts) {
            if (f(y) >= fx - margin) continue;
            for (double t = 0.0; t < 0.95; t += 0.1) {
                const Vec m = lerp(y, x, t);
                if (f(m) >= fx - margin) return {false, {y, x, m}};
            }
        }
    }
    return {};
}

bool check_sub_boundarily_constant(const QuasiconvexFn& f, const Region& box, double h) {
    const auto pts = grid(box, h).points;
    const double delta = 0.5 * h;
    const int n = box.dim();
    for (const Vec& x : pts) {
        const AdjustedLevelData data = adjusted_sublevel(f, x, box, h);
        if (data.argmin) continue;
        const double margin = strict_margin(data.fx);
        // Continuum predicate for membership of the adjusted sublevel set.
        auto in_adjusted = [&](const Vec& z) {
            if (f(z) > data.fx + margin) return false;
            return dist_to_set(z, data.strict) <= data.rho + 1e-9;
        };
        auto interior_probe = [&](const Vec& z) {
            if (!in_adjusted(z)) return false;
            for (int i = 0; i < n; ++i)
                for (double s : {-1.0, 1.0}) {
                    Vec q = z;
                    q[i] += s * delta;
                    if (!in_adjusted(q)) return false;
                }
            return true;
        };
        for (const Vec& y : pts) {
            if (f(y) >= data.fx - margin) continue;
            bool met = false;
            for (double t = 0.0; t < 0.999 && !met; t += 0.05) met = interior_probe(lerp(y, x, t));
            if (!met) return false;
        }
    }
    return true;
}

DualMap ff_map(const QuasiconvexFn& f, const Region& box, double h, int k,
               bool exclude_zero) {
    if (!check_quasiconvex(f, box, h).ok)
        throw std::invalid_argument("ff_map: function is not quasiconvex on the box");
    if (!check_sub_boundarily_constant(f, box, h))
        throw std::invalid_argument("ff_map: function is not sub-boundarily constant on the box");

    double grid_min = std::numeric_limits<double>::infinity();
    for (const Vec& p : grid(box, h).points) grid_min = std::min(grid_min, f(p));
    const double eps_f = 2.0 * f.lipschitz() * h;
    const int dim = box.dim();

    DualMap T;
    T.dim = dim;
    T.exclude_zero = exclude_zero;
    T.images = [f, box, h, k, dim, grid_min, eps_f](const Vec& x) {
        const AdjustedLevelData data = adjusted_sublevel(f, x, box, h);
        std::vector<Vec> slice = normal_slice(data, dim, k, 1e-9);
        if (f(x) <= grid_min + eps_f) {
            std::vector<Vec> vals{Vec(x.size(), 0.0)};
            vals.insert(vals.end(), slice.begin(), slice.end());
            return vals;
        }
        return midpoint_closure(std::move(slice));
    };
    // The zero-filtered map itself serves as the compact selection away from
    // argmin points (values are midpoint-closed hull samples).
    T.submap = [T_images = T.images](const Vec&, const Vec& y) {
        std::vector<Vec> vals = T_images(y);
        std::vector<Vec> kept;
        for (Vec& v : vals)
            if (norm(v) >= kEpsZero) kept.push_back(std::move(v));
        return kept;
    };
    return T;
}

}  // namespace locvi
