#include "locvi/qvi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace locvi {

ConstraintMap ConstraintMap::constant(Region C) {
    ConstraintMap k;
    k.kind = Kind::Table;
    k.dim = C.dim();
    k.map = [C = std::move(C)](const Vec&) { return C; };
    return k;
}

ConstraintMap ConstraintMap::linear_translation(Region base, std::vector<Vec> L) {
    ConstraintMap k;
    k.kind = Kind::LinearTranslation;
    k.dim = base.dim();
    k.map = [base = std::move(base), L = std::move(L)](const Vec& x) {
        Vec t(L.size(), 0.0);
        for (std::size_t i = 0; i < L.size(); ++i) t[i] = dot(L[i], x);
        return base.translated(t);
    };
    return k;
}

ConstraintMap ConstraintMap::circle() {
    ConstraintMap k;
    k.kind = Kind::Analytic;
    k.dim = 1;
    k.map = [](const Vec& x) {
        const double v = std::clamp(x[0], -1.0, 1.0);
        const double w = std::sqrt(std::max(0.0, 1.0 - v * v));
        return Region::interval(-w, w);
    };
    return k;
}

ConstraintMap ConstraintMap::step() {
    ConstraintMap k;
    k.kind = Kind::Analytic;
    k.dim = 1;
    k.map = [](const Vec& x) {
        return x[0] < 1.0 ? Region::interval(0.0, 1.0) : Region::interval(0.0, 2.0);
    };
    return k;
}

double fixed_point_tolerance(double h, double eps) {
    return std::max(eps, h * (1.0 - 1e-9));
}

std::vector<Vec> fixed_points(const ConstraintMap& K, const Region& box, double h,
                              double eps) {
    const double tol = fixed_point_tolerance(h, eps);
    std::vector<Vec> fps;
    for (const Vec& x : grid(box, h).points)
        if (distance(K(x), x) <= tol) fps.push_back(x);
    return fps;
}

namespace {

std::vector<Vec> clip_ball(const std::vector<Vec>& pts, const Vec& c, double r) {
    std::vector<Vec> out;
    for (const Vec& p : pts)
        if (dist(p, c) <= r + 1e-12) out.push_back(p);
    return out;
}

// One-sided grid Hausdorff: the largest distance from a point of A to B.
// Points arrive lexicographically sorted, which gives a binary-search fast
// path in one dimension.
double one_sided_hausdorff(const std::vector<Vec>& A, const std::vector<Vec>& B,
                           Vec* worst) {
    double h = 0;
    if (B.empty()) return A.empty() ? 0 : std::numeric_limits<double>::infinity();
    const bool one_d = !A.empty() && A.front().size() == 1;
    std::vector<double> bs;
    if (one_d) {
        bs.reserve(B.size());
        for (const Vec& b : B) bs.push_back(b[0]);
    }
    for (const Vec& a : A) {
        double d;
        if (one_d) {
            const auto it = std::lower_bound(bs.begin(), bs.end(), a[0]);
            d = std::numeric_limits<double>::infinity();
            if (it != bs.end()) d = std::min(d, *it - a[0]);
            if (it != bs.begin()) d = std::min(d, a[0] - *(it - 1));
        } else {
            d = dist_to_set(a, B);
        }
        if (d > h) {
            h = d;
            if (worst) *worst = a;
        }
    }
    return h;
}

}  // namespace

bool repro_check_at_radius(const ConstraintMap& K, const Vec& z, double r, double h,
                           double eps_set, ReproWitness* witness) {
    const Region Kz = K(z);
    const auto base = clip_ball(grid(Kz, h).points, z, r);
    for (const Vec& zp : base) {
        const auto other = clip_ball(grid(K(zp), h).points, z, r);
        Vec worst_a, worst_b;
        const double d1 = one_sided_hausdorff(base, other, &worst_a);
        const double d2 = one_sided_hausdorff(other, base, &worst_b);
        if (std::max(d1, d2) > eps_set) {
            if (witness) {
                witness->z_prime = zp;
                witness->y = (d1 >= d2) ? worst_a : worst_b;
                witness->gap = std::max(d1, d2);
            }
            return false;
        }
    }
    return true;
}

ReproCertificate certify_local_repro(const ConstraintMap& K, const Vec& z, double r_max,
                                     double h, double eps_set) {
    if (distance(K(z), z) > fixed_point_tolerance(h, kEpsMembership))
        throw std::invalid_argument("certify_local_repro: z is not a fixed point of K");
    if (r_max < 4 * h) throw std::invalid_argument("certify_local_repro: r_max below 4h");

    ReproCertificate cert;
    cert.z = z;
    std::vector<double> radii;
    for (double r = r_max; r >= 4 * h - 1e-12; r /= 2.0) radii.push_back(r);
    if (radii.back() > 4 * h + 1e-12) radii.push_back(4 * h);

    ReproWitness last_witness;
    bool has_witness = false;
    for (double r : radii) {
        ReproWitness w;
        if (repro_check_at_radius(K, z, r, h, eps_set, &w)) {
            cert.passing_radii.push_back(r);
        } else {
            last_witness = w;
            has_witness = true;
        }
    }
    if (!cert.passing_radii.empty()) {
        cert.certified = true;
        cert.radius = *std::max_element(cert.passing_radii.begin(), cert.passing_radii.end());
    } else if (has_witness) {
        cert.witness = last_witness;
    }
    return cert;
}

std::optional<double> repro_from_interior_graph(const ConstraintMap& K, const Vec& z,
                                                double h, double r_max) {
    // Probe radii descending; accept the first r whose product ball (with a
    // one-grid-step safety margin) lies in the graph.
    for (double r = r_max; r >= 4 * h - 1e-12; r /= 2.0) {
        const double rho = r / std::sqrt(2.0);
        const Region ball = Region::box(sub(z, Vec(z.size(), rho + h)),
                                        add(z, Vec(z.size(), rho + h)));
        const auto pts = grid(ball, h).points;
        std::vector<Vec> inner;
        for (const Vec& u : pts)
            if (dist(u, z) <= rho + h) inner.push_back(u);
        bool ok = true;
        for (const Vec& u : inner) {
            const Region Ku = K(u);
            for (const Vec& v : inner)
                if (distance(Ku, v) > kEpsMembership) {
                    ok = false;
                    break;
                }
            if (!ok) break;
        }
        if (ok) return rho;
    }
    return std::nullopt;
}

namespace {

bool direct_check(const DualMap& T, const ConstraintMap& K, const Vec& x, double h,
                  double r, double eps, bool minty, Vec* mult) {
    const Region Kx = K(x);
    std::vector<Vec> nbrs;
    const double own_tol = h * (1.0 - 1e-9);  // sub-step competitors are x itself
    for (const Vec& y : grid(Kx, h).points)
        if (dist(y, x) <= r + 1e-12 && dist(y, x) >= own_tol) nbrs.push_back(y);
    if (!minty) {
        std::vector<Vec> duals;
        try {
            duals = T.eval(x);
        } catch (const std::runtime_error&) {
            return false;
        }
        for (const Vec& xstar : duals) {
            const double s = std::max(1.0, norm(xstar));
            bool all_ok = true;
            for (const Vec& y : nbrs)
                if (dot(xstar, sub(y, x)) < -eps * s) {
                    all_ok = false;
                    break;
                }
            if (all_ok) {
                if (mult) *mult = xstar;
                return true;
            }
        }
        return false;
    }
    for (const Vec& y : nbrs) {
        std::vector<Vec> duals;
        try {
            duals = T.eval(y);
        } catch (const std::runtime_error&) {
            continue;
        }
        for (const Vec& ystar : duals)
            if (dot(ystar, sub(y, x)) < -eps * std::max(1.0, norm(ystar))) return false;
    }
    return true;
}

SolutionSet solve_qvi_direct_impl(const DualMap& T, const ConstraintMap& K,
                                  const Region& box, const QviOptions& opt, bool minty) {
    SolutionSet out;
    out.kind = minty ? SolutionKind::LMVI : SolutionKind::LSVI;
    out.h = opt.h;
    for (const Vec& z : fixed_points(K, box, opt.h, opt.eps)) {
        Vec mult;
        if (direct_check(T, K, z, opt.h, opt.r, opt.eps, minty, &mult)) {
            LocalSolution s;
            s.x = z;
            if (!minty) s.multiplier = mult;
            s.radius = opt.r;
            s.epsilon = opt.eps;
            s.grid_h = opt.h;
            s.kind = out.kind;
            out.solutions.push_back(std::move(s));
        }
    }
    detail::dedup_solutions(out);
    return out;
}

SolutionSet solve_qvi_union_impl(const DualMap& T, const ConstraintMap& K, const Region& box,
                                 const QviOptions& opt, bool minty) {
    const double r_cert = opt.r_cert_max > 0 ? opt.r_cert_max : box.diameter() / 2.0;
    const double eps_set = opt.eps_set > 0 ? opt.eps_set : 2 * opt.h;

    SolutionSet out;
    out.kind = minty ? SolutionKind::LMVI : SolutionKind::LSVI;
    out.h = opt.h;
    std::size_t certified = 0, fallback = 0;

    for (const Vec& z : fixed_points(K, box, opt.h, opt.eps)) {
        ReproCertificate cert;
        if (r_cert >= 4 * opt.h)
            cert = certify_local_repro(K, z, r_cert, opt.h, eps_set);
        if (cert.certified) {
            ++certified;
            const double rz = cert.radius;
            const Region Kz = K(z);
            const auto pts = clip_ball(grid(Kz, opt.h).points, z, rz);
            // Candidates must keep the full VI radius inside the certified
            // neighbourhood so no competitor is clipped away artificially;
            // z itself is always admitted.
            std::vector<char> mask(pts.size(), 0);
            const double cand_r = std::max(0.0, rz - opt.r);
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (dist(pts[i], z) <= cand_r + 1e-12 || dist(pts[i], z) < 1e-12) mask[i] = 1;
            detail::LocalSolveSpec spec;
            spec.h = opt.h;
            spec.r = opt.r;
            spec.eps = opt.eps;
            spec.minty = minty;
            spec.kind = out.kind;
            spec.diam_cap = opt.r;  // no doubling past the certified set
            SolutionSet sub = detail::solve_on_points(T, pts, mask, spec);
            for (auto& s : sub.solutions) {
                // Re-verify the defining inequality at s.x against K(s.x):
                // certificates are only eps_set-accurate, so a grid-boundary
                // candidate of K(z) may lie strictly inside K(s.x).
                if (distance(K(s.x), s.x) > eps_set + kEpsMembership) continue;
                if (!direct_check(T, K, s.x, opt.h, opt.r, opt.eps, minty, nullptr))
                    continue;
                out.solutions.push_back(std::move(s));
            }
        } else {
            ++fallback;
            Vec mult;
            if (direct_check(T, K, z, opt.h, opt.r, opt.eps, minty, &mult)) {
                LocalSolution s;
                s.x = z;
                if (!minty) s.multiplier = mult;
                s.radius = opt.r;
                s.epsilon = opt.eps;
                s.grid_h = opt.h;
                s.kind = out.kind;
                out.solutions.push_back(std::move(s));
            }
        }
    }
    out.notes.push_back("certified fixed points: " + std::to_string(certified) +
                        ", direct fallbacks: " + std::to_string(fallback));
    detail::dedup_solutions(out);
    return out;
}

}  // namespace

SolutionSet solve_lsqvi(const DualMap& T, const ConstraintMap& K, const Region& box,
                        const QviOptions& opt) {
    return solve_qvi_union_impl(T, K, box, opt, false);
}

SolutionSet solve_lsqvi_direct(const DualMap& T, const ConstraintMap& K, const Region& box,
                               const QviOptions& opt) {
    return solve_qvi_direct_impl(T, K, box, opt, false);
}

SolutionSet solve_lmqvi(const DualMap& T, const ConstraintMap& K, const Region& box,
                        const QviOptions& opt) {
    return solve_qvi_union_impl(T, K, box, opt, true);
}

SolutionSet solve_lmqvi_direct(const DualMap& T, const ConstraintMap& K, const Region& box,
                               const QviOptions& opt) {
    return solve_qvi_direct_impl(T, K, box, opt, true);
}

}  // namespace locvi
