#include "locvi/quasiopt.hpp"

#include <algorithm>
#include <stdexcept>

namespace locvi {

QuasiOptProblem make_qopt(const QuasiconvexFn& f, ConstraintMap K, Region box, double h,
                          double r, int k) {
    QuasiOptProblem P;
    P.f = [f](const Vec& x) { return f(x); };
    const DualMap Ff = ff_map(f, box, h, k);
    P.f_duals = Ff.images;
    P.f_lip = f.lipschitz();
    P.K = std::move(K);
    P.box = std::move(box);
    P.h = h;
    P.r = r;
    return P;
}

namespace {

bool local_min_on(const std::function<double(const Vec&)>& f, const Vec& x,
                  const std::vector<Vec>& competitors, double h, double r, double eps) {
    const double fx = f(x);
    const double own_tol = h * (1.0 - 1e-9);  // sub-step competitors are x itself
    for (const Vec& y : competitors) {
        const double d = dist(y, x);
        if (d > r + 1e-12 || d < own_tol) continue;
        if (fx > f(y) + eps) return false;
    }
    return true;
}

}  // namespace

SolutionSet solve_lqopt_direct(const QuasiOptProblem& P, double eps) {
    SolutionSet out;
    out.kind = SolutionKind::LQOpt;
    out.h = P.h;
    for (const Vec& x : fixed_points(P.K, P.box, P.h, eps)) {
        const auto pts = grid(P.K(x), P.h).points;
        if (local_min_on(P.f, x, pts, P.h, P.r, eps)) {
            LocalSolution s;
            s.x = x;
            s.radius = P.r;
            s.epsilon = eps;
            s.grid_h = P.h;
            s.kind = SolutionKind::LQOpt;
            out.solutions.push_back(std::move(s));
        }
    }
    detail::dedup_solutions(out);
    return out;
}

SolutionSet solve_lqopt_union(const QuasiOptProblem& P, double eps, UnionInner inner,
                              double r_cert_max, bool crosscheck_enabled) {
    const double r_cert = r_cert_max > 0 ? r_cert_max : P.box.diameter() / 2.0;
    const double eps_set = 2 * P.h;

    SolutionSet out;
    out.kind = SolutionKind::LQOpt;
    out.h = P.h;

    DualMap Ff;
    const bool want_vi = inner != UnionInner::Opt;
    if (want_vi) {
        if (!P.f_duals) throw std::invalid_argument("solve_lqopt_union: VI mode needs f_duals");
        Ff.dim = P.box.dim();
        Ff.images = P.f_duals;
    }

    std::vector<Vec> opt_union, vi_union;
    for (const Vec& z : fixed_points(P.K, P.box, P.h, eps)) {
        ReproCertificate cert;
        if (r_cert >= 4 * P.h) cert = certify_local_repro(P.K, z, r_cert, P.h, eps_set);
        if (!cert.certified) {
            const auto pts = grid(P.K(z), P.h).points;
            if (local_min_on(P.f, z, pts, P.h, P.r, eps)) {
                opt_union.push_back(z);
                vi_union.push_back(z);
            }
            continue;
        }
        const double rz = cert.radius;
        const Region Kz = P.K(z);
        std::vector<Vec> pts;
        for (const Vec& p : grid(Kz, P.h).points)
            if (dist(p, z) <= rz + 1e-12) pts.push_back(p);
        const double cand_r = std::max(0.0, rz - P.r);

        if (inner != UnionInner::VI) {
            for (const Vec& x : pts) {
                if (dist(x, z) > cand_r + 1e-12 && dist(x, z) >= 1e-12) continue;
                if (local_min_on(P.f, x, pts, P.h, P.r, eps)) opt_union.push_back(x);
            }
        }
        if (want_vi) {
            std::vector<char> mask(pts.size(), 0);
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (dist(pts[i], z) <= cand_r + 1e-12 || dist(pts[i], z) < 1e-12) mask[i] = 1;
            detail::LocalSolveSpec spec;
            spec.h = P.h;
            spec.r = P.r;
            spec.eps = eps;
            spec.minty = false;
            spec.kind = SolutionKind::LSVI;
            spec.diam_cap = P.r;
            for (const auto& s : detail::solve_on_points(Ff, pts, mask, spec).solutions)
                vi_union.push_back(s.x);
        }
    }
    // The cross-check compares the aggregated unions; the same band point can
    // surface under different fixed points in the two routes.
    if (inner == UnionInner::Both && crosscheck_enabled) {
        const double tol = P.crosscheck_tol() + 1e-12;
        auto covered = [&](const std::vector<Vec>& a, const std::vector<Vec>& b) {
            for (const Vec& p : a)
                if (dist_to_set(p, b) > tol) return false;
            return true;
        };
        if (!covered(opt_union, vi_union) || !covered(vi_union, opt_union))
            throw std::runtime_error("reformulation mismatch");
    }
    const std::vector<Vec>& chosen = (inner == UnionInner::VI) ? vi_union : opt_union;
    for (const Vec& x : chosen) {
        // Re-verify against the candidate's own constraint set: certificates
        // are only eps_set-accurate near the value boundaries.
        if (distance(P.K(x), x) > eps_set + kEpsMembership) continue;
        if (inner == UnionInner::VI) {
            DualMap FfK;
            FfK.dim = P.box.dim();
            FfK.images = P.f_duals;
            bool pass = false;
            std::vector<Vec> duals;
            try {
                duals = FfK.eval(x);
            } catch (const std::runtime_error&) {
                duals.clear();
            }
            std::vector<Vec> nbrs;
            const double own_tol = P.h * (1.0 - 1e-9);
            for (const Vec& y : grid(P.K(x), P.h).points) {
                const double d = dist(y, x);
                if (d <= P.r + 1e-12 && d >= own_tol) nbrs.push_back(y);
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
                    pass = true;
                    break;
                }
            }
            if (!pass) continue;
        } else {
            if (!local_min_on(P.f, x, grid(P.K(x), P.h).points, P.h, P.r, eps)) continue;
        }
        LocalSolution s;
        s.x = x;
        s.radius = P.r;
        s.epsilon = eps;
        s.grid_h = P.h;
        s.kind = SolutionKind::LQOpt;
        out.solutions.push_back(std::move(s));
    }
    detail::dedup_solutions(out);
    return out;
}

}  // namespace locvi
