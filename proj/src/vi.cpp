#include "locvi/vi.hpp"

#include <algorithm>
#include <stdexcept>

namespace locvi {

const char* to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::LSVI: return "lsvi";
        case SolutionKind::SVI: return "svi";
        case SolutionKind::LMVI: return "lmvi";
        case SolutionKind::MVI: return "mvi";
        case SolutionKind::LSVIStar: return "lsvi-star";
        case SolutionKind::WeakInt: return "weak-int";
        case SolutionKind::LOpt: return "lopt";
        case SolutionKind::LQOpt: return "lqopt";
    }
    return "?";
}

std::vector<Vec> SolutionSet::points() const {
    std::vector<Vec> pts;
    pts.reserve(solutions.size());
    for (const auto& s : solutions) pts.push_back(s.x);
    return pts;
}

bool SolutionSet::contains_point(const Vec& p, double tol) const {
    for (const auto& s : solutions)
        if (dist(s.x, p) <= tol) return true;
    return false;
}

bool same_points(const SolutionSet& a, const SolutionSet& b, double tol) {
    for (const auto& s : a.solutions)
        if (!b.contains_point(s.x, tol)) return false;
    for (const auto& s : b.solutions)
        if (!a.contains_point(s.x, tol)) return false;
    return true;
}

namespace detail {

namespace {

std::vector<std::size_t> neighbors_within(const std::vector<Vec>& pts, const Vec& x,
                                          double r) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < pts.size(); ++j)
        if (dist(pts[j], x) <= r + 1e-12) idx.push_back(j);
    return idx;
}

}  // namespace

SolutionSet solve_on_points(const DualMap& T, const std::vector<Vec>& pts,
                            const std::vector<char>& candidate_mask,
                            const LocalSolveSpec& spec) {
    SolutionSet out;
    out.kind = spec.kind;
    out.h = spec.h;
    if (pts.empty()) return out;

    // Evaluate duals once per point; points where a zero-filtered operator
    // vanishes are excluded as candidates (and competitors for Minty kinds).
    std::vector<std::vector<Vec>> duals(pts.size());
    std::vector<char> ok(pts.size(), 1);
    std::size_t vanished = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        try {
            duals[i] = T.eval(pts[i]);
        } catch (const std::runtime_error&) {
            ok[i] = 0;
            ++vanished;
        }
    }
    if (vanished > 0)
        out.notes.push_back("operator vanished at " + std::to_string(vanished) +
                            " grid points (excluded)");

    const bool minty = spec.minty;
    // Competitors strictly closer than one grid step are the candidate
    // itself at grid resolution (same rationale as solution dedup) and are
    // skipped.
    const double own_tol = spec.h * (1.0 - 1e-9);
    auto passes_at = [&](std::size_t i, double radius, Vec* mult) {
        const Vec& x = pts[i];
        const auto nbrs = neighbors_within(pts, x, radius);
        if (!minty) {
            for (const Vec& xstar : duals[i]) {
                const double s = std::max(1.0, norm(xstar));
                bool all_ok = true;
                for (std::size_t j : nbrs) {
                    if (dist(pts[j], x) < own_tol) continue;
                    if (dot(xstar, sub(pts[j], x)) < -spec.eps * s) {
                        all_ok = false;
                        break;
                    }
                }
                if (all_ok) {
                    if (mult) *mult = xstar;
                    return true;
                }
            }
            return false;
        }
        for (std::size_t j : nbrs) {
            if (!ok[j]) continue;
            if (dist(pts[j], x) < own_tol) continue;
            for (const Vec& ystar : duals[j]) {
                const double s = std::max(1.0, norm(ystar));
                if (dot(ystar, sub(pts[j], x)) < -spec.eps * s) return false;
            }
        }
        return true;
    };

    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!ok[i]) continue;
        if (!candidate_mask.empty() && !candidate_mask[i]) continue;
        Vec mult;
        if (!passes_at(i, spec.r, minty ? nullptr : &mult)) continue;
        // Extend the certificate by radius doubling up to the diameter cap.
        double best_r = spec.r;
        double trial = 2.0 * spec.r;
        while (trial <= spec.diam_cap + 1e-12) {
            Vec m2;
            if (!passes_at(i, trial, minty ? nullptr : &m2)) break;
            best_r = trial;
            if (!minty) mult = m2;
            trial *= 2.0;
        }
        LocalSolution s;
        s.x = pts[i];
        if (!minty) s.multiplier = mult;
        s.radius = best_r;
        s.epsilon = spec.eps;
        s.grid_h = spec.h;
        s.kind = spec.kind;
        out.solutions.push_back(std::move(s));
    }
    dedup_solutions(out);
    return out;
}

void dedup_solutions(SolutionSet& set) {
    std::sort(set.solutions.begin(), set.solutions.end(),
              [](const LocalSolution& a, const LocalSolution& b) { return lex_less(a.x, b.x); });
    std::vector<LocalSolution> kept;
    const double merge_tol = set.h * (1.0 - 1e-9);  // robust to k*h rounding
    for (auto& s : set.solutions) {
        bool merged = false;
        for (auto& k : kept) {
            if (dist(k.x, s.x) < merge_tol) {
                if (s.radius > k.radius) k = s;
                merged = true;
                break;
            }
        }
        if (!merged) kept.push_back(std::move(s));
    }
    set.solutions = std::move(kept);
}

}  // namespace detail

namespace {

SolutionSet solve_region(const DualMap& T, const Region& C, double h, double r, double eps,
                         bool minty, SolutionKind kind) {
    const auto pts = grid(C, h).points;
    if (pts.empty()) throw std::invalid_argument("empty grid");
    detail::LocalSolveSpec spec;
    spec.h = h;
    spec.r = r;
    spec.eps = eps;
    spec.minty = minty;
    spec.kind = kind;
    spec.diam_cap = C.diameter();
    return detail::solve_on_points(T, pts, {}, spec);
}

}  // namespace

SolutionSet solve_lsvi(const DualMap& T, const Region& C, double h, double r, double eps) {
    if (r < 2 * h) throw std::invalid_argument("local radius must be at least 2h");
    return solve_region(T, C, h, r, eps, false,
                        T.exclude_zero ? SolutionKind::LSVIStar : SolutionKind::LSVI);
}

SolutionSet solve_svi(const DualMap& T, const Region& C, double h, double eps) {
    return solve_region(T, C, h, C.diameter() + h, eps, false, SolutionKind::SVI);
}

SolutionSet solve_lmvi(const DualMap& T, const Region& C, double h, double r, double eps) {
    if (r < 2 * h) throw std::invalid_argument("local radius must be at least 2h");
    return solve_region(T, C, h, r, eps, true, SolutionKind::LMVI);
}

SolutionSet solve_mvi(const DualMap& T, const Region& C, double h, double eps) {
    return solve_region(T, C, h, C.diameter() + h, eps, true, SolutionKind::MVI);
}

bool verify_solution(const LocalSolution& s, const DualMap& T, const Region& C) {
    const double h2 = s.grid_h / 2.0;
    const double tol = 2.0 * s.epsilon;
    const auto pts = grid(C, h2).points;
    std::vector<Vec> nbrs;
    for (const Vec& y : pts)
        if (dist(y, s.x) <= s.radius + 1e-12) nbrs.push_back(y);

    switch (s.kind) {
        case SolutionKind::LSVI:
        case SolutionKind::SVI:
        case SolutionKind::LSVIStar: {
            if (!s.multiplier) return false;
            if (s.kind == SolutionKind::LSVIStar && norm(*s.multiplier) < kEpsZero) return false;
            const double sc = std::max(1.0, norm(*s.multiplier));
            for (const Vec& y : nbrs)
                if (dot(*s.multiplier, sub(y, s.x)) < -tol * sc) return false;
            return contains(C, s.x, tol + kEpsMembership);
        }
        case SolutionKind::LMVI:
        case SolutionKind::MVI: {
            for (const Vec& y : nbrs) {
                std::vector<Vec> duals;
                try {
                    duals = T.eval(y);
                } catch (const std::runtime_error&) {
                    continue;
                }
                for (const Vec& ystar : duals)
                    if (dot(ystar, sub(y, s.x)) < -tol * std::max(1.0, norm(ystar)))
                        return false;
            }
            return contains(C, s.x, tol + kEpsMembership);
        }
        default:
            throw std::invalid_argument("verify_solution handles VI kinds only");
    }
}

}  // namespace locvi
