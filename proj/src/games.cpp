#include "locvi/games.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace locvi {

int GameSpec::joint_dim() const {
    int m = 0;
    for (const auto& f : followers) m += f.dim;
    return m;
}

Vec GameSpec::block(const Vec& y, std::size_t i) const {
    int off = 0;
    for (std::size_t j = 0; j < i; ++j) off += followers[j].dim;
    return Vec(y.begin() + off, y.begin() + off + followers[i].dim);
}

Vec GameSpec::block_complement(const Vec& y, std::size_t i) const {
    int off = 0;
    for (std::size_t j = 0; j < i; ++j) off += followers[j].dim;
    Vec r(y.begin(), y.begin() + off);
    r.insert(r.end(), y.begin() + off + followers[i].dim, y.end());
    return r;
}

Region GameSpec::product_K(const Vec& y, const Vec& x) const {
    Region r = followers[0].K(block_complement(y, 0), x);
    for (std::size_t i = 1; i < followers.size(); ++i)
        r = product(r, followers[i].K(block_complement(y, i), x));
    return r;
}

GameSpec GameSpec::linear_translation_game(std::vector<std::function<Vec(const Vec&)>> c,
                                           std::vector<Region> base,
                                           std::vector<std::vector<Vec>> Lhat,
                                           std::vector<std::vector<Vec>> Lcheck,
                                           std::function<double(const Vec&, const Vec&)> F,
                                           Region C1, Region C2) {
    GameSpec g;
    const std::size_t M = c.size();
    if (base.size() != M || Lhat.size() != M || Lcheck.size() != M)
        throw std::invalid_argument("linear game: follower data sizes disagree");
    std::vector<int> dims(M), offs(M, 0);
    int m = 0;
    for (std::size_t i = 0; i < M; ++i) {
        dims[i] = base[i].dim();
        offs[i] = m;
        m += dims[i];
    }
    for (std::size_t i = 0; i < M; ++i) {
        Follower f;
        f.dim = dims[i];
        // theta_i(y_i, y_-i, x) = c_i(x) . y_i
        f.theta = [ci = c[i]](const Vec& yi, const Vec&, const Vec& x) {
            return dot(ci(x), yi);
        };
        // K_i(y_-i, x) = base_i + Lhat_i y + Lcheck_i x; Lhat rows act on the
        // full y, so re-insert the own block as zeros.
        f.K = [bi = base[i], Lh = Lhat[i], Lc = Lcheck[i], off = offs[i],
               di = dims[i]](const Vec& y_minus, const Vec& x) {
            Vec y_full(y_minus.begin(), y_minus.begin() + off);
            for (int k = 0; k < di; ++k) y_full.push_back(0.0);
            y_full.insert(y_full.end(), y_minus.begin() + off, y_minus.end());
            Vec t(Lh.size(), 0.0);
            for (std::size_t rrow = 0; rrow < Lh.size(); ++rrow)
                t[rrow] = dot(Lh[rrow], y_full) + dot(Lc[rrow], x);
            return bi.translated(t);
        };
        g.followers.push_back(std::move(f));
    }
    g.leader_obj = std::move(F);
    g.C1 = std::move(C1);
    g.C2 = std::move(C2);
    LinearTag tag;
    tag.c = std::move(c);
    tag.base = std::move(base);
    tag.Lhat = std::move(Lhat);
    tag.Lcheck = std::move(Lcheck);
    g.linear = std::move(tag);
    return g;
}

double nikaido_isoda(const GameSpec& g, const Vec& y, const Vec& z, const Vec& x) {
    if (y.size() != z.size() || static_cast<int>(y.size()) != g.joint_dim())
        throw std::invalid_argument("nikaido_isoda: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < g.followers.size(); ++i) {
        const Vec ym = g.block_complement(y, i);
        s += g.followers[i].theta(g.block(y, i), ym, x) -
             g.followers[i].theta(g.block(z, i), ym, x);
    }
    return s;
}

namespace {

// Per-player competitor values: the grid of K_i(y_-i, x) clipped to the
// sup-norm interval of radius r around y_i, plus y_i itself. Including the
// own point keeps every per-player switch gain nonnegative even when the
// fixed point falls between grid lines of a translated set.
std::vector<Vec> player_competitors(const GameSpec& g, std::size_t i, const Vec& y,
                                    const Vec& x, double r, double h) {
    const Vec ym = g.block_complement(y, i);
    const Vec yi = g.block(y, i);
    std::vector<Vec> out{yi};
    for (const Vec& zi : grid(g.followers[i].K(ym, x), h).points)
        if (dist_inf(zi, yi) <= r + 1e-12) out.push_back(zi);
    return out;
}

}  // namespace

GapData gap(const GameSpec& g, const Vec& y, const Vec& x, double r, double h, double eps) {
    const Region K = g.product_K(y, x);
    if (distance(K, y) > fixed_point_tolerance(h, eps))
        throw std::invalid_argument("gap: y is not a fixed point of K(., x)");
    GapData d;
    d.x = x;
    d.y = y;
    d.radius = r;
    d.value = 0;
    // The feasible set and the switch gain both factor over players, so the
    // joint maximum is the sum of per-player maxima.
    for (std::size_t i = 0; i < g.followers.size(); ++i) {
        const Vec ym = g.block_complement(y, i);
        const Vec yi = g.block(y, i);
        const double own = g.followers[i].theta(yi, ym, x);
        double best = -std::numeric_limits<double>::infinity();
        Vec best_z;
        for (const Vec& zi : player_competitors(g, i, y, x, r, h)) {
            const double gain = own - g.followers[i].theta(zi, ym, x);
            if (gain > best + 1e-15 || (std::abs(gain - best) <= 1e-15 &&
                                        (best_z.empty() || lex_less(zi, best_z)))) {
                best = gain;
                best_z = zi;
            }
        }
        d.value += best;
        d.argmax.insert(d.argmax.end(), best_z.begin(), best_z.end());
    }
    return d;
}

std::vector<GapData> solve_lgnep(const GameSpec& g, const Vec& x, double h, double r,
                                 double eps) {
    std::vector<GapData> out;
    std::vector<Vec> fps;
    for (const Vec& y : grid(g.C2, h).points) {
        const Region K = g.product_K(y, x);
        if (distance(K, y) <= fixed_point_tolerance(h, eps)) fps.push_back(y);
    }
    for (const Vec& y : fps) {
        const GapData d = gap(g, y, x, r, h, eps);
        const bool gap_route = d.value <= eps;

        // Direct per-player route: y_i locally minimal for theta_i on
        // K_i(y_-i, x) within the own-block sup-norm interval of radius r.
        bool direct_route = true;
        for (std::size_t i = 0; i < g.followers.size() && direct_route; ++i) {
            const Vec ym = g.block_complement(y, i);
            const Vec yi = g.block(y, i);
            const double own = g.followers[i].theta(yi, ym, x);
            for (const Vec& zi : player_competitors(g, i, y, x, r, h)) {
                if (own > g.followers[i].theta(zi, ym, x) + eps) {
                    direct_route = false;
                    break;
                }
            }
        }
        if (gap_route != direct_route) throw std::runtime_error("NI mismatch");
        if (gap_route) out.push_back(d);
    }
    return out;
}

LinearGapModel calibrate_linear_gap(const GameSpec& g, double h, double r, double eps) {
    LinearGapModel m;
    if (!g.linear) {
        m.note = "game has no linear tag";
        return m;
    }
    // Reference fixed point: lexicographically smallest over the C2 grid at
    // the lexicographically smallest leader grid point.
    const Vec x0 = grid(g.C1, h).points.front();
    for (const Vec& y : grid(g.C2, h).points) {
        if (distance(g.product_K(y, x0), y) > fixed_point_tolerance(h, eps)) continue;
        const GapData d = gap(g, y, x0, r, h, eps);
        // zeta = z*(y, x) - L(y, x) blockwise.
        const auto& tag = *g.linear;
        int off = 0;
        for (std::size_t i = 0; i < g.followers.size(); ++i) {
            const int di = g.followers[i].dim;
            Vec li(di, 0.0);
            for (int k = 0; k < di; ++k)
                li[k] = dot(tag.Lhat[i][k], y) + dot(tag.Lcheck[i][k], x0);
            Vec zi(d.argmax.begin() + off, d.argmax.begin() + off + di);
            m.zeta.push_back(sub(zi, li));
            off += di;
        }
        m.valid = true;
        m.note = "calibrated at reference fixed point";
        return m;
    }
    m.note = "no fixed point found for calibration";
    return m;
}

double gap_closed_form(const GameSpec& g, const LinearGapModel& m, const Vec& y,
                       const Vec& x) {
    if (!g.linear || !m.valid) throw std::invalid_argument("closed-form gap unavailable");
    const auto& tag = *g.linear;
    double v = 0;
    for (std::size_t i = 0; i < g.followers.size(); ++i) {
        const int di = g.followers[i].dim;
        Vec li(di, 0.0);
        for (int k = 0; k < di; ++k)
            li[k] = dot(tag.Lhat[i][k], y) + dot(tag.Lcheck[i][k], x);
        const Vec yi = g.block(y, i);
        Vec diff = sub(sub(yi, m.zeta[i]), li);
        v += dot(tag.c[i](x), diff);
    }
    return v;
}

SllmfResult solve_sllmf(const GameSpec& g, double hx, double hy, double r, double eps) {
    if (!g.leader_obj) throw std::invalid_argument("solve_sllmf: leader objective missing");
    SllmfResult best;
    bool found = false;

    LinearGapModel model;
    if (g.linear) {
        model = calibrate_linear_gap(g, hy, r, eps);
        if (model.valid) {
            // Validate the closed form against the grid gap at the reference
            // leader point before trusting it.
            const Vec x0 = grid(g.C1, hx).points.front();
            for (const Vec& y : grid(g.C2, hy).points) {
                if (distance(g.product_K(y, x0), y) > fixed_point_tolerance(hy, eps)) continue;
                const double vg = gap(g, y, x0, r, hy, eps).value;
                const double vc = gap_closed_form(g, model, y, x0);
                if (std::abs(vg - vc) > eps + 2.0 * hy * (1.0 + norm(y))) {
                    model.valid = false;
                    model.note = "closed form disagreed with grid gap during validation";
                    break;
                }
            }
        }
    }

    for (const Vec& x : grid(g.C1, hx).points) {
        std::vector<GapData> eqs;
        try {
            eqs = solve_lgnep(g, x, hy, r, eps);
        } catch (const std::runtime_error&) {
            throw;
        }
        if (eqs.empty()) continue;  // infeasible leader point
        for (const GapData& d : eqs) {
            const double val = g.leader_obj(x, d.y);
            Vec xy = x;
            xy.insert(xy.end(), d.y.begin(), d.y.end());
            Vec best_xy = best.x;
            best_xy.insert(best_xy.end(), best.y.begin(), best.y.end());
            const bool better =
                !found || val < best.leader_value - 1e-12 ||
                (std::abs(val - best.leader_value) <= 1e-12 && lex_less(xy, best_xy));
            if (better) {
                best.x = x;
                best.y = d.y;
                best.leader_value = val;
                found = true;
            }
        }
        best.feasible_leader_points += 1;
    }
    if (!found) throw std::runtime_error("no follower equilibria anywhere");
    return best;
}

}  // namespace locvi
