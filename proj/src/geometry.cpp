#include "locvi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace locvi {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool is_lattice_dim(const std::vector<int>& dims, int i) {
    return std::binary_search(dims.begin(), dims.end(), i);
}

double nearest_int_in(double y, double lo, double hi) {
    double v = std::round(y);
    v = std::max(v, std::ceil(lo - kEpsLattice));
    v = std::min(v, std::floor(hi + kEpsLattice));
    return v;
}

// Integer values admitted by [lo, hi] on one coordinate.
std::vector<double> lattice_values(double lo, double hi) {
    std::vector<double> vals;
    for (double v = std::ceil(lo - kEpsLattice); v <= std::floor(hi + kEpsLattice) + 0.5; v += 1.0)
        vals.push_back(v);
    return vals;
}

std::vector<double> axis_grid(double lo, double hi, double h) {
    std::vector<double> vals;
    const long steps = static_cast<long>(std::floor((hi - lo) / h + 1e-9));
    for (long k = 0; k <= steps; ++k) vals.push_back(lo + static_cast<double>(k) * h);
    if (vals.empty() || vals.back() < hi - 1e-12 * std::max(1.0, std::abs(hi)))
        vals.push_back(hi);
    return vals;
}

void cartesian(const std::vector<std::vector<double>>& axes, std::size_t i, Vec& cur,
               std::vector<Vec>& out) {
    if (i == axes.size()) {
        out.push_back(cur);
        return;
    }
    for (double v : axes[i]) {
        cur[i] = v;
        cartesian(axes, i + 1, cur, out);
    }
}

}  // namespace

ConvexPiece ConvexPiece::box(Vec lo, Vec hi) {
    require(lo.size() == hi.size() && !lo.empty(), "box bounds must share a positive dimension");
    for (std::size_t i = 0; i < lo.size(); ++i)
        require(lo[i] <= hi[i] + 1e-15, "box requires lo <= hi componentwise");
    ConvexPiece p;
    p.kind = Kind::Box;
    p.lo = std::move(lo);
    p.hi = std::move(hi);
    return p;
}

ConvexPiece ConvexPiece::poly(std::vector<Vec> A, Vec b, Vec lo, Vec hi) {
    require(lo.size() == hi.size() && !lo.empty(), "poly bounding box dimension mismatch");
    require(A.size() == b.size(), "poly needs one rhs entry per row");
    for (const Vec& row : A)
        require(row.size() == lo.size(), "poly row dimension mismatch");
    ConvexPiece p;
    p.kind = Kind::Poly;
    p.rows = std::move(A);
    p.rhs = std::move(b);
    p.lo = std::move(lo);
    p.hi = std::move(hi);
    return p;
}

bool ConvexPiece::member(const Vec& y, double eps) const {
    require(static_cast<int>(y.size()) == dim(), "dimension mismatch");
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] < lo[i] - eps || y[i] > hi[i] + eps) return false;
    if (kind == Kind::Poly) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double scale = std::max(1.0, norm(rows[r]));
            if (dot(rows[r], y) > rhs[r] + eps * scale) return false;
        }
    }
    return true;
}

Vec ConvexPiece::project(const Vec& y) const {
    require(static_cast<int>(y.size()) == dim(), "dimension mismatch");
    Vec x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::clamp(y[i], lo[i], hi[i]);
    if (kind == Kind::Box) return x;

    // Dykstra cyclic projections onto the box and each halfspace. All the
    // individual projections are closed-form, and the iteration converges to
    // the Euclidean projection onto the intersection.
    const std::size_t sets = rows.size() + 1;
    std::vector<Vec> corr(sets, Vec(y.size(), 0.0));
    x = y;
    for (int iter = 0; iter < 200; ++iter) {
        Vec prev = x;
        for (std::size_t s = 0; s < sets; ++s) {
            Vec w = add(x, corr[s]);
            Vec px;
            if (s == 0) {
                px.resize(w.size());
                for (std::size_t i = 0; i < w.size(); ++i) px[i] = std::clamp(w[i], lo[i], hi[i]);
            } else {
                const Vec& a = rows[s - 1];
                const double viol = dot(a, w) - rhs[s - 1];
                px = w;
                if (viol > 0) {
                    const double aa = dot(a, a);
                    if (aa > 0) px = sub(w, scale(viol / aa, a));
                }
            }
            corr[s] = sub(w, px);
            x = px;
        }
        if (dist(prev, x) < 1e-12) break;
    }
    return x;
}

double ConvexPiece::distance(const Vec& y) const {
    const double d = dist(y, project(y));
    // Dykstra iterates may sit a hair outside; snap members to zero.
    if (d < 1e-7 && member(y, 0.0)) return 0.0;
    return d;
}

double ConvexPiece::diameter() const { return dist(lo, hi); }

ConvexPiece ConvexPiece::translated(const Vec& t) const {
    require(t.size() == lo.size(), "translation dimension mismatch");
    ConvexPiece p = *this;
    p.lo = add(lo, t);
    p.hi = add(hi, t);
    if (kind == Kind::Poly) {
        for (std::size_t r = 0; r < rows.size(); ++r) p.rhs[r] = rhs[r] + dot(rows[r], t);
    }
    return p;
}

int Region::dim() const {
    require(!pieces.empty(), "region must have at least one piece");
    return pieces.front().dim();
}

Vec Region::bounding_lo() const {
    Vec lo = pieces.front().lo;
    for (const auto& p : pieces)
        for (std::size_t i = 0; i < lo.size(); ++i) lo[i] = std::min(lo[i], p.lo[i]);
    return lo;
}

Vec Region::bounding_hi() const {
    Vec hi = pieces.front().hi;
    for (const auto& p : pieces)
        for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = std::max(hi[i], p.hi[i]);
    return hi;
}

double Region::diameter() const { return dist(bounding_lo(), bounding_hi()); }

Region Region::translated(const Vec& t) const {
    Region r = *this;
    for (auto& p : r.pieces) p = p.translated(t);
    return r;
}

Region Region::interval(double a, double b) {
    return Region{{ConvexPiece::box({a}, {b})}, {}};
}

Region Region::box(Vec lo, Vec hi) {
    return Region{{ConvexPiece::box(std::move(lo), std::move(hi))}, {}};
}

namespace {

// Distance to one piece intersected with the lattice constraints.
double piece_lattice_distance(const ConvexPiece& p, const std::vector<int>& lattice,
                              const Vec& y) {
    if (lattice.empty()) return p.distance(y);
    if (p.kind == ConvexPiece::Kind::Box) {
        // Coordinates are independent for a box: snap lattice dims to the
        // nearest admissible integer, clamp the rest.
        double s = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double v;
            if (is_lattice_dim(lattice, static_cast<int>(i))) {
                if (std::floor(p.hi[i] + kEpsLattice) < std::ceil(p.lo[i] - kEpsLattice))
                    return std::numeric_limits<double>::infinity();
                v = nearest_int_in(y[i], p.lo[i], p.hi[i]);
            } else {
                v = std::clamp(y[i], p.lo[i], p.hi[i]);
            }
            s += (y[i] - v) * (y[i] - v);
        }
        return std::sqrt(s);
    }
    // Poly piece: enumerate admissible integer slices and project on each.
    std::vector<std::vector<double>> choices;
    std::size_t combos = 1;
    for (int d : lattice) {
        auto vals = lattice_values(p.lo[d], p.hi[d]);
        if (vals.empty()) return std::numeric_limits<double>::infinity();
        combos *= vals.size();
        require(combos <= 100000, "lattice slice enumeration too large");
        choices.push_back(std::move(vals));
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(lattice.size(), 0);
    while (true) {
        ConvexPiece pinned = p;
        for (std::size_t j = 0; j < lattice.size(); ++j) {
            pinned.lo[lattice[j]] = choices[j][idx[j]];
            pinned.hi[lattice[j]] = choices[j][idx[j]];
        }
        best = std::min(best, pinned.distance(y));
        std::size_t j = 0;
        for (; j < idx.size(); ++j) {
            if (++idx[j] < choices[j].size()) break;
            idx[j] = 0;
        }
        if (j == idx.size()) break;
    }
    return best;
}

}  // namespace

bool contains(const Region& r, const Vec& y, double eps) {
    require(static_cast<int>(y.size()) == r.dim(), "dimension mismatch");
    bool lattice_ok = true;
    for (int d : r.lattice_dims)
        if (std::abs(y[d] - std::round(y[d])) > kEpsLattice) {
            lattice_ok = false;
            break;
        }
    if (lattice_ok)
        for (const auto& p : r.pieces)
            if (p.member(y, eps)) return true;
    return distance(r, y) <= eps;
}

double distance(const Region& r, const Vec& y) {
    require(static_cast<int>(y.size()) == r.dim(), "dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : r.pieces)
        best = std::min(best, piece_lattice_distance(p, r.lattice_dims, y));
    return best;
}

GridSample grid(const Region& r, double h) {
    require(h > 0, "grid step must be positive");
    double maxdiam = 0;
    for (const auto& p : r.pieces) maxdiam = std::max(maxdiam, p.diameter());
    if (maxdiam > 0 && h > maxdiam + 1e-12)
        throw std::invalid_argument("grid too coarse for region");

    std::vector<Vec> pts;
    for (const auto& p : r.pieces) {
        std::vector<std::vector<double>> axes(p.lo.size());
        bool empty = false;
        for (std::size_t i = 0; i < p.lo.size(); ++i) {
            if (is_lattice_dim(r.lattice_dims, static_cast<int>(i))) {
                axes[i] = lattice_values(p.lo[i], p.hi[i]);
                if (axes[i].empty()) empty = true;
            } else {
                axes[i] = axis_grid(p.lo[i], p.hi[i], h);
            }
        }
        if (empty) continue;
        Vec cur(p.lo.size());
        std::vector<Vec> raw;
        cartesian(axes, 0, cur, raw);
        for (Vec& y : raw) {
            if (p.kind == ConvexPiece::Kind::Poly && !p.member(y, kEpsMembership)) continue;
            pts.push_back(std::move(y));
        }
    }
    std::sort(pts.begin(), pts.end(), lex_less);
    std::vector<Vec> dedup;
    for (const Vec& y : pts) {
        if (!dedup.empty() && dist_inf(dedup.back(), y) < 1e-12) continue;
        dedup.push_back(y);
    }
    return GridSample{h, std::move(dedup)};
}

bool interior_contains(const Region& r, const Vec& y, double margin) {
    require(static_cast<int>(y.size()) == r.dim(), "dimension mismatch");
    if (!r.lattice_dims.empty()) return false;  // lattice slices have empty ambient interior
    for (const auto& p : r.pieces) {
        bool inside = true;
        for (std::size_t i = 0; i < y.size() && inside; ++i)
            inside = (y[i] >= p.lo[i] + margin) && (y[i] <= p.hi[i] - margin);
        if (inside && p.kind == ConvexPiece::Kind::Poly) {
            for (std::size_t row = 0; row < p.rows.size() && inside; ++row)
                inside = dot(p.rows[row], y) <= p.rhs[row] - margin * norm(p.rows[row]);
        }
        if (inside) return true;
    }
    return false;
}

bool pk_liminf_contains(const std::vector<Region>& seq, const Region& limit, double h,
                        double eps) {
    require(seq.size() >= 2, "sequence must have at least two terms");
    for (const auto& s : seq) require(s.dim() == limit.dim(), "dimension mismatch in sequence");
    const GridSample g = grid(limit, h);
    const std::size_t start = seq.size() - std::max<std::size_t>(1, seq.size() / 4);
    for (const Vec& y : g.points)
        for (std::size_t n = start; n < seq.size(); ++n)
            if (distance(seq[n], y) > eps) return false;
    return true;
}

bool pk_limsup_within(const std::vector<Region>& seq, const Region& limit, double h,
                      double eps) {
    require(seq.size() >= 2, "sequence must have at least two terms");
    const std::size_t start = seq.size() - std::max<std::size_t>(1, seq.size() / 4);
    for (std::size_t n = start; n < seq.size(); ++n) {
        const GridSample g = grid(seq[n], h);
        for (const Vec& y : g.points)
            if (distance(limit, y) > eps) return false;
    }
    return true;
}

Region product(const Region& a, const Region& b) {
    Region r;
    for (const auto& pa : a.pieces) {
        for (const auto& pb : b.pieces) {
            Vec lo = pa.lo, hi = pa.hi;
            lo.insert(lo.end(), pb.lo.begin(), pb.lo.end());
            hi.insert(hi.end(), pb.hi.begin(), pb.hi.end());
            if (pa.kind == ConvexPiece::Kind::Box && pb.kind == ConvexPiece::Kind::Box) {
                r.pieces.push_back(ConvexPiece::box(lo, hi));
                continue;
            }
            std::vector<Vec> rows;
            Vec rhs;
            const std::size_t na = pa.lo.size(), nb = pb.lo.size();
            if (pa.kind == ConvexPiece::Kind::Poly)
                for (std::size_t i = 0; i < pa.rows.size(); ++i) {
                    Vec row = pa.rows[i];
                    row.resize(na + nb, 0.0);
                    rows.push_back(row);
                    rhs.push_back(pa.rhs[i]);
                }
            if (pb.kind == ConvexPiece::Kind::Poly)
                for (std::size_t i = 0; i < pb.rows.size(); ++i) {
                    Vec row(na, 0.0);
                    row.insert(row.end(), pb.rows[i].begin(), pb.rows[i].end());
                    rows.push_back(row);
                    rhs.push_back(pb.rhs[i]);
                }
            r.pieces.push_back(ConvexPiece::poly(rows, rhs, lo, hi));
        }
    }
    r.lattice_dims = a.lattice_dims;
    for (int d : b.lattice_dims) r.lattice_dims.push_back(d + a.dim());
    return r;
}

}  // namespace locvi
