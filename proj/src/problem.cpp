#include "locvi/problem.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace locvi {

namespace {

struct PValue {
    enum class Type { Number, List, Call, Ident };
    Type type = Type::Number;
    double num = 0;
    std::string name;
    std::vector<PValue> items;                  // list elements / call args
    std::map<std::string, PValue> kwargs;
};

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    int line;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw ParseError(line, std::string("expected '") + c + "'");
    }
};

PValue parse_value(Cursor& c);

PValue parse_number(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.i;
    if (c.i < c.s.size() && (c.s[c.i] == '-' || c.s[c.i] == '+')) ++c.i;
    bool digits = false;
    while (c.i < c.s.size() &&
           (std::isdigit(static_cast<unsigned char>(c.s[c.i])) || c.s[c.i] == '.')) {
        ++c.i;
        digits = true;
    }
    if (c.i < c.s.size() && (c.s[c.i] == 'e' || c.s[c.i] == 'E')) {
        ++c.i;
        if (c.i < c.s.size() && (c.s[c.i] == '-' || c.s[c.i] == '+')) ++c.i;
        while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
    }
    if (!digits) throw ParseError(c.line, "malformed number");
    PValue v;
    v.type = PValue::Type::Number;
    v.num = std::stod(c.s.substr(start, c.i - start));
    return v;
}

std::string parse_ident(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.i;
    while (c.i < c.s.size() && (std::isalnum(static_cast<unsigned char>(c.s[c.i])) ||
                                c.s[c.i] == '_' || c.s[c.i] == '-')) {
        ++c.i;
    }
    if (c.i == start) throw ParseError(c.line, "expected identifier");
    return c.s.substr(start, c.i - start);
}

PValue parse_value(Cursor& c) {
    const char ch = c.peek();
    if (ch == '[') {
        c.expect('[');
        PValue v;
        v.type = PValue::Type::List;
        if (!c.accept(']')) {
            do {
                v.items.push_back(parse_value(c));
            } while (c.accept(','));
            c.expect(']');
        }
        return v;
    }
    if (ch == '(') {  // bare tuple, parsed as a list
        c.expect('(');
        PValue v;
        v.type = PValue::Type::List;
        if (!c.accept(')')) {
            do {
                v.items.push_back(parse_value(c));
            } while (c.accept(','));
            c.expect(')');
        }
        return v;
    }
    if (ch == '-' || ch == '+' || std::isdigit(static_cast<unsigned char>(ch)) || ch == '.')
        return parse_number(c);
    std::string name = parse_ident(c);
    if (c.peek() == '(') {
        c.expect('(');
        PValue v;
        v.type = PValue::Type::Call;
        v.name = name;
        if (!c.accept(')')) {
            do {
                // keyword or positional
                const std::size_t save = c.i;
                bool kw = false;
                if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
                    std::string key = parse_ident(c);
                    if (c.accept('=')) {
                        v.kwargs[key] = parse_value(c);
                        kw = true;
                    } else {
                        c.i = save;
                    }
                }
                if (!kw) v.items.push_back(parse_value(c));
            } while (c.accept(','));
            c.expect(')');
        }
        return v;
    }
    PValue v;
    v.type = PValue::Type::Ident;
    v.name = name;
    return v;
}

double as_number(const PValue& v, int line) {
    if (v.type != PValue::Type::Number) throw ParseError(line, "expected a number");
    return v.num;
}

void check_kwargs(const PValue& v, std::initializer_list<const char*> allowed, int line) {
    for (const auto& [key, val] : v.kwargs) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ParseError(line, "unknown argument '" + key + "' in " + v.name + "(...)");
    }
}

Vec as_vector(const PValue& v, int line) {
    if (v.type != PValue::Type::List) throw ParseError(line, "expected a vector [..]");
    Vec out;
    for (const auto& e : v.items) out.push_back(as_number(e, line));
    return out;
}

std::vector<Vec> as_matrix(const PValue& v, int line) {
    if (v.type != PValue::Type::List) throw ParseError(line, "expected a matrix [[..],..]");
    std::vector<Vec> rows;
    for (const auto& e : v.items) rows.push_back(as_vector(e, line));
    return rows;
}

// ---------------------------------------------------------------- literals

ConvexPiece build_piece(const PValue& v, int line) {
    if (v.type != PValue::Type::Call) throw ParseError(line, "expected box(..) or poly(..)");
    check_kwargs(v, {}, line);
    if (v.name == "box") {
        if (v.items.size() != 2) throw ParseError(line, "box(lo, hi) takes two vectors");
        return ConvexPiece::box(as_vector(v.items[0], line), as_vector(v.items[1], line));
    }
    if (v.name == "poly") {
        if (v.items.size() != 3)
            throw ParseError(line, "poly(A, b, box) takes a matrix, a vector and a box");
        const PValue& bb = v.items[2];
        if (bb.type != PValue::Type::Call || bb.name != "box")
            throw ParseError(line, "poly bounding box must be box(lo, hi)");
        return ConvexPiece::poly(as_matrix(v.items[0], line), as_vector(v.items[1], line),
                                 as_vector(bb.items[0], line), as_vector(bb.items[1], line));
    }
    throw ParseError(line, "unknown piece literal '" + v.name + "'");
}

Region build_region(const PValue& v, int line) {
    if (v.type != PValue::Type::Call) throw ParseError(line, "expected a region literal");
    check_kwargs(v, {"lattice"}, line);
    if (v.name == "box" || v.name == "poly") return Region{{build_piece(v, line)}, {}};
    if (v.name != "union") throw ParseError(line, "unknown region literal '" + v.name + "'");
    if (v.items.empty() || v.items[0].type != PValue::Type::List || v.items[0].items.empty())
        throw ParseError(line, "empty union");
    Region r;
    for (const auto& e : v.items[0].items) r.pieces.push_back(build_piece(e, line));
    auto it = v.kwargs.find("lattice");
    if (it != v.kwargs.end()) {
        if (it->second.type != PValue::Type::List)
            throw ParseError(line, "lattice must be a list of coordinate indices");
        for (const auto& e : it->second.items)
            r.lattice_dims.push_back(static_cast<int>(as_number(e, line)));
        std::sort(r.lattice_dims.begin(), r.lattice_dims.end());
    }
    const int d = r.dim();
    for (const auto& p : r.pieces)
        if (p.dim() != d) throw ParseError(line, "union pieces have mixed dimensions");
    for (int ld : r.lattice_dims)
        if (ld < 0 || ld >= d) throw ParseError(line, "lattice index out of range");
    return r;
}

QuasiconvexFn build_function(const PValue& v, int line) {
    if (v.type != PValue::Type::Call) throw ParseError(line, "expected a function literal");
    check_kwargs(v, {}, line);
    if (v.name == "affine") {
        if (v.items.size() != 2) throw ParseError(line, "affine(c, d)");
        return QuasiconvexFn::affine(as_vector(v.items[0], line), as_number(v.items[1], line));
    }
    if (v.name == "absaff") {
        if (v.items.size() != 2) throw ParseError(line, "absaff(a, b)");
        return QuasiconvexFn::abs_affine(as_vector(v.items[0], line),
                                         as_number(v.items[1], line));
    }
    if (v.name == "dist") {
        if (v.items.size() != 1) throw ParseError(line, "dist(piece)");
        return QuasiconvexFn::dist_to(build_piece(v.items[0], line));
    }
    if (v.name == "maxaff") {
        if (v.items.size() != 1 || v.items[0].type != PValue::Type::List)
            throw ParseError(line, "maxaff([(c, d), ...])");
        std::vector<std::pair<Vec, double>> terms;
        for (const auto& t : v.items[0].items) {
            if (t.type != PValue::Type::List || t.items.size() != 2)
                throw ParseError(line, "maxaff term must be (c, d)");
            terms.emplace_back(as_vector(t.items[0], line), as_number(t.items[1], line));
        }
        return QuasiconvexFn::max_affine(std::move(terms));
    }
    if (v.name == "table") {
        if (v.items.size() != 3) throw ParseError(line, "table(lo, hi, [values...])");
        return QuasiconvexFn::table1d(as_number(v.items[0], line), as_number(v.items[1], line),
                                      as_vector(v.items[2], line));
    }
    throw ParseError(line, "unknown function literal '" + v.name + "'");
}

}  // namespace

namespace {

struct Builder {
    ProblemFile pf;
    bool meta_seen = false;

    const QuasiconvexFn& function(const std::string& name, int line) const {
        auto it = pf.functions.find(name);
        if (it == pf.functions.end())
            throw ParseError(line, "unresolved function reference '" + name + "'");
        return it->second;
    }
    const Region& region(const std::string& name, int line) const {
        auto it = pf.regions.find(name);
        if (it == pf.regions.end())
            throw ParseError(line, "unresolved region reference '" + name + "'");
        return it->second;
    }

    DualMap build_operator(const PValue& v, int line) const {
        if (v.type != PValue::Type::Call) throw ParseError(line, "expected an operator literal");
        check_kwargs(v, {"samples", "points", "values", "default"}, line);
        if (v.name == "constant") {
            if (v.items.size() != 1) throw ParseError(line, "constant([c...])");
            return DualMap::constant(as_vector(v.items[0], line));
        }
        if (v.name == "gradient") {
            if (v.items.size() != 1 || v.items[0].type != PValue::Type::Ident)
                throw ParseError(line, "gradient(f)");
            QuasiconvexFn f = function(v.items[0].name, line);
            DualMap t;
            t.dim = f.dim();
            t.images = [f](const Vec& x) { return f.gradient_sample(x); };
            return t;
        }
        if (v.name == "normal_adjusted" || v.name == "Ff") {
            if (v.items.size() != 1 || v.items[0].type != PValue::Type::Ident)
                throw ParseError(line, v.name + "(f, samples=k)");
            int k = pf.samples;
            auto it = v.kwargs.find("samples");
            if (it != v.kwargs.end()) k = static_cast<int>(as_number(it->second, line));
            QuasiconvexFn f = function(v.items[0].name, line);
            if (v.name == "Ff") return ff_map(f, pf.box, pf.h, k);
            DualMap t;
            t.dim = f.dim();
            t.images = [f, box = pf.box, h = pf.h, k](const Vec& x) {
                std::vector<Vec> slice = normal_adjusted(f, x, box, h, k);
                if (slice.empty()) slice.push_back(Vec(x.size(), 0.0));  // cone is {0}
                return slice;
            };
            return t;
        }
        if (v.name == "table") {
            const auto pts_it = v.kwargs.find("points");
            const auto val_it = v.kwargs.find("values");
            if (pts_it == v.kwargs.end() || val_it == v.kwargs.end())
                throw ParseError(line, "table(points=[[..]..], values=[[[..]..]..], default=..)");
            std::vector<Vec> pts = as_matrix(pts_it->second, line);
            std::vector<std::vector<Vec>> vals;
            for (const auto& e : val_it->second.items) vals.push_back(as_matrix(e, line));
            if (pts.size() != vals.size())
                throw ParseError(line, "table points/values size mismatch");
            std::vector<Vec> def;
            auto d_it = v.kwargs.find("default");
            if (d_it != v.kwargs.end()) def = as_matrix(d_it->second, line);
            DualMap t;
            t.dim = pf.dim;
            t.images = [pts, vals, def](const Vec& x) {
                for (std::size_t i = 0; i < pts.size(); ++i)
                    if (dist(pts[i], x) < 1e-9) return vals[i];
                if (!def.empty()) return def;
                throw std::runtime_error("table operator: point not tabulated");
            };
            return t;
        }
        throw ParseError(line, "unknown operator literal '" + v.name + "'");
    }

    // Sublevel region {y : g(y) <= level} of a catalog g on the working box.
    static Region sublevel_region(const QuasiconvexFn& g, double level, const Region& box) {
        const Vec lo = box.bounding_lo();
        const Vec hi = box.bounding_hi();
        switch (g.kind) {
            case QuasiconvexFn::Kind::Affine: {
                std::vector<Vec> rows{g.coef()};
                return Region{{ConvexPiece::poly(rows, {level - g.offset()}, lo, hi)}, {}};
            }
            case QuasiconvexFn::Kind::AbsAffine: {
                if (level < 0)
                    throw std::runtime_error("separable map produced an empty value");
                std::vector<Vec> rows{g.coef(), scale(-1.0, g.coef())};
                return Region{
                    {ConvexPiece::poly(rows, {level - g.offset(), level + g.offset()}, lo, hi)},
                    {}};
            }
            case QuasiconvexFn::Kind::MaxAffine: {
                std::vector<Vec> rows;
                Vec rhs;
                for (const auto& [c, d] : g.terms()) {
                    rows.push_back(c);
                    rhs.push_back(level - d);
                }
                return Region{{ConvexPiece::poly(rows, rhs, lo, hi)}, {}};
            }
            case QuasiconvexFn::Kind::DistToPiece: {
                if (g.dim() != 1)
                    throw std::runtime_error("separable(dist) is 1-D only");
                if (level < 0)
                    throw std::runtime_error("separable map produced an empty value");
                const ConvexPiece& p = *g.piece();
                return Region::interval(p.lo[0] - level, p.hi[0] + level);
            }
            default:
                throw std::runtime_error("separable does not support table generators");
        }
    }

    ConstraintMap build_map(const PValue& v, int line) const {
        if (v.type != PValue::Type::Call) throw ParseError(line, "expected a map literal");
        check_kwargs(v, {}, line);
        if (v.name == "constant") {
            if (v.items.size() != 1 || v.items[0].type != PValue::Type::Ident)
                throw ParseError(line, "constant(region)");
            return ConstraintMap::constant(region(v.items[0].name, line));
        }
        if (v.name == "circle") return ConstraintMap::circle();
        if (v.name == "step") return ConstraintMap::step();
        if (v.name == "translate") {
            if (v.items.size() != 2 || v.items[0].type != PValue::Type::Ident)
                throw ParseError(line, "translate(base_region, L)");
            return ConstraintMap::linear_translation(region(v.items[0].name, line),
                                                     as_matrix(v.items[1], line));
        }
        if (v.name == "separable") {
            if (v.items.size() != 2 || v.items[0].type != PValue::Type::Ident ||
                v.items[1].type != PValue::Type::Ident)
                throw ParseError(line, "separable(g, h)");
            QuasiconvexFn g = function(v.items[0].name, line);
            QuasiconvexFn hf = function(v.items[1].name, line);
            ConstraintMap k;
            k.kind = ConstraintMap::Kind::Separable;
            k.dim = pf.dim;
            k.map = [g, hf, box = pf.box](const Vec& x) {
                return sublevel_region(g, hf(x), box);
            };
            return k;
        }
        throw ParseError(line, "unknown map literal '" + v.name + "'");
    }

    PerturbedFamily build_family(const PValue& v, int line) const {
        if (v.type != PValue::Type::Call) throw ParseError(line, "expected a family literal");
        check_kwargs(v, {}, line);
        PerturbedFamily fam;
        fam.x_dim = pf.dim;
        fam.lambda_dim = pf.dim;
        fam.mu_dim = pf.dim;
        fam.box = pf.box;
        if (v.name == "translate") {
            if (v.items.size() != 2 || v.items[0].type != PValue::Type::Ident ||
                v.items[1].type != PValue::Type::Ident)
                throw ParseError(line, "translate(f, K_region)");
            QuasiconvexFn f0 = function(v.items[0].name, line);
            Region base = region(v.items[1].name, line);
            fam.f = [f0](const Vec& x, const Vec& lam) { return f0.translated(lam)(x); };
            fam.K = [base](const Vec& mu) { return base.translated(mu); };
            fam.T = [f0, box = pf.box, h = pf.h, k = pf.samples](const Vec& x, const Vec& lam) {
                return ff_map(f0.translated(lam), box, h, k).images(x);
            };
            return fam;
        }
        if (v.name == "constop") {
            if (v.items.size() != 2 || v.items[0].type != PValue::Type::Ident ||
                v.items[1].type != PValue::Type::Ident)
                throw ParseError(line, "constop(T, K_region)");
            auto op_it = pf.operators.find(v.items[0].name);
            if (op_it == pf.operators.end())
                throw ParseError(line, "unresolved operator reference '" + v.items[0].name + "'");
            DualMap T0 = op_it->second;
            Region base = region(v.items[1].name, line);
            fam.T = [T0](const Vec& x, const Vec&) { return T0.images(x); };
            fam.K = [base](const Vec& mu) { return base.translated(mu); };
            return fam;
        }
        throw ParseError(line, "unknown family literal '" + v.name + "'");
    }
};

std::function<double(const Vec&, const Vec&)> build_leader(const PValue& v, int line) {
    if (v.type != PValue::Type::Call || v.name != "quad")
        throw ParseError(line, "leader objective must be quad(wx, ax, wy, ay, cx, cy, d)");
    auto get = [&](const char* key) -> Vec {
        auto it = v.kwargs.find(key);
        if (it == v.kwargs.end()) throw ParseError(line, std::string("quad missing ") + key);
        return as_vector(it->second, line);
    };
    const Vec wx = get("wx"), ax = get("ax"), wy = get("wy"), ay = get("ay"), cx = get("cx"),
              cy = get("cy");
    auto dit = v.kwargs.find("d");
    const double d = dit == v.kwargs.end() ? 0.0 : as_number(dit->second, line);
    return [=](const Vec& x, const Vec& y) {
        double s = d;
        for (std::size_t i = 0; i < wx.size() && i < x.size(); ++i)
            s += wx[i] * (x[i] - ax[i]) * (x[i] - ax[i]);
        for (std::size_t j = 0; j < wy.size() && j < y.size(); ++j)
            s += wy[j] * (y[j] - ay[j]) * (y[j] - ay[j]);
        for (std::size_t i = 0; i < cx.size() && i < x.size(); ++i) s += cx[i] * x[i];
        for (std::size_t j = 0; j < cy.size() && j < y.size(); ++j) s += cy[j] * y[j];
        return s;
    };
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text) {
    Builder b;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::string section;

    // Game scratch data, assembled at the end of the [game] section.
    std::map<std::string, PValue> game_kv;
    std::map<std::string, int> game_lines;

    auto finalize_game = [&]() {
        if (game_kv.empty()) return;
        auto need = [&](const std::string& key) -> const PValue& {
            auto it = game_kv.find(key);
            if (it == game_kv.end())
                throw ParseError(game_lines.count(key) ? game_lines[key] : 0,
                                 "game block missing key '" + key + "'");
            return it->second;
        };
        const int M = static_cast<int>(as_number(need("followers"), 0));
        if (M < 1) throw ParseError(0, "game needs at least one follower");
        std::vector<std::function<Vec(const Vec&)>> c;
        std::vector<Region> base;
        std::vector<std::vector<Vec>> Lhat, Lcheck;
        for (int i = 1; i <= M; ++i) {
            const std::string suf = std::to_string(i);
            Vec ci = as_vector(need("c" + suf), game_lines["c" + suf]);
            c.push_back([ci](const Vec&) { return ci; });
            base.push_back(build_region(need("base" + suf), game_lines["base" + suf]));
            Lhat.push_back(as_matrix(need("Lhat" + suf), game_lines["Lhat" + suf]));
            Lcheck.push_back(as_matrix(need("Lcheck" + suf), game_lines["Lcheck" + suf]));
        }
        Region C1 = build_region(need("C1"), game_lines["C1"]);
        Region C2 = build_region(need("C2"), game_lines["C2"]);
        auto F = build_leader(need("leader"), game_lines["leader"]);
        b.pf.game = GameSpec::linear_translation_game(std::move(c), std::move(base),
                                                      std::move(Lhat), std::move(Lcheck),
                                                      std::move(F), std::move(C1),
                                                      std::move(C2));
    };

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(lineno, "malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "meta" && section != "region" && section != "function" &&
                section != "operator" && section != "map" && section != "family" &&
                section != "game")
                throw ParseError(lineno, "unknown section '" + section + "'");
            if (section != "meta" && !b.meta_seen)
                throw ParseError(lineno, "the [meta] section must come first");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
        std::string key = line.substr(0, eq);
        key = key.substr(0, key.find_last_not_of(" \t") + 1);
        std::string rhs = line.substr(eq + 1);
        Cursor cur{rhs, 0, lineno};
        PValue val = parse_value(cur);
        if (!cur.eof()) throw ParseError(lineno, "trailing characters after value");

        if (section == "meta") {
            b.meta_seen = true;
            if (key == "dim")
                b.pf.dim = static_cast<int>(as_number(val, lineno));
            else if (key == "box")
                b.pf.box = build_region(val, lineno);
            else if (key == "h")
                b.pf.h = as_number(val, lineno);
            else if (key == "r")
                b.pf.r = as_number(val, lineno);
            else if (key == "eps")
                b.pf.eps = as_number(val, lineno);
            else if (key == "hx")
                b.pf.hx = as_number(val, lineno);
            else if (key == "hy")
                b.pf.hy = as_number(val, lineno);
            else if (key == "samples")
                b.pf.samples = static_cast<int>(as_number(val, lineno));
            else
                throw ParseError(lineno, "unknown meta key '" + key + "'");
        } else if (section == "region") {
            Region r = build_region(val, lineno);
            if (r.dim() != b.pf.dim) throw ParseError(lineno, "region dimension mismatch");
            b.pf.regions.emplace(key, std::move(r));
        } else if (section == "function") {
            QuasiconvexFn f = build_function(val, lineno);
            if (f.dim() != b.pf.dim && f.dim() != 1)
                throw ParseError(lineno, "function dimension mismatch");
            b.pf.functions.emplace(key, std::move(f));
        } else if (section == "operator") {
            b.pf.operators.emplace(key, b.build_operator(val, lineno));
        } else if (section == "map") {
            b.pf.maps.emplace(key, b.build_map(val, lineno));
        } else if (section == "family") {
            b.pf.families.emplace(key, b.build_family(val, lineno));
        } else if (section == "game") {
            game_kv[key] = val;
            game_lines[key] = lineno;
        } else {
            throw ParseError(lineno, "key outside of any section");
        }
    }
    if (!b.meta_seen) throw ParseError(0, "missing [meta] section");
    if (b.pf.dim <= 0) throw ParseError(0, "meta.dim must be positive");
    if (b.pf.box.pieces.empty()) throw ParseError(0, "meta.box is required");
    if (b.pf.h <= 0) throw ParseError(0, "meta.h must be positive");
    if (b.pf.r <= 0) b.pf.r = 2 * b.pf.h;
    if (b.pf.hx <= 0) b.pf.hx = b.pf.h;
    if (b.pf.hy <= 0) b.pf.hy = b.pf.h;
    finalize_game();
    return b.pf;
}

ProblemFile parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

TraceFile parse_trace_text(const std::string& text) {
    TraceFile tf;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool have_limit = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line == "[trace]") continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
        std::string key = line.substr(0, eq);
        key = key.substr(0, key.find_last_not_of(" \t") + 1);
        std::string rhs = line.substr(eq + 1);
        Cursor cur{rhs, 0, lineno};
        PValue val = parse_value(cur);
        if (val.type != PValue::Type::List || val.items.size() != 2)
            throw ParseError(lineno, "expected ([lambda...],[mu...])");
        Vec lam = as_vector(val.items[0], lineno);
        Vec mu = as_vector(val.items[1], lineno);
        if (key == "limit") {
            tf.lambda0 = lam;
            tf.mu0 = mu;
            have_limit = true;
        } else if (key == "row") {
            tf.rows.emplace_back(std::move(lam), std::move(mu));
        } else {
            throw ParseError(lineno, "unknown trace key '" + key + "'");
        }
    }
    if (!have_limit) throw ParseError(0, "trace file missing limit row");
    if (tf.rows.size() < 2) throw ParseError(0, "trace file needs at least two rows");
    return tf;
}

TraceFile parse_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_trace_text(ss.str());
}

}  // namespace locvi
