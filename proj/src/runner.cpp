#include "locvi/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "locvi/quasiopt.hpp"

namespace locvi {

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // normalize negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

namespace {

std::string join_point(const Vec& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ',';
        s += format_number(p[i]);
    }
    return s;
}

std::string solution_csv(const SolutionSet& set, int dim) {
    std::ostringstream csv;
    for (int i = 0; i < dim; ++i) csv << "x" << i << ",";
    for (int i = 0; i < dim; ++i) csv << "mult" << i << ",";
    csv << "radius\n";
    for (const auto& s : set.solutions) {
        csv << join_point(s.x) << ",";
        if (s.multiplier)
            csv << join_point(*s.multiplier);
        else {
            for (int i = 0; i < dim; ++i) {
                if (i) csv << ",";
            }
        }
        csv << "," << format_number(s.radius) << "\n";
    }
    return csv.str();
}

const QuasiconvexFn& named_function(const ProblemFile& pf, const std::string& name) {
    auto it = pf.functions.find(name);
    if (it == pf.functions.end()) throw std::runtime_error("problem file defines no function '" + name + "'");
    return it->second;
}

const DualMap& named_operator(const ProblemFile& pf, const std::string& name) {
    auto it = pf.operators.find(name);
    if (it == pf.operators.end()) throw std::runtime_error("problem file defines no operator '" + name + "'");
    return it->second;
}

const Region& named_region(const ProblemFile& pf, const std::string& name) {
    auto it = pf.regions.find(name);
    if (it == pf.regions.end()) throw std::runtime_error("problem file defines no region '" + name + "'");
    return it->second;
}

const ConstraintMap& named_map(const ProblemFile& pf, const std::string& name) {
    auto it = pf.maps.find(name);
    if (it == pf.maps.end()) throw std::runtime_error("problem file defines no map '" + name + "'");
    return it->second;
}

// 1-D refinement of the fixed-point set boundary: bisect the exact
// membership predicate between the last fixed grid point and its non-fixed
// neighbour.
std::vector<Vec> fp_boundary_points(const ConstraintMap& K, const Region& box, double h,
                                    double eps) {
    std::vector<Vec> out;
    if (box.dim() != 1) return out;
    const auto pts = grid(box, h).points;
    const double tol = std::max(eps, kEpsMembership);
    auto is_fp = [&](double x) { return distance(K({x}), {x}) <= tol; };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const bool a = is_fp(pts[i][0]), b = is_fp(pts[i + 1][0]);
        if (a == b) continue;
        double lo = pts[i][0], hi = pts[i + 1][0];
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (is_fp(mid) == a)
                lo = mid;
            else
                hi = mid;
        }
        const double boundary = a ? lo : hi;  // innermost point still fixed
        if (distance(K({boundary}), {boundary}) <= tol) out.push_back({boundary});
    }
    return out;
}

struct Ctx {
    const RunOptions& opt;
    ProblemFile pf;
    double h, r, eps;
    std::ostringstream report;
};

RunReport finish(Ctx& ctx, std::map<std::string, std::string> csvs, int exit_code) {
    RunReport rep;
    rep.exit_code = exit_code;
    rep.csv_files = std::move(csvs);
    rep.report_text = ctx.report.str();
    return rep;
}

RunReport cmd_solve_vi(Ctx& ctx) {
    const std::string kind = ctx.opt.kind.empty() ? "lsvi" : ctx.opt.kind;
    const Region& C = named_region(ctx.pf, "C");
    const DualMap& T = named_operator(ctx.pf, "T");
    SolutionSet set;
    if (kind == "lsvi")
        set = solve_lsvi(T, C, ctx.h, ctx.r, ctx.eps);
    else if (kind == "svi")
        set = solve_svi(T, C, ctx.h, ctx.eps);
    else if (kind == "lmvi")
        set = solve_lmvi(T, C, ctx.h, ctx.r, ctx.eps);
    else if (kind == "mvi")
        set = solve_mvi(T, C, ctx.h, ctx.eps);
    else
        throw std::runtime_error("solve-vi: unknown kind '" + kind + "'");
    ctx.report << "solutions: " << set.solutions.size() << "\n";
    for (const auto& s : set.solutions)
        ctx.report << "  (" << join_point(s.x) << ") radius " << format_number(s.radius)
                   << "\n";
    for (const auto& n : set.notes) ctx.report << "note: " << n << "\n";
    return finish(ctx, {{"solve_vi.csv", solution_csv(set, ctx.pf.dim)}}, 0);
}

RunReport cmd_solve_qvi(Ctx& ctx) {
    const std::string kind = ctx.opt.kind.empty() ? "stampacchia" : ctx.opt.kind;
    const std::string method = ctx.opt.method.empty() ? "union" : ctx.opt.method;
    const ConstraintMap& K = named_map(ctx.pf, "K");
    const DualMap& T = named_operator(ctx.pf, "T");
    const bool minty = kind == "minty";
    if (!minty && kind != "stampacchia")
        throw std::runtime_error("solve-qvi: unknown kind '" + kind + "'");
    QviOptions qopt;
    qopt.h = ctx.h;
    qopt.r = ctx.r;
    qopt.eps = ctx.eps;

    std::map<std::string, std::string> csvs;
    int exit_code = 0;
    SolutionSet set_union, set_direct;
    if (method == "union" || method == "both")
        set_union = minty ? solve_lmqvi(T, K, ctx.pf.box, qopt)
                          : solve_lsqvi(T, K, ctx.pf.box, qopt);
    if (method == "direct" || method == "both")
        set_direct = minty ? solve_lmqvi_direct(T, K, ctx.pf.box, qopt)
                           : solve_lsqvi_direct(T, K, ctx.pf.box, qopt);
    const SolutionSet& primary = (method == "direct") ? set_direct : set_union;
    ctx.report << "method: " << method << "\nsolutions: " << primary.solutions.size() << "\n";
    for (const auto& s : primary.solutions) ctx.report << "  (" << join_point(s.x) << ")\n";
    for (const auto& n : primary.notes) ctx.report << "note: " << n << "\n";
    csvs["solve_qvi.csv"] = solution_csv(primary, ctx.pf.dim);
    if (method == "both") {
        csvs["solve_qvi_direct.csv"] = solution_csv(set_direct, ctx.pf.dim);
        const bool agree = same_points(set_union, set_direct, ctx.h + 1e-12);
        ctx.report << "union/direct agreement within h: " << (agree ? "yes" : "NO") << "\n";
        if (!agree) exit_code = 2;
    }
    return finish(ctx, std::move(csvs), exit_code);
}

RunReport cmd_check_repro(Ctx& ctx) {
    const ConstraintMap& K = named_map(ctx.pf, "K");
    std::vector<Vec> fps = fixed_points(K, ctx.pf.box, ctx.h, ctx.eps);
    for (const Vec& b : fp_boundary_points(K, ctx.pf.box, ctx.h, ctx.eps)) fps.push_back(b);
    std::sort(fps.begin(), fps.end(), lex_less);
    const double r_max = std::max(4 * ctx.h, ctx.pf.box.diameter() / 2.0);

    std::ostringstream csv;
    for (int i = 0; i < ctx.pf.dim; ++i) csv << "z" << i << ",";
    csv << "radius,status\n";
    std::size_t certified = 0;
    for (const Vec& z : fps) {
        const ReproCertificate cert = certify_local_repro(K, z, r_max, ctx.h, 2 * ctx.h);
        csv << join_point(z) << "," << format_number(cert.certified ? cert.radius : 0.0) << ","
            << (cert.certified ? "certified" : "refuted") << "\n";
        certified += cert.certified ? 1 : 0;
    }
    ctx.report << "fixed points examined: " << fps.size() << " (certified " << certified
               << ", refuted " << fps.size() - certified << ")\n";
    return finish(ctx, {{"check_repro.csv", csv.str()}}, 0);
}

RunReport cmd_solve_qopt(Ctx& ctx) {
    const std::string method = ctx.opt.method.empty() ? "direct" : ctx.opt.method;
    const QuasiconvexFn& f = named_function(ctx.pf, "f");
    const ConstraintMap& K = named_map(ctx.pf, "K");
    QuasiOptProblem P = make_qopt(f, K, ctx.pf.box, ctx.h, ctx.r, ctx.pf.samples);
    const bool semistrict = check_semistrict(f, ctx.pf.box, ctx.h).ok;

    std::map<std::string, std::string> csvs;
    int exit_code = 0;
    SolutionSet primary;
    if (method == "direct") {
        primary = solve_lqopt_direct(P, ctx.eps);
    } else if (method == "union") {
        primary = solve_lqopt_union(P, ctx.eps, UnionInner::Opt);
    } else if (method == "vi") {
        primary = solve_lqopt_union(P, ctx.eps, UnionInner::VI);
    } else if (method == "all") {
        primary = solve_lqopt_direct(P, ctx.eps);
        SolutionSet u;
        try {
            u = solve_lqopt_union(P, ctx.eps, semistrict ? UnionInner::Both : UnionInner::Opt);
        } catch (const std::runtime_error& e) {
            ctx.report << "cross-check failed: " << e.what() << "\n";
            return finish(ctx, std::move(csvs), 2);
        }
        csvs["solve_qopt_union.csv"] = solution_csv(u, ctx.pf.dim);
        const bool agree = same_points(primary, u, ctx.h + 1e-12);
        ctx.report << "direct/union agreement within h: " << (agree ? "yes" : "NO") << "\n";
        if (!agree) exit_code = 2;
    } else {
        throw std::runtime_error("solve-qopt: unknown method '" + method + "'");
    }
    ctx.report << "solutions: " << primary.solutions.size() << "\n";
    for (const auto& s : primary.solutions) ctx.report << "  (" << join_point(s.x) << ")\n";
    csvs["solve_qopt.csv"] = solution_csv(primary, ctx.pf.dim);
    return finish(ctx, std::move(csvs), exit_code);
}

RunReport cmd_stability_trial(Ctx& ctx) {
    if (ctx.opt.trace_path.empty()) throw std::runtime_error("stability-trial needs --trace");
    const TraceFile tf = parse_trace(ctx.opt.trace_path);
    auto fam_it = ctx.pf.families.find("fam");
    if (fam_it == ctx.pf.families.end())
        throw std::runtime_error("problem file defines no family 'fam'");
    const std::string kind_s = ctx.opt.kind.empty() ? "star" : ctx.opt.kind;
    TrialKind kind;
    if (kind_s == "weak-int")
        kind = TrialKind::WeakInt;
    else if (kind_s == "star")
        kind = TrialKind::Star;
    else if (kind_s == "lopt")
        kind = TrialKind::LOpt;
    else if (kind_s == "lqopt")
        kind = TrialKind::LQOpt;
    else
        throw std::runtime_error("stability-trial: unknown kind '" + kind_s + "'");

    const TraceResult res = closedness_trial(fam_it->second, kind, tf.rows, tf.lambda0,
                                             tf.mu0, ctx.h, ctx.r, ctx.eps);
    std::ostringstream csv;
    csv << "n,lambda,mu,solutions,matched_x\n";
    for (std::size_t n = 0; n < res.params.size(); ++n) {
        csv << n << "," << join_point(res.params[n].first) << ","
            << join_point(res.params[n].second) << ",";
        if (n < res.instance_sizes.size()) csv << res.instance_sizes[n];
        csv << ",";
        if (n < res.matched.size()) csv << join_point(res.matched[n]);
        csv << "\n";
    }
    const char* verdict = res.verdict == Verdict::True
                              ? "true"
                              : (res.verdict == Verdict::False ? "false" : "inconclusive");
    ctx.report << "verdict: " << verdict << "\n";
    for (const auto& [name, ok] : res.hypotheses)
        ctx.report << "hypothesis " << name << ": " << (ok ? "pass" : "FAIL") << "\n";
    if (!res.diagnostic.empty()) ctx.report << "diagnostic: " << res.diagnostic << "\n";
    std::ostringstream vcsv;
    vcsv << "verdict,diagnostic\n" << verdict << "," << res.diagnostic << "\n";
    return finish(ctx,
                  {{"stability_trace.csv", csv.str()}, {"stability_verdict.csv", vcsv.str()}},
                  0);
}

RunReport cmd_solve_gnep(Ctx& ctx) {
    if (!ctx.pf.game) throw std::runtime_error("problem file has no [game] section");
    if (ctx.opt.leader_x.empty()) throw std::runtime_error("solve-gnep needs --leader-x");
    const auto eqs = solve_lgnep(*ctx.pf.game, ctx.opt.leader_x, ctx.pf.hy, ctx.r, ctx.eps);
    std::ostringstream csv;
    const int m = ctx.pf.game->joint_dim();
    for (int i = 0; i < m; ++i) csv << "y" << i << ",";
    csv << "radius,gap\n";
    for (const auto& d : eqs)
        csv << join_point(d.y) << "," << format_number(d.radius) << ","
            << format_number(d.value) << "\n";
    ctx.report << "equilibria: " << eqs.size() << "\n";
    return finish(ctx, {{"solve_gnep.csv", csv.str()}}, 0);
}

RunReport cmd_solve_slmf(Ctx& ctx) {
    if (!ctx.pf.game) throw std::runtime_error("problem file has no [game] section");
    const SllmfResult res =
        solve_sllmf(*ctx.pf.game, ctx.pf.hx, ctx.pf.hy, ctx.r, ctx.eps);
    std::ostringstream csv;
    csv << "leader_x,follower_y,F\n";
    csv << "\"" << join_point(res.x) << "\",\"" << join_point(res.y) << "\","
        << format_number(res.leader_value) << "\n";
    ctx.report << "leader decision: (" << join_point(res.x) << ")\n";
    ctx.report << "follower equilibrium: (" << join_point(res.y) << ")\n";
    ctx.report << "leader objective: " << format_number(res.leader_value) << "\n";
    ctx.report << "feasible leader grid points: " << res.feasible_leader_points << "\n";
    return finish(ctx, {{"solve_slmf.csv", csv.str()}}, 0);
}

RunReport cmd_classify_op(Ctx& ctx) {
    const Region& C = named_region(ctx.pf, "C");
    const DualMap& T = named_operator(ctx.pf, "T");
    const MonotonicityReport rep = classify_monotonicity(T, C, ctx.h, ctx.eps);
    std::ostringstream csv;
    csv << "class,pseudo,properly_quasi,quasi\n";
    csv << to_string(rep.cls) << "," << rep.pseudo_ok << "," << rep.proper_ok << ","
        << rep.quasi_ok << "\n";
    ctx.report << "class: " << to_string(rep.cls) << "\n";
    if (rep.witness) {
        const auto& [x, y, xs, ys] = *rep.witness;
        ctx.report << "witness: x=(" << join_point(x) << ") y=(" << join_point(y) << ") x*=("
                   << join_point(xs) << ") y*=(" << join_point(ys) << ")\n";
    }
    return finish(ctx, {{"classify_op.csv", csv.str()}}, 0);
}

RunReport cmd_analyze_f(Ctx& ctx) {
    const QuasiconvexFn& f = named_function(ctx.pf, "f");
    const CheckResult qc = check_quasiconvex(f, ctx.pf.box, ctx.h);
    const CheckResult ss = qc.ok ? check_semistrict(f, ctx.pf.box, ctx.h) : CheckResult{false, {}};
    const bool sbc = check_sub_boundarily_constant(f, ctx.pf.box, ctx.h);
    std::ostringstream csv;
    csv << "property,result\n";
    csv << "quasiconvex," << (qc.ok ? "yes" : "no") << "\n";
    csv << "semistrictly_quasiconvex," << (ss.ok ? "yes" : "no") << "\n";
    csv << "sub_boundarily_constant," << (sbc ? "yes" : "no") << "\n";
    ctx.report << "quasiconvex: " << (qc.ok ? "yes" : "no") << "\n";
    ctx.report << "semistrictly quasiconvex: " << (ss.ok ? "yes" : "no") << "\n";
    ctx.report << "sub-boundarily constant: " << (sbc ? "yes" : "no") << "\n";
    return finish(ctx, {{"analyze_f.csv", csv.str()}}, 0);
}

}  // namespace

RunReport run_command(const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Ctx ctx{opt, {}, 0, 0, 0, {}};
    try {
        ctx.pf = parse_problem(opt.problem_path);
    } catch (const std::exception& e) {
        RunReport rep;
        rep.exit_code = 1;
        rep.report_text = std::string("input error: ") + e.what() + "\n";
        return rep;
    }
    ctx.h = opt.h.value_or(ctx.pf.h);
    ctx.r = opt.r.value_or(ctx.pf.r);
    ctx.eps = opt.eps.value_or(ctx.pf.eps);
    ctx.report << "command: " << opt.command << "\n";
    ctx.report << "problem: " << opt.problem_path << "\n";
    ctx.report << "csv schema: v1\n";
    ctx.report << "h=" << format_number(ctx.h) << " r=" << format_number(ctx.r)
               << " eps=" << format_number(ctx.eps) << " seed=" << opt.seed << "\n";

    RunReport rep;
    try {
        if (opt.command == "solve-vi")
            rep = cmd_solve_vi(ctx);
        else if (opt.command == "solve-qvi")
            rep = cmd_solve_qvi(ctx);
        else if (opt.command == "check-repro")
            rep = cmd_check_repro(ctx);
        else if (opt.command == "solve-qopt")
            rep = cmd_solve_qopt(ctx);
        else if (opt.command == "stability-trial")
            rep = cmd_stability_trial(ctx);
        else if (opt.command == "solve-gnep")
            rep = cmd_solve_gnep(ctx);
        else if (opt.command == "solve-slmf")
            rep = cmd_solve_slmf(ctx);
        else if (opt.command == "classify-op")
            rep = cmd_classify_op(ctx);
        else if (opt.command == "analyze-f")
            rep = cmd_analyze_f(ctx);
        else {
            rep.exit_code = 1;
            rep.report_text = "input error: unknown command '" + opt.command + "'\n";
            return rep;
        }
    } catch (const std::exception& e) {
        rep.exit_code = 1;
        rep.report_text = ctx.report.str() + "input error: " + e.what() + "\n";
        return rep;
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep.report_text += "elapsed_ms: " + format_number(ms) + "\n";
    return rep;
}

void write_outputs(const RunReport& rep, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto write_atomic = [&](const std::string& name, const std::string& contents) {
        const fs::path final_path = fs::path(out_dir) / name;
        const fs::path tmp_path = fs::path(out_dir) / (name + ".tmp");
        {
            std::ofstream out(tmp_path, std::ios::binary);
            out << contents;
        }
        fs::rename(tmp_path, final_path);
    };
    write_atomic("report.txt", rep.report_text);
    for (const auto& [name, contents] : rep.csv_files) write_atomic(name, contents);
}

}  // namespace locvi
