#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "locvi/games.hpp"
#include "locvi/quasiopt.hpp"
#include "locvi/runner.hpp"
#include "locvi/stability.hpp"

namespace py = pybind11;
using namespace locvi;

namespace {

py::dict solution_to_dict(const LocalSolution& s) {
    py::dict d;
    d["x"] = s.x;
    if (s.multiplier) d["multiplier"] = *s.multiplier;
    d["radius"] = s.radius;
    d["epsilon"] = s.epsilon;
    d["kind"] = to_string(s.kind);
    return d;
}

py::list set_to_list(const SolutionSet& set) {
    py::list out;
    for (const auto& s : set.solutions) out.append(solution_to_dict(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(locvi, m) {
    m.doc() = "Local solutions of variational and quasi-variational inequalities";

    py::class_<ConvexPiece>(m, "ConvexPiece")
        .def_static("box", &ConvexPiece::box, py::arg("lo"), py::arg("hi"))
        .def_static("poly", &ConvexPiece::poly, py::arg("A"), py::arg("b"), py::arg("lo"),
                    py::arg("hi"))
        .def("member", &ConvexPiece::member)
        .def("distance", &ConvexPiece::distance)
        .def("project", &ConvexPiece::project);

    py::class_<Region>(m, "Region")
        .def(py::init<>())
        .def_readwrite("pieces", &Region::pieces)
        .def_readwrite("lattice_dims", &Region::lattice_dims)
        .def_static("box", &Region::box, py::arg("lo"), py::arg("hi"))
        .def_static("interval", &Region::interval, py::arg("a"), py::arg("b"))
        .def("dim", &Region::dim)
        .def("diameter", &Region::diameter)
        .def("translated", &Region::translated);

    m.def("contains", &contains, py::arg("region"), py::arg("y"),
          py::arg("eps") = kEpsMembership);
    m.def("distance", [](const Region& r, const Vec& y) { return distance(r, y); });
    m.def("grid", [](const Region& r, double h) { return grid(r, h).points; });
    m.def("interior_contains", &interior_contains);
    m.def("pk_liminf_contains", &pk_liminf_contains);

    py::class_<QuasiconvexFn>(m, "QuasiconvexFn")
        .def_static("affine", &QuasiconvexFn::affine)
        .def_static("abs_affine", &QuasiconvexFn::abs_affine)
        .def_static("dist_to", &QuasiconvexFn::dist_to)
        .def_static("max_affine", &QuasiconvexFn::max_affine)
        .def_static("table1d", &QuasiconvexFn::table1d)
        .def("__call__", &QuasiconvexFn::operator())
        .def("lipschitz", &QuasiconvexFn::lipschitz)
        .def("dim", &QuasiconvexFn::dim);

    m.def("check_quasiconvex", [](const QuasiconvexFn& f, const Region& box, double h) {
        const CheckResult r = check_quasiconvex(f, box, h);
        return py::make_tuple(r.ok, r.witness);
    });
    m.def("check_semistrict", [](const QuasiconvexFn& f, const Region& box, double h) {
        const CheckResult r = check_semistrict(f, box, h);
        return py::make_tuple(r.ok, r.witness);
    });
    m.def("check_sub_boundarily_constant", &check_sub_boundarily_constant);
    m.def("normal_adjusted", &normal_adjusted, py::arg("f"), py::arg("x"), py::arg("box"),
          py::arg("h"), py::arg("k"), py::arg("eps") = 1e-9);

    py::class_<DualMap>(m, "DualMap")
        .def(py::init([](int dim, std::function<std::vector<Vec>(const Vec&)> images,
                         bool exclude_zero) {
                 DualMap t;
                 t.dim = dim;
                 t.images = std::move(images);
                 t.exclude_zero = exclude_zero;
                 return t;
             }),
             py::arg("dim"), py::arg("images"), py::arg("exclude_zero") = false)
        .def_static("constant", &DualMap::constant)
        .def("eval", &DualMap::eval)
        .def("without_zero", &DualMap::without_zero);

    m.def("ff_map", &ff_map, py::arg("f"), py::arg("box"), py::arg("h"), py::arg("k") = 64,
          py::arg("exclude_zero") = false);
    m.def("classify_monotonicity",
          [](const DualMap& T, const Region& C, double h, double eps) {
              const MonotonicityReport rep = classify_monotonicity(T, C, h, eps);
              py::dict d;
              d["class"] = to_string(rep.cls);
              d["pseudo"] = rep.pseudo_ok;
              d["properly_quasi"] = rep.proper_ok;
              d["quasi"] = rep.quasi_ok;
              return d;
          });
    m.def("check_upper_sign_continuity", &check_upper_sign_continuity);

    m.def("solve_lsvi", [](const DualMap& T, const Region& C, double h, double r,
                           double eps) { return set_to_list(solve_lsvi(T, C, h, r, eps)); });
    m.def("solve_svi", [](const DualMap& T, const Region& C, double h, double eps) {
        return set_to_list(solve_svi(T, C, h, eps));
    });
    m.def("solve_lmvi", [](const DualMap& T, const Region& C, double h, double r,
                           double eps) { return set_to_list(solve_lmvi(T, C, h, r, eps)); });
    m.def("solve_mvi", [](const DualMap& T, const Region& C, double h, double eps) {
        return set_to_list(solve_mvi(T, C, h, eps));
    });

    py::class_<ConstraintMap>(m, "ConstraintMap")
        .def(py::init([](int dim, std::function<Region(const Vec&)> map) {
                 ConstraintMap k;
                 k.dim = dim;
                 k.map = std::move(map);
                 return k;
             }),
             py::arg("dim"), py::arg("map"))
        .def_static("constant", &ConstraintMap::constant)
        .def_static("linear_translation", &ConstraintMap::linear_translation)
        .def_static("circle", &ConstraintMap::circle)
        .def_static("step", &ConstraintMap::step)
        .def("__call__", &ConstraintMap::operator());

    m.def("fixed_points", &fixed_points);
    m.def("certify_local_repro", [](const ConstraintMap& K, const Vec& z, double r_max,
                                    double h, double eps_set) {
        const ReproCertificate c = certify_local_repro(K, z, r_max, h, eps_set);
        py::dict d;
        d["z"] = c.z;
        d["certified"] = c.certified;
        d["radius"] = c.radius;
        d["passing_radii"] = c.passing_radii;
        if (c.witness) d["witness"] = py::make_tuple(c.witness->z_prime, c.witness->y);
        return d;
    });
    m.def("repro_from_interior_graph", &repro_from_interior_graph);
    m.def("solve_lsqvi", [](const DualMap& T, const ConstraintMap& K, const Region& box,
                            double h, double r, double eps) {
        QviOptions o;
        o.h = h;
        o.r = r;
        o.eps = eps;
        return set_to_list(solve_lsqvi(T, K, box, o));
    });
    m.def("solve_lmqvi", [](const DualMap& T, const ConstraintMap& K, const Region& box,
                            double h, double r, double eps) {
        QviOptions o;
        o.h = h;
        o.r = r;
        o.eps = eps;
        return set_to_list(solve_lmqvi(T, K, box, o));
    });

    m.def("solve_lqopt",
          [](const QuasiconvexFn& f, const ConstraintMap& K, const Region& box, double h,
             double r, double eps, const std::string& method) {
              QuasiOptProblem P = make_qopt(f, K, box, h, r);
              if (method == "direct") return set_to_list(solve_lqopt_direct(P, eps));
              if (method == "union")
                  return set_to_list(solve_lqopt_union(P, eps, UnionInner::Opt));
              if (method == "vi") return set_to_list(solve_lqopt_union(P, eps, UnionInner::VI));
              throw std::invalid_argument("method must be direct|union|vi");
          },
          py::arg("f"), py::arg("K"), py::arg("box"), py::arg("h"), py::arg("r"),
          py::arg("eps"), py::arg("method") = "direct");

    py::class_<Follower>(m, "Follower")
        .def(py::init([](int dim,
                         std::function<double(const Vec&, const Vec&, const Vec&)> theta,
                         std::function<Region(const Vec&, const Vec&)> K) {
                 Follower f;
                 f.dim = dim;
                 f.theta = std::move(theta);
                 f.K = std::move(K);
                 return f;
             }),
             py::arg("dim"), py::arg("theta"), py::arg("K"));

    py::class_<GameSpec>(m, "GameSpec")
        .def(py::init([](std::vector<Follower> followers,
                         std::function<double(const Vec&, const Vec&)> F, Region C1,
                         Region C2) {
                 GameSpec g;
                 g.followers = std::move(followers);
                 g.leader_obj = std::move(F);
                 g.C1 = std::move(C1);
                 g.C2 = std::move(C2);
                 return g;
             }),
             py::arg("followers"), py::arg("leader_obj"), py::arg("C1"), py::arg("C2"));

    m.def("nikaido_isoda", &nikaido_isoda);
    m.def("gap", [](const GameSpec& g, const Vec& y, const Vec& x, double r, double h,
                    double eps) {
        const GapData d = gap(g, y, x, r, h, eps);
        py::dict out;
        out["value"] = d.value;
        out["argmax"] = d.argmax;
        out["radius"] = d.radius;
        return out;
    });
    m.def("solve_lgnep", [](const GameSpec& g, const Vec& x, double h, double r, double eps) {
        py::list out;
        for (const auto& d : solve_lgnep(g, x, h, r, eps)) {
            py::dict e;
            e["y"] = d.y;
            e["gap"] = d.value;
            e["radius"] = d.radius;
            out.append(e);
        }
        return out;
    });
    m.def("solve_sllmf", [](const GameSpec& g, double hx, double hy, double r, double eps) {
        const SllmfResult res = solve_sllmf(g, hx, hy, r, eps);
        py::dict d;
        d["x"] = res.x;
        d["y"] = res.y;
        d["leader_value"] = res.leader_value;
        return d;
    });

    py::class_<PerturbedFamily>(m, "PerturbedFamily")
        .def(py::init([](int x_dim, int lambda_dim, int mu_dim,
                         std::function<std::vector<Vec>(const Vec&, const Vec&)> T,
                         std::function<Region(const Vec&)> K, Region box,
                         std::function<double(const Vec&, const Vec&)> f,
                         std::function<Region(const Vec&, const Vec&)> K_joint) {
                 PerturbedFamily fam;
                 fam.x_dim = x_dim;
                 fam.lambda_dim = lambda_dim;
                 fam.mu_dim = mu_dim;
                 fam.T = std::move(T);
                 fam.K = std::move(K);
                 fam.box = std::move(box);
                 if (f) fam.f = std::move(f);
                 if (K_joint) fam.K_joint = std::move(K_joint);
                 return fam;
             }),
             py::arg("x_dim"), py::arg("lambda_dim"), py::arg("mu_dim"), py::arg("T"),
             py::arg("K"), py::arg("box"), py::arg("f") = nullptr,
             py::arg("K_joint") = nullptr);

    m.def("solve_lsvi_star",
          [](const PerturbedFamily& fam, const Vec& lam, const Vec& mu, double h, double r,
             double eps) { return set_to_list(solve_lsvi_star(fam, lam, mu, h, r, eps)); });
    m.def("solve_weak_int",
          [](const PerturbedFamily& fam, const Vec& lam, const Vec& mu, double h, double r,
             double eps) { return set_to_list(solve_weak_int(fam, lam, mu, h, r, eps)); });
    m.def("solve_lopt",
          [](const PerturbedFamily& fam, const Vec& lam, const Vec& mu, double h, double r,
             double eps) { return set_to_list(solve_lopt(fam, lam, mu, h, r, eps)); });
    m.def("closedness_trial",
          [](const PerturbedFamily& fam, const std::string& kind,
             const std::vector<std::pair<Vec, Vec>>& params, const Vec& lam0, const Vec& mu0,
             double h, double r, double eps) {
              TrialKind k;
              if (kind == "weak-int")
                  k = TrialKind::WeakInt;
              else if (kind == "star")
                  k = TrialKind::Star;
              else if (kind == "lopt")
                  k = TrialKind::LOpt;
              else if (kind == "lqopt")
                  k = TrialKind::LQOpt;
              else
                  throw std::invalid_argument("kind must be weak-int|star|lopt|lqopt");
              const TraceResult res = closedness_trial(fam, k, params, lam0, mu0, h, r, eps);
              py::dict d;
              d["verdict"] = res.verdict == Verdict::True
                                 ? "true"
                                 : (res.verdict == Verdict::False ? "false" : "inconclusive");
              d["limit_x"] = res.limit_x;
              d["matched"] = res.matched;
              d["hypotheses"] = res.hypotheses;
              d["failed_hypotheses"] = res.failed_hypotheses;
              d["diagnostic"] = res.diagnostic;
              return d;
          },
          py::arg("family"), py::arg("kind"), py::arg("params"), py::arg("lambda0"),
          py::arg("mu0"), py::arg("h"), py::arg("r"), py::arg("eps"));

    m.def("run_problem",
          [](const std::string& command, const std::string& path, const std::string& out_dir,
             const std::string& kind, const std::string& method, const std::string& trace,
             const Vec& leader_x) {
              RunOptions opt;
              opt.command = command;
              opt.problem_path = path;
              opt.out_dir = out_dir;
              opt.kind = kind;
              opt.method = method;
              opt.trace_path = trace;
              opt.leader_x = leader_x;
              const RunReport rep = run_command(opt);
              write_outputs(rep, out_dir);
              py::dict d;
              d["exit_code"] = rep.exit_code;
              d["report"] = rep.report_text;
              py::dict files;
              for (const auto& [name, contents] : rep.csv_files)
                  files[py::str(name)] = contents;
              d["csv"] = files;
              return d;
          },
          py::arg("command"), py::arg("path"), py::arg("out_dir") = "out",
          py::arg("kind") = "", py::arg("method") = "", py::arg("trace") = "",
          py::arg("leader_x") = Vec{});
}
