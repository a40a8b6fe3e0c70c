"""Smoke tests for the python bindings. Usage: test_smoke.py <problems-dir>."""

import math
import os
import sys
import tempfile

import locvi


def check(cond, what):
    if not cond:
        raise AssertionError(what)
    print(f"ok: {what}")


def test_geometry():
    box = locvi.Region.box([0.0, 0.0], [1.0, 1.0])
    check(locvi.contains(box, [0.5, 0.5]), "interior membership")
    check(not locvi.contains(box, [1.5, 0.5]), "outside membership")
    check(abs(locvi.distance(box, [2.0, 0.5]) - 1.0) < 1e-12, "distance to a box")

    lattice = locvi.Region.box([0.0, 0.0], [1.0, 1.0])
    lattice.lattice_dims = [0]
    check(locvi.contains(lattice, [1.0, 0.5]), "lattice slice membership")
    check(not locvi.contains(lattice, [0.5, 0.5]), "off-lattice rejection")
    pts = locvi.grid(lattice, 0.5)
    check(len(pts) == 6, "lattice grid size")


def test_vi_solver():
    region = locvi.Region.box([0.0, 0.0], [1.0, 1.0])
    region.lattice_dims = [0]
    T = locvi.DualMap.constant([1.0, 1.0])
    local = locvi.solve_lsvi(T, region, 0.1, 0.3, 1e-7)
    pts = sorted(tuple(s["x"]) for s in local)
    check(pts == [(0.0, 0.0), (1.0, 0.0)], "local VI solutions")
    global_ = locvi.solve_svi(T, region, 0.1, 1e-7)
    check(len(global_) == 1 and tuple(global_[0]["x"]) == (0.0, 0.0), "global VI solution")


def test_quasiconvex():
    f = locvi.QuasiconvexFn.abs_affine([1.0], 0.0)
    box = locvi.Region.interval(-2.0, 2.0)
    ok, _ = locvi.check_quasiconvex(f, box, 0.1)
    check(ok, "absolute value is quasiconvex")
    F = locvi.ff_map(f, box, 0.05, 2)
    check(F.eval([1.0]) == [[1.0]], "normal map away from the minimizer")
    rep = locvi.classify_monotonicity(F, box, 0.2, 1e-7)
    check(rep["quasi"], "normal map is quasimonotone")


def test_qvi():
    K = locvi.ConstraintMap.circle()
    box = locvi.Region.interval(-1.0, 1.0)
    fps = locvi.fixed_points(K, box, 0.01, 1e-7)
    c = 1.0 / math.sqrt(2.0)
    check(max(abs(p[0]) for p in fps) <= c + 0.01, "fixed points stay in range")
    cert = locvi.certify_local_repro(K, [0.0], 0.6, 0.01, 0.02)
    check(cert["certified"] and cert["radius"] >= 0.5, "center certificate")
    refuted = locvi.certify_local_repro(K, [c], 0.32, 0.01, 0.02)
    check(not refuted["certified"], "boundary refutation")


def test_games():
    followers = [
        locvi.Follower(1, lambda yi, ym, x: yi[0],
                       lambda ym, x: locvi.Region.interval(0.0, 1.0)),
        locvi.Follower(1, lambda yi, ym, x: yi[0],
                       lambda ym, x: locvi.Region.interval(0.0, 1.0)),
    ]
    game = locvi.GameSpec(followers,
                          lambda x, y: y[0] ** 2 + y[1] ** 2 + x[0] ** 2,
                          locvi.Region.interval(0.0, 1.0),
                          locvi.Region.box([0.0, 0.0], [1.0, 1.0]))
    eqs = locvi.solve_lgnep(game, [0.0], 0.1, 0.3, 1e-7)
    check(len(eqs) == 1 and tuple(eqs[0]["y"]) == (0.0, 0.0), "unique equilibrium")
    res = locvi.solve_sllmf(game, 0.1, 0.1, 0.3, 1e-7)
    check(tuple(res["x"]) == (0.0,), "leader optimum")


def test_stability():
    fam = locvi.PerturbedFamily(
        1, 1, 1,
        lambda x, lam: [[1.0]],
        lambda mu: locvi.Region.interval(mu[0], 1.0 + mu[0]),
        locvi.Region.interval(-1.0, 2.0))
    sols = locvi.solve_lsvi_star(fam, [0.0], [0.0], 0.05, 0.2, 1e-7)
    check(len(sols) == 1 and sols[0]["x"] == [0.0], "star solutions of a constant operator")
    rows = [([1.0 / n], [0.0]) for n in range(4, 16)]
    res = locvi.closedness_trial(fam, "star", rows, [0.0], [0.0], 0.05, 0.2, 1e-7)
    check(res["verdict"] == "true", "closedness trial verdict")


def test_runner(problems_dir):
    with tempfile.TemporaryDirectory() as out:
        rep = locvi.run_problem("solve-vi", os.path.join(problems_dir, "mixed_integer.prob"),
                                out_dir=out, kind="lsvi")
        check(rep["exit_code"] == 0, "runner exit code")
        check("solve_vi.csv" in rep["csv"], "runner CSV emitted")
        check(os.path.exists(os.path.join(out, "report.txt")), "report written")


def main():
    problems_dir = sys.argv[1] if len(sys.argv) > 1 else "problems"
    test_geometry()
    test_vi_solver()
    test_quasiconvex()
    test_qvi()
    test_games()
    test_stability()
    test_runner(problems_dir)
    print("python smoke tests passed")


if __name__ == "__main__":
    main()
