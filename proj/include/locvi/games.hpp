#pragma once

#include "locvi/qvi.hpp"

namespace locvi {

// One follower: an own-block decision y_i, an objective theta_i(y_i, y_-i, x)
// and a constraint map K_i(y_-i, x).
struct Follower {
    int dim = 1;
    std::function<double(const Vec& yi, const Vec& y_minus, const Vec& x)> theta;
    std::function<Region(const Vec& y_minus, const Vec& x)> K;
};

// Linear-translation structure: theta_i(., x) = c_i(x) . y_i + const and
// K_i(y_-i, x) = base_i + Lhat_i y + Lcheck_i x.
struct LinearTag {
    std::vector<std::function<Vec(const Vec& x)>> c;
    std::vector<Region> base;
    std::vector<std::vector<Vec>> Lhat;   // rows: m_i x m
    std::vector<std::vector<Vec>> Lcheck; // rows: m_i x n
};

struct GameSpec {
    std::vector<Follower> followers;
    std::function<double(const Vec& x, const Vec& y)> leader_obj;  // optional for LGNEP-only use
    Region C1;  // leader set
    Region C2;  // joint follower box
    std::optional<LinearTag> linear;

    int joint_dim() const;
    Vec block(const Vec& y, std::size_t i) const;        // y_i
    Vec block_complement(const Vec& y, std::size_t i) const;  // y_-i
    Region product_K(const Vec& y, const Vec& x) const;  // prod_i K_i(y_-i, x)

    static GameSpec linear_translation_game(std::vector<std::function<Vec(const Vec&)>> c,
                                            std::vector<Region> base,
                                            std::vector<std::vector<Vec>> Lhat,
                                            std::vector<std::vector<Vec>> Lcheck,
                                            std::function<double(const Vec&, const Vec&)> F,
                                            Region C1, Region C2);
};

// Nikaido-Isoda function: sum over followers of the own-block switch gain.
double nikaido_isoda(const GameSpec& g, const Vec& y, const Vec& z, const Vec& x);

struct GapData {
    Vec x, y;
    double radius = 0;
    double value = 0;
    Vec argmax;
};

// Gap value V(y, x) = max of Psi(y, ., x) over the grid of
// K(y, x) intersected with the sup-norm ball of radius r around y (the
// sup-norm makes the joint neighbourhood factor into per-player intervals).
// Throws when y is not a fixed point of K(., x).
GapData gap(const GameSpec& g, const Vec& y, const Vec& x, double r, double h, double eps);

// Local generalized Nash equilibria at leader decision x: grid fixed points
// with gap value <= eps, cross-checked against the per-player local
// minimality definition (mismatch throws "NI mismatch").
std::vector<GapData> solve_lgnep(const GameSpec& g, const Vec& x, double h, double r,
                                 double eps);

struct SllmfResult {
    Vec x, y;
    double leader_value = 0;
    std::size_t feasible_leader_points = 0;
};

// Optimistic single-leader game: exhaustive leader grid over C1, follower
// equilibria by solve_lgnep, inner optimistic selection, lexicographic
// smallest tie-break. For linear-tag games the closed-form gap is calibrated
// at a reference fixed point and validated against the grid gap.
SllmfResult solve_sllmf(const GameSpec& g, double hx, double hy, double r, double eps);

// Closed-form linear gap model: V(y,x) = sum_i c_i(x) . (y_i - zeta_i - L_i(y,x)).
struct LinearGapModel {
    std::vector<Vec> zeta;  // per block
    bool valid = false;
    std::string note;
};

LinearGapModel calibrate_linear_gap(const GameSpec& g, double h, double r, double eps);
double gap_closed_form(const GameSpec& g, const LinearGapModel& m, const Vec& y, const Vec& x);

}  // namespace locvi
