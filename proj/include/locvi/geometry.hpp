#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locvi/vec.hpp"

namespace locvi {

// Default tolerances used across the toolkit.
inline constexpr double kEpsMembership = 1e-9;
inline constexpr double kEpsLattice = 1e-6;
inline constexpr double kEpsZero = 1e-8;
inline constexpr double kEpsDual = 1e-7;

// One convex, compact building block: an axis-aligned box or a bounded
// intersection of halfspaces {y : Ay <= b} clipped to a finite box.
struct ConvexPiece {
    enum class Kind { Box, Poly };

    Kind kind = Kind::Box;
    Vec lo, hi;              // box bounds; for Poly these bound the piece
    std::vector<Vec> rows;   // Poly only: rows of A
    Vec rhs;                 // Poly only: b

    static ConvexPiece box(Vec lo, Vec hi);
    static ConvexPiece poly(std::vector<Vec> A, Vec b, Vec lo, Vec hi);

    int dim() const { return static_cast<int>(lo.size()); }
    bool member(const Vec& y, double eps) const;
    // Euclidean projection; exact clamping for boxes, Dykstra cyclic
    // projections (closed-form halfspace/box steps) for poly pieces.
    Vec project(const Vec& y) const;
    double distance(const Vec& y) const;
    double diameter() const;  // diagonal of the bounding box
    ConvexPiece translated(const Vec& t) const;
};

// A compact subset of R^n: a finite union of convex pieces, optionally
// intersected with the integer lattice on selected coordinates.
struct Region {
    std::vector<ConvexPiece> pieces;
    std::vector<int> lattice_dims;  // sorted, unique

    int dim() const;
    Vec bounding_lo() const;
    Vec bounding_hi() const;
    // Diagonal of the overall bounding box (an upper bound on the true
    // diameter; used for global-solve radii and radius caps).
    double diameter() const;
    Region translated(const Vec& t) const;

    static Region interval(double a, double b);
    static Region box(Vec lo, Vec hi);
};

struct GridSample {
    double h = 0;
    std::vector<Vec> points;
};

bool contains(const Region& r, const Vec& y, double eps = kEpsMembership);
double distance(const Region& r, const Vec& y);
GridSample grid(const Region& r, double h);
// True iff the closed ball B(y, margin) lies inside some single piece of r
// (ambient interior; lattice-constrained regions have empty interior).
bool interior_contains(const Region& r, const Vec& y, double margin);
// Finite Painleve-Kuratowski lower-limit check: every grid point of `limit`
// must come within eps of S_n along the tail (last quartile) of the sequence.
bool pk_liminf_contains(const std::vector<Region>& seq, const Region& limit,
                        double h, double eps);
// Companion upper check: tail grid points of S_n must come within eps of
// `limit`. Together with pk_liminf_contains this is the finite-dimensional,
// bounded-set stand-in for set convergence used by the stability harness.
bool pk_limsup_within(const std::vector<Region>& seq, const Region& limit,
                      double h, double eps);

// Cartesian product of two regions (pieces multiply pairwise).
Region product(const Region& a, const Region& b);

}  // namespace locvi
