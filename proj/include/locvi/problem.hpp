#pragma once

#include <map>
#include <optional>
#include <string>

#include "locvi/games.hpp"
#include "locvi/stability.hpp"

namespace locvi {

// Parse error with location information.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// A parsed problem file. Sections: [meta] (dim, box, h, r, eps, hx, hy,
// samples), [region], [function], [operator], [map], [family], [game].
// Parsing is strict: unknown sections, unknown keys, unresolved names and
// dimension mismatches are all rejected with line-level diagnostics.
struct ProblemFile {
    int dim = 0;
    Region box;
    double h = 0;
    double r = 0;
    double eps = 1e-7;
    double hx = 0;  // leader grid step (solve-slmf); defaults to h
    double hy = 0;  // follower grid step; defaults to h
    int samples = 64;

    std::map<std::string, Region> regions;
    std::map<std::string, QuasiconvexFn> functions;
    std::map<std::string, DualMap> operators;
    std::map<std::string, ConstraintMap> maps;
    std::map<std::string, PerturbedFamily> families;
    std::optional<GameSpec> game;
};

ProblemFile parse_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text);

// Trace file for stability-trial: `limit = ([l...],[m...])` plus one
// `row = ([l...],[m...])` line per instance, in order.
struct TraceFile {
    std::vector<std::pair<Vec, Vec>> rows;
    Vec lambda0, mu0;
};

TraceFile parse_trace(const std::string& path);
TraceFile parse_trace_text(const std::string& text);

}  // namespace locvi
