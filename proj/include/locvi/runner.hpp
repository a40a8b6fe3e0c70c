#pragma once

#include <map>
#include <optional>
#include <string>

#include "locvi/problem.hpp"

namespace locvi {

struct RunOptions {
    std::string command;
    std::string problem_path;
    std::string out_dir = "out";
    std::optional<double> h, r, eps;
    std::string kind;     // per-command: lsvi|svi|lmvi|mvi, stampacchia|minty, ...
    std::string method;   // union|direct|both or direct|union|vi|all
    std::string trace_path;
    Vec leader_x;
    unsigned seed = 0;    // echoed into the report; all runs are deterministic
};

// Exit codes: 0 success, 1 input error, 2 theorem-consistency mismatch.
struct RunReport {
    int exit_code = 0;
    std::string report_text;
    std::map<std::string, std::string> csv_files;  // filename -> contents
};

RunReport run_command(const RunOptions& opt);

// Writes report.txt plus all CSV files into out_dir (atomically: temp file
// then rename). Creates the directory when missing.
void write_outputs(const RunReport& rep, const std::string& out_dir);

std::string format_number(double v);

}  // namespace locvi
