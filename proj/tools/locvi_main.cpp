#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "locvi/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"locvi: local solutions of variational and quasi-variational inequalities"};
    app.set_help_flag("--help", "print help");  // frees -h for the grid-step flag
    app.require_subcommand(1);

    locvi::RunOptions opt;
    if (const char* env = std::getenv("LOCVI_OUT")) opt.out_dir = env;

    const std::vector<std::string> commands = {
        "solve-vi",  "solve-qvi", "check-repro", "solve-qopt", "stability-trial",
        "solve-gnep", "solve-slmf", "classify-op", "analyze-f"};

    double h = 0, r = 0, eps = 0;
    std::vector<double> leader;
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name, name);
        sub->set_help_flag("--help", "print help");
        sub->add_option("problem", opt.problem_path, "problem file")->required();
        sub->add_option("--h", h, "grid step override");
        sub->add_option("--r", r, "local radius override");
        sub->add_option("--eps", eps, "tolerance override");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--kind", opt.kind, "solution kind");
        sub->add_option("--method", opt.method, "solution method");
        sub->add_option("--seed", opt.seed, "seed echoed into the report");
        if (name == "stability-trial")
            sub->add_option("--trace", opt.trace_path, "trace file")->required();
        if (name == "solve-gnep")
            sub->add_option("--leader-x", leader, "leader decision vector")->required();
        sub->callback([&, name]() { opt.command = name; });
    }

    CLI11_PARSE(app, argc, argv);
    if (h > 0) opt.h = h;
    if (r > 0) opt.r = r;
    if (eps > 0) opt.eps = eps;
    opt.leader_x = leader;

    const locvi::RunReport rep = locvi::run_command(opt);
    locvi::write_outputs(rep, opt.out_dir);
    std::cout << rep.report_text;
    return rep.exit_code;
}
