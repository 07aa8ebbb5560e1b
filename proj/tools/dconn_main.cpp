#include <CLI11.hpp>

#include "dconn/cli_commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"rank-2 connections on an elliptic curve: companion forms, "
                 "canonical coordinates, symplectic verification"};
    app.require_subcommand(1);

    dconn::CliOptions opt;
    std::uint64_t seed_value = 0;

    auto add_io = [&opt](CLI::App* cmd) {
        cmd->add_option("--input", opt.input, "problem JSON file")->required();
        cmd->add_option("--output", opt.output, "report JSON file")->required();
        cmd->add_option("--tol", opt.tol_overrides, "tolerance override key=value (repeatable)");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve the companion form parameters and verify residues");
    add_io(solve);
    CLI::App* verify = app.add_subcommand("verify", "full verification battery for one instance");
    add_io(verify);
    CLI::App* coords = app.add_subcommand("coords", "canonical coordinates of an instance");
    add_io(coords);
    CLI::App* invert = app.add_subcommand("invert", "reconstruct apparent data from coordinates");
    add_io(invert);
    CLI::App* symp = app.add_subcommand("symp-check", "Cech pairing vs sum dp^dq with Richardson steps");
    add_io(symp);
    symp->add_option("--pairs", opt.pairs, "number of direction pairs");
    symp->add_option("--steps", opt.steps, "finite-difference steps (two or more)");
    CLI::Option* seed_opt = symp->add_option("--seed", seed_value, "direction seed (fallback: DARBOUX_CONN_SEED)");
    symp->add_option("--fd-step", opt.fd_step, "preferred single step (informational)");

    CLI11_PARSE(app, argc, argv);

    if (seed_opt->count() > 0) opt.seed = seed_value;

    if (solve->parsed()) return dconn::run_solve(opt);
    if (verify->parsed()) return dconn::run_verify(opt);
    if (coords->parsed()) return dconn::run_coords(opt);
    if (invert->parsed()) return dconn::run_invert(opt);
    if (symp->parsed()) return dconn::run_symp_check(opt);
    return 2;
}
