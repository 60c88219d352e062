// stigmem command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stigmem/commands.hpp"

int main(int argc, char** argv) {
    using namespace stigmem;

    CLI::App app{"stigmem - stigmergic collective memory simulator"};
    app.require_subcommand(1);

    // run ------------------------------------------------------------------
    RunCommandOptions run_opt;
    auto* run = app.add_subcommand("run", "Execute one simulation run");
    run->add_option("--config", run_opt.config_path, "Run-config file (key = value)");
    run->add_option("--preset", run_opt.preset,
                    "Configuration preset (full_memory, enhanced_memory, memory_no_traces, "
                    "limited_memory, no_memory, traces_only, random_movement)");
    auto* run_seed = run->add_option("--seed", run_opt.seed, "Run seed");
    run->add_option("--grid", run_opt.grid, "Square grid side length");
    run->add_option("--agents", run_opt.agents, "Agent count");
    run->add_option("--steps", run_opt.steps, "Step count");
    run->add_option("--out", run_opt.out_dir, "Output directory");
    run->add_option("--traces-out", run_opt.traces_out, "Per-step trace snapshot CSV");

    // baseline -------------------------------------------------------------
    BaselineOptions base_opt;
    auto* baseline =
        app.add_subcommand("baseline", "Run all seven presets and compare with Welch t-tests");
    baseline->add_option("--grid", base_opt.grid, "Square grid side length");
    baseline->add_option("--agents", base_opt.agents, "Agent count");
    baseline->add_option("--runs", base_opt.runs, "Seeds per preset");
    baseline->add_option("--steps", base_opt.steps, "Step count");
    baseline->add_option("--seed-base", base_opt.seed_base, "Seed of the first run");
    baseline->add_option("--jobs", base_opt.jobs, "Parallel workers (0 = hardware)");
    baseline->add_option("--out", base_opt.out_dir, "Output directory");

    // sweep ------------------------------------------------------------------
    SweepOptions sweep_opt;
    std::string densities_arg;
    std::string configs_arg;
    auto* sweep = app.add_subcommand("sweep", "Density sweep across configurations");
    sweep->add_option("--densities", densities_arg, "Comma-separated agent densities");
    sweep->add_option("--grid", sweep_opt.grid, "Square grid side length");
    sweep->add_option("--runs", sweep_opt.runs, "Seeds per (density, config)");
    sweep->add_option("--steps", sweep_opt.steps, "Step count");
    sweep->add_option("--configs", configs_arg, "Comma-separated preset names");
    sweep->add_option("--seed-base", sweep_opt.seed_base, "Seed of the first run");
    sweep->add_option("--jobs", sweep_opt.jobs, "Parallel workers (0 = hardware)");
    sweep->add_option("--out", sweep_opt.out_dir, "Output directory");

    // robustness -------------------------------------------------------------
    RobustnessOptions rob_opt;
    auto* robustness = app.add_subcommand("robustness", "Perturbation scenarios with resilience scores");
    robustness
        ->add_option("--scenario", rob_opt.scenario,
                     "agent_failure | trace_corruption | dynamic_food")
        ->required();
    robustness->add_option("--preset", rob_opt.preset, "Configuration preset");
    robustness->add_option("--grid", rob_opt.grid, "Square grid side length");
    robustness->add_option("--agents", rob_opt.agents, "Agent count");
    robustness->add_option("--runs", rob_opt.runs, "Number of seeds");
    robustness->add_option("--steps", rob_opt.steps, "Step count");
    robustness->add_option("--fraction", rob_opt.fraction, "Perturbation fraction (scenario default if unset)");
    robustness->add_option("--trigger", rob_opt.trigger, "Trigger step");
    robustness->add_option("--seed-base", rob_opt.seed_base, "Seed of the first run");
    robustness->add_option("--jobs", rob_opt.jobs, "Parallel workers (0 = hardware)");
    robustness->add_option("--out", rob_opt.out_dir, "Output directory");

    // meanfield ----------------------------------------------------------------
    MeanfieldOptions mf_opt;
    auto* meanfield =
        app.add_subcommand("meanfield", "Mean-field eigenvalue analysis and order-parameter curve");
    meanfield->add_option("--rho-min", mf_opt.rho_min, "Smallest density");
    meanfield->add_option("--rho-max", mf_opt.rho_max, "Largest density");
    meanfield->add_option("--points", mf_opt.points, "Grid points");
    meanfield->add_option("--alpha", mf_opt.params.alpha, "Memory acquisition rate");
    meanfield->add_option("--beta", mf_opt.params.beta, "Memory decay rate");
    meanfield->add_option("--mu", mf_opt.params.mu, "Effective trace decay rate");
    meanfield->add_option("--mean-degree", mf_opt.params.mean_degree, "Mean interaction degree");
    meanfield->add_option("--chi", mf_opt.params.chi, "Trace-to-memory conversion");
    meanfield->add_option("--kappa", mf_opt.params.kappa, "Memory-to-trace deposition");
    meanfield->add_option("--out", mf_opt.out_dir, "Output directory");

    // world ---------------------------------------------------------------------
    WorldDumpOptions world_opt;
    auto* world = app.add_subcommand("world", "World utilities");
    world->require_subcommand(1);
    auto* dump = world->add_subcommand("dump", "Generate a world and write it as JSON");
    int world_grid = 0;
    dump->add_option("--grid", world_grid, "Square grid side length");
    dump->add_option("--width", world_opt.world.width, "Grid width");
    dump->add_option("--height", world_opt.world.height, "Grid height");
    dump->add_option("--food-fraction", world_opt.world.food_fraction, "Food cell fraction");
    dump->add_option("--obstacle-fraction", world_opt.world.obstacle_fraction, "Obstacle cell fraction");
    dump->add_option("--danger-fraction", world_opt.world.danger_fraction, "Danger cell fraction");
    dump->add_option("--seed", world_opt.seed, "Run seed (world derives from it)");
    dump->add_option("--out", world_opt.out, "Output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) {
            run_opt.seed_set = run_seed->count() > 0;
            return cmd_run(run_opt);
        }
        if (baseline->parsed()) return cmd_baseline(base_opt);
        if (sweep->parsed()) {
            auto split = [](const std::string& s) {
                std::vector<std::string> out;
                std::size_t start = 0;
                while (start <= s.size()) {
                    const auto comma = s.find(',', start);
                    const auto end = comma == std::string::npos ? s.size() : comma;
                    if (end > start) out.push_back(s.substr(start, end - start));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                return out;
            };
            if (!densities_arg.empty()) {
                sweep_opt.densities.clear();
                for (const auto& d : split(densities_arg)) sweep_opt.densities.push_back(std::stod(d));
            }
            if (!configs_arg.empty()) sweep_opt.configs = split(configs_arg);
            return cmd_sweep(sweep_opt);
        }
        if (robustness->parsed()) return cmd_robustness(rob_opt);
        if (meanfield->parsed()) return cmd_meanfield(mf_opt);
        if (world->parsed() && dump->parsed()) {
            if (world_grid > 0) world_opt.world.width = world_opt.world.height = world_grid;
            return cmd_world_dump(world_opt);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
