#pragma once
// Command implementations behind the CLI: single runs, the seven-preset
// baseline suite with Welch statistics, density sweeps, robustness scenarios,
// mean-field analysis, and world dumps. Every command writes deterministic
// files for a given flag set; batch runs use seed_base + i and aggregate in
// seed order.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "stigmem/batch.hpp"
#include "stigmem/engine.hpp"
#include "stigmem/io.hpp"
#include "stigmem/meanfield.hpp"
#include "stigmem/stats.hpp"

namespace stigmem {

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;
};

inline Summary summarize(const std::vector<double>& v) {
    if (v.empty()) return {};
    Summary s;
    s.mean = mean(v);
    s.stddev = v.size() >= 2 ? sample_stddev(v) : 0.0;
    return s;
}

// ---------------------------------------------------------------- run -----

struct RunCommandOptions {
    std::string config_path;  // key=value file; exclusive with preset
    std::string preset;       // preset name; default full_memory
    std::uint64_t seed = 1;
    bool seed_set = false;
    int grid = 0;     // 0 keeps the config's grid
    int agents = -1;  // <0 keeps the config's agent count
    int steps = -1;   // <0 keeps the config's step count
    std::string out_dir = ".";
    std::string traces_out;  // optional per-step trace snapshot CSV
};

inline ModelConfig resolve_run_config(const RunCommandOptions& opt) {
    if (!opt.config_path.empty() && !opt.preset.empty())
        throw config_error("run: --config and --preset are mutually exclusive");
    ModelConfig cfg = opt.config_path.empty()
                          ? build_configuration(opt.preset.empty() ? "full_memory" : opt.preset)
                          : load_model_config(opt.config_path);
    if (opt.seed_set || opt.config_path.empty()) cfg.seed = opt.seed;
    if (opt.grid > 0) cfg.world.width = cfg.world.height = opt.grid;
    if (opt.agents >= 0) cfg.n_agents = opt.agents;
    if (opt.steps >= 0) cfg.steps = opt.steps;
    return cfg;
}

inline int cmd_run(const RunCommandOptions& opt) {
    const ModelConfig cfg = resolve_run_config(opt);
    const std::filesystem::path dir(opt.out_dir);

    RunRecord record;
    if (opt.traces_out.empty()) {
        record = run_model(cfg);
    } else {
        std::string snapshot = "step,x,y,category,total_strength,n_depositors\n";
        record = run_model(cfg, [&](const Model& m) {
            append_trace_snapshot(snapshot, m.traces, m.now - 1);
        });
        write_text_file(opt.traces_out, snapshot);
    }

    const std::string stem = "run_" + record.config_name + "_" + std::to_string(record.seed);
    write_text_file(dir / (stem + ".json"), run_record_to_json(record).dump(2) + "\n");
    write_text_file(dir / (stem + ".csv"), run_series_csv(record));

    std::printf("%s seed=%llu performance=%s food_efficiency=%s coverage=%s alive=%d\n",
                record.config_name.c_str(), (unsigned long long)record.seed,
                fmt_double(record.performance).c_str(), fmt_double(record.food_efficiency).c_str(),
                fmt_double(record.coverage).c_str(), record.alive_final);
    return 0;
}

// ----------------------------------------------------------- baseline -----

struct BaselineOptions {
    int grid = 15;
    int agents = 7;
    int runs = 50;
    int steps = 100;
    std::uint64_t seed_base = 1;
    int jobs = 0;
    std::string out_dir = ".";
};

inline int cmd_baseline(const BaselineOptions& opt) {
    if (opt.runs < 1) throw config_error("baseline: runs must be >= 1");
    const auto& presets = preset_names();

    std::vector<ModelConfig> configs;
    configs.reserve(presets.size() * std::size_t(opt.runs));
    for (const auto& name : presets)
        for (int i = 0; i < opt.runs; ++i) {
            ModelConfig cfg = build_configuration(name);
            cfg.world.width = cfg.world.height = opt.grid;
            cfg.n_agents = opt.agents;
            cfg.steps = opt.steps;
            cfg.seed = opt.seed_base + std::uint64_t(i);
            configs.push_back(cfg);
        }
    const auto records = run_batch(configs, opt.jobs);

    std::string runs_csv = std::string(run_row_header()) + "\n";
    for (const auto& r : records) runs_csv += run_row_csv(r) + "\n";

    std::vector<std::vector<double>> perf(presets.size()), food(presets.size());
    std::string summary_csv =
        "config,runs,performance_mean,performance_std,food_efficiency_mean,food_efficiency_std,"
        "coverage_mean,coverage_std,coordination_mean,coordination_std,order_parameter_mean,"
        "order_parameter_std\n";
    std::printf("%-18s %14s %14s %10s\n", "config", "performance", "food_eff", "coverage");
    for (std::size_t c = 0; c < presets.size(); ++c) {
        std::vector<double> cov, coord, order;
        for (int i = 0; i < opt.runs; ++i) {
            const auto& r = records[c * std::size_t(opt.runs) + std::size_t(i)];
            perf[c].push_back(r.performance);
            food[c].push_back(r.food_efficiency);
            cov.push_back(r.coverage);
            coord.push_back(r.coordination_per_agent);
            order.push_back(r.order_parameter);
        }
        const auto sp = summarize(perf[c]), sf = summarize(food[c]), sc = summarize(cov);
        const auto sd = summarize(coord), so = summarize(order);
        summary_csv += csv_field(presets[c]) + ',' + std::to_string(opt.runs) + ',' +
                       fmt_double(sp.mean) + ',' + fmt_double(sp.stddev) + ',' +
                       fmt_double(sf.mean) + ',' + fmt_double(sf.stddev) + ',' +
                       fmt_double(sc.mean) + ',' + fmt_double(sc.stddev) + ',' +
                       fmt_double(sd.mean) + ',' + fmt_double(sd.stddev) + ',' +
                       fmt_double(so.mean) + ',' + fmt_double(so.stddev) + '\n';
        std::printf("%-18s %7.2f±%5.2f %8.2f±%4.2f %9.3f\n", presets[c].c_str(), sp.mean,
                    sp.stddev, sf.mean, sf.stddev, sc.mean);
    }

    // Pairwise Welch tests on performance and food efficiency. Degenerate
    // pairs (too few runs or zero variance) are skipped.
    std::string welch_csv = "metric,config_a,config_b,t,df,p\n";
    auto add_pairs = [&](const char* metric, const std::vector<std::vector<double>>& samples) {
        for (std::size_t i = 0; i < presets.size(); ++i)
            for (std::size_t j = i + 1; j < presets.size(); ++j) {
                try {
                    const auto w = welch_t_test(samples[i], samples[j]);
                    welch_csv += std::string(metric) + ',' + csv_field(presets[i]) + ',' +
                                 csv_field(presets[j]) + ',' + fmt_double(w.t) + ',' +
                                 fmt_double(w.df) + ',' + fmt_double(w.p) + '\n';
                } catch (const argument_error&) {
                    // skip degenerate pair
                }
            }
    };
    add_pairs("performance", perf);
    add_pairs("food_efficiency", food);

    const std::filesystem::path dir(opt.out_dir);
    write_text_file(dir / "baseline_runs.csv", runs_csv);
    write_text_file(dir / "baseline_summary.csv", summary_csv);
    write_text_file(dir / "baseline_welch.csv", welch_csv);
    return 0;
}

// -------------------------------------------------------------- sweep -----

struct SweepOptions {
    std::vector<double> densities{0.049, 0.102, 0.151, 0.200, 0.249};
    int grid = 15;
    int runs = 10;
    int steps = 100;
    std::vector<std::string> configs{"full_memory", "traces_only"};
    std::uint64_t seed_base = 1;
    int jobs = 0;
    std::string out_dir = ".";
};

inline int agents_for_density(double rho, int grid) {
    return int(std::lround(rho * grid * grid));
}

inline int cmd_sweep(const SweepOptions& opt) {
    if (opt.densities.empty()) throw config_error("sweep: need at least one density");
    if (opt.configs.empty()) throw config_error("sweep: need at least one config");
    if (opt.runs < 1) throw config_error("sweep: runs must be >= 1");

    std::vector<ModelConfig> configs;
    for (double rho : opt.densities)
        for (const auto& name : opt.configs)
            for (int i = 0; i < opt.runs; ++i) {
                ModelConfig cfg = build_configuration(name);
                cfg.world.width = cfg.world.height = opt.grid;
                cfg.n_agents = agents_for_density(rho, opt.grid);
                cfg.steps = opt.steps;
                cfg.seed = opt.seed_base + std::uint64_t(i);
                configs.push_back(cfg);
            }
    const auto records = run_batch(configs, opt.jobs);

    std::string runs_csv = std::string(run_row_header()) + "\n";
    for (const auto& r : records) runs_csv += run_row_csv(r) + "\n";

    std::string summary_csv =
        "density,agents,config,runs,food_efficiency_mean,food_efficiency_std,performance_mean,"
        "performance_std\n";
    const std::size_t per_cell = std::size_t(opt.runs);
    const std::size_t per_density = opt.configs.size() * per_cell;
    std::printf("%-8s %-7s %-18s %14s %14s\n", "density", "agents", "config", "food_eff",
                "performance");
    for (std::size_t d = 0; d < opt.densities.size(); ++d) {
        const int agents = agents_for_density(opt.densities[d], opt.grid);
        for (std::size_t c = 0; c < opt.configs.size(); ++c) {
            std::vector<double> food, perf;
            for (std::size_t i = 0; i < per_cell; ++i) {
                const auto& r = records[d * per_density + c * per_cell + i];
                food.push_back(r.food_efficiency);
                perf.push_back(r.performance);
            }
            const auto sf = summarize(food), sp = summarize(perf);
            summary_csv += fmt_double(opt.densities[d]) + ',' + std::to_string(agents) + ',' +
                           csv_field(opt.configs[c]) + ',' + std::to_string(opt.runs) + ',' +
                           fmt_double(sf.mean) + ',' + fmt_double(sf.stddev) + ',' +
                           fmt_double(sp.mean) + ',' + fmt_double(sp.stddev) + '\n';
            std::printf("%-8s %-7d %-18s %7.2f±%5.2f %7.2f±%5.2f\n",
                        fmt_double(opt.densities[d]).c_str(), agents, opt.configs[c].c_str(),
                        sf.mean, sf.stddev, sp.mean, sp.stddev);
        }
    }

    const std::filesystem::path dir(opt.out_dir);
    write_text_file(dir / "sweep_runs.csv", runs_csv);
    write_text_file(dir / "sweep_summary.csv", summary_csv);

    // With exactly two configs, report the per-density food-efficiency ratio
    // of the first over the second, and its rank trend against density.
    if (opt.configs.size() == 2) {
        std::string ratio_csv = "density,agents,food_ratio_of_means,mean_paired_ratio\n";
        std::vector<double> xs, ys;
        for (std::size_t d = 0; d < opt.densities.size(); ++d) {
            double mean_a = 0.0, mean_b = 0.0, paired = 0.0;
            for (std::size_t i = 0; i < per_cell; ++i) {
                const auto& ra = records[d * per_density + 0 * per_cell + i];
                const auto& rb = records[d * per_density + 1 * per_cell + i];
                mean_a += ra.food_efficiency;
                mean_b += rb.food_efficiency;
                const double ratio = rb.food_efficiency > 0
                                         ? ra.food_efficiency / rb.food_efficiency
                                         : std::numeric_limits<double>::infinity();
                paired += ratio;
                xs.push_back(opt.densities[d]);
                ys.push_back(ratio);
            }
            mean_a /= double(per_cell);
            mean_b /= double(per_cell);
            paired /= double(per_cell);
            ratio_csv += fmt_double(opt.densities[d]) + ',' +
                         std::to_string(agents_for_density(opt.densities[d], opt.grid)) + ',' +
                         fmt_double(mean_b > 0 ? mean_a / mean_b : 0.0) + ',' +
                         fmt_double(paired) + '\n';
        }
        write_text_file(dir / "sweep_ratio.csv", ratio_csv);
        if (opt.densities.size() >= 3 && xs.size() >= 3) {
            const auto sr = spearman(xs, ys);
            std::printf("food ratio %s/%s vs density: spearman rho=%s p=%s\n",
                        opt.configs[0].c_str(), opt.configs[1].c_str(), fmt_double(sr.rho).c_str(),
                        fmt_double(sr.p).c_str());
        }
    }
    return 0;
}

// --------------------------------------------------------- robustness -----

struct RobustnessOptions {
    std::string scenario = "agent_failure";
    std::string preset = "full_memory";
    int grid = 15;
    int agents = 12;
    int runs = 20;
    int steps = 100;
    double fraction = -1.0;  // <0 picks the scenario default
    int trigger = 50;
    std::uint64_t seed_base = 1;
    int jobs = 0;
    std::string out_dir = ".";
};

inline PerturbKind parse_scenario(const std::string& s) {
    if (s == "agent_failure") return PerturbKind::agent_failure;
    if (s == "trace_corruption") return PerturbKind::trace_corruption;
    if (s == "dynamic_food") return PerturbKind::dynamic_food;
    throw config_error("robustness: unknown scenario '" + s + "'");
}

struct ResilienceRow {
    std::uint64_t seed = 0;
    double pre = 0.0;
    double post = 0.0;
    double resilience = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<ResilienceRow> run_robustness(const RobustnessOptions& opt) {
    const PerturbKind kind = parse_scenario(opt.scenario);
    double fraction = opt.fraction;
    if (fraction < 0)
        fraction = kind == PerturbKind::agent_failure ? 1.0 / 6.0
                   : kind == PerturbKind::trace_corruption ? 0.5
                                                           : 0.0;
    // Dynamic food relocates on a fixed 25-step cadence; the resilience
    // window brackets the first relocation.
    const int trigger = kind == PerturbKind::dynamic_food ? 25 : opt.trigger;
    const int window = 25;
    if (trigger - window < 0 || trigger + window > opt.steps)
        throw config_error("robustness: trigger/window do not fit in the run");

    std::vector<ModelConfig> configs;
    configs.reserve(std::size_t(opt.runs));
    for (int i = 0; i < opt.runs; ++i) {
        ModelConfig cfg = build_configuration(opt.preset);
        cfg.world.width = cfg.world.height = opt.grid;
        cfg.n_agents = opt.agents;
        cfg.steps = opt.steps;
        cfg.seed = opt.seed_base + std::uint64_t(i);
        cfg.perturb.kind = kind;
        cfg.perturb.fraction = fraction;
        cfg.perturb.trigger_step = trigger;
        cfg.perturb.window = window;
        configs.push_back(cfg);
    }
    const auto records = run_batch(configs, opt.jobs);

    std::vector<ResilienceRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        ResilienceRow row;
        row.seed = r.seed;
        row.pre = windowed_performance(r, trigger - window, trigger);
        row.post = windowed_performance(r, trigger, trigger + window);
        row.resilience = resilience_score(row.pre, row.post);
        rows.push_back(row);
    }
    return rows;
}

inline int cmd_robustness(const RobustnessOptions& opt) {
    const auto rows = run_robustness(opt);

    std::string csv = "scenario,seed,pre_performance,post_performance,resilience\n";
    std::vector<double> defined;
    for (const auto& row : rows) {
        csv += csv_field(opt.scenario) + ',' + std::to_string(row.seed) + ',' +
               fmt_double(row.pre) + ',' + fmt_double(row.post) + ',';
        if (std::isnan(row.resilience)) {
            csv += '\n';  // undefined: pre-window performance was zero
        } else {
            csv += fmt_double(row.resilience) + '\n';
            defined.push_back(row.resilience);
        }
    }
    const std::filesystem::path dir(opt.out_dir);
    write_text_file(dir / ("robustness_" + opt.scenario + ".csv"), csv);

    const auto s = summarize(defined);
    std::printf("%s: resilience %.4f ± %.4f over %zu/%zu defined runs\n", opt.scenario.c_str(),
                s.mean, s.stddev, defined.size(), rows.size());
    return 0;
}

// ---------------------------------------------------------- meanfield -----

struct MeanfieldOptions {
    double rho_min = 0.0;
    double rho_max = 0.5;
    int points = 101;
    MeanFieldParams params{};
    std::string out_dir = ".";
};

inline int cmd_meanfield(const MeanfieldOptions& opt) {
    if (opt.points < 2) throw config_error("meanfield: need at least two grid points");
    if (!(opt.rho_max > opt.rho_min) || opt.rho_min < 0)
        throw config_error("meanfield: invalid density range");

    std::vector<double> grid;
    grid.reserve(std::size_t(opt.points));
    for (int i = 0; i < opt.points; ++i)
        grid.push_back(opt.rho_min +
                       (opt.rho_max - opt.rho_min) * double(i) / double(opt.points - 1));

    const auto curve = order_parameter_curve(opt.params, grid);
    std::string csv = "rho,lambda_plus,lambda_minus,order_parameter\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto eig = jacobian_eigenvalues(opt.params, grid[i]);
        csv += fmt_double(grid[i]) + ',' + fmt_double(eig.plus) + ',' + fmt_double(eig.minus) +
               ',' + fmt_double(curve[i].second) + '\n';
    }
    write_text_file(std::filesystem::path(opt.out_dir) / "meanfield.csv", csv);

    const double rho_c = critical_density(opt.params);
    std::printf("rho_c = %.4f\n", rho_c);
    return 0;
}

// --------------------------------------------------------- world dump -----

struct WorldDumpOptions {
    WorldConfig world{};
    std::uint64_t seed = 1;
    std::string out = "world.json";
};

inline int cmd_world_dump(const WorldDumpOptions& opt) {
    // Same derivation the engine uses, so a dump shows exactly the world a
    // run with this seed will see.
    const World w = World::generate(opt.world, Rng::derive(opt.seed, "world"));
    write_text_file(opt.out, world_to_json(w).dump(2) + "\n");
    std::printf("world %dx%d seed=%llu food=%zu obstacles=%zu danger=%zu -> %s\n", w.width(),
                w.height(), (unsigned long long)opt.seed, w.food_sites().size(),
                w.obstacle_sites().size(), w.danger_sites().size(), opt.out.c_str());
    return 0;
}

} // namespace stigmem
