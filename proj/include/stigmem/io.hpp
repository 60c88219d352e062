#pragma once
// File formats: the flat key=value run-config format, CSV helpers with
// RFC-4180 quoting, and JSON serialization of worlds and run records.

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stigmem/engine.hpp"
#include "stigmem/errors.hpp"
#include "stigmem/world.hpp"

namespace stigmem {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string csv_field(std::string_view s) {
    const bool needs_quotes = s.find_first_of(",\"\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("io: cannot open '" + path.string() + "' for writing");
    out << content;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("io: cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

} // namespace detail

// Parse the flat key = value run-config format. Blank lines and lines
// starting with '#' are ignored. When present, `preset` is applied first and
// the remaining keys override it.
inline ModelConfig parse_model_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected 'key = value', got '" + t + "'");
        pairs.emplace_back(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }

    ModelConfig cfg;
    for (const auto& [key, value] : pairs)
        if (key == "preset") cfg = build_configuration(value);

    for (const auto& [key, value] : pairs) {
        try {
            if (key == "preset") {
                // already applied
            } else if (key == "width") {
                cfg.world.width = std::stoi(value);
            } else if (key == "height") {
                cfg.world.height = std::stoi(value);
            } else if (key == "food_fraction") {
                cfg.world.food_fraction = std::stod(value);
            } else if (key == "obstacle_fraction") {
                cfg.world.obstacle_fraction = std::stod(value);
            } else if (key == "danger_fraction") {
                cfg.world.danger_fraction = std::stod(value);
            } else if (key == "danger_damage_min") {
                cfg.world.danger_damage_min = std::stoi(value);
            } else if (key == "danger_damage_max") {
                cfg.world.danger_damage_max = std::stoi(value);
            } else if (key == "food_energy_value") {
                cfg.world.food_energy_value = std::stod(value);
            } else if (key == "food_patch_size") {
                cfg.world.food_patch_size = std::stod(value);
            } else if (key == "food_regen_steps") {
                cfg.world.food_regen_steps = std::stoi(value);
            } else if (key == "topology") {
                if (value == "bounded")
                    cfg.world.topology = Topology::bounded;
                else if (value == "torus")
                    cfg.world.topology = Topology::torus;
                else
                    throw config_error("config: topology must be 'bounded' or 'torus'");
            } else if (key == "n_agents") {
                cfg.n_agents = std::stoi(value);
            } else if (key == "steps") {
                cfg.steps = std::stoi(value);
            } else if (key == "memory_enabled") {
                cfg.memory_enabled = detail::parse_bool(value, key);
            } else if (key == "traces_enabled") {
                cfg.traces_enabled = detail::parse_bool(value, key);
            } else if (key == "memory_capacity") {
                cfg.memory_capacity = std::size_t(std::stoul(value));
            } else if (key == "w_mem") {
                cfg.w_mem = std::stod(value);
            } else if (key == "delta_food") {
                cfg.delta_food = std::stod(value);
            } else if (key == "random_movement") {
                cfg.random_movement = detail::parse_bool(value, key);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "perturb") {
                if (value == "none")
                    cfg.perturb.kind = PerturbKind::none;
                else if (value == "agent_failure")
                    cfg.perturb.kind = PerturbKind::agent_failure;
                else if (value == "trace_corruption")
                    cfg.perturb.kind = PerturbKind::trace_corruption;
                else if (value == "dynamic_food")
                    cfg.perturb.kind = PerturbKind::dynamic_food;
                else
                    throw config_error("config: unknown perturb scenario '" + value + "'");
            } else if (key == "perturb_fraction") {
                cfg.perturb.fraction = std::stod(value);
            } else if (key == "perturb_trigger") {
                cfg.perturb.trigger_step = std::stoi(value);
            } else {
                throw config_error("config: unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw config_error("config: bad value for key '" + key + "': '" + value + "'");
        } catch (const std::out_of_range&) {
            throw config_error("config: value out of range for key '" + key + "'");
        }
    }
    return cfg;
}

inline ModelConfig load_model_config(const std::filesystem::path& path) {
    return parse_model_config(read_text_file(path));
}

inline nlohmann::json world_to_json(const World& w) {
    nlohmann::json j;
    const auto& cfg = w.config();
    j["width"] = cfg.width;
    j["height"] = cfg.height;
    j["topology"] = topology_name(cfg.topology);
    j["food_fraction"] = cfg.food_fraction;
    j["obstacle_fraction"] = cfg.obstacle_fraction;
    j["danger_fraction"] = cfg.danger_fraction;
    j["food_energy_value"] = cfg.food_energy_value;
    j["food_patch_size"] = cfg.food_patch_size;
    j["food_regen_steps"] = cfg.food_regen_steps;
    auto sites = [](const std::vector<Pos>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (Pos p : v) arr.push_back({{"x", p.x}, {"y", p.y}});
        return arr;
    };
    j["food"] = sites(w.food_sites());
    j["obstacles"] = sites(w.obstacle_sites());
    nlohmann::json danger = nlohmann::json::array();
    for (Pos p : w.danger_sites())
        danger.push_back({{"x", p.x}, {"y", p.y}, {"damage", w.danger_damage(p)}});
    j["danger"] = danger;
    return j;
}

inline nlohmann::json run_record_to_json(const RunRecord& r) {
    nlohmann::json j;
    j["config"] = r.config_name;
    j["seed"] = r.seed;
    j["width"] = r.width;
    j["height"] = r.height;
    j["n_agents"] = r.n_agents;
    j["steps"] = r.steps;
    j["density"] = r.density;
    j["final"] = {{"performance", r.performance},
                  {"food_efficiency", r.food_efficiency},
                  {"coverage", r.coverage},
                  {"coordination_per_agent", r.coordination_per_agent},
                  {"order_parameter", r.order_parameter},
                  {"memory_fresh_fraction", r.memory_fresh_fraction},
                  {"memory_efficiency", r.memory_efficiency},
                  {"entropy", r.entropy_final},
                  {"mean_energy", r.mean_energy_final},
                  {"alive", r.alive_final},
                  {"total_food", r.total_food},
                  {"total_movements", r.total_movements},
                  {"total_coordination", r.total_coordination}};
    nlohmann::json series = nlohmann::json::array();
    for (const auto& s : r.series)
        series.push_back({{"food_collected", s.food_collected},
                          {"coverage", s.coverage},
                          {"coordination_events", s.coordination_events},
                          {"trace_mass", s.trace_mass},
                          {"mean_energy", s.mean_energy},
                          {"alive", s.alive},
                          {"entropy", s.entropy},
                          {"max_memory", s.max_memory}});
    j["series"] = series;
    return j;
}

// Per-step series as CSV, one row per step.
inline std::string run_series_csv(const RunRecord& r) {
    std::string out =
        "step,food_collected,coverage,coordination_events,trace_mass,mean_energy,alive,entropy,"
        "max_memory\n";
    for (std::size_t t = 0; t < r.series.size(); ++t) {
        const auto& s = r.series[t];
        out += std::to_string(t) + ',' + std::to_string(s.food_collected) + ',' +
               fmt_double(s.coverage) + ',' + std::to_string(s.coordination_events) + ',' +
               fmt_double(s.trace_mass) + ',' + fmt_double(s.mean_energy) + ',' +
               std::to_string(s.alive) + ',' + fmt_double(s.entropy) + ',' +
               std::to_string(s.max_memory) + '\n';
    }
    return out;
}

inline const char* run_row_header() {
    return "config,seed,width,height,agents,density,steps,performance,food_efficiency,coverage,"
           "coordination_per_agent,order_parameter,entropy,memory_fresh_fraction,"
           "memory_efficiency,mean_energy,alive,total_food";
}

inline std::string run_row_csv(const RunRecord& r) {
    std::string out = csv_field(r.config_name);
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.width);
    out += ',' + std::to_string(r.height);
    out += ',' + std::to_string(r.n_agents);
    out += ',' + fmt_double(r.density);
    out += ',' + std::to_string(r.steps);
    out += ',' + fmt_double(r.performance);
    out += ',' + fmt_double(r.food_efficiency);
    out += ',' + fmt_double(r.coverage);
    out += ',' + fmt_double(r.coordination_per_agent);
    out += ',' + fmt_double(r.order_parameter);
    out += ',' + fmt_double(r.entropy_final);
    out += ',' + fmt_double(r.memory_fresh_fraction);
    out += ',' + fmt_double(r.memory_efficiency);
    out += ',' + fmt_double(r.mean_energy_final);
    out += ',' + std::to_string(r.alive_final);
    out += ',' + std::to_string(r.total_food);
    return out;
}

// Trace-field snapshot rows for one step (step, x, y, category,
// total_strength, n_depositors), appended to `out`.
inline void append_trace_snapshot(std::string& out, const TraceField& field, long step) {
    field.for_each_cell_summary([&](Pos p, Category c, double total, std::size_t n) {
        out += std::to_string(step) + ',' + std::to_string(p.x) + ',' + std::to_string(p.y) + ',' +
               category_name(c) + ',' + fmt_double(total) + ',' + std::to_string(n) + '\n';
    });
}

} // namespace stigmem
