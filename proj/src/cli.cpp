#include "hallway/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hallway/bench.hpp"
#include "hallway/episode.hpp"
#include "hallway/util.hpp"

namespace hallway::cli {

namespace {

namespace fs = std::filesystem;

struct CommonArgs {
    std::string preset;
    std::vector<std::string> config_files;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
    std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--preset", args.preset, "named preset (see `hallway presets`)");
    cmd->add_option("--config", args.config_files, "config file(s), key = value lines");
    cmd->add_option("-O,--override", args.overrides, "inline override, key=value");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "sets scenario.seed and planner.seed");
}

cfg::Config build_config(const CommonArgs& args) {
    cfg::Config c;
    if (!args.preset.empty() && !cfg::apply_preset(c, args.preset))
        throw cfg::ConfigError("unknown preset: " + args.preset);
    for (const auto& path : args.config_files) c.load_file(path);
    for (const auto& ov : args.overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw cfg::ConfigError("override must be key=value: " + ov);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        c.set(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    if (args.seed >= 0) {
        c.set("scenario.seed", std::to_string(args.seed));
        c.set("planner.seed", std::to_string(args.seed));
    }
    return c;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

void echo_config(const cfg::Config& c, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    write_file(out_dir / "effective.cfg", c.effective_text());
}

std::string key_table() {
    std::ostringstream out;
    out << "configuration keys (key = default [unit]  description):\n";
    for (const auto& spec : cfg::key_registry()) {
        out << "  " << spec.key << " = " << spec.def;
        if (!spec.unit.empty()) out << " [" << spec.unit << "]";
        out << "  " << spec.description << "\n";
    }
    out << "  sweep.axis.<key> = v1,v2,...  sweep axis over any key above\n";
    return out.str();
}

int cmd_run(const CommonArgs& args, bool strict) {
    cfg::Config c = build_config(args);
    const auto scenario = cfg::make_scenario(c);
    const auto planner_cfg = cfg::make_planner(c);
    echo_config(c, args.out_dir);

    const auto result = sim::run_episode(scenario, planner_cfg);
    const auto& m = result.metrics;

    bench::ResultRow row;
    row.corridor_len = scenario.corridor_length;
    row.human_speed = scenario.human_speed;
    row.ratio = 1.0 / (planner_cfg.risk.c1 * planner_cfg.risk.c3);
    row.peek = planner_cfg.peek_enabled;
    row.seed = scenario.rng_seed;
    row.metrics = m;

    const fs::path out(args.out_dir);
    write_file(out / "results.csv", bench::results_csv({row}));
    write_file(out / "robot.csv", sim::robot_csv(result.logs.robot));
    write_file(out / "humans.csv", sim::humans_csv(result.logs.humans));
    write_file(out / "plans.csv", sim::plans_csv(result.logs.plans));
    write_file(out / "events.csv", sim::events_csv(result.logs.events));

    std::cout << "outcome=" << bench::to_string(m.outcome)
              << " time_to_goal=" << fmt_double(m.time_to_goal)
              << " avg_speed=" << fmt_double(m.avg_speed)
              << " path_changes=" << m.path_changes << " ps_violations=" << m.ps_violations
              << " collisions=" << m.collisions << " seed=" << scenario.rng_seed << "\n";

    if (strict && m.outcome == bench::Outcome::Collision) return 3;
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    cfg::Config c = build_config(args);
    const auto spec = bench::SweepSpec::from_config(c);
    echo_config(c, args.out_dir);

    const auto rows = bench::run_sweep(spec);
    const auto summary = bench::aggregate(rows);
    const fs::path out(args.out_dir);
    write_file(out / "results.csv", bench::results_csv(rows));
    write_file(out / "summary.csv", bench::summary_csv(summary));
    const auto plots = bench::render_plots(summary, args.out_dir);
    std::cout << "rows=" << rows.size() << " cells=" << summary.size();
    for (const auto& p : plots) std::cout << " plot=" << p;
    std::cout << "\n";
    return 0;
}

int cmd_plot(const std::string& results_path, const std::string& out_dir) {
    std::ifstream f(results_path, std::ios::binary);
    if (!f) throw cfg::ConfigError("cannot open results file: " + results_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    const auto rows = bench::parse_results_csv(ss.str());
    const auto summary = bench::aggregate(rows);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "summary.csv", bench::summary_csv(summary));
    const auto plots = bench::render_plots(summary, out_dir);
    for (const auto& p : plots) std::cout << "plot=" << p << "\n";
    return 0;
}

int cmd_inspect(const CommonArgs& args) {
    cfg::Config c = build_config(args);
    const auto scenario = cfg::make_scenario(c);
    const auto planner_cfg = cfg::make_planner(c);
    auto sim = sim::build_scenario(scenario);
    const auto mask = world::visible_region(sim.grid, sim.robot_pose, planner_cfg.sensor_range,
                                            sim.agent_discs());

    const auto goal = scenario.robot_goal();
    const auto robot_cell = sim.grid.world_to_cell(sim.robot_pose.position());
    const auto goal_cell = sim.grid.world_to_cell(goal.position());
    std::vector<world::CellIndex> human_cells;
    for (const auto& h : sim.humans) human_cells.push_back(sim.grid.world_to_cell(h.position));

    std::string art;
    for (int row = sim.grid.height - 1; row >= 0; --row) {
        for (int col = 0; col < sim.grid.width; ++col) {
            char ch;
            if (sim.grid.at(col, row) == world::Cell::Occupied) ch = '#';
            else if (mask.is_visible(col, row)) ch = '.';
            else ch = '?';
            const world::CellIndex here{col, row};
            if (here == robot_cell) ch = 'R';
            if (here == goal_cell) ch = 'G';
            for (const auto& hc : human_cells)
                if (here == hc) ch = 'H';
            art += ch;
        }
        art += '\n';
    }
    std::cout << art;
    std::cout << "R robot, G goal, H human, # wall, . visible, ? unknown\n";
    return 0;
}

int cmd_presets(const std::string& name, const std::string& export_dir) {
    if (!export_dir.empty()) {
        fs::create_directories(export_dir);
        for (const auto& n : cfg::preset_names()) {
            cfg::Config c;
            cfg::apply_preset(c, n);
            std::string text = "# preset: " + n + "\n";
            for (const auto& [k, v] : c.explicit_values()) text += k + " = " + v + "\n";
            write_file(fs::path(export_dir) / (n + ".cfg"), text);
        }
        std::cout << "wrote " << cfg::preset_names().size() << " presets to " << export_dir
                  << "\n";
        return 0;
    }
    if (name.empty()) {
        std::cout << "presets:";
        for (const auto& n : cfg::preset_names()) std::cout << " " << n;
        std::cout << "\n\n" << key_table();
        return 0;
    }
    cfg::Config c;
    if (!cfg::apply_preset(c, name)) throw cfg::ConfigError("unknown preset: " + name);
    std::cout << c.effective_text();
    return 0;
}

}  // namespace

int run_main(int argc, const char* const* argv) {
    CLI::App app{"hallway: a risk-aware peek-and-pass corridor navigation testbed"};
    app.require_subcommand(1);
    app.footer(key_table());

    CommonArgs run_args, sweep_args, inspect_args;
    bool strict = false;
    std::string plot_results, plot_out = "out", preset_name, preset_export;

    auto* run = app.add_subcommand("run", "run one episode and write logs + metrics");
    add_common(run, run_args);
    run->add_flag("--strict", strict, "exit 3 when the episode ends in a collision");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from sweep.axis.* keys");
    add_common(sweep, sweep_args);

    auto* plot = app.add_subcommand("plot", "re-aggregate and plot an existing results.csv");
    plot->add_option("--results", plot_results, "path to results.csv")->required();
    plot->add_option("--out", plot_out, "output directory");

    auto* inspect = app.add_subcommand("inspect", "print the scenario map with the initial visibility mask");
    add_common(inspect, inspect_args);

    auto* presets = app.add_subcommand("presets", "list presets or print one as key = value text");
    presets->add_option("name", preset_name, "preset to print");
    presets->add_option("--export", preset_export, "write every preset as a .cfg file into DIR");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_args, strict);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (plot->parsed()) return cmd_plot(plot_results, plot_out);
        if (inspect->parsed()) return cmd_inspect(inspect_args);
        if (presets->parsed()) return cmd_presets(preset_name, preset_export);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const cfg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hallway::cli
