#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tetherplan/errors.hpp"
#include "tetherplan/map_io.hpp"
#include "tetherplan/pipeline.hpp"
#include "tetherplan/plan_io.hpp"
#include "tetherplan/render.hpp"
#include "tetherplan/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

void emit_error(const std::string& type, const std::string& message) {
    ordered_json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    std::cerr << j.dump() << "\n";
}

template <typename F>
int run_guarded(F&& body) {
    try {
        return body();
    } catch (const tetherplan::ValidationError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const tetherplan::PlanningError& e) {
        emit_error("planning", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
}

fs::path ensure_out_dir(const std::string& out_dir) {
    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    fs::create_directories(dir);
    return dir;
}

// Flag overrides shared by plan/simulate/stats.
struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<double> inflate;
    std::optional<double> resolution;
    std::optional<double> r_acc;
    std::optional<double> sigma_cp;
    std::optional<double> sigma_drift;
    std::optional<double> sigma_loc;
};

void add_override_options(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--seed", ov.seed, "Override the scenario seed");
    cmd->add_option("--inflate", ov.inflate, "Override the robot radius used for map inflation");
    cmd->add_option("--resolution", ov.resolution, "Override the map resolution in meters");
    cmd->add_option("--r-acc", ov.r_acc, "Override the waypoint acceptance radius");
    cmd->add_option("--sigma-cp", ov.sigma_cp, "Contact placement noise std-dev (m)");
    cmd->add_option("--sigma-drift", ov.sigma_drift, "Contact drift std-dev (m/step)");
    cmd->add_option("--sigma-loc", ov.sigma_loc, "Localization error std-dev (m/step)");
}

void apply_overrides(tetherplan::ScenarioSpec& s, const Overrides& ov, bool seed_is_noise) {
    if (ov.seed) {
        if (seed_is_noise)
            s.noise.seed = *ov.seed;
        else
            s.prm.seed = *ov.seed;
    }
    if (ov.inflate) s.inflate = *ov.inflate;
    if (ov.resolution) s.resolution_override = *ov.resolution;
    if (ov.r_acc) s.r_acc = *ov.r_acc;
    if (ov.sigma_cp) s.noise.sigma_cp = *ov.sigma_cp;
    if (ov.sigma_drift) s.noise.sigma_drift = *ov.sigma_drift;
    if (ov.sigma_loc) s.noise.sigma_loc = *ov.sigma_loc;
}

ordered_json stage_means_json(const std::vector<double>& means) {
    ordered_json arr = ordered_json::array();
    for (double m : means) {
        if (std::isnan(m))
            arr.push_back(nullptr);
        else
            arr.push_back(m);
    }
    return arr;
}

int cmd_plan(const std::string& scenario_file, const Overrides& ov, const std::string& out_dir,
             std::string out_name) {
    auto scenario = tetherplan::load_scenario(scenario_file);
    apply_overrides(scenario, ov, false);
    const tetherplan::VoxelMap original = tetherplan::load_scenario_map(scenario);

    tetherplan::PlanOutcome outcome = tetherplan::plan_scenario(scenario, original);

    const fs::path dir = ensure_out_dir(out_dir);
    if (out_name.empty()) out_name = fs::path(scenario_file).stem().string() + ".plan";
    const fs::path plan_path = dir / out_name;

    // The plan header references the map relative to the plan file itself so
    // simulate/render can resolve it from wherever the plan lands.
    outcome.plan.map_ref =
        fs::proximate(fs::weakly_canonical(scenario.map_path), fs::weakly_canonical(dir))
            .generic_string();
    tetherplan::save_plan(outcome.plan, plan_path);

    ordered_json j;
    j["plan_file"] = plan_path.string();
    j["planner"] = outcome.plan.planner;
    j["waypoints"] = outcome.plan.points.size();
    j["max_stack_depth"] = outcome.max_stack_depth;
    ordered_json events = ordered_json::array();
    for (const auto& e : outcome.events) {
        events.push_back({{"wp", e.wp_index},
                          {"kind", e.kind == tetherplan::ContactEvent::Kind::push ? "push" : "pop"},
                          {"contact", {e.contact.x, e.contact.y, e.contact.z}}});
    }
    j["events"] = std::move(events);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_simulate(const std::string& plan_file, const std::string& scenario_file,
                 const Overrides& ov, int trials, double speed, double rate,
                 const std::string& out_dir, std::string prefix) {
    const tetherplan::AnnotatedPath plan = tetherplan::load_plan(plan_file);
    const fs::path plan_dir = fs::path(plan_file).parent_path();
    const tetherplan::VoxelMap map = tetherplan::load_map(plan_dir / plan.map_ref);

    tetherplan::NoiseConfig noise;
    double r_acc = 0.4;
    if (!scenario_file.empty()) {
        const auto scenario = tetherplan::load_scenario(scenario_file);
        noise = scenario.noise;
        r_acc = scenario.r_acc;
        speed = scenario.speed;
        rate = scenario.rate;
    }
    if (ov.seed) noise.seed = *ov.seed;
    if (ov.r_acc) r_acc = *ov.r_acc;
    if (ov.sigma_cp) noise.sigma_cp = *ov.sigma_cp;
    if (ov.sigma_drift) noise.sigma_drift = *ov.sigma_drift;
    if (ov.sigma_loc) noise.sigma_loc = *ov.sigma_loc;
    if (trials < 1) throw tetherplan::ValidationError("simulate: trials must be at least 1");

    const fs::path dir = ensure_out_dir(out_dir);
    if (prefix.empty()) prefix = fs::path(plan_file).stem().string();

    ordered_json report;
    report["plan"] = plan_file;
    report["map"] = plan.map_ref;
    report["planner"] = plan.planner;
    report["trials"] = ordered_json::array();

    double mean_sum = 0.0;
    std::vector<double> stage_sum;
    std::vector<long> stage_count;
    for (int trial = 0; trial < trials; ++trial) {
        tetherplan::NoiseConfig trial_noise = noise;
        trial_noise.seed = noise.seed + static_cast<uint64_t>(trial);
        const tetherplan::Trajectory traj =
            tetherplan::simulate_execution(plan, map, trial_noise, r_acc, speed, rate);

        const fs::path traj_path = dir / (prefix + "_trial" + std::to_string(trial) + ".traj");
        tetherplan::save_trajectory(traj, traj_path, plan.map_ref);

        const auto stats = tetherplan::cross_track_error(traj, plan);
        mean_sum += stats.mean;
        for (std::size_t s = 0; s < stats.per_sample.size(); ++s) {
            const int c = stats.contacts_per_sample[s];
            if (static_cast<std::size_t>(c) >= stage_sum.size()) {
                stage_sum.resize(c + 1, 0.0);
                stage_count.resize(c + 1, 0);
            }
            stage_sum[c] += stats.per_sample[s];
            ++stage_count[c];
        }

        report["trials"].push_back(
            {{"trial", trial},
             {"seed", trial_noise.seed},
             {"outcome",
              traj.outcome == tetherplan::Trajectory::Outcome::completed ? "completed"
                                                                         : "aborted"},
             {"mean_cte", stats.mean},
             {"max_cte", stats.max},
             {"trajectory", traj_path.string()}});
    }
    report["grand_mean_cte"] = mean_sum / trials;
    std::vector<double> stage_means(stage_sum.size(), std::nan(""));
    for (std::size_t c = 0; c < stage_sum.size(); ++c)
        if (stage_count[c] > 0) stage_means[c] = stage_sum[c] / stage_count[c];
    report["per_contact_stage_means"] = stage_means_json(stage_means);

    const fs::path report_path = dir / (prefix + "_report.json");
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw tetherplan::Error("cannot write report: " + report_path.string());
    out << report.dump(2) << "\n";
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_stats(const std::string& scenario_file, const Overrides& ov, bool no_coverage,
              const std::string& out_file) {
    auto scenario = tetherplan::load_scenario(scenario_file);
    apply_overrides(scenario, ov, false);
    const tetherplan::VoxelMap original = tetherplan::load_scenario_map(scenario);

    const auto report = tetherplan::reachability_stats(scenario, original, !no_coverage);

    ordered_json j;
    j["map"] = scenario.map_ref;
    j["reel"] = {scenario.reel.x, scenario.reel.y, scenario.reel.z};
    j["inflate"] = scenario.inflate;
    j["free_cells"] = report.free_cells;
    j["blocked_cells"] = report.blocked_cells;
    j["raycast_fraction"] = report.raycast_fraction;
    if (report.coverage_computed) {
        j["contact_fraction"] = report.contact_fraction;
        j["contact_failures"] = report.coverage_failures;
    }
    const std::string text = j.dump(2) + "\n";
    if (!out_file.empty()) {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw tetherplan::Error("cannot write stats report: " + out_file);
        out << text;
    }
    std::cout << text;
    return 0;
}

int cmd_render(const std::string& plan_file, const std::vector<std::string>& traj_files,
               double inflate, const std::string& out_dir, std::string out_name) {
    const tetherplan::AnnotatedPath plan = tetherplan::load_plan(plan_file);
    const fs::path plan_dir = fs::path(plan_file).parent_path();
    const tetherplan::VoxelMap original = tetherplan::load_map(plan_dir / plan.map_ref);
    const tetherplan::VoxelMap inflated = original.inflate(inflate);

    std::vector<tetherplan::Trajectory> trajectories;
    for (const auto& tf : traj_files) {
        std::string map_ref;
        trajectories.push_back(tetherplan::load_trajectory(tf, &map_ref));
        if (!map_ref.empty() && map_ref != plan.map_ref)
            throw tetherplan::ValidationError("render: trajectory " + tf + " references map '" +
                                              map_ref + "' but the plan references '" +
                                              plan.map_ref + "'");
    }

    std::optional<tetherplan::ReducedMap> reduced;
    if (plan.planner == "raycast")
        reduced = tetherplan::reduce_reachable_space(inflated, original, plan.tether_origin);

    const std::string svg = tetherplan::render_svg(original, inflated,
                                                   reduced ? &*reduced : nullptr, plan,
                                                   trajectories);

    const fs::path dir = ensure_out_dir(out_dir);
    if (out_name.empty()) out_name = fs::path(plan_file).stem().string() + ".svg";
    const fs::path svg_path = dir / out_name;
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw tetherplan::Error("cannot write svg: " + svg_path.string());
    out << svg;

    // Raw series next to the figure for plotting tools.
    const fs::path data_path = dir / (fs::path(out_name).stem().string() + "_path.txt");
    std::ofstream data(data_path, std::ios::binary);
    if (!data) throw tetherplan::Error("cannot write path data: " + data_path.string());
    data << "# columns wx wy wz cx cy cz\n";
    for (const auto& rec : plan.points)
        data << tetherplan::format_double(rec.waypoint.x) << " "
             << tetherplan::format_double(rec.waypoint.y) << " "
             << tetherplan::format_double(rec.waypoint.z) << " "
             << tetherplan::format_double(rec.contact.x) << " "
             << tetherplan::format_double(rec.contact.y) << " "
             << tetherplan::format_double(rec.contact.z) << "\n";

    ordered_json j;
    j["svg"] = svg_path.string();
    j["path_data"] = data_path.string();
    j["trajectories"] = traj_files.size();
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tetherplan: tether-aware 3-D motion planning and execution"};
    app.require_subcommand(1);

    std::string out_dir;
    if (const char* env = std::getenv("TETHERPLAN_OUT")) out_dir = env;
    app.add_option("--out", out_dir, "Output directory (default: $TETHERPLAN_OUT or .)");

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "Plan a scenario into a 6-D waypoint/contact file");
    std::string plan_scenario_file;
    std::string plan_out_name;
    Overrides plan_ov;
    plan_cmd->add_option("scenario", plan_scenario_file, "Scenario JSON file")->required();
    plan_cmd->add_option("-o,--plan-file", plan_out_name, "Plan file name (in --out)");
    add_override_options(plan_cmd, plan_ov);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Execute a plan kinematically with noise");
    std::string sim_plan_file;
    std::string sim_scenario_file;
    std::string sim_prefix;
    int sim_trials = 1;
    double sim_speed = 0.5;
    double sim_rate = 120.0;
    Overrides sim_ov;
    sim_cmd->add_option("plan", sim_plan_file, "Plan file from the plan command")->required();
    sim_cmd->add_option("--scenario", sim_scenario_file,
                        "Scenario file supplying noise/r_acc defaults");
    sim_cmd->add_option("--trials", sim_trials, "Number of seeded trials");
    sim_cmd->add_option("--speed", sim_speed, "Robot speed in m/s");
    sim_cmd->add_option("--rate", sim_rate, "Simulation rate in Hz");
    sim_cmd->add_option("--prefix", sim_prefix, "Output file prefix");
    add_override_options(sim_cmd, sim_ov);

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Reachability statistics for both planners");
    std::string stats_scenario_file;
    std::string stats_out_file;
    bool stats_no_coverage = false;
    Overrides stats_ov;
    stats_cmd->add_option("scenario", stats_scenario_file, "Scenario JSON file")->required();
    stats_cmd->add_option("-o,--report-file", stats_out_file, "Also write the report here");
    stats_cmd->add_flag("--no-coverage", stats_no_coverage,
                        "Skip the per-cell contact-planner coverage sweep");
    add_override_options(stats_cmd, stats_ov);

    // render
    auto* render_cmd = app.add_subcommand("render", "Render plan and trajectories to SVG");
    std::string render_plan_file;
    std::vector<std::string> render_traj_files;
    std::string render_out_name;
    double render_inflate = 0.3;
    render_cmd->add_option("plan", render_plan_file, "Plan file")->required();
    render_cmd->add_option("trajectories", render_traj_files, "Trajectory files to overlay");
    render_cmd->add_option("-o,--svg-file", render_out_name, "SVG file name (in --out)");
    render_cmd->add_option("--inflate", render_inflate, "Robot radius for the inflation layer");

    CLI11_PARSE(app, argc, argv);

    return run_guarded([&]() -> int {
        if (plan_cmd->parsed()) return cmd_plan(plan_scenario_file, plan_ov, out_dir, plan_out_name);
        if (sim_cmd->parsed())
            return cmd_simulate(sim_plan_file, sim_scenario_file, sim_ov, sim_trials, sim_speed,
                                sim_rate, out_dir, sim_prefix);
        if (stats_cmd->parsed())
            return cmd_stats(stats_scenario_file, stats_ov, stats_no_coverage, stats_out_file);
        if (render_cmd->parsed())
            return cmd_render(render_plan_file, render_traj_files, render_inflate, out_dir,
                              render_out_name);
        return 1;
    });
}
