// Acceptance suite: end-to-end checks of the planners, the executor and the
// CLI against their contracts. Each criterion prints one PASS/FAIL line; the
// exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tetherplan/contact_planner.hpp"
#include "tetherplan/executor.hpp"
#include "tetherplan/map_io.hpp"
#include "tetherplan/pipeline.hpp"
#include "tetherplan/plan_io.hpp"
#include "tetherplan/raycast.hpp"
#include "tetherplan/rng.hpp"
#include "tetherplan/scenario.hpp"

#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace tetherplan;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] C%d %s: %s\n", pass ? "PASS" : "FAIL", number, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scenario_path(const char* name) {
    return fs::path(SCENARIO_DIR) / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- C1: shadow oracle equivalence on random maps ---------------------------

void criterion_shadow_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2024);
    int mismatches = 0;
    int done = 0;
    while (done < 200) {
        VoxelMap map = builders::random_map(rng, 10, 20);
        const CellIndex rc{rng.uniform_int(0, 9), rng.uniform_int(0, 9), rng.uniform_int(0, 9)};
        if (map.occupied(rc)) continue;
        const Point3 reel = map.center(rc);
        const ReducedMap reduced = reduce_reachable_space(map, map, reel);
        if (builders::cell_set(reduced.blocked_cells()) !=
            oracles::brute_blocked_cells(map, map, reel))
            ++mismatches;
        ++done;
    }
    const double elapsed = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "%d/200 maps matched the per-cell oracle in %.2fs",
                  200 - mismatches, elapsed);
    report(1, "shadow oracle equivalence", mismatches == 0 && elapsed < 10.0, detail);
}

// --- C2: studio-scene reachability -------------------------------------------

void criterion_studio_reachability() {
    const ScenarioSpec scenario = load_scenario(scenario_path("raycast_demo.json"));
    const VoxelMap original = load_scenario_map(scenario);
    const VoxelMap inflated = original.inflate(scenario.inflate);

    const ReducedMap reduced = reduce_reachable_space(inflated, original, scenario.reel);
    const double fraction = reachability_fraction(reduced);
    const bool fraction_ok = fraction >= 0.45 && fraction <= 0.75;

    std::vector<CellIndex> failures;
    const double coverage =
        contact_coverage(original, inflated, scenario.reel, scenario.prm, &failures);
    const bool coverage_ok = coverage == 1.0 && failures.empty();

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "raycast fraction %.4f (target 0.60 +/- 0.15), contact coverage %.6f "
                  "(%zu uncovered cells)",
                  fraction, coverage, failures.size());
    report(2, "studio-scene reachability", fraction_ok && coverage_ok, detail);
}

// --- C3: straight-tether validity over seeded raycast plans -----------------

void criterion_raycast_tether_validity() {
    const ScenarioSpec scenario = load_scenario(scenario_path("raycast_demo.json"));
    const VoxelMap original = load_scenario_map(scenario);
    const VoxelMap inflated = original.inflate(scenario.inflate);

    long violations = 0;
    int planned = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        PrmParams params = scenario.prm;
        params.seed = seed;
        AnnotatedPath plan;
        try {
            plan = plan_raycast(inflated, original, scenario.reel, scenario.start, scenario.goal,
                                params);
            ++planned;
        } catch (const Error&) {
            continue;
        }
        for (std::size_t i = 1; i < plan.points.size(); ++i) {
            const Point3& a = plan.points[i - 1].waypoint;
            const Point3& b = plan.points[i].waypoint;
            const int steps = std::max(1, (int)std::ceil(distance(a, b) / 0.05));
            for (int s = 0; s <= steps; ++s)
                if (original.segment_collides(scenario.reel, lerp(a, b, double(s) / steps)))
                    ++violations;
        }
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d/20 seeds planned, %ld blocked interpolants at 0.05 m steps", planned,
                  violations);
    report(3, "tether validity, straight case", planned == 20 && violations == 0, detail);
}

// --- C4/C5: contact scenarios: polyline validity and event traces ----------

struct ScenarioRun {
    VoxelMap map{1.0, {1, 1, 1}, {0, 0, 0}};
    ScenarioSpec scenario;
    PlanOutcome outcome;
};

ScenarioRun run_scenario(const char* file) {
    ScenarioRun run;
    run.scenario = load_scenario(scenario_path(file));
    run.map = load_scenario_map(run.scenario);
    run.outcome = plan_scenario(run.scenario, run.map);
    return run;
}

// Stack of contacts after all events at the given waypoint index.
std::vector<Point3> stack_at(const PlanOutcome& out, const Point3& origin, int wp_index) {
    std::vector<Point3> stack{origin};
    for (const auto& e : out.events) {
        if (e.wp_index > wp_index) break;
        if (e.kind == ContactEvent::Kind::push)
            stack.push_back(e.contact);
        else
            stack.pop_back();
    }
    return stack;
}

long polyline_violations(const ScenarioRun& run) {
    long violations = 0;
    const auto& points = run.outcome.plan.points;
    for (std::size_t t = 1; t < points.size(); ++t) {
        auto before = stack_at(run.outcome, run.scenario.reel, (int)t - 1);
        auto after = stack_at(run.outcome, run.scenario.reel, (int)t);
        before.push_back({});
        after.push_back({});
        const Point3& a = points[t - 1].waypoint;
        const Point3& b = points[t].waypoint;
        const int steps = std::max(1, (int)std::ceil(distance(a, b) / 0.05));
        for (int s = 0; s <= steps; ++s) {
            const Point3 q = lerp(a, b, double(s) / steps);
            before.back() = q;
            after.back() = q;
            // During a push/pop transition the bend forms where the straight
            // line grazes the corner, so one of the two polylines is taut.
            const bool ok = !oracles::polyline_penetrates_obstacles(run.map, before) ||
                            !oracles::polyline_penetrates_obstacles(run.map, after);
            if (!ok) ++violations;
        }
    }
    return violations;
}

void criterion_contact_tether_validity(const ScenarioRun& wrap, const ScenarioRun& dbl) {
    const long v1 = polyline_violations(wrap);
    const long v2 = polyline_violations(dbl);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "wrap-and-return %ld violations, double-wrap %ld violations at 0.05 m steps",
                  v1, v2);
    report(4, "tether validity, contact case", v1 == 0 && v2 == 0, detail);
}

void criterion_event_traces(const ScenarioRun& wrap, const ScenarioRun& dbl) {
    // Hand-constructed expectation for wrap-and-return: push then pop of the
    // same contact, everything ending back on the reel.
    const bool wrap_ok = wrap.outcome.events.size() == 2 &&
                         wrap.outcome.events[0].kind == ContactEvent::Kind::push &&
                         wrap.outcome.events[1].kind == ContactEvent::Kind::pop &&
                         wrap.outcome.events[0].contact == wrap.outcome.events[1].contact &&
                         wrap.outcome.max_stack_depth == 2 &&
                         wrap.outcome.plan.points.back().contact == wrap.scenario.reel;

    // Hand-constructed expectation for double-wrap: two pushes, zero pops,
    // the goal still annotated with the second contact even though the reel
    // sees it directly, with the confinement test doing the blocking.
    bool dbl_ok = dbl.outcome.events.size() == 2 &&
                  dbl.outcome.events[0].kind == ContactEvent::Kind::push &&
                  dbl.outcome.events[1].kind == ContactEvent::Kind::push &&
                  dbl.outcome.max_stack_depth == 3 &&
                  dbl.outcome.plan.points.back().contact == dbl.outcome.events[1].contact;

    const Point3& goal = dbl.outcome.plan.points.back().waypoint;
    const bool goal_reel_visible = !dbl.map.segment_collides(dbl.scenario.reel, goal);
    dbl_ok = dbl_ok && goal_reel_visible;

    // Replay the relaxation logic: at least one waypoint must have line of
    // sight back to the previous contact with the pop blocked purely by the
    // confinement test.
    int confinement_blocks = 0;
    {
        ContactStack stack(dbl.scenario.reel);
        std::size_t ev = 0;
        for (std::size_t t = 0; t < dbl.outcome.plan.points.size(); ++t) {
            const Point3& wp = dbl.outcome.plan.points[t].waypoint;
            if (stack.depth() > 1 && !dbl.map.segment_collides(stack.below_top(), wp) &&
                obstacle_confined(stack.top(), stack.below_top(), wp, dbl.map))
                ++confinement_blocks;
            while (ev < dbl.outcome.events.size() &&
                   dbl.outcome.events[ev].wp_index == (int)t) {
                if (dbl.outcome.events[ev].kind == ContactEvent::Kind::push)
                    stack.push(dbl.outcome.events[ev].contact);
                else
                    stack.pop();
                ++ev;
            }
        }
    }
    dbl_ok = dbl_ok && confinement_blocks > 0;

    char detail[220];
    std::snprintf(detail, sizeof(detail),
                  "wrap-and-return push/pop trace %s; double-wrap 2 pushes 0 pops %s, goal "
                  "reel-visible %s, confinement blocked %d relaxations",
                  wrap_ok ? "ok" : "WRONG", dbl_ok ? "ok" : "WRONG",
                  goal_reel_visible ? "yes" : "no", confinement_blocks);
    report(5, "contact planning event traces", wrap_ok && dbl_ok, detail);
}

// --- C6: executor math -------------------------------------------------------

void criterion_executor_math() {
    bool ok = true;
    std::string why = "closed forms, 1e6 polar round-trips, 1e4 r_sta sequences all within 1e-9";

    auto expect = [&](bool cond, const char* what) {
        if (!cond && ok) {
            ok = false;
            why = std::string("failed: ") + what;
        }
    };

    // Polar conversion closed forms.
    const auto p1 = to_polar({0, 0, 1}, {0, 0, 0});
    expect(std::abs(p1.r_eff - 1) < 1e-9 && std::abs(p1.theta_eff) < 1e-9 &&
               std::abs(p1.phi_eff) < 1e-9,
           "to_polar(0,0,1)");
    const auto p2 = to_polar({1, 0, 0}, {0, 0, 0});
    expect(std::abs(p2.r_eff - 1) < 1e-9 && std::abs(p2.theta_eff) < 1e-9 &&
               std::abs(p2.phi_eff - M_PI / 2) < 1e-9,
           "to_polar(1,0,0)");
    const auto p3 = to_polar({1, 1, std::sqrt(2.0)}, {0, 0, 0});
    expect(std::abs(p3.r_eff - 2) < 1e-9 && std::abs(p3.theta_eff - M_PI / 6) < 1e-9 &&
               std::abs(p3.phi_eff - std::atan2(1.0, std::sqrt(2.0))) < 1e-9,
           "to_polar(1,1,sqrt2)");

    // Static tether length.
    ContactStack s1({0, 0, 0});
    expect(static_length(s1) == 0.0, "static_length depth 1");
    s1.push({1, 0, 0});
    s1.push({1, 1, 0});
    expect(std::abs(static_length(s1) - 2.0) < 1e-9, "static_length unit steps");

    // Desired controls.
    ContactStack s2({0, 0, 0});
    const Controls c1 = desired_controls({0, 0, 2}, s2);
    expect(std::abs(c1.r - 2) < 1e-9 && std::abs(c1.theta) < 1e-9 && std::abs(c1.phi) < 1e-9,
           "desired_controls straight");
    ContactStack s3({0, 0, 0});
    s3.push({0, 0, 1});
    const Controls c2 = desired_controls({1, 0, 1}, s3);
    expect(std::abs(c2.r - 2) < 1e-9 && std::abs(c2.theta) < 1e-9 &&
               std::abs(c2.phi - M_PI / 2) < 1e-9,
           "desired_controls bent");

    // Polar round-trip for a million random points.
    {
        Rng rng(31415);
        double worst = 0.0;
        for (int i = 0; i < 1000000; ++i) {
            const Point3 cp{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
            const Point3 p{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
            worst = std::max(worst, distance(p, from_polar(to_polar(p, cp), cp)));
        }
        expect(worst < 1e-9, "polar round-trip 1e6 points");
    }

    // Incremental vs recomputed static length across 1e4 random sequences.
    {
        Rng rng(27182);
        double worst = 0.0;
        for (int seq = 0; seq < 10000; ++seq) {
            ExecutorState state({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
            const int ops = rng.uniform_int(5, 25);
            for (int op = 0; op < ops; ++op) {
                if (state.stack().depth() > 1 && rng.uniform01() < 0.42)
                    state.pop_contact();
                else
                    state.push_contact(
                        {rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)});
                worst = std::max(worst, std::abs(state.r_sta() - state.r_sta_recomputed()));
            }
        }
        expect(worst < 1e-9, "incremental r_sta bookkeeping");
    }

    report(6, "executor polar-control math", ok, why);
}

// --- C7: error-accumulation ordering -----------------------------------------

void criterion_error_ordering(const ScenarioRun& wrap, const ScenarioRun& dbl) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioRun ray = run_scenario("raycast_demo.json");

    auto live_contacts = [](const PlanOutcome& out) {
        long depth = 0;
        for (const auto& e : out.events) depth += e.kind == ContactEvent::Kind::push ? 1 : -1;
        return depth;
    };
    const bool classes_ok = live_contacts(ray.outcome) == 0 && ray.outcome.events.empty() &&
                            live_contacts(wrap.outcome) == 0 &&
                            wrap.outcome.max_stack_depth == 2 &&
                            live_contacts(dbl.outcome) == 2;

    auto mean_over_seeds = [](const ScenarioRun& run, double sigma_cp_override,
                              bool use_override) {
        double sum = 0.0;
        for (uint64_t seed = 0; seed < 100; ++seed) {
            NoiseConfig noise; // default noise model
            if (use_override) noise.sigma_cp = sigma_cp_override;
            noise.seed = seed;
            const Trajectory traj =
                simulate_execution(run.outcome.plan, run.map, noise, run.scenario.r_acc,
                                   run.scenario.speed, run.scenario.rate);
            sum += cross_track_error(traj, run.outcome.plan).mean;
        }
        return sum / 100.0;
    };

    const double m0 = mean_over_seeds(ray, 0, false);
    const double m1 = mean_over_seeds(wrap, 0, false);
    const double m2 = mean_over_seeds(dbl, 0, false);
    const bool ordered = m0 < m1 && m1 < m2;

    // Monotone in sigma_cp on the one-contact class with a fixed seed set.
    const double s0 = mean_over_seeds(wrap, 0.0, true);
    const double s1 = mean_over_seeds(wrap, 0.1, true);
    const double s2 = mean_over_seeds(wrap, 0.2, true);
    const bool monotone = s0 <= s1 && s1 <= s2;

    const double elapsed = seconds_since(t0);
    char detail[240];
    std::snprintf(detail, sizeof(detail),
                  "means %.4f < %.4f < %.4f (ordering %s); sigma_cp sweep %.4f/%.4f/%.4f %s; "
                  "%.1fs",
                  m0, m1, m2, ordered ? "holds" : "BROKEN", s0, s1, s2,
                  monotone ? "monotone" : "NOT monotone", elapsed);
    report(7, "error-accumulation ordering", classes_ok && ordered && monotone && elapsed < 60.0,
           detail);
}

// --- C8: PRM smoke -----------------------------------------------------------

void criterion_prm_smoke() {
    const ScenarioSpec scenario = load_scenario(scenario_path("raycast_demo.json"));
    const VoxelMap original = load_scenario_map(scenario);
    const VoxelMap inflated = original.inflate(scenario.inflate);
    const Point3 a{0.15, 0.15, 0.15};
    const Point3 b{3.15, 2.85, 3.15};

    int found = 0;
    int invalid = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        try {
            const Roadmap rm = build_prm(inflated, 2000, 10, seed);
            const Path path = query_path(rm, inflated, a, b);
            if (path_valid(path, inflated))
                ++found;
            else
                ++invalid;
        } catch (const Error&) {
        }
    }
    char detail[120];
    std::snprintf(detail, sizeof(detail), "%d/50 seeds found a corner-to-corner path, %d invalid",
                  found, invalid);
    report(8, "PRM smoke across the shaft", found >= 45 && invalid == 0, detail);
}

// --- C9: CLI determinism -------------------------------------------------------

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(TETHERPLAN_BIN) + " " + args + " >" + log.string() + " 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

void criterion_cli_determinism() {
    const fs::path base = fs::temp_directory_path() / "tetherplan_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);

    const std::string scenario = scenario_path("wrap_and_return.json").string();
    const fs::path out = base / "out";
    const fs::path snapshot = base / "first_run";
    bool ok = true;
    std::string why = "plan/simulate/stats/render byte-identical across two runs";

    const char* artifacts[] = {"wrap_and_return.plan",         "wrap_and_return_trial0.traj",
                               "wrap_and_return_trial1.traj",  "wrap_and_return_report.json",
                               "stats.json",                   "wrap_and_return.svg",
                               "wrap_and_return_path.txt"};

    // Two consecutive runs with identical inputs, including the output
    // directory; the first run's artifacts are snapshotted before the rerun.
    for (int pass = 0; pass < 2 && ok; ++pass) {
        if (run_cli("--out " + out.string() + " plan " + scenario, base / "plan.log") != 0 ||
            run_cli("--out " + out.string() + " simulate " +
                        (out / "wrap_and_return.plan").string() +
                        " --trials 2 --seed 17 --scenario " + scenario,
                    base / "sim.log") != 0 ||
            run_cli("stats --no-coverage -o " + (out / "stats.json").string() + " " + scenario,
                    base / "stats.log") != 0 ||
            run_cli("--out " + out.string() + " render " +
                        (out / "wrap_and_return.plan").string() + " " +
                        (out / "wrap_and_return_trial0.traj").string() + " --inflate 0.1",
                    base / "render.log") != 0) {
            ok = false;
            why = "a CLI command exited nonzero";
        }
        if (ok && pass == 0) {
            fs::create_directories(snapshot);
            for (const char* name : artifacts) fs::copy_file(out / name, snapshot / name);
        }
    }
    if (ok) {
        for (const char* name : artifacts) {
            const fs::path a = snapshot / name;
            const fs::path b = out / name;
            if (!fs::exists(a) || !fs::exists(b) || slurp(a) != slurp(b) ||
                fs::file_size(a) == 0) {
                if (ok) why = std::string("mismatch or missing output: ") + name;
                ok = false;
            }
        }
    }
    fs::remove_all(base);
    report(9, "CLI determinism", ok, why);
}

} // namespace

int main() {
    std::printf("tetherplan acceptance suite\n");
    criterion_shadow_oracle();
    criterion_studio_reachability();
    criterion_raycast_tether_validity();

    const ScenarioRun wrap = run_scenario("wrap_and_return.json");
    const ScenarioRun dbl = run_scenario("double_wrap.json");
    criterion_contact_tether_validity(wrap, dbl);
    criterion_event_traces(wrap, dbl);
    criterion_executor_math();
    criterion_error_ordering(wrap, dbl);
    criterion_prm_smoke();
    criterion_cli_determinism();

    std::printf("%d criterion failure(s)\n", g_failures);
    return g_failures;
}
