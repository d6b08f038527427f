#pragma once

#include "tetherplan/contact_planner.hpp"
#include "tetherplan/raycast.hpp"
#include "tetherplan/scenario.hpp"

namespace tetherplan {

struct PlanOutcome {
    AnnotatedPath plan;
    std::vector<ContactEvent> events;  // empty for raycast plans
    std::size_t max_stack_depth = 1;
};

// Runs the scenario's planner over start -> mid... -> goal. Each leg is
// queried and smoothed separately so mid-points survive shortcutting; the
// contact planner then runs over the full concatenation so relaxation works
// across legs. On a contact-unresolvable failure the path is re-densified at
// half the step and retried once.
PlanOutcome plan_scenario(const ScenarioSpec& scenario, const VoxelMap& original);

// Reachability statistics for both planners on one map/reel pair.
struct ReachabilityReport {
    std::size_t free_cells = 0;            // free cells of the inflated map
    std::size_t blocked_cells = 0;         // tether-blocked among them
    double raycast_fraction = 0.0;
    // Contact-planner coverage: fraction of free cells for which the full
    // contact pipeline produces a plan from the reel. Computed only when
    // requested (it replans for every free cell).
    bool coverage_computed = false;
    double contact_fraction = 0.0;
    std::size_t coverage_failures = 0;
};

ReachabilityReport reachability_stats(const ScenarioSpec& scenario, const VoxelMap& original,
                                      bool with_coverage);

// Fraction of the inflated map's free cells reachable by the contact
// pipeline from a fixed start; cell_failures (if given) collects the cells
// that could not be planned.
double contact_coverage(const VoxelMap& original, const VoxelMap& inflated, const Point3& start,
                        const PrmParams& params, std::vector<CellIndex>* cell_failures = nullptr);

} // namespace tetherplan
