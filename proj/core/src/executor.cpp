#include "tetherplan/executor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tetherplan/errors.hpp"
#include "tetherplan/rng.hpp"

namespace tetherplan {

PolarCoords to_polar(const Point3& p, const Point3& cp) {
    const Point3 d = p - cp;
    const double r_eff = d.norm();
    if (r_eff == 0.0) return {0.0, 0.0, 0.0};
    const double s = std::clamp(d.y / r_eff, -1.0, 1.0);
    double phi = std::atan2(d.x, d.z);
    if (phi == -M_PI) phi = M_PI;
    return {r_eff, std::asin(s), phi};
}

Point3 from_polar(const PolarCoords& polar, const Point3& cp) {
    const double cos_theta = std::cos(polar.theta_eff);
    return {cp.x + polar.r_eff * cos_theta * std::sin(polar.phi_eff),
            cp.y + polar.r_eff * std::sin(polar.theta_eff),
            cp.z + polar.r_eff * cos_theta * std::cos(polar.phi_eff)};
}

double static_length(const ContactStack& stack) {
    const auto& pts = stack.points();
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) total += distance(pts[i - 1], pts[i]);
    return total;
}

Controls desired_controls(const Point3& wp, const ContactStack& stack) {
    const PolarCoords polar = to_polar(wp, stack.top());
    return {polar.r_eff + static_length(stack), polar.theta_eff, polar.phi_eff};
}

namespace {

void validate_plan(const AnnotatedPath& plan, const VoxelMap& map_original) {
    if (plan.points.empty()) throw ValidationError("simulate_execution: plan has no waypoints");
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
        const auto& rec = plan.points[i];
        if (!rec.waypoint.finite() || !rec.contact.finite())
            throw ValidationError("simulate_execution: plan record " + std::to_string(i) +
                                  " is not finite");
        if (map_original.segment_collides(rec.contact, rec.waypoint))
            throw ValidationError("simulate_execution: plan record " + std::to_string(i) +
                                  " has no line of sight from its contact point");
    }
}

} // namespace

Trajectory simulate_execution(const AnnotatedPath& plan, const VoxelMap& map_original,
                              const NoiseConfig& noise, double r_acc, double speed, double rate,
                              long step_budget) {
    validate_plan(plan, map_original);
    if (!(r_acc > 0.0)) throw ValidationError("simulate_execution: r_acc must be positive");
    if (!(speed > 0.0)) throw ValidationError("simulate_execution: speed must be positive");
    if (!(rate > 0.0)) throw ValidationError("simulate_execution: rate must be positive");
    if (noise.sigma_cp < 0.0 || noise.sigma_drift < 0.0 || noise.sigma_loc < 0.0)
        throw ValidationError("simulate_execution: noise sigmas must be non-negative");

    Rng rng(noise.seed);
    const double dt = 1.0 / rate;
    const double step_len = speed * dt;

    ExecutorState state(plan.tether_origin);
    std::vector<Point3> true_contacts{plan.tether_origin};
    Point3 loc_err{0, 0, 0};
    state.position_true = plan.points.front().waypoint;
    state.position = state.position_true;

    Trajectory traj;
    traj.samples.push_back({0.0, state.position_true, 0});

    auto true_static_length = [&] {
        double total = 0.0;
        for (std::size_t i = 1; i < true_contacts.size(); ++i)
            total += distance(true_contacts[i - 1], true_contacts[i]);
        return total;
    };

    double t = 0.0;
    long steps = 0;
    const int n = static_cast<int>(plan.points.size());

    for (state.wp_index = 0; state.wp_index < n; ++state.wp_index) {
        const auto& rec = plan.points[state.wp_index];

        // Contact events are encoded in the plan as annotation changes.
        const Point3& planned_top = state.stack().top();
        if (!(rec.contact == planned_top)) {
            if (state.stack().depth() > 1 && rec.contact == state.stack().below_top()) {
                state.pop_contact();
                true_contacts.pop_back();
            } else {
                state.push_contact(rec.contact);
                Point3 placed = rec.contact;
                placed.x += rng.normal(noise.sigma_cp);
                placed.y += rng.normal(noise.sigma_cp);
                placed.z += rng.normal(noise.sigma_cp);
                true_contacts.push_back(placed);
            }
        }

        while (distance(state.position, rec.waypoint) > r_acc) {
            if (steps++ >= step_budget) {
                traj.outcome = Trajectory::Outcome::aborted;
                return traj;
            }

            // Bounded step of the believed position toward the waypoint. The
            // belief dead-reckons along the commanded controls: the tether
            // localization inverts the measured (r, theta, phi) about the
            // planned contacts, so neither contact error nor truth drift is
            // observable onboard. Acceptance runs on this belief.
            const Point3 to_wp = rec.waypoint - state.position;
            const double gap = to_wp.norm();
            state.position =
                gap <= step_len ? rec.waypoint : state.position + to_wp * (step_len / gap);

            // Desired polar controls from the belief; the physical tether
            // realizes them about the true (noise-shifted) contact stack, and
            // the accumulated localization error displaces the recorded truth.
            const Controls cmd = desired_controls(state.position, state.stack());
            const double r_eff_true = std::max(0.0, cmd.r - true_static_length());
            loc_err.x += rng.normal(noise.sigma_loc);
            loc_err.y += rng.normal(noise.sigma_loc);
            loc_err.z += rng.normal(noise.sigma_loc);
            state.position_true =
                from_polar({r_eff_true, cmd.theta, cmd.phi}, true_contacts.back()) + loc_err;

            // Contact drift random walk (formed contacts may creep).
            for (std::size_t ci = 1; ci < true_contacts.size(); ++ci) {
                true_contacts[ci].x += rng.normal(noise.sigma_drift);
                true_contacts[ci].y += rng.normal(noise.sigma_drift);
                true_contacts[ci].z += rng.normal(noise.sigma_drift);
            }

            t += dt;
            traj.samples.push_back(
                {t, state.position_true, static_cast<int>(state.stack().depth()) - 1});
        }
    }

    traj.outcome = Trajectory::Outcome::completed;
    return traj;
}

CrossTrackStats cross_track_error(const Trajectory& traj, const AnnotatedPath& plan) {
    if (plan.points.size() < 2)
        throw ValidationError("cross_track_error: plan needs at least 2 waypoints");
    if (traj.samples.empty()) throw ValidationError("cross_track_error: trajectory is empty");

    CrossTrackStats stats;
    stats.per_sample.reserve(traj.samples.size());
    stats.contacts_per_sample.reserve(traj.samples.size());

    double sum = 0.0;
    int max_contacts = 0;
    for (const auto& sample : traj.samples) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < plan.points.size(); ++i) {
            best = std::min(best, point_segment_distance(sample.position_true,
                                                         plan.points[i - 1].waypoint,
                                                         plan.points[i].waypoint));
        }
        stats.per_sample.push_back(best);
        stats.contacts_per_sample.push_back(sample.active_contacts);
        sum += best;
        stats.max = std::max(stats.max, best);
        max_contacts = std::max(max_contacts, sample.active_contacts);
    }
    stats.mean = sum / static_cast<double>(traj.samples.size());

    stats.stage_means.assign(max_contacts + 1, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> stage_sum(max_contacts + 1, 0.0);
    std::vector<long> stage_count(max_contacts + 1, 0);
    for (std::size_t s = 0; s < stats.per_sample.size(); ++s) {
        const int c = stats.contacts_per_sample[s];
        stage_sum[c] += stats.per_sample[s];
        ++stage_count[c];
    }
    for (int c = 0; c <= max_contacts; ++c)
        if (stage_count[c] > 0) stats.stage_means[c] = stage_sum[c] / stage_count[c];
    return stats;
}

} // namespace tetherplan
