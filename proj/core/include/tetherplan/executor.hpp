#pragma once

#include <cstdint>
#include <vector>

#include "tetherplan/contact.hpp"
#include "tetherplan/geometry.hpp"
#include "tetherplan/voxel_map.hpp"

namespace tetherplan {

// Tether command triple: total tether length r, elevation theta in
// [-pi/2, pi/2] and azimuth phi in (-pi, pi], with phi measured from +z
// toward +x and y up.
struct Controls {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

// Effective polar coordinates of a point relative to a contact point.
struct PolarCoords {
    double r_eff = 0.0;
    double theta_eff = 0.0;
    double phi_eff = 0.0;
};

// r_eff = |p - cp|, theta_eff = arcsin((y - y_n) / r_eff),
// phi_eff = atan2(x - x_n, z - z_n); the r_eff = 0 singularity maps to
// zero angles.
PolarCoords to_polar(const Point3& p, const Point3& cp);

// Cartesian position of polar coordinates taken about cp.
Point3 from_polar(const PolarCoords& polar, const Point3& cp);

// Summed Euclidean length of the tether segments between stacked contact
// points; a stack holding only the origin has zero static length.
double static_length(const ContactStack& stack);

// Desired controls for holding wp with the given contact stack:
// r = r_eff + r_sta, angles relative to the stack top.
Controls desired_controls(const Point3& wp, const ContactStack& stack);

// Belief-side contact bookkeeping of the executor: the stack of planned
// contacts plus the static tether length maintained incrementally (added on
// push, subtracted on pop). r_sta() must always match a full recomputation.
class ExecutorState {
public:
    explicit ExecutorState(const Point3& tether_origin) : stack_(tether_origin) {}

    const ContactStack& stack() const { return stack_; }
    double r_sta() const { return r_sta_; }
    double r_sta_recomputed() const { return static_length(stack_); }

    void push_contact(const Point3& cp) {
        r_sta_ += distance(stack_.top(), cp);
        stack_.push(cp);
    }

    void pop_contact() {
        const Point3 top = stack_.pop();
        r_sta_ -= distance(stack_.top(), top);
    }

    Point3 position;      // believed position (control input)
    Point3 position_true; // simulated ground truth
    int wp_index = 0;

private:
    ContactStack stack_;
    double r_sta_ = 0.0;
};

// Simulation noise model: contact placement error applied once per push,
// per-step contact random-walk drift, and per-step localization error
// growth. All values are standard deviations per axis.
struct NoiseConfig {
    double sigma_cp = 0.15;     // m, once per push
    double sigma_drift = 0.01;  // m per step
    double sigma_loc = 0.002;   // m per step
    uint64_t seed = 0;
};

struct TrajectorySample {
    double t = 0.0;
    Point3 position_true;
    int active_contacts = 0; // contacts excluding the reel
};

struct Trajectory {
    enum class Outcome { completed, aborted };
    std::vector<TrajectorySample> samples;
    Outcome outcome = Outcome::completed;
};

// Kinematic execution of a 6-D plan: a point robot steps toward each
// waypoint at most speed/rate per step, polar controls are derived from the
// believed position and the planned contact stack, and the realized
// position follows the commanded controls about the noise-perturbed true
// contacts. A waypoint is accepted when the believed position enters its
// r_acc ball. Aborts (without throwing) when the step budget runs out.
Trajectory simulate_execution(const AnnotatedPath& plan, const VoxelMap& map_original,
                              const NoiseConfig& noise, double r_acc, double speed, double rate,
                              long step_budget = 100000);

struct CrossTrackStats {
    double mean = 0.0;
    double max = 0.0;
    std::vector<double> per_sample;
    std::vector<int> contacts_per_sample;
    // Mean error over samples grouped by active-contact count (index =
    // contact count); empty groups report NaN.
    std::vector<double> stage_means;
};

// Minimum distance from each trajectory sample to the planned waypoint
// polyline, with mean, max, and per-contact-stage means.
CrossTrackStats cross_track_error(const Trajectory& traj, const AnnotatedPath& plan);

} // namespace tetherplan
