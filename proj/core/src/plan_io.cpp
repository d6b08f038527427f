#include "tetherplan/plan_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tetherplan/errors.hpp"

namespace tetherplan {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(std::string("cannot open ") + what + " file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text, const char* what) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(std::string("cannot write ") + what + " file: " + path.string());
    out << text;
}

double parse_double_token(const std::string& tok, const std::string& where) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError(where + ": bad number '" + tok + "'");
    return v;
}

} // namespace

std::string plan_to_string(const AnnotatedPath& plan) {
    std::ostringstream out;
    out << "# tetherplan plan v1\n";
    out << "# map " << plan.map_ref << "\n";
    out << "# planner " << plan.planner << "\n";
    out << "# tether_origin " << format_double(plan.tether_origin.x) << " "
        << format_double(plan.tether_origin.y) << " " << format_double(plan.tether_origin.z)
        << "\n";
    out << "# columns wx wy wz cx cy cz\n";
    for (const auto& rec : plan.points) {
        out << format_double(rec.waypoint.x) << " " << format_double(rec.waypoint.y) << " "
            << format_double(rec.waypoint.z) << " " << format_double(rec.contact.x) << " "
            << format_double(rec.contact.y) << " " << format_double(rec.contact.z) << "\n";
    }
    return out.str();
}

AnnotatedPath parse_plan(const std::string& text, const std::string& name) {
    AnnotatedPath plan;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_origin = false;
    bool have_tag = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string where = name + ":" + std::to_string(line_no);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "tetherplan") {
                have_tag = true;
            } else if (key == "map") {
                hs >> std::ws;
                std::getline(hs, plan.map_ref);
            } else if (key == "planner") {
                hs >> plan.planner;
            } else if (key == "tether_origin") {
                std::string xs, ys, zs;
                if (!(hs >> xs >> ys >> zs))
                    throw ParseError(where + ": tether_origin needs three numbers");
                plan.tether_origin = {parse_double_token(xs, where), parse_double_token(ys, where),
                                      parse_double_token(zs, where)};
                have_origin = true;
            }
            // Unknown header keys (e.g. columns) are documentation only.
            continue;
        }
        std::istringstream rs(line);
        std::string tok[6];
        if (!(rs >> tok[0] >> tok[1] >> tok[2] >> tok[3] >> tok[4] >> tok[5]))
            throw ParseError(where + ": plan records need 6 columns (wx wy wz cx cy cz)");
        std::string extra;
        if (rs >> extra) throw ParseError(where + ": trailing content '" + extra + "'");
        AnnotatedWaypoint rec;
        rec.waypoint = {parse_double_token(tok[0], where), parse_double_token(tok[1], where),
                        parse_double_token(tok[2], where)};
        rec.contact = {parse_double_token(tok[3], where), parse_double_token(tok[4], where),
                       parse_double_token(tok[5], where)};
        plan.points.push_back(rec);
    }

    if (!have_tag) throw ParseError(name + ": missing '# tetherplan plan' header");
    if (!have_origin) throw ParseError(name + ": missing '# tether_origin' header");
    if (plan.points.empty()) throw ParseError(name + ": plan has no waypoint records");
    return plan;
}

void save_plan(const AnnotatedPath& plan, const std::filesystem::path& path) {
    write_file(path, plan_to_string(plan), "plan");
}

AnnotatedPath load_plan(const std::filesystem::path& path) {
    return parse_plan(read_file(path, "plan"), path.string());
}

std::string trajectory_to_string(const Trajectory& traj, const std::string& map_ref) {
    std::ostringstream out;
    out << "# tetherplan trajectory v1\n";
    if (!map_ref.empty()) out << "# map " << map_ref << "\n";
    out << "# outcome "
        << (traj.outcome == Trajectory::Outcome::completed ? "completed" : "aborted") << "\n";
    out << "# columns t x y z active_contacts\n";
    for (const auto& s : traj.samples) {
        out << format_double(s.t) << " " << format_double(s.position_true.x) << " "
            << format_double(s.position_true.y) << " " << format_double(s.position_true.z) << " "
            << s.active_contacts << "\n";
    }
    return out.str();
}

Trajectory parse_trajectory(const std::string& text, const std::string& name,
                            std::string* map_ref) {
    Trajectory traj;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string where = name + ":" + std::to_string(line_no);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "map" && map_ref) {
                hs >> std::ws;
                std::getline(hs, *map_ref);
            } else if (key == "outcome") {
                std::string value;
                hs >> value;
                if (value == "completed")
                    traj.outcome = Trajectory::Outcome::completed;
                else if (value == "aborted")
                    traj.outcome = Trajectory::Outcome::aborted;
                else
                    throw ParseError(where + ": unknown outcome '" + value + "'");
            }
            continue;
        }
        std::istringstream rs(line);
        std::string ts, xs, ys, zs, cs;
        if (!(rs >> ts >> xs >> ys >> zs >> cs))
            throw ParseError(where + ": trajectory rows need 5 columns (t x y z contacts)");
        TrajectorySample s;
        s.t = parse_double_token(ts, where);
        s.position_true = {parse_double_token(xs, where), parse_double_token(ys, where),
                           parse_double_token(zs, where)};
        s.active_contacts = static_cast<int>(parse_double_token(cs, where));
        traj.samples.push_back(s);
    }
    return traj;
}

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                     const std::string& map_ref) {
    write_file(path, trajectory_to_string(traj, map_ref), "trajectory");
}

Trajectory load_trajectory(const std::filesystem::path& path, std::string* map_ref) {
    return parse_trajectory(read_file(path, "trajectory"), path.string(), map_ref);
}

} // namespace tetherplan
