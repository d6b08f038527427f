#include "tetherplan/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tetherplan {

namespace {

// One axis-aligned projection: keeps two of the three world axes.
struct Projection {
    const char* name;
    int ax_h; // world axis drawn horizontally (0=x, 1=y, 2=z)
    int ax_v; // world axis drawn vertically (up)
};

double axis_of(const Point3& p, int ax) {
    return ax == 0 ? p.x : (ax == 1 ? p.y : p.z);
}

int cell_axis_of(const CellIndex& c, int ax) {
    return ax == 0 ? c.i : (ax == 1 ? c.j : c.k);
}

int dim_of(const GridDims& d, int ax) {
    return ax == 0 ? d.nx : (ax == 1 ? d.ny : d.nz);
}

std::string fmt(double v) {
    // Two decimals are plenty for figure coordinates and keep files small.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

class Panel {
public:
    Panel(const Projection& proj, const VoxelMap& map, double offset_x, double scale,
          double panel_h)
        : proj_(proj), map_(map), offset_x_(offset_x), scale_(scale), panel_h_(panel_h) {}

    double sx(double world_h) const {
        return offset_x_ + (world_h - axis_of(map_.origin(), proj_.ax_h)) * scale_;
    }
    double sy(double world_v) const {
        // SVG y grows downward; flip so the world axis points up.
        return panel_h_ - (world_v - axis_of(map_.origin(), proj_.ax_v)) * scale_;
    }

    void cell_rect(std::ostringstream& out, int ch, int cv, const std::string& fill) const {
        const double res = map_.resolution();
        const double wx = axis_of(map_.origin(), proj_.ax_h) + ch * res;
        const double wy = axis_of(map_.origin(), proj_.ax_v) + cv * res;
        out << "<rect x=\"" << fmt(sx(wx)) << "\" y=\"" << fmt(sy(wy + res)) << "\" width=\""
            << fmt(res * scale_) << "\" height=\"" << fmt(res * scale_) << "\" fill=\"" << fill
            << "\"/>\n";
    }

    void polyline(std::ostringstream& out, const std::vector<Point3>& pts,
                  const std::string& stroke, double width) const {
        if (pts.size() < 2) return;
        out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
            << fmt(width) << "\" points=\"";
        for (const Point3& p : pts)
            out << fmt(sx(axis_of(p, proj_.ax_h))) << "," << fmt(sy(axis_of(p, proj_.ax_v)))
                << " ";
        out << "\"/>\n";
    }

    void marker(std::ostringstream& out, const Point3& p, const std::string& fill,
                double radius) const {
        out << "<circle cx=\"" << fmt(sx(axis_of(p, proj_.ax_h))) << "\" cy=\""
            << fmt(sy(axis_of(p, proj_.ax_v))) << "\" r=\"" << fmt(radius) << "\" fill=\"" << fill
            << "\"/>\n";
    }

private:
    Projection proj_;
    const VoxelMap& map_;
    double offset_x_;
    double scale_;
    double panel_h_;
};

// Projected footprint of a cell set: marks (h, v) pairs covered by any cell.
std::vector<uint8_t> project_cells(const VoxelMap& map, const Projection& proj,
                                   const std::vector<CellIndex>& cells) {
    const int nh = dim_of(map.dims(), proj.ax_h);
    const int nv = dim_of(map.dims(), proj.ax_v);
    std::vector<uint8_t> grid(static_cast<std::size_t>(nh) * nv, 0);
    for (const auto& c : cells)
        grid[cell_axis_of(c, proj.ax_h) + static_cast<std::size_t>(nh) *
                                              cell_axis_of(c, proj.ax_v)] = 1;
    return grid;
}

} // namespace

std::string render_svg(const VoxelMap& original, const VoxelMap& inflated,
                       const ReducedMap* reduced, const AnnotatedPath& plan,
                       const std::vector<Trajectory>& trajectories) {
    const Projection projections[3] = {{"xy", 0, 1}, {"yz", 2, 1}, {"xz", 0, 2}};

    const double scale = 120.0; // px per meter
    const double margin = 20.0;
    const double label_h = 18.0;

    double panel_w[3];
    double panel_h = 0.0;
    const Point3 span = original.max_corner() - original.origin();
    for (int p = 0; p < 3; ++p) {
        panel_w[p] = axis_of(span, projections[p].ax_h) * scale;
        panel_h = std::max(panel_h, axis_of(span, projections[p].ax_v) * scale);
    }
    const double total_w = panel_w[0] + panel_w[1] + panel_w[2] + 4 * margin;
    const double total_h = panel_h + 2 * margin + label_h;

    const auto original_cells = original.occupied_cells();
    const auto inflated_cells = inflated.occupied_cells();
    const std::vector<CellIndex> blocked_cells =
        reduced ? reduced->blocked_cells() : std::vector<CellIndex>{};

    std::vector<Point3> plan_pts;
    plan_pts.reserve(plan.points.size());
    std::vector<Point3> contact_glyphs;
    for (const auto& rec : plan.points) {
        plan_pts.push_back(rec.waypoint);
        if (!(rec.contact == plan.tether_origin) &&
            std::none_of(contact_glyphs.begin(), contact_glyphs.end(),
                         [&](const Point3& c) { return c == rec.contact; }))
            contact_glyphs.push_back(rec.contact);
    }

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(total_w) << "\" height=\""
        << fmt(total_h) << "\" viewBox=\"0 0 " << fmt(total_w) << " " << fmt(total_h) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(total_w) << "\" height=\"" << fmt(total_h)
        << "\" fill=\"white\"/>\n";

    double offset_x = margin;
    for (int p = 0; p < 3; ++p) {
        const Projection& proj = projections[p];
        out << "<g transform=\"translate(0," << fmt(margin) << ")\">\n";
        Panel panel(proj, original, offset_x, scale, panel_h);

        out << "<rect x=\"" << fmt(offset_x) << "\" y=\""
            << fmt(panel_h - axis_of(span, proj.ax_v) * scale) << "\" width=\""
            << fmt(panel_w[p]) << "\" height=\"" << fmt(axis_of(span, proj.ax_v) * scale)
            << "\" fill=\"none\" stroke=\"#888\"/>\n";

        // Cells: inflation halo first, tether-blocked, then hard obstacles.
        const int nh = dim_of(original.dims(), proj.ax_h);
        const int nv = dim_of(original.dims(), proj.ax_v);
        auto draw_layer = [&](const std::vector<CellIndex>& cells, const char* fill) {
            const auto grid = project_cells(original, proj, cells);
            for (int v = 0; v < nv; ++v)
                for (int h = 0; h < nh; ++h)
                    if (grid[h + static_cast<std::size_t>(nh) * v])
                        panel.cell_rect(out, h, v, fill);
        };
        draw_layer(inflated_cells, "#f6e3b4");
        if (!blocked_cells.empty()) draw_layer(blocked_cells, "#fdf49a");
        draw_layer(original_cells, "#c0392b");

        for (const auto& traj : trajectories) {
            std::vector<Point3> pts;
            pts.reserve(traj.samples.size());
            for (const auto& s : traj.samples) pts.push_back(s.position_true);
            panel.polyline(out, pts, "#27ae60", 1.0);
        }
        panel.polyline(out, plan_pts, "#e74c3c", 1.5);

        panel.marker(out, plan.tether_origin, "#2c3e50", 4.0);
        for (const Point3& cp : contact_glyphs) panel.marker(out, cp, "#8e44ad", 3.5);

        out << "<text x=\"" << fmt(offset_x + panel_w[p] / 2) << "\" y=\""
            << fmt(panel_h + label_h) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"12\">" << proj.name << "</text>\n";
        out << "</g>\n";
        offset_x += panel_w[p] + margin;
    }

    out << "</svg>\n";
    return out.str();
}

} // namespace tetherplan
