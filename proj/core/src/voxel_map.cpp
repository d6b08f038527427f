#include "tetherplan/voxel_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "tetherplan/errors.hpp"

namespace tetherplan {

namespace {

double axis(const Point3& p, int ax) {
    return ax == 0 ? p.x : (ax == 1 ? p.y : p.z);
}

int& cell_axis(CellIndex& c, int ax) {
    return ax == 0 ? c.i : (ax == 1 ? c.j : c.k);
}

} // namespace

VoxelMap::VoxelMap(double resolution, GridDims dims, Point3 origin)
    : resolution_(resolution), dims_(dims), origin_(origin) {
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw ValidationError("voxel map resolution must be positive");
    }
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) {
        throw ValidationError("voxel map dims must be at least 1 in every axis");
    }
    if (!origin.finite()) {
        throw ValidationError("voxel map origin must be finite");
    }
    cells_.assign(static_cast<std::size_t>(dims.nx) * static_cast<std::size_t>(dims.ny) *
                      static_cast<std::size_t>(dims.nz),
                  0);
}

Point3 VoxelMap::max_corner() const {
    return {origin_.x + dims_.nx * resolution_, origin_.y + dims_.ny * resolution_,
            origin_.z + dims_.nz * resolution_};
}

bool VoxelMap::in_bounds(const Point3& p) const {
    const Point3 hi = max_corner();
    return p.x >= origin_.x && p.x <= hi.x && p.y >= origin_.y && p.y <= hi.y &&
           p.z >= origin_.z && p.z <= hi.z;
}

std::optional<CellIndex> VoxelMap::cell_at(const Point3& p) const {
    if (!in_bounds(p)) return std::nullopt;
    auto idx = [&](double v, double o, int n) {
        int i = static_cast<int>(std::floor((v - o) / resolution_));
        return std::clamp(i, 0, n - 1);
    };
    return CellIndex{idx(p.x, origin_.x, dims_.nx), idx(p.y, origin_.y, dims_.ny),
                     idx(p.z, origin_.z, dims_.nz)};
}

void VoxelMap::set_occupied(const CellIndex& c, bool value) {
    if (!in_bounds(c)) throw ValidationError("occupied cell index outside map dims");
    uint8_t& slot = cells_[flat(c)];
    if (slot != static_cast<uint8_t>(value)) {
        slot = static_cast<uint8_t>(value);
        occupied_count_ += value ? 1 : -1;
    }
}

std::vector<CellIndex> VoxelMap::occupied_cells() const {
    std::vector<CellIndex> out;
    out.reserve(occupied_count_);
    for (int k = 0; k < dims_.nz; ++k)
        for (int j = 0; j < dims_.ny; ++j)
            for (int i = 0; i < dims_.nx; ++i)
                if (occupied({i, j, k})) out.push_back({i, j, k});
    std::sort(out.begin(), out.end());
    return out;
}

bool VoxelMap::is_free(const Point3& p) const {
    const auto c = cell_at(p);
    return c.has_value() && !occupied(*c);
}

VoxelMap VoxelMap::inflate(double radius) const {
    if (radius < 0.0 || !std::isfinite(radius)) {
        throw ValidationError("inflation radius must be non-negative");
    }
    VoxelMap out(resolution_, dims_, origin_);
    out.inflated_by_ = radius;

    // Integer offset ball: cell-center distance <= radius.
    const int reach = static_cast<int>(std::floor(radius / resolution_));
    std::vector<CellIndex> ball;
    for (int di = -reach; di <= reach; ++di)
        for (int dj = -reach; dj <= reach; ++dj)
            for (int dk = -reach; dk <= reach; ++dk)
                if (resolution_ * std::sqrt(double(di) * di + double(dj) * dj + double(dk) * dk) <=
                    radius)
                    ball.push_back({di, dj, dk});

    for (int k = 0; k < dims_.nz; ++k)
        for (int j = 0; j < dims_.ny; ++j)
            for (int i = 0; i < dims_.nx; ++i) {
                if (!occupied({i, j, k})) continue;
                for (const auto& d : ball) {
                    const CellIndex n{i + d.i, j + d.j, k + d.k};
                    if (out.in_bounds(n)) out.set_occupied(n);
                }
            }
    return out;
}

std::optional<double> VoxelMap::segment_cell_entry(const Point3& a, const Point3& b,
                                                   const CellIndex& c) const {
    const Point3 lo = cell_min_corner(c);
    double tmin = 0.0;
    double tmax = 1.0;
    for (int ax = 0; ax < 3; ++ax) {
        const double av = axis(a, ax);
        const double d = axis(b, ax) - av;
        const double lov = axis(lo, ax);
        const double hiv = lov + resolution_;
        if (d == 0.0) {
            if (av < lov || av > hiv) return std::nullopt;
        } else {
            double t1 = (lov - av) / d;
            double t2 = (hiv - av) / d;
            if (t1 > t2) std::swap(t1, t2);
            tmin = std::max(tmin, t1);
            tmax = std::min(tmax, t2);
            if (tmin > tmax) return std::nullopt;
        }
    }
    return tmin;
}

// Walks the grid cells along [a, b] (clipped to the map volume) and calls
// visit on each; visit returns false to stop early. Every cell whose closed
// cube the segment touches lies within Chebyshev distance 1 of some visited
// cell, so callers scan the 3x3x3 neighborhood of each visited cell.
template <typename Visit>
void VoxelMap::walk_segment(const Point3& a, const Point3& b, Visit&& visit) const {
    // Clip the parameter interval against the closed map volume.
    double t0 = 0.0;
    double t1 = 1.0;
    const Point3 hi = max_corner();
    for (int ax = 0; ax < 3; ++ax) {
        const double av = axis(a, ax);
        const double d = axis(b, ax) - av;
        const double lov = axis(origin_, ax);
        const double hiv = axis(hi, ax);
        if (d == 0.0) {
            if (av < lov || av > hiv) return;
        } else {
            double ta = (lov - av) / d;
            double tb = (hiv - av) / d;
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return;
        }
    }

    const auto start = cell_at(lerp(a, b, t0));
    const auto end = cell_at(lerp(a, b, t1));
    if (!start || !end) return; // clipped points lie on the volume by construction

    CellIndex cur = *start;
    if (!visit(cur)) return;
    if (cur == *end) return;

    const double inf = std::numeric_limits<double>::infinity();
    int step[3];
    double t_next[3];
    double t_delta[3];
    for (int ax = 0; ax < 3; ++ax) {
        const double av = axis(a, ax);
        const double d = axis(b, ax) - av;
        const int ci = ax == 0 ? cur.i : (ax == 1 ? cur.j : cur.k);
        if (d > 0.0) {
            step[ax] = 1;
            t_delta[ax] = resolution_ / d;
            t_next[ax] = (axis(origin_, ax) + (ci + 1) * resolution_ - av) / d;
        } else if (d < 0.0) {
            step[ax] = -1;
            t_delta[ax] = resolution_ / -d;
            t_next[ax] = (axis(origin_, ax) + ci * resolution_ - av) / d;
        } else {
            step[ax] = 0;
            t_delta[ax] = inf;
            t_next[ax] = inf;
        }
    }

    const int max_steps = dims_.nx + dims_.ny + dims_.nz + 3;
    for (int n = 0; n < max_steps; ++n) {
        int ax = 0;
        if (t_next[1] < t_next[ax]) ax = 1;
        if (t_next[2] < t_next[ax]) ax = 2;
        if (t_next[ax] > t1) return; // current cell covers the remainder
        cell_axis(cur, ax) += step[ax];
        t_next[ax] += t_delta[ax];
        if (!in_bounds(cur)) return;
        if (!visit(cur)) return;
        if (cur == *end) return;
    }
}

bool VoxelMap::segment_collides(const Point3& a, const Point3& b) const {
    if (occupied_count_ == 0) return false;
    bool hit = false;
    walk_segment(a, b, [&](const CellIndex& c) {
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                for (int dk = -1; dk <= 1; ++dk) {
                    const CellIndex n{c.i + di, c.j + dj, c.k + dk};
                    if (!in_bounds(n) || !occupied(n)) continue;
                    if (segment_cell_entry(a, b, n)) {
                        hit = true;
                        return false;
                    }
                }
        return true;
    });
    return hit;
}

std::vector<CellIndex> VoxelMap::cells_on_segment(const Point3& a, const Point3& b) const {
    std::vector<uint8_t> seen(cells_.size(), 0);
    std::vector<std::pair<double, CellIndex>> found;
    walk_segment(a, b, [&](const CellIndex& c) {
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                for (int dk = -1; dk <= 1; ++dk) {
                    const CellIndex n{c.i + di, c.j + dj, c.k + dk};
                    if (!in_bounds(n)) continue;
                    uint8_t& mark = seen[flat(n)];
                    if (mark) continue;
                    mark = 1;
                    if (const auto entry = segment_cell_entry(a, b, n)) {
                        found.emplace_back(*entry, n);
                    }
                }
        return true;
    });
    std::sort(found.begin(), found.end(), [](const auto& l, const auto& r) {
        if (l.first != r.first) return l.first < r.first;
        return l.second < r.second;
    });
    std::vector<CellIndex> out;
    out.reserve(found.size());
    for (const auto& [t, c] : found) out.push_back(c);
    return out;
}

} // namespace tetherplan
