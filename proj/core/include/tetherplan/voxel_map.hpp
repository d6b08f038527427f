#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tetherplan/geometry.hpp"

namespace tetherplan {

struct GridDims {
    int nx = 0;
    int ny = 0;
    int nz = 0;
    friend bool operator==(const GridDims&, const GridDims&) = default;
};

// Binary 3-D occupancy grid. Construction and inflation produce new values;
// all queries are const and safe to run concurrently on a shared map.
//
// Collision semantics are conservative throughout: a segment collides with a
// cell when it touches the cell's closed cube, so exact face/corner grazes
// count as collisions. Points outside the grid bounds are not free.
class VoxelMap {
public:
    VoxelMap(double resolution, GridDims dims, Point3 origin);

    double resolution() const { return resolution_; }
    const GridDims& dims() const { return dims_; }
    const Point3& origin() const { return origin_; }
    double inflated_by() const { return inflated_by_; }

    // World extents of the grid (min corner = origin).
    Point3 max_corner() const;

    bool in_bounds(const CellIndex& c) const {
        return c.i >= 0 && c.i < dims_.nx && c.j >= 0 && c.j < dims_.ny && c.k >= 0 &&
               c.k < dims_.nz;
    }
    bool in_bounds(const Point3& p) const;

    // Cell containing p. Points exactly on an interior face belong to the
    // upper cell (floor convention); the max-corner boundary maps inside.
    std::optional<CellIndex> cell_at(const Point3& p) const;

    Point3 center(const CellIndex& c) const {
        return {origin_.x + (c.i + 0.5) * resolution_, origin_.y + (c.j + 0.5) * resolution_,
                origin_.z + (c.k + 0.5) * resolution_};
    }
    Point3 cell_min_corner(const CellIndex& c) const {
        return {origin_.x + c.i * resolution_, origin_.y + c.j * resolution_,
                origin_.z + c.k * resolution_};
    }

    void set_occupied(const CellIndex& c, bool value = true);
    bool occupied(const CellIndex& c) const { return cells_[flat(c)] != 0; }

    std::size_t occupied_count() const { return occupied_count_; }
    std::size_t cell_count() const { return cells_.size(); }
    std::size_t free_count() const { return cells_.size() - occupied_count_; }

    // Occupied cells in (i, j, k) lexicographic order.
    std::vector<CellIndex> occupied_cells() const;

    // True iff p is inside bounds and its cell is unoccupied.
    bool is_free(const Point3& p) const;

    // Grow obstacles by a robot radius: a cell is occupied in the result iff
    // some originally occupied cell center lies within Euclidean distance
    // <= radius of its center. The result's inflated_by() reports radius.
    VoxelMap inflate(double radius) const;

    // True iff the closed segment [a, b] touches the closed cube of any
    // occupied cell (supercover: corner and face grazes included).
    bool segment_collides(const Point3& a, const Point3& b) const;

    // All in-bounds cells whose closed cube the closed segment [a, b]
    // touches, ordered by entry position from a to b, without duplicates.
    std::vector<CellIndex> cells_on_segment(const Point3& a, const Point3& b) const;

    std::size_t flat(const CellIndex& c) const {
        return static_cast<std::size_t>(c.i) +
               static_cast<std::size_t>(dims_.nx) *
                   (static_cast<std::size_t>(c.j) +
                    static_cast<std::size_t>(dims_.ny) * static_cast<std::size_t>(c.k));
    }

    friend bool operator==(const VoxelMap& a, const VoxelMap& b) {
        return a.resolution_ == b.resolution_ && a.dims_ == b.dims_ && a.origin_ == b.origin_ &&
               a.cells_ == b.cells_;
    }

    // True when two maps describe the same grid frame (resolution/dims/origin).
    bool same_frame(const VoxelMap& other) const {
        return resolution_ == other.resolution_ && dims_ == other.dims_ &&
               origin_ == other.origin_;
    }

private:
    // Entry parameter of [a, b] into the closed cube of cell c, or nullopt.
    std::optional<double> segment_cell_entry(const Point3& a, const Point3& b,
                                             const CellIndex& c) const;

    template <typename Visit>
    void walk_segment(const Point3& a, const Point3& b, Visit&& visit) const;

    double resolution_;
    GridDims dims_;
    Point3 origin_;
    double inflated_by_ = 0.0;
    std::size_t occupied_count_ = 0;
    std::vector<uint8_t> cells_;
};

} // namespace tetherplan
