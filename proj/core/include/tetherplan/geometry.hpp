#pragma once

#include <cmath>
#include <compare>

namespace tetherplan {

// World-frame point in meters. y is the vertical (up) axis; azimuths are
// measured from +z toward +x.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Point3 operator+(const Point3& a, const Point3& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Point3 operator-(const Point3& a, const Point3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Point3 operator*(const Point3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
    friend Point3 operator*(double s, const Point3& a) { return a * s; }
    friend bool operator==(const Point3& a, const Point3& b) = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double dot(const Point3& a, const Point3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Point3 cross(const Point3& a, const Point3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

inline Point3 lerp(const Point3& a, const Point3& b, double t) { return a + (b - a) * t; }

// Grid cell address; valid ranges are bounded by the owning map's dims.
struct CellIndex {
    int i = 0;
    int j = 0;
    int k = 0;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
    friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

// Minimum distance from point p to the closed segment [a, b].
inline double point_segment_distance(const Point3& p, const Point3& a, const Point3& b) {
    const Point3 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    double t = dot(p - a, ab) / len2;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    return distance(p, a + ab * t);
}

} // namespace tetherplan
