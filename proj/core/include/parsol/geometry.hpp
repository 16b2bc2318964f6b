// geometry.hpp -- small vector/triangle/AABB toolkit used by the scene and
//                 ray-casting code. Local planar CRS, meters, z up.
#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace parsol {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(Vec3 a) {
    const double n = norm(a);
    return n > 0.0 ? (1.0 / n) * a : a;
}

struct Triangle {
    Vec3 a, b, c;

    // Right-hand-rule normal; winding encodes the outward side.
    Vec3 normal() const { return normalized(cross(b - a, c - a)); }
    Vec3 centroid() const { return (1.0 / 3.0) * (a + b + c); }
};

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
            std::numeric_limits<double>::lowest()};

    void expand(Vec3 p) {
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    void expand(const Triangle& t) { expand(t.a); expand(t.b); expand(t.c); }

    // Slab test for the half-open ray origin + t*dir, t in (0, inf).
    bool intersects_ray(Vec3 origin, Vec3 dir) const {
        double tmin = 0.0;
        double tmax = std::numeric_limits<double>::max();
        const double o[3] = {origin.x, origin.y, origin.z};
        const double d[3] = {dir.x, dir.y, dir.z};
        const double l[3] = {lo.x, lo.y, lo.z};
        const double h[3] = {hi.x, hi.y, hi.z};
        for (int i = 0; i < 3; ++i) {
            if (std::abs(d[i]) < 1e-15) {
                if (o[i] < l[i] || o[i] > h[i]) return false;
                continue;
            }
            double t0 = (l[i] - o[i]) / d[i];
            double t1 = (h[i] - o[i]) / d[i];
            if (t0 > t1) std::swap(t0, t1);
            tmin = std::max(tmin, t0);
            tmax = std::min(tmax, t1);
            if (tmin > tmax) return false;
        }
        return true;
    }
};

// Moller-Trumbore ray/triangle intersection. Returns the ray parameter t of
// the hit, or a negative value when the ray misses. min_t guards against
// self-intersection at the origin.
inline double ray_triangle(Vec3 origin, Vec3 dir, const Triangle& tri, double min_t) {
    constexpr double kEps = 1e-12;
    const Vec3 e1 = tri.b - tri.a;
    const Vec3 e2 = tri.c - tri.a;
    const Vec3 pvec = cross(dir, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < kEps) return -1.0;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - tri.a;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return -1.0;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(dir, qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return -1.0;
    const double t = dot(e2, qvec) * inv_det;
    return t > min_t ? t : -1.0;
}

} // namespace parsol
