#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace casimir {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Rotation by the angle whose cosine/sine are (c, s).
inline Vec2 rotate(Vec2 v, double c, double s) { return {c * v.x - s * v.y, s * v.x + c * v.y}; }

// The line {x : normal . x = offset} with |normal| = 1.
struct LineObject {
    Vec2 normal;
    double offset = 0.0;
};

LineObject make_line(Vec2 normal, double offset);

struct ConvexPolygon {
    std::vector<Vec2> vertices;  // counterclockwise; may be empty
};

double polygon_area(const ConvexPolygon& poly);

// Intersects poly with the half-plane {x : n . x <= c}.
ConvexPolygon clip_half_plane(const ConvexPolygon& poly, Vec2 n, double c);

struct TicTacToe {
    double w = 1.0;  // horizontal gap between the two vertical lines
    double h = 1.0;  // vertical gap between the two horizontal lines
};

struct IsoTriangle {
    double base = 1.0;
    double height = 1.0;
};

struct Configuration {
    enum class Kind { generic, tictactoe, triangle };
    Kind kind = Kind::generic;
    std::vector<LineObject> lines;
    TicTacToe ttt{};
    IsoTriangle tri{};

    // Area of the enclosed figure; 1 for generic line sets (no enclosed figure).
    double enclosed_area() const;
};

Configuration make_tictactoe(double w, double h);
Configuration make_triangle(const IsoTriangle& tri);
Configuration make_lines(std::vector<LineObject> lines);

double signed_distance(const LineObject& line, Vec2 point);

struct Extent {
    double min = 0.0;
    double max = 0.0;
};

Extent projection_extent(std::span<const Vec2> points, Vec2 direction);

struct UnitBridge;

// Area of anchor positions x for which the loop rescaled by sqrt(beta) and
// placed at x crosses every line: the intersection of the per-line slabs
// {x : -sqrt(beta)*M_i <= d_i(x) <= -sqrt(beta)*m_i}.
double support_area(const Configuration& config, const UnitBridge& bridge, double beta);

// Same slab intersection evaluated from precomputed directional extents,
// one per line, in line order.
double support_area_from_extents(std::span<const LineObject> lines,
                                 std::span<const Extent> extents, double beta);

// Infimum beta0 with support_area > 0 for all beta > beta0, by bisection to
// 1e-10 relative tolerance. A single line gives 0.
double minimal_scale(const Configuration& config, const UnitBridge& bridge);

double minimal_scale_from_extents(std::span<const LineObject> lines,
                                  std::span<const Extent> extents);

// Same bisection seeded with a caller-supplied bracket; the bracket is
// verified (grown/reset) before use, so a wrong hint only costs time.
double minimal_scale_from_extents(std::span<const LineObject> lines,
                                  std::span<const Extent> extents, double bracket_lo,
                                  double bracket_hi);

// Least-squares common point of a line set and the largest |d_i| residual
// there; residual ~ 0 means all lines pass through one point.
struct CommonPointCheck {
    Vec2 point;
    double max_residual = 0.0;
};

CommonPointCheck common_point_check(std::span<const LineObject> lines);

}  // namespace casimir
