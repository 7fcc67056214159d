#include "casimir/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/bridges.hpp"

namespace casimir {

LineObject make_line(Vec2 normal, double offset) {
    const double n = norm(normal);
    if (n < 1e-12) throw std::invalid_argument("line normal must be nonzero");
    return LineObject{{normal.x / n, normal.y / n}, offset};
}

double signed_distance(const LineObject& line, Vec2 point) {
    return dot(line.normal, point) - line.offset;
}

double polygon_area(const ConvexPolygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        twice += cross(a, b);
    }
    return 0.5 * twice;
}

ConvexPolygon clip_half_plane(const ConvexPolygon& poly, Vec2 n, double c) {
    const auto& v = poly.vertices;
    ConvexPolygon out;
    if (v.empty()) return out;
    out.vertices.reserve(v.size() + 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        const double da = dot(n, a) - c;
        const double db = dot(n, b) - c;
        if (da <= 0.0) out.vertices.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db <= 0.0)) {
            const double t = da / (da - db);
            out.vertices.push_back(a + t * (b - a));
        }
    }
    if (out.vertices.size() < 3) out.vertices.clear();
    return out;
}

Extent projection_extent(std::span<const Vec2> points, Vec2 direction) {
    if (points.empty()) throw std::invalid_argument("empty path");
    double lo = dot(points[0], direction);
    double hi = lo;
    for (const Vec2& p : points) {
        const double s = dot(p, direction);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return {lo, hi};
}

double Configuration::enclosed_area() const {
    switch (kind) {
        case Kind::tictactoe:
            return ttt.w * ttt.h;
        case Kind::triangle:
            return 0.5 * tri.base * tri.height;
        case Kind::generic:
            return 1.0;
    }
    return 1.0;
}

Configuration make_tictactoe(double w, double h) {
    if (w <= 0.0 || h <= 0.0) throw std::invalid_argument("w and h must be positive");
    Configuration c;
    c.kind = Configuration::Kind::tictactoe;
    c.ttt = {w, h};
    c.lines = {
        {{1.0, 0.0}, 0.5 * w},
        {{-1.0, 0.0}, 0.5 * w},
        {{0.0, 1.0}, 0.5 * h},
        {{0.0, -1.0}, 0.5 * h},
    };
    return c;
}

Configuration make_triangle(const IsoTriangle& tri) {
    if (tri.base <= 0.0 || tri.height <= 0.0)
        throw std::invalid_argument("base and height must be positive");
    Configuration c;
    c.kind = Configuration::Kind::triangle;
    c.tri = tri;
    const Vec2 a{-0.5 * tri.base, 0.0};
    const Vec2 b{0.5 * tri.base, 0.0};
    const Vec2 apex{0.0, tri.height};
    const Vec2 verts[3] = {a, b, apex};
    for (int i = 0; i < 3; ++i) {
        const Vec2 p = verts[i];
        const Vec2 q = verts[(i + 1) % 3];
        const Vec2 e = q - p;
        const double len = norm(e);
        const Vec2 n{-e.y / len, e.x / len};  // inward for counterclockwise vertices
        c.lines.push_back({n, dot(n, p)});
    }
    return c;
}

Configuration make_lines(std::vector<LineObject> lines) {
    Configuration c;
    c.kind = Configuration::Kind::generic;
    for (auto& l : lines) {
        const double n = norm(l.normal);
        if (std::abs(n - 1.0) > 1e-12) throw std::invalid_argument("line normal must be unit length");
    }
    c.lines = std::move(lines);
    return c;
}

CommonPointCheck common_point_check(std::span<const LineObject> lines) {
    if (lines.empty()) throw std::invalid_argument("at least one line required");
    double axx = 0.0, axy = 0.0, ayy = 0.0, bx = 0.0, by = 0.0;
    for (const auto& l : lines) {
        axx += l.normal.x * l.normal.x;
        axy += l.normal.x * l.normal.y;
        ayy += l.normal.y * l.normal.y;
        bx += l.offset * l.normal.x;
        by += l.offset * l.normal.y;
    }
    const double det = axx * ayy - axy * axy;
    Vec2 p;
    if (det > 1e-12 * (axx + ayy) * (axx + ayy)) {
        p = {(ayy * bx - axy * by) / det, (axx * by - axy * bx) / det};
    } else {
        p = lines[0].offset * lines[0].normal;  // parallel family: a point on the first line
    }
    double res = 0.0;
    for (const auto& l : lines) res = std::max(res, std::abs(signed_distance(l, p)));
    return {p, res};
}

namespace {

// Per-line slab {x : -sqrt(beta)*M <= d(x) <= -sqrt(beta)*m} as two half-planes.
struct Slab {
    Vec2 n;
    double upper;  // n.x <= upper
    double lower;  // -n.x <= lower
};

std::vector<Slab> make_slabs(std::span<const LineObject> lines, std::span<const Extent> extents,
                             double sigma) {
    std::vector<Slab> slabs(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        // d(x) in [-sigma*max, -sigma*min]  <=>  n.x in [offset - sigma*max, offset - sigma*min]
        slabs[i].n = lines[i].normal;
        slabs[i].upper = lines[i].offset - sigma * extents[i].min;
        slabs[i].lower = -(lines[i].offset - sigma * extents[i].max);
    }
    return slabs;
}

ConvexPolygon seed_box(std::span<const LineObject> lines, std::span<const Extent> extents,
                       double sigma) {
    // Best-conditioned line pair bounds the slab intersection.
    double best = 0.0;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j)
            best = std::max(best, std::abs(cross(lines[i].normal, lines[j].normal)));
    if (best < 1e-9) throw std::invalid_argument("lines must span two directions");
    const Vec2 center = common_point_check(lines).point;
    double reach = 1.0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const double span = std::max(std::abs(extents[i].min), std::abs(extents[i].max));
        reach = std::max(reach, sigma * span + std::abs(signed_distance(lines[i], center)));
    }
    const double r = 4.0 * reach / best;
    ConvexPolygon box;
    box.vertices = {{center.x - r, center.y - r},
                    {center.x + r, center.y - r},
                    {center.x + r, center.y + r},
                    {center.x - r, center.y + r}};
    return box;
}

}  // namespace

double support_area_from_extents(std::span<const LineObject> lines,
                                 std::span<const Extent> extents, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
    if (lines.size() != extents.size())
        throw std::invalid_argument("one extent per line required");
    const double sigma = std::sqrt(beta);
    ConvexPolygon region = seed_box(lines, extents, sigma);
    for (const Slab& s : make_slabs(lines, extents, sigma)) {
        region = clip_half_plane(region, s.n, s.upper);
        if (region.vertices.empty()) return 0.0;
        region = clip_half_plane(region, {-s.n.x, -s.n.y}, s.lower);
        if (region.vertices.empty()) return 0.0;
    }
    return polygon_area(region);
}

double support_area(const Configuration& config, const UnitBridge& bridge, double beta) {
    std::vector<Extent> extents;
    extents.reserve(config.lines.size());
    for (const auto& l : config.lines) extents.push_back(bridge.extent(l.normal));
    return support_area_from_extents(config.lines, extents, beta);
}

double minimal_scale_from_extents(std::span<const LineObject> lines,
                                  std::span<const Extent> extents) {
    return minimal_scale_from_extents(lines, extents, 0.0, 1.0);
}

double minimal_scale_from_extents(std::span<const LineObject> lines,
                                  std::span<const Extent> extents, double bracket_lo,
                                  double bracket_hi) {
    if (lines.empty()) throw std::invalid_argument("at least one line required");
    for (const Extent& e : extents)
        if (!(e.max - e.min > 0.0)) throw std::invalid_argument("degenerate loop");
    if (lines.size() == 1) return 0.0;

    const auto feasible = [&](double beta) {
        return support_area_from_extents(lines, extents, beta) > 0.0;
    };
    double hi = bracket_hi;
    int grow = 0;
    while (!feasible(hi)) {
        hi *= 4.0;
        if (++grow > 200) throw std::runtime_error("no touching scale found");
    }
    double lo = bracket_lo;
    if (lo > 0.0 && feasible(lo)) lo = 0.0;
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double minimal_scale(const Configuration& config, const UnitBridge& bridge) {
    std::vector<Extent> extents;
    extents.reserve(config.lines.size());
    for (const auto& l : config.lines) extents.push_back(bridge.extent(l.normal));
    return minimal_scale_from_extents(config.lines, extents);
}

}  // namespace casimir
