#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tabsync/errors.hpp"

namespace tabsync {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Four-vertex polygon in pixel coordinates. Quads produced by
/// normalize_quad are convex and counterclockwise.
template <typename Scalar>
struct BasicQuad {
    std::array<Point2<Scalar>, 4> vertices;

    BasicQuad translated(const Point2<Scalar>& offset) const {
        BasicQuad out = *this;
        for (auto& v : out.vertices) {
            v += offset;
        }
        return out;
    }
    BasicQuad scaled(Scalar factor) const {
        BasicQuad out = *this;
        for (auto& v : out.vertices) {
            v *= factor;
        }
        return out;
    }
};

using Quad = BasicQuad<double>;

template <typename Scalar>
BasicQuad<Scalar> axis_aligned_quad(Scalar x0, Scalar y0, Scalar x1, Scalar y1) {
    return {{Point2<Scalar>(x0, y0), Point2<Scalar>(x1, y0), Point2<Scalar>(x1, y1),
             Point2<Scalar>(x0, y1)}};
}

template <typename Scalar>
Scalar cross2(const Point2<Scalar>& a, const Point2<Scalar>& b) {
    return a.x() * b.y() - a.y() * b.x();
}

/// Shoelace area; positive for counterclockwise winding.
template <typename Scalar>
Scalar signed_area(std::span<const Point2<Scalar>> polygon) {
    const std::size_t n = polygon.size();
    Scalar twice = 0;
    for (std::size_t i = 0; i < n; ++i) {
        twice += cross2(polygon[i], polygon[(i + 1) % n]);
    }
    return twice / Scalar(2);
}

namespace detail {

template <typename Scalar>
Scalar degeneracy_tolerance(std::span<const Point2<Scalar>> polygon) {
    Point2<Scalar> lo = polygon[0];
    Point2<Scalar> hi = polygon[0];
    for (const auto& p : polygon) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Scalar extent = (hi - lo).squaredNorm();
    return extent * Scalar(64) * std::numeric_limits<Scalar>::epsilon();
}

template <typename Scalar>
bool same_polygon(const BasicQuad<Scalar>& a, const BasicQuad<Scalar>& b) {
    for (std::size_t shift = 0; shift < 4; ++shift) {
        bool equal = true;
        for (std::size_t i = 0; i < 4 && equal; ++i) {
            equal = a.vertices[i] == b.vertices[(i + shift) % 4];
        }
        if (equal) {
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Signed shoelace area of a quad. Throws DegeneracyError for (near) zero
/// area.
template <typename Scalar>
Scalar polygon_area(const BasicQuad<Scalar>& quad) {
    const std::span<const Point2<Scalar>> poly(quad.vertices);
    const Scalar area = signed_area(poly);
    if (!(std::abs(area) > detail::degeneracy_tolerance(poly))) {
        throw DegeneracyError("quad has zero area");
    }
    return area;
}

/// Reorders to counterclockwise winding and checks convexity. Collinear
/// vertices are tolerated; a reflex or self-intersecting corner is not.
template <typename Scalar>
BasicQuad<Scalar> normalize_quad(BasicQuad<Scalar> quad) {
    for (const auto& v : quad.vertices) {
        if (!v.allFinite()) {
            throw DegeneracyError("quad has a non-finite vertex");
        }
    }
    if (polygon_area(quad) < 0) {
        std::reverse(quad.vertices.begin(), quad.vertices.end());
    }
    const Scalar tol = detail::degeneracy_tolerance(std::span<const Point2<Scalar>>(quad.vertices));
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& a = quad.vertices[i];
        const auto& b = quad.vertices[(i + 1) % 4];
        const auto& c = quad.vertices[(i + 2) % 4];
        if (cross2<Scalar>(b - a, c - b) < -tol) {
            throw DegeneracyError("quad is not convex");
        }
    }
    return quad;
}

/// Sutherland-Hodgman: clips `subject` against every edge of the convex,
/// counterclockwise polygon `clip`.
template <typename Scalar>
std::vector<Point2<Scalar>> clip_convex(std::span<const Point2<Scalar>> subject,
                                        std::span<const Point2<Scalar>> clip) {
    std::vector<Point2<Scalar>> output(subject.begin(), subject.end());
    std::vector<Point2<Scalar>> input;
    const std::size_t m = clip.size();
    for (std::size_t e = 0; e < m && !output.empty(); ++e) {
        const Point2<Scalar> e0 = clip[e];
        const Point2<Scalar> edge = clip[(e + 1) % m] - e0;
        input.swap(output);
        output.clear();
        const std::size_t n = input.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2<Scalar>& p = input[i];
            const Point2<Scalar>& q = input[(i + 1) % n];
            const Scalar sp = cross2<Scalar>(edge, p - e0);
            const Scalar sq = cross2<Scalar>(edge, q - e0);
            if (sp >= 0) {
                output.push_back(p);
            }
            if ((sp >= 0) != (sq >= 0) && sp != sq) {
                const Scalar t = sp / (sp - sq);
                output.push_back(p + t * (q - p));
            }
        }
        // Drop repeated vertices so the result stays a simple vertex ring.
        std::vector<Point2<Scalar>> unique;
        for (const auto& p : output) {
            if (unique.empty() || p != unique.back()) {
                unique.push_back(p);
            }
        }
        while (unique.size() > 1 && unique.front() == unique.back()) {
            unique.pop_back();
        }
        output.swap(unique);
    }
    if (output.size() < 3) {
        output.clear();
    }
    return output;
}

/// Intersection over union of two convex quads of either winding.
template <typename Scalar>
Scalar polygon_iou(const BasicQuad<Scalar>& quad_a, const BasicQuad<Scalar>& quad_b) {
    const BasicQuad<Scalar> a = normalize_quad(quad_a);
    const BasicQuad<Scalar> b = normalize_quad(quad_b);
    const Scalar area_a = polygon_area(a);
    const Scalar area_b = polygon_area(b);
    if (detail::same_polygon(a, b)) {
        return Scalar(1);
    }
    const auto inter_poly = clip_convex<Scalar>(a.vertices, b.vertices);
    const Scalar inter =
        inter_poly.empty() ? Scalar(0)
                           : std::max(Scalar(0), signed_area<Scalar>(inter_poly));
    const Scalar uni = area_a + area_b - inter;
    return std::clamp(inter / uni, Scalar(0), Scalar(1));
}

} // namespace tabsync
