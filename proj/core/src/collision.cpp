#include "scengen/collision.hpp"

#include <array>
#include <cmath>

namespace scengen {

namespace {

bool is_disc(const ActorState& s) { return s.kind == ActorKind::Pedestrian; }

std::array<Vec2, 4> obb_corners(const ActorState& s) {
    Vec2 fwd = from_heading(s.heading);
    Vec2 left = fwd.perp();
    Vec2 l = fwd * s.half_length;
    Vec2 w = left * s.half_width;
    return {s.position + l + w, s.position + l - w, s.position - l - w, s.position - l + w};
}

// Project corners onto axis, test interval overlap.
bool overlap_on_axis(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b, const Vec2& axis) {
    double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
    for (const auto& p : a) {
        double v = p.dot(axis);
        amin = std::min(amin, v);
        amax = std::max(amax, v);
    }
    for (const auto& p : b) {
        double v = p.dot(axis);
        bmin = std::min(bmin, v);
        bmax = std::max(bmax, v);
    }
    return amax >= bmin && bmax >= amin;
}

bool obb_obb(const ActorState& a, const ActorState& b) {
    auto ca = obb_corners(a);
    auto cb = obb_corners(b);
    Vec2 fa = from_heading(a.heading);
    Vec2 fb = from_heading(b.heading);
    for (const Vec2& axis : {fa, fa.perp(), fb, fb.perp()}) {
        if (!overlap_on_axis(ca, cb, axis)) return false;
    }
    return true;
}

bool obb_disc(const ActorState& box, const ActorState& disc) {
    // Transform disc center into box frame, clamp to box extents.
    Vec2 d = disc.position - box.position;
    Vec2 fwd = from_heading(box.heading);
    double lx = std::clamp(d.dot(fwd), -box.half_length, box.half_length);
    double ly = std::clamp(d.dot(fwd.perp()), -box.half_width, box.half_width);
    Vec2 closest = box.position + fwd * lx + fwd.perp() * ly;
    return (disc.position - closest).norm() <= disc.half_width;
}

}  // namespace

bool detect_collision(const ActorState& a, const ActorState& b) {
    if (is_disc(a) && is_disc(b))
        return (a.position - b.position).norm() <= a.half_width + b.half_width;
    if (is_disc(a)) return obb_disc(b, a);
    if (is_disc(b)) return obb_disc(a, b);
    return obb_obb(a, b);
}

std::optional<RayIntersection> trajectory_intersection(const ActorState& a, const ActorState& b,
                                                       double horizon) {
    if (horizon <= 0.0) return std::nullopt;
    Vec2 da = from_heading(a.heading);
    Vec2 db = from_heading(b.heading);
    double denom = da.cross(db);
    if (std::abs(denom) < 1e-9) return std::nullopt;  // parallel
    Vec2 diff = b.position - a.position;
    double sa = diff.cross(db) / denom;  // distance along a's ray
    double sb = diff.cross(da) / denom;  // distance along b's ray
    if (sa < 0.0 || sb < 0.0) return std::nullopt;
    if (a.speed <= 1e-9 || b.speed <= 1e-9) return std::nullopt;  // never arrives
    double ta = sa / a.speed;
    double tb = sb / b.speed;
    if (ta > horizon || tb > horizon) return std::nullopt;
    return RayIntersection{a.position + da * sa, ta, tb};
}

}  // namespace scengen
