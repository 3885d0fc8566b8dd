#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scengen/geometry.hpp"

namespace scengen {

enum class LayoutId {
    LShapedJunction,
    CornerIntersection,
    MultiLaneCrossroad,
    CurvedBoulevard,
};

const char* to_string(LayoutId id);
std::optional<LayoutId> layout_from_string(const std::string& name);

/// One traffic lane. The centerline polyline is oriented along the travel
/// direction; neighbors are same-direction lanes only.
struct Lane {
    int id{0};
    std::vector<Vec2> centerline;
    double width{3.5};
    int direction_sign{+1};  // +1 along the route direction, -1 opposite
    std::optional<int> left_neighbor;
    std::optional<int> right_neighbor;

    // cumulative arc length per centerline point, cumlen.back() == length()
    std::vector<double> cumlen;

    void finalize();  // fills cumlen
    double length() const { return cumlen.empty() ? 0.0 : cumlen.back(); }
    Vec2 point_at(double s) const;
    Vec2 tangent_at(double s) const;  // unit tangent
    /// Arc length of the closest centerline point; optionally the distance.
    double project(const Vec2& p, double* dist_out = nullptr) const;
};

struct RoadNetwork {
    LayoutId layout_id{LayoutId::LShapedJunction};
    std::vector<Lane> lanes;
    double speed_limit{15.0};  // m/s
    Vec2 origin;
    Vec2 destination;
    std::vector<int> route;  // lane ids, origin -> destination

    const Lane* lane(int id) const;

    /// Lane membership: nearest centerline within width/2 + half_width,
    /// ties broken by lowest lane id. Returns -1 when off every lane.
    int member_lane(const Vec2& p, double half_width = 0.0) const;

    /// Closest lane regardless of the membership ribbon.
    int nearest_lane(const Vec2& p) const;

    /// Concatenated centerline of the route lanes.
    std::vector<Vec2> route_polyline() const;

    std::string to_json() const;
    static RoadNetwork from_json(const std::string& text);
};

/// Deterministic construction of one of the four layouts.
RoadNetwork build_road(LayoutId layout_id);

}  // namespace scengen
