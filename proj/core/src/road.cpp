#include "scengen/road.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace scengen {

const char* to_string(LayoutId id) {
    switch (id) {
        case LayoutId::LShapedJunction: return "l_shaped_junction";
        case LayoutId::CornerIntersection: return "corner_intersection";
        case LayoutId::MultiLaneCrossroad: return "multi_lane_crossroad";
        case LayoutId::CurvedBoulevard: return "curved_boulevard";
    }
    return "unknown";
}

std::optional<LayoutId> layout_from_string(const std::string& name) {
    if (name == "l_shaped_junction") return LayoutId::LShapedJunction;
    if (name == "corner_intersection") return LayoutId::CornerIntersection;
    if (name == "multi_lane_crossroad") return LayoutId::MultiLaneCrossroad;
    if (name == "curved_boulevard") return LayoutId::CurvedBoulevard;
    return std::nullopt;
}

void Lane::finalize() {
    cumlen.resize(centerline.size());
    double s = 0.0;
    for (std::size_t i = 0; i < centerline.size(); ++i) {
        if (i > 0) s += (centerline[i] - centerline[i - 1]).norm();
        cumlen[i] = s;
    }
}

Vec2 Lane::point_at(double s) const {
    if (centerline.size() < 2) return centerline.empty() ? Vec2{} : centerline.front();
    s = std::clamp(s, 0.0, length());
    auto it = std::lower_bound(cumlen.begin(), cumlen.end(), s);
    std::size_t i = std::min<std::size_t>(std::distance(cumlen.begin(), it), cumlen.size() - 1);
    if (i == 0) return centerline.front();
    double seg = cumlen[i] - cumlen[i - 1];
    double t = seg < 1e-12 ? 0.0 : (s - cumlen[i - 1]) / seg;
    return centerline[i - 1] + (centerline[i] - centerline[i - 1]) * t;
}

Vec2 Lane::tangent_at(double s) const {
    if (centerline.size() < 2) return {1.0, 0.0};
    s = std::clamp(s, 0.0, length());
    auto it = std::lower_bound(cumlen.begin(), cumlen.end(), s);
    std::size_t i = std::min<std::size_t>(std::distance(cumlen.begin(), it), cumlen.size() - 1);
    if (i == 0) i = 1;
    return (centerline[i] - centerline[i - 1]).normalized();
}

double Lane::project(const Vec2& p, double* dist_out) const {
    double best_d = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    for (std::size_t i = 0; i + 1 < centerline.size(); ++i) {
        double t = 0.0;
        double d = point_segment_distance(p, centerline[i], centerline[i + 1], &t);
        if (d < best_d) {
            best_d = d;
            best_s = cumlen[i] + t * (cumlen[i + 1] - cumlen[i]);
        }
    }
    if (dist_out) *dist_out = best_d;
    return best_s;
}

const Lane* RoadNetwork::lane(int id) const {
    for (const auto& l : lanes)
        if (l.id == id) return &l;
    return nullptr;
}

int RoadNetwork::member_lane(const Vec2& p, double half_width) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& l : lanes) {
        double d = 0.0;
        l.project(p, &d);
        if (d <= l.width * 0.5 + half_width && d < best_d - 1e-12) {
            best_d = d;
            best = l.id;
        }
    }
    return best;
}

int RoadNetwork::nearest_lane(const Vec2& p) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& l : lanes) {
        double d = 0.0;
        l.project(p, &d);
        if (d < best_d - 1e-12) {
            best_d = d;
            best = l.id;
        }
    }
    return best;
}

std::vector<Vec2> RoadNetwork::route_polyline() const {
    std::vector<Vec2> pts;
    for (int id : route) {
        const Lane* l = lane(id);
        if (!l) continue;
        for (const auto& p : l->centerline) {
            if (!pts.empty() && (pts.back() - p).norm() < 1e-9) continue;
            pts.push_back(p);
        }
    }
    return pts;
}

namespace {

// Dense polyline for a straight segment, ~1 m spacing.
void add_straight(std::vector<Vec2>& out, Vec2 a, Vec2 b) {
    double len = (b - a).norm();
    int n = std::max(1, int(std::ceil(len)));
    for (int i = (out.empty() ? 0 : 1); i <= n; ++i) out.push_back(a + (b - a) * (double(i) / n));
}

// CCW arc around center from angle a0 to a1 (radians), ~1 deg steps.
void add_arc(std::vector<Vec2>& out, Vec2 center, double radius, double a0, double a1) {
    int n = std::max(2, int(std::ceil(std::abs(a1 - a0) / (M_PI / 180.0))));
    for (int i = (out.empty() ? 0 : 1); i <= n; ++i) {
        double a = a0 + (a1 - a0) * (double(i) / n);
        out.push_back(center + Vec2{std::cos(a), std::sin(a)} * radius);
    }
}

// Offset a polyline to its left (positive) or right (negative) using
// per-point normals averaged over adjacent segments.
std::vector<Vec2> offset_path(const std::vector<Vec2>& base, double offset) {
    std::vector<Vec2> out;
    out.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        Vec2 t;
        if (i == 0)
            t = (base[1] - base[0]).normalized();
        else if (i + 1 == base.size())
            t = (base[i] - base[i - 1]).normalized();
        else
            t = ((base[i + 1] - base[i]).normalized() + (base[i] - base[i - 1]).normalized()).normalized();
        out.push_back(base[i] + t.perp() * offset);
    }
    return out;
}

std::vector<Vec2> reversed(std::vector<Vec2> p) {
    std::reverse(p.begin(), p.end());
    return p;
}

// Add a standard two-direction carriageway along `axis`:
// `fwd` same-direction lanes on the right, `opp` opposite lanes on the left.
// Returns the ids of the forward lanes (innermost first).
std::vector<int> add_carriageway(RoadNetwork& net, const std::vector<Vec2>& axis, int fwd, int opp,
                                 double width = 3.5) {
    std::vector<int> fwd_ids;
    int base_id = int(net.lanes.size());
    for (int i = 0; i < fwd; ++i) {
        Lane l;
        l.id = base_id + i;
        l.width = width;
        l.direction_sign = +1;
        l.centerline = offset_path(axis, -width * (0.5 + i));
        l.finalize();
        if (i > 0) l.left_neighbor = base_id + i - 1;
        if (i + 1 < fwd) l.right_neighbor = base_id + i + 1;
        fwd_ids.push_back(l.id);
        net.lanes.push_back(std::move(l));
    }
    int opp_base = int(net.lanes.size());
    for (int i = 0; i < opp; ++i) {
        Lane l;
        l.id = opp_base + i;
        l.width = width;
        l.direction_sign = -1;
        l.centerline = reversed(offset_path(axis, width * (0.5 + i)));
        l.finalize();
        // travelling the other way, the inner lane is on this side's right
        if (i > 0) l.left_neighbor = opp_base + i - 1;
        if (i + 1 < opp) l.right_neighbor = opp_base + i + 1;
        net.lanes.push_back(std::move(l));
    }
    return fwd_ids;
}

}  // namespace

RoadNetwork build_road(LayoutId layout_id) {
    RoadNetwork net;
    net.layout_id = layout_id;

    switch (layout_id) {
        case LayoutId::LShapedJunction: {
            // 90 deg left junction, 2 lanes per direction.
            net.speed_limit = 13.0;
            std::vector<Vec2> axis;
            add_straight(axis, {0, 0}, {450, 0});
            add_arc(axis, {450, 15}, 15.0, -M_PI / 2, 0.0);
            add_straight(axis, {465, 15}, {465, 425});
            auto fwd = add_carriageway(net, axis, 2, 2);
            net.route = {fwd[0]};
            break;
        }
        case LayoutId::CornerIntersection: {
            // Sharp corner with a crossing road near the apex.
            net.speed_limit = 12.0;
            std::vector<Vec2> axis;
            add_straight(axis, {0, 0}, {420, 0});
            add_arc(axis, {420, 8}, 8.0, -M_PI / 2, 0.0);
            add_straight(axis, {428, 8}, {428, 390});
            auto fwd = add_carriageway(net, axis, 2, 2);
            std::vector<Vec2> cross_axis;
            add_straight(cross_axis, {200, -60}, {200, 60});
            add_carriageway(net, cross_axis, 1, 1);
            net.route = {fwd[0]};
            break;
        }
        case LayoutId::MultiLaneCrossroad: {
            // Wide straight road, 3 same-direction lanes, with a crossroad.
            net.speed_limit = 17.0;
            std::vector<Vec2> axis;
            add_straight(axis, {0, 0}, {1175, 0});
            auto fwd = add_carriageway(net, axis, 3, 1);
            std::vector<Vec2> cross_axis;
            add_straight(cross_axis, {600, -60}, {600, 60});
            add_carriageway(net, cross_axis, 1, 1);
            net.route = {fwd[0]};
            break;
        }
        case LayoutId::CurvedBoulevard: {
            // Sweeping 90 deg arc, 2 lanes per direction.
            net.speed_limit = 15.0;
            std::vector<Vec2> axis;
            add_straight(axis, {-40, 0}, {0, 0});
            add_arc(axis, {0, 600}, 600.0, -M_PI / 2, 0.0);
            add_straight(axis, {600, 600}, {600, 620});
            auto fwd = add_carriageway(net, axis, 2, 2);
            net.route = {fwd[0]};
            break;
        }
    }

    const Lane* first = net.lane(net.route.front());
    const Lane* last = net.lane(net.route.back());
    net.origin = first->point_at(5.0);
    net.destination = last->point_at(last->length() - 5.0);
    return net;
}

std::string RoadNetwork::to_json() const {
    nlohmann::json j;
    j["layout"] = to_string(layout_id);
    j["speed_limit"] = speed_limit;
    j["origin"] = {origin.x, origin.y};
    j["destination"] = {destination.x, destination.y};
    j["route"] = route;
    auto& jl = j["lanes"] = nlohmann::json::array();
    for (const auto& l : lanes) {
        nlohmann::json e;
        e["id"] = l.id;
        e["width"] = l.width;
        e["direction_sign"] = l.direction_sign;
        if (l.left_neighbor) e["left_neighbor"] = *l.left_neighbor;
        if (l.right_neighbor) e["right_neighbor"] = *l.right_neighbor;
        auto& pts = e["centerline"] = nlohmann::json::array();
        for (const auto& p : l.centerline) pts.push_back({p.x, p.y});
        jl.push_back(std::move(e));
    }
    return j.dump();
}

RoadNetwork RoadNetwork::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RoadNetwork net;
    auto layout = layout_from_string(j.at("layout").get<std::string>());
    if (!layout) throw std::runtime_error("unknown layout id in road json");
    net.layout_id = *layout;
    net.speed_limit = j.at("speed_limit").get<double>();
    net.origin = {j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>()};
    net.destination = {j.at("destination")[0].get<double>(), j.at("destination")[1].get<double>()};
    net.route = j.at("route").get<std::vector<int>>();
    for (const auto& e : j.at("lanes")) {
        Lane l;
        l.id = e.at("id").get<int>();
        l.width = e.at("width").get<double>();
        l.direction_sign = e.at("direction_sign").get<int>();
        if (e.contains("left_neighbor")) l.left_neighbor = e["left_neighbor"].get<int>();
        if (e.contains("right_neighbor")) l.right_neighbor = e["right_neighbor"].get<int>();
        for (const auto& p : e.at("centerline")) l.centerline.push_back({p[0].get<double>(), p[1].get<double>()});
        l.finalize();
        net.lanes.push_back(std::move(l));
    }
    return net;
}

}  // namespace scengen
