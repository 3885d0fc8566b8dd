#pragma once

#include <string>
#include <vector>

namespace scengen {

enum class WeatherLevel { None, Light, Moderate, High };
enum class WeatherPhenomenon { Rain, Fog, Wetness };
enum class TimeOfDay { Morning, Noon, Night };

enum class NpcBehavior { DriveAhead, Overtake, DriveOpposite, CrossRoad, LaneChange };
enum class LaneRel { Current, Left, Right };
enum class DistMode { Near, Far };
enum class VehicleSize { Small, Large };
enum class VehicleType { Jeep, Sedan, SUV, Hatchback, BoxTruck, SchoolBus };
enum class VehicleColor { Pink, White, Red, Black, SkyBlue, Yellow };
enum class CrossingDirection { LeftToRight, RightToLeft };

const char* to_string(WeatherLevel v);
const char* to_string(WeatherPhenomenon v);
const char* to_string(TimeOfDay v);
const char* to_string(NpcBehavior v);
const char* to_string(LaneRel v);
const char* to_string(DistMode v);
const char* to_string(VehicleSize v);
const char* to_string(VehicleType v);
const char* to_string(VehicleColor v);
const char* to_string(CrossingDirection v);

VehicleSize size_of(VehicleType type);

struct NpcSpec {
    NpcBehavior behavior{NpcBehavior::DriveAhead};
    LaneRel lane_rel{LaneRel::Current};
    DistMode dist_mode{DistMode::Near};
    VehicleSize size{VehicleSize::Small};
    VehicleType vehicle_type{VehicleType::Sedan};
    VehicleColor color{VehicleColor::White};
    double speed{10.0};  // m/s, in [10, 20] and <= road speed limit
};

struct PedestrianSpec {
    CrossingDirection crossing_direction{CrossingDirection::LeftToRight};
    double speed{1.4};                 // m/s, (0, 1.4]
    double spawn_distance_ahead{40.0}; // m
};

/// The external parameter assignment at one step: weather levels, time of
/// day, and the active roster of spawned traffic participants.
struct EnvironmentConfig {
    WeatherLevel rain{WeatherLevel::None};
    WeatherLevel fog{WeatherLevel::None};
    WeatherLevel wetness{WeatherLevel::None};
    TimeOfDay time_of_day{TimeOfDay::Morning};
    std::vector<NpcSpec> npcs;
    std::vector<PedestrianSpec> pedestrians;

    WeatherLevel level(WeatherPhenomenon p) const {
        switch (p) {
            case WeatherPhenomenon::Rain: return rain;
            case WeatherPhenomenon::Fog: return fog;
            case WeatherPhenomenon::Wetness: return wetness;
        }
        return WeatherLevel::None;
    }
    void set_level(WeatherPhenomenon p, WeatherLevel v) {
        switch (p) {
            case WeatherPhenomenon::Rain: rain = v; break;
            case WeatherPhenomenon::Fog: fog = v; break;
            case WeatherPhenomenon::Wetness: wetness = v; break;
        }
    }
};

}  // namespace scengen
