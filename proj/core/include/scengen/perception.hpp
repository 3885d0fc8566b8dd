#pragma once

#include <cstdint>
#include <vector>

#include "scengen/env_config.hpp"
#include "scengen/world.hpp"

namespace scengen {

/// Weather/time-degradable sensing. Range and detection probability shrink
/// with rain, fog, and night; wetness degrades braking instead of sensing.
struct PerceptionModel {
    double base_sensor_range{60.0};
    double detection_probability_clear{1.0};
    double night_multiplier{0.7};

    /// Range (and detection-probability) multiplier for one phenomenon.
    /// Rain: 1 / .9 / .75 / .6; Fog: 1 / .8 / .6 / .4; Wetness: 1.
    static double range_multiplier(WeatherPhenomenon p, WeatherLevel level);

    /// B_max multiplier from road wetness: 1 / .95 / .9 / .8.
    static double brake_multiplier(WeatherLevel wetness);

    double effective_range(const EnvironmentConfig& env) const;
    double effective_probability(const EnvironmentConfig& env) const;
};

/// Subset of world actors within the effective range, each kept with the
/// effective detection probability. Draws are keyed by (seed, actor, tick)
/// so milder degradation always perceives a superset.
std::vector<Obstacle> sense(const World& world, const EnvironmentConfig& env,
                            const PerceptionModel& model, std::uint64_t seed);

}  // namespace scengen
