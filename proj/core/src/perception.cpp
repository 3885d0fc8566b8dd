#include "scengen/perception.hpp"

#include "scengen/rng.hpp"

namespace scengen {

double PerceptionModel::range_multiplier(WeatherPhenomenon p, WeatherLevel level) {
    static constexpr double kRain[] = {1.0, 0.9, 0.75, 0.6};
    static constexpr double kFog[] = {1.0, 0.8, 0.6, 0.4};
    int i = static_cast<int>(level);
    switch (p) {
        case WeatherPhenomenon::Rain: return kRain[i];
        case WeatherPhenomenon::Fog: return kFog[i];
        case WeatherPhenomenon::Wetness: return 1.0;
    }
    return 1.0;
}

double PerceptionModel::brake_multiplier(WeatherLevel wetness) {
    static constexpr double kWet[] = {1.0, 0.95, 0.9, 0.8};
    return kWet[static_cast<int>(wetness)];
}

double PerceptionModel::effective_range(const EnvironmentConfig& env) const {
    double m = range_multiplier(WeatherPhenomenon::Rain, env.rain) *
               range_multiplier(WeatherPhenomenon::Fog, env.fog);
    if (env.time_of_day == TimeOfDay::Night) m *= night_multiplier;
    return base_sensor_range * m;
}

double PerceptionModel::effective_probability(const EnvironmentConfig& env) const {
    double m = range_multiplier(WeatherPhenomenon::Rain, env.rain) *
               range_multiplier(WeatherPhenomenon::Fog, env.fog);
    if (env.time_of_day == TimeOfDay::Night) m *= night_multiplier;
    return detection_probability_clear * m;
}

std::vector<Obstacle> sense(const World& world, const EnvironmentConfig& env,
                            const PerceptionModel& model, std::uint64_t seed) {
    double r_eff = model.effective_range(env);
    double p_eff = model.effective_probability(env);
    std::vector<Obstacle> out;
    for (const auto& a : world.actors()) {
        double d = (a.state.position - world.ego().position).norm();
        if (d > r_eff) continue;
        double u = keyed_uniform(seed, std::uint64_t(a.id), std::uint64_t(world.tick()));
        if (u < p_eff) out.push_back({a.id, a.state});
    }
    return out;
}

}  // namespace scengen
