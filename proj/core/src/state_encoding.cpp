#include "scengen/state_encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scengen {

namespace {
double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
}  // namespace

AblationMode ablation_from_string(const std::string& name) {
    if (name == "full") return AblationMode::Full;
    if (name == "external_only") return AblationMode::ExternalOnly;
    if (name == "internal_only") return AblationMode::InternalOnly;
    throw std::invalid_argument("unknown ablation mode: " + name);
}

const char* to_string(AblationMode mode) {
    switch (mode) {
        case AblationMode::Full: return "full";
        case AblationMode::ExternalOnly: return "external_only";
        case AblationMode::InternalOnly: return "internal_only";
    }
    return "full";
}

std::vector<double> encode_state(const EnvironmentConfig& env, const InternalState& internal,
                                 std::optional<double> nearest_cd, double ego_losd,
                                 const ActionCaps& caps) {
    std::vector<double> s(kStateSize, 0.0);
    s[0] = double(env.time_of_day) / 2.0;
    s[1] = double(env.rain) / 3.0;
    s[2] = double(env.fog) / 3.0;
    s[3] = double(env.wetness) / 3.0;
    s[4] = clamp01(double(env.npcs.size()) / double(caps.max_npcs));
    s[5] = clamp01(double(env.pedestrians.size()) / double(caps.max_pedestrians));
    s[6] = nearest_cd ? clamp01(*nearest_cd / (2.0 * ego_losd)) : 1.0;

    s[7] = clamp01(internal.speed / 30.0);
    s[8] = clamp01((internal.acceleration + 6.0) / 9.0);
    s[9] = clamp01(std::abs(internal.heading_error) / M_PI);
    s[10] = clamp01(internal.throttle);
    s[11] = clamp01(internal.brake);
    s[12] = clamp01((internal.steer + 1.0) / 2.0);
    s[13] = clamp01(std::abs(internal.lane_offset) / 3.5);
    s[14] = clamp01(internal.route_progress);
    s[15] = clamp01(internal.localization_ok);
    s[16] = clamp01(internal.perception_range_frac);
    s[17] = clamp01(internal.plan_feasible);
    s[18] = clamp01(internal.control_error / 5.0);
    return s;
}

std::vector<double> apply_ablation(std::vector<double> state, AblationMode mode) {
    if (mode == AblationMode::ExternalOnly)
        std::fill(state.begin() + kExternalStateSize, state.end(), 0.0);
    else if (mode == AblationMode::InternalOnly)
        std::fill(state.begin(), state.begin() + kExternalStateSize, 0.0);
    return state;
}

double reward(double proc, double r_col) {
    if (!(proc >= 0.0 && proc <= 1.0))
        throw NumericDomainError("collision probability outside [0, 1]");
    if (proc == 1.0) return r_col;
    if (proc > 0.2) return proc;
    return -1.0;
}

}  // namespace scengen
