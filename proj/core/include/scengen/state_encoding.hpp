#pragma once

#include <vector>

#include "scengen/actions.hpp"
#include "scengen/ego_controller.hpp"
#include "scengen/env_config.hpp"

namespace scengen {

constexpr int kStateSize = 19;
constexpr int kExternalStateSize = 7;
constexpr int kInternalStateSize = 12;

enum class AblationMode { Full, ExternalOnly, InternalOnly };

AblationMode ablation_from_string(const std::string& name);
const char* to_string(AblationMode mode);

/// 19-dimensional observation, every component scaled into [0,1]:
///   0..6  external: time-of-day, rain, fog, wetness, NPC count, pedestrian
///         count, nearest-obstacle distance relative to 2*LoSD (1 when the
///         world is empty);
///   7..18 internal: the 12 InternalState fields, each normalized against
///         its physical range.
/// `nearest_cd` is the distance to the closest obstacle (nullopt when none)
/// and `ego_losd` the longitudinal safety distance at the ego's speed.
std::vector<double> encode_state(const EnvironmentConfig& env, const InternalState& internal,
                                 std::optional<double> nearest_cd, double ego_losd,
                                 const ActionCaps& caps = {});

/// Zero out the half excluded by the ablation. Full is the identity.
std::vector<double> apply_ablation(std::vector<double> state, AblationMode mode);

/// Step reward from the overall collision probability:
///   proc == 1.0        -> r_col (collision found)
///   0.2 < proc < 1.0   -> proc  (progress toward a collision)
///   proc <= 0.2        -> -1    (uninteresting step)
/// Throws NumericDomainError when proc is outside [0, 1].
double reward(double proc, double r_col);

}  // namespace scengen
