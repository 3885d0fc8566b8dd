#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scengen/actions.hpp"
#include "scengen/ego_controller.hpp"
#include "scengen/perception.hpp"
#include "scengen/replay_buffer.hpp"
#include "scengen/state_encoding.hpp"
#include "scengen/world.hpp"

namespace scengen {

enum class TerminalCause {
    Collision,
    UnavoidableCollisionExcluded,
    DestinationReached,
    ActionBudgetExhausted
};

const char* to_string(TerminalCause cause);
TerminalCause terminal_cause_from_string(const std::string& name);

struct EpisodeConfig {
    LayoutId layout{LayoutId::LShapedJunction};
    int max_actions{12};
    double otp_seconds{6.0};  // observation window simulated after each action
    double dt{0.1};
    double r_col{2.0};
    AblationMode ablation{AblationMode::Full};
    ActionCaps caps;
    SpawnWeights weights;
    SafetyParams safety;
    KinematicsParams kin;
    ControllerParams controller;
    PerceptionModel perception;
    double spawn_horizon_s{12.0};  // clause (c) trajectory-intersection horizon
    bool record_ticks{true};

    // Test hook: force-spawn an unavoidable vehicle after the action at this
    // step, bypassing realism validation. Negative disables it.
    int inject_unavoidable_at{-1};
};

/// Spawn-time snapshot kept in the trace so the avoidability audit can be
/// re-checked offline.
struct SpawnAudit {
    int id{0};
    double required_decel{0.0};
    double distance_to_ego{0.0};
    double ego_speed{0.0};
    bool forced{false};
};

struct TickRecord {
    int tick{0};
    double ego_x{0.0}, ego_y{0.0}, ego_heading{0.0}, ego_speed{0.0};
    double proc{0.0};
    std::vector<std::array<double, 4>> actors;  // id, x, y, speed
};

struct StepRecord {
    int step{0};
    int action{0};
    EnvironmentConfig env;  // snapshot after the action
    std::vector<double> state;
    double proc{0.0};  // window max over the observation period
    double reward{0.0};
    bool spawn_rejected{false};
    std::string reject_reason;
    std::vector<int> spawned_ids;
    std::vector<SpawnAudit> spawn_audits;
    std::vector<TickRecord> ticks;
};

struct EpisodeTrace {
    std::uint64_t seed{0};
    LayoutId layout{LayoutId::LShapedJunction};
    AblationMode ablation{AblationMode::Full};
    std::vector<StepRecord> steps;
    TerminalCause cause{TerminalCause::ActionBudgetExhausted};
    std::optional<double> time_to_collision;  // seconds from episode start
    std::optional<int> collision_actor;
    double total_reward{0.0};

    bool counted_collision() const { return cause == TerminalCause::Collision; }
};

/// Chooses the next action index given the encoded state and legality mask.
using Policy = std::function<int(const std::vector<double>& state, const std::vector<bool>& mask,
                                 Rng& policy_rng)>;

/// Invoked once per step with the stored transition, before the next step.
using TransitionSink = std::function<void(const Transition&)>;

/// Legality mask for the current roster: spawn actions are masked out at the
/// participant caps, everything else is always legal.
std::vector<bool> action_mask(const EnvironmentConfig& env, const ActionCaps& caps);

/// Run one episode: encode, act, apply, then simulate the observation period
/// tick by tick with window-max collision probability. Terminates on a
/// counted collision, destination arrival, or action-budget exhaustion.
/// Collisions whose spawn snapshot needed more than B_max to avoid are
/// excluded from the count. Fully deterministic in (seed, policy).
EpisodeTrace run_episode(const EpisodeConfig& config, std::uint64_t seed, const Policy& policy,
                         const TransitionSink& sink = {});

/// Force-spawn a vehicle so close and fast that no braking response within
/// B_max avoids it; bypasses realism validation. Exercises the exclusion
/// branch of the avoidability audit.
int spawn_unavoidable_fixture(World& world, const KinematicsParams& kin);

/// JSONL serialization: a header line, one line per step, one terminal line.
void write_trace_jsonl(const EpisodeTrace& trace, std::ostream& out);
std::string trace_to_jsonl(const EpisodeTrace& trace);

/// Parse errors carry 1-based line numbers.
class TraceFormatError : public std::runtime_error {
public:
    TraceFormatError(int line, const std::string& what)
        : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

EpisodeTrace read_trace_jsonl(std::istream& in);
EpisodeTrace trace_from_jsonl(const std::string& text);

struct ReplayReport {
    bool identical{false};
    std::string message;  // "identical" or the first divergence
    std::optional<int> divergent_step;
};

/// Re-run the stored action sequence under the same seed and compare the
/// regenerated trace field by field.
ReplayReport replay_trace(const EpisodeTrace& recorded, const EpisodeConfig& config);

}  // namespace scengen
