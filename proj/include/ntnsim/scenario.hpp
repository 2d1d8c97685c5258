#pragma once

#include "ntnsim/link_model.hpp"
#include "ntnsim/loss_model.hpp"
#include "ntnsim/metrics.hpp"
#include "ntnsim/rlc.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ntnsim {

enum class TimerPolicyKind { Adaptive, WorstCase, Fixed };

struct TimerPolicy {
    TimerPolicyKind kind = TimerPolicyKind::Adaptive;
    // Only used by Fixed.
    double t_d_ms = 0.0;
    double t_r_ms = 0.0;
    double t_re_ms = 0.0;

    bool operator==(const TimerPolicy&) const = default;
};

enum class BufferPolicyKind {
    Optimal,  // B* from the current estimate
    Cells,    // fixed number of cells
    Scaled,   // ceil(scale * B*), re-applied at every estimate
};

struct BufferPolicy {
    BufferPolicyKind kind = BufferPolicyKind::Optimal;
    std::int64_t cells = 0;
    double scale = 1.0;

    bool operator==(const BufferPolicy&) const = default;
};

struct SweepSpec {
    std::string field;
    std::vector<double> values;

    bool operator==(const SweepSpec&) const = default;
};

/// Full experiment description. Defaults reproduce the LEO reference setup:
/// 20 ms RTD, 0.5 ms total processing, 10 packets/ms, 20 observations,
/// 1000 packets.
struct ScenarioConfig {
    std::string id = "default";
    std::uint64_t seed = 1;

    LinkParams link;
    std::optional<RtdSchedule> rtd_schedule;

    std::int64_t mu = 5;
    AttemptDistribution attempts = AttemptDistribution::Uniform;
    ProcessingMode processing_mode = ProcessingMode::PerJourney;
    double p_ack_loss = 0.0;
    double r_p = 10.0;
    std::int64_t total_packets = 1000;
    std::int64_t observation_o = 20;
    double adaptation_period_ms = 10000.0;

    TimerPolicy timer_policy;
    double observation_timer_ms = 1500.0;
    int max_attempts = 2;
    std::int64_t worst_case_n = 32;

    BufferPolicy buffer_policy;
    RlcMode rlc_mode = RlcMode::Am;
    int rlc_parts = 1;

    std::optional<SweepSpec> sweep;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses the flat `key = value` format ('#' starts a comment). Throws
/// ParseError naming the line, or ValidationError listing every violated
/// constraint.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
/// Inverse of parse_config: parse_config(render_config(c)) == c.
std::string render_config(const ScenarioConfig& cfg);
void validate(const ScenarioConfig& cfg);

/// Runs one scenario until every submitted SDU reached a terminal state.
RunMetrics run_scenario(const ScenarioConfig& cfg);

/// One run per sweep value with seed + index; results in sweep order.
std::vector<RunMetrics> run_sweep(const ScenarioConfig& cfg, unsigned jobs = 1);

/// The configuration of sweep point `index` (sweep removed, seed derived).
ScenarioConfig sweep_point(const ScenarioConfig& cfg, std::size_t index);

}  // namespace ntnsim
