#pragma once

#include "ntnsim/link_model.hpp"
#include "ntnsim/sim_core.hpp"

#include <cstdint>

namespace ntnsim {

enum class ProcessingMode {
    PerJourney,  // processing delays paid once per end-to-end journey
    PerAttempt,  // processing delays paid on every attempt
};

enum class AttemptDistribution {
    Uniform,   // k uniform on [mu - 3, mu + 4]
    Constant,  // k = mu on every transmission
};

/// Effective end-to-end attempt count per packet. Lower-layer HARQ/ARQ is
/// folded into k rather than simulated.
struct RetransmissionModel {
    static constexpr std::int64_t kLoOffset = -3;
    static constexpr std::int64_t kHiOffset = 4;

    std::int64_t mu = 5;
    ProcessingMode processing_mode = ProcessingMode::PerJourney;
    AttemptDistribution distribution = AttemptDistribution::Uniform;

    std::int64_t min_attempts() const;
    std::int64_t max_attempts() const;
    double mean_attempts() const;
};

struct AckLossModel {
    double p_ack_loss = 0.0;
};

void validate(const RetransmissionModel& model);
void validate(const AckLossModel& model);

std::int64_t draw_attempts(const RetransmissionModel& model, RandomSource& rng);
bool draw_ack_lost(const AckLossModel& model, RandomSource& rng);

/// Transmitter-to-receiver delay for a packet needing k attempts.
double delivery_delay(std::int64_t k, double r_d_ms, double t_pro_total_ms, ProcessingMode mode);
/// Submission-to-ACK delay for a packet needing k attempts, ACK not lost.
double ack_delay(std::int64_t k, double r_d_ms, double t_pro_total_ms, ProcessingMode mode);

}  // namespace ntnsim
