#include "ntnsim/loss_model.hpp"

#include "ntnsim/error.hpp"

#include <string>

namespace ntnsim {

std::int64_t RetransmissionModel::min_attempts() const
{
    return distribution == AttemptDistribution::Constant ? mu : mu + kLoOffset;
}

std::int64_t RetransmissionModel::max_attempts() const
{
    return distribution == AttemptDistribution::Constant ? mu : mu + kHiOffset;
}

double RetransmissionModel::mean_attempts() const
{
    return 0.5 * static_cast<double>(min_attempts() + max_attempts());
}

void validate(const RetransmissionModel& model)
{
    if (model.min_attempts() < 1) {
        throw Error(ErrorCode::ConfigError, "mu = " + std::to_string(model.mu) + " gives a minimum attempt count below 1");
    }
}

void validate(const AckLossModel& model)
{
    if (!(model.p_ack_loss >= 0.0 && model.p_ack_loss < 1.0)) {
        throw Error(ErrorCode::ConfigError, "p_ack_loss must be in [0, 1)");
    }
}

std::int64_t draw_attempts(const RetransmissionModel& model, RandomSource& rng)
{
    validate(model);
    if (model.distribution == AttemptDistribution::Constant) return model.mu;
    return rng.draw_uniform_int(model.min_attempts(), model.max_attempts());
}

bool draw_ack_lost(const AckLossModel& model, RandomSource& rng)
{
    // Always consume a draw so the stream layout does not depend on p.
    return rng.draw_bernoulli(model.p_ack_loss);
}

double delivery_delay(std::int64_t k, double r_d_ms, double t_pro_total_ms, ProcessingMode mode)
{
    const auto kd = static_cast<double>(k);
    if (mode == ProcessingMode::PerJourney) return kd * (r_d_ms / 2.0) + 2.0 * t_pro_total_ms;
    return kd * (r_d_ms / 2.0 + 2.0 * t_pro_total_ms);
}

double ack_delay(std::int64_t k, double r_d_ms, double t_pro_total_ms, ProcessingMode mode)
{
    const auto kd = static_cast<double>(k);
    if (mode == ProcessingMode::PerJourney) return kd * r_d_ms + 4.0 * t_pro_total_ms;
    return kd * (r_d_ms + 4.0 * t_pro_total_ms);
}

}  // namespace ntnsim
