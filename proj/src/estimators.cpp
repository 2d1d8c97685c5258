#include "ntnsim/estimators.hpp"

#include "ntnsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ntnsim {

std::int64_t tolerant_ceil(double x)
{
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(nearest);
    return static_cast<std::int64_t>(std::ceil(x));
}

ObservationSet filter_ack_lost(std::span<const RawSample> raw, std::size_t capacity, ObservationSide side)
{
    ObservationSet obs{side, {}, capacity};
    for (const auto& s : raw) {
        if (obs.stamps.size() >= capacity) break;
        if (!s.ack_lost) obs.stamps.push_back(s.sojourn_ms);
    }
    if (obs.stamps.empty()) throw Error(ErrorCode::EmptyObservationSet, "no valid samples after ack-lost filter");
    return obs;
}

double solve_max_sojourn(const ObservationSet& obs)
{
    if (obs.stamps.empty()) throw Error(ErrorCode::EmptyObservationSet, "cannot maximise over an empty set");
    return *std::max_element(obs.stamps.begin(), obs.stamps.end());
}

std::int64_t estimate_n(double t_star_ms, double r_d_ms, double t_pro_total_ms)
{
    if (!(r_d_ms > 0.0)) throw Error(ErrorCode::InvalidObservation, "r_d must be > 0");
    const double excess = t_star_ms - 4.0 * t_pro_total_ms;
    if (!(excess > 0.0)) {
        throw Error(ErrorCode::InvalidObservation, "t* " + std::to_string(t_star_ms) + " <= 4 sum t_pro");
    }
    return std::max<std::int64_t>(1, tolerant_ceil(excess / r_d_ms));
}

std::int64_t estimate_m(double t_star_rx_ms, double r_d_ms, double t_pro_total_ms)
{
    if (!(r_d_ms > 0.0)) throw Error(ErrorCode::InvalidObservation, "r_d must be > 0");
    const double excess = t_star_rx_ms - 2.0 * t_pro_total_ms;
    if (!(excess > 0.0)) {
        throw Error(ErrorCode::InvalidObservation, "t*_rx " + std::to_string(t_star_rx_ms) + " <= 2 sum t_pro");
    }
    return std::max<std::int64_t>(1, tolerant_ceil(excess / (r_d_ms / 2.0)));
}

double optimal_discard_timer(std::int64_t n, double r_d_ms, double t_pro_total_ms)
{
    return static_cast<double>(n) * (r_d_ms + 4.0 * t_pro_total_ms);
}

std::int64_t optimal_buffer_size(std::int64_t n, double r_d_ms, double t_pro_total_ms, double r_p)
{
    return std::max<std::int64_t>(1, tolerant_ceil(optimal_discard_timer(n, r_d_ms, t_pro_total_ms) * r_p));
}

double reordering_timer(std::int64_t m, double r_d_ms, double t_pro_total_ms)
{
    return static_cast<double>(m) * (r_d_ms / 2.0 + 2.0 * t_pro_total_ms);
}

double reassembly_timer(std::int64_t m, double r_d_ms, double t_pro_rlc_ms, double t_pro_lower_ms)
{
    // Same as the reordering bound minus the PDCP processing term.
    return static_cast<double>(m) * (r_d_ms / 2.0 + 2.0 * (t_pro_rlc_ms + t_pro_lower_ms));
}

AdaptResult adapt(const ObservationSet& obs_tx, const ObservationSet& obs_rx, const LinkParams& link, double r_p,
                  TimeMs now, double adaptation_period_ms)
{
    const double r_d = rtd_ms(link);
    const double t_pro = total_processing_ms(link);

    const std::int64_t n = estimate_n(solve_max_sojourn(obs_tx), r_d, t_pro);
    const std::int64_t m = estimate_m(solve_max_sojourn(obs_rx), r_d, t_pro);

    AdaptResult out;
    out.timers.n_hat = n;
    out.timers.m_hat = m;
    out.timers.t_d_ms = optimal_discard_timer(n, r_d, t_pro);
    out.timers.t_r_ms = reordering_timer(m, r_d, t_pro);
    out.timers.t_re_ms = reassembly_timer(m, r_d, link.t_pro_rlc_ms, link.t_pro_lower_ms);
    out.timers.valid_from = now;
    out.timers.adaptation_period_ms = adaptation_period_ms;
    out.timers.source = TimerSource::Estimated;
    out.b_star = optimal_buffer_size(n, r_d, t_pro, r_p);
    return out;
}

}  // namespace ntnsim
