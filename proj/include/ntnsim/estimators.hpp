#pragma once

#include "ntnsim/link_model.hpp"
#include "ntnsim/sim_core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ntnsim {

enum class ObservationSide { Transmitter, Receiver };

struct RawSample {
    double sojourn_ms = 0.0;
    // Oracle flag: the sample straddles a lost ACK and would bias the estimate.
    bool ack_lost = false;
};

/// Sojourn (transmitter) or delay (receiver) stamps of correctly received
/// packets, at most `capacity` of them.
struct ObservationSet {
    ObservationSide side = ObservationSide::Transmitter;
    std::vector<double> stamps;
    std::size_t capacity = 20;
};

enum class TimerSource { Initial, Estimated, Fixed };

struct TimerConfig {
    std::int64_t n_hat = 1;
    std::int64_t m_hat = 1;
    double t_d_ms = 0.0;
    double t_r_ms = 0.0;
    double t_re_ms = 0.0;
    TimeMs valid_from;
    double adaptation_period_ms = 10000.0;
    TimerSource source = TimerSource::Estimated;

    bool operator==(const TimerConfig&) const = default;
};

struct AdaptResult {
    TimerConfig timers;
    std::int64_t b_star = 0;
};

/// ceil() that snaps values within 1e-9 (relative) of an integer to that
/// integer, so plug-ins like 9 * 22 * 10 do not round up on float noise.
std::int64_t tolerant_ceil(double x);

/// Drops ack-lost samples and keeps the first `capacity` valid ones in order.
ObservationSet filter_ack_lost(std::span<const RawSample> raw, std::size_t capacity,
                               ObservationSide side = ObservationSide::Transmitter);

/// The estimation objective is monotone in t, so its argmax over a finite
/// set is the largest stamp.
double solve_max_sojourn(const ObservationSet& obs);

/// N = ceil((t* - 4 sum t_pro) / r_d), at least 1.
std::int64_t estimate_n(double t_star_ms, double r_d_ms, double t_pro_total_ms);
/// M = ceil((t* - 2 sum t_pro) / (r_d / 2)), at least 1.
std::int64_t estimate_m(double t_star_rx_ms, double r_d_ms, double t_pro_total_ms);

double optimal_discard_timer(std::int64_t n, double r_d_ms, double t_pro_total_ms);
/// Cells needed to hold every un-ACKed copy at rate r_p (packets per ms).
std::int64_t optimal_buffer_size(std::int64_t n, double r_d_ms, double t_pro_total_ms, double r_p);
double reordering_timer(std::int64_t m, double r_d_ms, double t_pro_total_ms);
double reassembly_timer(std::int64_t m, double r_d_ms, double t_pro_rlc_ms, double t_pro_lower_ms);

/// One pass of the adaptive estimator: both sets -> N, M -> t_d, t_r, t_re, B*.
/// `link` must carry the RTD in force at `now`.
AdaptResult adapt(const ObservationSet& obs_tx, const ObservationSet& obs_rx, const LinkParams& link, double r_p,
                  TimeMs now, double adaptation_period_ms);

}  // namespace ntnsim
