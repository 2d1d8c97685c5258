#pragma once

#include "ntnsim/estimators.hpp"
#include "ntnsim/pdcp.hpp"
#include "ntnsim/rlc.hpp"
#include "ntnsim/sim_core.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ntnsim {

struct TimerLogEntry {
    TimeMs time;
    TimerConfig timers;
    std::int64_t b_star = 0;

    bool operator==(const TimerLogEntry&) const = default;
};

/// Everything one simulation run reports.
struct RunMetrics {
    std::string scenario_id;
    std::uint64_t seed = 0;
    std::int64_t mu = 0;
    double r_p = 0.0;

    // Packets per ms over [window_start, window_end); NaN when the window is empty.
    double effective_rate_pkts_per_ms = 0.0;
    TimeMs window_start;
    TimeMs window_end;
    std::uint64_t blocked_count = 0;
    std::vector<double> additional_delay_samples;
    std::int64_t peak_buffer_occupancy = 0;
    std::uint64_t reorder_losses = 0;
    std::uint64_t reassembly_expiries = 0;
    std::vector<TimerLogEntry> timer_history;

    std::int64_t buffer_cells = 0;
    std::int64_t b_star = 0;
    TimerConfig final_timers;
    PdcpTxCounters tx;
    PdcpRxCounters rx;
    RlcAmCounters rlc;
    // Acceptance times of SDUs that were eventually ACKed, nondecreasing.
    std::vector<double> acked_accept_times;
    std::uint64_t invariant_violations = 0;
    std::uint64_t events_dispatched = 0;
    TimeMs end_time;
};

/// ACKed SDUs accepted in [start, end) per ms.
double throughput(const RunMetrics& m, TimeMs window_start, TimeMs window_end);

/// Mean expiry-minus-true-completion over ack-lost transmissions.
double avg_additional_delay(const RunMetrics& m);

inline constexpr std::string_view kCsvHeader =
    "scenario_id,seed,mu,buffer_cells,b_star,throughput,avg_additional_delay,n_hat,m_hat,t_d,t_r,t_re,"
    "blocked,reorder_losses,reassembly_expiries";

/// One header line plus one row per run; LF line ends, '.' decimal point,
/// fixed 6-digit fractions, empty field for undefined values.
std::string format_csv(std::span<const RunMetrics> runs);
std::size_t emit_csv(std::span<const RunMetrics> runs, const std::filesystem::path& path);

/// Per-adaptation timer log: time,n_hat,m_hat,t_d,t_r,t_re,b_star.
std::string format_timer_log(const RunMetrics& run);

std::string format_fixed(double value, int precision = 6);

}  // namespace ntnsim
