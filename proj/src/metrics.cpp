#include "ntnsim/metrics.hpp"

#include "ntnsim/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

namespace ntnsim {

double throughput(const RunMetrics& m, TimeMs window_start, TimeMs window_end)
{
    if (!(window_end > window_start)) {
        throw Error(ErrorCode::EmptyWindow, "window [" + std::to_string(window_start.value) + ", " +
                                                std::to_string(window_end.value) + ") is empty");
    }
    const auto& t = m.acked_accept_times;
    const auto lo = std::lower_bound(t.begin(), t.end(), window_start.value);
    const auto hi = std::lower_bound(t.begin(), t.end(), window_end.value);
    return static_cast<double>(hi - lo) / (window_end - window_start);
}

double avg_additional_delay(const RunMetrics& m)
{
    const auto& s = m.additional_delay_samples;
    if (s.empty()) throw Error(ErrorCode::NoSamples, "no ack-lost packets in run " + m.scenario_id);
    return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

std::string format_fixed(double value, int precision)
{
    if (!std::isfinite(value)) return {};
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, precision);
    if (ec != std::errc{}) return {};
    return std::string(buf, end);
}

std::string format_csv(std::span<const RunMetrics> runs)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : runs) {
        double add = NAN;
        if (!r.additional_delay_samples.empty()) add = avg_additional_delay(r);
        const auto& t = r.final_timers;
        out += r.scenario_id;
        out += ',' + std::to_string(r.seed);
        out += ',' + std::to_string(r.mu);
        out += ',' + std::to_string(r.buffer_cells);
        out += ',' + std::to_string(r.b_star);
        out += ',' + format_fixed(r.effective_rate_pkts_per_ms);
        out += ',' + format_fixed(add);
        out += ',' + std::to_string(t.n_hat);
        out += ',' + std::to_string(t.m_hat);
        out += ',' + format_fixed(t.t_d_ms);
        out += ',' + format_fixed(t.t_r_ms);
        out += ',' + format_fixed(t.t_re_ms);
        out += ',' + std::to_string(r.blocked_count);
        out += ',' + std::to_string(r.reorder_losses);
        out += ',' + std::to_string(r.reassembly_expiries);
        out += '\n';
    }
    return out;
}

std::size_t emit_csv(std::span<const RunMetrics> runs, const std::filesystem::path& path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    f << format_csv(runs);
    if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
    return runs.size();
}

std::string format_timer_log(const RunMetrics& run)
{
    std::string out = "time,n_hat,m_hat,t_d,t_r,t_re,b_star\n";
    for (const auto& e : run.timer_history) {
        out += format_fixed(e.time.value);
        out += ',' + std::to_string(e.timers.n_hat);
        out += ',' + std::to_string(e.timers.m_hat);
        out += ',' + format_fixed(e.timers.t_d_ms);
        out += ',' + format_fixed(e.timers.t_r_ms);
        out += ',' + format_fixed(e.timers.t_re_ms);
        out += ',' + std::to_string(e.b_star);
        out += '\n';
    }
    return out;
}

}  // namespace ntnsim
