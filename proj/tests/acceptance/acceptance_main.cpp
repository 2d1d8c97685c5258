// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "ntnsim/estimators.hpp"
#include "ntnsim/link_model.hpp"
#include "ntnsim/loss_model.hpp"
#include "ntnsim/metrics.hpp"
#include "ntnsim/scenario.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace ntnsim;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass) detail.clear();
        pass = false;
        detail += (detail.empty() ? "" : "; ") + why;
    }
    void note(const std::string& what)
    {
        if (pass) detail += (detail.empty() ? "" : "; ") + what;
    }
};

std::string fmt(double v, int precision = 3)
{
    return format_fixed(v, precision);
}

bool within(double measured, double expected, double rel)
{
    return std::abs(measured - expected) <= rel * std::abs(expected);
}

Outcome rtd_geometry()
{
    Outcome o;
    const double d = slant_range_km(1200.0, 10.0);
    const double ref = oracle::slant_range_km(1200.0, 10.0);
    if (!within(d, ref, 0.005)) o.fail("slant range " + fmt(d) + " km vs oracle " + fmt(ref));
    if (!within(d, 3131.0, 0.005)) o.fail("slant range " + fmt(d) + " km not within 0.5% of 3131");
    LinkParams link;
    link.rtd_override_ms.reset();
    const double rtd = rtd_ms(link);
    if (rtd < 20.0 || rtd > 21.0) o.fail("rtd " + fmt(rtd) + " ms outside [20, 21]");
    o.note("slant=" + fmt(d) + " km, rtd=" + fmt(rtd) + " ms");
    return o;
}

Outcome estimator_exactness()
{
    Outcome o;
    int cases = 0, failures = 0;
    for (double r_d = 10.0; r_d <= 60.0; r_d += 10.0) {
        for (double t_pro : {0.0, 0.5, 2.0}) {
            if (!(4.0 * t_pro < r_d)) continue;
            for (std::int64_t k = 1; k <= 40; ++k) {
                const double t_tx = static_cast<double>(k) * r_d + 4.0 * t_pro;
                const double t_rx = static_cast<double>(k) * r_d / 2.0 + 2.0 * t_pro;
                ++cases;
                if (estimate_n(t_tx, r_d, t_pro) != k || oracle::smallest_cover(t_tx, r_d, 4.0 * t_pro) != k) ++failures;
                if (estimate_m(t_rx, r_d, t_pro) != k) ++failures;
            }
        }
    }
    if (failures != 0) o.fail(std::to_string(failures) + " failures");
    o.note(std::to_string(cases) + " grid points, both sides");
    return o;
}

Outcome buffer_sweep()
{
    Outcome o;
    ScenarioConfig cfg;
    cfg.id = "buffer";
    cfg.seed = 7;
    cfg.mu = 1;
    cfg.attempts = AttemptDistribution::Constant;
    cfg.total_packets = 20000;
    cfg.sweep = SweepSpec{"buffer_scale", {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4}};
    const auto runs = run_sweep(cfg, 1);
    std::string curve;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        if (r.final_timers.n_hat != 1) o.fail("n_hat " + std::to_string(r.final_timers.n_hat) + " != 1");
        const double expected = std::min(cfg.r_p, static_cast<double>(r.buffer_cells) / static_cast<double>(r.b_star) * cfg.r_p);
        if (!within(r.effective_rate_pkts_per_ms, expected, 0.02)) {
            o.fail("B=" + std::to_string(r.buffer_cells) + ": " + fmt(r.effective_rate_pkts_per_ms) + " vs " + fmt(expected));
        }
        curve += (curve.empty() ? "" : " ") + fmt(r.effective_rate_pkts_per_ms, 2);
    }

    // Saturation starts exactly at B*: one cell less already blocks.
    const std::int64_t b_star = runs.front().b_star;
    ScenarioConfig at = sweep_point(cfg, 4);
    at.buffer_policy = {BufferPolicyKind::Cells, b_star, 1.0};
    ScenarioConfig below = at;
    below.buffer_policy.cells = b_star - 1;
    const auto r_at = run_scenario(at);
    const auto r_below = run_scenario(below);
    if (r_at.blocked_count != 0 || !within(r_at.effective_rate_pkts_per_ms, cfg.r_p, 1e-9)) o.fail("B = B* does not saturate");
    if (r_below.blocked_count == 0 || !(r_below.effective_rate_pkts_per_ms < cfg.r_p)) o.fail("B = B* - 1 already saturates");
    o.note("B*=" + std::to_string(b_star) + ", rates [" + curve + "]");
    return o;
}

Outcome additional_delay()
{
    Outcome o;
    const double cycle = 20.0 + 4.0 * 0.5;
    std::vector<double> worst, adaptive;
    std::string summary;
    for (std::int64_t mu = 4; mu <= 10; ++mu) {
        ScenarioConfig cfg;
        cfg.mu = mu;
        cfg.p_ack_loss = 0.05;
        cfg.total_packets = 100000;
        cfg.seed = 100 + static_cast<std::uint64_t>(mu);
        const double mean_ack = (static_cast<double>(mu) + 0.5) * 20.0 + 2.0;

        cfg.timer_policy.kind = TimerPolicyKind::WorstCase;
        const auto w = run_scenario(cfg);
        const double w_avg = avg_additional_delay(w);
        const double w_exp = 32.0 * cycle - mean_ack;
        if (!within(w_avg, w_exp, 0.05)) o.fail("worst mu=" + std::to_string(mu) + ": " + fmt(w_avg) + " vs " + fmt(w_exp));

        cfg.timer_policy.kind = TimerPolicyKind::Adaptive;
        const auto a = run_scenario(cfg);
        const auto n_hat = a.final_timers.n_hat;
        if (n_hat != mu + 4) o.fail("adaptive mu=" + std::to_string(mu) + " converged to n_hat=" + std::to_string(n_hat));
        const double a_avg = avg_additional_delay(a);
        const double a_exp = static_cast<double>(n_hat) * cycle - mean_ack;
        if (!within(a_avg, a_exp, 0.05)) o.fail("adaptive mu=" + std::to_string(mu) + ": " + fmt(a_avg) + " vs " + fmt(a_exp));

        worst.push_back(w_avg);
        adaptive.push_back(a_avg);
        summary += " mu" + std::to_string(mu) + "=" + fmt(w_avg, 1) + "/" + fmt(a_avg, 1);
    }
    for (std::size_t i = 0; i < worst.size(); ++i) {
        if (i > 0 && !(worst[i] < worst[i - 1])) o.fail("worst-case curve not strictly decreasing at index " + std::to_string(i));
        if (!(worst[i] > adaptive[i])) o.fail("worst-case not above adaptive at index " + std::to_string(i));
    }
    o.note("worst/adaptive ms:" + summary);
    return o;
}

Outcome readaptation()
{
    Outcome o;
    ScenarioConfig cfg;
    cfg.id = "readapt";
    cfg.seed = 3;
    cfg.total_packets = 700000;
    cfg.observation_o = 100;
    cfg.rtd_schedule = RtdSchedule({{TimeMs{0.0}, 20.0}, {TimeMs{50000.0}, 14.0}});
    const auto m = run_scenario(cfg);

    const TimerLogEntry* before = nullptr;
    const TimerLogEntry* after = nullptr;
    for (const auto& e : m.timer_history) {
        if (e.timers.source != TimerSource::Estimated) continue;
        if (e.time.value < 50000.0) before = &e;
        else if (after == nullptr) after = &e;
    }
    if (before == nullptr || after == nullptr) {
        o.fail("missing estimate before or after the switch");
        return o;
    }
    const auto n = after->timers.n_hat;
    if (before->timers.n_hat != n) o.fail("n_hat changed across the switch: " + std::to_string(before->timers.n_hat) + " -> " + std::to_string(n));
    if (after->timers.t_d_ms != static_cast<double>(n) * 16.0) o.fail("t_d " + fmt(after->timers.t_d_ms) + " != n_hat * 16");
    const std::int64_t shrink = before->b_star - after->b_star;
    const auto expected = static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * 6.0 * cfg.r_p));
    if (shrink != expected) o.fail("B* shrink " + std::to_string(shrink) + " != " + std::to_string(expected));
    if (m.blocked_count != 0 || m.reorder_losses != 0 || m.reassembly_expiries != 0 || m.tx.discarded != 0) {
        o.fail("packet loss during transition: blocked=" + std::to_string(m.blocked_count) + " reorder=" +
               std::to_string(m.reorder_losses) + " discarded=" + std::to_string(m.tx.discarded));
    }
    o.note("n_hat=" + std::to_string(n) + " at " + fmt(after->time.value, 1) + " ms, B* " + std::to_string(before->b_star) + " -> " +
           std::to_string(after->b_star) + ", t_d=" + fmt(after->timers.t_d_ms));
    return o;
}

Outcome invariants()
{
    Outcome o;
    std::uint64_t violations = 0, rejected = 0, reorder = 0, discarded = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        ScenarioConfig cfg;
        cfg.seed = seed;
        const auto m = run_scenario(cfg);
        violations += m.invariant_violations;
        rejected += m.blocked_count;
        reorder += m.reorder_losses;
        discarded += m.tx.discarded;
        if (m.tx.acked + m.tx.discarded != m.tx.accepted) ++violations;
    }
    if (violations != 0) o.fail(std::to_string(violations) + " invariant violations");
    if (rejected != 0) o.fail(std::to_string(rejected) + " rejected");
    if (reorder != 0) o.fail(std::to_string(reorder) + " reordering losses");
    o.note("100 seeds, violations=0, rejected=0, reorder_losses=0, discarded=" + std::to_string(discarded));
    return o;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    Outcome o;
    ScenarioConfig cfg;
    cfg.id = "det";
    cfg.seed = 42;
    cfg.p_ack_loss = 0.05;
    cfg.total_packets = 20000;
    cfg.sweep = SweepSpec{"mu", {4, 7, 10}};
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "ntnsim_det_a.csv";
    const auto b = dir / "ntnsim_det_b.csv";
    emit_csv(run_sweep(cfg, 1), a);
    emit_csv(run_sweep(cfg, 3), b);
    const std::string ca = read_file(a), cb = read_file(b);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
    if (ca.empty() || ca != cb) o.fail("CSV output differs between executions");
    o.note(std::to_string(ca.size()) + " identical bytes");
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 rtd geometry", rtd_geometry},
        {"2 estimator exactness", estimator_exactness},
        {"3 throughput vs buffer size", buffer_sweep},
        {"4 additional delay vs mu", additional_delay},
        {"5 re-adaptation after rtd change", readaptation},
        {"6 protocol invariants", invariants},
        {"7 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), secs, out.detail.c_str());
        if (!out.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
