#include "ntnsim/scenario.hpp"

#include "ntnsim/error.hpp"
#include "ntnsim/estimators.hpp"
#include "ntnsim/observation.hpp"
#include "ntnsim/pdcp.hpp"
#include "ntnsim/rlc.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace ntnsim {

namespace {

// PduDelivered payload: transmission id in the high bits, part index below.
constexpr unsigned kPartBits = 8;

struct Transmission {
    Sn sn = 0;
    int attempt = 1;
    TimeMs sdu_created;
    TimeMs start;
    std::int64_t k = 1;  // largest attempt count over the parts
    bool ack_lost = false;
    TimerSource armed_with = TimerSource::Initial;
    double ack_delay_ms = 0.0;
};

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& cfg)
        : cfg_(cfg),
          rng_(cfg.seed),
          retx_{cfg.mu, cfg.processing_mode, cfg.attempts},
          ack_loss_{cfg.p_ack_loss},
          t_pro_(total_processing_ms(cfg.link)),
          tx_(engine_, 1, cfg.max_attempts),
          rx_(engine_),
          rlc_(engine_),
          passthrough_(cfg.rlc_mode, cfg.link.t_pro_rlc_ms),
          obs_tx_(ObservationSide::Transmitter, static_cast<std::size_t>(cfg.observation_o)),
          obs_rx_(ObservationSide::Receiver, static_cast<std::size_t>(cfg.observation_o))
    {
        validate(cfg_);
        wire();
    }

    RunMetrics run();

private:
    double rtd_now(TimeMs t) const { return cfg_.rtd_schedule ? rtd_at(*cfg_.rtd_schedule, t) : rtd_ms(cfg_.link); }
    bool adaptive() const { return cfg_.timer_policy.kind == TimerPolicyKind::Adaptive; }

    void wire();
    void install_initial_timers();
    void apply(const TimerConfig& timers, std::int64_t b_star, bool resize_buffer);
    TimerConfig worst_case_timers(TimeMs now) const;

    void on_arrival(const Event& ev);
    void transmit(Sn sn, int attempt, TimeMs created);
    void on_pdu(const Event& ev);
    void on_sdu_received(std::uint64_t tx_id);
    void on_ack(const Event& ev);
    void on_discard(const Event& ev);
    void on_tick(const Event& ev);
    void on_rtd_change(const Event& ev);
    void maybe_adapt();
    void after_event(const Event& ev);
    bool traffic_done() const;

    ScenarioConfig cfg_;
    Engine engine_;
    RandomSource rng_;
    RetransmissionModel retx_;
    AckLossModel ack_loss_;
    double t_pro_;

    PdcpTxEntity tx_;
    PdcpRxEntity rx_;
    RlcAmRxEntity rlc_;
    RlcPassthrough passthrough_;
    ObservationCollector obs_tx_;
    ObservationCollector obs_rx_;

    TimerConfig timers_;
    std::int64_t b_star_ = 0;
    std::optional<TimeMs> first_estimate_;
    std::int64_t arrivals_ = 0;
    bool finished_ = false;
    std::vector<EventId> control_events_;

    std::vector<Transmission> transmissions_;
    std::vector<std::uint64_t> current_tx_;  // per sn
    std::vector<double> accept_time_;        // per sn
    RunMetrics metrics_;
};

void Simulation::wire()
{
    engine_.on(EventKind::SduArrival, [this](const Event& e) { on_arrival(e); });
    engine_.on(EventKind::PduDelivered, [this](const Event& e) { on_pdu(e); });
    engine_.on(EventKind::AckDelivered, [this](const Event& e) { on_ack(e); });
    engine_.on(EventKind::DiscardExpiry, [this](const Event& e) { on_discard(e); });
    engine_.on(EventKind::ReorderingExpiry, [this](const Event&) { rx_.rx_on_reordering_expiry(engine_.now()); });
    engine_.on(EventKind::ReassemblyExpiry,
               [this](const Event& e) { rlc_.am_rx_on_reassembly_expiry(e.payload, engine_.now()); });
    engine_.on(EventKind::AdaptationTick, [this](const Event& e) { on_tick(e); });
    engine_.on(EventKind::RtdChange, [this](const Event& e) { on_rtd_change(e); });
    engine_.set_post_dispatch([this](const Event& e) { after_event(e); });

    tx_.set_transmit([this](Sn sn, int attempt, TimeMs created) { transmit(sn, attempt, created); });
    if (adaptive()) {
        tx_.set_observer(&obs_tx_);
        rx_.set_observer(&obs_rx_);
    }
}

TimerConfig Simulation::worst_case_timers(TimeMs now) const
{
    const double r_d = rtd_now(now);
    TimerConfig t;
    t.n_hat = cfg_.worst_case_n;
    t.m_hat = cfg_.worst_case_n;
    t.t_d_ms = optimal_discard_timer(t.n_hat, r_d, t_pro_);
    t.t_r_ms = reordering_timer(t.m_hat, r_d, t_pro_);
    t.t_re_ms = reassembly_timer(t.m_hat, r_d, cfg_.link.t_pro_rlc_ms, cfg_.link.t_pro_lower_ms);
    t.valid_from = now;
    t.adaptation_period_ms = cfg_.adaptation_period_ms;
    t.source = TimerSource::Fixed;
    return t;
}

void Simulation::install_initial_timers()
{
    const double r_d = rtd_now(TimeMs{0.0});
    TimerConfig t;
    std::int64_t b_star = 0;
    switch (cfg_.timer_policy.kind) {
    case TimerPolicyKind::WorstCase:
        t = worst_case_timers(TimeMs{0.0});
        b_star = optimal_buffer_size(t.n_hat, r_d, t_pro_, cfg_.r_p);
        break;
    case TimerPolicyKind::Adaptive:
    case TimerPolicyKind::Fixed: {
        const bool fixed = cfg_.timer_policy.kind == TimerPolicyKind::Fixed;
        t.t_d_ms = fixed ? cfg_.timer_policy.t_d_ms : cfg_.observation_timer_ms;
        t.t_r_ms = fixed ? cfg_.timer_policy.t_r_ms : cfg_.observation_timer_ms;
        t.t_re_ms = fixed ? cfg_.timer_policy.t_re_ms : cfg_.observation_timer_ms;
        // Implied multiples of the per-journey cycle.
        t.n_hat = std::max<std::int64_t>(1, tolerant_ceil(t.t_d_ms / (r_d + 4.0 * t_pro_)));
        t.m_hat = std::max<std::int64_t>(1, tolerant_ceil(t.t_r_ms / (r_d / 2.0 + 2.0 * t_pro_)));
        t.adaptation_period_ms = cfg_.adaptation_period_ms;
        t.source = fixed ? TimerSource::Fixed : TimerSource::Initial;
        b_star = std::max<std::int64_t>(1, tolerant_ceil(t.t_d_ms * cfg_.r_p));
        break;
    }
    }

    std::int64_t capacity = b_star;
    switch (cfg_.buffer_policy.kind) {
    case BufferPolicyKind::Optimal: break;
    case BufferPolicyKind::Cells: capacity = cfg_.buffer_policy.cells; break;
    case BufferPolicyKind::Scaled:
        // During observation B* is unknown; the scale applies from the first estimate.
        if (!adaptive()) capacity = std::max<std::int64_t>(1, tolerant_ceil(cfg_.buffer_policy.scale * static_cast<double>(b_star)));
        break;
    }
    tx_.buffer().resize(capacity);
    apply(t, b_star, false);
}

void Simulation::apply(const TimerConfig& timers, std::int64_t b_star, bool resize_buffer)
{
    timers_ = timers;
    b_star_ = b_star;
    tx_.set_discard_timer(timers.t_d_ms);
    rx_.set_reordering_timer(timers.t_r_ms);
    rlc_.set_reassembly_timer(timers.t_re_ms);
    if (resize_buffer) {
        if (cfg_.buffer_policy.kind == BufferPolicyKind::Optimal) {
            tx_.buffer().resize(b_star);
        } else if (cfg_.buffer_policy.kind == BufferPolicyKind::Scaled) {
            tx_.buffer().resize(std::max<std::int64_t>(1, tolerant_ceil(cfg_.buffer_policy.scale * static_cast<double>(b_star))));
        }
    }
    metrics_.timer_history.push_back({timers.valid_from, timers, b_star});
}

void Simulation::on_arrival(const Event&)
{
    const TimeMs now = engine_.now();
    const SubmitResult res = tx_.tx_submit_sdu(now);
    if (res.accepted) accept_time_.push_back(now.value);
    ++arrivals_;
    if (arrivals_ < cfg_.total_packets) {
        engine_.schedule(EventKind::SduArrival, TimeMs{static_cast<double>(arrivals_) / cfg_.r_p});
    }
}

void Simulation::transmit(Sn sn, int attempt, TimeMs created)
{
    const TimeMs now = engine_.now();
    const double r_d = rtd_now(now);
    const std::uint64_t id = transmissions_.size();

    Transmission t;
    t.sn = sn;
    t.attempt = attempt;
    t.sdu_created = created;
    t.start = now;
    t.armed_with = timers_.source;

    const int parts = cfg_.rlc_parts;
    std::int64_t k_max = 0;
    for (int p = 0; p < parts; ++p) {
        const std::int64_t k = draw_attempts(retx_, rng_);
        k_max = std::max(k_max, k);
        engine_.schedule(EventKind::PduDelivered, now + delivery_delay(k, r_d, t_pro_, cfg_.processing_mode),
                         (id << kPartBits) | static_cast<std::uint64_t>(p));
    }
    t.k = k_max;
    t.ack_lost = draw_ack_lost(ack_loss_, rng_);
    t.ack_delay_ms = ack_delay(k_max, r_d, t_pro_, cfg_.processing_mode);
    transmissions_.push_back(t);

    if (current_tx_.size() <= sn) current_tx_.resize(sn + 1);
    current_tx_[sn] = id;
}

void Simulation::on_pdu(const Event& ev)
{
    const std::uint64_t id = ev.payload >> kPartBits;
    const int part = static_cast<int>(ev.payload & ((1u << kPartBits) - 1));
    if (cfg_.rlc_mode == RlcMode::Am) {
        if (rlc_.am_rx_on_pdu(id, part, cfg_.rlc_parts, engine_.now()) == AmRxOutcome::Complete) on_sdu_received(id);
    } else {
        // Timing already includes the RLC processing term of the delay model.
        (void)passthrough_.forward({id, engine_.now(), std::nullopt});
        on_sdu_received(id);
    }
}

void Simulation::on_sdu_received(std::uint64_t id)
{
    const Transmission& t = transmissions_[id];
    rx_.rx_on_pdu(t.sn, t.sdu_created, engine_.now(), t.attempt);
    if (!t.ack_lost) engine_.schedule(EventKind::AckDelivered, t.start + t.ack_delay_ms, id);
    maybe_adapt();
}

void Simulation::on_ack(const Event& ev)
{
    tx_.tx_on_ack(transmissions_[ev.payload].sn, engine_.now());
    maybe_adapt();
}

void Simulation::on_discard(const Event& ev)
{
    const Sn sn = ev.payload;
    const Transmission expired = transmissions_[current_tx_[sn]];
    const ExpiryResult res = tx_.tx_on_discard_expiry(sn, engine_.now());
    if (res.attempts == 0 || !expired.ack_lost) return;
    // Counterfactual: when the ACK would have arrived had it not been lost.
    if (adaptive() && expired.armed_with != TimerSource::Estimated) return;
    const double completion = expired.start.value + expired.ack_delay_ms;
    metrics_.additional_delay_samples.push_back(std::max(0.0, engine_.now().value - completion));
}

void Simulation::maybe_adapt()
{
    if (!adaptive() || !obs_tx_.active() || !obs_tx_.full() || !obs_rx_.full()) return;
    const TimeMs now = engine_.now();
    LinkParams link = cfg_.link;
    link.rtd_override_ms = rtd_now(now);
    const AdaptResult res = adapt(obs_tx_.snapshot(), obs_rx_.snapshot(), link, cfg_.r_p, now, cfg_.adaptation_period_ms);
    obs_tx_.stop();
    obs_rx_.stop();
    apply(res.timers, res.b_star, true);
    if (!first_estimate_) {
        first_estimate_ = now;
        control_events_.push_back(engine_.schedule(EventKind::AdaptationTick, now + cfg_.adaptation_period_ms));
    }
}

void Simulation::on_tick(const Event&)
{
    const TimeMs now = engine_.now();
    if (!obs_tx_.active()) {
        obs_tx_.restart(tx_.next_sn());
        obs_rx_.restart(tx_.next_sn());
    }
    control_events_.push_back(engine_.schedule(EventKind::AdaptationTick, now + cfg_.adaptation_period_ms));
}

void Simulation::on_rtd_change(const Event&)
{
    const TimeMs now = engine_.now();
    if (adaptive()) {
        // Stamps from the old RTD regime would corrupt the estimate.
        obs_tx_.restart(tx_.next_sn());
        obs_rx_.restart(tx_.next_sn());
    } else if (cfg_.timer_policy.kind == TimerPolicyKind::WorstCase) {
        const TimerConfig t = worst_case_timers(now);
        apply(t, optimal_buffer_size(t.n_hat, rtd_now(now), t_pro_, cfg_.r_p), true);
    }
}

bool Simulation::traffic_done() const
{
    return arrivals_ >= cfg_.total_packets && tx_.buffer().occupancy() == 0;
}

void Simulation::after_event(const Event&)
{
    const auto& buf = tx_.buffer();
    if (buf.occupancy() > buf.capacity()) ++metrics_.invariant_violations;
    if (!finished_ && traffic_done()) {
        finished_ = true;
        for (EventId id : control_events_) engine_.cancel(id);
    }
}

RunMetrics Simulation::run()
{
    install_initial_timers();
    if (adaptive()) {
        obs_tx_.restart(0);
        obs_rx_.restart(0);
    }
    if (cfg_.rtd_schedule) {
        for (const auto& seg : cfg_.rtd_schedule->segments()) {
            if (seg.start.value > 0.0) control_events_.push_back(engine_.schedule(EventKind::RtdChange, seg.start));
        }
    }
    if (cfg_.total_packets > 0) engine_.schedule(EventKind::SduArrival, TimeMs{0.0});

    metrics_.events_dispatched = engine_.run();

    RunMetrics& m = metrics_;
    m.scenario_id = cfg_.id;
    m.seed = cfg_.seed;
    m.mu = cfg_.mu;
    m.r_p = cfg_.r_p;
    m.end_time = engine_.now();
    m.tx = tx_.counters();
    m.rx = rx_.counters();
    m.rlc = rlc_.counters();
    m.blocked_count = m.tx.rejected;
    m.peak_buffer_occupancy = m.tx.peak_occupancy;
    m.reorder_losses = m.rx.reorder_losses;
    m.reassembly_expiries = m.rlc.expired_incomplete;
    m.buffer_cells = tx_.buffer().target_capacity();
    m.b_star = b_star_;
    m.final_timers = timers_;

    const auto& states = tx_.states();
    const auto& transitions = tx_.terminal_transitions();
    for (Sn sn = 0; sn < states.size(); ++sn) {
        if (transitions[sn] != 1) ++m.invariant_violations;
        if (states[sn] == SduState::Acked) m.acked_accept_times.push_back(accept_time_[sn]);
    }
    m.invariant_violations += m.rx.order_violations;

    const double warm_from = first_estimate_ ? first_estimate_->value : 0.0;
    m.window_start = TimeMs{warm_from + 2.0 * timers_.t_d_ms};
    m.window_end = TimeMs{static_cast<double>(cfg_.total_packets) / cfg_.r_p};
    m.effective_rate_pkts_per_ms = m.window_end > m.window_start ? throughput(m, m.window_start, m.window_end) : NAN;
    return std::move(metrics_);
}

void apply_sweep_value(ScenarioConfig& c, const std::string& field, double v)
{
    auto as_int = [&]() {
        if (v != std::floor(v)) throw Error(ErrorCode::ValidationError, "sweep value for " + field + " must be an integer");
        return static_cast<std::int64_t>(v);
    };
    if (field == "mu") c.mu = as_int();
    else if (field == "p_ack_loss") c.p_ack_loss = v;
    else if (field == "r_p") c.r_p = v;
    else if (field == "total_packets") c.total_packets = as_int();
    else if (field == "observation_o") c.observation_o = as_int();
    else if (field == "buffer_cells") c.buffer_policy = {BufferPolicyKind::Cells, as_int(), 1.0};
    else if (field == "buffer_scale") c.buffer_policy = {BufferPolicyKind::Scaled, 0, v};
    else if (field == "seed") c.seed = static_cast<std::uint64_t>(as_int());
    else throw Error(ErrorCode::ValidationError, "unsupported sweep field " + field);
}

}  // namespace

RunMetrics run_scenario(const ScenarioConfig& cfg)
{
    Simulation sim(cfg);
    return sim.run();
}

ScenarioConfig sweep_point(const ScenarioConfig& cfg, std::size_t index)
{
    if (!cfg.sweep || cfg.sweep->values.empty()) throw Error(ErrorCode::SweepEmpty, "no sweep values");
    ScenarioConfig point = cfg;
    point.sweep.reset();
    point.seed = cfg.seed + index;
    point.id = cfg.id + "-" + std::to_string(index);
    apply_sweep_value(point, cfg.sweep->field, cfg.sweep->values.at(index));
    validate(point);
    return point;
}

std::vector<RunMetrics> run_sweep(const ScenarioConfig& cfg, unsigned jobs)
{
    if (!cfg.sweep || cfg.sweep->values.empty()) throw Error(ErrorCode::SweepEmpty, "no sweep values");
    const std::size_t n = cfg.sweep->values.size();
    std::vector<ScenarioConfig> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(sweep_point(cfg, i));

    std::vector<RunMetrics> out(n);
    jobs = std::max(1u, jobs);
    for (std::size_t base = 0; base < n; base += jobs) {
        std::vector<std::future<RunMetrics>> batch;
        const std::size_t end = std::min(n, base + jobs);
        for (std::size_t i = base; i < end; ++i) {
            batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                       [&points, i] { return run_scenario(points[i]); }));
        }
        for (std::size_t i = base; i < end; ++i) out[i] = batch[i - base].get();
    }
    return out;
}

}  // namespace ntnsim
