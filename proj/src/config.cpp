#include "ntnsim/error.hpp"
#include "ntnsim/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ntnsim {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line, std::string_view key, const std::string& why)
{
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + " (" + std::string(key) + "): " + why);
}

double to_double(std::string_view v, std::size_t line, std::string_view key)
{
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) parse_fail(line, key, "expected a number, got '" + std::string(v) + "'");
    return out;
}

std::int64_t to_int(std::string_view v, std::size_t line, std::string_view key)
{
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) parse_fail(line, key, "expected an integer, got '" + std::string(v) + "'");
    return out;
}

std::uint64_t to_uint(std::string_view v, std::size_t line, std::string_view key)
{
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) parse_fail(line, key, "expected an unsigned integer, got '" + std::string(v) + "'");
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = s.find(sep);
        out.push_back(trim(s.substr(0, pos)));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

// Shortest representation that parses back to the same double.
std::string num(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

void set_key(ScenarioConfig& c, std::string_view key, std::string_view v, std::size_t line)
{
    auto choose = [&](std::initializer_list<std::string_view> options) -> std::size_t {
        std::size_t i = 0;
        for (auto o : options) {
            if (v == o) return i;
            ++i;
        }
        std::string list;
        for (auto o : options) list += (list.empty() ? "" : "|") + std::string(o);
        parse_fail(line, key, "expected one of " + list + ", got '" + std::string(v) + "'");
    };

    if (key == "id") c.id = std::string(v);
    else if (key == "seed") c.seed = to_uint(v, line, key);
    else if (key == "mu") c.mu = to_int(v, line, key);
    else if (key == "attempts") c.attempts = choose({"uniform", "constant"}) == 0 ? AttemptDistribution::Uniform : AttemptDistribution::Constant;
    else if (key == "processing_mode") c.processing_mode = choose({"per_journey", "per_attempt"}) == 0 ? ProcessingMode::PerJourney : ProcessingMode::PerAttempt;
    else if (key == "p_ack_loss") c.p_ack_loss = to_double(v, line, key);
    else if (key == "r_p") c.r_p = to_double(v, line, key);
    else if (key == "total_packets") c.total_packets = to_int(v, line, key);
    else if (key == "observation_o") c.observation_o = to_int(v, line, key);
    else if (key == "adaptation_period_ms") c.adaptation_period_ms = to_double(v, line, key);
    else if (key == "timer_policy") {
        static constexpr TimerPolicyKind kinds[] = {TimerPolicyKind::Adaptive, TimerPolicyKind::WorstCase, TimerPolicyKind::Fixed};
        c.timer_policy.kind = kinds[choose({"adaptive", "worst_case", "fixed"})];
    }
    else if (key == "timers.t_d_ms") c.timer_policy.t_d_ms = to_double(v, line, key);
    else if (key == "timers.t_r_ms") c.timer_policy.t_r_ms = to_double(v, line, key);
    else if (key == "timers.t_re_ms") c.timer_policy.t_re_ms = to_double(v, line, key);
    else if (key == "timers.observation_ms") c.observation_timer_ms = to_double(v, line, key);
    else if (key == "timers.max_attempts") c.max_attempts = static_cast<int>(to_int(v, line, key));
    else if (key == "timers.worst_case_n") c.worst_case_n = to_int(v, line, key);
    else if (key == "buffer_policy") {
        if (v == "optimal") {
            c.buffer_policy = {BufferPolicyKind::Optimal, 0, 1.0};
        } else if (v.starts_with("cells:")) {
            c.buffer_policy = {BufferPolicyKind::Cells, to_int(trim(v.substr(6)), line, key), 1.0};
        } else if (v.starts_with("scaled:")) {
            c.buffer_policy = {BufferPolicyKind::Scaled, 0, to_double(trim(v.substr(7)), line, key)};
        } else {
            parse_fail(line, key, "expected optimal|cells:<n>|scaled:<f>, got '" + std::string(v) + "'");
        }
    }
    else if (key == "rlc.mode") {
        static constexpr RlcMode modes[] = {RlcMode::Am, RlcMode::Um, RlcMode::Tm};
        c.rlc_mode = modes[choose({"am", "um", "tm"})];
    }
    else if (key == "rlc.parts") c.rlc_parts = static_cast<int>(to_int(v, line, key));
    else if (key == "link.altitude_km") c.link.altitude_km = to_double(v, line, key);
    else if (key == "link.elevation_deg") c.link.elevation_deg = to_double(v, line, key);
    else if (key == "link.rtd_override_ms") {
        if (v == "none") c.link.rtd_override_ms.reset();
        else c.link.rtd_override_ms = to_double(v, line, key);
    }
    else if (key == "link.t_pro_pdcp_ms") c.link.t_pro_pdcp_ms = to_double(v, line, key);
    else if (key == "link.t_pro_rlc_ms") c.link.t_pro_rlc_ms = to_double(v, line, key);
    else if (key == "link.t_pro_lower_ms") c.link.t_pro_lower_ms = to_double(v, line, key);
    else if (key == "link.rtd_schedule") {
        if (v == "none") {
            c.rtd_schedule.reset();
            return;
        }
        std::vector<RtdSegment> segs;
        for (auto item : split(v, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string_view::npos) parse_fail(line, key, "segment '" + std::string(item) + "' is not start:rtd");
            segs.push_back({TimeMs{to_double(trim(item.substr(0, colon)), line, key)},
                            to_double(trim(item.substr(colon + 1)), line, key)});
        }
        try {
            c.rtd_schedule = RtdSchedule(std::move(segs));
        } catch (const Error& e) {
            parse_fail(line, key, e.what());
        }
    }
    else if (key == "sweep.field") {
        if (!c.sweep) c.sweep.emplace();
        c.sweep->field = std::string(v);
    }
    else if (key == "sweep.values") {
        if (!c.sweep) c.sweep.emplace();
        c.sweep->values.clear();
        if (!v.empty()) {
            for (auto item : split(v, ',')) c.sweep->values.push_back(to_double(item, line, key));
        }
    }
    else parse_fail(line, key, "unknown key");
}

bool is_sweep_field(std::string_view f)
{
    return f == "mu" || f == "p_ack_loss" || f == "r_p" || f == "total_packets" || f == "observation_o" ||
           f == "buffer_cells" || f == "buffer_scale" || f == "seed";
}

}  // namespace

ScenarioConfig parse_config(std::string_view text)
{
    ScenarioConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parse_fail(line_no, line, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) parse_fail(line_no, line, "missing key");
        set_key(cfg, key, value, line_no);
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string render_config(const ScenarioConfig& c)
{
    std::string out;
    auto put = [&](std::string_view k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    };
    put("id", c.id);
    put("seed", std::to_string(c.seed));
    put("mu", std::to_string(c.mu));
    put("attempts", c.attempts == AttemptDistribution::Uniform ? "uniform" : "constant");
    put("processing_mode", c.processing_mode == ProcessingMode::PerJourney ? "per_journey" : "per_attempt");
    put("p_ack_loss", num(c.p_ack_loss));
    put("r_p", num(c.r_p));
    put("total_packets", std::to_string(c.total_packets));
    put("observation_o", std::to_string(c.observation_o));
    put("adaptation_period_ms", num(c.adaptation_period_ms));
    switch (c.timer_policy.kind) {
    case TimerPolicyKind::Adaptive: put("timer_policy", "adaptive"); break;
    case TimerPolicyKind::WorstCase: put("timer_policy", "worst_case"); break;
    case TimerPolicyKind::Fixed: put("timer_policy", "fixed"); break;
    }
    put("timers.t_d_ms", num(c.timer_policy.t_d_ms));
    put("timers.t_r_ms", num(c.timer_policy.t_r_ms));
    put("timers.t_re_ms", num(c.timer_policy.t_re_ms));
    put("timers.observation_ms", num(c.observation_timer_ms));
    put("timers.max_attempts", std::to_string(c.max_attempts));
    put("timers.worst_case_n", std::to_string(c.worst_case_n));
    switch (c.buffer_policy.kind) {
    case BufferPolicyKind::Optimal: put("buffer_policy", "optimal"); break;
    case BufferPolicyKind::Cells: put("buffer_policy", "cells:" + std::to_string(c.buffer_policy.cells)); break;
    case BufferPolicyKind::Scaled: put("buffer_policy", "scaled:" + num(c.buffer_policy.scale)); break;
    }
    put("rlc.mode", c.rlc_mode == RlcMode::Am ? "am" : c.rlc_mode == RlcMode::Um ? "um" : "tm");
    put("rlc.parts", std::to_string(c.rlc_parts));
    put("link.altitude_km", num(c.link.altitude_km));
    put("link.elevation_deg", num(c.link.elevation_deg));
    put("link.rtd_override_ms", c.link.rtd_override_ms ? num(*c.link.rtd_override_ms) : "none");
    put("link.t_pro_pdcp_ms", num(c.link.t_pro_pdcp_ms));
    put("link.t_pro_rlc_ms", num(c.link.t_pro_rlc_ms));
    put("link.t_pro_lower_ms", num(c.link.t_pro_lower_ms));
    if (c.rtd_schedule) {
        std::string s;
        for (const auto& seg : c.rtd_schedule->segments()) {
            if (!s.empty()) s += ',';
            s += num(seg.start.value) + ":" + num(seg.rtd_ms);
        }
        put("link.rtd_schedule", s);
    }
    if (c.sweep) {
        put("sweep.field", c.sweep->field);
        std::string s;
        for (double v : c.sweep->values) {
            if (!s.empty()) s += ',';
            s += num(v);
        }
        put("sweep.values", s);
    }
    return out;
}

void validate(const ScenarioConfig& c)
{
    std::vector<std::string> problems;
    auto check = [&](bool ok, std::string msg) {
        if (!ok) problems.push_back(std::move(msg));
    };

    RetransmissionModel rm{c.mu, c.processing_mode, c.attempts};
    check(rm.min_attempts() >= 1, c.attempts == AttemptDistribution::Uniform ? "mu - 3 must be >= 1 (mu >= 4)" : "mu must be >= 1");
    check(c.p_ack_loss >= 0.0 && c.p_ack_loss < 1.0, "p_ack_loss must be in [0, 1)");
    check(c.r_p > 0.0, "r_p must be > 0");
    check(c.observation_o >= 1, "observation_o must be >= 1");
    check(c.total_packets >= c.observation_o, "total_packets must be >= observation_o");
    check(c.adaptation_period_ms > 0.0, "adaptation_period_ms must be > 0");
    check(c.observation_timer_ms > 0.0, "timers.observation_ms must be > 0");
    check(c.max_attempts >= 1, "timers.max_attempts must be >= 1");
    check(c.worst_case_n >= 1, "timers.worst_case_n must be >= 1");
    if (c.timer_policy.kind == TimerPolicyKind::Fixed) {
        check(c.timer_policy.t_d_ms > 0.0 && c.timer_policy.t_r_ms > 0.0 && c.timer_policy.t_re_ms > 0.0,
              "fixed timers must all be > 0");
    }
    if (c.buffer_policy.kind == BufferPolicyKind::Cells) check(c.buffer_policy.cells >= 1, "buffer cells must be >= 1");
    if (c.buffer_policy.kind == BufferPolicyKind::Scaled) check(c.buffer_policy.scale > 0.0, "buffer scale must be > 0");
    check(c.rlc_parts >= 1 && c.rlc_parts <= 255, "rlc.parts must be in [1, 255]");
    check(c.rlc_parts == 1 || c.rlc_mode == RlcMode::Am, "rlc.parts > 1 requires rlc.mode = am");
    try {
        validate(c.link);
    } catch (const Error& e) {
        problems.emplace_back(e.what());
    }
    if (c.sweep) {
        check(is_sweep_field(c.sweep->field), "unsupported sweep.field '" + c.sweep->field + "'");
    }

    if (!problems.empty()) {
        std::string msg;
        for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
        throw Error(ErrorCode::ValidationError, msg);
    }
}

}  // namespace ntnsim
