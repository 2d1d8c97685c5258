#include "ntnsim/error.hpp"
#include "ntnsim/scenario.hpp"

#include <gtest/gtest.h>

using namespace ntnsim;

namespace {

ErrorCode code_of(std::string_view text, std::string* message = nullptr)
{
    try {
        parse_config(text);
    } catch (const Error& e) {
        if (message != nullptr) *message = e.what();
        return e.code();
    }
    ADD_FAILURE() << "accepted: " << text;
    return ErrorCode::IoError;
}

}  // namespace

TEST(Config, MinimalFileGivesDefaults)
{
    const auto cfg = parse_config("mu = 5\n");
    EXPECT_EQ(cfg, ScenarioConfig{});
    EXPECT_EQ(cfg.observation_o, 20);
    EXPECT_EQ(cfg.r_p, 10.0);
    EXPECT_EQ(cfg.link.rtd_override_ms, 20.0);
    EXPECT_DOUBLE_EQ(total_processing_ms(cfg.link), 0.5);
}

TEST(Config, CommentsAndBlankLines)
{
    const auto cfg = parse_config("# header\n\n  mu = 7   # trailing\nr_p=2.5\r\n");
    EXPECT_EQ(cfg.mu, 7);
    EXPECT_EQ(cfg.r_p, 2.5);
}

TEST(Config, MuBelowFourRejected)
{
    std::string msg;
    EXPECT_EQ(code_of("mu = 2\n", &msg), ErrorCode::ValidationError);
    EXPECT_NE(msg.find("mu"), std::string::npos);
}

TEST(Config, ValidationListsEveryProblem)
{
    std::string msg;
    EXPECT_EQ(code_of("mu = 2\nr_p = 0\np_ack_loss = 1\n", &msg), ErrorCode::ValidationError);
    EXPECT_NE(msg.find("mu"), std::string::npos);
    EXPECT_NE(msg.find("r_p"), std::string::npos);
    EXPECT_NE(msg.find("p_ack_loss"), std::string::npos);
}

TEST(Config, MalformedLineNamesLine)
{
    std::string msg;
    EXPECT_EQ(code_of("mu = 5\nthis is not a pair\n", &msg), ErrorCode::ParseError);
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    EXPECT_EQ(code_of("mu = 5\nr_p = fast\n", &msg), ErrorCode::ParseError);
    EXPECT_NE(msg.find("line 2 (r_p)"), std::string::npos);
    EXPECT_EQ(code_of("colour = blue\n", &msg), ErrorCode::ParseError);
    EXPECT_EQ(code_of("timer_policy = smart\n", &msg), ErrorCode::ParseError);
}

TEST(Config, ScheduleAndSweep)
{
    const auto cfg = parse_config("link.rtd_schedule = 0:20, 50000:14\nsweep.field = mu\nsweep.values = 4,5,6\n");
    ASSERT_TRUE(cfg.rtd_schedule.has_value());
    ASSERT_EQ(cfg.rtd_schedule->segments().size(), 2u);
    EXPECT_EQ(cfg.rtd_schedule->segments()[1].rtd_ms, 14.0);
    ASSERT_TRUE(cfg.sweep.has_value());
    EXPECT_EQ(cfg.sweep->values, (std::vector<double>{4, 5, 6}));
    EXPECT_EQ(code_of("link.rtd_schedule = 10:20\n"), ErrorCode::ParseError);
    EXPECT_EQ(code_of("sweep.field = colour\nsweep.values = 1\n"), ErrorCode::ValidationError);
}

TEST(Config, BufferPolicies)
{
    EXPECT_EQ(parse_config("buffer_policy = cells:120\n").buffer_policy.cells, 120);
    EXPECT_EQ(parse_config("buffer_policy = scaled:0.4\n").buffer_policy.scale, 0.4);
    EXPECT_EQ(code_of("buffer_policy = cells:0\n"), ErrorCode::ValidationError);
    EXPECT_EQ(code_of("buffer_policy = huge\n"), ErrorCode::ParseError);
}

TEST(Config, PartsNeedAm)
{
    EXPECT_EQ(code_of("rlc.mode = um\nrlc.parts = 3\n"), ErrorCode::ValidationError);
    EXPECT_EQ(parse_config("rlc.parts = 3\n").rlc_parts, 3);
}

// Property: render then parse is the identity over random valid configs.
TEST(Config, RenderParseRoundTrip)
{
    RandomSource rng(99);
    for (int i = 0; i < 300; ++i) {
        ScenarioConfig c;
        c.id = "cfg" + std::to_string(i);
        c.seed = static_cast<std::uint64_t>(rng.draw_uniform_int(0, 1'000'000'000));
        c.mu = rng.draw_uniform_int(4, 40);
        c.attempts = rng.draw_bernoulli(0.5) ? AttemptDistribution::Uniform : AttemptDistribution::Constant;
        c.processing_mode = rng.draw_bernoulli(0.5) ? ProcessingMode::PerJourney : ProcessingMode::PerAttempt;
        c.p_ack_loss = rng.draw_unit() * 0.99;
        c.r_p = 0.01 + rng.draw_unit() * 50.0;
        c.total_packets = rng.draw_uniform_int(100, 100000);
        c.observation_o = rng.draw_uniform_int(1, 100);
        c.adaptation_period_ms = 1.0 + rng.draw_unit() * 1e5;
        c.link.altitude_km = 300.0 + rng.draw_unit() * 2000.0;
        c.link.elevation_deg = 5.0 + rng.draw_unit() * 85.0;
        if (rng.draw_bernoulli(0.5)) c.link.rtd_override_ms.reset();
        else c.link.rtd_override_ms = 1.0 + rng.draw_unit() * 40.0;
        c.link.t_pro_pdcp_ms = rng.draw_unit();
        switch (rng.draw_uniform_int(0, 2)) {
        case 0: c.buffer_policy = {BufferPolicyKind::Optimal, 0, 1.0}; break;
        case 1: c.buffer_policy = {BufferPolicyKind::Cells, rng.draw_uniform_int(1, 9000), 1.0}; break;
        default: c.buffer_policy = {BufferPolicyKind::Scaled, 0, 0.05 + rng.draw_unit() * 2.0}; break;
        }
        if (rng.draw_bernoulli(0.3)) {
            c.timer_policy = {TimerPolicyKind::Fixed, 1.0 + rng.draw_unit() * 100, 1.0 + rng.draw_unit() * 100, 0.3};
        }
        if (rng.draw_bernoulli(0.3)) c.rtd_schedule = RtdSchedule({{TimeMs{0.0}, 20.0}, {TimeMs{rng.draw_unit() * 1e5 + 1.0}, 14.0}});
        if (rng.draw_bernoulli(0.3)) c.sweep = SweepSpec{"p_ack_loss", {0.0, rng.draw_unit() * 0.5}};
        const auto text = render_config(c);
        ASSERT_EQ(parse_config(text), c) << text;
    }
}
