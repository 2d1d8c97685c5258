#include "ntnsim/error.hpp"
#include "ntnsim/link_model.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ntnsim;

TEST(SlantRange, ZenithIsAltitude)
{
    EXPECT_EQ(slant_range_km(1200.0, 90.0), 1200.0);
    EXPECT_EQ(slant_range_km(600.0, 90.0), 600.0);
}

TEST(SlantRange, MatchesLawOfCosinesOracle)
{
    // 1200 km / 10 deg evaluates to 3130.942 km by the oracle.
    EXPECT_NEAR(slant_range_km(1200.0, 10.0), 3130.942165193819, 1e-6);
    for (double h : {400.0, 600.0, 1200.0, 2000.0}) {
        for (double e : {5.0, 10.0, 30.0, 45.0, 70.0, 89.0}) {
            EXPECT_NEAR(slant_range_km(h, e), oracle::slant_range_km(h, e), 1e-6) << h << " km, " << e << " deg";
        }
    }
}

TEST(SlantRange, DecreasingInElevation)
{
    double prev = slant_range_km(1200.0, 1.0);
    for (double e = 2.0; e <= 90.0; e += 1.0) {
        const double d = slant_range_km(1200.0, e);
        EXPECT_LT(d, prev);
        prev = d;
    }
}

TEST(SlantRange, InvalidGeometry)
{
    for (auto [h, e] : {std::pair{0.0, 10.0}, {-5.0, 10.0}, {1200.0, 0.0}, {1200.0, 91.0}}) {
        try {
            slant_range_km(h, e);
            FAIL() << h << " " << e;
        } catch (const Error& err) {
            EXPECT_EQ(err.code(), ErrorCode::InvalidGeometry);
        }
    }
}

TEST(Rtd, OverrideWins)
{
    LinkParams link;
    link.rtd_override_ms = 20.0;
    EXPECT_EQ(rtd_ms(link), 20.0);
}

TEST(Rtd, FromGeometry)
{
    LinkParams link;
    link.rtd_override_ms.reset();
    link.altitude_km = 1200.0;
    link.elevation_deg = 10.0;
    EXPECT_NEAR(rtd_ms(link), 20.88739780901239, 1e-9);
    link.elevation_deg = 90.0;
    EXPECT_NEAR(rtd_ms(link), 8.00553828475565, 1e-9);
}

TEST(Rtd, TotalProcessing)
{
    LinkParams link;
    EXPECT_DOUBLE_EQ(total_processing_ms(link), 0.5);
    link.t_pro_pdcp_ms = link.t_pro_rlc_ms = link.t_pro_lower_ms = 0.0;
    EXPECT_EQ(total_processing_ms(link), 0.0);
    link.t_pro_pdcp_ms = 0.1;
    link.t_pro_rlc_ms = 0.3;
    link.t_pro_lower_ms = 0.1;
    EXPECT_DOUBLE_EQ(total_processing_ms(link), 0.5);
}

TEST(RtdSchedule, StepLookup)
{
    const RtdSchedule single({{TimeMs{0.0}, 20.0}});
    EXPECT_EQ(rtd_at(single, TimeMs{500.0}), 20.0);

    const RtdSchedule two({{TimeMs{0.0}, 20.0}, {TimeMs{1000.0}, 14.0}});
    EXPECT_EQ(rtd_at(two, TimeMs{1500.0}), 14.0);
    EXPECT_EQ(rtd_at(two, TimeMs{999.999}), 20.0);
    EXPECT_EQ(rtd_at(two, TimeMs{1000.0}), 14.0);
}

TEST(RtdSchedule, RejectsBadSegments)
{
    EXPECT_THROW(RtdSchedule({{TimeMs{5.0}, 20.0}}), Error);
    EXPECT_THROW(RtdSchedule({{TimeMs{0.0}, 20.0}, {TimeMs{0.0}, 14.0}}), Error);
    EXPECT_THROW(RtdSchedule({{TimeMs{0.0}, -1.0}}), Error);
}
