#include "ntnsim/link_model.hpp"

#include "ntnsim/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ntnsim {

RtdSchedule::RtdSchedule(std::vector<RtdSegment> segments) : segments_(std::move(segments))
{
    if (segments_.empty()) return;
    if (segments_.front().start.value != 0.0) {
        throw Error(ErrorCode::ValidationError, "rtd schedule must start at 0 ms");
    }
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (!(segments_[i].rtd_ms > 0.0)) {
            throw Error(ErrorCode::ValidationError, "rtd schedule segment " + std::to_string(i) + " has non-positive rtd");
        }
        if (i > 0 && !(segments_[i - 1].start < segments_[i].start)) {
            throw Error(ErrorCode::ValidationError, "rtd schedule start times must be strictly increasing");
        }
    }
}

double slant_range_km(double altitude_km, double elevation_deg)
{
    if (!(altitude_km > 0.0) || !(elevation_deg > 0.0) || elevation_deg > 90.0) {
        throw Error(ErrorCode::InvalidGeometry,
                    "altitude " + std::to_string(altitude_km) + " km, elevation " + std::to_string(elevation_deg) + " deg");
    }
    if (elevation_deg == 90.0) return altitude_km;
    const double re_sin = kEarthRadiusKm * std::sin(elevation_deg * std::numbers::pi / 180.0);
    return std::sqrt(re_sin * re_sin + altitude_km * altitude_km + 2.0 * kEarthRadiusKm * altitude_km) - re_sin;
}

double rtd_ms(const LinkParams& link)
{
    if (link.rtd_override_ms) return *link.rtd_override_ms;
    return 2.0 * slant_range_km(link.altitude_km, link.elevation_deg) / kSpeedOfLightKmPerS * 1000.0;
}

double total_processing_ms(const LinkParams& link)
{
    return link.t_pro_pdcp_ms + link.t_pro_rlc_ms + link.t_pro_lower_ms;
}

double rtd_at(const RtdSchedule& schedule, TimeMs t)
{
    const auto& segs = schedule.segments();
    double rtd = segs.empty() ? 0.0 : segs.front().rtd_ms;
    for (const auto& s : segs) {
        if (s.start > t) break;
        rtd = s.rtd_ms;
    }
    return rtd;
}

void validate(const LinkParams& link)
{
    if (link.t_pro_pdcp_ms < 0.0 || link.t_pro_rlc_ms < 0.0 || link.t_pro_lower_ms < 0.0) {
        throw Error(ErrorCode::ValidationError, "processing delays must be >= 0");
    }
    if (link.rtd_override_ms) {
        if (!(*link.rtd_override_ms > 0.0)) throw Error(ErrorCode::ValidationError, "link.rtd_override_ms must be > 0");
    } else {
        (void)slant_range_km(link.altitude_km, link.elevation_deg);
    }
}

}  // namespace ntnsim
