#pragma once

#include "ntnsim/sim_core.hpp"

#include <optional>
#include <vector>

namespace ntnsim {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kSpeedOfLightKmPerS = 299792.458;

/// Satellite link description. All delays in milliseconds.
struct LinkParams {
    double altitude_km = 1200.0;
    double elevation_deg = 10.0;
    std::optional<double> rtd_override_ms = 20.0;
    double t_pro_pdcp_ms = 0.2;
    double t_pro_rlc_ms = 0.2;
    double t_pro_lower_ms = 0.1;

    bool operator==(const LinkParams&) const = default;
};

struct RtdSegment {
    TimeMs start;
    double rtd_ms = 0.0;

    bool operator==(const RtdSegment&) const = default;
};

/// Piecewise-constant RTD over time; first segment starts at 0 and start
/// times are strictly increasing.
class RtdSchedule {
public:
    RtdSchedule() = default;
    explicit RtdSchedule(std::vector<RtdSegment> segments);

    const std::vector<RtdSegment>& segments() const noexcept { return segments_; }
    bool empty() const noexcept { return segments_.empty(); }

    bool operator==(const RtdSchedule&) const = default;

private:
    std::vector<RtdSegment> segments_;
};

/// Spherical-Earth slant range from a ground terminal to a satellite.
double slant_range_km(double altitude_km, double elevation_deg);

/// Override if set, otherwise two-way propagation over the slant range.
double rtd_ms(const LinkParams& link);

double total_processing_ms(const LinkParams& link);

/// RTD of the last segment whose start is <= t. Right-continuous at boundaries.
double rtd_at(const RtdSchedule& schedule, TimeMs t);

void validate(const LinkParams& link);

}  // namespace ntnsim
