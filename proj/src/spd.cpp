#include "photonz/spd.hpp"

#include <cmath>
#include <stdexcept>

namespace photonz {

ThresholdCurvePoint spd_point(double threshold) {
    if (!(threshold >= 0.0) || !std::isfinite(threshold))
        throw std::invalid_argument("spd_point: threshold must be finite and >= 0");
    const double e = std::exp(-threshold);
    return ThresholdCurvePoint{threshold, (1.0 + threshold) * e, e, 1.0 + threshold};
}

std::vector<ThresholdCurvePoint> spd_curve(double t_min, double t_max, int points) {
    if (!(t_min >= 0.0) || !(t_min < t_max))
        throw std::invalid_argument("spd_curve: need 0 <= t_min < t_max");
    if (points < 2) throw std::invalid_argument("spd_curve: need at least 2 points");

    std::vector<ThresholdCurvePoint> curve;
    curve.reserve(points);
    const double step = (t_max - t_min) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double t = (i == points - 1) ? t_max : t_min + i * step;
        curve.push_back(spd_point(t));
    }
    return curve;
}

}  // namespace photonz
