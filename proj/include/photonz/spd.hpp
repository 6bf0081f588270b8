#pragma once

#include <vector>

namespace photonz {

// Threshold single-photon-detector figures of merit at threshold T:
// efficiency = P(z > T | one photon), dark_count = P(z > T | vacuum),
// ratio = efficiency / dark_count.
struct ThresholdCurvePoint {
    double threshold = 0.0;
    double efficiency = 0.0;
    double dark_count = 0.0;
    double ratio = 1.0;
};

// Closed forms: efficiency = (1+T) e^{-T}, dark_count = e^{-T}, ratio = 1+T.
ThresholdCurvePoint spd_point(double threshold);

// Evenly spaced grid over [t_min, t_max] inclusive; points >= 2.
std::vector<ThresholdCurvePoint> spd_curve(double t_min, double t_max, int points);

}  // namespace photonz
