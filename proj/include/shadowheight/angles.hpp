#pragma once

#include <cmath>

namespace shadowheight {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

inline double deg_to_rad(double deg) { return deg * kDegToRad; }
inline double rad_to_deg(double rad) { return rad * kRadToDeg; }

/// Reduces an angle to [0, 360). fmod is exact, so values already in
/// range pass through bit-identical.
inline double wrap_degrees(double deg) {
    double w = std::fmod(deg, 360.0);
    return w < 0.0 ? w + 360.0 : w;
}

}  // namespace shadowheight
