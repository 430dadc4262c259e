#include "seldkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seldkit {

namespace {
constexpr double kPi = 3.14159265358979323846;
double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }
}  // namespace

double wrap_azimuth(double degrees) {
    double a = std::fmod(degrees + 180.0, 360.0);
    if (a < 0.0) a += 360.0;
    return a - 180.0;
}

UnitVector3 doa_to_unit(const DirectionOfArrival& d) {
    const double az = deg2rad(d.azimuth_deg);
    const double el = deg2rad(d.elevation_deg);
    return {std::cos(az) * std::cos(el), std::sin(az) * std::cos(el), std::sin(el)};
}

DirectionOfArrival unit_to_doa(const UnitVector3& v) {
    const double norm = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    if (norm == 0.0) throw std::invalid_argument("degenerate direction");
    const double x = v.x / norm, y = v.y / norm, z = v.z / norm;
    const double el = rad2deg(std::asin(std::clamp(z, -1.0, 1.0)));
    if (std::abs(z) >= 1.0 || (x == 0.0 && y == 0.0)) return {0.0, z > 0.0 ? 90.0 : -90.0};
    return {wrap_azimuth(rad2deg(std::atan2(y, x))), el};
}

double angular_distance(const DirectionOfArrival& a, const DirectionOfArrival& b) {
    const double e1 = deg2rad(a.elevation_deg), e2 = deg2rad(b.elevation_deg);
    const double dphi = deg2rad(a.azimuth_deg - b.azimuth_deg);
    double c = std::sin(e1) * std::sin(e2) + std::cos(e1) * std::cos(e2) * std::cos(dphi);
    return rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
}

AmbisonicClip encode_plane_wave(const std::vector<float>& signal,
                                const DirectionOfArrival& d, int sample_rate) {
    const UnitVector3 u = doa_to_unit(d);
    AmbisonicClip clip;
    clip.sample_rate = sample_rate;
    clip.channels[kW] = signal;
    const float gx = static_cast<float>(u.x);
    const float gy = static_cast<float>(u.y);
    const float gz = static_cast<float>(u.z);
    auto& x = clip.channels[kX];
    auto& y = clip.channels[kY];
    auto& z = clip.channels[kZ];
    x.resize(signal.size());
    y.resize(signal.size());
    z.resize(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) {
        x[i] = gx * signal[i];
        y[i] = gy * signal[i];
        z[i] = gz * signal[i];
    }
    return clip;
}

}  // namespace seldkit
