#pragma once
// Direction-of-arrival representations and first-order plane-wave encoding.
//
// Coordinate convention: x = front, y = left, z = up. Azimuth is
// counterclockwise-positive and kept in [-180, 180); elevation in [-90, 90].
// Ambisonic channels use SN3D normalization, so the directional gains of a
// plane wave are exactly the direction cosines.

#include <array>
#include <cstddef>
#include <vector>

namespace seldkit {

struct DirectionOfArrival {
    double azimuth_deg = 0.0;    // wrapped into [-180, 180)
    double elevation_deg = 0.0;  // in [-90, 90]
};

struct UnitVector3 {
    double x = 1.0;
    double y = 0.0;
    double z = 0.0;
};

// 4-channel FOA audio, internal channel order W, X, Y, Z.
struct AmbisonicClip {
    int sample_rate = 24000;
    std::array<std::vector<float>, 4> channels;

    std::size_t num_samples() const { return channels[0].size(); }
};

enum FoaChannel { kW = 0, kX = 1, kY = 2, kZ = 3 };

// Wraps an angle into [-180, 180).
double wrap_azimuth(double degrees);

UnitVector3 doa_to_unit(const DirectionOfArrival& d);

// Inverse of doa_to_unit. Inputs within 1e-6 of unit norm are normalized;
// at the poles azimuth is 0 by convention. Throws on a zero vector.
DirectionOfArrival unit_to_doa(const UnitVector3& v);

// Great-circle angle between two directions, in [0, 180] degrees.
double angular_distance(const DirectionOfArrival& a, const DirectionOfArrival& b);

// SN3D first-order encoding: W = s, X = s cos(az) cos(el),
// Y = s sin(az) cos(el), Z = s sin(el).
AmbisonicClip encode_plane_wave(const std::vector<float>& signal,
                                const DirectionOfArrival& d,
                                int sample_rate = 24000);

}  // namespace seldkit
