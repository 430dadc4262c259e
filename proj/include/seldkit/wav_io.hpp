#pragma once
// 4-channel FOA WAV I/O, 24 kHz, 16-bit PCM or 32-bit float. On-disk channel
// order is ACN (W, Y, Z, X); in memory clips always hold W, X, Y, Z.

#include <string>

#include "seldkit/geometry.hpp"

namespace seldkit {

AmbisonicClip read_wav(const std::string& path);

// Writes 32-bit float samples.
void write_wav(const std::string& path, const AmbisonicClip& clip);

}  // namespace seldkit
