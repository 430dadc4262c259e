#pragma once
// Label CSV codec: rows of `frame,class,track,azimuth,elevation`, all
// integers, no header. Azimuth in [-180, 179], elevation in [-90, 90].
// DOA values are rounded to the nearest degree on write.

#include <string>

#include "seldkit/events.hpp"

namespace seldkit {

EventList read_labels(const std::string& path);
void write_labels(const std::string& path, const EventList& events);

}  // namespace seldkit
