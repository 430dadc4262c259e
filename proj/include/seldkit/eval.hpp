#pragma once
// Location-aware SELD metrics on one-second segments: ER20/F20 (detection
// with a 20-degree distance gate), class-dependent LE/LR, and the composite
// SELD score. Matching within a (segment, class) uses one representative DOA
// per track (circular mean over the segment) and a minimal-total-distance
// assignment.

#include <cstddef>
#include <vector>

#include "seldkit/events.hpp"
#include "seldkit/model.hpp"

namespace seldkit {

inline constexpr int kSegmentLabelFrames = 10;  // one second of 100 ms frames
inline constexpr double kDistanceThresholdDeg = 20.0;

struct MetricsReport {
    double er20 = 0.0;
    double f20 = 0.0;
    double le_cd = 0.0;  // degrees
    double lr_cd = 0.0;
    double seld = 0.0;
    // Raw counts.
    long tp = 0, fp = 0, fn = 0;
    long substitutions = 0, deletions = 0, insertions = 0;
    long n_ref = 0;            // total reference representatives
    long matched_pairs = 0;    // K
    double matched_error_sum = 0.0;  // summed angular distances over matches
    bool no_reference = false;  // ER/F undefined (ER reported as +inf, F as 0)
};

// Threshold semantics: active iff sed > threshold (strict). A zero-norm DOA
// triplet with an active class decodes to (az 0, el 0).
EventList decode(const Prediction& pred, double threshold = 0.5);

// Minimal-cost assignment on an n_rows x n_cols matrix (row-major); returns
// col index per row, -1 if unassigned. min(n_rows, n_cols) pairs are matched.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, std::size_t n_rows,
                                     std::size_t n_cols);

MetricsReport segment_metrics(const EventList& ref, const EventList& pred,
                              int segment_frames = kSegmentLabelFrames,
                              double distance_threshold_deg = kDistanceThresholdDeg);

// (er + (1 - f) + le/180 + (1 - lr)) / 4
double seld_score(double er, double f, double le_deg, double lr);

}  // namespace seldkit
