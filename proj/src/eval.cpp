#include "seldkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace seldkit {

EventList decode(const Prediction& pred, double threshold) {
    EventList out;
    const auto n_classes = static_cast<std::size_t>(kNumClasses);
    for (std::size_t t = 0; t < pred.label_frames; ++t) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (!(pred.sed[t * n_classes + c] > threshold)) continue;
            const float* v = pred.doa.data() + t * 3 * n_classes + c * 3;
            DirectionOfArrival d{0.0, 0.0};
            const double norm = std::sqrt(double(v[0]) * v[0] + double(v[1]) * v[1] +
                                          double(v[2]) * v[2]);
            if (norm > 0.0) d = unit_to_doa({v[0], v[1], v[2]});
            out.push_back({static_cast<int>(t), static_cast<int>(c), 0, d});
        }
    }
    return out;
}

namespace {

// Hungarian algorithm with potentials, O(n^2 m); needs n_rows <= n_cols.
std::vector<int> hungarian(const std::vector<double>& cost, std::size_t n, std::size_t m) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> match(n, -1);
    for (std::size_t j = 1; j <= m; ++j)
        if (p[j] != 0) match[p[j] - 1] = static_cast<int>(j - 1);
    return match;
}

// Exhaustive minimal-total-cost assignment over column permutations.
std::vector<int> exhaustive_assignment(const std::vector<double>& cost, std::size_t n_rows,
                                       std::size_t n_cols) {
    std::vector<int> cols(n_cols);
    std::iota(cols.begin(), cols.end(), 0);
    std::vector<int> best;
    double best_cost = std::numeric_limits<double>::infinity();
    std::sort(cols.begin(), cols.end());
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < n_rows && i < n_cols; ++i)
            c += cost[i * n_cols + static_cast<std::size_t>(cols[i])];
        if (c < best_cost) {
            best_cost = c;
            best.assign(cols.begin(), cols.begin() + static_cast<long>(std::min(n_rows, n_cols)));
        }
    } while (std::next_permutation(cols.begin(), cols.end()));
    std::vector<int> match(n_rows, -1);
    for (std::size_t i = 0; i < best.size(); ++i) match[i] = best[i];
    return match;
}

struct StreamAccumulator {
    UnitVector3 sum{0.0, 0.0, 0.0};
    DirectionOfArrival first;
    bool has_first = false;

    void add(const DirectionOfArrival& d) {
        if (!has_first) {
            first = d;
            has_first = true;
        }
        const UnitVector3 u = doa_to_unit(d);
        sum.x += u.x;
        sum.y += u.y;
        sum.z += u.z;
    }

    // Circular mean; degenerate zero-sum falls back to the first frame DOA.
    DirectionOfArrival representative() const {
        const double n = std::sqrt(sum.x * sum.x + sum.y * sum.y + sum.z * sum.z);
        if (n < 1e-12) return first;
        return unit_to_doa(sum);
    }
};

}  // namespace

std::vector<int> min_cost_assignment(const std::vector<double>& cost, std::size_t n_rows,
                                     std::size_t n_cols) {
    if (n_rows == 0 || n_cols == 0) return std::vector<int>(n_rows, -1);
    if (n_rows > n_cols) {
        // Transpose and invert the mapping so the solvers see rows <= cols.
        std::vector<double> t(cost.size());
        for (std::size_t i = 0; i < n_rows; ++i)
            for (std::size_t j = 0; j < n_cols; ++j) t[j * n_rows + i] = cost[i * n_cols + j];
        const std::vector<int> cols_to_rows = min_cost_assignment(t, n_cols, n_rows);
        std::vector<int> match(n_rows, -1);
        for (std::size_t j = 0; j < n_cols; ++j)
            if (cols_to_rows[j] >= 0)
                match[static_cast<std::size_t>(cols_to_rows[j])] = static_cast<int>(j);
        return match;
    }
    if (n_cols <= 6) return exhaustive_assignment(cost, n_rows, n_cols);
    return hungarian(cost, n_rows, n_cols);
}

MetricsReport segment_metrics(const EventList& ref, const EventList& pred, int segment_frames,
                              double distance_threshold_deg) {
    if (segment_frames <= 0) throw std::invalid_argument("segment length must be positive");

    // (segment, class, track) -> accumulated stream.
    using Key = std::tuple<int, int, int>;
    std::map<Key, StreamAccumulator> ref_streams, pred_streams;
    for (const auto& e : ref)
        ref_streams[{e.frame / segment_frames, e.cls, e.track}].add(e.doa);
    for (const auto& e : pred)
        pred_streams[{e.frame / segment_frames, e.cls, e.track}].add(e.doa);

    // (segment, class) -> representatives.
    std::map<std::pair<int, int>, std::vector<DirectionOfArrival>> ref_by_sc, pred_by_sc;
    for (const auto& [key, acc] : ref_streams)
        ref_by_sc[{std::get<0>(key), std::get<1>(key)}].push_back(acc.representative());
    for (const auto& [key, acc] : pred_streams)
        pred_by_sc[{std::get<0>(key), std::get<1>(key)}].push_back(acc.representative());

    std::map<int, std::pair<long, long>> per_segment_fp_fn;  // segment -> (FPs, FNs)
    std::map<int, long> per_segment_n;

    MetricsReport rep;
    auto handle_class = [&](int segment, int cls) {
        const auto rit = ref_by_sc.find({segment, cls});
        const auto pit = pred_by_sc.find({segment, cls});
        const std::size_t nr = rit == ref_by_sc.end() ? 0 : rit->second.size();
        const std::size_t np = pit == pred_by_sc.end() ? 0 : pit->second.size();
        if (nr == 0 && np == 0) return;

        long tp_c = 0;
        if (nr > 0 && np > 0) {
            std::vector<double> cost(nr * np);
            for (std::size_t i = 0; i < nr; ++i)
                for (std::size_t j = 0; j < np; ++j)
                    cost[i * np + j] = angular_distance(rit->second[i], pit->second[j]);
            const std::vector<int> match = min_cost_assignment(cost, nr, np);
            for (std::size_t i = 0; i < nr; ++i) {
                if (match[i] < 0) continue;
                const double d = cost[i * np + static_cast<std::size_t>(match[i])];
                rep.matched_pairs += 1;
                rep.matched_error_sum += d;
                if (d <= distance_threshold_deg) ++tp_c;
            }
        }
        rep.tp += tp_c;
        const long fp_c = static_cast<long>(np) - tp_c;
        const long fn_c = static_cast<long>(nr) - tp_c;
        rep.fp += fp_c;
        rep.fn += fn_c;
        per_segment_fp_fn[segment].first += fp_c;
        per_segment_fp_fn[segment].second += fn_c;
        per_segment_n[segment] += static_cast<long>(nr);
        rep.n_ref += static_cast<long>(nr);
    };

    // Visit every (segment, class) present on either side.
    std::map<std::pair<int, int>, char> visited;
    for (const auto& [sc, v] : ref_by_sc) visited[sc] = 1;
    for (const auto& [sc, v] : pred_by_sc) visited[sc] = 1;
    for (const auto& [sc, v] : visited) handle_class(sc.first, sc.second);

    long total_n = 0;
    for (const auto& [seg, fpfn] : per_segment_fp_fn) {
        const long fps = fpfn.first, fns = fpfn.second;
        rep.substitutions += std::min(fns, fps);
        rep.deletions += std::max(0L, fns - fps);
        rep.insertions += std::max(0L, fps - fns);
    }
    for (const auto& [seg, n] : per_segment_n) total_n += n;

    if (rep.n_ref == 0) {
        rep.no_reference = true;
        rep.er20 = std::numeric_limits<double>::infinity();
        rep.f20 = 0.0;
        rep.lr_cd = 0.0;
    } else {
        rep.er20 = static_cast<double>(rep.substitutions + rep.deletions + rep.insertions) /
                   static_cast<double>(total_n);
        rep.f20 = 2.0 * static_cast<double>(rep.tp) /
                  static_cast<double>(2 * rep.tp + rep.fp + rep.fn);
        rep.lr_cd = static_cast<double>(rep.matched_pairs) / static_cast<double>(rep.n_ref);
    }
    rep.le_cd = rep.matched_pairs == 0
                    ? 180.0
                    : rep.matched_error_sum / static_cast<double>(rep.matched_pairs);
    rep.seld = seld_score(rep.er20, rep.f20, rep.le_cd, rep.lr_cd);
    return rep;
}

double seld_score(double er, double f, double le_deg, double lr) {
    return (er + (1.0 - f) + le_deg / 180.0 + (1.0 - lr)) / 4.0;
}

}  // namespace seldkit
