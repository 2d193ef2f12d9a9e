#include "micov/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace micov {

namespace {

void require_config(const SegmentationConfig& cfg) {
    if (!(cfg.elementary_window_s > 0.0)) {
        throw ConfigError("segmentation: elementary window must be positive");
    }
    if (cfg.threshold_mode == ThresholdMode::Absolute && !(cfg.absolute_threshold > 0.0)) {
        throw ConfigError("segmentation: absolute threshold must be positive");
    }
    if (cfg.threshold_mode == ThresholdMode::Robust && !(cfg.robust_k > 0.0)) {
        throw ConfigError("segmentation: robust k must be positive");
    }
}

} // namespace

double median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of empty set");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
    double m = values[mid];
    if (values.size() % 2 == 0) {
        std::nth_element(values.begin(), values.begin() + static_cast<long>(mid) - 1,
                         values.begin() + static_cast<long>(mid));
        m = 0.5 * (m + values[mid - 1]);
    }
    return m;
}

double median_absolute_deviation(const std::vector<double>& values) {
    const double m = median(values);
    std::vector<double> deviations;
    deviations.reserve(values.size());
    for (double v : values) {
        deviations.push_back(std::abs(v - m));
    }
    return median(std::move(deviations));
}

std::vector<SpdMatrix> elementary_covariances(const Recording& rec, double window_s, bool center,
                                              double eps) {
    const std::vector<Segment> segments = fixed_segments(rec, window_s, 0.0);
    std::vector<SpdMatrix> covs;
    covs.reserve(segments.size());
    for (const Segment& seg : segments) {
        covs.push_back(segment_covariance(seg, center, eps));
    }
    return covs;
}

CutPointSet detect_cut_points(std::span<const SpdMatrix> covs, const SegmentationConfig& cfg) {
    require_config(cfg);
    if (covs.size() < 2) {
        throw std::invalid_argument("detect_cut_points: needs at least 2 covariances");
    }
    CutPointSet out;
    out.distances.reserve(covs.size() - 1);
    for (std::size_t i = 0; i + 1 < covs.size(); ++i) {
        out.distances.push_back(geodesic_distance(covs[i], covs[i + 1], cfg.metric));
    }

    double threshold = cfg.absolute_threshold;
    if (cfg.threshold_mode == ThresholdMode::Robust) {
        if (out.distances.size() < 2) {
            // MAD undefined on a single distance; decline to cut.
            return out;
        }
        threshold = median(out.distances) + cfg.robust_k * median_absolute_deviation(out.distances);
    }

    const std::size_t m = out.distances.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double d = out.distances[i];
        if (!(d > threshold)) {
            continue;
        }
        if (cfg.require_local_peak) {
            const bool left_ok = (i == 0) || d >= out.distances[i - 1];
            const bool right_ok = (i + 1 == m) || d >= out.distances[i + 1];
            if (!left_ok || !right_ok) {
                continue;
            }
        }
        out.indices.push_back(i + 1);
    }
    return out;
}

std::vector<Segment> merge_segments(const Recording& rec, const CutPointSet& cuts,
                                    double window_s) {
    if (!(window_s > 0.0)) {
        throw ConfigError("merge_segments: window must be positive");
    }
    const Eigen::Index wn = static_cast<Eigen::Index>(std::llround(window_s * rec.sample_rate()));
    const std::size_t n_elementary = static_cast<std::size_t>(rec.n_samples() / wn);
    if (n_elementary == 0) {
        throw ConfigError("merge_segments: recording shorter than one elementary window");
    }
    std::size_t previous = 0;
    for (std::size_t idx : cuts.indices) {
        if (idx <= previous || idx >= n_elementary) {
            std::ostringstream msg;
            msg << "merge_segments: cut index " << idx << " inconsistent with elementary grid of "
                << n_elementary << " windows";
            throw std::invalid_argument(msg.str());
        }
        previous = idx;
    }

    std::vector<std::size_t> boundaries;
    boundaries.push_back(0);
    boundaries.insert(boundaries.end(), cuts.indices.begin(), cuts.indices.end());
    boundaries.push_back(n_elementary);

    std::vector<Segment> merged;
    for (std::size_t k = 0; k + 1 < boundaries.size(); ++k) {
        const double start = static_cast<double>(boundaries[k]) * window_s;
        const double duration = static_cast<double>(boundaries[k + 1] - boundaries[k]) * window_s;
        merged.push_back({start, duration, &rec});
    }
    return merged;
}

Bag make_bag(const Recording& rec, const SegmentationConfig& cfg) {
    require_config(cfg);
    const std::vector<SpdMatrix> covs =
        elementary_covariances(rec, cfg.elementary_window_s, cfg.center, cfg.covariance_eps);
    CutPointSet cuts;
    if (covs.size() >= 2) {
        cuts = detect_cut_points(covs, cfg);
    }
    const std::vector<Segment> merged = merge_segments(rec, cuts, cfg.elementary_window_s);
    std::vector<SpdMatrix> instances;
    instances.reserve(merged.size());
    for (const Segment& seg : merged) {
        instances.push_back(segment_covariance(seg, cfg.center, cfg.covariance_eps));
    }
    return Bag(rec.subject_id(), rec.label(), std::move(instances));
}

} // namespace micov
