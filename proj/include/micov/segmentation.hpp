#pragma once

#include <span>
#include <vector>

#include "micov/bag.hpp"
#include "micov/signal.hpp"
#include "micov/spd.hpp"

namespace micov {

enum class ThresholdMode { Absolute, Robust };

/// Adaptive-segmentation knobs. Absolute mode compares successive-covariance
/// distances against `absolute_threshold`; robust mode against
/// median + robust_k * MAD of the distance profile.
struct SegmentationConfig {
    double elementary_window_s = 2.0;
    Metric metric = Metric::AffineInvariant;
    ThresholdMode threshold_mode = ThresholdMode::Robust;
    double absolute_threshold = 0.0;
    double robust_k = 3.0;
    bool require_local_peak = true;
    bool center = false;
    double covariance_eps = 1e-6;
};

/// Detected segment boundaries on the elementary grid, together with the
/// successive-distance profile they were derived from.
struct CutPointSet {
    std::vector<std::size_t> indices; // strictly increasing, within (0, n_elementary)
    std::vector<double> distances;    // d_i = dist(cov_i, cov_{i+1})
};

/// One covariance per non-overlapping elementary window, order preserved.
/// The trailing partial window is discarded.
std::vector<SpdMatrix> elementary_covariances(const Recording& rec, double window_s,
                                              bool center = false, double eps = 1e-6);

/// Boundary i+1 is a cut point iff d_i exceeds the effective threshold and
/// (when require_local_peak) d_i is a local maximum of the profile, with the
/// boundary comparisons vacuously true. A length-1 profile is compared
/// against the absolute threshold only; robust mode declines to cut there.
CutPointSet detect_cut_points(std::span<const SpdMatrix> covs, const SegmentationConfig& cfg);

/// Merges the elementary windows between cut points into homogeneous
/// segments that tile the elementary-covered span exactly.
std::vector<Segment> merge_segments(const Recording& rec, const CutPointSet& cuts,
                                    double window_s);

/// elementary_covariances -> detect_cut_points -> merge_segments, with each
/// merged segment's covariance recomputed from the raw samples of its full
/// span. Bag label = recording label.
Bag make_bag(const Recording& rec, const SegmentationConfig& cfg);

/// Helpers shared with the robust threshold rule.
double median(std::vector<double> values);
double median_absolute_deviation(const std::vector<double>& values);

} // namespace micov
