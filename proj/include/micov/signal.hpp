#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "micov/errors.hpp"
#include "micov/spd.hpp"

namespace micov {

/// Frequency band, e.g. {"alpha", 8, 12}. Valid for a recording when
/// 0 < low < high < sample_rate / 2.
struct BandSpec {
    std::string name;
    double low_hz = 0.0;
    double high_hz = 0.0;
};

/// The paper's sub-band grid plus the 3-50 Hz broadband.
std::vector<BandSpec> standard_bands();

/// Immutable multichannel recording, samples stored channels x time.
class Recording {
public:
    Recording(std::string subject_id, int label, double sample_rate,
              std::vector<std::string> channel_names, Eigen::MatrixXd samples);

    const std::string& subject_id() const { return subject_id_; }
    int label() const { return label_; }
    double sample_rate() const { return sample_rate_; }
    const std::vector<std::string>& channel_names() const { return channel_names_; }
    const Eigen::MatrixXd& samples() const { return samples_; }

    Eigen::Index n_channels() const { return samples_.rows(); }
    Eigen::Index n_samples() const { return samples_.cols(); }
    double duration_s() const { return static_cast<double>(n_samples()) / sample_rate_; }

    /// Same metadata, new sample block (shape must match channel count).
    Recording with_samples(Eigen::MatrixXd samples) const;

    /// Copy with the named channels removed. Unknown names are ignored.
    Recording without_channels(const std::vector<std::string>& names) const;

private:
    std::string subject_id_;
    int label_;
    double sample_rate_;
    std::vector<std::string> channel_names_;
    Eigen::MatrixXd samples_;
};

/// Half-open span [start, start + duration) of a source recording.
struct Segment {
    double start_s = 0.0;
    double duration_s = 0.0;
    const Recording* source = nullptr;
};

/// One second-order section, direct form II transposed:
///   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct Biquad {
    double b0, b1, b2;
    double a1, a2;
};

/// Butterworth band-pass design: analog prototype poles, lowpass-to-bandpass
/// transform, bilinear transform with frequency prewarping, grouped into
/// `order` second-order sections with unit gain at the (prewarped) geometric
/// band center.
std::vector<Biquad> design_butterworth_bandpass(double low_hz, double high_hz, double rate_hz,
                                                int order = 5);

/// Causal (forward-only) cascade filtering, zero initial state.
std::vector<double> apply_sos(const std::vector<Biquad>& sos, const std::vector<double>& x);

/// Per-channel causal band-pass; metadata and shape preserved.
Recording butterworth_bandpass(const Recording& rec, const BandSpec& band, int order = 5);

/// Fixed-size segmentation: starts at multiples of window*(1-overlap),
/// duration = window, trailing partial window discarded.
/// count = floor((L - window) / (window*(1-overlap))) + 1.
std::vector<Segment> fixed_segments(const Recording& rec, double window_s, double overlap);

struct CovarianceDiagnostics {
    bool regularized = false;
};

/// Sample covariance C = (1/(n-1)) E E^T over the segment's sample block,
/// per-channel mean subtracted first iff `center`. Results failing SPD
/// validation are routed through regularize_spd(., eps) and flagged.
SpdMatrix segment_covariance(const Segment& seg, bool center = false, double eps = 1e-6,
                             CovarianceDiagnostics* diag = nullptr);

} // namespace micov
