#include "micov/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace micov {

namespace {

void require_band(const BandSpec& band, double rate_hz) {
    if (!(band.low_hz > 0.0) || !(band.high_hz > band.low_hz) ||
        !(band.high_hz < rate_hz / 2.0)) {
        std::ostringstream msg;
        msg << "band '" << band.name << "' [" << band.low_hz << ", " << band.high_hz
            << "] Hz violates 0 < low < high < rate/2 for rate " << rate_hz << " Hz";
        throw ConfigError(msg.str());
    }
}

Eigen::Index segment_first_sample(const Segment& seg) {
    return static_cast<Eigen::Index>(std::llround(seg.start_s * seg.source->sample_rate()));
}

Eigen::Index segment_sample_count(const Segment& seg) {
    return static_cast<Eigen::Index>(std::llround(seg.duration_s * seg.source->sample_rate()));
}

} // namespace

std::vector<BandSpec> standard_bands() {
    return {{"theta", 3.0, 8.0},
            {"alpha", 8.0, 12.0},
            {"beta", 12.0, 28.0},
            {"gamma", 28.0, 50.0},
            {"3-50Hz", 3.0, 50.0}};
}

Recording::Recording(std::string subject_id, int label, double sample_rate,
                     std::vector<std::string> channel_names, Eigen::MatrixXd samples)
    : subject_id_(std::move(subject_id)),
      label_(label),
      sample_rate_(sample_rate),
      channel_names_(std::move(channel_names)),
      samples_(std::move(samples)) {
    if (samples_.rows() < 2) {
        throw std::invalid_argument("Recording: needs at least 2 channels");
    }
    if (samples_.cols() < 2) {
        throw std::invalid_argument("Recording: needs at least 2 samples");
    }
    if (static_cast<Eigen::Index>(channel_names_.size()) != samples_.rows()) {
        throw std::invalid_argument("Recording: channel name count does not match sample rows");
    }
    if (!(sample_rate_ > 0.0)) {
        throw std::invalid_argument("Recording: sample rate must be positive");
    }
    if (!samples_.allFinite()) {
        throw std::invalid_argument("Recording: non-finite sample values");
    }
    if (label_ != 1 && label_ != -1) {
        throw std::invalid_argument("Recording: label must be +1 or -1");
    }
}

Recording Recording::with_samples(Eigen::MatrixXd samples) const {
    return Recording(subject_id_, label_, sample_rate_, channel_names_, std::move(samples));
}

Recording Recording::without_channels(const std::vector<std::string>& names) const {
    const std::unordered_set<std::string> drop(names.begin(), names.end());
    std::vector<Eigen::Index> keep;
    std::vector<std::string> kept_names;
    for (Eigen::Index ch = 0; ch < n_channels(); ++ch) {
        if (!drop.contains(channel_names_[static_cast<std::size_t>(ch)])) {
            keep.push_back(ch);
            kept_names.push_back(channel_names_[static_cast<std::size_t>(ch)]);
        }
    }
    Eigen::MatrixXd kept(static_cast<Eigen::Index>(keep.size()), n_samples());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        kept.row(static_cast<Eigen::Index>(r)) = samples_.row(keep[r]);
    }
    return Recording(subject_id_, label_, sample_rate_, std::move(kept_names), std::move(kept));
}

std::vector<Biquad> design_butterworth_bandpass(double low_hz, double high_hz, double rate_hz,
                                                int order) {
    require_band({"", low_hz, high_hz}, rate_hz);
    if (order < 1) {
        throw ConfigError("Butterworth order must be >= 1");
    }
    using cd = std::complex<double>;
    const double fs2 = 2.0 * rate_hz;
    const double w1 = fs2 * std::tan(std::numbers::pi * low_hz / rate_hz);
    const double w2 = fs2 * std::tan(std::numbers::pi * high_hz / rate_hz);
    const double w0sq = w1 * w2;
    const double bw = w2 - w1;

    // Analog unit-cutoff prototype poles, left half plane.
    std::vector<cd> digital_poles;
    for (int k = 0; k < order; ++k) {
        const double theta =
            std::numbers::pi * static_cast<double>(2 * k + order + 1) / (2.0 * order);
        const cd proto(std::cos(theta), std::sin(theta));
        // Lowpass-to-bandpass: s^2 - bw*p*s + w0^2 = 0.
        const cd bp = bw * proto;
        const cd disc = std::sqrt(bp * bp - 4.0 * w0sq);
        for (const cd s : {0.5 * (bp + disc), 0.5 * (bp - disc)}) {
            digital_poles.push_back((fs2 + s) / (fs2 - s));
        }
    }

    // Group into real-coefficient sections: conjugate pairs from the
    // upper-half-plane poles, leftover real poles paired in sorted order.
    std::vector<cd> upper;
    std::vector<double> real_poles;
    constexpr double kImagTol = 1e-9;
    for (const cd p : digital_poles) {
        if (p.imag() > kImagTol) {
            upper.push_back(p);
        } else if (p.imag() >= -kImagTol) {
            real_poles.push_back(p.real());
        }
    }
    auto by_position = [](const cd a, const cd b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(upper.begin(), upper.end(), by_position);
    std::sort(real_poles.begin(), real_poles.end());

    std::vector<Biquad> sos;
    for (const cd p : upper) {
        sos.push_back({1.0, 0.0, -1.0, -2.0 * p.real(), std::norm(p)});
    }
    for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2) {
        sos.push_back({1.0, 0.0, -1.0, -(real_poles[i] + real_poles[i + 1]),
                       real_poles[i] * real_poles[i + 1]});
    }
    if (sos.size() != static_cast<std::size_t>(order)) {
        throw NumericalError("Butterworth design: pole pairing failed");
    }
    for (const Biquad& s : sos) {
        if (!(s.a2 < 1.0)) {
            throw NumericalError("Butterworth design: unstable section");
        }
    }

    // Unit gain at the digital frequency that prewarps to the analog center.
    const double wc = 2.0 * std::atan(std::sqrt(w0sq) / fs2);
    const cd z = std::polar(1.0, wc);
    const cd z2 = z * z;
    cd h(1.0, 0.0);
    for (const Biquad& s : sos) {
        h *= (s.b0 * z2 + s.b1 * z + s.b2) / (z2 + s.a1 * z + s.a2);
    }
    const double section_gain = std::pow(1.0 / std::abs(h), 1.0 / static_cast<double>(order));
    for (Biquad& s : sos) {
        s.b0 *= section_gain;
        s.b1 *= section_gain;
        s.b2 *= section_gain;
    }
    return sos;
}

std::vector<double> apply_sos(const std::vector<Biquad>& sos, const std::vector<double>& x) {
    std::vector<double> y = x;
    for (const Biquad& s : sos) {
        double z1 = 0.0;
        double z2 = 0.0;
        for (double& v : y) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
    return y;
}

Recording butterworth_bandpass(const Recording& rec, const BandSpec& band, int order) {
    require_band(band, rec.sample_rate());
    const std::vector<Biquad> sos =
        design_butterworth_bandpass(band.low_hz, band.high_hz, rec.sample_rate(), order);
    Eigen::MatrixXd out(rec.n_channels(), rec.n_samples());
    std::vector<double> channel(static_cast<std::size_t>(rec.n_samples()));
    for (Eigen::Index ch = 0; ch < rec.n_channels(); ++ch) {
        for (Eigen::Index t = 0; t < rec.n_samples(); ++t) {
            channel[static_cast<std::size_t>(t)] = rec.samples()(ch, t);
        }
        const std::vector<double> filtered = apply_sos(sos, channel);
        for (Eigen::Index t = 0; t < rec.n_samples(); ++t) {
            out(ch, t) = filtered[static_cast<std::size_t>(t)];
        }
    }
    return rec.with_samples(std::move(out));
}

std::vector<Segment> fixed_segments(const Recording& rec, double window_s, double overlap) {
    if (!(window_s > 0.0)) {
        throw ConfigError("fixed_segments: window must be positive");
    }
    if (!(overlap >= 0.0 && overlap < 1.0)) {
        throw ConfigError("fixed_segments: overlap must lie in [0, 1)");
    }
    const Eigen::Index n = rec.n_samples();
    const Eigen::Index wn = static_cast<Eigen::Index>(std::llround(window_s * rec.sample_rate()));
    if (wn > n) {
        std::ostringstream msg;
        msg << "fixed_segments: window " << window_s << " s exceeds recording length "
            << rec.duration_s() << " s";
        throw ConfigError(msg.str());
    }
    const Eigen::Index stride = std::max<Eigen::Index>(
        1, static_cast<Eigen::Index>(std::llround(window_s * (1.0 - overlap) * rec.sample_rate())));
    std::vector<Segment> segments;
    for (Eigen::Index start = 0; start + wn <= n; start += stride) {
        segments.push_back({static_cast<double>(start) / rec.sample_rate(), window_s, &rec});
    }
    return segments;
}

SpdMatrix segment_covariance(const Segment& seg, bool center, double eps,
                             CovarianceDiagnostics* diag) {
    if (seg.source == nullptr) {
        throw std::invalid_argument("segment_covariance: segment has no source recording");
    }
    const Recording& rec = *seg.source;
    const Eigen::Index first = segment_first_sample(seg);
    const Eigen::Index count = segment_sample_count(seg);
    if (count < 2) {
        throw std::invalid_argument("segment_covariance: segment spans fewer than 2 samples");
    }
    if (first < 0 || first + count > rec.n_samples()) {
        throw std::invalid_argument("segment_covariance: segment exceeds recording bounds");
    }
    Eigen::MatrixXd block = rec.samples().middleCols(first, count);
    if (center) {
        const Eigen::VectorXd mean = block.rowwise().mean();
        block.colwise() -= mean;
    }
    Eigen::MatrixXd cov = block * block.transpose() / static_cast<double>(count - 1);
    cov = 0.5 * (cov + cov.transpose());
    if (SpdMatrix::is_valid(cov)) {
        return SpdMatrix(std::move(cov));
    }
    if (diag != nullptr) {
        diag->regularized = true;
    }
    return regularize_spd(SymMatrix(std::move(cov)), eps);
}

} // namespace micov
