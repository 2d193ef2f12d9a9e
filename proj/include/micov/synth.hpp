#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "micov/bag.hpp"
#include "micov/rng.hpp"
#include "micov/signal.hpp"
#include "micov/spd.hpp"

namespace micov {

/// One scripted stationary stretch of a synthetic recording.
struct Regime {
    SpdMatrix covariance;
    double duration_s;
    ConceptLabel concept_label;
};

struct RegimeScript {
    std::vector<Regime> regimes;
};

/// Cohort generator configuration. Positive subjects draw at least one
/// regime from `positive_concepts`; negative subjects draw all regimes from
/// `distractor_concepts`.
struct SynthConfig {
    Eigen::Index channels = 8;
    double sample_rate_hz = 128.0;
    std::vector<SpdMatrix> positive_concepts;
    std::vector<SpdMatrix> distractor_concepts;
    int min_regimes = 5;
    int max_regimes = 8;
    double min_duration_s = 4.0;
    double max_duration_s = 8.0;
    int min_positive_regimes = 1;
    int max_positive_regimes = 1;
    std::uint64_t seed = 0;
};

/// Exact per-subject ground truth: interior regime boundaries in seconds
/// (computed from the realized sample counts) and per-regime concept labels.
struct SubjectTruth {
    std::vector<double> cut_times_s;
    std::vector<ConceptLabel> instance_labels;
};

/// i.i.d. zero-mean Gaussian block (channels x n) with the prescribed
/// covariance, generated through its Cholesky factor. Deterministic given
/// the generator state.
Eigen::MatrixXd sample_regime(const SpdMatrix& cov, double duration_s, double rate_hz, Rng& rng);

/// Builds one subject from a per-subject stream. Adjacent regimes draw
/// distinct concepts whenever alternatives exist, so every scripted
/// boundary is a genuine covariance change.
std::pair<Recording, SubjectTruth> make_synthetic_subject(int label, const SynthConfig& cfg,
                                                          std::uint64_t subject_seed,
                                                          const std::string& subject_id);

/// Additive per-channel white Gaussian noise at the requested SNR (dB),
/// signal power measured per channel as the mean squared amplitude.
/// An infinite snr_db returns the recording unchanged.
Recording add_white_noise(const Recording& rec, double snr_db, Rng& rng);

struct SynthDataset {
    std::vector<Recording> recordings;
    std::vector<SubjectTruth> truths;
};

/// Balanced cohort; subject k uses the derived stream (cfg.seed, k), so the
/// dataset is a pure function of the config.
SynthDataset make_dataset(int n_pos, int n_neg, const SynthConfig& cfg);

/// Bag whose instances are the covariances of the true regime spans, with
/// the hidden concept labels attached. Ground-truth counterpart of make_bag.
Bag truth_bag(const Recording& rec, const SubjectTruth& truth, bool center = false,
              double eps = 1e-6);

struct ConceptSet {
    std::vector<SpdMatrix> positive;
    std::vector<SpdMatrix> distractors;
};

/// Concept geometry used by the default cohorts: positive concepts at
/// affine-invariant distance >= min_positive_dist from every distractor,
/// distractors mutually >= min_distractor_dist apart. Built on a shared
/// random eigenbasis so the pairwise distances are exact log-space norms.
ConceptSet make_default_concepts(Eigen::Index dim, int n_positive, int n_distractor, Rng& rng,
                                 double min_positive_dist = 3.0,
                                 double min_distractor_dist = 1.0);

/// Default 8-channel, 128 Hz cohort configuration with 1 positive and 4
/// distractor concepts derived from `seed`.
SynthConfig make_default_synth_config(std::uint64_t seed, Eigen::Index channels = 8,
                                      int n_positive = 1, int n_distractor = 4);

} // namespace micov
