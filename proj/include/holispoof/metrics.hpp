#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "holispoof/annotation.hpp"

namespace holispoof {

// One binary detection trial. `score` is the model's realness score for the
// sample (any finite real; only the ordering matters) and `is_real` is the
// reference label.
struct DetectionTrial {
  double score = 0.0;
  bool is_real = false;
};

// Fraction of trials where the predicted label equals the reference label.
// Throws LengthMismatch when the vectors differ in size and EmptyInput when
// both are empty.
double accuracy(const std::vector<Label>& predicted,
                const std::vector<Label>& reference);

// Two-class softmax probability of the "real" class, computed with the max
// subtracted before exponentiation so that large logits do not overflow.
// normalize_logits(x + c, y + c) equals normalize_logits(x, y) up to
// rounding, and normalize_logits(0, 0) is exactly 0.5. Throws NonFiniteLogit
// on NaN or infinite input.
double normalize_logits(double logit_real, double logit_fake);

// Equal error rate of a realness score. A trial is accepted as real at
// threshold t when score >= t, so
//   FAR(t) = #{fake trials with score >= t} / #fakes
//   FRR(t) = #{real trials with score <  t} / #reals
// FAR - FRR is swept over the sorted unique observed scores plus a sentinel
// above the maximum. At the first threshold where the difference reaches
// zero the common value is returned; where it crosses below zero without
// touching it, the rate is interpolated linearly between the two adjacent
// operating points. The result depends only on the ordering of scores, so
// any strictly increasing transform of the scores leaves it bit-identical.
// Throws EmptyInput when there are no trials and SingleClassInput when all
// trials share one label.
double equal_error_rate(const std::vector<DetectionTrial>& trials);

// Spoof method classification with text-to-speech and voice conversion
// scored as one synthesis class. Reference entries labelled unknown are
// excluded together with their predictions before counting. A prediction of
// nullopt or unknown belongs to no class and can only produce a false
// negative for the reference class. The macro average runs over the classes
// that appear in the retained predictions or references. Throws
// LengthMismatch on size disagreement and NoEligibleSamples when every
// reference is unknown or the input is empty.
double method_macro_f1(const std::vector<std::optional<SpoofMethod>>& predicted,
                       const std::vector<SpoofMethod>& reference);

// Fixed-resolution segmentation of [0, duration_s) into segments
// [k*r, (k+1)*r). The final segment may extend past duration_s; it is kept
// whole. Segment k is marked when some region overlaps it with positive
// measure, i.e. min(end, (k+1)*r) - max(start, k*r) > 0; touching at a
// boundary does not mark. Throws InvariantViolation unless duration_s and
// resolution_s are positive and finite.
std::vector<bool> rasterize_regions(const std::vector<TimeInterval>& regions,
                                    double duration_s, double resolution_s);

struct SegmentCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  SegmentCounts& operator+=(const SegmentCounts& other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    return *this;
  }
};

// Per-segment confusion counts between two marks vectors of equal length.
// Throws LengthMismatch otherwise.
SegmentCounts segment_counts(const std::vector<bool>& predicted,
                             const std::vector<bool>& reference);

// F1 = 2*tp / (2*tp + fp + fn). When all three counts are zero both sides
// agree that nothing is spoofed, which scores 1.0.
double segment_f1(const SegmentCounts& counts);

// Convenience wrapper: rasterize both region lists over the same grid and
// score the marks.
double segment_f1(const std::vector<TimeInterval>& predicted,
                  const std::vector<TimeInterval>& reference,
                  double duration_s, double resolution_s);

// Mean of exactly three judge scores, each an integer in [1, 5]. Throws
// WrongArity on any other count and ScoreOutOfRange on an out-of-range
// score.
double judge_aggregate(const std::vector<int>& scores);

}  // namespace holispoof
