#include "holispoof/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "holispoof/errors.hpp"

namespace holispoof {

double accuracy(const std::vector<Label>& predicted,
                const std::vector<Label>& reference) {
  if (predicted.size() != reference.size())
    raise(ErrorCode::LengthMismatch,
          "prediction and reference label counts differ");
  if (predicted.empty())
    raise(ErrorCode::EmptyInput, "no labelled samples to score");
  size_t hits = 0;
  for (size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == reference[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

double normalize_logits(double logit_real, double logit_fake) {
  if (!std::isfinite(logit_real) || !std::isfinite(logit_fake))
    raise(ErrorCode::NonFiniteLogit, "logits must be finite");
  const double m = std::max(logit_real, logit_fake);
  const double er = std::exp(logit_real - m);
  const double ef = std::exp(logit_fake - m);
  return er / (er + ef);
}

double equal_error_rate(const std::vector<DetectionTrial>& trials) {
  if (trials.empty()) raise(ErrorCode::EmptyInput, "no detection trials");
  std::vector<double> reals, fakes;
  for (const auto& trial : trials) {
    if (!std::isfinite(trial.score))
      raise(ErrorCode::NonFiniteLogit, "detection scores must be finite");
    (trial.is_real ? reals : fakes).push_back(trial.score);
  }
  if (reals.empty() || fakes.empty())
    raise(ErrorCode::SingleClassInput,
          "equal error rate needs both real and fake trials");
  std::sort(reals.begin(), reals.end());
  std::sort(fakes.begin(), fakes.end());

  std::vector<double> thresholds;
  thresholds.reserve(trials.size() + 1);
  thresholds.insert(thresholds.end(), reals.begin(), reals.end());
  thresholds.insert(thresholds.end(), fakes.begin(), fakes.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  const double real_n = static_cast<double>(reals.size());
  const double fake_n = static_cast<double>(fakes.size());
  // At the smallest observed score FAR - FRR is exactly 1 - 0, and at the
  // sentinel above the maximum it is 0 - 1, so the sweep always crosses zero.
  double prev_far = 1.0, prev_frr = 0.0;
  for (const double threshold : thresholds) {
    const auto fake_below =
        std::lower_bound(fakes.begin(), fakes.end(), threshold);
    const auto real_below =
        std::lower_bound(reals.begin(), reals.end(), threshold);
    const double far =
        static_cast<double>(fakes.end() - fake_below) / fake_n;
    const double frr =
        static_cast<double>(real_below - reals.begin()) / real_n;
    const double diff = far - frr;
    if (diff == 0.0) return far;
    if (diff < 0.0) {
      const double prev_diff = prev_far - prev_frr;
      const double t = prev_diff / (prev_diff - diff);
      return prev_far + t * (far - prev_far);
    }
    prev_far = far;
    prev_frr = frr;
  }
  raise(ErrorCode::InvariantViolation,
        "equal error rate sweep finished without crossing zero");
}

namespace {

enum class MethodClass {
  synthesis,
  cut_and_paste,
  speech_editing,
  vocoder_resynthesis,
  codec_resynthesis,
};

std::optional<MethodClass> effective_class(SpoofMethod method) {
  switch (method) {
    case SpoofMethod::tts:
    case SpoofMethod::vc:
      return MethodClass::synthesis;
    case SpoofMethod::cut_and_paste: return MethodClass::cut_and_paste;
    case SpoofMethod::speech_editing: return MethodClass::speech_editing;
    case SpoofMethod::vocoder_resynthesis:
      return MethodClass::vocoder_resynthesis;
    case SpoofMethod::codec_resynthesis:
      return MethodClass::codec_resynthesis;
    case SpoofMethod::unknown: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

double method_macro_f1(const std::vector<std::optional<SpoofMethod>>& predicted,
                       const std::vector<SpoofMethod>& reference) {
  if (predicted.size() != reference.size())
    raise(ErrorCode::LengthMismatch,
          "prediction and reference method counts differ");

  struct Counts {
    std::uint64_t tp = 0, fp = 0, fn = 0;
  };
  std::map<MethodClass, Counts> counts;
  size_t retained = 0;
  for (size_t i = 0; i < reference.size(); ++i) {
    const auto ref_class = effective_class(reference[i]);
    if (!ref_class.has_value()) continue;
    ++retained;
    std::optional<MethodClass> pred_class;
    if (predicted[i].has_value()) pred_class = effective_class(*predicted[i]);
    if (pred_class == ref_class) {
      ++counts[*ref_class].tp;
    } else {
      ++counts[*ref_class].fn;
      if (pred_class.has_value()) ++counts[*pred_class].fp;
    }
  }
  if (retained == 0)
    raise(ErrorCode::NoEligibleSamples,
          "no reference sample carries a scoreable spoof method");

  double sum = 0.0;
  for (const auto& [cls, c] : counts) {
    const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
    sum += denom == 0.0 ? 0.0 : static_cast<double>(2 * c.tp) / denom;
  }
  return sum / static_cast<double>(counts.size());
}

std::vector<bool> rasterize_regions(const std::vector<TimeInterval>& regions,
                                    double duration_s, double resolution_s) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    raise(ErrorCode::InvariantViolation, "duration must be positive and finite");
  if (!(resolution_s > 0.0) || !std::isfinite(resolution_s))
    raise(ErrorCode::InvariantViolation,
          "resolution must be positive and finite");

  // Smallest n with n * resolution >= duration, so the final segment may run
  // past the end of the audio but is never dropped.
  size_t n = static_cast<size_t>(duration_s / resolution_s);
  while (static_cast<double>(n) * resolution_s < duration_s) ++n;

  std::vector<bool> marks(n, false);
  for (const auto& region : regions) {
    for (size_t k = 0; k < n; ++k) {
      const double seg_start = static_cast<double>(k) * resolution_s;
      const double seg_end = static_cast<double>(k + 1) * resolution_s;
      const double overlap = std::min(region.end_s, seg_end) -
                             std::max(region.start_s, seg_start);
      if (overlap > 0.0) marks[k] = true;
    }
  }
  return marks;
}

SegmentCounts segment_counts(const std::vector<bool>& predicted,
                             const std::vector<bool>& reference) {
  if (predicted.size() != reference.size())
    raise(ErrorCode::LengthMismatch,
          "prediction and reference segment grids differ in length");
  SegmentCounts counts;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] && reference[i]) ++counts.tp;
    else if (predicted[i]) ++counts.fp;
    else if (reference[i]) ++counts.fn;
  }
  return counts;
}

double segment_f1(const SegmentCounts& counts) {
  const std::uint64_t denom = 2 * counts.tp + counts.fp + counts.fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(2 * counts.tp) / static_cast<double>(denom);
}

double segment_f1(const std::vector<TimeInterval>& predicted,
                  const std::vector<TimeInterval>& reference,
                  double duration_s, double resolution_s) {
  return segment_f1(
      segment_counts(rasterize_regions(predicted, duration_s, resolution_s),
                     rasterize_regions(reference, duration_s, resolution_s)));
}

double judge_aggregate(const std::vector<int>& scores) {
  if (scores.size() != 3)
    raise(ErrorCode::WrongArity, "judge aggregation expects exactly 3 scores");
  int sum = 0;
  for (const int s : scores) {
    if (s < 1 || s > 5)
      raise(ErrorCode::ScoreOutOfRange,
            "judge scores must be integers between 1 and 5");
    sum += s;
  }
  return static_cast<double>(sum) / 3.0;
}

}  // namespace holispoof
