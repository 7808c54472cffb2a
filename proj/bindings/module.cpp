#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holispoof/adapter_math.hpp"
#include "holispoof/annotation.hpp"
#include "holispoof/audio.hpp"
#include "holispoof/errors.hpp"
#include "holispoof/evaluate.hpp"
#include "holispoof/manifest.hpp"
#include "holispoof/metrics.hpp"
#include "holispoof/mixer.hpp"
#include "holispoof/version.hpp"

namespace py = pybind11;

namespace {

using holispoof::AnalysisRecord;
using holispoof::TimeInterval;

std::vector<TimeInterval> intervals_from_pairs(
    const std::vector<std::pair<double, double>>& pairs) {
  std::vector<TimeInterval> regions;
  regions.reserve(pairs.size());
  for (const auto& [start, end] : pairs) regions.push_back({start, end});
  return regions;
}

std::vector<std::pair<double, double>> pairs_from_intervals(
    const std::vector<TimeInterval>& regions) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(regions.size());
  for (const auto& region : regions) pairs.emplace_back(region.start_s, region.end_s);
  return pairs;
}

py::dict record_to_dict(const AnalysisRecord& record) {
  py::dict d;
  d["real_or_fake"] = holispoof::to_string(record.authenticity);
  if (record.method) d["spoof_method"] = holispoof::to_string(*record.method);
  py::list regions;
  for (const auto& region : record.regions)
    regions.append(py::make_tuple(region.start_s, region.end_s));
  d["spoof_regions"] = std::move(regions);
  if (record.semantic_influence) d["semantic_influence"] = *record.semantic_influence;
  return d;
}

AnalysisRecord record_from_parts(
    const std::string& real_or_fake, const std::optional<std::string>& spoof_method,
    const std::vector<std::pair<double, double>>& spoof_regions,
    const std::optional<std::string>& semantic_influence) {
  AnalysisRecord record;
  const auto label = holispoof::parse_label(real_or_fake);
  if (!label)
    holispoof::raise(holispoof::ErrorCode::InconsistentRecord,
                     "unrecognized authenticity label: " + real_or_fake);
  record.authenticity = *label;
  if (spoof_method) {
    const auto method = holispoof::parse_method(*spoof_method);
    if (!method)
      holispoof::raise(holispoof::ErrorCode::InconsistentRecord,
                       "unrecognized spoof method: " + *spoof_method);
    record.method = method;
  }
  record.regions = intervals_from_pairs(spoof_regions);
  record.semantic_influence = semantic_influence;
  return record;
}

std::vector<std::optional<holispoof::SpoofMethod>> methods_from_names(
    const std::vector<std::optional<std::string>>& names) {
  std::vector<std::optional<holispoof::SpoofMethod>> methods;
  methods.reserve(names.size());
  for (const auto& name : names) {
    if (!name) {
      methods.emplace_back(std::nullopt);
      continue;
    }
    methods.push_back(holispoof::parse_method(*name));
  }
  return methods;
}

holispoof::DenseMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty())
    holispoof::raise(holispoof::ErrorCode::DimensionMismatch, "matrix must be non-empty");
  holispoof::DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols)
      holispoof::raise(holispoof::ErrorCode::DimensionMismatch,
                       "ragged matrix: row " + std::to_string(i));
    for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> rows_from_matrix(const holispoof::DenseMatrix& m) {
  std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) rows[i][j] = m.at(i, j);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "holistic speech anti-spoofing core: structured-analysis parsing, "
            "detection metrics, dataset mixing, adapter merging, audio splicing";
  m.attr("__version__") = holispoof::kVersion;

  py::register_exception<holispoof::Error>(m, "HolispoofError", PyExc_ValueError);

  m.def(
      "parse_analysis",
      [](const std::string& raw_text) {
        return record_to_dict(holispoof::parse_analysis(raw_text));
      },
      py::arg("raw_text"),
      "Extract the structured analysis object from raw model output.");

  m.def(
      "serialize_analysis",
      [](const std::string& real_or_fake, const std::optional<std::string>& spoof_method,
         const std::vector<std::pair<double, double>>& spoof_regions,
         const std::optional<std::string>& semantic_influence) {
        return holispoof::serialize_analysis(record_from_parts(
            real_or_fake, spoof_method, spoof_regions, semantic_influence));
      },
      py::arg("real_or_fake"), py::arg("spoof_method") = std::nullopt,
      py::arg("spoof_regions") = std::vector<std::pair<double, double>>{},
      py::arg("semantic_influence") = std::nullopt,
      "Canonical single-line JSON for one analysis record.");

  m.def("normalize_logits", &holispoof::normalize_logits, py::arg("logit_real"),
        py::arg("logit_fake"), "Two-class softmax probability of the real class.");

  m.def(
      "equal_error_rate",
      [](const std::vector<double>& scores, const std::vector<bool>& is_real) {
        if (scores.size() != is_real.size())
          holispoof::raise(holispoof::ErrorCode::LengthMismatch,
                           "scores and labels differ in length");
        std::vector<holispoof::DetectionTrial> trials(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i)
          trials[i] = {scores[i], is_real[i]};
        return holispoof::equal_error_rate(trials);
      },
      py::arg("scores"), py::arg("is_real"),
      "Equal error rate of realness scores against boolean reference labels.");

  m.def(
      "segment_f1",
      [](const std::vector<std::pair<double, double>>& predicted,
         const std::vector<std::pair<double, double>>& reference, double duration_s,
         double resolution_s) {
        return holispoof::segment_f1(intervals_from_pairs(predicted),
                                     intervals_from_pairs(reference), duration_s,
                                     resolution_s);
      },
      py::arg("predicted"), py::arg("reference"), py::arg("duration_s"),
      py::arg("resolution_s") = 0.2,
      "Segment-level F1 between predicted and reference spoofed regions.");

  m.def(
      "method_macro_f1",
      [](const std::vector<std::optional<std::string>>& predicted,
         const std::vector<std::string>& reference) {
        std::vector<holispoof::SpoofMethod> refs;
        refs.reserve(reference.size());
        for (const auto& name : reference) {
          const auto method = holispoof::parse_method(name);
          if (!method)
            holispoof::raise(holispoof::ErrorCode::InconsistentRecord,
                             "unrecognized spoof method: " + name);
          refs.push_back(*method);
        }
        return holispoof::method_macro_f1(methods_from_names(predicted), refs);
      },
      py::arg("predicted"), py::arg("reference"),
      "Macro F1 over spoof method classes; None predictions score no class.");

  m.def("judge_aggregate", &holispoof::judge_aggregate, py::arg("scores"),
        "Mean of exactly three integer judge scores in [1, 5].");

  m.def(
      "dora_merge",
      [](const std::vector<std::vector<double>>& base,
         const std::vector<std::vector<double>>& up,
         const std::vector<std::vector<double>>& down,
         const std::vector<double>& magnitude) {
        holispoof::DoraParams params{matrix_from_rows(base), matrix_from_rows(up),
                                     matrix_from_rows(down), magnitude};
        return rows_from_matrix(holispoof::dora_merge(params));
      },
      py::arg("base"), py::arg("up"), py::arg("down"), py::arg("magnitude"),
      "Merge a low-rank adapter: per-column unit direction times magnitude.");

  m.def(
      "stratified_sample",
      [](const std::vector<std::string>& manifest_lines, std::uint64_t cap,
         std::uint64_t seed) {
        std::vector<holispoof::ManifestEntry> pool;
        pool.reserve(manifest_lines.size());
        for (const auto& line : manifest_lines)
          pool.push_back(holispoof::manifest_entry_from_json(line));
        const auto selected = holispoof::stratified_sample(pool, cap, seed);
        std::vector<std::string> out;
        out.reserve(selected.size());
        for (const auto& entry : selected)
          out.push_back(holispoof::manifest_entry_to_json(entry));
        return out;
      },
      py::arg("manifest_lines"), py::arg("cap"), py::arg("seed"),
      "Label-stratified sample of manifest JSON lines, deterministic per seed.");

  m.def(
      "splice_wav",
      [](const std::vector<py::bytes>& parts, std::size_t target_idx,
         const py::bytes& replacement) {
        std::vector<holispoof::Waveform> waves;
        waves.reserve(parts.size());
        for (const auto& part : parts) {
          const std::string raw(part);
          waves.push_back(holispoof::decode_wav(
              std::vector<std::uint8_t>(raw.begin(), raw.end())));
        }
        const std::string raw(replacement);
        const auto new_wave =
            holispoof::decode_wav(std::vector<std::uint8_t>(raw.begin(), raw.end()));
        const auto result = holispoof::splice_replace(waves, target_idx, new_wave);
        const auto encoded = holispoof::encode_wav(result.waveform);
        return py::make_tuple(
            py::bytes(reinterpret_cast<const char*>(encoded.data()), encoded.size()),
            pairs_from_intervals(result.spoofed_regions));
      },
      py::arg("parts"), py::arg("target_idx"), py::arg("replacement"),
      "Concatenate WAV parts with one replaced; returns (wav_bytes, regions).");

  m.def(
      "wav_info",
      [](const py::bytes& wav) {
        const std::string raw(wav);
        const auto wave =
            holispoof::decode_wav(std::vector<std::uint8_t>(raw.begin(), raw.end()));
        return py::make_tuple(wave.sample_rate_hz, wave.samples.size(),
                              wave.duration_s());
      },
      py::arg("wav"), "Decode WAV bytes into (sample_rate, n_samples, duration_s).");
}
