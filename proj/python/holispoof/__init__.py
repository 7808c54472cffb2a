"""Holistic speech anti-spoofing toolkit: structured-analysis parsing,
detection metrics, dataset mixing, adapter merging, and audio splicing."""

from ._core import (
    HolispoofError,
    __version__,
    dora_merge,
    equal_error_rate,
    judge_aggregate,
    method_macro_f1,
    normalize_logits,
    parse_analysis,
    segment_f1,
    serialize_analysis,
    splice_wav,
    stratified_sample,
    wav_info,
)

__all__ = [
    "HolispoofError",
    "__version__",
    "dora_merge",
    "equal_error_rate",
    "judge_aggregate",
    "method_macro_f1",
    "normalize_logits",
    "parse_analysis",
    "segment_f1",
    "serialize_analysis",
    "splice_wav",
    "stratified_sample",
    "wav_info",
]
