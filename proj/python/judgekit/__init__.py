"""Offensive-language judge orchestration and agreement auditing."""

from ._core import (
    JudgekitError,
    codepoint_count,
    evaluate_metrics,
    ground_trust,
    krippendorff_alpha,
    load_corpus,
    load_labels,
    loo_deltas,
    majority_vote,
    overlap_ratio,
    parse_verdict,
    pej_aggregate,
    render_prompt,
)

__all__ = [
    "JudgekitError",
    "codepoint_count",
    "evaluate_metrics",
    "ground_trust",
    "krippendorff_alpha",
    "load_corpus",
    "load_labels",
    "loo_deltas",
    "majority_vote",
    "overlap_ratio",
    "parse_verdict",
    "pej_aggregate",
    "render_prompt",
]
