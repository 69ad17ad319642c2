"""Rule-based question generation from annotated sentences."""

import os as _os

from ._core import (
    Annotator as _Annotator,
    InputError,
    RuleError,
    RuleStore,
    Sentence,
    generate,
    layer_match,
    load_annotations,
    metrics,
    rate,
    similarity,
    split_sentences,
    train,
)

_PACKAGE_DATA = _os.path.join(_os.path.dirname(__file__), "data")


def Annotator(data_dir=None, fixtures=()):
    """Built-in annotators; uses the tables shipped with the package unless told otherwise."""
    if data_dir is None:
        data_dir = _PACKAGE_DATA if _os.path.isdir(_PACKAGE_DATA) else ""
    return _Annotator(data_dir, list(fixtures))


__all__ = [
    "Annotator",
    "InputError",
    "RuleError",
    "RuleStore",
    "Sentence",
    "generate",
    "layer_match",
    "load_annotations",
    "metrics",
    "rate",
    "similarity",
    "split_sentences",
    "train",
]
