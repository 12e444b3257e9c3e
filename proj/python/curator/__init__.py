"""Snippet complexity scoring and labeling-set curation."""

import json
import os

from ._core import (
    DomainError,
    InputError,
    dissimilarity,
    gaussian_entropy,
    polyline_complexity,
    run,
)
from . import _core

__all__ = [
    "DomainError",
    "InputError",
    "curate",
    "dissimilarity",
    "gaussian_entropy",
    "polyline_complexity",
    "run",
    "schema",
]


def schema():
    """Feature names of the snippet and frame vectors, in column order."""
    return json.loads(_core.schema_json())


def curate(features_dir, config=None, jobs=0):
    """Runs curation over a scored features directory and returns the result dict."""
    config_json = "" if config is None else json.dumps(config)
    return json.loads(_core.curate_json(os.fspath(features_dir), config_json, jobs))
