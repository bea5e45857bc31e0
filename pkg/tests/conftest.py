"""Shared fixtures: cached pipeline runs for the recurring test corpus."""

import pytest

from sharpmin.cli import RunConfig, run

_CACHE = {}


def corpus_run(function_text, model_kind="smooth", **kwargs):
    key = (function_text, model_kind, tuple(sorted(kwargs.items())))
    if key not in _CACHE:
        _CACHE[key] = run(RunConfig(function_text=function_text,
                                    model_kind=model_kind, **kwargs))
    return _CACHE[key]


@pytest.fixture
def analyze():
    return corpus_run
