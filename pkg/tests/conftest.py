from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from tensor_ideals.fileio import PRESET_NAMES, load_preset
from tensor_ideals.presentation import CategoryPresentation

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=PRESET_NAMES)
def preset(request) -> CategoryPresentation:
    return load_preset(request.param)


@pytest.fixture
def nilpotent_proj() -> CategoryPresentation:
    """Unit plus a square-zero projective-injective label: P lies in every prime."""
    return CategoryPresentation.build(
        ["1", "P"],
        {"1": 1},
        {("1", "1"): {"1": 1}, ("1", "P"): {"P": 1}, ("P", "P"): {}},
        [({"1": 1}, {"1": 1, "P": 1}, {"P": 1})],
        ["P"],
        name="nilpotent_proj",
    )
