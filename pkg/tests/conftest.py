"""Shared test helpers."""

from __future__ import annotations

import numpy as np
import pytest

from cayleywalk import WalkState


def random_state(group, rng, count: int = 4) -> WalkState:
    """Normalized random state supported on a few sampled positions."""
    xs = group.random_elements(rng, count)
    terms = []
    for x in xs:
        for c in range(group.coin_dim):
            amp = rng.normal() + 1j * rng.normal()
            terms.append((x, c, amp))
    return WalkState.from_terms(group, terms).normalized()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260819)
