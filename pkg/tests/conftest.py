"""
Shared fixtures
"""
import json

import numpy as np
import pytest

from src.core.bloch import BlochVector


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_states():
    """A fixed batch of physical Bloch vectors"""
    gen = np.random.default_rng(2024)
    states = []
    for _ in range(20):
        v = gen.normal(size=3)
        v = v / np.linalg.norm(v) * gen.random() ** (1 / 3)
        states.append(BlochVector.from_array(v))
    return states


@pytest.fixture
def write_config(tmp_path):
    """Write a config dict (or raw text) to a temporary JSON file and return its path"""
    def _write(content, name="config.json"):
        path = tmp_path / name
        text = content if isinstance(content, str) else json.dumps(content, indent=2)
        path.write_text(text, encoding="utf-8")
        return path
    return _write
