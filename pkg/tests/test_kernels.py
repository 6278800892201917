import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from occamlab import _kernels_py, kernels

compiled = pytest.importorskip("occamlab._kernels")


def _run_layer(mod, tts, npoints, weights, base):
    size = 1 << npoints
    best_len = np.full(size, np.iinfo(np.int64).max, dtype=np.int64)
    best_row = np.full(size, -1, dtype=np.int64)
    best_theta = np.zeros(size, dtype=np.int64)
    mod.threshold_layer(np.asarray(tts, dtype=np.int64), npoints,
                        np.asarray(weights, dtype=np.int64), np.asarray(base, dtype=np.int64),
                        best_len, best_row, best_theta, 0)
    return best_len, best_row, best_theta


@given(st.integers(1, 3), st.data())
@settings(max_examples=40, deadline=None)
def test_threshold_layer_backends_agree(n, data):
    points = 1 << n
    tts = [sum(1 << p for p in range(points) if p >> i & 1) for i in range(n)]
    rows = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n),
                              min_size=1, max_size=12))
    base = data.draw(st.lists(st.integers(1, 30), min_size=len(rows), max_size=len(rows)))
    a = _run_layer(compiled, tts, points, rows, base)
    b = _run_layer(_kernels_py, tts, points, rows, base)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


def test_threshold_layer_and_gate():
    # x1 AND x2 over points 0..3 has truth table 0b1000
    tts = [0b1010, 0b1100]
    best_len, _, best_theta = _run_layer(_kernels_py, tts, 4, [[1, 1]], [0])
    assert best_len[0b1000] < np.iinfo(np.int64).max
    assert best_theta[0b1000] == 2


@given(st.lists(st.integers(0, 255), max_size=20), st.integers(1, 8))
@settings(max_examples=80, deadline=None)
def test_vc_dimension_backends_agree(concepts, k):
    mask = (1 << k) - 1
    arr = np.array([c & mask for c in concepts], dtype=np.int64)
    assert compiled.vc_dimension(arr, k) == _kernels_py.vc_dimension(arr, k)


def test_vc_dimension_known_values():
    assert _kernels_py.vc_dimension(np.array([0, 1, 2, 3], dtype=np.int64), 2) == 2
    assert _kernels_py.vc_dimension(np.array([5], dtype=np.int64), 3) == 0
    # thresholds on a line: {}, {2}, {1,2}, {0,1,2}
    assert _kernels_py.vc_dimension(np.array([0, 4, 6, 7], dtype=np.int64), 3) == 1


@given(st.text("ACGT", max_size=12), st.text("ACGT", max_size=12))
@settings(max_examples=200)
def test_max_overlap_backends_agree(a, b):
    assert compiled.max_overlap(a, b) == _kernels_py.max_overlap(a, b)


@pytest.mark.parametrize("a,b,want", [("abc", "bcd", 2), ("aba", "aba", 1), ("ab", "ab", 0), ("aaa", "aaa", 2),
                                      ("ab", "cd", 0), ("", "a", 0)])
def test_max_overlap_examples(a, b, want):
    assert _kernels_py.max_overlap(a, b) == want


def test_backend_can_be_forced():
    env = dict(os.environ, OCCAMLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import occamlab; print(occamlab.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("compiled", "python")
