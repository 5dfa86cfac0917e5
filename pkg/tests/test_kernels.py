import os
import subprocess
import sys

import numpy as np
import pytest

from fsets import _kernels as K

IMPLS = K.implementations()


def _rand(rng, n, p):
    return K.np_trim(rng.integers(0, p, size=n).astype(np.int64))


@pytest.mark.skipif("numba" not in IMPLS, reason="numba not installed")
@pytest.mark.parametrize("p", [2, 5, 7, 65521])
def test_numba_matches_numpy(p):
    rng = np.random.default_rng(p)
    nb, npy = IMPLS["numba"], IMPLS["numpy"]
    for _ in range(200):
        a, b = _rand(rng, rng.integers(0, 40), p), _rand(rng, rng.integers(1, 40), p)
        assert np.array_equal(nb["mul"](a, b, p), npy["mul"](a, b, p))
        if b.size:
            q1, r1 = nb["divmod"](a, b, p)
            q2, r2 = npy["divmod"](a, b, p)
            assert np.array_equal(q1, q2) and np.array_equal(r1, r2)
            assert np.array_equal(nb["gcd"](a, b, p), npy["gcd"](a, b, p))


@pytest.mark.parametrize("p", [2, 5, 101, 1009])
def test_fft_product_is_exact(p):
    rng = np.random.default_rng(p + 1)
    for n, m in ((300, 300), (257, 2000), (1500, 900)):
        a = rng.integers(0, p, size=n).astype(np.int64)
        b = rng.integers(0, p, size=m).astype(np.int64)
        a[-1] = b[-1] = 1
        assert K.fft_usable(a, b, p)
        assert np.array_equal(K.fft_mul(a, b, p), np.convolve(a, b) % p)
        assert np.array_equal(K.poly_mul(a, b, p), K.np_mul(a, b, p))


def test_fft_not_used_when_precision_would_run_out():
    a = np.ones(300, dtype=np.int64)
    assert not K.fft_usable(a, a, 65521)


@pytest.mark.skipif("numba" not in IMPLS, reason="numba not installed")
@pytest.mark.parametrize("q", [5, 7, 101, 1009])
def test_point_count_kernels_agree(q):
    nb, npy = IMPLS["numba"], IMPLS["numpy"]
    for a4 in range(3):
        for a6 in range(1, 3):
            assert nb["count"](a4, a6, q) == npy["count"](a4, a6, q)


def test_divmod_identity():
    rng = np.random.default_rng(0)
    p = 5
    for _ in range(100):
        a, b = _rand(rng, 12, p), _rand(rng, 5, p)
        if not b.size:
            continue
        q, r = K.poly_divmod(a, b, p)
        back = K.np_trim(np.pad(K.poly_mul(q, b, p), (0, 20))[:20] + np.pad(r, (0, 20))[:20]) % p
        assert np.array_equal(K.np_trim(back), a)
        assert r.size < b.size


def test_env_flag_selects_numpy():
    env = dict(os.environ, FSETS_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from fsets import _kernels as K; print(K.backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
