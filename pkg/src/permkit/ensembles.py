"""Reproducible samplers for the six matrix ensembles under study.

Reproducibility contract: sample i of a run is generated from a counter
style stream keyed by (seed, i), so regenerating any sample never depends
on how many workers ran or in what order samples completed.  Normal draws
use the Marsaglia polar method on top of PCG64 uniforms, which keeps the
draw sequence platform-independent and easy to pin with golden values.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .engine import permanent
from .matrices import qr_decompose

ENSEMBLES = ("haar-u", "haar-o", "gue", "goe", "ginibre-c", "ginibre-r")


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    n: int
    count: int
    seed: int

    def __post_init__(self):
        if self.kind not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.kind!r}")
        if self.n < 1 or self.count < 1:
            raise ValueError("n and count must be >= 1")


class RngStream:
    """Independent uniform/normal stream keyed by (seed, stream index)."""

    def __init__(self, seed: int, stream: int):
        self.seed = int(seed)
        self.stream = int(stream)
        self._rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((self.seed, self.stream))))

    def uniforms(self, count: int) -> np.ndarray:
        return self._rng.random(count)

    def normals(self, count: int) -> np.ndarray:
        """Standard normals by the polar rejection method.

        Draws uniform pairs, accepts those inside the unit disc, and
        transforms each accepted pair into two normals.  A trailing odd
        value is dropped, so one call consumes whole pairs only.
        """
        need_pairs = (count + 1) // 2
        out = np.empty(2 * need_pairs)
        have = 0
        while have < 2 * need_pairs:
            want = need_pairs - have // 2
            # 4/pi acceptance; the margin keeps the retry loop short
            m = max(8, int(want * 1.35) + 4)
            u = 2.0 * self._rng.random(m) - 1.0
            v = 2.0 * self._rng.random(m) - 1.0
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            u, v, s = u[ok], v[ok], s[ok]
            k = min(len(s), need_pairs - have // 2)
            f = np.sqrt(-2.0 * np.log(s[:k]) / s[:k])
            out[have:have + 2 * k:2] = u[:k] * f
            out[have + 1:have + 2 * k + 1:2] = v[:k] * f
            have += 2 * k
        return out[:count]


def gaussian_draw(stream: RngStream) -> float:
    """One standard normal from the stream (first of a polar pair)."""
    return float(stream.normals(1)[0])


def _complex_normals(stream: RngStream, count: int) -> np.ndarray:
    z = stream.normals(2 * count)
    return (z[0::2] + 1j * z[1::2]) / np.sqrt(2.0)


def sample_matrix(kind: str, n: int, seed: int, index: int) -> np.ndarray:
    """Matrix number ``index`` of the (kind, n, seed) ensemble run."""
    stream = RngStream(seed, index)
    if kind == "ginibre-c":
        return _complex_normals(stream, n * n).reshape(n, n)
    if kind == "ginibre-r":
        return stream.normals(n * n).reshape(n, n)
    if kind == "gue":
        a = _complex_normals(stream, n * n).reshape(n, n)
        return (a + a.conj().T) / 2.0
    if kind == "goe":
        a = stream.normals(n * n).reshape(n, n)
        return (a + a.T) / 2.0
    if kind == "haar-u":
        g = _complex_normals(stream, n * n).reshape(n, n)
        q, r = qr_decompose(g)
        d = np.diagonal(r).copy()
        d = np.where(d == 0, 1.0, d / np.abs(d))
        return np.ascontiguousarray(q * d[None, :])
    if kind == "haar-o":
        g = stream.normals(n * n).reshape(n, n)
        q, r = np.linalg.qr(g)
        d = np.sign(np.diagonal(r))
        d = np.where(d == 0, 1.0, d)
        return np.ascontiguousarray(q * d[None, :])
    raise ValueError(f"unknown ensemble {kind!r}")


def sample_ginibre(spec: EnsembleSpec, index: int = 0) -> np.ndarray:
    if spec.kind not in ("ginibre-c", "ginibre-r"):
        raise ValueError("spec is not a Ginibre ensemble")
    return sample_matrix(spec.kind, spec.n, spec.seed, index)


def sample_gue(spec: EnsembleSpec, index: int = 0) -> np.ndarray:
    if spec.kind != "gue":
        raise ValueError("spec is not GUE")
    return sample_matrix("gue", spec.n, spec.seed, index)


def sample_goe(spec: EnsembleSpec, index: int = 0) -> np.ndarray:
    if spec.kind != "goe":
        raise ValueError("spec is not GOE")
    return sample_matrix("goe", spec.n, spec.seed, index)


def sample_haar_unitary(spec: EnsembleSpec, index: int = 0) -> np.ndarray:
    if spec.kind != "haar-u":
        raise ValueError("spec is not the unitary Haar ensemble")
    return sample_matrix("haar-u", spec.n, spec.seed, index)


def sample_haar_orthogonal(spec: EnsembleSpec, index: int = 0) -> np.ndarray:
    if spec.kind != "haar-o":
        raise ValueError("spec is not the orthogonal Haar ensemble")
    return sample_matrix("haar-o", spec.n, spec.seed, index)


def sample_permanents(spec: EnsembleSpec, method: str = "ryser",
                      threads: int = 1) -> np.ndarray:
    """Permanents of ``spec.count`` fresh ensemble matrices, as complex128.

    Matrices are generated per-index streams, so the output is identical
    for any thread count.
    """
    def one(i: int) -> complex:
        m = sample_matrix(spec.kind, spec.n, spec.seed, i)
        return complex(permanent(m, method=method))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(one, range(spec.count)))
    else:
        values = [one(i) for i in range(spec.count)]
    return np.asarray(values, dtype=np.complex128)
