"""Geodesics on the unitary group from the identity to two endpoints.

The n-cycle geodesic is the circulant with closed-form entries

    gamma(t)_{jl} = (e^(2 pi i t) - 1) / (n (e^(2 pi i (l-j+t)/n) - 1)),

built on the [0, 2 pi) eigenphase branch.  Its permanent carries the branch
phase e^(i pi (n-1) t): at t = 1/2 that phase is the sign pattern
(-1)^((n-1)/2) of the midpoint values, and dividing it out leaves a real
function of t.  Folding the eigenphases into (-pi, pi] instead gives an
isometric path through real orthogonal matrices (cycle_geodesic_real) whose
permanent equals the de-rotated one exactly; every magnitude-level
statement (scaling function, symmetry, midpoint ratios) is identical on the
two paths.

The DFT geodesic is assembled from the four spectral projectors of the
normalized DFT matrix F (F^4 = I), which fixes the logarithm without any
eigensolver.  The -1 eigenvalue sits on the branch cut, so theta(-1) = +pi
and -pi give equal-length geodesics; we take theta(-1) = -pi, the choice
whose valley exhibits the prime-vs-composite recovery dichotomy.

Both paths special-case t = 0 and t = 1 to the exact endpoint matrices, so
no removable singularity is ever evaluated and traces start at perm = 1
exactly.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .engine import perm_abs_entrywise, permanent
from .matrices import build_cycle, build_schur

CYCLE = "cycle"
DFT = "dft"


def cycle_geodesic(n: int, t: float) -> np.ndarray:
    """Point on the geodesic from I to the n-cycle permutation matrix.

    Entry (j, l) = (e^(2 pi i t) - 1) / (n (e^(2 pi i (l-j+t)/n) - 1)), with
    magnitude sin(pi t) / (n |sin(pi (l-j+t)/n)|).
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if t == 0.0:
        return np.eye(n, dtype=np.complex128)
    if t == 1.0:
        return build_cycle(n)
    d = np.arange(n)[None, :] - np.arange(n)[:, None]
    num = np.exp(2j * np.pi * t) - 1.0
    den = n * (np.exp(2j * np.pi * (d + t) / n) - 1.0)
    return np.ascontiguousarray(num / den)


def cycle_geodesic_real(n: int, t: float) -> np.ndarray:
    """The isometric real form of the cycle geodesic (odd n: inside SO(n)).

    Folding the eigenphases into (-pi, pi] pairs them as +/- theta, which
    collapses the entries to the real Dirichlet-kernel closed form
    (-1)^(l-j) sin(pi t) / (n sin(pi (l-j+t)/n)).  The permanent along this
    path equals e^(-i pi (n-1) t) times the cycle_geodesic permanent.  For
    even n the phase pi mode is unpaired and the matrix stays complex.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if t == 0.0:
        return np.eye(n, dtype=np.complex128)
    if t == 1.0:
        return build_cycle(n)
    d = np.arange(n)[None, :] - np.arange(n)[:, None]
    if n % 2 == 1:
        sign = np.where(d % 2 == 0, 1.0, -1.0)
        g = sign * np.sin(np.pi * t) / (n * np.sin(np.pi * (d + t) / n))
        return np.ascontiguousarray(g.astype(np.complex128))
    f = build_schur(n, normalized=True)
    theta = 2.0 * np.pi * np.arange(n) / n
    theta = np.where(theta > np.pi + 1e-12, theta - 2.0 * np.pi, theta)
    g = f.conj().T @ (np.exp(1j * t * theta)[:, None] * f)
    return np.ascontiguousarray(g)


def cycle_branch_phase(n: int, t: float) -> complex:
    """Branch phase e^(i pi (n-1) t) relating the two cycle paths.

    cycle_geodesic's permanent divided by this phase is real; at t = 1/2 it
    reduces to i^(n-1), the (-1)^((n-1)/2) sign pattern for odd n.
    """
    return complex(np.exp(1j * np.pi * (n - 1) * t))


def dft_projectors(n: int):
    """Spectral projectors of F onto eigenvalues (1, i, -1, -i)."""
    f = build_schur(n, normalized=True)
    powers = [np.eye(n, dtype=np.complex128), f, f @ f, None]
    powers[3] = powers[2] @ f
    eigs = (1.0 + 0j, 1j, -1.0 + 0j, -1j)
    projs = []
    for lam in eigs:
        p = sum(np.conj(lam) ** m * powers[m] for m in range(4)) / 4.0
        projs.append(p)
    return eigs, projs


def dft_geodesic(n: int, t: float) -> np.ndarray:
    """Point on the geodesic from I to the normalized DFT matrix.

    theta(-1) = -pi: the two pi-length branches through the -1 eigenvalue
    are isometric, and this is the one whose valley exhibits the prime
    recovery effect.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t == 0.0:
        return np.eye(n, dtype=np.complex128)
    if t == 1.0:
        return build_schur(n, normalized=True)
    thetas = {1.0 + 0j: 0.0, 1j: np.pi / 2, -1.0 + 0j: -np.pi, -1j: -np.pi / 2}
    eigs, projs = dft_projectors(n)
    g = np.zeros((n, n), dtype=np.complex128)
    for lam, p in zip(eigs, projs):
        g = g + np.exp(1j * t * thetas[lam]) * p
    return np.ascontiguousarray(g)


@dataclass
class GeodesicTrace:
    n: int
    target: str
    ts: np.ndarray
    perms: np.ndarray
    f_values: np.ndarray
    f_defined: np.ndarray

    def __post_init__(self):
        if len(self.ts) < 2 or self.ts[0] != 0.0 or self.ts[-1] != 1.0:
            raise ValueError("trace grid must run from 0 to 1")


def geodesic_matrix(target: str, n: int, t: float) -> np.ndarray:
    if target == CYCLE:
        return cycle_geodesic(n, t)
    if target == DFT:
        return dft_geodesic(n, t)
    raise ValueError(f"unknown geodesic target {target!r}")


def sweep(n: int, target: str, steps: int, threads: int = 1,
          method: str = "ryser") -> GeodesicTrace:
    """Permanents and the scaling function on a uniform t grid.

    f(t) = -(1/n) ln |perm(gamma(t))|, flagged undefined where the
    permanent vanishes (even-n cycle midpoint) rather than stored as inf.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    ts = np.arange(steps) / (steps - 1)
    ts[0], ts[-1] = 0.0, 1.0

    def one(t: float) -> complex:
        return complex(permanent(geodesic_matrix(target, n, t), method=method))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            perms = np.asarray(list(pool.map(one, ts)), dtype=np.complex128)
    else:
        perms = np.asarray([one(t) for t in ts], dtype=np.complex128)

    mags = np.abs(perms)
    defined = mags > 0.0
    f = np.full(steps, np.nan)
    f[defined] = -np.log(mags[defined]) / n
    return GeodesicTrace(n=n, target=target, ts=ts, perms=perms,
                         f_values=f, f_defined=defined)


def midpoint_analysis(n: int, threads: int = 1) -> dict:
    """Midpoint diagnostics of the cycle geodesic against 2 e^(-n)."""
    if not 3 <= n <= 23:
        raise ValueError("midpoint analysis supports 3 <= n <= 23")
    g = cycle_geodesic(n, 0.5)
    pm = complex(permanent(g, threads=threads))
    ratio = abs(pm) / (2.0 * np.exp(-float(n)))
    sign = 0 if pm.real == 0 else (1 if pm.real > 0 else -1)
    base = perm_abs_entrywise(g, threads=threads) ** (1.0 / n)
    return {
        "n": n,
        "perm_mid": pm,
        "ratio_to_2exp": ratio,
        "sign": sign,
        "correction": n * (ratio - 1.0),
        "cancellation_base": base,
    }


def _golden_min(fun, lo, hi, tol=1e-10, max_iter=120):
    """Golden-section minimizer on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return (a + b) / 2.0, min(fc, fd)


def recovery_ratio(trace: GeodesicTrace, threads: int = 1) -> float:
    """Endpoint magnitude over the refined valley minimum, r(n)."""
    if trace.target != DFT:
        raise ValueError("recovery ratio is defined for the DFT geodesic")
    if len(trace.ts) < 101:
        raise ValueError("grid too coarse; use at least 101 points")
    mags = np.abs(trace.perms)
    if np.all(mags == 0.0):
        raise ValueError("degenerate trace: all permanents vanish")
    k = int(np.argmin(mags))
    lo = trace.ts[max(k - 1, 0)]
    hi = trace.ts[min(k + 1, len(trace.ts) - 1)]

    def mag_at(t: float) -> float:
        return abs(complex(permanent(dft_geodesic(trace.n, float(t)),
                                     threads=threads)))

    _, fmin = _golden_min(mag_at, lo, hi, tol=1e-8)
    fmin = min(fmin, float(mags[k]))
    if fmin == 0.0:
        raise ValueError("degenerate trace: vanishing valley minimum")
    return float(mags[-1] / fmin)


def onset_coefficient(trace: GeodesicTrace) -> float:
    """Least-squares coefficient a in f(t) ~ a t^2 on the window (0, 0.1]."""
    if trace.target != CYCLE:
        raise ValueError("onset fit is defined for the cycle geodesic")
    sel = (trace.ts > 0.0) & (trace.ts <= 0.1) & trace.f_defined
    if np.count_nonzero(sel) < 10:
        raise ValueError("grid must resolve t <= 0.1 with at least 10 points")
    t2 = trace.ts[sel] ** 2
    return float(np.dot(trace.f_values[sel], t2) / np.dot(t2, t2))
