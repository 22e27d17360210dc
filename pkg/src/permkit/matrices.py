"""Structured matrix constructors and the two dense factorizations we need.

All constructors return plain numpy arrays; QR and log-determinant wrap
LAPACK (Householder QR with column phases left to callers, LU with partial
pivoting via slogdet).
"""

import numpy as np


def build_schur(n: int, normalized: bool = False) -> np.ndarray:
    """Matrix of n-th roots of unity, entry (j, k) = exp(2*pi*i*j*k/n).

    With ``normalized`` the result is divided by sqrt(n), giving the unitary
    discrete Fourier transform matrix.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    s = np.exp(2j * np.pi * jk / n)
    if normalized:
        s = s / np.sqrt(n)
    return np.ascontiguousarray(s)

def build_cycle(n: int) -> np.ndarray:
    """Cyclic permutation matrix with entry (i, j) = 1 iff i = j+1 (mod n)."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    c = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        c[(j + 1) % n, j] = 1.0
    return c


def build_all_ones(n: int, dtype=np.float64) -> np.ndarray:
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return np.ones((n, n), dtype=dtype)


def unitarity_defect(m: np.ndarray) -> float:
    """max |M*M - I|, zero exactly when M is unitary."""
    m = np.asarray(m)
    n = m.shape[0]
    return float(np.max(np.abs(m.conj().T @ m - np.eye(n))))


def qr_decompose(g: np.ndarray):
    """Householder QR; Q unitary, R upper triangular, Q @ R == G.

    Rank deficiency is not an error: R may carry near-zero diagonal entries
    and callers decide what to do with them.
    """
    g = np.asarray(g, dtype=np.complex128)
    q, r = np.linalg.qr(g)
    return q, r


def lu_log_abs_det(m: np.ndarray):
    """log|det M| and the unit-modulus phase, via pivoted LU.

    Exactly singular input is signalled with log_abs = -inf (phase 1), not
    an exception: log-determinant pipelines legitimately sample
    near-singular matrices.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    sign, logabs = np.linalg.slogdet(m)
    if sign == 0:
        return float("-inf"), complex(1.0)
    return float(logabs), complex(sign)
