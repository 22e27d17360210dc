"""Hot permanent kernels: numba Gray-walk loops and pure-numpy twins.

Every kernel evaluates one contiguous Gray-code block of the Ryser or Glynn
expansion and returns a partial sum.  The numba versions walk the block
index-by-index with O(n) work per step and Kahan (Neumaier) compensated
accumulation; the numpy versions rebuild subset states chunk-at-a-time with
vectorized products.  Which family runs is decided by the
PERMKIT_DISABLE_NUMBA environment flag (see _accel).

Block contracts shared by both families and the generic engine walker:
  - iteration index b covers [start, start + length); the active subset or
    sign vector is gray(b) = b XOR (b >> 1)
  - Ryser state: row vector of column-subset sums; term sign (-1)^(n-|S|)
  - Glynn state: column sums with row signs; row 0 fixed +1; the 2^(1-n)
    prefactor is applied by the caller after all blocks are combined
"""

import numpy as np

from ._accel import NUMBA_ENABLED, jit_kernel

_CHUNK = 1 << 13


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# numba kernels


@jit_kernel
def _ryser_block_cplx(a, start, length):
    n = a.shape[0]
    g = start ^ (start >> 1)
    r = np.zeros(n, dtype=np.complex128)
    pop = 0
    for j in range(n):
        if (g >> j) & 1:
            pop += 1
            for i in range(n):
                r[i] += a[i, j]
    neg = (n - pop) & 1
    s_re = 0.0
    c_re = 0.0
    s_im = 0.0
    c_im = 0.0
    idx = start
    for step in range(length):
        prod = complex(1.0, 0.0)
        for i in range(n):
            prod = prod * r[i]
        v_re = -prod.real if neg == 1 else prod.real
        v_im = -prod.imag if neg == 1 else prod.imag
        t = s_re + v_re
        if abs(s_re) >= abs(v_re):
            c_re += (s_re - t) + v_re
        else:
            c_re += (v_re - t) + s_re
        s_re = t
        t = s_im + v_im
        if abs(s_im) >= abs(v_im):
            c_im += (s_im - t) + v_im
        else:
            c_im += (v_im - t) + s_im
        s_im = t
        if step + 1 < length:
            idx += 1
            b = 0
            while ((idx >> b) & 1) == 0:
                b += 1
            if (g >> b) & 1:
                for i in range(n):
                    r[i] -= a[i, b]
            else:
                for i in range(n):
                    r[i] += a[i, b]
            g ^= 1 << b
            neg ^= 1
    return complex(s_re, s_im), complex(c_re, c_im)


@jit_kernel
def _ryser_block_real(a, start, length):
    n = a.shape[0]
    g = start ^ (start >> 1)
    r = np.zeros(n, dtype=np.float64)
    pop = 0
    for j in range(n):
        if (g >> j) & 1:
            pop += 1
            for i in range(n):
                r[i] += a[i, j]
    neg = (n - pop) & 1
    s = 0.0
    c = 0.0
    idx = start
    for step in range(length):
        prod = 1.0
        for i in range(n):
            prod *= r[i]
        v = -prod if neg == 1 else prod
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        if step + 1 < length:
            idx += 1
            b = 0
            while ((idx >> b) & 1) == 0:
                b += 1
            if (g >> b) & 1:
                for i in range(n):
                    r[i] -= a[i, b]
            else:
                for i in range(n):
                    r[i] += a[i, b]
            g ^= 1 << b
            neg ^= 1
    return s, c


@jit_kernel
def _glynn_block_cplx(a, start, length):
    n = a.shape[0]
    g = start ^ (start >> 1)
    r = np.empty(n, dtype=np.complex128)
    for j in range(n):
        r[j] = a[0, j]
    pop = 0
    for i in range(n - 1):
        if (g >> i) & 1:
            pop += 1
            for j in range(n):
                r[j] -= a[i + 1, j]
        else:
            for j in range(n):
                r[j] += a[i + 1, j]
    neg = pop & 1
    s_re = 0.0
    c_re = 0.0
    s_im = 0.0
    c_im = 0.0
    idx = start
    for step in range(length):
        prod = complex(1.0, 0.0)
        for j in range(n):
            prod = prod * r[j]
        v_re = -prod.real if neg == 1 else prod.real
        v_im = -prod.imag if neg == 1 else prod.imag
        t = s_re + v_re
        if abs(s_re) >= abs(v_re):
            c_re += (s_re - t) + v_re
        else:
            c_re += (v_re - t) + s_re
        s_re = t
        t = s_im + v_im
        if abs(s_im) >= abs(v_im):
            c_im += (s_im - t) + v_im
        else:
            c_im += (v_im - t) + s_im
        s_im = t
        if step + 1 < length:
            idx += 1
            b = 0
            while ((idx >> b) & 1) == 0:
                b += 1
            if (g >> b) & 1:
                for j in range(n):
                    r[j] += 2.0 * a[b + 1, j]
            else:
                for j in range(n):
                    r[j] -= 2.0 * a[b + 1, j]
            g ^= 1 << b
            neg ^= 1
    return complex(s_re, s_im), complex(c_re, c_im)


@jit_kernel
def _glynn_block_real(a, start, length):
    n = a.shape[0]
    g = start ^ (start >> 1)
    r = np.empty(n, dtype=np.float64)
    for j in range(n):
        r[j] = a[0, j]
    pop = 0
    for i in range(n - 1):
        if (g >> i) & 1:
            pop += 1
            for j in range(n):
                r[j] -= a[i + 1, j]
        else:
            for j in range(n):
                r[j] += a[i + 1, j]
    neg = pop & 1
    s = 0.0
    c = 0.0
    idx = start
    for step in range(length):
        prod = 1.0
        for j in range(n):
            prod *= r[j]
        v = -prod if neg == 1 else prod
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        if step + 1 < length:
            idx += 1
            b = 0
            while ((idx >> b) & 1) == 0:
                b += 1
            if (g >> b) & 1:
                for j in range(n):
                    r[j] += 2.0 * a[b + 1, j]
            else:
                for j in range(n):
                    r[j] -= 2.0 * a[b + 1, j]
            g ^= 1 << b
            neg ^= 1
    return s, c


@jit_kernel
def _mulmod(a, b, p):
    # double-width multiply-reduce; plain product fits 64 bits below 2^31
    if p < np.uint64(1) << np.uint64(31):
        return (a * b) % p
    r = np.uint64(0)
    x = a
    y = b
    one = np.uint64(1)
    while y:
        if y & one:
            r = r + x
            if r >= p:
                r -= p
        x = x + x
        if x >= p:
            x -= p
        y >>= one
    return r


@jit_kernel
def _ryser_block_modp(a, start, length, p):
    n = a.shape[0]
    g = start ^ (start >> 1)
    zero = np.uint64(0)
    r = np.zeros(n, dtype=np.uint64)
    pop = 0
    for j in range(n):
        if (g >> j) & 1:
            pop += 1
            for i in range(n):
                v = r[i] + a[i, j]
                r[i] = v - p if v >= p else v
    neg = (n - pop) & 1
    acc = zero
    idx = start
    for step in range(length):
        prod = np.uint64(1) % p
        for i in range(n):
            prod = _mulmod(prod, r[i], p)
        if neg == 1:
            prod = (p - prod) % p
        acc = acc + prod
        if acc >= p:
            acc -= p
        if step + 1 < length:
            idx += 1
            b = 0
            while ((idx >> b) & 1) == 0:
                b += 1
            if (g >> b) & 1:
                for i in range(n):
                    v = r[i] + (p - a[i, b])
                    r[i] = v - p if v >= p else v
            else:
                for i in range(n):
                    v = r[i] + a[i, b]
                    r[i] = v - p if v >= p else v
            g ^= 1 << b
            neg ^= 1
    return acc


@jit_kernel
def _glynn_block_modp(a, start, length, p):
    n = a.shape[0]
    g = start ^ (start >> 1)
    r = np.zeros(n, dtype=np.uint64)
    for j in range(n):
        r[j] = a[0, j]
    pop = 0
    for i in range(n - 1):
        if (g >> i) & 1:
            pop += 1
            for j in range(n):
                v = r[j] + (p - a[i + 1, j])
                r[j] = v - p if v >= p else v
        else:
            for j in range(n):
                v = r[j] + a[i + 1, j]
                r[j] = v - p if v >= p else v
    neg = pop & 1
    acc = np.uint64(0)
    idx = start
    for step in range(length):
        prod = np.uint64(1) % p
        for j in range(n):
            prod = _mulmod(prod, r[j], p)
        if neg == 1:
            prod = (p - prod) % p
        acc = acc + prod
        if acc >= p:
            acc -= p
        if step + 1 < length:
            idx += 1
            b = 0
            while ((idx >> b) & 1) == 0:
                b += 1
            if (g >> b) & 1:
                for j in range(n):
                    w = a[b + 1, j] + a[b + 1, j]
                    if w >= p:
                        w -= p
                    v = r[j] + w
                    r[j] = v - p if v >= p else v
            else:
                for j in range(n):
                    w = a[b + 1, j] + a[b + 1, j]
                    if w >= p:
                        w -= p
                    v = r[j] + (p - w)
                    r[j] = v - p if v >= p else v
            g ^= 1 << b
            neg ^= 1
    return acc


# ---------------------------------------------------------------------------
# pure-numpy twins


def _neumaier_step(s, c, v):
    # error-free transformation on one float component
    t = s + v
    if abs(s) >= abs(v):
        c += (s - t) + v
    else:
        c += (v - t) + s
    return t, c


def _accumulate_chunks(chunks, is_complex):
    # Kahan across chunk sums, per component for complex values
    s_re = c_re = s_im = c_im = 0.0
    for z in chunks:
        z = complex(z)
        s_re, c_re = _neumaier_step(s_re, c_re, z.real)
        if is_complex:
            s_im, c_im = _neumaier_step(s_im, c_im, z.imag)
    if is_complex:
        return complex(s_re, s_im), complex(c_re, c_im)
    return s_re, c_re


def _ryser_block_numpy(a, start, length):
    n = a.shape[0]
    shifts = np.arange(n, dtype=np.uint64)
    one = np.uint64(1)
    chunks = []
    for cs in range(start, start + length, _CHUNK):
        m = min(_CHUNK, start + length - cs)
        idx = np.arange(cs, cs + m, dtype=np.uint64)
        g = idx ^ (idx >> one)
        bits = ((g[:, None] >> shifts[None, :]) & one).astype(np.float64)
        states = bits @ a.T
        prods = np.prod(states, axis=1)
        pop = bits.sum(axis=1).astype(np.int64)
        signs = np.where(((n - pop) & 1) == 1, -1.0, 1.0)
        chunks.append(np.sum(signs * prods))
    return _accumulate_chunks(chunks, np.issubdtype(a.dtype, np.complexfloating))


def _glynn_block_numpy(a, start, length):
    n = a.shape[0]
    shifts = np.arange(max(n - 1, 1), dtype=np.uint64)[: n - 1]
    base = a[0]
    rest = a[1:]
    one = np.uint64(1)
    chunks = []
    for cs in range(start, start + length, _CHUNK):
        m = min(_CHUNK, start + length - cs)
        idx = np.arange(cs, cs + m, dtype=np.uint64)
        g = idx ^ (idx >> one)
        bits = ((g[:, None] >> shifts[None, :]) & one).astype(np.float64)
        states = base[None, :] + (1.0 - 2.0 * bits) @ rest
        prods = np.prod(states, axis=1)
        signs = np.where((bits.sum(axis=1).astype(np.int64) & 1) == 1, -1.0, 1.0)
        chunks.append(np.sum(signs * prods))
    return _accumulate_chunks(chunks, np.issubdtype(a.dtype, np.complexfloating))


# ---------------------------------------------------------------------------
# dispatch


def ryser_partial(a: np.ndarray, start: int, length: int):
    """Partial Ryser sum over one Gray block; returns (sum, compensation)."""
    if NUMBA_ENABLED:
        if a.dtype == np.complex128:
            return _ryser_block_cplx(a, start, length)
        return _ryser_block_real(a, start, length)
    return _ryser_block_numpy(a, start, length)


def glynn_partial(a: np.ndarray, start: int, length: int):
    """Partial unscaled Glynn sum over one Gray block of sign vectors."""
    if NUMBA_ENABLED:
        if a.dtype == np.complex128:
            return _glynn_block_cplx(a, start, length)
        return _glynn_block_real(a, start, length)
    return _glynn_block_numpy(a, start, length)


def ryser_partial_modp(a: np.ndarray, start: int, length: int, p: int) -> int:
    return int(_ryser_block_modp(a, start, length, np.uint64(p)))


def glynn_partial_modp(a: np.ndarray, start: int, length: int, p: int) -> int:
    return int(_glynn_block_modp(a, start, length, np.uint64(p)))


def mulmod(a: int, b: int, p: int) -> int:
    """64-bit modular multiply used by the prime-field kernels."""
    return int(_mulmod(np.uint64(a), np.uint64(b), np.uint64(p)))
