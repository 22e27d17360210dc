"""Permanent engines: naive oracle, Ryser, Glynn, and blocked parallel runs.

The three algorithms agree on every domain; the naive sum over all n!
permutations is the oracle the fast expansions are validated against.
Blocked runs split the Gray-code range with a BlockPlan, evaluate blocks on
a thread pool (the numba kernels release the GIL), and combine partial sums
in ascending block order, which makes results bit-identical for a fixed
plan no matter how many workers execute it.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import kernels
from ._accel import NUMBA_ENABLED
from .domains import (COMPLEX, INTEGER, RATIONAL, REAL, PrimeField,
                      ScalarDomain, infer_domain)
from .gray import (GLYNN, RYSER, BlockPlan, default_block_count, gray_code,
                   iteration_exponent, make_block_plan)

NAIVE_MAX_N = 11
GRAY_MAX_N = 40
ABS_MAX_N = 25


class LimitError(Exception):
    """A documented capability limit was exceeded (CLI exit code 3)."""


class KahanAccumulator:
    """Neumaier-compensated sum; error stays bounded as terms accumulate.

    Tracks real and imaginary components separately so the compensation is
    an exact error-free transformation per IEEE-754 component.
    """

    __slots__ = ("_sr", "_cr", "_si", "_ci", "_cplx")

    def __init__(self, complex_valued: bool = False):
        self._sr = self._cr = self._si = self._ci = 0.0
        self._cplx = complex_valued

    @staticmethod
    def _step(s, c, v):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        return t, c

    def add(self, value):
        z = complex(value)
        self._sr, self._cr = self._step(self._sr, self._cr, z.real)
        if self._cplx:
            self._si, self._ci = self._step(self._si, self._ci, z.imag)

    @property
    def sum(self):
        return complex(self._sr, self._si) if self._cplx else self._sr

    @property
    def compensation(self):
        return complex(self._cr, self._ci) if self._cplx else self._cr

    @property
    def value(self):
        if self._cplx:
            return complex(self._sr + self._cr, self._si + self._ci)
        return self._sr + self._cr


def _normalize(a, domain):
    """Coerce input to the representation the engines expect for a domain."""
    if domain is None:
        a = np.asarray(a)
        domain = infer_domain(a)
    if isinstance(a, np.ndarray):
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        n = a.shape[0]
    else:
        rows = list(a)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        a = np.empty((n, n), dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                a[i, j] = v
    if n == 0:
        raise ValueError("empty matrix")
    if domain is COMPLEX:
        a = np.ascontiguousarray(a, dtype=np.complex128)
    elif domain is REAL:
        a = np.ascontiguousarray(a, dtype=np.float64)
    elif isinstance(domain, PrimeField):
        red = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                red[i, j] = int(a[i, j]) % domain.p
        a = red
    else:
        obj = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                obj[i, j] = domain.coerce(a[i, j])
        a = obj
    return a, domain, n


def perm_naive(a, domain: ScalarDomain | None = None):
    """Permanent by direct summation over all n! permutations (oracle)."""
    a, domain, n = _normalize(a, domain)
    if n > NAIVE_MAX_N:
        raise LimitError("oracle dimension exceeded")
    rows = [[a[i, j] for j in range(n)] for i in range(n)]
    total = domain.zero()
    for sigma in itertools.permutations(range(n)):
        prod = domain.one()
        for i in range(n):
            prod = domain.mul(prod, rows[i][sigma[i]])
        total = domain.add(total, prod)
    return total


def _gray_walk_generic(a, start, length, domain, algorithm):
    """Reference Gray-code walker over arbitrary scalar domains.

    Mirrors the kernel traversal exactly; exact domains use plain
    accumulation, floating domains a KahanAccumulator.
    """
    n = a.shape[0]
    g = gray_code(start)
    if algorithm == RYSER:
        state = [domain.zero() for _ in range(n)]
        pop = 0
        for j in range(n):
            if (g >> j) & 1:
                pop += 1
                for i in range(n):
                    state[i] = domain.add(state[i], a[i, j])
        neg = (n - pop) & 1
    else:
        state = [a[0, j] for j in range(n)]
        pop = 0
        for i in range(n - 1):
            if (g >> i) & 1:
                pop += 1
                for j in range(n):
                    state[j] = domain.sub(state[j], a[i + 1, j])
            else:
                for j in range(n):
                    state[j] = domain.add(state[j], a[i + 1, j])
        neg = pop & 1

    if domain.exact:
        acc = domain.zero()
    else:
        acc = KahanAccumulator(complex_valued=domain is COMPLEX)
    idx = start
    for step in range(length):
        prod = domain.one()
        for v in state:
            prod = domain.mul(prod, v)
        if neg == 1:
            prod = domain.neg(prod)
        if domain.exact:
            acc = domain.add(acc, prod)
        else:
            acc.add(prod)
        if step + 1 < length:
            idx += 1
            b = (idx & -idx).bit_length() - 1
            flip_on = ((g >> b) & 1) == 0
            if algorithm == RYSER:
                for i in range(n):
                    state[i] = (domain.add(state[i], a[i, b]) if flip_on
                                else domain.sub(state[i], a[i, b]))
            else:
                two_a = [domain.add(a[b + 1, j], a[b + 1, j]) for j in range(n)]
                for j in range(n):
                    state[j] = (domain.sub(state[j], two_a[j]) if flip_on
                                else domain.add(state[j], two_a[j]))
            g ^= 1 << b
            neg ^= 1
    if domain.exact:
        return acc
    return acc.sum, acc.compensation


def _check_gray_dims(n):
    if n > GRAY_MAX_N:
        raise LimitError(f"dimension {n} exceeds the n <= {GRAY_MAX_N} range")


def _validate_plan(plan: BlockPlan, n: int):
    if plan.n != n:
        raise ValueError("plan dimension does not match matrix")
    m = iteration_exponent(n, plan.algorithm)
    if plan.total != (1 << m):
        raise ValueError("plan does not cover the iteration range")
    pos = 0
    for b in plan.blocks:
        if b.start != pos or b.length < 0:
            raise ValueError("plan blocks must be contiguous and ordered")
        pos += b.length


def _run_plan(a, domain, plan, workers):
    n = a.shape[0]
    _validate_plan(plan, n)
    algorithm = plan.algorithm

    fast_float = domain in (COMPLEX, REAL)
    fast_modp = isinstance(domain, PrimeField) and NUMBA_ENABLED

    if fast_float:
        part = kernels.ryser_partial if algorithm == RYSER else kernels.glynn_partial
        run = lambda blk: part(a, blk.start, blk.length)  # noqa: E731
    elif fast_modp:
        au = np.ascontiguousarray(
            np.array([[int(x) for x in row] for row in a], dtype=np.uint64))
        kp = (kernels.ryser_partial_modp if algorithm == RYSER
              else kernels.glynn_partial_modp)
        run = lambda blk: kp(au, blk.start, blk.length, domain.p)  # noqa: E731
    else:
        run = lambda blk: _gray_walk_generic(  # noqa: E731
            a, blk.start, blk.length, domain, algorithm)

    if workers > 1 and len(plan.blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run, plan.blocks))
    else:
        partials = [run(blk) for blk in plan.blocks]

    if fast_float:
        acc = KahanAccumulator(complex_valued=domain is COMPLEX)
        for s, c in partials:
            acc.add(s)
            acc.add(c)
        result = acc.value
        if algorithm == GLYNN:
            result = result * (2.0 ** (1 - n))
        if domain is REAL:
            result = float(result.real) if isinstance(result, complex) else float(result)
        return result

    if isinstance(domain, PrimeField):
        total = 0
        for r in partials:
            total = (total + int(r)) % domain.p
        if algorithm == GLYNN:
            total = domain.div_pow2(total, n - 1)
        return total

    total = domain.zero()
    for r in partials:
        total = domain.add(total, r)
    if algorithm == GLYNN:
        if domain is INTEGER:
            exact = Fraction(total) / (1 << (n - 1))
            if exact.denominator != 1:
                raise ArithmeticError("Glynn sum not divisible in the integers")
            return int(exact)
        total = domain.div_pow2(total, n - 1)
    return total


def perm_blocked(a, plan: BlockPlan, worker_count: int = 1,
                 domain: ScalarDomain | None = None):
    """Permanent via a block plan; bit-identical for any worker_count."""
    a, domain, n = _normalize(a, domain)
    _check_gray_dims(n)
    return _run_plan(a, domain, plan, max(1, worker_count))


def perm_ryser(a, domain: ScalarDomain | None = None, threads: int = 1):
    """Ryser's inclusion-exclusion permanent in Gray-code order."""
    a, domain, n = _normalize(a, domain)
    _check_gray_dims(n)
    blocks = default_block_count(n, RYSER, threads) if threads > 1 else 1
    plan = make_block_plan(n, RYSER, blocks)
    return _run_plan(a, domain, plan, threads)


def perm_glynn(a, domain: ScalarDomain | None = None, threads: int = 1):
    """Glynn's 2^(n-1)-term expansion in Gray-code order."""
    a, domain, n = _normalize(a, domain)
    _check_gray_dims(n)
    if isinstance(domain, PrimeField) and domain.p == 2:
        raise ValueError("division by two unavailable in GF(2)")
    blocks = default_block_count(n, GLYNN, threads) if threads > 1 else 1
    plan = make_block_plan(n, GLYNN, blocks)
    return _run_plan(a, domain, plan, threads)


def permanent(a, method: str = "ryser", domain: ScalarDomain | None = None,
              threads: int = 1):
    """Dispatch by method name ("naive", "ryser", "glynn")."""
    if method == "naive":
        return perm_naive(a, domain)
    if method == RYSER:
        return perm_ryser(a, domain, threads)
    if method == GLYNN:
        return perm_glynn(a, domain, threads)
    raise ValueError(f"unknown method {method!r}")


def perm_abs_entrywise(a, threads: int = 1) -> float:
    """Permanent of the entrywise absolute-value matrix."""
    a = np.asarray(a)
    n = a.shape[0]
    if n > ABS_MAX_N:
        raise LimitError(f"dimension {n} exceeds the n <= {ABS_MAX_N} range")
    mags = np.ascontiguousarray(np.abs(a).astype(np.float64))
    return float(perm_ryser(mags, REAL, threads=threads))
