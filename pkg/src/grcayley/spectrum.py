"""Eigenvalues of the Cayley graphs through additive character sums.

Eigenvectors of a Cayley graph on an abelian group are the group
characters.  For the additive group of GR(p^e, p^(er)) the characters are
psi_gamma(x) = omega^(T(gamma*x)), omega a primitive p^e-th root of unity
and T the trace, one character per ring element gamma, and the eigenvalue
attached to gamma is the sum of psi_gamma over the connection set.  Only
the histogram of trace values T(gamma*s) matters, so the kernels compute
those values for whole blocks of gamma at once through the linear form
T(gamma*s) = sum_i a_i * T(x^i * s), where a_i are the coefficients of
gamma.  The float64 matrix product this uses is exact: its entries are
bounded by r*(p^e - 1)^2 < 2^53 for every supported ring.

For p^e = 4 the character values lie in {1, i, -1, -i}, the eigenvalues
are the integers counts[0] - counts[2], and full spectra are exact.
Otherwise eigenvalues are floats carrying an imaginary-residue self-check
of 1e-9 * d.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .cayley import GraphSpec
from .errors import (
    ContextMismatchError,
    IntegrityError,
    ParameterError,
    SizeError,
)
from .ring import RingContext, RingElement, trace

IMAG_RESIDUE_TOL = 1e-9
MERGE_TOL = 1e-6
ORACLE_CUTOFF = 4096
NUMERIC_SPECTRUM_CUTOFF = 1 << 24
BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True)
class GaussianInt:
    """Exact element of Z[i]."""

    re: int
    im: int

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        """|z|^2, exactly."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class TraceCounts:
    """Histogram of T(gamma*s) over the connection set, indexed by residue."""

    gamma_index: int
    counts: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicities, descending by value.

    exact means the values are integers computed without rounding; numeric
    spectra carry floats merged at tolerance 1e-6.
    """

    entries: tuple[tuple[Union[int, float], int], ...]
    exact: bool
    n: int
    d: int

    def __post_init__(self) -> None:
        if sum(m for _, m in self.entries) != self.n:
            raise IntegrityError("multiplicities do not sum to the vertex count")

    @property
    def distinct(self) -> int:
        return len(self.entries)

    @property
    def max_value(self) -> Union[int, float]:
        return self.entries[0][0]

    @property
    def min_value(self) -> Union[int, float]:
        return self.entries[-1][0]

    def expanded(self) -> np.ndarray:
        """All n eigenvalues, descending, as float64."""
        out = np.empty(self.n, dtype=np.float64)
        pos = 0
        for v, m in self.entries:
            out[pos : pos + m] = v
            pos += m
        return out

    def multiplicity_of(self, value: Union[int, float], tol: float = MERGE_TOL) -> int:
        total = 0
        for v, m in self.entries:
            if abs(v - value) <= tol:
                total += m
        return total

    def lambda_g(self) -> Union[int, float]:
        """Largest |eigenvalue| after dropping values equal to +-degree."""
        best: Union[int, float] = 0
        for v, m in self.entries:
            if abs(abs(v) - self.d) <= (0 if self.exact else MERGE_TOL):
                continue
            best = max(best, abs(v))
        return best

    def energy(self) -> Union[int, float]:
        return sum(abs(v) * m for v, m in self.entries)


# ---------------------------------------------------------------------------
# Scalar paths.


def trace_counts(spec: GraphSpec, gamma: Union[RingElement, int]) -> TraceCounts:
    """Histogram of trace values of gamma times the connection set."""
    ctx = spec.ctx
    if isinstance(gamma, int):
        gamma = ctx.from_index(gamma)
    elif gamma.ctx.key != ctx.key:
        raise ContextMismatchError("gamma belongs to a different ring")
    counts = [0] * ctx.q
    for s in spec.connection_set:
        counts[trace(gamma * s)] += 1
    return TraceCounts(gamma_index=gamma.index, counts=tuple(counts))


def eigenvalue_exact_char4(tc: TraceCounts) -> int:
    """Exact eigenvalue for p^e = 4: counts[0] - counts[2]."""
    if len(tc.counts) != 4:
        raise ParameterError("exact eigenvalues require p^e = 4")
    if tc.counts[1] != tc.counts[3]:
        raise IntegrityError(
            f"asymmetric trace histogram {tc.counts}: the connection set is "
            "not negation-closed"
        )
    return tc.counts[0] - tc.counts[2]


def eigenvalue_numeric(tc: TraceCounts) -> float:
    """Eigenvalue as a real float, with an imaginary-residue self-check."""
    q = len(tc.counts)
    angles = 2.0 * math.pi * np.arange(q) / q
    counts = np.array(tc.counts, dtype=np.float64)
    real = float(counts @ np.cos(angles))
    imag = float(counts @ np.sin(angles))
    if abs(imag) > IMAG_RESIDUE_TOL * max(tc.degree, 1):
        raise IntegrityError(f"imaginary residue {imag} exceeds tolerance")
    return real


def zeta(ctx: RingContext, gamma: RingElement) -> Union[GaussianInt, complex]:
    """Character sum over the Teichmuller units alone.

    Exact GaussianInt when p^e = 4, complex otherwise.
    """
    if gamma.ctx.key != ctx.key:
        raise ContextMismatchError("gamma belongs to a different ring")
    counts = [0] * ctx.q
    for u in ctx.teichmuller_units:
        counts[trace(gamma * u)] += 1
    if ctx.q == 4:
        return GaussianInt(counts[0] - counts[2], counts[1] - counts[3])
    angles = 2.0 * math.pi * np.arange(ctx.q) / ctx.q
    arr = np.array(counts, dtype=np.float64)
    return complex(arr @ np.cos(angles), arr @ np.sin(angles))


# ---------------------------------------------------------------------------
# Vectorised kernels.


def trace_basis_matrix(ctx: RingContext, digits: np.ndarray) -> np.ndarray:
    """(m, r) matrix with entry [j, i] = T(x^i * a_j) for coefficient rows a_j."""
    q, r = ctx.q, ctx.r
    form = np.array(ctx.trace_form, dtype=np.int64)
    xr_row = np.array(ctx._redrows[0], dtype=np.int64)
    cur = np.array(digits, dtype=np.int64).copy()
    out = np.empty((cur.shape[0], r), dtype=np.int64)
    for i in range(r):
        out[:, i] = (cur @ form) % q
        if i + 1 < r:
            top = cur[:, -1].copy()
            cur[:, 1:] = cur[:, :-1]
            cur[:, 0] = 0
            cur += top[:, None] * xr_row
            cur %= q
    return out


def _trace_value_block(ctx: RingContext, w_t: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Trace values T(gamma*s) for gamma in [lo, hi) as an (hi-lo, m) int32 array."""
    idx = np.arange(lo, hi, dtype=np.int64)
    coeffs = ctx.digits_of(idx).astype(np.float64)
    return (np.rint(coeffs @ w_t).astype(np.int64) % ctx.q).astype(np.int32)


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        env = os.environ.get("GRCAYLEY_THREADS", "")
        threads = int(env) if env else 1
    if not isinstance(threads, int) or threads < 1:
        raise ParameterError(f"threads must be a positive int, got {threads!r}")
    return threads


def full_spectrum(spec: GraphSpec, threads: Optional[int] = None) -> Spectrum:
    """Spectrum of the graph from character sums over every gamma.

    Exact integers for p^e = 4; floats at merge tolerance 1e-6 otherwise.
    The numeric path is capped at 2^24 vertices.
    """
    ctx = spec.ctx
    n, d, q = spec.n, spec.d, ctx.q
    threads = _resolve_threads(threads)
    exact = q == 4
    if not exact and n > NUMERIC_SPECTRUM_CUTOFF:
        raise SizeError(
            f"numeric spectrum on {n} vertices exceeds the 2^24 cutoff"
        )

    w_t = trace_basis_matrix(ctx, spec.s_digits).T.astype(np.float64)
    block = max(1, BLOCK_ELEMS // max(d, 1))
    starts = list(range(0, n, block))

    if exact:
        def work(lo: int) -> tuple[np.ndarray, np.ndarray]:
            tv = _trace_value_block(ctx, w_t, lo, min(lo + block, n))
            ones = (tv == 1).sum(axis=1)
            threes = (tv == 3).sum(axis=1)
            if (ones != threes).any():
                raise IntegrityError("asymmetric trace histogram in exact kernel")
            eig = (tv == 0).sum(axis=1) - (tv == 2).sum(axis=1)
            return np.unique(eig, return_counts=True)

        counter: Counter = Counter()
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(work, starts))
        else:
            results = [work(lo) for lo in starts]
        for vals, cnts in results:
            for v, c in zip(vals.tolist(), cnts.tolist()):
                counter[int(v)] += int(c)
        entries = tuple(
            (v, counter[v]) for v in sorted(counter, reverse=True)
        )
        first = sum(v * m for v, m in entries)
        second = sum(v * v * m for v, m in entries)
        if first != 0 or second != n * d:
            raise IntegrityError(
                f"moment check failed: sum {first}, sum of squares {second} != {n * d}"
            )
        return Spectrum(entries=entries, exact=True, n=n, d=d)

    angles = 2.0 * np.pi * np.arange(q) / q
    cos_lut = np.cos(angles)
    sin_lut = np.sin(angles)
    eig = np.empty(n, dtype=np.float64)

    def work_numeric(lo: int) -> None:
        hi = min(lo + block, n)
        tv = _trace_value_block(ctx, w_t, lo, hi)
        imag = sin_lut[tv].sum(axis=1)
        if np.abs(imag).max() > IMAG_RESIDUE_TOL * d:
            raise IntegrityError("imaginary residue exceeds tolerance in kernel")
        eig[lo:hi] = cos_lut[tv].sum(axis=1)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work_numeric, starts))
    else:
        for lo in starts:
            work_numeric(lo)

    if abs(float(eig.sum())) > MERGE_TOL * n * d or abs(
        float((eig * eig).sum()) - n * d
    ) > MERGE_TOL * n * d:
        raise IntegrityError("numeric moment check failed")
    return Spectrum(entries=_merge_numeric(eig, MERGE_TOL), exact=False, n=n, d=d)


def _merge_numeric(
    values: np.ndarray, tol: float
) -> tuple[tuple[Union[int, float], int], ...]:
    """Group sorted values whose consecutive gaps stay within tol."""
    values = np.sort(np.asarray(values, dtype=np.float64))
    if values.size == 0:
        return ()
    cuts = np.flatnonzero(np.diff(values) > tol)
    starts = np.concatenate(([0], cuts + 1))
    ends = np.concatenate((cuts + 1, [values.size]))
    entries = [
        (float(values[s:e].mean()), int(e - s)) for s, e in zip(starts, ends)
    ]
    entries.reverse()
    return tuple(entries)


def oracle_spectrum(spec: GraphSpec) -> Spectrum:
    """Spectrum by dense symmetric eigensolve on the adjacency matrix.

    Independent of the character path; capped at 4096 vertices.  Merged
    values within 1e-6 of an integer are snapped to it, for comparisons.
    """
    n = spec.n
    if n > ORACLE_CUTOFF:
        raise SizeError(f"oracle eigensolve on {n} vertices exceeds the 4096 cutoff")
    ctx = spec.ctx
    idx = np.arange(n, dtype=np.int64)
    digits = ctx.digits_of(idx)
    adj = np.zeros((n, n), dtype=np.float64)
    for k in range(spec.d):
        t = ctx.indices_from_digits((digits + spec.s_digits[k]) % ctx.q)
        adj[idx, t] = 1.0
    if not np.array_equal(adj, adj.T):
        raise IntegrityError("adjacency matrix is not symmetric")
    vals = np.linalg.eigvalsh(adj)
    merged = _merge_numeric(vals, MERGE_TOL)
    snapped = tuple(
        (int(round(v)) if abs(v - round(v)) <= MERGE_TOL else v, m)
        for v, m in merged
    )
    return Spectrum(entries=snapped, exact=False, n=n, d=spec.d)


def spectral_deviation(a: Spectrum, b: Spectrum) -> float:
    """Largest pointwise gap between two sorted full eigenvalue lists."""
    if a.n != b.n:
        raise ParameterError(f"spectra have different sizes {a.n} and {b.n}")
    return float(np.abs(a.expanded() - b.expanded()).max())
