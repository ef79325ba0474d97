"""Arbitrary-precision kernels: quadrature, Hermitian Cholesky, triangular
inversion, Horner evaluation and Aberth root refinement.

Every value lives in an :class:`mpmath.MPContext` owned by a
:class:`PrecisionContext`; the global ``mpmath.mp`` is never touched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np

MIN_BITS = 64

Matrix = list  # list[list[mpc]], row-major


class PrecisionError(ArithmeticError):
    """Working precision is insufficient for the requested computation."""


class IndefiniteMatrixError(PrecisionError):
    def __init__(self, index: int, pivot=None):
        self.index = index
        self.pivot = pivot
        super().__init__(
            f"non-positive Cholesky pivot at index {index}; raise bits")


class SingularMatrixError(ArithmeticError):
    pass


class ConvergenceError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    mp = mpmath.MPContext()
    mp.prec = bits
    return mp


@dataclass(frozen=True)
class PrecisionContext:
    """Binary working precision shared by every high-precision operation."""

    bits: int

    def __post_init__(self):
        if isinstance(self.bits, bool) or not isinstance(self.bits, int):
            raise TypeError("bits must be an integer")
        if self.bits < MIN_BITS:
            raise ValueError(f"bits must be >= {MIN_BITS}, got {self.bits}")

    @property
    def mp(self) -> mpmath.MPContext:
        return _mp_context(self.bits)

    @property
    def eps(self):
        return self.mp.ldexp(self.mp.mpf(1), -self.bits)

    def real(self, x):
        return to_mpf(x, self.mp)

    def cplx(self, x):
        return to_mpc(x, self.mp)

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.bits)


def make_context(bits: int) -> PrecisionContext:
    return PrecisionContext(bits)


DEFAULT_CONTEXT = PrecisionContext(256)


def to_mpf(x, mp):
    """Convert ints, decimal strings, fractions or mpf values to ``mp.mpf``.

    Strings are parsed at the context precision, so ``"0.1"`` is correctly
    rounded at ``mp.prec`` bits rather than inherited from a binary float.
    """
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    if hasattr(x, "_mpf_"):
        return mp.mpf(x)
    return mp.mpf(x)


def to_mpc(z, mp):
    if isinstance(z, (tuple, list)):
        re, im = z
        return mp.mpc(to_mpf(re, mp), to_mpf(im, mp))
    if isinstance(z, Fraction):
        return mp.mpc(to_mpf(z, mp))
    if hasattr(z, "_mpc_"):
        return mp.mpc(z)
    if isinstance(z, str):
        return mp.mpc(mp.mpmathify(z))
    return mp.mpc(z)


# ---------------------------------------------------------------------------
# Quadrature

@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple
    weights: tuple

    def __len__(self):
        return len(self.nodes)


def _legendre_and_derivative(k, x, mp):
    p0, p1 = mp.mpf(1), x
    for j in range(2, k + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    if k == 0:
        return mp.mpf(1), mp.mpf(0)
    # derivative from the three-term identity (1 - x^2) P_k' = k (P_{k-1} - x P_k)
    dp = k * (p0 - x * p1) / (1 - x * x)
    return p1, dp


def gauss_legendre_rule(k: int, ctx: PrecisionContext) -> QuadratureRule:
    """k-point Gauss-Legendre rule on [-1, 1], exact to degree 2k-1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return _gauss_legendre_rule(k, ctx.bits)


@lru_cache(maxsize=256)
def _gauss_legendre_rule(k: int, bits: int) -> QuadratureRule:
    mp = _mp_context(bits + 16)
    tol = mp.ldexp(mp.mpf(1), -bits)
    positive = []
    for i in range(1, k // 2 + 1):
        # Tricomi-style machine-precision start, refined by Newton
        x = mp.mpf(math.cos(math.pi * (i - 0.25) / (k + 0.5)))
        for _ in range(200):
            p, dp = _legendre_and_derivative(k, x, mp)
            step = p / dp
            x -= step
            if abs(step) < tol:
                break
        else:
            raise ConvergenceError(f"Legendre root {i} of degree {k} did not converge")
        _, dp = _legendre_and_derivative(k, x, mp)
        positive.append((x, 2 / ((1 - x * x) * dp * dp)))

    out = _mp_context(bits)
    nodes, weights = [], []
    # positive roots come out largest first
    for x, w in positive:
        nodes.append(-out.mpf(x))
        weights.append(out.mpf(w))
    if k % 2:
        _, dp = _legendre_and_derivative(k, mp.mpf(0), mp)
        nodes.append(out.mpf(0))
        weights.append(out.mpf(2 / (dp * dp)))
    for x, w in reversed(positive):
        nodes.append(out.mpf(x))
        weights.append(out.mpf(w))
    return QuadratureRule(tuple(nodes), tuple(weights))


# ---------------------------------------------------------------------------
# Dense linear algebra on lists of mpc

def _is_hermitian(H) -> bool:
    n = len(H)
    for i in range(n):
        if len(H[i]) != n:
            return False
        for j in range(i + 1):
            if H[i][j] != H[j][i].conjugate():
                return False
    return True


def cholesky_lower(H, ctx: PrecisionContext) -> Matrix:
    """Lower-triangular L with H = L L^H and a real positive diagonal.

    Raises IndefiniteMatrixError with the failing index when a pivot is not
    positive at the working precision.
    """
    if not _is_hermitian(H):
        raise ValueError("matrix is not Hermitian as stored")
    mp = ctx.mp
    n = len(H)
    zero = mp.mpc(0)
    L = [[zero] * n for _ in range(n)]
    conj_rows = [[zero] * n for _ in range(n)]
    for j in range(n):
        row_j = L[j][:j]
        d = mp.re(mp.mpc(H[j][j])) - mp.fsum(abs(v) ** 2 for v in row_j)
        if not d > 0:
            raise IndefiniteMatrixError(j, d)
        d = mp.sqrt(d)
        L[j][j] = mp.mpc(d)
        conj_rows[j] = [v.conjugate() for v in row_j]
        for i in range(j + 1, n):
            s = mp.mpc(H[i][j])
            if j:
                s -= mp.fdot(L[i][:j], conj_rows[j])
            L[i][j] = s / d
    return L


def lower_triangular_inverse(L, ctx: PrecisionContext) -> Matrix:
    mp = ctx.mp
    n = len(L)
    zero = mp.mpc(0)
    X = [[zero] * n for _ in range(n)]
    for i in range(n):
        if L[i][i] == 0:
            raise SingularMatrixError(f"zero diagonal entry at index {i}")
    # row i of X from row i of X L = I
    for i in range(n):
        X[i][i] = 1 / mp.mpc(L[i][i])
        for j in range(i - 1, -1, -1):
            s = mp.fdot((X[i][k], L[k][j]) for k in range(j + 1, i + 1))
            X[i][j] = -s / L[j][j]
    return X


def matmul(A, B, ctx: PrecisionContext) -> Matrix:
    mp = ctx.mp
    cols = list(zip(*B))
    return [[mp.fdot(row, col) for col in cols] for row in A]


def conj_transpose(A) -> Matrix:
    return [[v.conjugate() for v in col] for col in zip(*A)]


def max_abs(A):
    return max(abs(v) for row in A for v in row)


# ---------------------------------------------------------------------------
# Polynomials

def horner_eval(coeffs: Sequence, z):
    """Value of sum(coeffs[k] * z**k); coefficients ascend by power."""
    if len(coeffs) == 0:
        raise ValueError("coeffs must be nonempty")
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def _horner_with_derivative(coeffs, z):
    p = coeffs[-1]
    dp = 0 * p
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _companion_seed(coeffs) -> np.ndarray:
    lead = complex(coeffs[-1])
    c = np.array([complex(v) / lead for v in coeffs], dtype=complex)
    if not np.all(np.isfinite(c)):
        raise FloatingPointError
    # np.roots wants descending order
    return np.roots(c[::-1])


def polynomial_roots(coeffs: Sequence, ctx: PrecisionContext,
                     max_sweeps: int = 500) -> list:
    """All roots of sum(coeffs[k] z^k) by Aberth-Ehrlich refinement.

    Seeds come from a double-precision companion eigenvalue solve; each root
    is refined until |p(r)| <= 2^(-bits/2) * max|c| * max(1, |r|)^deg.
    """
    mp = ctx.mp
    coeffs = [to_mpc(c, mp) for c in coeffs]
    deg = len(coeffs) - 1
    if deg < 1 or coeffs[-1] == 0:
        raise ValueError("need degree >= 1 and a nonzero leading coefficient")
    scale = max(abs(c) for c in coeffs)
    tol = mp.ldexp(scale, -(ctx.bits // 2))

    try:
        seed = _companion_seed(coeffs)
        if len(seed) != deg or not np.all(np.isfinite(seed)):
            raise FloatingPointError
    except (FloatingPointError, np.linalg.LinAlgError):
        radius = float(abs(coeffs[0] / coeffs[-1])) ** (1.0 / deg) or 1.0
        seed = radius * np.exp(2j * np.pi * (np.arange(deg) + 0.25) / deg)
    z = [mp.mpc(complex(s)) for s in seed]

    def done(p, r):
        return abs(p) <= tol * max(1, abs(r)) ** deg

    for _ in range(max_sweeps):
        converged = True
        for i in range(deg):
            p, dp = _horner_with_derivative(coeffs, z[i])
            if done(p, z[i]):
                continue
            converged = False
            ratio = p / dp if dp != 0 else mp.mpc(mp.eps, mp.eps)
            repulsion = mp.fsum(1 / (z[i] - z[j]) for j in range(deg)
                                if j != i and z[i] != z[j])
            z[i] -= ratio / (1 - ratio * repulsion)
        if converged:
            return z
    raise ConvergenceError(f"Aberth iteration did not converge in {max_sweeps} sweeps")
