"""Bergman orthonormal polynomials from the monomial Gram matrix.

Cholesky M = L L^H followed by C = L^{-1} is Gram-Schmidt on 1, z, z^2, ...
in matrix form: row n of C holds the coefficients of p_n (ascending), and the
diagonal gives the leading coefficients lambda_n = 1 / L[n][n].
"""
from __future__ import annotations

import dataclasses
import json
import logging
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import mpmath

from .domains import Domain, MomentMatrix, domain_fingerprint, domain_from_descriptor, gram_matrix
from .precision import (
    IndefiniteMatrixError,
    PrecisionContext,
    PrecisionError,
    cholesky_lower,
    horner_eval,
    lower_triangular_inverse,
    polynomial_roots,
    to_mpc,
)

log = logging.getLogger(__name__)

VERIFY_RTOL = 1e-15
MAX_ESCALATIONS = 3


@dataclass(frozen=True)
class OrthonormalBasis:
    order: int
    coeffs: tuple          # row n: coefficients of p_n, ascending, length n+1
    lambdas: tuple
    domain: Domain
    bits: int
    gram_fingerprint: str

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.bits)

    def eval(self, n: int, z):
        return eval_p(self, n, z)


def default_bits(N: int) -> int:
    return max(256, 13 * N + 64)


def orthonormalize(M: MomentMatrix, ctx: PrecisionContext | None = None,
                   retry: bool = True) -> OrthonormalBasis:
    """Bergman basis of the Gram matrix ``M``.

    On an indefinite pivot the Gram matrix is rebuilt from its domain at twice
    the precision and factored once more before giving up.
    """
    ctx = ctx or PrecisionContext(M.bits)
    try:
        L = cholesky_lower(M.rows(), ctx)
    except IndefiniteMatrixError as exc:
        if not retry:
            raise
        hi = ctx.doubled()
        log.warning("Cholesky failed at %d bits (index %d); retrying at %d bits",
                    ctx.bits, exc.index, hi.bits)
        return orthonormalize(gram_matrix(M.order, M.domain, hi), hi, retry=False)
    C = lower_triangular_inverse(L, ctx)
    mp = ctx.mp
    coeffs = tuple(tuple(C[n][: n + 1]) for n in range(M.order + 1))
    lambdas = tuple(mp.re(C[n][n]) for n in range(M.order + 1))
    return OrthonormalBasis(M.order, coeffs, lambdas, M.domain, ctx.bits, M.fingerprint)


def build_basis(domain: Domain, N: int, bits: int | None = None,
                verify: bool = True) -> OrthonormalBasis:
    """Basis up to degree N under the default precision policy.

    With ``verify`` the construction is repeated at twice the precision and
    lambda_N must agree to 1e-15 relative; otherwise precision is doubled
    again, at most MAX_ESCALATIONS times.
    """
    bits = bits or default_bits(N)
    ctx = PrecisionContext(bits)
    basis = orthonormalize(gram_matrix(N, domain, ctx), ctx)
    if not verify:
        return basis
    for _ in range(MAX_ESCALATIONS):
        hi = PrecisionContext(2 * basis.bits)
        check = orthonormalize(gram_matrix(N, domain, hi), hi)
        rel = abs(check.lambdas[N] - basis.lambdas[N]) / check.lambdas[N]
        if rel <= VERIFY_RTOL:
            return basis
        log.info("lambda_%d moved by %.3g between %d and %d bits; escalating",
                 N, float(rel), basis.bits, hi.bits)
        basis = check
    raise PrecisionError(f"lambda_{N} not stable after {MAX_ESCALATIONS} escalations")


def eval_p(basis: OrthonormalBasis, n: int, z):
    if not 0 <= n <= basis.order:
        raise IndexError(f"degree {n} outside 0..{basis.order}")
    return horner_eval(basis.coeffs[n], to_mpc(z, basis.ctx.mp))


def zeros_of_p(basis: OrthonormalBasis, n: int, ctx: PrecisionContext | None = None) -> list:
    if not 1 <= n <= basis.order:
        raise IndexError(f"degree {n} outside 1..{basis.order}")
    return polynomial_roots(basis.coeffs[n], ctx or basis.ctx)


def lambda_series(basis: OrthonormalBasis) -> list:
    return list(basis.lambdas)


def orthonormality_residual(basis: OrthonormalBasis, M: MomentMatrix):
    """max |(C M C^H - I)[i][j]| over the lower triangle (the product is Hermitian)."""
    mp = basis.ctx.mp
    n = basis.order + 1
    C = basis.coeffs
    rows = M.entries
    # T = C M uses only the stored (lower-triangular) part of C
    T = [[mp.fdot((C[i][k], rows[k][l]) for k in range(i + 1)) for l in range(n)]
         for i in range(n)]
    worst = mp.mpf(0)
    for i in range(n):
        for j in range(i + 1):
            v = mp.fdot((T[i][l], C[j][l].conjugate()) for l in range(j + 1))
            if i == j:
                v -= 1
            worst = max(worst, abs(v))
    return worst


# ---------------------------------------------------------------------------
# Cache files

def decimal_digits(bits: int) -> int:
    # ceil(bits * log10 2) + 1 digits are always enough for a lossless round trip
    return max(math.ceil(bits * 0.302), math.ceil(bits * math.log10(2)) + 1)


def basis_to_dict(basis: OrthonormalBasis) -> dict:
    digits = decimal_digits(basis.bits)

    def s(x):
        return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=1, max_fixed=0)

    return {
        "domain": basis.domain.descriptor(),
        "N": basis.order,
        "bits": basis.bits,
        "gram_fingerprint": basis.gram_fingerprint,
        "coefficients": [[[s(c.real), s(c.imag)] for c in row] for row in basis.coeffs],
    }


def basis_from_dict(doc: dict) -> OrthonormalBasis:
    ctx = PrecisionContext(int(doc["bits"]))
    mp = ctx.mp
    coeffs = tuple(tuple(mp.mpc(mp.mpf(re), mp.mpf(im)) for re, im in row)
                   for row in doc["coefficients"])
    N = int(doc["N"])
    if len(coeffs) != N + 1 or any(len(row) != n + 1 for n, row in enumerate(coeffs)):
        raise ValueError("coefficient table does not match N")
    return OrthonormalBasis(N, coeffs, tuple(mp.re(coeffs[n][n]) for n in range(N + 1)),
                            domain_from_descriptor(doc["domain"]), ctx.bits,
                            doc["gram_fingerprint"])


def cache_path(cache_dir, domain: Domain, N: int, bits: int) -> Path:
    return Path(cache_dir) / f"basis-{domain_fingerprint(domain)}-N{N}-b{bits}.json"


def write_cache(basis: OrthonormalBasis, cache_dir) -> Path:
    path = cache_path(cache_dir, basis.domain, basis.order, basis.bits)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(basis_to_dict(basis), fh, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_cache(cache_dir, domain: Domain, N: int, bits: int) -> OrthonormalBasis | None:
    """Cached basis, or None if absent, stale or failing re-verification."""
    path = cache_path(cache_dir, domain, N, bits)
    if not path.exists():
        return None
    try:
        basis = basis_from_dict(json.loads(path.read_text()))
    except (ValueError, KeyError, TypeError) as exc:
        log.warning("ignoring unreadable cache %s: %s", path, exc)
        return None
    ctx = PrecisionContext(bits)
    M = gram_matrix(N, domain, ctx)
    if (basis.gram_fingerprint != M.fingerprint
            or domain_fingerprint(basis.domain) != domain_fingerprint(domain)):
        log.info("cache %s has a stale fingerprint; recomputing", path)
        return None
    tol = ctx.mp.ldexp(ctx.mp.mpf(1), -bits // 2 + 16)
    if orthonormality_residual(basis, M) > tol:
        log.warning("cache %s failed orthonormality re-check", path)
        return None
    return dataclasses.replace(basis, domain=domain)
