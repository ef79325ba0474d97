"""Diagnostics for the fine asymptotics of Bergman polynomials.

alpha_n = 1 - ((n+1)/pi) gamma^(2(n+1)) / lambda_n^2 measures how far the
leading coefficients are from their limit; A_n(z) is the relative error of
p_n(z) against sqrt((n+1)/pi) Phi(z)^n Phi'(z) in the exterior domain.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import mpmath
import numpy as np

from .bergman import OrthonormalBasis, eval_p, zeros_of_p
from .conformal import ExteriorMap
from .domains import Domain, contains, convex_hull, distance_to_boundary, violation
from .precision import DEFAULT_CONTEXT, PrecisionContext, PrecisionError, to_mpc, to_mpf

# Reciprocal of the unit-square capacity Gamma(1/4)^2 / (4 pi^(3/2)); classical,
# not derived here, so cross-check against lambda_n^(1/(n+1)) before use.
def square_gamma(ctx: PrecisionContext):
    mp = ctx.mp
    return 4 * mp.pi ** mp.mpf(1.5) / mp.gamma(mp.mpf(1) / 4) ** 2


# Abscissa shift used for the s column of the published semi-disk table:
# alpha_n is treated as a function of n + 1, matching the (n+1) weight above.
TABLE_OFFSET = 1


class AlphaClampWarning(UserWarning):
    pass


def raw_alphas(lambdas: Sequence, gamma) -> list:
    if not lambdas:
        return []
    mp = lambdas[0].context
    if not gamma > 0 or any(not lam > 0 for lam in lambdas):
        raise ValueError("lambdas and gamma must be positive")
    g2 = mp.mpf(gamma) ** 2
    out = []
    for n, lam in enumerate(lambdas):
        out.append(1 - (n + 1) / mp.pi * g2 ** (n + 1) / lam ** 2)
    return out


def alpha_series(lambdas: Sequence, gamma) -> list:
    """alpha_0..alpha_N, with negatives below 2^(-bits/4) clamped to zero.

    Clamping emits an AlphaClampWarning; a larger negative value means the
    wrong gamma or too few bits and raises PrecisionError.
    """
    alphas = raw_alphas(lambdas, gamma)
    if not alphas:
        return alphas
    mp = lambdas[0].context
    tol = mp.ldexp(mp.mpf(1), -(mp.prec // 4))
    clamped = []
    for n, a in enumerate(alphas):
        if a < 0:
            if -a >= tol:
                raise PrecisionError(f"alpha_{n} = {mp.nstr(a, 6)} is negative beyond tolerance")
            alphas[n] = mp.mpf(0)
            clamped.append(n)
    if clamped:
        warnings.warn(f"clamped {len(clamped)} tiny negative alphas to 0", AlphaClampWarning,
                      stacklevel=2)
    return alphas


def decay_exponent_series(alphas: Sequence, offset: int = 0) -> list:
    """Local exponents s_n of the hypothesis alpha_n ~ C / (n + offset)^s.

    s_n = ln(alpha_{n-1}/alpha_n) / ln((n + offset)/(n - 1 + offset)); entries
    are None where undefined (n = 0, a missing or non-positive alpha, or a
    zero abscissa).
    """
    out = [None]
    for n in range(1, len(alphas)):
        a0, a1 = alphas[n - 1], alphas[n]
        if a0 is None or a1 is None or not (a0 > 0 and a1 > 0) or n - 1 + offset <= 0:
            out.append(None)
            continue
        if hasattr(a1, "context"):
            mp = a1.context
            out.append(mp.log(a0 / a1) / mp.log(mp.mpf(n + offset) / (n - 1 + offset)))
        else:
            out.append(math.log(a0 / a1) / math.log((n + offset) / (n - 1 + offset)))
    return out


def fit_power_law(alphas: Sequence, n_range: Iterable[int], offset: int = 0):
    """Least squares on ln alpha_n = ln C - s ln(n + offset); returns (C, s, rms)."""
    ns = list(n_range)
    if len(ns) < 3:
        raise ValueError("need at least 3 points")
    ys = []
    for n in ns:
        a = alphas[n]
        if not a > 0:
            raise ValueError(f"alpha_{n} is not positive")
        # mpf alphas may underflow a float, so take the log before converting
        ys.append(float(a.context.log(a)) if hasattr(a, "context") else math.log(a))
    x = np.log(np.asarray(ns, dtype=float) + offset)
    y = np.asarray(ys)
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (intercept + slope * x)) ** 2)))
    return math.exp(intercept), -float(slope), rms


def _log_comparison(map_: ExteriorMap, z, n: int):
    """log of sqrt((n+1)/pi) Phi(z)^n Phi'(z), up to a multiple of 2 pi i."""
    mp = map_.ctx.mp
    return (mp.log((n + 1) / mp.pi) / 2 + n * mp.log(map_.phi(z))
            + mp.log(map_.phi_prime(z)))


def strong_error_A(basis: OrthonormalBasis, map_: ExteriorMap, z, n: int):
    """A_n(z) = p_n(z) / (sqrt((n+1)/pi) Phi^n Phi') - 1."""
    mp = basis.ctx.mp
    z = to_mpc(z, mp)
    d = map_.phi_prime(z)
    if d == 0:
        raise ArithmeticError("Phi' vanished in the exterior domain")
    p = eval_p(basis, n, z)
    if p == 0:
        return mp.mpc(-1)
    return mp.exp(mp.log(p) - _log_comparison(map_, z, n)) - 1


def strong_bound_ratio(basis: OrthonormalBasis, map_: ExteriorMap, domain: Domain, z, n: int):
    """sqrt(n) |A_n(z)| dist(z, boundary) |Phi'(z)|, expected to stay bounded in n."""
    mp = basis.ctx.mp
    z = to_mpc(z, mp)
    A = strong_error_A(basis, map_, z, n)
    dist = distance_to_boundary(z, domain, basis.ctx)
    return mp.sqrt(n) * abs(A) * dist * abs(map_.phi_prime(z))


def nth_root_series(basis: OrthonormalBasis, map_: ExteriorMap, z, n_max: int) -> list:
    """[(n, |p_n(z)|^(1/n) or None, |Phi(z)|)] for n = 1..n_max."""
    mp = basis.ctx.mp
    z = to_mpc(z, mp)
    mod_phi = abs(map_.phi(z))
    out = []
    for n in range(1, n_max + 1):
        p = eval_p(basis, n, z)
        out.append((n, mp.exp(mp.log(abs(p)) / n) if p != 0 else None, mod_phi))
    return out


@dataclass(frozen=True)
class FejerVerdict:
    passed: bool
    max_violation: object


def fejer_check(zeros: Iterable, hull: Domain, tol=1e-20,
                ctx: PrecisionContext | None = None) -> FejerVerdict:
    """Every zero must lie in the (convex) hull within ``tol``."""
    worst = 0
    for r in zeros:
        c = ctx or (PrecisionContext(r.context.prec) if hasattr(r, "context")
                    else DEFAULT_CONTEXT)
        worst = max(worst, violation(hull, r, c))
    return FejerVerdict(bool(worst <= tol), worst)


def zero_free_check(zero_sets: Mapping[int, Sequence], map_: ExteriorMap, R,
                    tol=1e-20) -> int | None:
    """Smallest n0 such that no zero of p_n, n >= n0, has |Phi(zero)| >= R.

    Zeros in closure(G) (within ``tol``) are skipped. Returns None when the
    last computed degree still has such a zero.
    """
    ctx = map_.ctx
    R = to_mpf(R, ctx.mp)
    if not R > 1:
        raise ValueError("R must exceed 1")
    bad = {}
    for n, zs in zero_sets.items():
        bad[n] = False
        for r in zs:
            if contains(map_.domain, r, ctx, tol):
                continue
            if abs(map_.phi(r)) >= R:
                bad[n] = True
                break
    ns = sorted(bad)
    if not ns:
        return None
    n0 = None
    for n in reversed(ns):
        if bad[n]:
            break
        n0 = n
    return n0


@dataclass
class AsymptoticsReport:
    domain: dict
    gamma: object
    bits: int
    lambdas: list
    alphas: list
    s_exponents: list
    clamped: list = field(default_factory=list)
    A_samples: list = field(default_factory=list)        # (z, n, A, bound_ratio)
    nthroot_samples: list = field(default_factory=list)  # (z, n, |p_n|^(1/n), |Phi|)
    zero_diagnostics: list = field(default_factory=list)  # (n, max|Phi(zero)|, fejer ok, violation)
    zero_free_n0: int | None = None
    fit: tuple | None = None

    def to_dict(self, digits: int = 20) -> dict:
        return _jsonable(self.__dict__, digits)


def _jsonable(obj, digits):
    if isinstance(obj, dict):
        return {k: _jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, digits) for v in obj]
    if hasattr(obj, "_mpc_"):
        return [mpmath.nstr(obj.real, digits), mpmath.nstr(obj.imag, digits)]
    if hasattr(obj, "_mpf_"):
        return mpmath.nstr(obj, digits)
    if isinstance(obj, complex):
        return [repr(obj.real), repr(obj.imag)]
    return obj


def build_report(basis: OrthonormalBasis, gamma, map_: ExteriorMap | None = None,
                 z_samples: Sequence = (), zeros: bool = False, R=1.2,
                 fit_range: Sequence[int] | None = None) -> AsymptoticsReport:
    """Assemble every diagnostic available for ``basis``.

    Strong-asymptotic, n-th root and zero-free diagnostics need ``map_``;
    zero computations run only when ``zeros`` is set.
    """
    mp = basis.ctx.mp
    gamma = mp.mpf(gamma)
    raw = raw_alphas(basis.lambdas, gamma)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AlphaClampWarning)
        alphas = alpha_series(basis.lambdas, gamma)
    clamped = [n for n, a in enumerate(raw) if a < 0]
    report = AsymptoticsReport(
        domain=basis.domain.descriptor(), gamma=gamma, bits=basis.bits,
        lambdas=list(basis.lambdas), alphas=alphas,
        s_exponents=decay_exponent_series(alphas, offset=TABLE_OFFSET), clamped=clamped)

    positive = [n for n in range(1, basis.order + 1) if alphas[n] > 0]
    if fit_range is None:
        fit_range = [n for n in positive if n >= basis.order // 2]
    if len(fit_range) >= 3 and all(alphas[n] > 0 for n in fit_range):
        report.fit = fit_power_law(alphas, fit_range)

    if map_ is not None:
        for z in z_samples:
            z = to_mpc(z, mp)
            for n in range(1, basis.order + 1):
                A = strong_error_A(basis, map_, z, n)
                ratio = strong_bound_ratio(basis, map_, basis.domain, z, n)
                report.A_samples.append((z, n, abs(A), ratio))
            for n, root, mod_phi in nth_root_series(basis, map_, z, basis.order):
                report.nthroot_samples.append((z, n, root, mod_phi))

    if zeros:
        hull = convex_hull(basis.domain)
        zero_sets = {}
        for n in range(1, basis.order + 1):
            zs = zeros_of_p(basis, n)
            zero_sets[n] = zs
            verdict = fejer_check(zs, hull, ctx=basis.ctx)
            outside = [abs(map_.phi(r)) for r in zs
                       if map_ is not None and not contains(basis.domain, r, basis.ctx, 1e-20)]
            report.zero_diagnostics.append(
                (n, max(outside) if outside else None, verdict.passed, verdict.max_violation))
        if map_ is not None:
            report.zero_free_n0 = zero_free_check(zero_sets, map_, R)
    return report
