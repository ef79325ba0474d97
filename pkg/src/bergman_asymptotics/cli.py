"""Command-line front end.

    bergman-asym alpha --domain semidisk --degree 60
    bergman-asym strong --domain semidisk --degree 60 --z -2 --z 1+1j
    bergman-asym report --domain descriptor.json --degree 30 --gamma 1.7

Exit codes: 0 success, 2 usage or input error, 3 precision failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import mpmath

from . import asymptotics as asy
from .bergman import (
    build_basis,
    default_bits,
    read_cache,
    write_cache,
    zeros_of_p,
)
from .conformal import UnsupportedMapError, exterior_map
from .domains import (
    PRESETS,
    InvalidDomainError,
    Polygon,
    convex_hull,
    domain_from_descriptor,
    gram_matrix,
)
from .precision import PrecisionContext, PrecisionError

log = logging.getLogger("bergman_asymptotics")

SUBCOMMANDS = ("moments", "basis", "alpha", "strong", "zeros", "report")
NEEDS_GAMMA = {"alpha", "report"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    domain: str
    degree: int
    bits: int | None = None
    gamma: str | None = None
    output: str | None = None
    format: str = "csv"
    cache_dir: str | None = None
    z: list = field(default_factory=list)
    R: str = "1.2"
    digits: int = 20
    verify: bool = True
    zeros: bool = True


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergman-asym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--domain", required=True,
                       help=f"preset ({', '.join(PRESETS)}) or path to a JSON descriptor")
        p.add_argument("--degree", "-N", type=int, required=True)
        p.add_argument("--bits", type=int, default=None)
        p.add_argument("--gamma", default=None, help="decimal value of gamma = 1/capacity")
        p.add_argument("--output", "-o", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--cache-dir", default=os.environ.get("BERGMAN_CACHE_DIR"))
        p.add_argument("--digits", type=int, default=20)
        p.add_argument("--no-verify", dest="verify", action="store_false",
                       help="skip the doubled-precision stability check")
        if name in ("strong", "report"):
            p.add_argument("--z", action="append", default=[],
                           help="exterior sample point, e.g. -2 or 1+1j (repeatable)")
        if name in ("zeros", "report"):
            p.add_argument("--R", default="1.2", help="level for the zero-free check")
        if name == "report":
            p.add_argument("--skip-zeros", dest="zeros", action="store_false")
    return parser


def parse_config(argv) -> RunConfig:
    ns = _parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
    if cfg.degree < 0:
        raise UsageError("--degree must be >= 0")
    if cfg.bits is not None and cfg.bits < 64:
        raise UsageError("--bits must be >= 64")
    return cfg


def load_domain(spec: str):
    if spec in PRESETS:
        return PRESETS[spec]
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"unknown preset or missing descriptor file: {spec}")
    try:
        return domain_from_descriptor(json.loads(path.read_text()))
    except (json.JSONDecodeError, InvalidDomainError) as exc:
        raise UsageError(f"malformed descriptor {spec}: {exc}") from exc


def _basis(cfg: RunConfig, domain):
    bits = cfg.bits or default_bits(cfg.degree)
    if cfg.cache_dir:
        cached = read_cache(cfg.cache_dir, domain, cfg.degree, bits)
        if cached is not None:
            log.info("cache hit for N=%d bits=%d", cfg.degree, bits)
            return cached
    basis = build_basis(domain, cfg.degree, bits, verify=cfg.verify)
    if cfg.cache_dir:
        write_cache(basis, cfg.cache_dir)
    return basis


def _gamma(cfg: RunConfig, domain, ctx: PrecisionContext):
    if cfg.gamma is not None:
        try:
            g = ctx.mp.mpf(cfg.gamma)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"--gamma is not a decimal number: {cfg.gamma}") from exc
        if not g > 0:
            raise UsageError("--gamma must be positive")
        return g
    if isinstance(domain, Polygon):
        raise UsageError("polygon domains need --gamma")
    return exterior_map(domain, ctx).gamma


def _map_or_none(domain, ctx):
    try:
        return exterior_map(domain, ctx)
    except UnsupportedMapError:
        return None


def _parse_z(text: str, mp):
    try:
        return mp.mpc(mp.mpmathify(text.replace(" ", "")))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse sample point {text!r}") from exc


class _Fmt:
    def __init__(self, digits):
        self.digits = digits

    def __call__(self, x):
        if x is None:
            return ""
        if isinstance(x, (bool, int, str)):
            return str(x)
        return mpmath.nstr(x, self.digits, min_fixed=-4, max_fixed=1)

    def z(self, z):
        return f"{self(z.real)}{'+' if z.imag >= 0 else '-'}{self(abs(z.imag))}j"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_moments(cfg, domain, fmt):
    bits = cfg.bits or default_bits(cfg.degree)
    M = gram_matrix(cfg.degree, domain, PrecisionContext(bits))
    rows = [(m, n, fmt(v.real), fmt(v.imag))
            for m, row in enumerate(M.entries) for n, v in enumerate(row)]
    if cfg.format == "csv":
        return _csv(("m", "n", "re", "im"), rows)
    return _json({"domain": domain.descriptor(), "N": cfg.degree, "bits": bits,
                  "fingerprint": M.fingerprint,
                  "entries": [[[fmt(v.real), fmt(v.imag)] for v in row] for row in M.entries]})


def cmd_basis(cfg, domain, fmt):
    basis = _basis(cfg, domain)
    if cfg.format == "csv":
        rows = [(n, k, fmt(c.real), fmt(c.imag))
                for n, row in enumerate(basis.coeffs) for k, c in enumerate(row)]
        return _csv(("n", "k", "re", "im"), rows)
    return _json({"domain": domain.descriptor(), "N": basis.order, "bits": basis.bits,
                  "lambda": [fmt(x) for x in basis.lambdas],
                  "coefficients": [[[fmt(c.real), fmt(c.imag)] for c in row]
                                   for row in basis.coeffs]})


def _alpha_rows(basis, gamma, fmt):
    raw = asy.raw_alphas(basis.lambdas, gamma)
    if any(a < 0 for a in raw):
        log.info("clamped tiny negative alphas at n=%s", [n for n, a in enumerate(raw) if a < 0])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", asy.AlphaClampWarning)
        alphas = asy.alpha_series(basis.lambdas, gamma)
    s = asy.decay_exponent_series(alphas, offset=asy.TABLE_OFFSET)
    return [(n, fmt(basis.lambdas[n]), fmt(alphas[n]), fmt(s[n]))
            for n in range(basis.order + 1)]


def cmd_alpha(cfg, domain, fmt):
    basis = _basis(cfg, domain)
    gamma = _gamma(cfg, domain, basis.ctx)
    rows = _alpha_rows(basis, gamma, fmt)
    if cfg.format == "csv":
        return _csv(("n", "lambda", "alpha", "s"), rows)
    return _json({"domain": domain.descriptor(), "gamma": fmt(gamma), "bits": basis.bits,
                  "rows": [dict(zip(("n", "lambda", "alpha", "s"), r)) for r in rows]})


def _default_samples(map_):
    return [map_.psi(2)] if map_ is not None else []


def cmd_strong(cfg, domain, fmt):
    basis = _basis(cfg, domain)
    map_ = _map_or_none(domain, basis.ctx)
    if map_ is None:
        raise UsageError("strong asymptotics need a closed-form exterior map "
                         "(disk, ellipse or semidisk)")
    mp = basis.ctx.mp
    zs = [_parse_z(t, mp) for t in cfg.z] or _default_samples(map_)
    rows = []
    for z in zs:
        try:
            mod_phi = abs(map_.phi(z))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        roots = {n: r for n, r, _ in asy.nth_root_series(basis, map_, z, basis.order)}
        for n in range(1, basis.order + 1):
            A = asy.strong_error_A(basis, map_, z, n)
            ratio = asy.strong_bound_ratio(basis, map_, domain, z, n)
            rows.append((fmt.z(z), n, fmt(abs(A)), fmt(ratio), fmt(roots[n]), fmt(mod_phi)))
    header = ("z", "n", "abs_A", "bound_ratio", "nthroot", "abs_phi")
    if cfg.format == "csv":
        return _csv(header, rows)
    return _json({"domain": domain.descriptor(), "samples": [dict(zip(header, r)) for r in rows]})


def cmd_zeros(cfg, domain, fmt):
    basis = _basis(cfg, domain)
    map_ = _map_or_none(domain, basis.ctx)
    hull = convex_hull(domain)
    sets = {n: zeros_of_p(basis, n) for n in range(1, basis.order + 1)}
    rows, verdicts = [], []
    for n, zs in sets.items():
        verdict = asy.fejer_check(zs, hull, ctx=basis.ctx)
        verdicts.append((n, verdict.passed, fmt(verdict.max_violation)))
        rows.extend((n, k, fmt(r.real), fmt(r.imag)) for k, r in enumerate(zs))
    R = basis.ctx.mp.mpf(cfg.R)
    n0 = asy.zero_free_check(sets, map_, R) if map_ is not None else None
    if cfg.format == "csv":
        out = _csv(("n", "k", "re", "im"), rows)
        out += _csv(("n", "fejer_pass", "max_violation"), verdicts)
        if map_ is None:
            status = "no exterior map"
        else:
            status = n0 if n0 is not None else "not reached"
        out += _csv(("R", "zero_free_n0"), [(cfg.R, status)])
        return out
    return _json({"domain": domain.descriptor(),
                  "zeros": {str(n): [[fmt(r.real), fmt(r.imag)] for r in zs]
                            for n, zs in sets.items()},
                  "fejer": [{"n": n, "pass": ok, "max_violation": v} for n, ok, v in verdicts],
                  "R": cfg.R, "zero_free_n0": n0})


def cmd_report(cfg, domain, fmt):
    basis = _basis(cfg, domain)
    gamma = _gamma(cfg, domain, basis.ctx)
    map_ = _map_or_none(domain, basis.ctx)
    mp = basis.ctx.mp
    zs = [_parse_z(t, mp) for t in cfg.z] or _default_samples(map_)
    report = asy.build_report(basis, gamma, map_, zs, zeros=cfg.zeros, R=mp.mpf(cfg.R))
    if cfg.format == "json":
        return _json(report.to_dict(cfg.digits))
    out = _csv(("n", "lambda", "alpha", "s"),
               [(n, fmt(report.lambdas[n]), fmt(report.alphas[n]), fmt(report.s_exponents[n]))
                for n in range(basis.order + 1)])
    nth = {(fmt.z(z), n): (root, phi) for z, n, root, phi in report.nthroot_samples}
    rows = []
    for z, n, absA, ratio in report.A_samples:
        root, mod_phi = nth[(fmt.z(z), n)]
        rows.append((fmt.z(z), n, fmt(absA), fmt(ratio), fmt(root), fmt(mod_phi)))
    out += _csv(("z", "n", "abs_A", "bound_ratio", "nthroot", "abs_phi"), rows)
    return out


COMMANDS = {
    "moments": cmd_moments,
    "basis": cmd_basis,
    "alpha": cmd_alpha,
    "strong": cmd_strong,
    "zeros": cmd_zeros,
    "report": cmd_report,
}


def run(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        domain = load_domain(cfg.domain)
        if cfg.output and not Path(cfg.output).resolve().parent.is_dir():
            raise UsageError(f"output directory does not exist: {cfg.output}")
        if cfg.subcommand in NEEDS_GAMMA and isinstance(domain, Polygon) and cfg.gamma is None:
            raise UsageError("polygon domains need --gamma")
        text = COMMANDS[cfg.subcommand](cfg, domain, _Fmt(cfg.digits))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return 3
    try:
        if cfg.output:
            Path(cfg.output).write_text(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())
