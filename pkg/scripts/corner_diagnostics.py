"""Exterior diagnostics for the half-disk: strong-asymptotic error, n-th root
limit and zero locations.

    python scripts/corner_diagnostics.py [--degree 60] [--z -2] [--R 1.2]
"""
import argparse

import mpmath

from bergman_asymptotics import SemiDisk, build_basis, exterior_map, zeros_of_p
from bergman_asymptotics import asymptotics as asy
from bergman_asymptotics.domains import convex_hull


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--degree", type=int, default=60)
    parser.add_argument("--z", default="-2")
    parser.add_argument("--R", default="1.2")
    args = parser.parse_args()

    domain = SemiDisk(1)
    basis = build_basis(domain, args.degree)
    fmap = exterior_map(domain, basis.ctx)
    mp = basis.ctx.mp
    z = mp.mpc(mp.mpmathify(args.z))

    _, s, rms = asy.fit_power_law(asy.alpha_series(basis.lambdas, fmap.gamma),
                                  range(basis.order // 2, basis.order + 1))
    print(f"alpha_n ~ C/n^s fit over the upper half of degrees: s = {s:.4f}, rms {rms:.1e}\n")

    roots = {n: r for n, r, _ in asy.nth_root_series(basis, fmap, z, basis.order)}
    print(f"z = {mpmath.nstr(z, 6)}, |Phi(z)| = {mpmath.nstr(abs(fmap.phi(z)), 10)}")
    print(f"{'n':>3} {'|A_n(z)|':>12} {'sqrt(n)|A_n| d|Phi`|':>22} {'|p_n(z)|^(1/n)':>16}")
    for n in range(5, basis.order + 1, 5):
        A = abs(asy.strong_error_A(basis, fmap, z, n))
        ratio = asy.strong_bound_ratio(basis, fmap, domain, z, n)
        print(f"{n:>3} {mpmath.nstr(A, 6):>12} {mpmath.nstr(ratio, 6):>22}"
              f" {mpmath.nstr(roots[n], 10):>16}")

    hull = convex_hull(domain)
    zero_sets = {n: zeros_of_p(basis, n) for n in range(1, basis.order + 1)}
    worst = max(asy.fejer_check(zs, hull, ctx=basis.ctx).max_violation
                for zs in zero_sets.values())
    n0 = asy.zero_free_check(zero_sets, fmap, args.R)
    print(f"\nlargest distance of a zero outside the convex hull: {mpmath.nstr(worst, 3)}")
    print(f"no zeros with |Phi| >= {args.R} from degree {n0} on")
    print("\nzeros of p_n for n =", basis.order)
    for r in sorted(zero_sets[basis.order], key=lambda w: float(mpmath.arg(w - 0.5j))):
        print(f"  {mpmath.nstr(r.real, 10):>14} {mpmath.nstr(r.imag, 10):>14}")


if __name__ == "__main__":
    main()
