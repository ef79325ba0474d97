"""Decay of alpha_n for an ellipse, compared with rho^2 and rho^4.

For the ellipse the Bergman polynomials are scaled Chebyshev polynomials of
the second kind, and alpha_n = rho^(4(n+1)) exactly, so consecutive ratios
sit at rho^4 rather than at the rate rho^2 of the general upper bound.

    python scripts/ellipse_rate.py [--a 1] [--b 0.5] [--degree 60]
"""
import argparse

import mpmath

from bergman_asymptotics import Ellipse, build_basis, exterior_map
from bergman_asymptotics import asymptotics as asy


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--a", default="1")
    parser.add_argument("--b", default="0.5")
    parser.add_argument("--degree", type=int, default=60)
    args = parser.parse_args()

    domain = Ellipse(args.a, args.b)
    basis = build_basis(domain, args.degree)
    fmap = exterior_map(domain, basis.ctx)
    alphas = asy.alpha_series(basis.lambdas, fmap.gamma)
    rho = fmap.rho
    print(f"rho = {mpmath.nstr(rho, 12)}, rho^2 = {mpmath.nstr(rho**2, 12)}, "
          f"rho^4 = {mpmath.nstr(rho**4, 12)}")
    print(f"{'n':>3} {'alpha_n':>22} {'alpha_n/alpha_(n-1)':>22} {'alpha_n/rho^(4(n+1))':>22}")
    for n in range(basis.order + 1):
        ratio = mpmath.nstr(alphas[n] / alphas[n - 1], 15) if n else ""
        exact = mpmath.nstr(alphas[n] / rho ** (4 * (n + 1)), 15)
        print(f"{n:>3} {mpmath.nstr(alphas[n], 15):>22} {ratio:>22} {exact:>22}")


if __name__ == "__main__":
    main()
