"""Exterior conformal maps Phi: Omega -> {|w| > 1}, Phi(z) = gamma*z + gamma_0 + ...

Closed forms are available for the disk, the ellipse (inverse Joukowski) and
the half-disk (Moebius -> 2/3-power -> Moebius chain).
"""
from __future__ import annotations

from dataclasses import dataclass

from .domains import Disk, Domain, Ellipse, SemiDisk, contains, diameter
from .precision import DEFAULT_CONTEXT, PrecisionContext, to_mpc, to_mpf


class OutsideDomainError(ValueError):
    """Point is not in the exterior domain Omega."""


class UnsupportedMapError(ValueError):
    pass


@dataclass(frozen=True)
class ExteriorMap:
    domain: Domain
    ctx: PrecisionContext
    gamma: object

    @property
    def capacity(self):
        return 1 / self.gamma

    def _z(self, z):
        z = to_mpc(z, self.ctx.mp)
        if contains(self.domain, z, self.ctx):
            raise OutsideDomainError(f"{z} lies in the closed domain")
        return z

    def _w(self, w):
        w = to_mpc(w, self.ctx.mp)
        if not abs(w) > 1:
            raise ValueError("psi needs |w| > 1")
        return w

    def phi(self, z):
        raise NotImplementedError

    def phi_prime(self, z):
        raise NotImplementedError

    def psi(self, w):
        raise NotImplementedError


@dataclass(frozen=True)
class DiskMap(ExteriorMap):
    r: object = None

    def phi(self, z):
        return self._z(z) / self.r

    def phi_prime(self, z):
        self._z(z)
        return self.ctx.mp.mpc(1 / self.r)

    def psi(self, w):
        return self.r * self._w(w)


@dataclass(frozen=True)
class EllipseMap(ExteriorMap):
    """Inverse of the Joukowski map z = ((a+b) w + (a-b)/w) / 2."""

    a: object = None
    b: object = None
    rho: object = None

    def _root(self, z):
        # the root giving |w| > 1; the other solution has |w| = rho^2/|w| < 1
        mp = self.ctx.mp
        q = mp.sqrt(z * z - (self.a ** 2 - self.b ** 2))
        return q if abs(z + q) >= abs(z - q) else -q

    def phi(self, z):
        z = self._z(z)
        return (z + self._root(z)) / (self.a + self.b)

    def phi_prime(self, z):
        z = self._z(z)
        return (1 + z / self._root(z)) / (self.a + self.b)

    def psi(self, w):
        w = self._w(w)
        return ((self.a + self.b) * w + (self.a - self.b) / w) / 2


@dataclass(frozen=True)
class SemiDiskMap(ExteriorMap):
    """u = (z-1)/(z+1) sends Omega to the sector -pi < arg u < pi/2, s = u^(2/3)
    opens it to a half-plane containing s = 1 (the image of infinity), and a
    Moebius map with pole at 1 sends that half-plane onto |w| > 1.
    """

    r: object = None

    @property
    def _rot(self):
        mp = self.ctx.mp
        return -mp.expjpi(mp.mpf(1) / 6)

    @property
    def _mirror(self):
        mp = self.ctx.mp
        return mp.expjpi(mp.mpf(2) / 3)

    def _chain(self, z):
        mp = self.ctx.mp
        z = self._z(z) / self.r
        u = (z - 1) / (z + 1)
        theta = mp.arg(u)
        if theta > mp.pi / 2:
            raise OutsideDomainError(f"{z} maps outside the exterior sector")
        s = abs(u) ** (mp.mpf(2) / 3) * mp.expj(2 * theta / 3)
        return z, u, s

    def phi(self, z):
        _, _, s = self._chain(z)
        return self._rot * (s - self._mirror) / (s - 1)

    def phi_prime(self, z):
        z, u, s = self._chain(z)
        du = 2 / (z + 1) ** 2
        ds = 2 * s / (3 * u)
        dw = self._rot * (self._mirror - 1) / (s - 1) ** 2
        return dw * ds * du / self.r

    def psi(self, w):
        mp = self.ctx.mp
        w = self._w(w)
        s = (w - self._rot * self._mirror) / (w - self._rot)
        theta = mp.arg(s)
        u = abs(s) ** (mp.mpf(3) / 2) * mp.expj(3 * theta / 2)
        return self.r * (1 + u) / (1 - u)


def exterior_map(domain: Domain, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ExteriorMap:
    mp = ctx.mp
    if isinstance(domain, Disk):
        r = to_mpf(domain.r, mp)
        return DiskMap(domain, ctx, 1 / r, r=r)
    if isinstance(domain, Ellipse):
        a, b = to_mpf(domain.a, mp), to_mpf(domain.b, mp)
        return EllipseMap(domain, ctx, 2 / (a + b), a=a, b=b,
                          rho=mp.sqrt((a - b) / (a + b)))
    if isinstance(domain, SemiDisk):
        r = to_mpf(domain.r, mp)
        return SemiDiskMap(domain, ctx, 3 * mp.sqrt(3) / (4 * r), r=r)
    raise UnsupportedMapError(
        f"no closed-form exterior map for {type(domain).__name__}; supply gamma")


def phi(map_: ExteriorMap, z):
    return map_.phi(z)


def phi_prime(map_: ExteriorMap, z):
    return map_.phi_prime(z)


def psi(map_: ExteriorMap, w):
    return map_.psi(w)


def laurent_gamma_coeffs(map_: ExteriorMap, k_max: int, ctx: PrecisionContext = None,
                         nodes: int = 4096, radius=None) -> list:
    """gamma_0..gamma_{k_max} of Phi(z) = gamma z + sum_k gamma_k z^(-k).

    Trapezoidal contour integration of Phi(z) - gamma z over |z| = radius
    (default 10^3 times the domain diameter).
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    ctx = ctx or map_.ctx
    mp = ctx.mp
    R = to_mpf(radius, mp) if radius is not None else mp.mpf(1000 * diameter(map_.domain))
    acc = [mp.mpc(0)] * (k_max + 1)
    for j in range(nodes):
        z = R * mp.expjpi(mp.mpf(2 * j) / nodes)
        f = map_.phi(z) - map_.gamma * z
        zk = mp.mpc(1)
        for k in range(k_max + 1):
            acc[k] += f * zk
            zk *= z
    return [a / nodes for a in acc]


def level_curve(map_: ExteriorMap, R, count: int) -> list:
    """Points psi(R e^{2 pi i j / count}) on {|Phi(z)| = R}."""
    mp = map_.ctx.mp
    R = to_mpf(R, mp)
    if not R > 1:
        raise ValueError("level curves need R > 1")
    if count < 1:
        raise ValueError("count must be positive")
    return [map_.psi(R * mp.expjpi(mp.mpf(2 * j) / count)) for j in range(count)]
