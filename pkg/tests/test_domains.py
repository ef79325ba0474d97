from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from bergman_asymptotics.domains import (
    PRESETS,
    CircularArc,
    Disk,
    Ellipse,
    InvalidDomainError,
    Polygon,
    Segment,
    SemiDisk,
    boundary_arcs,
    contains,
    contour_moment,
    convex_hull,
    distance_to_boundary,
    domain_from_descriptor,
    gram_matrix,
    moment,
)
from bergman_asymptotics.bergman import orthonormalize
from bergman_asymptotics.precision import PrecisionContext

CTX = PrecisionContext(256)
mp = CTX.mp
TIGHT = mp.mpf(2) ** (-256 + 20)

L_SHAPE = Polygon(((0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)))


def polar_semidisk_oracle(m, n):
    """2-D quadrature of r^(m+n+1) e^{i(m-n)t} over 0<r<1, 0<t<pi (independent path)."""
    q = PrecisionContext(110).mp
    return q.quad(lambda r, t: r ** (m + n + 1) * q.expj((m - n) * t), [0, 1], [0, q.pi])


def test_boundary_arcs_presets():
    (circle,) = boundary_arcs(Disk(1), CTX)
    assert isinstance(circle, CircularArc) and circle.end - circle.start == 2 * mp.pi
    seg, arc = boundary_arcs(SemiDisk(1), CTX)
    assert isinstance(seg, Segment) and (seg.z0, seg.z1) == (-1, 1)
    assert isinstance(arc, CircularArc) and (arc.start, arc.end) == (0, mp.pi)
    square = boundary_arcs(PRESETS["square"], CTX)
    assert [(s.z0, s.z1) for s in square] == [(0, 1), (1, 1 + 1j), (1 + 1j, 1j), (1j, 0)]


@pytest.mark.parametrize("verts", [
    ((0, 0), (1, 0)),                       # too few
    ((0, 0), (0, 1), (1, 1), (1, 0)),       # clockwise
    ((0, 0), (1, 1), (1, 0), (0, 1)),       # bow tie
    ((0, 0), (2, 0), (1, 0), (1, 1)),       # zero-angle cusp at (2, 0)
])
def test_invalid_polygons(verts):
    with pytest.raises(InvalidDomainError):
        Polygon(verts)


def test_moment_examples():
    assert abs(moment(2, 2, Disk(1), CTX) - mp.pi / 3) < TIGHT
    assert moment(1, 0, SemiDisk(1), CTX) == mp.mpc(0, mp.mpf(2) / 3)
    assert moment(2, 0, SemiDisk(1), CTX) == 0


@pytest.mark.parametrize("m,n", [(1, 0), (2, 0), (0, 0), (3, 1), (2, 5), (4, 4)])
def test_semidisk_closed_form_matches_polar_quadrature(m, n):
    oracle = polar_semidisk_oracle(m, n)
    assert abs(complex(moment(m, n, SemiDisk(1), CTX)) - complex(oracle)) < 1e-25


def test_semidisk_closed_form_matches_green_contour():
    worst = max(abs(moment(m, n, SemiDisk(1), CTX) - contour_moment(m, n, SemiDisk(1), CTX))
                for m in range(21) for n in range(21))
    assert worst <= TIGHT


def test_semidisk_scales_with_radius():
    a = moment(3, 2, SemiDisk("0.5"), CTX)
    b = moment(3, 2, SemiDisk(1), CTX)
    assert abs(a - b * mp.mpf("0.5") ** 7) < TIGHT


def test_gram_matrix_examples():
    D = gram_matrix(2, Disk(1), CTX)
    for m in range(3):
        for n in range(3):
            expected = mp.pi / (n + 1) if m == n else 0
            assert abs(D[m][n] - expected) < TIGHT
    S = gram_matrix(1, SemiDisk(1), CTX)
    assert abs(S[0][0] - mp.pi / 2) < TIGHT and abs(S[1][1] - mp.pi / 4) < TIGHT
    assert S[1][0] == mp.mpc(0, mp.mpf(2) / 3) and S[0][1] == mp.mpc(0, -mp.mpf(2) / 3)
    Q = gram_matrix(0, PRESETS["square"], CTX)
    assert abs(Q[0][0] - 1) < TIGHT


def test_disk_moments_closed_form():
    r = mp.mpf("1.5")
    M = gram_matrix(12, Disk("1.5"), CTX)
    for m in range(13):
        for n in range(13):
            if m != n:
                assert M[m][n] == 0
            else:
                exact = mp.pi * r ** (2 * n + 2) / (n + 1)
                assert abs(M[n][n] - exact) <= 2 * mp.ldexp(exact, -256 + 1)


@pytest.mark.parametrize("name", ["ellipse", "semidisk", "square", "disk"])
def test_gram_matrix_hermitian_positive(name):
    M = gram_matrix(20, PRESETS[name], CTX)
    for m in range(21):
        for n in range(21):
            assert M[m][n] == M[n][m].conjugate()
    orthonormalize(M, CTX)  # Cholesky succeeds


def test_ellipse_moments_against_closed_forms():
    a, b = mp.mpf(1), mp.mpf("0.5")
    e = Ellipse(1, "0.5")
    assert abs(moment(0, 0, e, CTX) - mp.pi * a * b) < TIGHT
    assert abs(moment(1, 1, e, CTX) - mp.pi * a * b * (a * a + b * b) / 4) < TIGHT
    assert abs(moment(2, 0, e, CTX) - mp.pi * a * b * (a * a - b * b) / 4) < TIGHT
    # batched (uniform node count) and per-entry node counts agree: both are exact
    G = gram_matrix(8, e, CTX)
    assert max(abs(G[m][n] - moment(m, n, e, CTX)) for m in range(9) for n in range(m + 1)) < TIGHT


def test_square_moments_against_direct_integration():
    # int_0^1 int_0^1 (x+iy)^m (x-iy)^n dx dy expanded binomially
    from math import comb
    sq = PRESETS["square"]
    for m, n in [(0, 0), (1, 0), (2, 1), (3, 3), (5, 2)]:
        total = mp.mpc(0)
        for j in range(m + 1):
            for k in range(n + 1):
                px = m - j + n - k
                py = j + k
                coef = comb(m, j) * comb(n, k) * mp.mpc(0, 1) ** j * mp.mpc(0, -1) ** k
                total += coef / ((px + 1) * (py + 1))
        assert abs(moment(m, n, sq, CTX) - total) < TIGHT
        assert abs(gram_matrix(m if m > n else n, sq, CTX)[m][n] - total) < TIGHT


@settings(max_examples=15, deadline=None)
@given(st.fractions(min_value=Fraction(1, 4), max_value=4), st.integers(0, 6), st.integers(0, 6))
def test_polygon_scaling_covariance(t, m, n):
    tri = Polygon(((0, 0), (2, 0), (Fraction(1, 2), 1)))
    base = moment(m, n, tri, CTX)
    scaled = moment(m, n, tri.scaled(t), CTX)
    factor = (mp.mpf(t.numerator) / t.denominator) ** (m + n + 2)
    assert abs(scaled - base * factor) <= TIGHT * max(1, abs(scaled))


def test_convex_hull_membership():
    assert contains(convex_hull(Disk(1)), "0.5", CTX)
    assert not contains(convex_hull(Disk(1)), 2, CTX)
    assert contains(convex_hull(SemiDisk(1)), mp.mpc(0, 0.5), CTX)
    assert not contains(convex_hull(SemiDisk(1)), mp.mpc(0, -0.5), CTX)


def _brute_force_hull_vertices(points):
    """A point is a hull vertex iff it lies in no triangle of the other points."""
    def in_triangle(p, a, b, c):
        def cross(o, u, v):
            return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])
        d = [cross(a, b, p), cross(b, c, p), cross(c, a, p)]
        return not (min(d) < 0 < max(d))

    out = set()
    for p in points:
        others = [q for q in points if q != p]
        if not any(in_triangle(p, *tri) for tri in combinations(others, 3)):
            out.add(p)
    return out


def test_convex_hull_of_l_shape():
    hull = convex_hull(L_SHAPE)
    assert len(hull.vertices) == 5
    assert set(hull.vertices) == _brute_force_hull_vertices(list(L_SHAPE.vertices))
    assert (1, 1) not in hull.vertices
    assert contains(hull, mp.mpc("1.4", "1.4"), CTX)
    assert not contains(L_SHAPE, mp.mpc("1.4", "1.4"), CTX)


def test_distance_to_boundary_examples():
    assert distance_to_boundary(3, Disk(1), CTX) == 2
    assert distance_to_boundary(mp.mpc(0, -2), SemiDisk(1), CTX) == 2
    z = 2 * mp.expjpi(mp.mpf(1) / 4)
    assert abs(distance_to_boundary(z, SemiDisk(1), CTX) - 1) < TIGHT
    assert abs(distance_to_boundary(-2, SemiDisk(1), CTX) - 1) < TIGHT
    assert abs(distance_to_boundary(3, Ellipse(1, "0.5"), CTX) - 2) < TIGHT
    assert abs(distance_to_boundary(mp.mpc(0, 2), Ellipse(1, "0.5"), CTX) - mp.mpf("1.5")) < TIGHT
    assert abs(distance_to_boundary(mp.mpc(2, 2), PRESETS["square"], CTX) - mp.sqrt(2)) < TIGHT


def test_descriptor_round_trip():
    for dom in PRESETS.values():
        again = domain_from_descriptor(dom.descriptor())
        assert again.descriptor() == dom.descriptor()
    with pytest.raises(InvalidDomainError):
        domain_from_descriptor({"type": "annulus"})
    with pytest.raises(InvalidDomainError):
        domain_from_descriptor({"type": "disk"})


def test_descriptor_decimals_parse_at_context_precision():
    d = domain_from_descriptor({"type": "disk", "r": "0.1"})
    ctx = PrecisionContext(512)
    area = moment(0, 0, d, ctx)
    assert abs(area - ctx.mp.pi / 100) < ctx.mp.mpf(2) ** -500
