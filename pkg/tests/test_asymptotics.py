import json
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from bergman_asymptotics import asymptotics as asy
from bergman_asymptotics.bergman import build_basis, zeros_of_p
from bergman_asymptotics.conformal import exterior_map
from bergman_asymptotics.domains import PRESETS, Disk, SemiDisk, convex_hull
from bergman_asymptotics.precision import PrecisionContext, PrecisionError

CTX = PrecisionContext(256)
mp = CTX.mp


@pytest.fixture(scope="module")
def disk20():
    return build_basis(Disk(1), 20, bits=256, verify=False)


def test_semidisk_alpha0():
    basis = build_basis(SemiDisk(1), 3, bits=256, verify=False)
    gamma = exterior_map(SemiDisk(1), CTX).gamma
    a = asy.alpha_series(basis.lambdas, gamma)
    assert abs(a[0] - mp.mpf(5) / 32) < mp.mpf(2) ** -240


def test_disk_alphas_vanish(disk20):
    assert max(abs(a) for a in asy.raw_alphas(disk20.lambdas, 1)) < mp.mpf(2) ** -240


def test_raw_alphas_validation():
    assert asy.raw_alphas([], 1) == []
    with pytest.raises(ValueError):
        asy.raw_alphas([mp.mpf(1)], 0)
    with pytest.raises(ValueError):
        asy.raw_alphas([mp.mpf(-1)], 1)


@pytest.mark.parametrize("offset,shift", [(0, 0), (1, 1), (3, 3)])
def test_decay_exponent_of_exact_power_laws(offset, shift):
    # alpha_n = 1/(n + shift) is an exact power law in n + offset when offset == shift
    start = 1 if shift == 0 else 0
    alphas = [None] * start + [mp.mpf(1) / (n + shift) for n in range(start, 30)]
    s = asy.decay_exponent_series(alphas, offset=offset)
    first = 2 if shift == 0 else 1
    assert all(abs(v - 1) < mp.mpf(2) ** -240 for v in s[first:])
    assert s[0] is None


def test_decay_exponent_of_inverse_square():
    alphas = [None] + [mp.mpf(1) / (n * n) for n in range(1, 20)]
    s = asy.decay_exponent_series(alphas)
    assert s[1] is None
    assert all(abs(v - 2) < mp.mpf(2) ** -240 for v in s[2:])


def test_decay_exponent_marks_nonpositive_entries():
    s = asy.decay_exponent_series([0.5, 0.0, 0.25, 0.125], offset=1)
    assert s[:3] == [None, None, None]
    assert abs(s[3] - 0.6931471805599453 / 0.28768207245178085) < 1e-12


def test_fit_recovers_power_law():
    alphas = [None] + [mp.mpf("0.5") / n for n in range(1, 40)]
    C, s, rms = asy.fit_power_law(alphas, range(5, 40))
    assert abs(C - 0.5) < 1e-12 and abs(s - 1) < 1e-12 and rms < 1e-12


def test_fit_flags_geometric_decay():
    alphas = [mp.mpf("0.5") ** n for n in range(60)]
    _, _, rms = asy.fit_power_law(alphas, range(5, 60))
    assert rms > 0.01


def test_fit_validation():
    with pytest.raises(ValueError):
        asy.fit_power_law([1, 1, 1], [1, 2])
    with pytest.raises(ValueError):
        asy.fit_power_law([1, 1, 0, 1], [1, 2, 3])


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.3, 4), st.integers(0, 5))
def test_fit_recovers_random_power_laws(C, s, offset):
    alphas = [C / (n + offset) ** s if n + offset > 0 else None for n in range(40)]
    C_fit, s_fit, _ = asy.fit_power_law(alphas, range(10, 40), offset=offset)
    assert abs(C_fit / C - 1) < 1e-8 and abs(s_fit - s) < 1e-8


def test_alpha_clamping():
    lam = [mp.sqrt((n + 1) / mp.pi) * (1 - mp.mpf(2) ** -100) for n in range(5)]
    with pytest.warns(asy.AlphaClampWarning):
        alphas = asy.alpha_series(lam, 1)
    assert alphas == [0] * 5
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        asy.alpha_series([2 * mp.sqrt(1 / mp.pi)], 1)


def test_wrong_gamma_is_a_precision_error(disk20):
    with pytest.raises(PrecisionError):
        asy.alpha_series(disk20.lambdas, mp.mpf("1.1"))


def test_square_gamma_cross_validates(square60):
    """(lambda_n / sqrt((n+1)/pi))^(1/(n+1)) = gamma (1 - alpha_n)^(-1/(2(n+1))) -> gamma."""
    mp = square60.ctx.mp
    gamma = asy.square_gamma(square60.ctx)
    assert abs(gamma - mp.mpf("1.694426169587958")) < 1e-14
    est = [(lam / mp.sqrt((n + 1) / mp.pi)) ** (mp.mpf(1) / (n + 1))
           for n, lam in enumerate(square60.lambdas)]
    errs = [abs(e / gamma - 1) for e in est]
    assert errs[60] < 1e-4
    assert errs[60] < errs[30] < errs[10]
    assert all(a >= 0 for a in asy.alpha_series(square60.lambdas, gamma))


@pytest.mark.parametrize("name", ["ellipse", "semidisk", "disk"])
def test_alphas_nonnegative(name):
    basis = build_basis(PRESETS[name], 30)
    gamma = exterior_map(PRESETS[name], basis.ctx).gamma
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", asy.AlphaClampWarning)
        assert all(a >= 0 for a in asy.alpha_series(basis.lambdas, gamma))


def test_semidisk_alphas_decrease(semidisk60, semidisk_map):
    alphas = asy.alpha_series(semidisk60.lambdas, semidisk_map.gamma)
    assert all(a > b for a, b in zip(alphas, alphas[1:]))


# -- strong asymptotics ---------------------------------------------------------

def test_disk_strong_error_vanishes(disk20):
    fmap = exterior_map(Disk(1), disk20.ctx)
    for n in (1, 5, 20):
        assert abs(asy.strong_error_A(disk20, fmap, 3, n)) < mp.mpf(2) ** -240
        assert asy.strong_bound_ratio(disk20, fmap, Disk(1), mp.mpc(0, 2), n) < mp.mpf(2) ** -200


def test_ellipse_strong_error_is_geometric(ellipse60, ellipse_map):
    rho = ellipse_map.rho
    A = abs(asy.strong_error_A(ellipse60, ellipse_map, 3, 40))
    assert A <= 10 * mp.sqrt(40) * rho ** 40
    A30 = abs(asy.strong_error_A(ellipse60, ellipse_map, 3, 30))
    assert A < A30 * rho ** 10


def test_semidisk_strong_error_decays(semidisk60, semidisk_map):
    A = [abs(asy.strong_error_A(semidisk60, semidisk_map, mp.mpc(0, 2), n)) for n in (10, 30, 60)]
    assert A[0] > A[1] > A[2]


def test_nth_root_series_shape(disk20):
    fmap = exterior_map(Disk(1), disk20.ctx)
    series = asy.nth_root_series(disk20, fmap, 2, 20)
    assert [n for n, _, _ in series] == list(range(1, 21))
    n, root, mod = series[-1]
    # |p_n(2)|^(1/n) = (sqrt((n+1)/pi) 2^n)^(1/n)
    assert abs(root - (mp.sqrt(21 / mp.pi) * 2 ** 20) ** (mp.mpf(1) / 20)) < mp.mpf(2) ** -240
    assert mod == 2


# -- zeros ------------------------------------------------------------------------

def test_fejer_examples():
    hull = convex_hull(Disk(1))
    bad = asy.fejer_check([mp.mpc(2)], hull, ctx=CTX)
    assert not bad.passed and abs(bad.max_violation - 1) < mp.mpf(2) ** -240
    good = asy.fejer_check([mp.mpc(0), mp.mpc("0.5", "0.5")], hull, ctx=CTX)
    assert good.passed and good.max_violation == 0


def test_zero_free_examples(disk20):
    fmap = exterior_map(Disk(1), disk20.ctx)
    zero_sets = {n: zeros_of_p(disk20, n) for n in range(1, 21)}
    assert asy.zero_free_check(zero_sets, fmap, "1.2") == 1
    zero_sets[20] = zero_sets[20] + [mp.mpc(3)]
    assert asy.zero_free_check(zero_sets, fmap, "1.2") is None
    zero_sets[20] = zero_sets[20][:-1]
    zero_sets[7] = [mp.mpc(3)]
    assert asy.zero_free_check(zero_sets, fmap, "1.2") == 8
    with pytest.raises(ValueError):
        asy.zero_free_check(zero_sets, fmap, 1)


def test_semidisk_zeros_approach_the_boundary(semidisk_zeros, semidisk_map):
    """Zeros off the closed half-disk stay close to it: |Phi| is near 1."""
    for zs in semidisk_zeros.values():
        for r in zs:
            if abs(r) > 1 or r.imag < 0:
                assert abs(semidisk_map.phi(r)) < 1.2


# -- report -----------------------------------------------------------------------

def test_report_for_disk_is_json_serializable(disk20):
    fmap = exterior_map(Disk(1), disk20.ctx)
    rep = asy.build_report(disk20, fmap.gamma, fmap, z_samples=[2], zeros=True)
    doc = json.loads(json.dumps(rep.to_dict(digits=12)))
    assert len(doc["alphas"]) == 21 and doc["zero_free_n0"] == 1
    assert all(rep.alphas[n] == 0 for n in rep.clamped)
    assert len(rep.A_samples) == 20 and len(rep.nthroot_samples) == 20
    assert all(ok for _, _, ok, _ in rep.zero_diagnostics)


def test_report_without_map_skips_exterior_diagnostics():
    basis = build_basis(PRESETS["square"], 10)
    rep = asy.build_report(basis, asy.square_gamma(basis.ctx))
    assert rep.A_samples == [] and rep.zero_free_n0 is None
    assert rep.fit is not None
    assert rep.s_exponents[0] is None
