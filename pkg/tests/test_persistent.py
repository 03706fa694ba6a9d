import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from abring.currents import chi
from abring.errors import DegenerateModeError, OverflowGuardError, RingError
from abring.persistent import (
    J_MAX,
    OccupationSpec,
    c_sweep,
    closed_form,
    compensated_sum,
    integral_approximation,
    j_kernel,
    linearized_c,
    locate_j_maximum,
    log_mu_grid,
    nonrel_persistent,
    pair_sum_exact,
    persistent_current,
)
from abring.ring import HalfOddInteger, RingConfig


def brute_c(mu, lambda_f):
    """Plain loop over the occupied levels."""
    total = 0.0
    lam = 0.5
    while lam <= lambda_f:
        total += mu**2 / (mu**2 + lam**2) ** 1.5
        lam += 1.0
    return total


def mp_pair(mu, lam, beta):
    mpmath.mp.dps = 50
    mu, lam, beta = mpmath.mpf(mu), mpmath.mpf(lam), mpmath.mpf(beta)
    f = lambda n: n / mpmath.sqrt(mu**2 + n**2)  # noqa: E731
    out = f(lam + beta) + f(beta - lam)
    mpmath.mp.dps = 15
    return out


def test_j_max_value():
    assert j_kernel(1 / math.sqrt(2), 0.5) == pytest.approx(0.7698, abs=5e-5)
    assert J_MAX == pytest.approx(j_kernel(1 / math.sqrt(2), 0.5), rel=1e-15)


def test_j_one_one():
    assert j_kernel(1.0, 1.0) == pytest.approx(2**-1.5, rel=1e-15)


def test_j_is_derivative_of_chi():
    h = 1e-5
    for mu, lam in [(1.0, 1.0), (3.0, 2.5), (100.0, 49.5)]:
        fd = (chi(mu, lam + h) - chi(mu, lam - h)) / (2 * h)
        assert j_kernel(mu, lam) == pytest.approx(fd, rel=1e-8)


def test_j_decays():
    assert j_kernel(1.0, 1e6) < 1e-17


def test_j_degenerate():
    with pytest.raises(DegenerateModeError):
        j_kernel(0.0, 0.0)


@given(st.floats(1e-3, 1e4), st.floats(0.5, 1e4), st.floats(1e-3, 10))
def test_j_decreasing_in_lambda(mu, lam, step):
    assert j_kernel(mu, lam + step) <= j_kernel(mu, lam)


def test_j_single_maximum_in_mu():
    lam = 2.5
    mus = np.linspace(0.01, 20, 4001)
    vals = j_kernel(mus, lam)
    i = int(np.argmax(vals))
    assert mus[i] == pytest.approx(lam * math.sqrt(2), abs=0.01)
    assert np.all(np.diff(vals[: i + 1]) > 0) and np.all(np.diff(vals[i:]) < 0)


def test_pair_sum_zero_flux():
    for mu in (0.5, 1.0, 100.0):
        for lam in ("1/2", "7/2", "99/2"):
            assert pair_sum_exact(RingConfig(mu, 0.0), lam) == 0.0


@pytest.mark.parametrize("mu, lam, beta", [(1.0, 0.5, 1e-4), (2.0, 0.5, 1e-8), (3495.0, 1747.5, 1e-8), (1.0, 2.5, 0.7), (1.0, 0.5, 3.0)])
def test_pair_sum_matches_high_precision(mu, lam, beta):
    got = pair_sum_exact(RingConfig(mu, beta), HalfOddInteger.parse(lam))
    assert got == pytest.approx(float(mp_pair(mu, lam, beta)), rel=1e-14)


def test_pair_sum_linearized_example():
    val = pair_sum_exact(RingConfig(1.0, 1e-4), "1/2")
    assert val == pytest.approx(2 * j_kernel(1.0, 0.5) * 1e-4, abs=1e-11)
    assert j_kernel(1.0, 0.5) == pytest.approx(0.71554, abs=1e-5)


def test_pair_sum_massless_uses_direct_sum():
    cfg = RingConfig(0.0, 0.2)
    assert pair_sum_exact(cfg, "3/2") == 0.0


@given(st.floats(0.1, 1e3), st.integers(0, 300), st.floats(1e-9, 1e-1))
def test_pair_sum_odd_in_beta(mu, n, beta):
    lam = HalfOddInteger(2 * n + 1)
    assert pair_sum_exact(RingConfig(mu, -beta), lam) == -pair_sum_exact(RingConfig(mu, beta), lam)


def test_occupation_spec():
    occ = OccupationSpec(6)
    assert occ.lambda_F == HalfOddInteger(5)
    assert list(occ.levels) == [0.5, 1.5, 2.5]
    assert OccupationSpec.from_lambda_f("5/2") == occ
    with pytest.raises(RingError):
        OccupationSpec(5)
    with pytest.raises(RingError):
        OccupationSpec(0)


def test_linearized_c_matches_loop():
    for mu, lf in [(1.0, 0.5), (7.3, 20.5), (100.0, 499.5)]:
        assert linearized_c(mu, lf) == pytest.approx(brute_c(mu, lf), rel=1e-13)


def test_integral_approximation_matches_quadrature():
    for mu, upper in [(100.0, 50.0), (3.0, 0.5), (1000.0, 5000.0)]:
        q, _ = quad(lambda x: j_kernel(mu, x), 0, upper, epsabs=1e-14, epsrel=1e-13)
        assert integral_approximation(mu, upper) == pytest.approx(q, rel=1e-12)


def test_integral_gap_is_half_a_term():
    # Sum over half-odd levels is a midpoint rule on [0, lambda_F + 1/2]; the
    # integral to lambda_F misses about j(mu, lambda_F)/2.
    res = persistent_current(RingConfig(100.0, 1e-8), OccupationSpec.from_lambda_f("999/2"))
    gap = res.linearized_c - res.integral_c
    assert gap == pytest.approx(0.5 * j_kernel(100.0, 499.75), rel=1e-2)
    assert gap > 1e-5
    assert abs(res.linearized_c - res.edge_closed_form) < 1e-7


def test_closed_form_values():
    assert closed_form(0.5) == pytest.approx(0.447213595, abs=1e-9)
    assert closed_form(1e9) == pytest.approx(1.0, abs=1e-15)
    assert closed_form(math.inf) == 1.0
    with pytest.raises(RingError):
        closed_form(-1.0)


def test_insb_half_filling():
    mu = 3495.0
    res = persistent_current(RingConfig(mu, 1e-8), OccupationSpec(3496))
    assert res.k == 0.5
    assert res.closed_form == pytest.approx(0.44721, abs=1e-5)
    assert res.integral_c == res.closed_form
    assert res.i_max == pytest.approx(1e-8 / math.pi)


def test_persistent_invariants():
    for mu, n in [(0.7, 2), (5.0, 40), (100.0, 1000), (3495.0, 34950)]:
        res = persistent_current(RingConfig(mu, 1e-6), OccupationSpec(n))
        assert 0 <= res.linearized_c < n / 2 * J_MAX
        assert 0 < res.integral_c < 1 and 0 < res.closed_form < 1


def test_linearization_consistency():
    beta = 1e-4
    for mu, n in [(0.8, 20), (5.0, 200), (50.0, 2000)]:
        res = persistent_current(RingConfig(mu, beta), OccupationSpec(n))
        # cubic remainder of each pair is (beta^3/3) chi''' with |chi'''| <= 3/mu^2
        assert abs(res.exact_sum - 2 * beta * res.linearized_c) <= (beta**3 / mu**2) * n


def test_persistent_odd_in_beta():
    a = persistent_current(RingConfig(20.0, 3e-5), OccupationSpec(200))
    b = persistent_current(RingConfig(20.0, -3e-5), OccupationSpec(200))
    assert a.exact_sum == -b.exact_sum


def test_monotonicity():
    cs = [linearized_c(mu, "99/2") for mu in (10.0, 20.0, 50.0, 100.0, 1000.0)]
    assert all(b < a for a, b in zip(cs, cs[1:]))
    cs = [linearized_c(100.0, lf) for lf in ("1/2", "21/2", "101/2", "1001/2")]
    assert all(b > a for a, b in zip(cs, cs[1:]))


def test_overflow_guard():
    with pytest.raises(OverflowGuardError):
        persistent_current(RingConfig(10.0, 1e-8), OccupationSpec(1002), max_electrons=1000)


def test_requires_mass():
    with pytest.raises(RingError):
        persistent_current(RingConfig(0.0, 1e-8), OccupationSpec(4))


def test_compensated_vs_naive():
    for n in (10, 1000, 100_000):
        terms = j_kernel(3000.0, OccupationSpec(n).levels)
        exact = compensated_sum(terms)
        naive = 0.0
        for t in terms.tolist():
            naive += t
        assert naive == pytest.approx(exact, rel=1e-10)
        assert float(mpmath.fsum(terms.tolist())) == exact


def test_kernel_maximum():
    m, l, v = locate_j_maximum()
    assert m == pytest.approx(1 / math.sqrt(2), abs=1e-3)
    assert l == pytest.approx(0.5, abs=1e-6)
    assert v == pytest.approx(0.76980, abs=1e-4)


@pytest.mark.parametrize("k, expected", [(0.0, 0.0), (0.2, 0.2), (5.0, 5.0)])
def test_nonrel_persistent(k, expected):
    assert nonrel_persistent(k) == expected


def test_nonrel_small_k_error_is_cubic():
    diff = nonrel_persistent(0.2) - closed_form(0.2)
    assert closed_form(0.2) == pytest.approx(0.19612, abs=1e-5)
    assert diff == pytest.approx(0.2**3 / 2, rel=0.05)
    assert nonrel_persistent(5.0) - closed_form(5.0) > 4


def test_log_grid_snapping():
    g = log_mu_grid(100, 1e4, 50, 0.5)
    assert len(g) == 50 and g[0] >= 100 and g[-1] <= 1e4
    assert np.all(np.diff(g) > 0)
    for mu in g:
        assert (0.5 * mu * 2) % 2 == 1
    raw = log_mu_grid(100, 1e4, 50)
    assert raw[0] == 100 and raw[-1] == pytest.approx(1e4)


def test_sweep_single_point_matches_persistent():
    res = c_sweep([200.0], 0.5)
    assert len(res.rows) == 1
    row = res.rows[0]
    assert row["lambda_F"] == "201/2"
    direct = persistent_current(RingConfig(200.0, 1e-8), OccupationSpec.from_lambda_f("201/2"))
    assert row["linearized_c"] == direct.linearized_c
    assert row["difference"] == direct.linearized_c - direct.integral_c


def test_sweep_bad_points_become_error_rows():
    res = c_sweep([100.0, -5.0, 200.0], 0.5)
    assert len(res.rows) == 3
    assert res.rows[1]["error"] and res.rows[0]["error"] is None
    assert len(res.errors) == 1
    assert len(res.column("linearized_c")) == 2


@settings(max_examples=20, deadline=None)
@given(st.floats(100, 1e4))
def test_sweep_row_lambda_rounding(mu):
    row = c_sweep([mu], 5.0).rows[0]
    lf = float(HalfOddInteger.parse(row["lambda_F"]))
    assert abs(lf - 5 * mu) <= 0.5
