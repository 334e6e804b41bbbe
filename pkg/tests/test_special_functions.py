import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holodet.errors import BranchPathError, BudgetError, DomainError
from holodet.special_functions import (
    BranchedLog,
    canonical_modulus,
    continue_log,
    eta,
    eta_tail_bound,
    eta_term_count,
    half_power,
    log_eta,
    modular_discriminant,
)

mp.mp.dps = 40


def eta_oracle(z: complex) -> complex:
    """Independent high-precision q-product, 400 factors."""
    zm = mp.mpc(z.real, z.imag)
    q = mp.e ** (2j * mp.pi * zm)
    prod = mp.mpf(1)
    for k in range(1, 401):
        prod *= 1 - q ** k
    return complex(mp.e ** (1j * mp.pi * zm / 12) * prod)


GRID = [complex(x, y) for x in (-0.4, -0.2, 0.0, 0.2, 0.4) for y in (0.8, 1.1, 1.4, 1.7, 2.0)]


class TestEta:
    def test_value_at_i_matches_closed_form(self):
        # Gamma(1/4) / (2 pi^(3/4)), cross-checked against the product oracle
        closed = complex(mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** mp.mpf(0.75)))
        assert abs(closed - eta_oracle(1j)) < 1e-25
        assert abs(eta(1j) - 0.7682254223260566) < 1e-14

    def test_matches_oracle_on_grid(self):
        for z in GRID:
            assert abs(eta(z) - eta_oracle(z)) <= 1e-14 * abs(eta_oracle(z))

    def test_translation_multiplier(self):
        for z in (1j, 0.3 + 1.1j, -0.2 + 0.7j):
            lhs = eta(z + 1)
            rhs = cmath.exp(1j * math.pi / 12) * eta(z)
            assert abs(lhs - rhs) <= 1e-12 * abs(rhs)

    def test_inversion_fixed_point(self):
        z = 1j
        lhs = eta(-1 / z)
        rhs = cmath.sqrt(-1j * z) * eta(z)
        assert abs(lhs - rhs) <= 1e-14 * abs(rhs)

    def test_small_height_uses_reduction(self):
        z = 0.123 + 0.004j
        direct = eta_oracle(complex(mp.mpf("0.123"), mp.mpf("0.004")))
        # oracle with 400 terms is not converged at y=0.004; use mpmath's
        # own reduction-free product with many more factors instead
        zm = mp.mpc("0.123", "0.004")
        q = mp.e ** (2j * mp.pi * zm)
        prod = mp.mpf(1)
        for k in range(1, 40001):
            prod *= 1 - q ** k
        ref = complex(mp.e ** (1j * mp.pi * zm / 12) * prod)
        assert abs(eta(z) - ref) <= 1e-11 * abs(ref)

    def test_rejects_lower_half_plane(self):
        with pytest.raises(DomainError):
            eta(1 - 1j)
        with pytest.raises(DomainError):
            eta(0.5 + 0j)

    def test_truncation_monotonicity(self):
        z = 0.1 + 0.9j
        n = eta_term_count(z)
        base = eta(z, terms=n)
        for extra in (5, 20, 80):
            drift = abs(eta(z, terms=n + extra) - base)
            assert drift <= abs(base) * eta_tail_bound(z, n)

    def test_term_budget_exceeded(self):
        with pytest.raises(BudgetError):
            log_eta(1e-5j)


class TestLogEta:
    def test_value_at_i(self):
        v = log_eta(1j)
        assert abs(v - complex(mp.log(eta_oracle(1j).real))) < 1e-14
        assert abs(v.imag) < 1e-14

    def test_dominant_term_at_high_point(self):
        v = log_eta(10j)
        assert abs(v - (-10 * math.pi / 12)) < 1e-26 + 1e-15

    def test_exp_roundtrip_on_grid(self):
        for z in GRID:
            lhs = cmath.exp(log_eta(z))
            rhs = eta(z)
            assert abs(lhs - rhs) <= 1e-13 * abs(rhs)


class TestDiscriminant:
    def test_translation_invariance(self):
        for z in GRID[::3]:
            a, b = modular_discriminant(z + 1), modular_discriminant(z)
            assert abs(a - b) <= 1e-12 * abs(b)

    def test_inversion_weight_twelve(self):
        for z in (0.3 + 1.1j, -0.25 + 0.9j, 0.1 + 1.6j):
            lhs = modular_discriminant(-1 / z)
            rhs = z ** 12 * modular_discriminant(z)
            assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


class TestBranchedLog:
    def test_monodromy_of_full_circle(self):
        path = [cmath.exp(2j * math.pi * k / 64) for k in range(65)]
        out = continue_log(path, BranchedLog(0.0, 0))
        assert abs(out.value - 2j * math.pi) < 1e-12
        assert out.winding == 1

    def test_constant_path(self):
        out = continue_log([1.0, 1.0, 1.0], BranchedLog(0.0, 0))
        assert out.value == 0.0 and out.winding == 0

    def test_right_half_plane_path(self):
        # 2i -> -2i through +2: stepwise oracle with 100 substeps
        thetas = np.linspace(math.pi / 2, -math.pi / 2, 101)
        path = [2 * cmath.exp(1j * t) for t in thetas]
        out = continue_log(path, BranchedLog(cmath.log(2j), 0))
        expected = cmath.log(-2j)  # ln 2 - i pi/2
        assert abs(out.value - expected) < 1e-12
        assert out.winding == 0

    def test_rejects_zero_point(self):
        with pytest.raises(BranchPathError):
            continue_log([1.0, 0.0, -1.0], BranchedLog(0.0, 0))

    def test_rejects_coarse_path(self):
        with pytest.raises(BranchPathError):
            continue_log([1.0, -1.0], BranchedLog(0.0, 0))

    def test_winding_consistency_enforced(self):
        with pytest.raises(ValueError):
            BranchedLog(0.0, 3)

    @given(
        st.integers(min_value=-2, max_value=2),
        st.integers(min_value=16, max_value=48),
    )
    @settings(max_examples=30, deadline=None)
    def test_homotopy_invariance(self, loops, refinement):
        # two refinements of the same winding give identical continuations
        start = 2.0 + 0.5j
        total = 2 * math.pi * loops

        def circle_path(n):
            r, th0 = abs(start), cmath.phase(start)
            return [r * cmath.exp(1j * (th0 + total * k / n)) for k in range(n + 1)]

        init = BranchedLog.principal(start)
        a = continue_log(circle_path(refinement * 8), init)
        b = continue_log(circle_path(refinement * 16 + 8), init)
        assert abs(a.value - b.value) < 1e-12
        assert a.winding == b.winding


class TestHalfPower:
    def test_positive_real(self):
        y = 1.7
        v = half_power(2 * math.pi * y)
        assert abs(v - math.sqrt(2 * math.pi * y)) < 1e-15

    def test_principal_minus_one(self):
        assert abs(half_power(-1.0) - 1j) < 1e-15

    def test_shifted_branch(self):
        hint = BranchedLog(cmath.log(-1 + 0j) - 2j * math.pi, -1)
        assert abs(half_power(-1.0, hint) - (-1j)) < 1e-15

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            half_power(0.0)

    @given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
    @settings(max_examples=60, deadline=None)
    def test_square_recovers_argument(self, u):
        v = half_power(u)
        assert abs(v * v - u) <= 1e-12 * abs(u)


class TestCanonicalModulus:
    def test_fixed_points(self):
        for z in (1j, 2j, 0.3 + 1.1j):
            assert canonical_modulus(z) == z

    def test_orbit_collapse(self):
        z = 0.3 + 1.1j
        for w in (z + 3, -1 / z, -1 / (z - 1) + 2):
            c = canonical_modulus(w)
            assert abs(c - z) < 1e-12
