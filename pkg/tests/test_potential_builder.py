import cmath
import math

import numpy as np
import pytest

from holodet.errors import DomainError, QuadratureError
from holodet.polymap import PolyMap, random_polymap
from holodet.potential_builder import (
    ClosedHoloForm,
    ConeQuadrature,
    ProductDomain,
    check_closed_and_holomorphic,
    cone_potential,
    pointwise_coeff,
    verify_boundary_vanishing,
    verify_mixed_derivative,
)

HALF_PLANE_BALLS = ProductDomain.of_balls(5j, 4.9, -5j, 4.9)


def constant_form(c=1.0, base_z=1j, base_w=-1j):
    def coeff(Z, W):
        return np.full((np.atleast_2d(Z).shape[0], 1, 1), c, dtype=complex)

    return ClosedHoloForm(1, coeff, base_z, base_w, HALF_PLANE_BALLS)


def pole_form(base_z=1j, base_w=-1j):
    def coeff(Z, W):
        return ((Z[:, 0] - W[:, 0]) ** -2).reshape(-1, 1, 1)

    def clearance(Z, W):
        return float(np.min(np.abs(Z[:, 0] - W[:, 0])))

    return ClosedHoloForm(1, coeff, base_z, base_w, HALF_PLANE_BALLS, pole_clearance=clearance)


def pole_closed_form(z, w, z0=1j, w0=-1j):
    # branch-safe: all four arguments stay in the upper half plane
    return (cmath.log(z - w) - cmath.log(z0 - w) - cmath.log(z - w0) + cmath.log(z0 - w0))


PAIRS = [(2j, -2j), (1 + 1.5j, -0.5 - 1.2j), (0.3 + 0.9j, 0.1 - 0.7j), (-0.8 + 1.1j, 0.6 - 1.4j)]


class TestConePotential:
    def test_constant_form(self):
        q = cone_potential(constant_form(), 2j, -2j)
        assert abs(q - (2j - 1j) * (-2j + 1j)) < 1e-13

    def test_pole_form_matches_log_combination(self):
        form = pole_form()
        for z, w in PAIRS:
            q = cone_potential(form, z, w)
            assert abs(q - pole_closed_form(z, w)) < 1e-13

    def test_exp_of_potential_is_cross_ratio(self):
        form = pole_form()
        for z, w in PAIRS:
            q = cone_potential(form, z, w)
            cross = (z - w) * (1j + 1j) / ((1j - w) * (z + 1j))
            assert abs(cmath.exp(q) - cross) <= 1e-12 * abs(cross)

    def test_mixed_second_synthetic_n2(self):
        g = PolyMap(2, {((2, 0), (3, 0)): 1.0, ((0, 1), (0, 1)): 1.0})
        dom = ProductDomain.of_balls([0, 0], 1.5, [0, 0], 1.5)
        form = ClosedHoloForm(2, g.mixed_coefficient_evaluator(),
                              [0.1 + 0.1j, 0.05j], [-0.1j, 0.2], dom)
        z = np.array([0.4 + 0.2j, -0.3 + 0.1j])
        w = np.array([0.2 - 0.5j, 0.6j])
        q = cone_potential(form, z, w)
        oracle = (g.at(z, w) - g.at(form.base_z, w)
                  - g.at(z, form.base_w) + g.at(form.base_z, form.base_w))
        assert abs(q - oracle) < 1e-12

    def test_rejects_point_outside_domain(self):
        with pytest.raises(DomainError):
            cone_potential(pole_form(), 20j, -2j)
        with pytest.raises(DomainError):
            cone_potential(pole_form(), 2j, -20j)

    def test_singularity_on_chain_is_refused(self):
        # coefficient singular on z + w = 0; the chain from the bases to
        # (2, -2) crosses it, so the guard or the refinement budget fires
        def coeff(Z, W):
            return ((Z[:, 0] + W[:, 0]) ** -2).reshape(-1, 1, 1)

        def clearance(Z, W):
            return float(np.min(np.abs(Z[:, 0] + W[:, 0])))

        dom = ProductDomain.of_balls(0j, 4.0, 0j, 4.0)
        form = ClosedHoloForm(1, coeff, 1.0 + 0j, 1.0 + 0j, dom, pole_clearance=clearance)
        with pytest.raises(QuadratureError):
            cone_potential(form, 2.0 + 0j, -2.0 + 0j)

    def test_spectral_convergence_rate(self):
        # doubling the per-axis order gains far more than 1e-2 per doubling
        form = pole_form()
        z, w = 1.2 + 0.3j, -1.1 - 0.25j
        exact = pole_closed_form(z, w)
        errs = []
        for n in (3, 6, 12):
            q = cone_potential(form, z, w, ConeQuadrature(nodes_per_axis=n, adaptive=False))
            errs.append(abs(q - exact))
        assert errs[0] > 1e-13  # coarse rule is genuinely inaccurate
        assert errs[1] <= 1e-2 * errs[0]
        assert errs[2] <= max(1e-2 * errs[1], 5e-15)

    def test_pointwise_wrapper(self):
        form = ClosedHoloForm(1, pointwise_coeff(lambda z, w: [[1.0]], 1), 1j, -1j,
                              HALF_PLANE_BALLS)
        q = cone_potential(form, 1 + 2j, -1 - 2j, ConeQuadrature(nodes_per_axis=8))
        assert abs(q - (1 + 2j - 1j) * (-1 - 2j + 1j)) < 1e-12


class TestBoundaryVanishing:
    def test_constant_form(self):
        rep = verify_boundary_vanishing(constant_form(), PAIRS, tolerance=1e-14)
        assert rep.passed and rep.max_residual < 1e-14

    def test_pole_form(self):
        rep = verify_boundary_vanishing(pole_form(), PAIRS)
        assert rep.passed and rep.max_residual < 1e-10

    def test_mixed_second_synthetic(self):
        g = PolyMap(2, {((1, 1), (2, 0)): 0.7 - 0.2j, ((0, 2), (1, 1)): 1.3j})
        dom = ProductDomain.of_balls([0, 0], 1.5, [0, 0], 1.5)
        form = ClosedHoloForm(2, g.mixed_coefficient_evaluator(), [0.1, 0.2j], [0.3, -0.1j], dom)
        pairs = [(np.array([0.4, 0.5j]), np.array([0.2j, -0.3])),
                 (np.array([-0.5j, 0.1]), np.array([0.6, 0.2]))]
        rep = verify_boundary_vanishing(form, pairs)
        assert rep.passed and rep.max_residual < 1e-10


class TestMixedDerivative:
    def test_constant_form(self):
        # bilinear q has zero FD truncation error; h = 1e-2 keeps the
        # quadrature rounding noise (~1e-15 / 4h^2) comfortably small
        res = verify_mixed_derivative(constant_form(), 1 + 1.2j, -0.4 - 0.9j, h=1e-2)
        assert float(res.max()) < 1e-10

    def test_pole_form_at_reference_point(self):
        res = verify_mixed_derivative(pole_form(), 2j, -2j, h=1e-3)
        # Omega(2i, -2i) = (4i)^{-2} = -1/16
        assert float(res[0, 0]) < 1e-7

    def test_detects_closedness_violation(self):
        # a closed corruption would be faithfully reproduced by the cone
        # potential; only a non-closed one breaks d_z d_w q = Omega
        g = PolyMap(2, {((2, 0), (3, 0)): 1.0, ((0, 1), (0, 1)): 1.0})
        inner = g.mixed_coefficient_evaluator()

        def corrupted(Z, W):
            out = inner(Z, W)
            out[:, 0, 1] += 0.8 * Z[:, 1]
            return out

        dom = ProductDomain.of_balls([0, 0], 1.5, [0, 0], 1.5)
        form = ClosedHoloForm(2, corrupted, [0.1 + 0.1j, 0.05j], [-0.1j, 0.2], dom)
        res = verify_mixed_derivative(form, np.array([0.3, 0.2j]), np.array([0.25j, -0.2]))
        assert float(res.max()) > 1e-3

    def test_stencil_domain_guard(self):
        form = pole_form()
        edge = 5j + 4.9j  # on the boundary of the z-ball: stencil pokes out
        with pytest.raises(DomainError):
            verify_mixed_derivative(form, edge, -2j, h=1e-3)

    def test_base_point_gauge_invariance(self):
        # moving the bases changes q by F(z) + G(w) only: same mixed derivative
        a = verify_mixed_derivative(pole_form(1j, -1j), 1 + 1.4j, -0.7 - 1.1j)
        b = verify_mixed_derivative(pole_form(0.5 + 2j, -0.3 - 1.5j), 1 + 1.4j, -0.7 - 1.1j)
        assert float(a.max()) < 1e-7 and float(b.max()) < 1e-7


class TestClosedAndHolomorphic:
    def test_mixed_second_forms_pass(self):
        rng = np.random.default_rng(7)
        for dim in (1, 2, 3):
            g = random_polymap(dim, degree=4, n_terms=8, rng=rng)
            dom = ProductDomain.of_balls(np.zeros(dim, complex), 1.2,
                                         np.zeros(dim, complex), 1.2)
            form = ClosedHoloForm(dim, g.mixed_coefficient_evaluator(),
                                  np.full(dim, 0.1 + 0.1j), np.full(dim, -0.1j), dom)
            pairs = [(np.full(dim, 0.4 + 0.2j), np.full(dim, -0.3 + 0.3j))]
            rep = check_closed_and_holomorphic(form, pairs)
            assert rep.passed, (dim, rep)

    def test_exponential_diagonal_fails_closedness(self):
        # Omega_ij = delta_ij exp(z.w): d_{z^1} Omega_22 = w^1 e^{z.w} != 0 = d_{z^2} Omega_12
        def coeff(Z, W):
            M = Z.shape[0]
            out = np.zeros((M, 2, 2), complex)
            e = np.exp(np.sum(Z * W, axis=1))
            out[:, 0, 0] = e
            out[:, 1, 1] = e
            return out

        dom = ProductDomain.of_balls([0, 0], 1.5, [0, 0], 1.5)
        form = ClosedHoloForm(2, coeff, [0.1, 0.1], [0.1, 0.1], dom)
        z = np.array([0.3 + 0.1j, 0.2])
        w = np.array([0.4, -0.2j])
        rep = check_closed_and_holomorphic(form, [(z, w)])
        assert not rep.passed
        # hand check of the violated pair
        expected = abs(w[0] * np.exp(np.sum(z * w)))
        assert rep.closedness_residual == pytest.approx(expected, rel=1e-6)

    def test_pole_form_passes(self):
        rep = check_closed_and_holomorphic(pole_form(), PAIRS[:2])
        assert rep.passed  # n=1 closedness is vacuous; holomorphy holds


class TestHolomorphyOfPotential:
    def test_antiholomorphic_residual_small(self):
        from holodet.wirtinger import wirtinger_dzbar

        form = pole_form()
        quad = ConeQuadrature(nodes_per_axis=48)
        z, w = 0.4 + 1.1j, -0.2 - 0.8j
        fz = lambda p: cone_potential(form, p, w, quad)
        fw = lambda p: cone_potential(form, z, p, quad)
        assert abs(wirtinger_dzbar(fz, z, 1e-4)) < 1e-7
        assert abs(wirtinger_dzbar(fw, w, 1e-4)) < 1e-7
