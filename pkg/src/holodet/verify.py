"""One-shot verification suite behind ``holodet verify-all`` and the tests.

Every check pins its tolerance here; the functions return CheckResult lists
so the CLI and the test suite share one implementation.  All sample
geometries are deterministic (fixed grids and a fixed seed), which makes the
emitted report byte-identical across runs.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .catalog import builtin_catalog
from .errors import HolodetError
from .extension import (
    ProductPoint,
    genus1_extension,
    genus1_pole_form,
    modular_invariance_check,
    pluriharmonic_split,
    symmetrized_evaluator,
)
from .polarization import DiagonalSampleSet, polarize_fit, uniqueness_residual
from .polymap import random_polymap
from .potential_builder import (
    ClosedHoloForm,
    ConeQuadrature,
    ProductDomain,
    check_closed_and_holomorphic,
    cone_potential,
    verify_boundary_vanishing,
    verify_mixed_derivative,
)
from .report import CheckResult, RunReport
from .special_functions import eta
from .torus_spectral import closed_form_log_det, zeta_log_det
from .wirtinger import dz_dzbar, wirtinger_dzbar

WORD_SEED = 20250814
DIAGONAL_CONSTANT = -0.5 * math.log(2.0 * math.pi)  # expected L(z, zbar) - closed form

_SPECTRAL_POINTS = (1j, 2j, 0.3 + 1.1j)


def check_spectral_normalization() -> list[CheckResult]:
    """zeta(0) = -1 and ratio constancy against the candidate closed forms."""
    out = []
    ratios_sq = []   # against y^2 |eta|^4
    ratios_half = []  # against 2 pi y^(1/2) |eta|^2
    for z in _SPECTRAL_POINTS:
        r = zeta_log_det(z)
        out.append(CheckResult(f"zeta0_diagnostic[z={z}]", abs(r.zeta_zero + 1.0), 1e-9,
                               abs(r.zeta_zero + 1.0) <= 1e-9,
                               f"zeta(0)={r.zeta_zero:.12f}, tail={r.tail_bound:.2e}"))
        y = r.modulus.imag
        eta_abs = abs(eta(r.modulus))
        det = math.exp(r.log_det)
        ratios_sq.append(det / (y ** 2 * eta_abs ** 4))
        ratios_half.append(det / (2.0 * math.pi * math.sqrt(y) * eta_abs ** 2))

    def spread(vals):
        mean = sum(vals) / len(vals)
        return max(abs(v / mean - 1.0) for v in vals)

    s_sq, s_half = spread(ratios_sq), spread(ratios_half)
    if s_sq <= 1e-8:
        detail = f"matches y^2|eta|^4 with constant {sum(ratios_sq)/3:.12f}"
        res = s_sq
    elif s_half <= 1e-8:
        detail = f"matches 2 pi y^(1/2)|eta|^2 with constant {sum(ratios_half)/3:.12f}"
        res = s_half
    else:
        detail = f"neither normalization constant (spreads {s_sq:.3e}, {s_half:.3e})"
        res = min(s_sq, s_half)
    out.append(CheckResult("spectral_ratio_constancy", res, 1e-8, res <= 1e-8, detail))
    return out


def check_spectral_modular_invariance() -> list[CheckResult]:
    z = 0.3 + 1.1j
    a = zeta_log_det(z).log_det
    b = zeta_log_det(-1.0 / z).log_det
    c = zeta_log_det(z + 1.0).log_det
    return [
        CheckResult("spectral_s_invariance", abs(a - b), 1e-8, abs(a - b) < 1e-8),
        CheckResult("spectral_t_invariance", abs(a - c), 1e-8, abs(a - c) < 1e-8),
    ]


def _cone_test_pairs(count: int):
    """Deterministic pairs with Im z > 0 > Im w and |z - w| >= 1."""
    pairs = []
    for k in range(count):
        x = -1.0 + 2.0 * k / max(count - 1, 1)
        z = complex(x, 0.7 + 0.1 * (k % 4))
        w = complex(-x * 0.8 + 0.05, -(0.6 + 0.08 * ((k + 2) % 5)))
        pairs.append((z, w))
    return pairs


def check_cone_vs_closed_form(fast: bool = False) -> list[CheckResult]:
    """The pole form (z-w)^{-2} against its explicit potential."""
    form = genus1_pole_form()
    quad = ConeQuadrature(nodes_per_axis=64)
    pairs = _cone_test_pairs(4 if fast else 10)
    assert all(abs(z - w) >= 1.0 for z, w in pairs)

    mixed = 0.0
    expq = 0.0
    for z, w in pairs:
        mixed = max(mixed, float(verify_mixed_derivative(form, z, w, quad)[0, 0]))
        q = cone_potential(form, z, w, quad)
        cross = (z - w) * (1j + 1j) / ((1j - w) * (z + 1j))
        expq = max(expq, abs(cmath.exp(q) - cross) / abs(cross))
    boundary = verify_boundary_vanishing(form, pairs, quad, tolerance=1e-10)
    return [
        CheckResult("cone_mixed_derivative", mixed, 1e-7, mixed <= 1e-7),
        CheckResult("cone_boundary_vanishing", boundary.max_residual, 1e-10, boundary.passed),
        CheckResult("cone_exp_matches_closed_form", expq, 1e-8, expq <= 1e-8),
    ]


def _synthetic_forms(count: int):
    rng = np.random.default_rng(WORD_SEED)
    dims = [1, 2, 3, 1, 2]
    out = []
    for k in range(count):
        n = dims[k % len(dims)]
        g = random_polymap(n, degree=4, n_terms=10, rng=rng)
        dom = ProductDomain.of_balls(np.zeros(n, complex), 1.2, np.zeros(n, complex), 1.2)
        base_z = np.full(n, 0.1 + 0.1j)
        base_w = np.full(n, -0.1 - 0.05j)
        form = ClosedHoloForm(n, g.mixed_coefficient_evaluator(), base_z, base_w, dom)
        out.append((g, form))
    return out


def check_synthetic_form_contracts(fast: bool = False) -> list[CheckResult]:
    """mixed_second_of forms: potential identity, closedness, holomorphy."""
    quad = ConeQuadrature(nodes_per_axis=32)
    worst_q = 0.0
    worst_closed = 0.0
    worst_anti = 0.0
    for g, form in _synthetic_forms(3 if fast else 5):
        n = form.dim
        pts = [
            (np.full(n, 0.45 + 0.3j), np.full(n, -0.2 + 0.4j)),
            (np.full(n, -0.35 + 0.15j), np.full(n, 0.5 - 0.25j)),
        ]
        for zv, wv in pts:
            q = cone_potential(form, zv, wv, quad)
            oracle = (g.at(zv, wv) - g.at(form.base_z, wv)
                      - g.at(zv, form.base_w) + g.at(form.base_z, form.base_w))
            worst_q = max(worst_q, abs(q - oracle))
        rep = check_closed_and_holomorphic(form, pts)
        worst_closed = max(worst_closed, rep.closedness_residual)
        worst_anti = max(worst_anti, rep.antiholomorphic_residual)
    return [
        CheckResult("synthetic_potential_identity", worst_q, 1e-9, worst_q <= 1e-9),
        CheckResult("synthetic_closedness", worst_closed, 1e-8, worst_closed <= 1e-8),
        CheckResult("synthetic_antiholomorphic", worst_anti, 1e-8, worst_anti <= 1e-8),
    ]


def check_nonclosed_negative_control() -> list[CheckResult]:
    entry = builtin_catalog()["bad_nonclosed"]
    form = entry.build(validate=False)
    rep = check_closed_and_holomorphic(form, entry.validation_samples())
    detected = (not rep.passed) and rep.closedness_residual > 1e-3
    return [CheckResult("nonclosed_negative_control", rep.closedness_residual, 1e-3,
                        detected, "closedness residual must exceed 1e-3 and fail")]


def _symmetrizer_grid(count: int):
    xs = (-0.4, -0.15, 0.1, 0.35)
    ys = (0.8, 1.1, 1.4, 1.7, 2.0)
    grid = [complex(x, y) for x in xs for y in ys]
    return grid[:count]


def check_symmetrizer(fast: bool = False) -> list[CheckResult]:
    form = genus1_pole_form()
    quad = ConeQuadrature(nodes_per_axis=48)
    q_tilde = symmetrized_evaluator(lambda z, w: cone_potential(form, z, w, quad))

    imag_worst = 0.0
    for z in _symmetrizer_grid(8 if fast else 20):
        imag_worst = max(imag_worst, abs(q_tilde(z, np.conj(z)).imag))

    fd_worst = 0.0
    for z in (1j, 1 + 2j, -0.5 + 1.5j):
        u = lambda p: q_tilde(p, np.conj(p)).real
        target = (z - np.conj(z)) ** -2
        fd_worst = max(fd_worst, abs(dz_dzbar(u, z, 1e-3) - target))
    return [
        CheckResult("symmetrizer_diagonal_real", imag_worst, 1e-11, imag_worst <= 1e-11),
        CheckResult("symmetrizer_wp_reconstruction", fd_worst, 1e-6, fd_worst <= 1e-6),
    ]


def check_genus1_extension(fast: bool = False) -> list[CheckResult]:
    n = 3 if fast else 5
    xs = np.linspace(-0.4, 0.4, n)
    ys = np.linspace(0.8, 2.0, n)
    imag_worst = 0.0
    consts = []
    for x in xs:
        for y in ys:
            z = complex(x, y)
            val = genus1_extension(ProductPoint.diagonal(z))
            imag_worst = max(imag_worst, abs(val.imag))
            consts.append(val.real - closed_form_log_det(z))
    const_drift = max(consts) - min(consts)
    mean_const = sum(consts) / len(consts)

    anti_worst = 0.0
    for z, w in _cone_test_pairs(4):
        fz = lambda p: genus1_extension(ProductPoint(p, w))
        fw = lambda p: genus1_extension(ProductPoint(z, p))
        anti_worst = max(anti_worst, abs(wirtinger_dzbar(fz, z, 1e-4)))
        anti_worst = max(anti_worst, abs(wirtinger_dzbar(fw, w, 1e-4)))
    return [
        CheckResult("genus1_diagonal_imag", imag_worst, 1e-12, imag_worst <= 1e-12),
        CheckResult("genus1_diagonal_constant", const_drift, 1e-9, const_drift <= 1e-9,
                    f"constant {mean_const:.12f}, expected {DIAGONAL_CONSTANT:.12f}"),
        CheckResult("genus1_antiholomorphic", anti_worst, 1e-7, anti_worst <= 1e-7),
    ]


def _random_words(count: int, max_len: int = 4):
    rng = np.random.default_rng(WORD_SEED)
    words = []
    while len(words) < count:
        length = int(rng.integers(1, max_len + 1))
        word = "".join(rng.choice(["T", "S"], size=length))
        words.append(word)
    return words


def check_mapping_class_invariance() -> list[CheckResult]:
    point = ProductPoint(0.2 + 1.3j, -0.4 - 0.9j)
    worst = 0.0
    tested = ["T", "S"] + _random_words(5)
    for word in tested:
        r = modular_invariance_check(point, word)
        worst = max(worst, r.relative_residual)
    return [CheckResult("mapping_class_invariance", worst, 1e-9, worst <= 1e-9,
                        "words: " + ",".join(tested))]


def check_pluriharmonic_split() -> list[CheckResult]:
    cases = {
        "re_z2": lambda z: (z * z).real,
        "re_exp": lambda z: cmath.exp(z).real,
        "log_abs": lambda z: math.log(abs(z - 5.0) ** 2),
    }
    recon_worst = 0.0
    anti_worst = 0.0
    ring = [1j + 0.9 * cmath.exp(2j * math.pi * k / 12) for k in range(12)] + [1j + 0.2]
    probe = (1j + 0.3, 1j - 0.4 + 0.2j, 1j + 0.5j)
    for name, h in cases.items():
        f = pluriharmonic_split(h, 1j)
        for z in ring:
            recon_worst = max(recon_worst, abs(h(z) - 2.0 * f(z).real))
        for z in probe:
            anti_worst = max(anti_worst, abs(wirtinger_dzbar(f, z, 1e-3)))
    return [
        CheckResult("pluriharmonic_reconstruction", recon_worst, 1e-8, recon_worst <= 1e-8),
        CheckResult("pluriharmonic_f_holomorphic", anti_worst, 1e-7, anti_worst <= 1e-7),
    ]


def check_polarization_uniqueness() -> list[CheckResult]:
    center, radius, degree = 1.5j, 0.3, 8
    samples = DiagonalSampleSet.from_function(closed_form_log_det, center, radius,
                                              2 * (degree + 1) ** 2)
    fit = polarize_fit(samples, degree)

    def shifted_extension(z, w):
        return genus1_extension(ProductPoint(z, w)) - DIAGONAL_CONSTANT

    base = uniqueness_residual(fit.evaluate, shifted_extension, center, radius, degree)

    eps = 1e-4
    cbar = center.conjugate()

    def perturbed(z, w):
        return fit.evaluate(z, w) + eps * ((z - center) / radius) ** 2 * ((w - cbar) / radius)

    detected = uniqueness_residual(fit.evaluate, perturbed, center, radius, degree)
    in_band = 0.5 * eps <= detected <= 1.5 * eps
    return [
        CheckResult("polarization_uniqueness", base, 1e-5, base <= 1e-5,
                    f"fit conditioning {fit.conditioning:.2e}"),
        CheckResult("polarization_perturbation_detected", abs(detected - eps), 0.5 * eps,
                    in_band, f"detected {detected:.6e}, injected {eps:.1e}"),
    ]


CRITERIA = (
    ("spectral_normalization", check_spectral_normalization, False),
    ("spectral_modular_invariance", check_spectral_modular_invariance, False),
    ("cone_vs_closed_form", check_cone_vs_closed_form, True),
    ("synthetic_form_contracts", check_synthetic_form_contracts, True),
    ("nonclosed_negative_control", check_nonclosed_negative_control, False),
    ("symmetrizer", check_symmetrizer, True),
    ("genus1_extension", check_genus1_extension, True),
    ("mapping_class_invariance", check_mapping_class_invariance, False),
    ("pluriharmonic_split", check_pluriharmonic_split, False),
    ("polarization_uniqueness", check_polarization_uniqueness, False),
)


def run_all(fast: bool = False) -> RunReport:
    """Run every verification group; deterministic for a fixed ``fast`` flag."""
    report = RunReport(command="verify-all", inputs={"fast": fast})
    for _, func, takes_fast in CRITERIA:
        try:
            checks = func(fast) if takes_fast else func()
        except HolodetError as exc:  # a crashed group is a failed check
            checks = [CheckResult(func.__name__, math.inf, 0.0, False, str(exc))]
        report.extend(checks)
    return report
