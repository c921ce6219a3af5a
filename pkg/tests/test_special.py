"""Exponential integral and adaptive quadrature against defining integrals."""

import math

import numpy as np
import pytest

from wirecoupling import ConvergenceError, DomainError, adaptive_quad, exp_integral_e1
from wirecoupling.special import EULER_GAMMA


def sine_integral(x: float) -> complex:
    # Si(x) from its defining integral; integrand is bounded at 0.
    return adaptive_quad(lambda t: np.sin(t) / t, 0.0, x, 1e-12)


def cosine_integral(x: float) -> complex:
    # Ci(x) = gamma + ln(x) + integral of (cos(t) - 1)/t from 0 to x.
    tail = adaptive_quad(lambda t: (np.cos(t) - 1.0) / t, 0.0, x, 1e-12)
    return EULER_GAMMA + math.log(x) + tail


class TestExpIntegral:
    def test_unity_matches_defining_integral(self):
        # The integrand decays to ~4e-24 by u = 50; the truncated tail is
        # far below the comparison tolerance.
        reference = adaptive_quad(lambda u: np.exp(-u) / u, 1.0, 50.0, 1e-12)
        value = exp_integral_e1(1.0)
        assert abs(value - reference) <= 1e-9 * abs(reference)
        assert value.imag == 0.0
        assert abs(value - 0.2193839343955203) <= 5e-14

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 1000:
            magnitude = 10.0 ** rng.uniform(-8, 4)
            angle = rng.uniform(1e-3, math.pi - 1e-3)
            if rng.uniform() < 0.5:
                angle = -angle
            c = magnitude * complex(math.cos(angle), math.sin(angle))
            if c.real < -550.0:
                continue  # overflow guard region, rejected by design
            direct = exp_integral_e1(c.conjugate())
            mirrored = exp_integral_e1(c).conjugate()
            assert abs(direct - mirrored) <= 1e-13 * abs(mirrored)
            checked += 1

    def test_derivative_matches_closed_form(self):
        # dE1/dc = -exp(-c)/c, probed by central differences in the right
        # half-plane where cancellation stays mild.
        rng = np.random.default_rng(23)
        for _ in range(100):
            magnitude = 10.0 ** rng.uniform(-1, 3)
            angle = rng.uniform(-math.pi / 2 + 0.05, math.pi / 2 - 0.05)
            c = magnitude * complex(math.cos(angle), math.sin(angle))
            step = 1e-6 * abs(c)
            numeric = (exp_integral_e1(c + step) - exp_integral_e1(c - step)) / (
                2.0 * step
            )
            exact = -np.exp(-c) / c
            assert abs(numeric - exact) <= 1e-6 * abs(exact)

    def test_imaginary_axis_matches_sine_cosine_integrals(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            x = rng.uniform(0.1, 30.0)
            expected = -cosine_integral(x) + 1j * (sine_integral(x) - math.pi / 2)
            value = exp_integral_e1(1j * x)
            assert abs(value - expected) <= 1e-9 * abs(expected)

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            exp_integral_e1(0.0)

    def test_rejects_branch_cut(self):
        with pytest.raises(DomainError):
            exp_integral_e1(-1.0 + 0.0j)
        with pytest.raises(DomainError):
            exp_integral_e1(complex(-2.0, 1e-12))  # hugging the cut

    def test_rejects_overflowing_arguments(self):
        # E1 grows like exp(-Re c) deep in the left half-plane; doubles
        # cannot carry the result.
        with pytest.raises(DomainError):
            exp_integral_e1(complex(-700.0, 5.0))

    def test_real_axis_decay(self):
        # E1 is positive and strictly decreasing on the positive real axis.
        values = [exp_integral_e1(x).real for x in (0.5, 1.0, 2.0, 5.0, 10.0)]
        assert all(v > 0 for v in values)
        assert all(a > b for a, b in zip(values, values[1:]))


class TestAdaptiveQuad:
    def test_constant_integrand(self):
        assert adaptive_quad(lambda u: np.ones_like(u), 0.0, 2.0, 1e-12) == pytest.approx(
            2.0 + 0.0j
        )

    def test_current_shape_antiderivative(self):
        # sin(k*(h - |z|)) over [-h, h] integrates to 2*(1 - cos(k*h))/k.
        lam = 1.0
        k = 2.0 * math.pi / lam
        h = lam / 4.0  # k*h = pi/2
        value = adaptive_quad(lambda z: np.sin(k * (h - np.abs(z))), -h, h, 1e-12)
        assert abs(value - 2.0 / k) <= 1e-12 * (2.0 / k)

    def test_linearity(self):
        f = lambda u: np.exp(1j * 7.0 * u) / (1.0 + u * u)
        g = lambda u: np.cos(3.0 * u) * np.exp(-u)
        alpha = 2.0 - 1.5j
        beta = -0.25 + 3.0j
        combined = adaptive_quad(
            lambda u: alpha * f(u) + beta * g(u), 0.0, 4.0, 1e-11
        )
        separate = alpha * adaptive_quad(f, 0.0, 4.0, 1e-11) + beta * adaptive_quad(
            g, 0.0, 4.0, 1e-11
        )
        assert abs(combined - separate) <= 1e-9 * abs(separate)

    def test_oscillatory_integrand(self):
        # exp(1j*w*u) has the closed antiderivative (exp(1j*w*b) - 1)/(1j*w).
        w = 120.0
        value = adaptive_quad(lambda u: np.exp(1j * w * u), 0.0, 1.0, 1e-11)
        exact = (np.exp(1j * w) - 1.0) / (1j * w)
        assert abs(value - exact) <= 1e-9 * abs(exact)

    def test_budget_exhaustion_raises(self):
        # sin(1/u)/u oscillates without bound toward 0; a tight tolerance
        # cannot be met within the interval budget.
        with pytest.raises(ConvergenceError):
            adaptive_quad(
                lambda u: np.sin(1.0 / u) / u, 1e-8, 1.0, 1e-13, max_intervals=2000
            )

    def test_rejects_bad_interval_and_tolerance(self):
        with pytest.raises(DomainError):
            adaptive_quad(lambda u: u, 1.0, 1.0, 1e-9)
        with pytest.raises(DomainError):
            adaptive_quad(lambda u: u, 2.0, 1.0, 1e-9)
        with pytest.raises(DomainError):
            adaptive_quad(lambda u: u, 0.0, 1.0, 0.0)

    def test_rejects_non_finite_integrand(self):
        with pytest.raises(DomainError):
            adaptive_quad(
                lambda u: np.where(u > 0.5, np.inf, 1.0), 0.0, 1.0, 1e-9
            )
