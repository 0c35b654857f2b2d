"""Seeded random smooth fields: finite sums of polynomial-sinusoid products.

Used by the lift-identity oracles and the CLI.  All coefficients are drawn
from [-1, 1] with a caller-supplied generator, so runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from .numcore import ScalarField2

__all__ = ["random_scalar_field2", "random_traceless", "random_matrix_field2"]


class _TrigPoly:
    """sum_k c_k * u^{i_k} v^{j_k} * sin(a_k u + b_k v + phi_k), exact partials."""

    def __init__(self, terms):
        # terms: list of (c, i, j, a, b, phi) with integer powers i, j >= 0
        self.terms = [tuple(term) for term in terms]

    @staticmethod
    def _pw(u, k):
        return u**k if k > 0 else np.ones_like(np.asarray(u, dtype=float))

    def value(self, u, v):
        total = 0.0
        for c, i, j, a, b, phi in self.terms:
            total = total + c * self._pw(u, i) * self._pw(v, j) * np.sin(a * u + b * v + phi)
        return total

    def d1(self, u, v):
        total = 0.0
        for c, i, j, a, b, phi in self.terms:
            s = np.sin(a * u + b * v + phi)
            co = np.cos(a * u + b * v + phi)
            pj = self._pw(v, j)
            term = a * self._pw(u, i) * pj * co
            if i >= 1:
                term = term + i * self._pw(u, i - 1) * pj * s
            total = total + c * term
        return total

    def d2(self, u, v):
        total = 0.0
        for c, i, j, a, b, phi in self.terms:
            s = np.sin(a * u + b * v + phi)
            co = np.cos(a * u + b * v + phi)
            pi = self._pw(u, i)
            term = b * pi * self._pw(v, j) * co
            if j >= 1:
                term = term + j * pi * self._pw(v, j - 1) * s
            total = total + c * term
        return total

    def d11(self, u, v):
        total = 0.0
        for c, i, j, a, b, phi in self.terms:
            s = np.sin(a * u + b * v + phi)
            co = np.cos(a * u + b * v + phi)
            pj = self._pw(v, j)
            term = -a * a * self._pw(u, i) * pj * s
            if i >= 1:
                term = term + 2.0 * a * i * self._pw(u, i - 1) * pj * co
            if i >= 2:
                term = term + i * (i - 1) * self._pw(u, i - 2) * pj * s
            total = total + c * term
        return total

    def d22(self, u, v):
        total = 0.0
        for c, i, j, a, b, phi in self.terms:
            s = np.sin(a * u + b * v + phi)
            co = np.cos(a * u + b * v + phi)
            pi = self._pw(u, i)
            term = -b * b * pi * self._pw(v, j) * s
            if j >= 1:
                term = term + 2.0 * b * j * pi * self._pw(v, j - 1) * co
            if j >= 2:
                term = term + j * (j - 1) * pi * self._pw(v, j - 2) * s
            total = total + c * term
        return total

    def d12(self, u, v):
        total = 0.0
        for c, i, j, a, b, phi in self.terms:
            s = np.sin(a * u + b * v + phi)
            co = np.cos(a * u + b * v + phi)
            term = -a * b * self._pw(u, i) * self._pw(v, j) * s
            if i >= 1:
                term = term + i * b * self._pw(u, i - 1) * self._pw(v, j) * co
            if j >= 1:
                term = term + j * a * self._pw(u, i) * self._pw(v, j - 1) * co
            if i >= 1 and j >= 1:
                term = term + i * j * self._pw(u, i - 1) * self._pw(v, j - 1) * s
            total = total + c * term
        return total


def _draw_terms(rng, terms):
    out = []
    for _ in range(terms):
        c = rng.uniform(-1.0, 1.0)
        i = int(rng.integers(0, 3))
        j = int(rng.integers(0, 3))
        a = rng.uniform(-1.0, 1.0)
        b = rng.uniform(-1.0, 1.0)
        phi = rng.uniform(-1.0, 1.0)
        out.append((c, i, j, a, b, phi))
    return out


def random_scalar_field2(rng, terms=3) -> ScalarField2:
    """A random smooth exact-mode scalar field of two real variables."""
    tp = _TrigPoly(_draw_terms(rng, terms))
    return ScalarField2.exact(tp.value, tp.d1, tp.d2, tp.d11, tp.d12, tp.d22)


def random_traceless(rng, n=2) -> np.ndarray:
    """A random complex traceless n x n matrix with entries in [-1, 1]^2."""
    m = rng.uniform(-1.0, 1.0, (n, n)) + 1j * rng.uniform(-1.0, 1.0, (n, n))
    return m - (np.trace(m) / n) * np.eye(n)


def random_matrix_field2(rng, n=2, terms=3):
    """A random smooth traceless-matrix-valued field, as (scalars, matrices).

    Returns a list of (_TrigPoly-backed ScalarField2, constant traceless
    matrix) pairs; the matrix field is the sum of scalar * matrix products.
    The caller assembles it (see sdym.MatrixField2.from_basis).
    """
    return [(random_scalar_field2(rng, terms=2), random_traceless(rng, n))
            for _ in range(terms)]
