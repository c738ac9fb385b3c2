"""Roots of unity, the exponential sums t_u and the beta values behind the periods."""

from __future__ import annotations

import math

import numpy as np

from . import check_genus


def zeta_pow(g: int, k):
    """zeta^k with zeta = exp(2 pi i / (2g+2)); k may be an int or an int array."""
    n = 2 * g + 2
    k = np.mod(k, n)
    return np.exp(2j * np.pi * k / n)


def t_u(g: int, u: int) -> complex:
    """sum_{p=1}^{g} zeta^(u p), from the three-case closed form."""
    n = 2 * g + 2
    if u % n == 0:
        return complex(g)
    if u % 2 == 0:
        return complex(-1.0)
    zu = zeta_pow(g, u)
    # (1 + zeta^u) / (1 - zeta^u) is purely imaginary for odd u
    return complex(0.0, ((1 + zu) / (1 - zu)).imag)


def t_u_direct(g: int, u: int) -> complex:
    return complex(sum(zeta_pow(g, u * p) for p in range(1, g + 1)))


def beta(u: float, v: float) -> float:
    if u <= 0 or v <= 0:
        raise ValueError("beta function needs positive arguments")
    return math.exp(math.lgamma(u) + math.lgamma(v) - math.lgamma(u + v))


def beta_half(g: int, i: int) -> float:
    """B(i/(2g+2), 1/2)."""
    check_genus(g)
    if not 1 <= i <= g:
        raise ValueError(f"form index {i} outside 1..{g}")
    return beta(i / (2 * g + 2), 0.5)


def omega_prime_scale(g: int, i: int) -> complex:
    """Factor turning omega_i = z^(i-1) dz / w into the normalized omega'_i."""
    return (2 * g + 2) * 1j / (2 * beta_half(g, i))
