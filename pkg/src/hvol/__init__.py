"""Harmonic volumes of hyperelliptic curves.

Two independent routes are provided: closed-form periods and iterated
integrals on the curve w^2 = z^(2g+2) - 1 (checked by tanh-sinh
quadrature), and a mod-2 route through invariant functionals of the
hyperelliptic mapping class group action on H_1(C; Z/2).
"""

__version__ = "0.1.0"

MIN_GENUS = 3
MAX_GENUS = 12


class GenusError(ValueError):
    """Genus outside the supported range."""


def check_genus(g: int) -> int:
    if isinstance(g, bool) or int(g) != g:
        raise GenusError(f"genus must be an integer, got {g!r}")
    g = int(g)
    if not MIN_GENUS <= g <= MAX_GENUS:
        raise GenusError(f"genus must lie in [{MIN_GENUS}, {MAX_GENUS}], got {g}")
    return g
