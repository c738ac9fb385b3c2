"""The acceptance checks, each comparing two independent routes to a number.

Every check takes a list of genera and a quadrature config and returns a
CheckResult; ``run_checks`` drives the whole registry.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import iterated, mod2, periods, quadrature, tensors, volume
from .curve import a_loop, b_loop, e, ie, n_branch, relator_word
from .periods import alpha, beta, omega, omega_bar
from .quadrature import QuadConfig


@dataclass
class Measurement:
    label: str
    err: float
    tol: float

    @property
    def ok(self) -> bool:
        return bool(self.err < self.tol)


@dataclass
class CheckResult:
    name: str
    genera: tuple[int, ...]
    measurements: list[Measurement] = field(default_factory=list)
    conditions: dict[str, bool] = field(default_factory=dict)
    seconds: float = 0.0
    time_limit: Optional[float] = None
    error: str = ""

    def measure(self, label: str, err: float, tol: float) -> None:
        self.measurements.append(Measurement(label, float(err), tol))

    @property
    def worst(self) -> Optional[Measurement]:
        if not self.measurements:
            return None
        return max(self.measurements, key=lambda m: m.err / m.tol)

    @property
    def max_abs_err(self) -> float:
        w = self.worst
        return w.err if w else 0.0

    @property
    def tolerance(self) -> float:
        w = self.worst
        return w.tol if w else 0.0

    @property
    def passed(self) -> bool:
        if self.error:
            return False
        if self.time_limit is not None and self.seconds >= self.time_limit:
            return False
        return all(m.ok for m in self.measurements) and all(self.conditions.values())

    def failures(self) -> list[str]:
        out = [f"{m.label}: {m.err:.3e} >= {m.tol:.0e}" for m in self.measurements if not m.ok]
        out += [name for name, ok in self.conditions.items() if not ok]
        if self.time_limit is not None and self.seconds >= self.time_limit:
            out.append(f"runtime {self.seconds:.1f}s >= {self.time_limit:.0f}s")
        if self.error:
            out.append(self.error)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        g = ",".join(map(str, self.genera))
        text = f"[{status}] {self.name} (g={g}) max_err={self.max_abs_err:.3e} tol={self.tolerance:.0e} {self.seconds:.2f}s"
        if not self.passed:
            text += " :: " + "; ".join(self.failures()[:3])
        return text


def _relerr(a: complex, b: complex) -> float:
    # some loop periods vanish exactly; fall back to absolute error below unit size
    return abs(a - b) / max(abs(b), 1.0)


def check_periods(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        worst = 0.0
        for i in range(1, g + 1):
            for j in range(n_branch(g)):
                for letter in (e(j), ie(j)):
                    for form in (omega(i), omega_bar(i)):
                        q = quadrature.quad_period(g, form, letter, cfg)
                        worst = max(worst, _relerr(q, periods.segment_period(g, form, letter)))
            for j in range(1, g + 1):
                for kind, word in (("a", a_loop(g, j)), ("b", b_loop(g, j))):
                    q = quadrature.quad_word_period(g, omega(i), word, cfg)
                    worst = max(worst, _relerr(q, periods.loop_period_closed(g, i, kind, j)))
        res.measure(f"g={g} quadrature vs closed periods (relative)", worst, 1e-8)


def check_period_matrix(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        pm = periods.period_matrices(g)
        z = pm.Z
        res.measure(f"g={g} Z - Z^T", np.abs(z - z.T).max(), 1e-12)
        res.measure(f"g={g} Re Z", np.abs(z.real).max(), 1e-12)
        res.measure(f"g={g} root sum vs Omega_a^-1 Omega_b", np.abs(periods.schindler_z(g) - z).max(), 1e-10)
        res.measure(f"g={g} real form vs Omega_a^-1 Omega_b", np.abs(1j * periods.schindler_imag_part(g) - z).max(), 1e-10)
        inv_err = np.abs(np.linalg.inv(pm.omega_a) @ pm.omega_b - z).max()
        res.measure(f"g={g} numpy inverse vs closed inverse", inv_err, 1e-10)
        res.conditions[f"g={g} Im Z positive definite"] = periods.is_positive_definite(z.imag)


def check_duality(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        num = quadrature.numerical_harmonic_periods(g, cfg)
        eye = np.eye(g)
        targets = {"alpha_a": 0 * eye, "alpha_b": eye, "beta_a": -eye, "beta_b": 0 * eye}
        for key, target in targets.items():
            res.measure(f"g={g} {key}", np.abs(num[key] - target).max(), 1e-8)


def check_iterated(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        formula_err = oracle_err = 0.0
        for k in range(1, g + 1):
            for kind, word in (("a", a_loop(g, k)), ("b", b_loop(g, k))):
                m = iterated.basic_iterated_matrix(g, word)
                for i, j in itertools.product(range(1, g + 1), repeat=2):
                    formula_err = max(
                        formula_err,
                        abs(m[i - 1, j - 1] - iterated.loop_iterated_closed(g, i, j, k, kind)),
                        abs(m[i - 1, g + j - 1] - iterated.loop_iterated_closed(g, i, j, k, kind, True)),
                    )
                q, _ = quadrature.quad_iterated_matrix(g, word, cfg)
                oracle_err = max(oracle_err, np.abs(q - m).max())
        res.measure(f"g={g} engine vs closed form", formula_err, 1e-10)
        res.measure(f"g={g} engine vs quadrature", oracle_err, 1e-6)


def check_harmonic_displays(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        errs = [0.0] * 4
        for i, j, k in itertools.product(range(1, g + 1), repeat=3):
            bb_a = iterated.harmonic_pair_iterated(g, beta(i), beta(j), "a", k)
            aa_b = iterated.harmonic_pair_iterated(g, alpha(i), alpha(j), "b", k)
            errs[0] = max(errs[0], abs(bb_a - iterated.beta_beta_a_display(g, i, j, k)))
            errs[1] = max(errs[1], abs(iterated.harmonic_pair_iterated(g, beta(i), beta(j), "b", k)))
            errs[2] = max(errs[2], abs(iterated.harmonic_pair_iterated(g, alpha(i), alpha(j), "a", k)))
            errs[3] = max(errs[3], abs(aa_b - iterated.alpha_alpha_b_display(g, i, j, k)))
        for n, err in enumerate(errs, 1):
            res.measure(f"g={g} display ({n})", err, 1e-10)


def check_volume_table(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        rows = volume.volume_table(g, strict=False)
        snapped = [r for r in rows if r.result is not None]
        raw_dist = max((r.result.residual for r in snapped), default=0.0)
        res.measure(f"g={g} distance of raw values to {{0, 1/2}}", raw_dist, 1e-4)
        res.conditions[f"g={g} every element snaps"] = len(snapped) == len(rows)
        mismatches = sum(1 for r in rows if not r.ok)
        res.conditions[f"g={g} zero mismatches ({mismatches} found)"] = mismatches == 0


def check_equivariance(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        res.measure(f"g={g} I(s t) - sgn(s) I(t) mod 1", volume.max_equivariance_defect(g), 1e-8)


def k_basis(g: int) -> list[tuple[tuple[tensors.BasisSymbol, tensors.BasisSymbol, int], ...]]:
    """A basis of the kernel K of the pairing H (x) H -> Z, as weighted pairs."""
    syms = tensors.symbols(g)
    out = [((a, b, 1),) for a in syms for b in syms if tensors.pairing(a, b) == 0]
    x1, y1 = tensors.x(1), tensors.y(1)
    for i in range(2, g + 1):
        out.append(((tensors.x(i), tensors.y(i), 1), (x1, y1, -1)))
    for i in range(1, g + 1):
        out.append(((tensors.x(i), tensors.y(i), 1), (tensors.y(i), tensors.x(i), 1)))
    return out


def check_relator(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        word = relator_word(g)
        basis = k_basis(g)
        coeffs = np.array([periods.coefficient_vector(g, iterated.symbol_form(s)) for s in tensors.symbols(g)])
        q, _ = quadrature.quad_iterated_matrix(g, word, cfg)
        q_real = coeffs @ q @ coeffs.T
        engine = oracle = 0.0
        for combo in basis:
            pairs = [(iterated.symbol_form(a), iterated.symbol_form(b), w) for a, b, w in combo]
            engine = max(engine, abs(iterated.k_combination_iterated(g, pairs, word)))
            oracle = max(oracle, abs(sum(w * q_real[a.position(), b.position()] for a, b, w in combo)))
        res.conditions[f"g={g} K basis has rank 4g^2-1 ({len(basis)})"] = len(basis) == 4 * g * g - 1
        res.measure(f"g={g} engine on relator", engine, 1e-12)
        res.measure(f"g={g} quadrature on relator", oracle, 1e-6)


def check_basis(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        _, basis = tensors.enumerate_basis(g, check=False)
        res.conditions[f"g={g} |B| = (2g)^3 - 6g"] = len(basis) == tensors.expected_rank(g)
        res.conditions[f"g={g} p(b) = 0 on B"] = all(tensors.in_kernel(b.element) for b in basis)
        rank = tensors.rank_mod_prime(tensors.monomial_matrix(g, (b.element for b in basis)))
        res.conditions[f"g={g} B has full rank"] = rank == len(basis)
        res.conditions[f"g={g} rank p = 6g"] = tensors.rank_mod_prime(tensors.p_matrix(g)) == 6 * g


def check_mod2_dimensions(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        dims = {
            ("S2g+1", "H"): 0,
            ("S2g+1", "H3"): 1,
            ("S2g+2", "H3"): 0,
            ("Delta", "H3'"): 1,
        }
        for (group, module), want in dims.items():
            space = mod2.invariant_functionals(g, group, module)
            res.conditions[f"g={g} dim H0({group}; {module}*) = {want} (got {space.dim})"] = space.dim == want
            if (group, module) == ("S2g+1", "H3") and space.dim == 1:
                res.conditions[f"g={g} generator is psi"] = bool(np.array_equal(space.basis[0], mod2.psi_vector(g)))


def check_cross_route(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    half = Fraction(1, 2)
    for g in genera:
        analytic = {r.family: r.result.value for r in volume.volume_table(g)}
        rows = mod2.second_proof_table(g)
        bad = sum(1 for r in rows if (r.psi == 1) != (analytic[r.family] == half))
        res.conditions[f"g={g} second proof agrees ({bad} mismatches of {len(rows)})"] = bad == 0


def check_presentation(genera: Sequence[int], cfg: QuadConfig, res: CheckResult) -> None:
    for g in genera:
        h1 = mod2.presentation_h1(mod2.birman_hilden(g), mod2.dual_h(g))
        res.conditions[f"g={g} dim H1(Delta; H*) = 1 (got {h1.dim})"] = h1.dim == 1
        cc = mod2.connecting_class(g)
        res.conditions[f"g={g} connecting class is a cocycle"] = cc.is_cocycle
        res.conditions[f"g={g} connecting class is nonzero"] = cc.nonzero
        res.conditions[f"g={g} connecting class is the generator"] = cc.equals_generator


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[Sequence[int], QuadConfig, CheckResult], None]
    default_genera: tuple[int, ...]
    time_limit: Optional[float] = None


CHECKS: tuple[Check, ...] = (
    Check("periods", check_periods, (3, 4, 5), 30.0),
    Check("period_matrix", check_period_matrix, (3, 4, 5, 6, 7, 8)),
    Check("duality", check_duality, (3, 4, 5)),
    Check("iterated", check_iterated, (3, 4, 5), 300.0),
    Check("harmonic_displays", check_harmonic_displays, (3, 4, 5)),
    Check("volume_table", check_volume_table, (3, 4, 5, 6)),
    Check("s3_equivariance", check_equivariance, (3,)),
    Check("relator", check_relator, (3,)),
    Check("basis", check_basis, (3, 4)),
    Check("mod2_dimensions", check_mod2_dimensions, (3, 4), 60.0),
    Check("cross_route", check_cross_route, (3, 4, 5, 6)),
    Check("presentation_h1", check_presentation, (3,), 600.0),
)

CHECK_NAMES = tuple(c.name for c in CHECKS)


def run_check(check: Check, genera: Optional[Sequence[int]] = None, cfg: QuadConfig = QuadConfig()) -> CheckResult:
    genera = tuple(genera) if genera else check.default_genera
    res = CheckResult(check.name, genera, time_limit=check.time_limit)
    start = time.perf_counter()
    try:
        check.run(genera, cfg, res)
    except Exception as exc:  # a crash is a failed check, reported with its message
        res.error = f"{type(exc).__name__}: {exc}"
    res.seconds = time.perf_counter() - start
    return res


def run_checks(
    genus: Optional[int] = None, cfg: QuadConfig = QuadConfig(), names: Optional[Sequence[str]] = None
) -> list[CheckResult]:
    selected = [c for c in CHECKS if names is None or c.name in names]
    return [run_check(c, [genus] if genus else None, cfg) for c in selected]
