"""Command-line front end: hvol <command> [--genus G] [--format json|csv|text] ..."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from . import GenusError, MAX_GENUS, MIN_GENUS, check_genus, iterated, mod2, periods, verify, volume
from .curve import a_loop, b_loop
from .periods import alpha, beta
from .quadrature import QuadConfig, QuadratureError, quad_iterated_matrix

COMMANDS = ("periods", "period-matrix", "iterated", "volume-table", "mod2", "verify")
FORMATS = ("json", "csv", "text")
ENV_QUAD_LEVEL = "HVOL_QUAD_LEVEL"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    genus: Optional[int]
    tol: float
    quad_level: int
    fmt: str
    out: Optional[str]
    jobs: int
    oracle: bool = False
    checks: Optional[tuple[str, ...]] = None


# --- serialization ----------------------------------------------------------------


_PLACEHOLDER = re.compile(r'"\\u0000(\d+)\\u0000"')


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _encode(obj: Any, floats: list[str]) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        floats.append(fmt_float(obj))
        return f"\x00{len(floats) - 1}\x00"
    if isinstance(obj, (complex, np.complexfloating)):
        return [_encode(obj.real, floats), _encode(obj.imag, floats)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_encode(v, floats) for v in obj.tolist()] if obj.ndim else _encode(obj.item(), floats)
    if isinstance(obj, dict):
        return {str(k): _encode(v, floats) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v, floats) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(payload: dict) -> str:
    """JSON with every float written at 17 significant digits."""
    floats: list[str] = []
    text = json.dumps(_encode(payload, floats), indent=2, ensure_ascii=False)
    text = _PLACEHOLDER.sub(lambda m: floats[int(m.group(1))], text)
    return text + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    if isinstance(v, (dict, list, tuple)):
        return to_json(v).strip().replace("\n", "").replace("  ", "")
    return str(v)


def _flatten_row(row: dict) -> dict:
    out = {}
    for key, value in row.items():
        if isinstance(value, (complex, np.complexfloating)):
            out[f"{key}_re"] = value.real
            out[f"{key}_im"] = value.imag
        else:
            out[key] = value
    return out


def _matrix_rows(matrices: dict) -> list[dict]:
    rows = []
    for name, m in matrices.items():
        m = np.asarray(m)
        for (r, c), v in np.ndenumerate(m):
            v = complex(v)
            rows.append({"matrix": name, "row": r + 1, "col": c + 1, "re": v.real, "im": v.imag})
    return rows


def to_csv(payload: dict) -> str:
    if "entries" in payload:
        rows = [_flatten_row(r) for r in payload["entries"]]
    elif "matrices" in payload:
        rows = _matrix_rows(payload["matrices"])
    else:
        rows = [_flatten_row(r) for r in payload["checks"]]
    columns: list[str] = []
    for row in rows:
        columns += [k for k in row if k not in columns]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c, "")) for c in columns])
    return buf.getvalue()


def _text_value(v: Any) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        return f"{v.real:+.12f}{v.imag:+.12f}i"
    if isinstance(v, (float, np.floating)):
        return f"{v:.12g}"
    return _cell(v)


def to_text(payload: dict) -> str:
    genus = payload['genus'] if payload['genus'] is not None else 'default'
    lines = [f"# {payload['command']} genus={genus}"]
    if "matrices" in payload:
        for name, m in payload["matrices"].items():
            lines.append(f"{name}:")
            for row in np.atleast_2d(np.asarray(m)):
                lines.append("  " + "  ".join(_text_value(v) for v in row))
        for key, value in payload.get("properties", {}).items():
            lines.append(f"{key}: {_text_value(value)}")
    if "entries" in payload:
        for row in payload["entries"]:
            lines.append("  ".join(f"{k}={_text_value(v)}" for k, v in row.items()))
    if "checks" in payload:
        for c in payload["checks"]:
            status = "PASS" if c["pass"] else "FAIL"
            lines.append(
                f"[{status}] {c['name']:<16} max_err={c['max_abs_err']:.3e} tol={c['tolerance']:.0e} {c['seconds']:.2f}s"
            )
            for f in c["failures"]:
                lines.append(f"    {f}")
    return "\n".join(lines) + "\n"


RENDER = {"json": to_json, "csv": to_csv, "text": to_text}


# --- commands -----------------------------------------------------------------------


def cmd_periods(cfg: RunConfig) -> tuple[dict, int]:
    pm = periods.period_matrices(cfg.genus)
    return {"matrices": {"omega_a": pm.omega_a, "omega_b": pm.omega_b, "Z": pm.Z}}, EXIT_OK


def cmd_period_matrix(cfg: RunConfig) -> tuple[dict, int]:
    g = cfg.genus
    pm = periods.period_matrices(g)
    z = pm.Z
    props = {
        "symmetry_err": float(np.abs(z - z.T).max()),
        "real_part_max": float(np.abs(z.real).max()),
        "imag_positive_definite": periods.is_positive_definite(z.imag),
        "root_sum_err": float(np.abs(periods.schindler_z(g) - z).max()),
        "real_form_err": float(np.abs(1j * periods.schindler_imag_part(g) - z).max()),
    }
    mats = {"Z": z, "omega_a_inv": pm.omega_a_inv, "omega_b_inv": pm.omega_b_inv}
    return {"matrices": mats, "properties": props}, EXIT_OK


def cmd_iterated(cfg: RunConfig) -> tuple[dict, int]:
    g = cfg.genus
    quad = QuadConfig(level=cfg.quad_level)
    entries = []
    for kind, loop in (("a", a_loop), ("b", b_loop)):
        for k in range(1, g + 1):
            word = loop(g, k)
            m = iterated.basic_iterated_matrix(g, word)
            q = quad_iterated_matrix(g, word, quad)[0] if cfg.oracle else None
            for i, j in itertools.product(range(1, g + 1), repeat=2):
                row = {
                    "table": "omega_pair",
                    "loop": f"{kind}{k}",
                    "i": i,
                    "j": j,
                    "engine": complex(m[i - 1, j - 1]),
                    "formula": iterated.loop_iterated_closed(g, i, j, k, kind),
                }
                if q is not None:
                    row["quadrature"] = complex(q[i - 1, j - 1])
                entries.append(row)
    displays = (
        ("(1)", beta, "a", iterated.beta_beta_a_display),
        ("(2)", beta, "b", None),
        ("(3)", alpha, "a", None),
        ("(4)", alpha, "b", iterated.alpha_alpha_b_display),
    )
    for label, form, kind, display in displays:
        for i, j, k in itertools.product(range(1, g + 1), repeat=3):
            entries.append(
                {
                    "table": "harmonic",
                    "display": label,
                    "loop": f"{kind}{k}",
                    "i": i,
                    "j": j,
                    "engine": iterated.harmonic_pair_iterated(g, form(i), form(j), kind, k),
                    "formula": display(g, i, j, k) if display else 0.0,
                }
            )
    return {"entries": entries}, EXIT_OK


def cmd_volume_table(cfg: RunConfig) -> tuple[dict, int]:
    g = cfg.genus
    rows = volume.volume_table(g, tol=cfg.tol, jobs=cfg.jobs, strict=False)
    entries = []
    for r in rows:
        fam = r.family
        entries.append(
            {
                "kind": fam.kind,
                "indices": dict(fam.indices) | ({"z": fam.z} if fam.z and fam.kind != "1" else {}),
                "slots": str(fam.element),
                "value": str(r.result.value) if r.result else None,
                "raw": r.result.raw if r.result else None,
                "residual": r.result.residual if r.result else None,
                "expected": str(r.expected),
            }
        )
    ok = all(r.ok for r in rows)
    return {"entries": entries}, EXIT_OK if ok else EXIT_FAIL


def cmd_mod2(cfg: RunConfig) -> tuple[dict, int]:
    g = cfg.genus
    entries: list[dict] = []
    for group, module in (("S2g+1", "H"), ("S2g+1", "H3"), ("S2g+2", "H3"), ("Delta", "H3'"), ("Delta'", "H3'")):
        space = mod2.invariant_functionals(g, group, module)
        entries.append({"section": "invariants", "group": group, "module": module, "dim": space.dim})
    n = 2 * g
    for ijk in itertools.combinations_with_replacement(range(1, n + 2), 3):
        entries.append({"section": "psi", "f": list(ijk), "value": mod2.psi_rule(*ijk)})
    for row in mod2.second_proof_table(g):
        fam = row.family
        entries.append(
            {"section": "second_proof", "kind": fam.kind, "indices": dict(fam.indices), "slots": str(fam.element), "psi": row.psi}
        )
    h1 = mod2.presentation_h1(mod2.birman_hilden(g), mod2.dual_h(g))
    entries.append({"section": "presentation_h1", "module": "H*", "dim": h1.dim})
    cc = mod2.connecting_class(g)
    entries.append(
        {
            "section": "connecting_class",
            "is_cocycle": cc.is_cocycle,
            "nonzero": cc.nonzero,
            "generator": cc.equals_generator,
            "cocycle": "".join(map(str, cc.cocycle.tolist())),
        }
    )
    return {"entries": entries}, EXIT_OK


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    quad = QuadConfig(level=cfg.quad_level)
    selected = [c for c in verify.CHECKS if cfg.checks is None or c.name in cfg.checks]
    genera = [cfg.genus] if cfg.genus else None
    run = lambda c: verify.run_check(c, genera, quad)
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(run, selected))
    else:
        results = [run(c) for c in selected]
    checks = [
        {
            "name": r.name,
            "genera": list(r.genera),
            "max_abs_err": r.max_abs_err,
            "tolerance": r.tolerance,
            "pass": r.passed,
            "seconds": round(r.seconds, 3),
            "failures": r.failures(),
        }
        for r in results
    ]
    return {"checks": checks}, EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


HANDLERS = {
    "periods": cmd_periods,
    "period-matrix": cmd_period_matrix,
    "iterated": cmd_iterated,
    "volume-table": cmd_volume_table,
    "mod2": cmd_mod2,
    "verify": cmd_verify,
}


# --- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--genus", type=int, help=f"genus in [{MIN_GENUS}, {MAX_GENUS}]")
    common.add_argument("--tol", type=float, default=volume.SNAP_TOL, help="snap tolerance for volumes")
    common.add_argument("--quad-level", type=int, help=f"quadrature depth (env {ENV_QUAD_LEVEL})")
    common.add_argument("--format", choices=FORMATS, default="json", dest="fmt")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=1)

    parser = argparse.ArgumentParser(prog="hvol", description="Harmonic volume of w^2 = z^(2g+2) - 1.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("periods", parents=[common], help="period matrices Omega_a, Omega_b and Z")
    sub.add_parser("period-matrix", parents=[common], help="Z with its symmetry and positivity checks")
    it = sub.add_parser("iterated", parents=[common], help="iterated integrals on the loops a_k, b_k")
    it.add_argument("--oracle", action="store_true", help="add the quadrature value to each omega_pair row")
    sub.add_parser("volume-table", parents=[common], help="harmonic volumes of the canonical family")
    sub.add_parser("mod2", parents=[common], help="mod-2 invariants, psi and the connecting class")
    ver = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    ver.add_argument("--check", action="append", choices=verify.CHECK_NAMES, help="run only this check")
    return parser


def resolve_config(args: argparse.Namespace, environ: Optional[dict] = None) -> RunConfig:
    environ = os.environ if environ is None else environ
    genus = args.genus
    if genus is None and args.command != "verify":
        genus = 3
    if genus is not None:
        check_genus(genus)
    level = args.quad_level
    if level is None:
        raw = environ.get(ENV_QUAD_LEVEL)
        try:
            level = int(raw) if raw else QuadConfig().level
        except ValueError:
            raise UsageError(f"{ENV_QUAD_LEVEL}={raw!r} is not an integer") from None
    QuadConfig(level=level)  # range check
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if not 0 < args.tol < 0.25:
        raise UsageError("--tol must lie in (0, 0.25)")
    checks = tuple(args.check) if getattr(args, "check", None) else None
    return RunConfig(args.command, genus, args.tol, level, args.fmt, args.out, args.jobs, getattr(args, "oracle", False), checks)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(fmt: str, out: Optional[str], kind: str, message: str) -> None:
    if fmt == "json":
        _emit(to_json({"error": {"type": kind, "message": message}}), out)
    else:
        print(f"hvol: {kind}: {message}", file=sys.stderr)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = resolve_config(args)
    except (GenusError, UsageError, ValueError) as exc:
        _error(args.fmt, args.out, type(exc).__name__, str(exc))
        return EXIT_USAGE
    try:
        body, code = HANDLERS[cfg.command](cfg)
    except QuadratureError as exc:
        _error(cfg.fmt, cfg.out, "QuadratureError", str(exc))
        return EXIT_FAIL
    payload = {"genus": cfg.genus, "command": cfg.command, **body}
    _emit(RENDER[cfg.fmt](payload), cfg.out)
    return code


def main() -> None:
    sys.exit(run())
