"""Command-line front end: solver invocation, passivity certification,
perturbation experiments, and region datasets.

Matrices travel as JSON objects ``{"name": ..., "rows": r, "cols": c,
"data": [[re, im], ...]}`` (row-major, explicit real/imaginary pairs).
A problem file is a JSON object with either ``{"F":, "G":, "K":}`` or
``{"A":, "B":, "C":, "D":}`` entries in that format.  Every JSON report
embeds a run manifest (command, input digests, tolerance overrides,
seed, tool version); CSV artifacts written to ``--out`` get a sibling
``<out>.manifest.json``.  Outputs are deterministic: the same manifest
always produces byte-identical files.

Exit codes: 0 = success, 2 = invalid input, 3 = analytic negative
(no solution, certification refused, no boundary crossing, vertex walk
blocked or out of budget).

Set ``HAMRICCATI_LOG`` to ``quiet`` (default), ``info`` or ``debug`` to
control progress messages on stderr.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .forms import HamiltonianMatrix, RiccatiData, StateSpace, from_state_space
from .linalg import LinalgError, SolvabilityError, loewner_leq
from .perturbation import (
    PerturbationDirection,
    PerturbationError,
    critical_time,
    perturbed_hamiltonian,
    region_membership,
    spectrum_snapshot,
    vertex_path,
)
from .riccati import (
    SOLVED,
    LagrangianConditionError,
    ari_residual,
    passivity_verdict,
    ph_realization,
    solve_extremal,
    solve_structured,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNSOLVED = 3

_DEFAULT_GRID = "0:5:21,0:10:21,-4:4:21"

log = logging.getLogger("hamriccati")


class InputError(Exception):
    """Invalid input file, flag combination, or format string."""


# ---------------------------------------------------------------------------
# logging


def _setup_logging() -> None:
    level_name = os.environ.get("HAMRICCATI_LOG", "quiet").strip().lower()
    levels = {"quiet": logging.CRITICAL, "info": logging.INFO, "debug": logging.DEBUG}
    if level_name not in levels:
        print(
            f"hamriccati: unknown HAMRICCATI_LOG value {level_name!r}; using quiet",
            file=sys.stderr,
        )
        level_name = "quiet"
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("hamriccati: %(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(levels[level_name])


# ---------------------------------------------------------------------------
# matrix and file plumbing


def _matrix_from_json(obj, name: str) -> np.ndarray:
    if not isinstance(obj, dict):
        raise InputError(f"matrix {name!r} must be a JSON object")
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"matrix {name!r} needs integer rows/cols and data") from exc
    if rows < 0 or cols < 0:
        raise InputError(f"matrix {name!r} has negative dimensions")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InputError(
            f"matrix {name!r} data length {len(data) if isinstance(data, list) else '?'}"
            f" does not match rows*cols = {rows * cols}"
        )
    out = np.empty(rows * cols, dtype=complex)
    for i, entry in enumerate(data):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise InputError(f"matrix {name!r} entry {i} is not an [re, im] pair")
        re_part, im_part = entry
        try:
            out[i] = complex(float(re_part), float(im_part))
        except (TypeError, ValueError) as exc:
            raise InputError(f"matrix {name!r} entry {i} is not numeric") from exc
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise InputError(f"matrix {name!r} contains non-finite entries")
    return out.reshape(rows, cols)


def _matrix_to_json(m, name: str) -> dict:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValueError("only 2-d matrices are serialized")
    return {
        "name": name,
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "data": [[float(v.real), float(v.imag)] for v in arr.ravel()],
    }


def _complex_list(values) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=complex)]


def _load_json(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _load_triple(path: str, *, state_space: bool) -> RiccatiData:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path} must hold a JSON object")
    if state_space:
        ss = _state_space_from(obj, path)
        return from_state_space(ss)
    missing = [key for key in ("F", "G", "K") if key not in obj]
    if missing:
        raise InputError(
            f"{path} is missing {missing}; a problem file needs F, G, K "
            "(or A, B, C, D with --state-space)"
        )
    f = _matrix_from_json(obj["F"], "F")
    g = _matrix_from_json(obj["G"], "G")
    k = _matrix_from_json(obj["K"], "K")
    try:
        return RiccatiData(f, g, k)
    except (ValueError, LinalgError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _state_space_from(obj: dict, path: str) -> StateSpace:
    missing = [key for key in ("A", "B", "C", "D") if key not in obj]
    if missing:
        raise InputError(f"{path} is missing {missing}; expected A, B, C, D")
    try:
        return StateSpace(
            _matrix_from_json(obj["A"], "A"),
            _matrix_from_json(obj["B"], "B"),
            _matrix_from_json(obj["C"], "C"),
            _matrix_from_json(obj["D"], "D"),
        )
    except (ValueError, LinalgError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_direction(path: str) -> PerturbationDirection:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path} must hold a JSON object")
    try:
        if "delta11" in obj:
            d11 = _matrix_from_json(obj["delta11"], "delta11")
            d21 = (
                _matrix_from_json(obj["delta21"], "delta21")
                if "delta21" in obj
                else None
            )
            d22 = (
                _matrix_from_json(obj["delta22"], "delta22")
                if "delta22" in obj
                else None
            )
            if d21 is None and d22 is None:
                return PerturbationDirection.delta11_only(d11)
            return PerturbationDirection.from_blocks(d11, d21, d22)
        if "rows" in obj:
            return PerturbationDirection.delta11_only(
                _matrix_from_json(obj, "delta11")
            )
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    raise InputError(
        f"{path} must hold either a matrix object (weight bump) or "
        'an object with "delta11" (and optional "delta21", "delta22")'
    )


def _manifest(
    command: list[str],
    inputs: dict[str, str],
    tolerances: dict[str, float | None],
    seed: int | None,
) -> dict:
    return {
        "command": command,
        "inputs": {key: _digest(path) for key, path in sorted(inputs.items())},
        "tolerances": tolerances,
        "seed": seed,
        "version": __version__,
    }


def _emit_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        log.info("wrote %s", out)


def _emit_json(report: dict, out: str | None) -> None:
    _emit_text(json.dumps(report, sort_keys=True, indent=2) + "\n", out)


def _emit_csv(header: list[str], rows: list[list[str]], manifest: dict, out: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _emit_text(buf.getvalue(), out)
    if out is not None:
        with open(out + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _fmt(value: float) -> str:
    return repr(float(value))


def _parse_axis(segment: str, what: str) -> np.ndarray:
    parts = segment.split(":")
    if len(parts) != 3:
        raise InputError(f"{what} segment {segment!r} is not start:stop:steps")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InputError(f"{what} segment {segment!r} is not numeric") from exc
    if steps < 1 or not np.isfinite(start) or not np.isfinite(stop):
        raise InputError(f"{what} segment {segment!r} needs steps >= 1 and finite ends")
    return np.linspace(start, stop, steps)


# ---------------------------------------------------------------------------
# solve


def _run_solve(ns: argparse.Namespace) -> int:
    data = _load_triple(ns.problem, state_space=ns.state_space)
    inputs = {"problem": ns.problem}
    tolerances: dict[str, float | None] = {"tol": ns.tol}
    if ns.verify is not None:
        inputs["x"] = ns.verify
    mode = "verify" if ns.verify is not None else ("extremal" if ns.extremal else "structured")
    command = ["solve", f"--{mode}"]
    if ns.state_space:
        command.append("--state-space")
    report: dict = {
        "manifest": _manifest(command, inputs, tolerances, None),
        "mode": mode,
        "n": data.n,
    }
    log.info("solve mode=%s n=%d", mode, data.n)

    if mode == "verify":
        x = _matrix_from_json(_load_json(ns.verify), "x")
        if x.shape != (data.n, data.n):
            raise InputError("the candidate matrix does not match the state dimension")
        tol = 1e-10 if ns.tol is None else ns.tol
        try:
            residual, verdict, delta_k = ari_residual(x, data, tol=tol)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        accepted = verdict.kind in (
            "negative-definite",
            "negative-semidefinite",
        ) or bool(np.max(verdict.eigenvalues) <= tol * (1.0 + np.linalg.norm(residual)))
        report.update(
            {
                "verdict": "accepted" if accepted else "rejected",
                "x": _matrix_to_json(x, "x"),
                "residual": _matrix_to_json(residual, "residual"),
                "residual_eigenvalues": [float(v) for v in verdict.eigenvalues],
                "residual_norm": float(np.linalg.norm(residual)),
                "residual_kind": verdict.kind,
                "k_increase": _matrix_to_json(delta_k, "k_increase"),
            }
        )
        _emit_json(report, ns.out)
        return EXIT_OK if accepted else EXIT_UNSOLVED

    if mode == "extremal":
        kwargs = {} if ns.tol is None else {"iso_tol": ns.tol}
        try:
            ext = solve_extremal(data, **kwargs)
        except (SolvabilityError, LagrangianConditionError, LinalgError) as exc:
            report.update({"verdict": "no_solution", "reason": str(exc)})
            _emit_json(report, ns.out)
            return EXIT_UNSOLVED
        sandwich = loewner_leq(ext.x_minus, ext.x_plus, tol=1e-8)
        report.update(
            {
                "verdict": "solved",
                "x_minus": _matrix_to_json(ext.x_minus, "x_minus"),
                "x_plus": _matrix_to_json(ext.x_plus, "x_plus"),
                "residual_norm_minus": float(np.linalg.norm(ext.residual_minus)),
                "residual_norm_plus": float(np.linalg.norm(ext.residual_plus)),
                "closed_loop_spectra": {
                    "minus": _complex_list(ext.closed_loop_spectra[0]),
                    "plus": _complex_list(ext.closed_loop_spectra[1]),
                },
                "loewner_sandwich": bool(sandwich),
            }
        )
        _emit_json(report, ns.out)
        return EXIT_OK

    kwargs = {} if ns.tol is None else {"tol": ns.tol}
    structured = solve_structured(data, **kwargs)
    report.update(
        {
            "verdict": structured.verdict,
            "x": None
            if structured.x is None
            else _matrix_to_json(structured.x, "x"),
            "stages": {
                key: _stage_to_json(key, value)
                for key, value in sorted(structured.stages.items())
            },
            "failures": [list(item) for item in structured.failures],
        }
    )
    evidence = structured.inconsistency_evidence
    if evidence is not None:
        report["inconsistency_evidence"] = (
            float(evidence)
            if np.ndim(evidence) == 0
            else _matrix_to_json(np.atleast_2d(evidence), "inconsistency_evidence")
        )
    _emit_json(report, ns.out)
    return EXIT_OK if structured.verdict == SOLVED else EXIT_UNSOLVED


def _stage_to_json(key: str, value):
    if isinstance(value, dict):
        return {name: float(v) for name, v in sorted(value.items())}
    if np.ndim(value) == 0:
        return float(value)
    return _matrix_to_json(value, key)


# ---------------------------------------------------------------------------
# passivity


def _run_passivity(ns: argparse.Namespace) -> int:
    obj = _load_json(ns.problem)
    if not isinstance(obj, dict):
        raise InputError(f"{ns.problem} must hold a JSON object")
    ss = _state_space_from(obj, ns.problem)
    tol = 1e-8 if ns.tol is None else ns.tol
    verdict = passivity_verdict(ss, tol=tol)
    report: dict = {
        "manifest": _manifest(
            ["passivity"], {"problem": ns.problem}, {"tol": ns.tol}, None
        ),
        "certified": bool(verdict.certified),
        "route": verdict.route,
        "lmi_margin": None if verdict.lmi_margin is None else float(verdict.lmi_margin),
    }
    if verdict.certified:
        realization = ph_realization(ss, verdict.x, tol=tol)
        report["x"] = _matrix_to_json(verdict.x, "x")
        report["realization"] = {
            "j": _matrix_to_json(realization.j, "j"),
            "r": _matrix_to_json(realization.r, "r"),
            "b_hat": _matrix_to_json(realization.b_hat, "b_hat"),
            "p_hat": _matrix_to_json(realization.p_hat, "p_hat"),
            "s": _matrix_to_json(realization.s, "s"),
            "n_skew": _matrix_to_json(realization.n_skew, "n_skew"),
            "w": _matrix_to_json(realization.w, "w"),
        }
        report["w_margin"] = float(np.min(np.linalg.eigvalsh(realization.w)))
    else:
        report["diagnostics"] = {
            "attempts": list(verdict.diagnostics.get("attempts", ())),
            "hamiltonian_axis_spectrum": _complex_list(
                verdict.diagnostics.get("hamiltonian_axis_spectrum", [])
            ),
        }
    _emit_json(report, ns.out)
    return EXIT_OK if verdict.certified else EXIT_UNSOLVED


# ---------------------------------------------------------------------------
# perturb


def _run_perturb(ns: argparse.Namespace) -> int:
    modes = [name for name, flag in (
        ("t-grid", ns.t_grid), ("critical", ns.critical), ("vertex", ns.vertex)
    ) if flag]
    if len(modes) != 1:
        raise InputError("pick exactly one of --t-grid, --critical, --vertex")
    mode = modes[0]
    data = _load_triple(ns.problem, state_space=False)
    base = HamiltonianMatrix(data)
    inputs = {"problem": ns.problem}
    direction = None
    if ns.delta is not None:
        direction = _load_direction(ns.delta)
        inputs["delta"] = ns.delta
        if direction.n != data.n:
            raise InputError("the direction does not match the state dimension")
    if direction is None and mode != "vertex":
        raise InputError(f"--{mode} needs a direction file")
    command = ["perturb"]
    if mode == "t-grid":
        command.append(f"--t-grid={ns.t_grid}")
    elif mode == "critical":
        command.append("--critical")
        if ns.t_max is not None:
            command.append(f"--t-max={ns.t_max!r}")
    else:
        command += ["--vertex", f"--budget={ns.budget}"]
    tolerances: dict[str, float | None] = {"tol": ns.tol}
    manifest = _manifest(command, inputs, tolerances, ns.seed)
    log.info("perturb mode=%s n=%d", mode, data.n)

    if mode == "t-grid":
        grid = _parse_axis(ns.t_grid, "--t-grid")
        if np.any(grid < 0):
            raise InputError("--t-grid values must be nonnegative")
        axis_tol = 1e-8 if ns.tol is None else ns.tol
        header = ["t"]
        for i in range(2 * data.n):
            header += [f"eig{i}_re", f"eig{i}_im"]
        header += ["n_axis", "inertia_minus", "inertia_plus", "inertia_zero"]
        rows = []
        for t in grid:
            arr = perturbed_hamiltonian(base, direction, float(t)).full
            snap = spectrum_snapshot(arr, t=float(t), axis_tol=axis_tol)
            row = [_fmt(t)]
            for v in snap.eigenvalues:
                row += [_fmt(v.real), _fmt(v.imag)]
            minus = sum(c.n_minus for c in snap.imaginary_groups)
            plus = sum(c.n_plus for c in snap.imaginary_groups)
            zero = sum(c.n_zero for c in snap.imaginary_groups)
            row += [str(snap.n_axis), str(minus), str(plus), str(zero)]
            rows.append(row)
        _emit_csv(header, rows, manifest, ns.out)
        return EXIT_OK

    if mode == "critical":
        kwargs = {} if ns.tol is None else {"imag_tol": ns.tol}
        if ns.t_max is not None:
            kwargs["t_max"] = ns.t_max
        try:
            ct = critical_time(base, direction, **kwargs)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        report = {
            "manifest": manifest,
            "mode": "critical",
            "status": ct.status,
            "t0": None if ct.t0 is None else float(ct.t0),
            "bracket": None if ct.bracket is None else [float(ct.bracket[0]), float(ct.bracket[1])],
            "bound": None if ct.bound is None else float(ct.bound),
            "n_axis_start": int(ct.n_axis_start),
        }
        _emit_json(report, ns.out)
        return EXIT_OK if ct.t0 is not None else EXIT_UNSOLVED

    rng = None if ns.seed is None else np.random.default_rng(ns.seed)
    kwargs = {} if ns.tol is None else {"imag_tol": ns.tol}
    try:
        path = vertex_path(
            base,
            directions=None if direction is None else [direction],
            budget=ns.budget,
            rng=rng,
            **kwargs,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    except PerturbationError as exc:
        _emit_json(
            {
                "manifest": manifest,
                "mode": "vertex",
                "status": "blocked",
                "legs": [],
                "blocking": str(exc),
                "terminal": None,
            },
            ns.out,
        )
        return EXIT_UNSOLVED
    report = {
        "manifest": manifest,
        "mode": "vertex",
        "status": path.status,
        "legs": [
            {
                "t_start": float(leg.t_start),
                "t_end": float(leg.t_end),
                "direction_delta11": _matrix_to_json(
                    leg.direction.delta11, "direction_delta11"
                ),
                "n_axis_end": int(leg.snapshots[-1].n_axis) if leg.snapshots else None,
            }
            for leg in path.legs
        ],
        "blocking": None if path.blocking is None else str(path.blocking),
    }
    if path.terminal is not None:
        report["terminal"] = {
            "x": _matrix_to_json(path.terminal.x, "x"),
            "gap": float(path.terminal.gap),
            "delta_accumulated": _matrix_to_json(
                path.terminal.delta_accumulated, "delta_accumulated"
            ),
        }
    else:
        report["terminal"] = None
    _emit_json(report, ns.out)
    return EXIT_OK if path.status == "vertex" else EXIT_UNSOLVED


# ---------------------------------------------------------------------------
# region


def _run_region(ns: argparse.Namespace) -> int:
    data = _load_triple(ns.problem, state_space=False)
    if data.n != 2:
        raise InputError(
            "region scans parameterize a 2x2 weight bump [[a, c], [c, b]]; "
            f"the problem has state dimension {data.n}"
        )
    base = HamiltonianMatrix(data)
    segments = ns.grid.split(",")
    if len(segments) != 3:
        raise InputError("--grid must have three comma-separated start:stop:steps axes")
    a_axis = _parse_axis(segments[0], "--grid a")
    b_axis = _parse_axis(segments[1], "--grid b")
    c_axis = _parse_axis(segments[2], "--grid c")
    tol_kwargs = {} if ns.tol is None else {"imag_tol": ns.tol}
    manifest = _manifest(
        ["region", f"--grid={ns.grid}"], {"problem": ns.problem}, {"tol": ns.tol}, None
    )
    log.info(
        "region grid %dx%dx%d = %d points",
        a_axis.size, b_axis.size, c_axis.size, a_axis.size * b_axis.size * c_axis.size,
    )
    header = ["a", "b", "c", "membership", "min_abs_re_lambda", "margin"]
    rows = []
    for a in a_axis:
        for b in b_axis:
            for c in c_axis:
                d = PerturbationDirection.delta11_only(
                    [[a, c], [c, b]], validate=False
                )
                verdict = region_membership(base, d, **tol_kwargs)
                min_re = float(np.min(np.abs(verdict.snapshot.eigenvalues.real)))
                rows.append(
                    [
                        _fmt(a),
                        _fmt(b),
                        _fmt(c),
                        verdict.membership,
                        _fmt(min_re),
                        _fmt(verdict.margin),
                    ]
                )
    _emit_csv(header, rows, manifest, ns.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamriccati",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"hamriccati {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser(
        "solve", help="solve or verify an algebraic Riccati problem"
    )
    solve.add_argument("problem", help="problem JSON file (F, G, K or A, B, C, D)")
    mode = solve.add_mutually_exclusive_group()
    mode.add_argument(
        "--extremal", action="store_true",
        help="compute the extremal solution pair (default: --structured)",
    )
    mode.add_argument(
        "--structured", action="store_true",
        help="run the staged pipeline for singular weights",
    )
    mode.add_argument(
        "--verify", metavar="X_FILE",
        help="check a candidate matrix against the Riccati inequality",
    )
    solve.add_argument(
        "--state-space", action="store_true",
        help="interpret the problem file as A, B, C, D and reduce it first",
    )
    solve.add_argument(
        "--tol", type=float, default=None,
        help="tolerance override (extremal: isotropy 1e-6; structured: "
        "acceptance 1e-8; verify: residual band 1e-10)",
    )
    solve.add_argument("--out", default=None, help="report path (default: stdout)")
    solve.set_defaults(run=_run_solve)

    passivity = sub.add_parser(
        "passivity", help="certify passivity and emit a port-Hamiltonian form"
    )
    passivity.add_argument("problem", help="state-space JSON file (A, B, C, D)")
    passivity.add_argument(
        "--tol", type=float, default=None,
        help="semidefiniteness band for the certificate (default 1e-8)",
    )
    passivity.add_argument("--out", default=None, help="report path (default: stdout)")
    passivity.set_defaults(run=_run_passivity)

    perturb = sub.add_parser(
        "perturb", help="perturbation experiments along a weight direction"
    )
    perturb.add_argument("problem", help="problem JSON file (F, G, K)")
    perturb.add_argument(
        "delta", nargs="?", default=None,
        help="direction JSON file (matrix object, or {delta11, delta21, delta22}); "
        "optional for --vertex (a freezing direction is synthesized)",
    )
    perturb.add_argument(
        "--t-grid", metavar="T0:T1:N", default=None,
        help="emit a CSV of eigenvalues and inertia along the segment",
    )
    perturb.add_argument(
        "--critical", action="store_true",
        help="locate the first boundary crossing along the ray",
    )
    perturb.add_argument(
        "--vertex", action="store_true",
        help="walk from vertex to vertex until the solution is unique",
    )
    perturb.add_argument(
        "--t-max", type=float, default=None,
        help="scan limit for --critical when no certified bound exists",
    )
    perturb.add_argument(
        "--budget", type=int, default=8, help="maximum legs for --vertex (default 8)"
    )
    perturb.add_argument(
        "--seed", type=int, default=None,
        help="seed for randomized synthesized directions (default: deterministic projector)",
    )
    perturb.add_argument(
        "--tol", type=float, default=None,
        help="axis detection tolerance (default: t-grid 1e-8, critical/vertex 1e-7)",
    )
    perturb.add_argument("--out", default=None, help="artifact path (default: stdout)")
    perturb.set_defaults(run=_run_perturb)

    region = sub.add_parser(
        "region", help="classify a grid of weight bumps into the feasible region"
    )
    region.add_argument("problem", help="problem JSON file (F, G, K), state dimension 2")
    region.add_argument(
        "--grid", default=_DEFAULT_GRID, metavar="A0:A1:NA,B0:B1:NB,C0:C1:NC",
        help=f"per-axis start:stop:steps (default {_DEFAULT_GRID})",
    )
    region.add_argument(
        "--tol", type=float, default=None,
        help="axis detection tolerance for membership (default 1e-7)",
    )
    region.add_argument("--out", default=None, help="CSV path (default: stdout)")
    region.set_defaults(run=_run_region)
    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.run(ns)
    except InputError as exc:
        print(f"hamriccati: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
