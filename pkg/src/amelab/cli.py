"""Command line front end: ``amelab <command> ...``.

Every command prints a JSON report and exits 0 on pass, 1 on fail and 2
on bad input. State files are JSON with amplitudes as ``[re, im]`` decimal
strings carrying 17 significant digits, which round-trips doubles exactly.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

from amelab import codes, constructions, finite_groups, invariants, vinberg_so8
from amelab.codes import CodeBasis
from amelab.tensor_core import DEFAULT_TOL, Ket, apply_local, random_sl2

SCHEMA_VERSION = 1
REPORT_KEYS = ("schema", "command", "inputs", "verdict", "checks", "data", "outputs",
               "message", "runtime_s")
CHECK_KEYS = ("name", "ok", "residual", "tol")
DEFAULT_SEED = 20240601


class InputError(Exception):
    """Malformed or inadmissible input; reported with exit code 2."""


# -- state files ------------------------------------------------------------------

def _num(x: float) -> str:
    return format(float(x), ".17g")


def ket_to_dict(k: Ket, label: str | None = None, metadata: dict | None = None) -> dict:
    d = {"n": k.n, "local_dim": k.local_dim,
         "amps": [[_num(a.real), _num(a.imag)] for a in k.amps]}
    if label:
        d["label"] = label
    if metadata:
        d["metadata"] = metadata
    return d


def ket_from_dict(d: dict) -> Ket:
    try:
        n, D = int(d["n"]), int(d["local_dim"])
        amps = np.array([complex(float(re), float(im)) for re, im in d["amps"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed state file: {exc}") from exc
    if len(amps) != D ** n:
        raise InputError(f"state file has {len(amps)} amplitudes, expected {D}**{n}")
    return Ket(amps, n, D)


def write_state(path: Path, k: Ket, label=None, metadata=None) -> str:
    path.write_text(json.dumps(ket_to_dict(k, label, metadata), indent=1) + "\n")
    return str(path)


def read_state(path: str) -> Ket:
    try:
        text = Path(path).read_text()
        return ket_from_dict(json.loads(text))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read state file {path}: {exc}") from exc


def _digest(path: str) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
    except OSError:
        return "unreadable"


# -- reports ------------------------------------------------------------------------

class Report:
    def __init__(self, command: str, inputs=()):
        self.command = command
        self.inputs = {p: _digest(p) for p in inputs}
        self.checks: list[dict] = []
        self.data: dict = {}
        self.outputs: list[str] = []
        self.message = ""
        self.error = False
        self._t0 = time.perf_counter()

    def check(self, name: str, ok: bool, residual: float = 0.0, tol: float | None = None):
        self.checks.append({"name": name, "ok": bool(ok), "residual": abs(float(residual)),
                            "tol": None if tol is None else float(tol)})
        return ok

    @property
    def verdict(self) -> str:
        if self.error:
            return "error"
        return "pass" if all(c["ok"] for c in self.checks) else "fail"

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, "command": self.command, "inputs": self.inputs,
                "verdict": self.verdict, "checks": self.checks, "data": _jsonable(self.data),
                "outputs": self.outputs, "message": self.message,
                "runtime_s": round(time.perf_counter() - self._t0, 6)}


def validate_report(d: dict) -> None:
    """Raise ``ValueError`` unless ``d`` follows the report schema."""
    if tuple(d) != REPORT_KEYS:
        raise ValueError(f"report keys {tuple(d)} != {REPORT_KEYS}")
    if d["verdict"] not in ("pass", "fail", "error"):
        raise ValueError(f"bad verdict {d['verdict']!r}")
    for c in d["checks"]:
        if tuple(c) != CHECK_KEYS or c["residual"] < 0:
            raise ValueError(f"bad check entry {c}")
    if d["verdict"] == "pass" and not all(c["ok"] for c in d["checks"]):
        raise ValueError("verdict pass with a failing check")


def _jsonable(x: Any):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


# -- commands -------------------------------------------------------------------------

def _out_paths(args, stem: str, count: int) -> list[Path]:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = args.prefix or stem
    if count == 1:
        return [outdir / f"{prefix}.json"]
    return [outdir / f"{prefix}_{i}.json" for i in range(count)]


def cmd_construct(args, rep: Report):
    params = {}
    if args.m is not None:
        if args.name not in ("psi_m", "ghz4"):
            raise InputError(f"--m does not apply to {args.name}")
        params["m"] = args.m
    try:
        obj = constructions.construct(args.name, **params)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    kets = list(obj.payload) if isinstance(obj.payload, CodeBasis) else [obj.payload]
    if args.perturb:
        rng = np.random.default_rng(args.seed)
        kets = [apply_local(k, [random_sl2(rng, args.perturb) for _ in range(k.n)]) for k in kets]
        obj.metadata["perturbation_scale"] = args.perturb
        obj.metadata["seed"] = args.seed
    meta = _jsonable(obj.metadata)
    for path, k in zip(_out_paths(args, args.name, len(kets)), kets):
        rep.outputs.append(write_state(path, k, obj.label, meta))
    rep.data.update(label=obj.label, n=kets[0].n, local_dim=kets[0].local_dim, count=len(kets))
    rep.check("constructed", True)


def _basis(files) -> CodeBasis:
    try:
        return CodeBasis([read_state(f) for f in files])
    except (codes.CodeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def cmd_check(args, rep: Report):
    tol = args.tol
    kind = args.kind
    if kind == "uniform":
        k = _single(args.files)
        if args.r is None:
            raise InputError("check uniform needs -r")
        try:
            res = codes.is_r_uniform(k, args.r, tol)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        rep.check(f"{args.r}-uniform", res.ok, res.deviation, tol)
    elif kind == "critical":
        k = _single(args.files)
        ctol = args.tol if args.tol_given else 1e-8
        res = codes.is_critical(k, ctol)
        rep.check("critical", res.ok, res.residual, ctol ** 2)
        if k.n == 4 and k.local_dim == 2:
            m = vinberg_so8.is_critical_matrix(vinberg_so8.state_to_matrix(k.normalized()), ctol)
            rep.check("[M,M^dag]=0", m.ok, m.residual, ctol)
    elif kind == "code":
        c = _basis(args.files)
        if c.local_dim != 2 or c.n > codes.MAX_SEARCH_QUBITS:
            raise InputError("distance search needs at most 8 qubits")
        r = codes.code_distance(c, tol)
        rep.data.update(params=r.params, n=r.n, K=r.K, d=r.d, pure=r.is_pure, mds=r.is_mds)
        rep.check("knill-laflamme", True, r.worst_violation, tol)
        if args.expect_d is not None:
            rep.check(f"distance == {args.expect_d}", r.d == args.expect_d)
    elif kind == "singleton":
        if args.files:
            r = codes.code_distance(_basis(args.files), tol)
            n, K, d, D = r.n, r.K, r.d, r.D
        else:
            if None in (args.n, args.K, args.d):
                raise InputError("check singleton needs files or --n, --K and --d")
            n, K, d, D = args.n, args.K, args.d, args.D
        try:
            holds, eq = codes.singleton_ok(n, K, d, D)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        rep.data.update(n=n, K=K, d=d, D=D, equality=eq)
        rep.check("singleton bound", holds)
        rep.check("MDS (equality)", eq)
    elif kind == "table2":
        k = _single(args.files)
        if k.n != 5 or k.local_dim != 2:
            raise InputError("table2 check needs a 5-qubit state")
        phi = constructions.build_phi_ij_basis().matrix()
        halves = k.amps.reshape(2, 16)
        z = (halves @ phi.conj().T).ravel()
        off = float(np.linalg.norm(k.amps - invariants.c2_cross_state(z).amps))
        if off > 1e-9 * max(1.0, k.norm()):
            raise InputError(f"state is not in C^2 (x) C2 (distance {off:.3g})")
        vals = invariants.eval_table2(z)
        vanish = float(np.abs(vals).max())
        uni = codes.is_r_uniform(k, 2, tol)
        rep.data.update(z=z, quadratics=vals, two_uniform=uni.ok)
        rep.check("quadratics vanish iff 2-uniform", (vanish <= tol) == uni.ok,
                  min(vanish, uni.deviation), tol)
    else:
        raise InputError(f"unknown check {kind}")


def _single(files) -> Ket:
    if len(files) != 1:
        raise InputError("expected exactly one state file")
    return read_state(files[0])


def cmd_ladder(args, rep: Report):
    tol = args.tol
    if args.direction == "down":
        c = _basis(args.files)
        try:
            new = codes.rains_descend(c, tol)
        except codes.CodeError as exc:
            raise InputError(str(exc)) from exc
        r = codes.code_distance(new, tol)
        rep.data.update(params=r.params, n=r.n, K=r.K, d=r.d, pure=r.is_pure, mds=r.is_mds)
        rep.check("pure MDS", r.is_pure and r.is_mds, r.worst_violation, tol)
        for path, k in zip(_out_paths(args, "descended", new.K), new):
            rep.outputs.append(write_state(path, k, f"descended {r.params}"))
    else:
        c = _basis(args.files)
        try:
            state = codes.purify_ascend(c, tol)
        except codes.CodeError as exc:
            rep.check("ascended state is AME", False, np.inf, tol)
            rep.message = str(exc)
            return
        res = codes.is_ame(state, tol)
        rep.data.update(n=state.n)
        rep.check("ascended state is AME", res.ok, res.deviation, tol)
        rep.outputs.append(write_state(_out_paths(args, "ascended", 1)[0], state, "ascended"))


def cmd_equiv(args, rep: Report):
    k1, k2 = read_state(args.file1), read_state(args.file2)
    tol = args.tol if args.tol_given else invariants.DEFAULT_REL_TOL
    try:
        ok, r = invariants.ame5_equivalent(k1, k2, tol)
    except (invariants.NotAMEError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    rep.data.update(gaps=dict(zip(("f6", "g6_5", "f12_2"), r.gaps)),
                    invariants1=r.values1.values(), invariants2=r.values2.values())
    # when both inputs lie in C1, also report the finite-group orbit test
    basis = constructions.build_c1_basis().matrix()
    coords = [basis.conj() @ (k.amps / k.norm()) for k in (k1, k2)]
    if all(np.linalg.norm(basis.T @ c - k.amps / k.norm()) < 1e-9 for c, k in zip(coords, (k1, k2))):
        found, _ = finite_groups.finite_orbit_equivalent(finite_groups.w_c1(), *coords, tol=1e-6)
        rep.data["c1_orbit_equivalent"] = found
    rep.check("invariants agree", ok, max(r.gaps), tol)


def cmd_group(args, rep: Report):
    try:
        g = finite_groups.named_group(args.name)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep.data.update(name=g.name, dim=g.dim)
    if args.action == "order":
        rep.data["order"] = g.order
        rep.check("closure finite", True)
    else:
        try:
            m = finite_groups.molien(g, args.max)
        except finite_groups.GroupError as exc:
            rep.check("molien rounding", False, np.inf, 1e-6)
            rep.message = str(exc)
            return
        rep.data["molien"] = list(m.dims)
        rep.check("molien rounding", True, m.max_gap, 1e-6)


def cmd_knormalize(args, rep: Report):
    k = read_state(args.file)
    ctol = args.tol if args.tol_given else 1e-8
    try:
        out, trace = vinberg_so8.kempf_ness_descend(k, step=args.step, max_iter=args.max_iter, tol=ctol)
    except vinberg_so8.NullconeError as exc:
        rep.data["nullcone"] = True
        rep.check("critical representative", False, np.inf, ctol)
        rep.message = f"nullcone: {exc}"
        return
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep.data.update(iterations=trace.iterations, initial_norm_sq=trace.norms_sq[0],
                    final_norm_sq=trace.norms_sq[-1], nullcone=False)
    rep.check("converged", trace.converged, trace.residuals[-1], ctol)
    rep.check("norm non-increasing", trace.is_monotone())
    rep.outputs.append(write_state(_out_paths(args, "knormalized", 1)[0], out, "knormalized"))


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help=f"tolerance (default {DEFAULT_TOL:g})")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--json-out", metavar="PATH", help="also write the report here")
    common.add_argument("--outdir", default=".", help="directory for state files")
    common.add_argument("--prefix", default=None, help="file stem for output states")

    p = argparse.ArgumentParser(prog="amelab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("construct", parents=[common], help="write a named state or basis")
    s.add_argument("name", choices=sorted(constructions.CONSTRUCTORS))
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--perturb", type=float, default=0.0,
                   help="apply random SL2 elements of this scale to every site")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("check", parents=[common], help="run a verification")
    s.add_argument("kind", choices=["uniform", "critical", "code", "singleton", "table2"])
    s.add_argument("files", nargs="*")
    s.add_argument("-r", type=int, default=None)
    s.add_argument("--expect-d", type=int, default=None)
    s.add_argument("--n", type=int)
    s.add_argument("--K", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--D", type=int, default=2)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("ladder", parents=[common], help="descend or ascend the code ladder")
    s.add_argument("direction", choices=["down", "up"])
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_ladder)

    s = sub.add_parser("equiv", parents=[common], help="decide equivalence of two 5-qubit AME states")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("group", parents=[common], help="finite group data")
    s.add_argument("name", choices=sorted(finite_groups.NAMED_GROUPS))
    s.add_argument("action", choices=["order", "molien"])
    s.add_argument("--max", type=int, default=24)
    s.set_defaults(func=cmd_group)

    s = sub.add_parser("knormalize", parents=[common], help="descend to a critical representative")
    s.add_argument("file")
    s.add_argument("--step", type=float, default=0.25)
    s.add_argument("--max-iter", type=int, default=2000)
    s.set_defaults(func=cmd_knormalize)
    return p


def _inputs(args) -> list[str]:
    files = list(getattr(args, "files", None) or [])
    for attr in ("file", "file1", "file2"):
        if getattr(args, attr, None):
            files.append(getattr(args, attr))
    return files


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.tol_given = args.tol is not None
    if args.tol is None:
        args.tol = DEFAULT_TOL
    rep = Report(args.command, _inputs(args))
    try:
        args.func(args, rep)
    except InputError as exc:
        rep.error = True
        rep.message = str(exc)
    out = rep.to_dict()
    validate_report(out)
    text = json.dumps(out, indent=1)
    print(text)
    if args.json_out:
        Path(args.json_out).write_text(text + "\n")
    if out["verdict"] == "error":
        print(f"error: {rep.message}", file=sys.stderr)
        return 2
    return 0 if out["verdict"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
