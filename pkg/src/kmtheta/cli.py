"""Command-line interface: validate, theta, verify, efun.

Exit codes: 0 success, 2 incidence failure, 3 numerical tolerance failure, 4 input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import checks
from .errfn import QuadratureSpec, arctan_limit, e1, e2, e2_boosted, e2_flat, m1, tilde_e2
from .errors import AccuracyError, IncidenceError, InputError
from .fixtures import canonical_fixture
from .geometry import FrameConfig, SurfaceChart, validate_incidence
from .lattice import Coset, EvenLattice, discriminant_group, majorant_on_S
from .quadspace import InnerProductSpace
from .theta import TauPoint, completed_theta, holomorphic_part

EXIT_OK, EXIT_INCIDENCE, EXIT_TOLERANCE, EXIT_INPUT = 0, 2, 3, 4
C_KEYS = ("c1", "c2", "c1p", "c2p")


def tool_version():
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


@dataclass
class RunConfig:
    gram: list
    C: dict
    lattice_basis: list
    cosets: object = "all"
    tau: dict = field(default_factory=lambda: {"re": 0.3, "im": 1.1})
    qmax: float = 5.0
    tol: dict = field(default_factory=lambda: {"series": 1e-6, "quadrature": 1e-9, "special": 1e-12})
    seed: int = 0

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise InputError("configuration must be a JSON object")
        missing = [k for k in ("gram", "C", "lattice_basis") if k not in d]
        if missing:
            raise InputError("missing field(s): " + ", ".join(missing))
        unknown = set(d) - {"gram", "C", "lattice_basis", "cosets", "tau", "qmax", "tol", "seed"}
        if unknown:
            raise InputError("unknown field(s): " + ", ".join(sorted(unknown)))
        C = d["C"]
        if not isinstance(C, dict) or set(C) != set(C_KEYS):
            raise InputError("C must have exactly the keys c1, c2, c1p, c2p")
        base = cls(gram=d["gram"], C=C, lattice_basis=d["lattice_basis"])
        tol = dict(base.tol)
        tol.update(d.get("tol", {}))
        cfg = cls(gram=_matrix(d["gram"]), C={k: _vector(C[k]) for k in C_KEYS},
                  lattice_basis=_matrix(d["lattice_basis"]), cosets=d.get("cosets", "all"),
                  tau={"re": float(d.get("tau", base.tau)["re"]), "im": float(d.get("tau", base.tau)["im"])},
                  qmax=float(d.get("qmax", base.qmax)), tol={k: float(v) for k, v in tol.items()},
                  seed=int(d.get("seed", 0)))
        if not cfg.tau["im"] > 0:
            raise InputError("tau.im must be positive")
        n = len(cfg.gram)
        if any(len(v) != n for v in cfg.C.values()) or len(cfg.lattice_basis) != n:
            raise InputError("dimensions of gram, C and lattice_basis disagree")
        return cfg

    def to_dict(self):
        return {"gram": self.gram, "C": self.C, "lattice_basis": self.lattice_basis, "cosets": self.cosets,
                "tau": self.tau, "qmax": self.qmax, "tol": self.tol, "seed": self.seed}

    @classmethod
    def default(cls):
        F = canonical_fixture()
        c = F.config
        return cls(gram=F.V.gram.tolist(), C={k: v.tolist() for k, v in zip(C_KEYS, c.vectors)},
                   lattice_basis=F.lattice.basis.tolist(), seed=F.seed)

    def space(self):
        return InnerProductSpace(np.array(self.gram, dtype=float))

    def frame_config(self, require_valid=True):
        V = self.space()
        return FrameConfig.build(*(self.C[k] for k in C_KEYS), V, require_valid=require_valid)

    def lattice(self):
        return EvenLattice(np.array(self.lattice_basis, dtype=float), self.space())

    def coset_list(self, L):
        if self.cosets == "all":
            return discriminant_group(L)
        if not isinstance(self.cosets, list):
            raise InputError('cosets must be "all" or a list')
        return [parse_coset(c, L.n) for c in self.cosets]

    def special(self):
        return QuadratureSpec(abs_tol=self.tol["special"])

    def tau_point(self):
        return TauPoint(self.tau["re"], self.tau["im"])


def _vector(v):
    if not isinstance(v, list) or not all(isinstance(t, (int, float)) for t in v):
        raise InputError("vectors must be lists of numbers")
    return [float(t) for t in v]


def _matrix(m):
    if not isinstance(m, list) or not m:
        raise InputError("matrices must be non-empty lists of rows")
    rows = [_vector(r) for r in m]
    if any(len(r) != len(rows) for r in rows):
        raise InputError("matrices must be square")
    return rows


def parse_coset(c, n):
    """Coset from "(a,b,...)" with rational entries or a list of numbers/strings."""
    if isinstance(c, str):
        c = [t for t in c.strip().strip("()").split(",")]
    try:
        coords = [Fraction(str(t).strip()) for t in c]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad coset {c!r}") from exc
    if len(coords) != n:
        raise InputError("coset has the wrong length")
    return Coset.of(coords)


def exponent_key(e: Fraction):
    return f"{e.numerator}/{e.denominator}"


def complex_pair(z):
    z = complex(z)
    return [z.real, z.imag]


# ------------------------------------------------------------------ commands


def cmd_validate(cfg: RunConfig):
    V = cfg.space()
    report = validate_incidence(*(np.array(cfg.C[k]) for k in C_KEYS), V)
    out = {"passed": report.passed, "negative": list(report.negative), "deltas": list(report.deltas),
           "projections": list(report.projections), "delta4": report.delta4,
           "same_component": report.same_component, "failures": list(report.failures)}
    return out, {}, EXIT_OK if report.passed else EXIT_INCIDENCE


def _theta_one(args):
    cfg_dict, coset, mode = args
    cfg = RunConfig.from_dict(cfg_dict)
    config = cfg.frame_config()
    L = cfg.lattice()
    mu = parse_coset(coset, L.n)
    M = majorant_on_S(SurfaceChart(config))
    if mode == "hol":
        s = holomorphic_part(L, mu, config, cfg.qmax, M)
        return {"coset": str(mu), "guarantee": s.guarantee,
                "terms": [[exponent_key(k), complex_pair(c)] for k, c in s.terms.items()]}
    tv = completed_theta(L, mu, config, cfg.tau_point(), cfg.tol["series"], majorant=M, spec=cfg.special())
    return {"coset": str(mu), "value": complex_pair(tv.value), "tail_bound": tv.tail_bound,
            "terms": tv.terms, "bound": tv.bound}


def _map(fn, items, jobs):
    if jobs <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def cmd_theta(cfg: RunConfig, mode, jobs=1):
    cfg.frame_config()
    L = cfg.lattice()
    cosets = cfg.coset_list(L)
    items = [(cfg.to_dict(), [str(f) for f in mu.mu], mode) for mu in cosets]
    return {"mode": mode, "series": _map(_theta_one, items, jobs)}, {}, EXIT_OK


def cmd_verify(cfg: RunConfig, which):
    config = cfg.frame_config()
    tau = complex(cfg.tau["re"], cfg.tau["im"])
    if which == "theorem-a":
        res = checks.theorem_a(config, seed=cfg.seed)
    elif which == "stokes":
        res = checks.stokes(config, seed=cfg.seed)
    elif which == "intersection":
        res = checks.intersection(config, seed=cfg.seed)
    elif which == "modularity":
        res = checks.modularity(cfg.lattice(), config, tau, series_tol=cfg.tol["series"])
    elif which == "shadow":
        res = checks.shadow(cfg.lattice(), config, tau, series_tol=min(cfg.tol["series"], 1e-8))
    else:
        raise InputError(f"unknown check {which!r}")
    out = res.as_dict()
    timing = {"seconds": out.pop("seconds")}
    return out, timing, EXIT_OK if res.passed else EXIT_TOLERANCE


EFUN_ARITY = {"e1": 1, "m1": 1, "e2": 2, "tilde_e2": 2, "e2_flat": 3, "e2_boosted": None}


def cmd_efun(cfg: RunConfig, name, values, pair):
    spec = cfg.special()
    if name not in EFUN_ARITY:
        raise InputError(f"unknown function {name!r}")
    arity = EFUN_ARITY[name]
    if arity is not None and len(values) != arity:
        raise InputError(f"{name} takes {arity} argument(s)")
    if name == "e1":
        value, bound = e1(values[0]), 1e-15
    elif name == "m1":
        value, bound = m1(values[0]), 1e-15
    elif name == "e2":
        value, bound = e2(*values, spec), spec.abs_tol
    elif name == "tilde_e2":
        value, bound = tilde_e2(*values, spec), spec.abs_tol
    elif name == "e2_flat":
        value, bound = e2_flat(*values, spec), spec.abs_tol
    else:
        V = cfg.space()
        if len(values) != V.n:
            raise InputError(f"e2_boosted takes {V.n} coordinates of x")
        a, b = pair
        if a not in C_KEYS or b not in C_KEYS:
            raise InputError("--pair must name two of c1, c2, c1p, c2p")
        Ca, Cb = np.array(cfg.C[a]), np.array(cfg.C[b])
        value, bound = e2_boosted(Ca, Cb, np.array(values), V, spec), spec.abs_tol
        out = {"function": name, "args": values, "pair": [a, b], "value": float(value), "error_bound": bound}
        if not any(values):
            out["arctan_limit"] = arctan_limit(Ca, Cb, V)
        return out, {}, EXIT_OK
    return {"function": name, "args": values, "value": float(value), "error_bound": bound}, {}, EXIT_OK


# --------------------------------------------------------------------- main


def build_parser():
    p = argparse.ArgumentParser(prog="kmtheta", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON run configuration (default: shipped canonical fixture)")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output does not depend on it)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", help="check the incidence conditions")
    t = sub.add_parser("theta", help="holomorphic part or completed theta per coset")
    t.add_argument("--mode", choices=("hol", "complete"), default="hol")
    v = sub.add_parser("verify", help="run a numerical identity check")
    v.add_argument("which", choices=("theorem-a", "stokes", "modularity", "shadow", "intersection"))
    e = sub.add_parser("efun", help="evaluate an error function")
    e.add_argument("name", choices=sorted(EFUN_ARITY))
    e.add_argument("values", nargs="*", type=float)
    e.add_argument("--pair", nargs=2, default=("c1", "c2"), metavar=("A", "B"),
                   help="C vectors for e2_boosted (default c1 c2)")
    return p


def load_config(path):
    if path is None:
        return RunConfig.default()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read configuration: {exc}") from exc
    return RunConfig.from_dict(data)


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    t0 = time.perf_counter()
    try:
        cfg = load_config(args.config)
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        if args.command == "validate":
            outputs, timing, code = cmd_validate(cfg)
        elif args.command == "theta":
            outputs, timing, code = cmd_theta(cfg, args.mode, args.jobs)
        elif args.command == "verify":
            outputs, timing, code = cmd_verify(cfg, args.which)
        else:
            outputs, timing, code = cmd_efun(cfg, args.name, args.values, args.pair)
    except IncidenceError as exc:
        outputs, timing, code = {"error": str(exc)}, {}, EXIT_INCIDENCE
    except AccuracyError as exc:
        outputs, timing, code = {"error": str(exc)}, {}, EXIT_TOLERANCE
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"kmtheta: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"command": args.command, "inputs": cfg.to_dict(), "outputs": outputs,
              "version": tool_version(), "seed": cfg.seed, "exit_code": code}
    if "residual" in outputs:
        report["residuals"] = {outputs["name"]: outputs["residual"]}
    if args.timings:
        timing["total_seconds"] = time.perf_counter() - t0
        report["timings"] = timing
    text = json.dumps(report, indent=2, sort_keys=True, default=_jsonable) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, complex):
        return complex_pair(o)
    if isinstance(o, float) and math.isinf(o):
        return None
    raise TypeError(f"not serializable: {type(o).__name__}")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
