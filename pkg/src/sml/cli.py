"""Command-line driver: ``sml <command> [options]``.

Exit codes are 0 when every check passes, 1 when a check fails or a
computation breaks down, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import chiral_potts as cp
from . import fk_bethe as fk
from . import onsager as ons
from . import orbifold as orb
from .errors import (
    DomainError,
    EnumerationError,
    InvalidConfigError,
    LabelError,
    SMLError,
    SizeBudgetError,
)
from .n2 import characters as ch
from .report import Report, clean, dumps, write_atomic
from .suites import SUITES

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
USAGE_ERRORS = (InvalidConfigError, LabelError, DomainError, SizeBudgetError, EnumerationError)
MODULES = tuple(SUITES) + ("all",)

# keys accepted in --config files, with their parsers
CONFIG_KEYS = {
    "module": str,
    "N": int,
    "L": int,
    "M": int,
    "kprime": float,
    "tol": float,
    "seed": int,
    "samples": int,
    "format": str,
    "out": str,
    "k": int,
    "l": int,
    "m": int,
    "r": int,
    "n": int,
    "window": int,
    "kmax": int,
    "rmax": int,
    "nmax": int,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def read_config(path: str) -> dict:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{num}: expected one of {sorted(CONFIG_KEYS)} as key=value")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{num}: bad value for {key}: {value!r}") from None
    return out


def resolve(args: argparse.Namespace) -> dict:
    """Merge settings: flags > config file > SML_TOL > defaults."""
    merged = {}
    env = os.environ.get("SML_TOL")
    if env is not None:
        try:
            merged["tol"] = float(env)
        except ValueError:
            raise UsageError(f"SML_TOL is not a number: {env!r}") from None
    if getattr(args, "config", None):
        merged.update(read_config(args.config))
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command", "handler"):
            merged[key] = value
    tol = merged.get("tol")
    if tol is not None and not tol > 0:
        raise UsageError("tolerance must be positive")
    merged.setdefault("seed", 0)
    merged.setdefault("format", "json")
    return merged


def _emit(text: str, cfg: dict) -> None:
    if cfg.get("out"):
        write_atomic(cfg["out"], text)
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([clean(v) for v in row])
    return buf.getvalue()


def _suite_kwargs(cfg: dict) -> dict:
    keys = ("N", "L", "M", "kprime", "samples", "tol", "seed", "window", "kmax", "rmax", "nmax")
    return {k: cfg[k] for k in keys if k in cfg}


def cmd_verify(cfg: dict) -> int:
    module = cfg.get("module")
    if module not in MODULES:
        raise UsageError(f"--module must be one of {', '.join(MODULES)}")
    kwargs = _suite_kwargs(cfg)
    if module == "all":
        report = Report("all", config={})
        for name, fn in SUITES.items():
            sub = fn(**kwargs)
            report.config[name] = sub.config
            report.checks.extend(sub.checks)
            report.notes.update({f"{name}.{k}": v for k, v in sub.notes.items()})
    else:
        report = SUITES[module](**kwargs)
    report.config["tol"] = cfg.get("tol")
    timings = bool(cfg.get("timings"))
    text = report.to_csv(timings) if cfg["format"] == "csv" else report.to_json(timings)
    _emit(text, cfg)
    return EXIT_OK if report.passed else EXIT_FAIL


def _label(cfg: dict) -> ch.DiscreteLabel:
    for key in ("k", "l", "m"):
        if key not in cfg:
            raise UsageError(f"--{key} is required")
    return ch.DiscreteLabel(cfg["k"], cfg["l"], cfg["m"])


def _twist(cfg: dict) -> ch.TwistPair:
    if cfg.get("a") is not None or cfg.get("b") is not None:
        return ch.TwistPair(Fraction(cfg.get("a") or "0"), Fraction(cfg.get("b") or "0"))
    return ch.sector(cfg.get("sector", "NS"))


def _chop(x: float) -> float:
    return 0.0 if abs(x) < 1e-12 else x


def _expansion_csv(label, twist, orders) -> str:
    exp = ch.expand_character(label, twist, orders)
    rows = [(str(e), str(c), _chop(v.real), _chop(v.imag)) for e, c, v in exp.terms]
    return _csv(rows, ["exponent", "charge", "coeff_re", "coeff_im"])


def cmd_character(cfg: dict) -> int:
    label, twist = _label(cfg), _twist(cfg)
    if cfg.get("orders") is not None:
        _emit(_expansion_csv(label, twist, cfg["orders"]), cfg)
        return EXIT_OK
    zs = np.array([complex(v) for v in cfg.get("z") or ["0.1+0.05j", "0.3+0.05j", "0.7+0.05j"]])
    taus = [complex(v) for v in cfg.get("tau") or ["1j", "0.25+1.5j"]]
    rows = []
    for tau in taus:
        vals = ch.character_grid(label, twist, zs, tau)
        for z, v in zip(zs, vals):
            rows.append((label.k, label.l, label.m, str(twist.a), str(twist.b),
                         z.real, z.imag, tau.real, tau.imag, v.real, v.imag))
    header = ["k", "l", "m", "a", "b", "z_re", "z_im", "tau_re", "tau_im", "Re", "Im"]
    _emit(_csv(rows, header), cfg)
    return EXIT_OK


def cmd_expand(cfg: dict) -> int:
    _emit(_expansion_csv(_label(cfg), _twist(cfg), cfg.get("orders", 4)), cfg)
    return EXIT_OK


def cmd_orbifold(cfg: dict) -> int:
    group = cfg["group"]
    if group == "Ar":
        if "n" not in cfg or "r" not in cfg:
            raise UsageError("--group Ar needs --n and --r")
        G = orb.build_Ar(cfg["n"], cfg["r"])
    elif group == "Q8":
        G = orb.quaternion_group()
    elif group == "BD":
        G = orb.binary_dihedral_group(cfg.get("n", 3))
    else:
        G = orb.symmetric_group_matrices(cfg.get("n", 3))
    classes, irreps = orb.class_and_rep_counts(G)
    out = {"order": G.order, "classes": classes, "irreps": irreps, "euler": orb.orbifold_euler_linear(G)}
    _emit(json.dumps(clean(out), separators=(",", ":")) + "\n", cfg)
    return EXIT_OK


def cmd_spectrum(cfg: dict) -> int:
    N, L, M = cfg.get("N", 3), cfg.get("L", 2), cfg.get("M", 4)
    grid = cfg.get("kprime_list") or [cfg.get("kprime", 0.5)]
    out = []
    for kp in grid:
        H = ons.build_H(N, L, kp)
        out.append({"N": N, "L": L, "kprime": kp, "M": M,
                    "hermiticity_residual": ons.hermiticity_residual(H),
                    "eigenvalues": ons.spectrum(H)})
    _emit(dumps(out), cfg)
    return EXIT_OK


def cmd_lambda(cfg: dict) -> int:
    N, L = cfg.get("N", 3), cfg.get("L", 2)
    rng = np.random.default_rng(cfg["seed"])
    hs = fk.InhomogeneitySet.random(N, L, rng)
    polys = fk.eigenvalue_polynomials(hs, seed=cfg["seed"])
    coeffs = sorted(np.round(polys.coeffs, 12).tolist(), key=lambda r: [(c.real, c.imag) for c in r])
    out = {
        "schema": 1,
        "N": N,
        "L": L,
        "seed": cfg["seed"],
        "sites": [[h.a, h.b, h.c, h.d] for h in hs.sites],
        "heldout_residual": polys.heldout_residual,
        "trace": fk.trace_polynomial(hs),
        "coefficients": coeffs,
    }
    _emit(dumps(out), cfg)
    return EXIT_OK


def cmd_curve(cfg: dict) -> int:
    N, L = cfg.get("N", 3), cfg.get("L", 2)
    tol = cfg.get("tol", 1e-9)
    rng = np.random.default_rng(cfg["seed"])
    hs = fk.InhomogeneitySet.random(N, L, rng)
    rows = []
    for i in range(cfg.get("samples", 10)):
        x = complex(rng.normal(), rng.normal())
        branches = [int(b) for b in rng.integers(0, N, size=L)]
        if cfg.get("xi0") is not None:
            pt, closure = fk.sample_curve_point(hs, x, branches=branches, xi0=complex(cfg["xi0"]))
        else:
            pt, closure = fk.sample_curve_point(hs, x, root=i % 2, branches=branches)
        scale = max(1.0, abs(pt.xi[0]) ** N)
        rows.append(pt.to_row() + [closure, int(closure / scale < tol)])
    header = ["x_re", "x_im"]
    for j in range(L):
        header += [f"xi{j}_re", f"xi{j}_im"]
    _emit(_csv(rows, header + ["closure", "on_curve"]), cfg)
    return EXIT_OK


def cmd_weights(cfg: dict) -> int:
    N = cfg.get("N", 3)
    coup = cp.Coupling.from_kprime(cfg.get("kprime", 0.6))
    rng = np.random.default_rng(cfg["seed"])
    p, q = cp.random_rapidity(coup, N, rng), cp.random_rapidity(coup, N, rng)
    out = {"schema": 1, "p": p.to_dict(), "q": q.to_dict(), "weights": cp.weights(p, q).to_dict()}
    _emit(dumps(out), cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of key=value lines (flags take precedence)")
    common.add_argument("--out", help="write output here (atomically) instead of stdout")
    common.add_argument("--seed", type=int, help="RNG seed (default 0)")
    common.add_argument("--tol", type=float, help="tolerance override (env SML_TOL)")

    chain = argparse.ArgumentParser(add_help=False)
    chain.add_argument("--N", type=int)
    chain.add_argument("--L", type=int)

    label = argparse.ArgumentParser(add_help=False)
    label.add_argument("--k", type=int)
    label.add_argument("--l", type=int)
    label.add_argument("--m", type=int)
    label.add_argument("--sector", choices=("NS", "R"))
    label.add_argument("--a", help="twist a as a fraction in [-1/2, 1/2]")
    label.add_argument("--b", help="twist b as a fraction in [-1/2, 1/2]")

    p = _Parser(prog="sml", description="Verification lab for integrable-model and orbifold formulas.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common, chain], help="run a verification suite")
    v.add_argument("--module", choices=MODULES)
    v.add_argument("--kprime", type=float)
    v.add_argument("--M", type=int, help="Onsager window")
    v.add_argument("--samples", type=int)
    v.add_argument("--format", choices=("json", "csv"))
    v.add_argument("--timings", action="store_true", default=None, help="include wall times")
    v.set_defaults(handler=cmd_verify)

    c = sub.add_parser("character", parents=[common, label], help="evaluate N=2 characters")
    c.add_argument("--z", nargs="+", help="complex z values, e.g. 0.1+0.05j")
    c.add_argument("--tau", nargs="+", help="complex tau values, e.g. 1j")
    c.add_argument("--orders", type=int, help="emit the formal expansion instead")
    c.set_defaults(handler=cmd_character)

    e = sub.add_parser("expand", parents=[common, label], help="formal q/y expansion of a character")
    e.add_argument("--orders", type=int)
    e.set_defaults(handler=cmd_expand)

    o = sub.add_parser("orbifold", parents=[common], help="orbifold Euler number of C^n / G")
    o.add_argument("--group", choices=("Ar", "Q8", "BD", "S"), required=True)
    o.add_argument("--n", type=int)
    o.add_argument("--r", type=int)
    o.set_defaults(handler=cmd_orbifold)

    s = sub.add_parser("spectrum", parents=[common, chain], help="spectrum of the superintegrable chain")
    s.add_argument("--kprime", type=float, nargs="+", dest="kprime_list")
    s.add_argument("--M", type=int)
    s.set_defaults(handler=cmd_spectrum)

    lam = sub.add_parser("lambda", parents=[common, chain], help="FK eigenvalue polynomial coefficients")
    lam.set_defaults(handler=cmd_lambda)

    cu = sub.add_parser("curve", parents=[common, chain], help="FK spectral-curve points as CSV")
    cu.add_argument("--samples", type=int)
    cu.add_argument("--xi0", help="prescribe xi_0 (complex) instead of closing the cycle")
    cu.set_defaults(handler=cmd_curve)

    w = sub.add_parser("weights", parents=[common], help="chiral Potts weights for sampled rapidities")
    w.add_argument("--N", type=int)
    w.add_argument("--kprime", type=float)
    w.set_defaults(handler=cmd_weights)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        cfg = resolve(args)
        return args.handler(cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except USAGE_ERRORS as exc:
        print(f"sml: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SMLError as exc:
        print(f"sml: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
