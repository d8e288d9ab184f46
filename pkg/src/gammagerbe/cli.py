"""``ggl``: evaluate, verify and grid the elliptic gamma family.

Exit codes: 0 success, 1 failed checks, 2 domain/pole/convergence error,
64 usage error (unknown function, malformed argument, empty grid range).
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import re
import sys
from fractions import Fraction
from typing import Callable

from . import __version__, bernoulli, cocycle, family, special
from .lattice import GroupElement, LatticeError, Vec, as_vec
from .special import EPS, EvalConfig, GammaGerbeError
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_EVAL, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# argument types


def parse_complex(text: str) -> complex:
    """``0.5``, ``i``, ``-2.5i``, ``0.1+1.2i`` or Python's ``j`` form."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    s = re.sub(r"(^|[+\-])j", r"\g<1>1j", s)
    try:
        z = complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return z


def parse_int_vec(text: str) -> Vec:
    try:
        v = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer vector: {text!r}") from None
    if len(v) != 3:
        raise argparse.ArgumentTypeError(f"need three entries: {text!r}")
    return v


def parse_complex_vec(text: str) -> tuple[complex, ...]:
    v = tuple(parse_complex(p) for p in text.split(","))
    if len(v) != 3:
        raise argparse.ArgumentTypeError(f"need three entries: {text!r}")
    return v


def parse_matrix(text: str) -> tuple[Vec, Vec, Vec]:
    rows = text.split(";")
    if len(rows) != 3:
        raise argparse.ArgumentTypeError(f"need three ';'-separated rows: {text!r}")
    return tuple(parse_int_vec(r) for r in rows)


def parse_number(text: str):
    """Exact rational when possible (``1/3``, ``2``), otherwise complex."""
    try:
        return Fraction(text.strip())
    except ValueError:
        return parse_complex(text)


def parse_numbers(text: str) -> tuple:
    return tuple(parse_number(p) for p in text.split(",")) if text.strip() else ()


# --------------------------------------------------------------------------
# function registry


def _group(g, mu) -> GroupElement:
    g = g if g is not None else ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    mu = mu if mu is not None else (0, 0, 0)
    try:
        return GroupElement(g, mu)
    except (LatticeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _h_err(logval: float) -> float:
    return 8.0 * EPS * (1.0 + abs(logval))


def _from_log(pair) -> tuple[complex, float]:
    logval, err = pair
    return special._exp(complex(logval)), err


def f_theta0(a, cfg):
    ev = special.theta0_eval(a.z, a.tau, cfg)
    return ev.value, ev.err


def f_gamma(a, cfg):
    ev = special.elliptic_gamma_eval(a.z, a.tau, a.sigma, cfg)
    return ev.value, ev.err


def f_gamma_ab(a, cfg):
    ev = family.gamma_ab_eval(a.a, a.b, a.w, a.x, cfg, a.alpha, a.beta)
    return ev.value, ev.err


def f_gamma_ab_cone(a, cfg):
    rep = family.gamma_ab_cone(a.a, a.b, a.w, a.x, cfg)
    if not rep.converged:
        raise special.ConvergenceError(
            "cone product not certified", edge_decay=list(rep.edge_decay), terms_used=rep.terms_used
        )
    return rep.value, rep.err


def f_delta(a, cfg):
    ev = family.delta_eval(a.a, _group(a.g, a.mu), a.w, a.x, cfg)
    return ev.value, ev.err


def f_bernoulli(a, cfg):
    bv = bernoulli.bernoulli_kn(a.k, a.n, a.z, a.periods)
    return bv.value, 0.0 if isinstance(bv.value, Fraction) else 64 * EPS * (1 + abs(bv.value))


def f_h2(a, cfg):
    lv = bernoulli.log_h_metric(2, a.z, (a.tau,), a.convention)
    return math.exp(lv), _h_err(lv)


def f_h3(a, cfg):
    lv = bernoulli.log_h_metric(3, a.z, (a.tau, a.sigma), a.convention)
    return math.exp(lv), _h_err(lv)


def f_h_ab(a, cfg):
    lv = bernoulli.log_h_ab(a.a, a.b, a.w, a.x, a.convention, a.alpha, a.beta)
    return math.exp(lv), _h_err(lv)


def f_h_a(a, cfg):
    lv = bernoulli.log_h_a(a.a, _group(a.g, a.mu), a.w, a.x, a.convention)
    return math.exp(lv), _h_err(lv)


def f_phi_abc(a, cfg):
    return _from_log(cocycle.phi_abc_log(a.a, a.b, a.c, a.w, a.x, cfg))


def f_phi_ab(a, cfg):
    return _from_log(cocycle.phi_ab_log(a.a, a.b, _group(a.g, a.mu), a.w, a.x, cfg))


def f_phi_a(a, cfg):
    return _from_log(cocycle.phi_a_log(a.a, _group(a.g, a.mu), _group(a.h, a.nu), a.w, a.x, cfg))


# name: (function, required flags, optional flags)
FUNCTIONS: dict[str, tuple[Callable, tuple[str, ...], tuple[str, ...]]] = {
    "theta0": (f_theta0, ("z", "tau"), ()),
    "gamma": (f_gamma, ("z", "tau", "sigma"), ()),
    "gamma-ab": (f_gamma_ab, ("a", "b", "w", "x"), ("alpha", "beta")),
    "gamma-ab-cone": (f_gamma_ab_cone, ("a", "b", "w", "x"), ()),
    "delta": (f_delta, ("a", "w", "x"), ("g", "mu")),
    "bernoulli": (f_bernoulli, ("k", "n", "z"), ("periods",)),
    "h2": (f_h2, ("z", "tau"), ("convention",)),
    "h3": (f_h3, ("z", "tau", "sigma"), ("convention",)),
    "h-ab": (f_h_ab, ("a", "b", "w", "x"), ("alpha", "beta", "convention")),
    "h-a": (f_h_a, ("a", "w", "x"), ("g", "mu", "convention")),
    "phi-abc": (f_phi_abc, ("a", "b", "c", "w", "x"), ()),
    "phi-ab": (f_phi_ab, ("a", "b", "w", "x"), ("g", "mu")),
    "phi-a": (f_phi_a, ("a", "w", "x"), ("g", "mu", "h", "nu")),
}

PARAM_FLAGS = (
    "z", "tau", "sigma", "w", "x", "a", "b", "c", "alpha", "beta",
    "g", "mu", "h", "nu", "k", "n", "periods", "convention",
)  # fmt: skip


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("function parameters")
    g.add_argument("--z", type=parse_number, help="complex argument (rational for bernoulli)")
    g.add_argument("--tau", type=parse_complex)
    g.add_argument("--sigma", type=parse_complex)
    g.add_argument("--w", type=parse_complex)
    g.add_argument("--x", type=parse_complex_vec, help="three complex entries, e.g. 0.3+i,0.2+0.9i,1")
    for name in ("a", "b", "c", "alpha", "beta"):
        g.add_argument(f"--{name}", type=parse_int_vec, help="integer vector i,j,k" if name == "a" else None)
    g.add_argument("--g", type=parse_matrix, help="SL_3(Z) matrix as 'r1;r2;r3'")
    g.add_argument("--mu", type=parse_int_vec, help="translation covector of the first group element")
    g.add_argument("--h", type=parse_matrix, help="second group element (phi-a)")
    g.add_argument("--nu", type=parse_int_vec)
    g.add_argument("--k", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--periods", type=parse_numbers, default=None, help="comma-separated periods")
    g.add_argument("--convention", choices=bernoulli.CONVENTIONS, default=None)


def _add_cfg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=0.0, help="truncation tolerance (default GGL_DEFAULT_TOL or 1e-14)")
    p.add_argument("--max-terms", type=int, default=2_000_000)
    p.add_argument("--pole-eps", type=float, default=1e-10)


def _config(ns) -> EvalConfig:
    try:
        return EvalConfig(tol=ns.tol, max_terms=ns.max_terms, pole_eps=ns.pole_eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_params(fn: str, ns, free: tuple[str, ...] = ()) -> None:
    _, req, opt = FUNCTIONS[fn]
    given = {p for p in PARAM_FLAGS if getattr(ns, p) is not None}
    extra = given - set(req) - set(opt)
    if extra:
        raise UsageError(f"{fn} does not take --{', --'.join(sorted(extra))}")
    missing = [p for p in req if p not in given and p not in free]
    if missing:
        raise UsageError(f"{fn} needs --{', --'.join(missing)}")


def _normalise(fn: str, ns) -> None:
    """Fill optional parameters and coerce the rational ``z`` where complex is meant."""
    if ns.convention is None:
        ns.convention = "degree-n"
    if fn == "bernoulli":
        if ns.periods is None:
            ns.periods = ()
    elif isinstance(ns.z, Fraction):
        ns.z = complex(float(ns.z))


def _jnum(v) -> dict:
    z = complex(v)
    return {"re": z.real, "im": z.imag}


def _emit(obj, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, allow_nan=False) + "\n")


def _eval_error(exc: GammaGerbeError) -> int:
    _emit(exc.to_json())
    return EXIT_EVAL


def cmd_eval(ns) -> int:
    _check_params(ns.function, ns)
    _normalise(ns.function, ns)
    cfg = _config(ns)
    fn = FUNCTIONS[ns.function][0]
    try:
        value, err = fn(ns, cfg)
    except GammaGerbeError as exc:
        return _eval_error(exc)
    except (LatticeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    out = {"function": ns.function, **_jnum(value), "err": err if math.isfinite(err) else None}
    if isinstance(value, Fraction):
        out["exact"] = str(value)
    _emit(out)
    return EXIT_OK


# --------------------------------------------------------------------------
# verify


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "item"):
        obj = obj.item()
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    return str(obj)


def report_json(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, allow_nan=False) + "\n"


def cmd_verify(ns) -> int:
    cfg = _config(ns)
    if ns.samples is not None and ns.samples < 1:
        raise UsageError("--samples must be >= 1")
    if ns.workers < 1:
        raise UsageError("--workers must be >= 1")
    report = run_suite(ns.suite, ns.seed, ns.samples, cfg, ns.check_tol, ns.workers)
    text = report_json(report)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        s = report["summary"]
        print(
            f"{ns.suite}: {s['passed']}/{s['count']} passed, max residual {s['max_residual']}",
            file=sys.stderr,
        )
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["summary"]["ok"] else EXIT_FAIL


# --------------------------------------------------------------------------
# grid

_AXIS = re.compile(r"^(re|im)\((z|tau|sigma|w|x1|x2|x3)\)=([^:]+):([^:]+)$")


def parse_axis(text: str) -> tuple[str, str, float, float]:
    m = _AXIS.match(text.replace(" ", ""))
    if not m:
        raise argparse.ArgumentTypeError(f"axis must look like 're(z)=-1:1', got {text!r}")
    part, name, lo, hi = m.groups()
    try:
        return part, name, float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range in {text!r}") from None


def _set_param(ns, part: str, name: str, val: float) -> None:
    if name.startswith("x"):
        i = int(name[1]) - 1
        x = list(ns.x or (0j, 0j, 0j))
        old = x[i]
        x[i] = complex(val, old.imag) if part == "re" else complex(old.real, val)
        ns.x = tuple(x)
        return
    old = getattr(ns, name)
    old = 0j if old is None else complex(old)
    setattr(ns, name, complex(val, old.imag) if part == "re" else complex(old.real, val))


def _axis_values(lo: float, hi: float, n: int) -> list[float]:
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def _fmt(v: float) -> str:
    return format(v, ".17g")


def grid_values(ns, cfg) -> tuple[list[float], list[float], list[list[complex | None]]]:
    fn = FUNCTIONS[ns.function][0]
    (p1, n1, lo1, hi1), (p2, n2, lo2, hi2) = ns.axis
    xs = _axis_values(lo1, hi1, ns.resolution)
    ys = _axis_values(lo2, hi2, ns.resolution_y or ns.resolution)
    rows = []
    for yv in ys:
        row = []
        for xv in xs:
            cell = argparse.Namespace(**vars(ns))
            _set_param(cell, p1, n1, xv)
            _set_param(cell, p2, n2, yv)
            try:
                value, err = fn(cell, cfg)
                value = complex(value)
                ok = math.isfinite(abs(value))
            except (GammaGerbeError, LatticeError, ValueError, OverflowError, ZeroDivisionError):
                ok = False
            row.append(value if ok else None)
        rows.append(row)
    return xs, ys, rows


def _csv(label: str, xs, ys, rows, f) -> str:
    lines = [",".join([label] + [_fmt(v) for v in xs])]
    for yv, row in zip(ys, rows):
        lines.append(",".join([_fmt(yv)] + ["" if c is None else _fmt(f(c)) for c in row]))
    return "\n".join(lines) + "\n"


def cmd_grid(ns) -> int:
    (p1, n1, lo1, hi1), (p2, n2, lo2, hi2) = ns.axis
    if (p1, n1) == (p2, n2):
        raise UsageError("the two axes must sweep different parameters")
    if lo1 == hi1 or lo2 == hi2:
        raise UsageError("zero-area range")
    if ns.resolution < 2 or (ns.resolution_y is not None and ns.resolution_y < 2):
        raise UsageError("resolution must be >= 2")
    if ns.function == "bernoulli" and any(n != "z" for _, n, _, _ in ns.axis):
        raise UsageError("bernoulli can only sweep z")
    free = tuple("x" if n.startswith("x") else n for _, n, _, _ in ns.axis)
    _check_params(ns.function, ns, free)
    _normalise(ns.function, ns)
    if ns.function == "bernoulli" and ns.z is not None:
        ns.z = complex(ns.z)
    cfg = _config(ns)
    xs, ys, rows = grid_values(ns, cfg)
    label = f"{p2}({n2})\\{p1}({n1})"
    mod = _csv(label, xs, ys, rows, abs)
    phase = _csv(label, xs, ys, rows, cmath.phase)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(mod)
    else:
        sys.stdout.write(mod)
    phase_out = ns.phase_out
    if phase_out is None and ns.out:
        stem = ns.out[:-4] if ns.out.endswith(".csv") else ns.out
        phase_out = stem + "_phase.csv"
    if phase_out:
        with open(phase_out, "w", encoding="utf-8") as fh:
            fh.write(phase)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ggl", description="Elliptic gamma family: evaluation, identity suites and grids.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate one function, print JSON {re, im, err}")
    ev.add_argument("function", choices=sorted(FUNCTIONS))
    _add_params(ev)
    _add_cfg(ev)
    ev.set_defaults(run=cmd_eval)

    ve = sub.add_parser("verify", help="run a seeded identity suite and print a JSON report")
    ve.add_argument("suite", choices=list(SUITES))
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--samples", type=int, default=None, help="default depends on the suite")
    ve.add_argument("--check-tol", type=float, default=None, help="pass threshold on the residual")
    ve.add_argument("--workers", type=int, default=1)
    ve.add_argument("--out", default=None, help="write the report here instead of stdout")
    _add_cfg(ve)
    ve.set_defaults(run=cmd_verify)

    gr = sub.add_parser("grid", help="CSV of |value| (and phase) over a two-parameter slice")
    gr.add_argument("function", choices=sorted(FUNCTIONS))
    gr.add_argument("axis", type=parse_axis, nargs=2, help="e.g. 're(z)=-1:1' 'im(z)=-1:1'")
    gr.add_argument("--resolution", type=int, default=50)
    gr.add_argument("--resolution-y", type=int, default=None)
    gr.add_argument("--out", default=None, help="modulus CSV (default stdout)")
    gr.add_argument("--phase-out", default=None, help="phase CSV (default <out>_phase.csv)")
    _add_params(gr)
    _add_cfg(gr)
    gr.set_defaults(run=cmd_grid)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        return ns.run(ns)
    except UsageError as exc:
        print(f"ggl {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
