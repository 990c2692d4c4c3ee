"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input not mean zero,
3 unreadable or malformed input, 4 a constructed object failed its bound.
Documents go to stdout (or --out); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import enum
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional

from . import serialize as ser
from .cantor import CantorStep, build_tower
from .coboundary import (browder_profile, diophantine_signed, discrete_residual, simplex_counterexample,
                         solve_discrete, solve_equal_intervals, verify_solution)
from .core.functions import DiscreteFunction, StepFunction
from .core.iet import IntervalExchange
from .core.norms import FLOAT_TOLERANCE, Norm
from .core.vectors import RationalVector
from .errors import (BoundViolated, HomologicalError, InvalidInstance, NotMeanZero,
                     SearchExhausted, TooLarge)
from .instances import (random_cantor, random_discrete, random_matrix, random_step,
                        zero_sum_vectors)
from .selection import VectorMatrix, family_deviations, kwapien_constant, kwapien_permutations, selection_oracle
from .steinitz import planar_search, steinitz_oracle


class Exit(enum.IntEnum):
    OK = 0
    VERIFY_FAILED = 1
    NOT_MEAN_ZERO = 2
    PARSE_ERROR = 3
    BOUND_VIOLATED = 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str]
    out: Optional[str]
    norm: Optional[Norm]
    dim: int
    seed: int
    depth: Optional[int]
    k_max: Optional[int]
    q_max: int
    eps: Optional[Fraction]
    tolerance: float
    extra: dict

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        known = {"command", "input", "out", "norm", "dim", "seed", "depth", "kmax", "qmax",
                 "eps", "tolerance"}
        return cls(
            command=ns.command, input=getattr(ns, "input", None), out=ns.out,
            norm=Norm.parse(ns.norm) if ns.norm else None, dim=ns.dim, seed=ns.seed,
            depth=ns.depth, k_max=ns.kmax, q_max=ns.qmax,
            eps=Fraction(ns.eps) if ns.eps is not None else None,
            tolerance=float(ns.tolerance),
            extra={k: v for k, v in vars(ns).items() if k not in known})


def _rational_arg(text: str) -> str:
    try:
        Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a rational p/q") from None
    return text


def _seed_arg(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--norm", choices=[n.value for n in Norm], help="norm on Q^d (default l2)")
    common.add_argument("--dim", type=int, default=2, help="dimension d for generated instances")
    common.add_argument("--seed", type=_seed_arg, default=0, help="seed for every random choice")
    common.add_argument("--depth", type=int, help="Cantor depth for generated instances")
    common.add_argument("--kmax", type=int, help="largest k for orbit partial sums")
    common.add_argument("--qmax", type=int, default=10_000, help="largest denominator searched")
    common.add_argument("--eps", type=_rational_arg, help="Diophantine accuracy p/q")
    common.add_argument("--out", help="write the document here instead of stdout")
    common.add_argument("--tolerance", type=float, default=FLOAT_TOLERANCE,
                        help="slack for comparisons with irrational thresholds")

    p = argparse.ArgumentParser(prog="homological", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve f = g o T - g for an instance")
    s.add_argument("input", nargs="?", help="instance document (discrete, step, cantor or matrix)")
    s.add_argument("--demo", choices=["kwapien"], help="use a bundled instance instead of a file")
    s.add_argument("--levels", help="comma-separated refinement depths for Cantor towers")

    v = sub.add_parser("verify", parents=[common], help="recheck a solution document")
    v.add_argument("input", help="solution document written by solve")

    o = sub.add_parser("oracle", parents=[common], help="exact optimal prefix bounds")
    o.add_argument("input", nargs="?", help="vectors or sets document")
    o.add_argument("--random", type=int, metavar="N", help="random zero-sum family of N vectors")
    o.add_argument("--search", action="store_true", help="seeded planar search for large ratios")
    o.add_argument("--trials", type=int, default=12, help="restarts for --search")

    c = sub.add_parser("counterexample", parents=[common], help="centred simplex growth table")
    c.add_argument("--nmin", type=int, default=1)
    c.add_argument("--nmax", type=int, default=6)
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--table", action="store_true", help="plain-text table instead of JSON")

    d = sub.add_parser("diophantine", parents=[common], help="signed simultaneous approximation")
    d.add_argument("--x", required=True, help="comma-separated rationals")
    d.add_argument("--v", required=True, help="comma-separated direction")
    d.add_argument("--order", choices=["convergents", "increasing"], default="convergents")

    g = sub.add_parser("generate", parents=[common], help="write a seeded random instance")
    g.add_argument("kind", choices=["discrete", "step", "cantor", "matrix", "vectors"])
    g.add_argument("--size", type=int, default=6, help="points, intervals, rows or vectors")
    g.add_argument("--cols", type=int, default=4, help="matrix columns")
    g.add_argument("--q", type=int, default=2, help="Cantor branches")
    return p


def _emit(doc: dict, cfg: RunConfig, out) -> None:
    text = ser.dumps(doc)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return ser.loads(fh.read())
    except OSError as exc:
        raise ser.DocumentError(f"cannot read {path}: {exc.strerror}") from None


def _demo_document(name: str) -> dict:
    text = resources.files("homological.data").joinpath(f"{name}_demo.json").read_text("utf-8")
    return ser.loads(text)


# -- commands -----------------------------------------------------------------

def cmd_solve(cfg: RunConfig, out, err) -> int:
    demo = cfg.extra.get("demo")
    if demo:
        doc = _demo_document(demo)
    elif cfg.input:
        doc = _load(cfg.input)
    else:
        raise ser.DocumentError("solve needs an input document or --demo")
    obj = ser.parse_instance(doc)
    norm = cfg.norm
    if isinstance(obj, DiscreteFunction):
        sol = solve_discrete(obj, norm or Norm.L2)
        result = ser.discrete_solution_doc(obj, sol)
    elif isinstance(obj, StepFunction):
        sol = solve_equal_intervals(obj, norm or Norm.L2)
        result = ser.step_solution_doc(obj, sol)
    elif isinstance(obj, CantorStep):
        levels = cfg.extra.get("levels")
        levels = [int(x) for x in levels.split(",")] if levels else None
        sol = build_tower(obj, levels, norm or Norm.L2)
        if not sol.ok():
            raise BoundViolated("tower checks failed")
        result = ser.tower_solution_doc(obj, sol)
    elif isinstance(obj, VectorMatrix):
        if norm is not None:
            obj = VectorMatrix(obj.entries, norm)
        fam = kwapien_permutations(obj)
        result = ser.kwapien_solution_doc(obj, fam)
    else:
        raise ser.DocumentError(f"solve cannot handle a {doc.get('type')!r} document")
    _emit(result, cfg, out)
    return Exit.OK


def _browder_report(f: StepFunction, T: IntervalExchange, X, k_max, norm) -> tuple:
    profile = browder_profile(f, T, X, k_max, norm)
    running, best = [], None
    for v in profile:
        best = v if best is None or v > best else best
        running.append(best)
    return best, [ser.norm_doc(v) for v in running]


def cmd_verify(cfg: RunConfig, out, err) -> int:
    doc = _load(cfg.input)
    if doc.get("type") != "solution":
        raise ser.DocumentError("verify expects a solution document")
    kind = doc.get("kind")
    norm = cfg.norm or Norm.parse(doc.get("norm", "l2"))
    report = {"type": "verification", "kind": kind, "norm": norm.value}
    ok = True
    if kind in ("discrete", "step", "cantor"):
        if kind == "discrete":
            f = ser.parse_instance(ser._need(doc, "f"))
            g = DiscreteFunction(tuple(ser.parse_vec(v) for v in ser._need(doc, "g")))
            sigma = [int(s) for s in ser._need(doc, "sigma")]
            if sorted(sigma) != list(range(f.n)) or len(g) != f.n:
                raise ser.DocumentError("sigma or g does not match f")
            res = norm.max_of(discrete_residual(f, g, sigma))
            f_hat = StepFunction.equal_intervals(list(f.values))
            g_hat = StepFunction.equal_intervals(list(g.values))
            T = IntervalExchange.from_permutation(sigma)
            start = int(doc.get("order", [0])[0])
            n, d = f.n, f.dim
            region = [(Fraction(start, n), Fraction(start + 1, n))]
        elif kind == "step":
            f_hat = ser.parse_instance(ser._need(doc, "f"))
            g_hat = ser.parse_instance(ser._need(doc, "g"))
            T = ser.parse_instance(ser._need(doc, "T"))
            res = verify_solution(f_hat, g_hat, T, norm)
            start = int(doc.get("start_cell", 0))
            n, d = len(f_hat), f_hat.dim
            region = [f_hat.breakpoints[start:start + 2]]
        else:
            f = ser.parse_instance(ser._need(doc, "f"))
            succ = [int(s) for s in ser._need(doc, "T")]
            g = [ser.parse_vec(v) for v in ser._need(doc, "g")]
            if sorted(succ) != list(range(f.cells)) or len(g) != f.cells:
                raise ser.DocumentError("T or g does not match f")
            f_hat = StepFunction.equal_intervals(list(f.values))
            g_hat = StepFunction.equal_intervals(g)
            T = IntervalExchange.from_permutation(succ)
            res = verify_solution(f_hat, g_hat, T, norm)
            n, d = f.cells, f.dim
            b = int(doc.get("branch_cycle", [1])[0]) - 1
            region = [(Fraction(b, f.q), Fraction(b + 1, f.q))]
        k_max = cfg.k_max if cfg.k_max is not None else 4 * n
        g_norm = g_hat.sup_norm(norm)
        whole, profile = _browder_report(f_hat, T, [(0, 1)], k_max, norm)
        start_sup, _ = _browder_report(f_hat, T, region, k_max, norm)
        report.update({
            "residual": ser.norm_doc(res),
            "g_norm": ser.norm_doc(g_norm),
            "k_max": k_max,
            "browder_sup": ser.norm_doc(whole),
            "browder_limit": ser.norm_doc(g_norm * 2),
            "browder_profile": profile,
            "start_cell_sup": ser.norm_doc(start_sup),
        })
        checks = {"residual_zero": not res, "browder_within_2g": whole <= g_norm * 2}
        if kind != "cantor":
            checks["g_within_d_f"] = g_norm <= f_hat.sup_norm(norm) * d
        report["checks"] = checks
        ok = all(checks.values())
    elif kind == "kwapien":
        mx = ser.parse_instance(ser._need(doc, "matrix"))
        mx = VectorMatrix(mx.entries, norm)
        perms = [tuple(int(j) for j in p) for p in ser._need(doc, "perms")]
        if len(perms) != mx.n or any(sorted(p) != list(range(mx.m)) for p in perms):
            raise ser.DocumentError("perms are not permutations of the columns")
        dev = max(max(row) for row in family_deviations(mx, perms))
        limit = float(mx.max_entry_norm()) * kwapien_constant(mx.d)
        ok = float(dev) <= limit + cfg.tolerance
        report.update({"achieved_bound": ser.norm_doc(dev), "bound_limit": ser.approx(limit),
                       "checks": {"within_bound": ok}})
    else:
        raise ser.DocumentError(f"unknown solution kind {kind!r}")
    report["ok"] = ok
    _emit(report, cfg, out)
    if not ok:
        err.write(f"verification failed: {', '.join(k for k, v in report['checks'].items() if not v)}\n")
        if "residual" in report:
            err.write(f"residual = {report['residual']['exact'] or report['residual']['approx']}\n")
    return Exit.OK if ok else Exit.VERIFY_FAILED


def cmd_oracle(cfg: RunConfig, out, err) -> int:
    norm = cfg.norm or Norm.L2
    if cfg.extra.get("search"):
        res = planar_search(cfg.seed, trials=cfg.extra["trials"])
        envelope = 5 / 4
        report = {
            "type": "oracle", "kind": "planar_search", "seed": cfg.seed,
            "best_ratio": ser.norm_doc(res.best_ratio),
            "running_max": [ser.approx(x) for x in res.history],
            "envelope": "sqrt(5/4)",
            "within_envelope": float(res.best_ratio.gauge) <= envelope + cfg.tolerance,
            "vectors": [ser.vec_doc(v) for v in res.vectors],
            "witness": list(res.witness),
        }
        _emit(report, cfg, out)
        return Exit.OK
    if cfg.extra.get("random"):
        vectors = zero_sum_vectors(cfg.seed, cfg.extra["random"], cfg.dim)
        doc = ser.vectors_doc(vectors)
    elif cfg.input:
        doc = _load(cfg.input)
    else:
        raise ser.DocumentError("oracle needs an input document, --random N or --search")
    obj = ser.parse_instance(doc)
    if doc["type"] == "vectors":
        opt, witness = steinitz_oracle(obj, norm)
        report = {"type": "oracle", "kind": "steinitz", "vectors": doc["vectors"],
                  "optimum": ser.norm_doc(opt), "witness": list(witness),
                  "max_norm": ser.norm_doc(norm.max_of(obj))}
    elif doc["type"] == "sets":
        opt, witness = selection_oracle(obj, norm)
        report = {"type": "oracle", "kind": "selection", "sets": doc["sets"],
                  "optimum": ser.norm_doc(opt), "witness": list(witness)}
    else:
        raise ser.DocumentError("oracle expects a vectors or sets document")
    report["norm"] = norm.value
    _emit(report, cfg, out)
    return Exit.OK


def cmd_counterexample(cfg: RunConfig, out, err) -> int:
    rows = []
    for n in range(cfg.extra["nmin"], cfg.extra["nmax"] + 1):
        rep = simplex_counterexample(n, samples=cfg.extra["samples"], seed=cfg.seed)
        rows.append({
            "n": n, "d": rep.d, "norm_sq": ser.rat(rep.norm_sq),
            "min_half_sum_norm_sq": ser.rat(rep.min_half_sum_norm_sq),
            "min_half_sum_norm": ser.approx(rep.min_half_sum_norm),
            "lower_bound_sq": ser.rat(rep.lower_bound_sq),
            "lower_bound": ser.approx(rep.lower_bound),
            "method": rep.method, "checked": rep.checked_multisets,
        })
    if cfg.extra.get("table"):
        head = ["n", "d", "norm_sq", "min_half_sum_norm_sq", "lower_bound_sq", "lower_bound", "method"]
        lines = ["\t".join(head)] + ["\t".join(str(r[h]) for h in head) for r in rows]
        text = "\n".join(lines) + "\n"
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
        return Exit.OK
    _emit({"type": "counterexample", "rows": rows}, cfg, out)
    return Exit.OK


def cmd_diophantine(cfg: RunConfig, out, err) -> int:
    try:
        x = [ser.parse_rat(a) for a in cfg.extra["x"].split(",")]
        v = RationalVector(ser.parse_rat(a) for a in cfg.extra["v"].split(","))
    except ValueError as exc:
        raise ser.DocumentError(str(exc)) from None
    eps = cfg.eps if cfg.eps is not None else Fraction(1, 10)
    res = diophantine_signed(x, v, eps, cfg.q_max, order=cfg.extra["order"])
    _emit({"type": "diophantine", "q": res.q, "p": list(res.p), "w": ser.vec_doc(res.w),
           "w_approx": [ser.approx(float(a)) for a in res.w], "eps": ser.rat(eps),
           "inner_product": ser.rat(res.w.dot(v))}, cfg, out)
    return Exit.OK


def cmd_generate(cfg: RunConfig, out, err) -> int:
    kind, size = cfg.extra["kind"], cfg.extra["size"]
    if kind == "discrete":
        obj = random_discrete(cfg.seed, size, cfg.dim)
    elif kind == "step":
        obj = random_step(cfg.seed, size, cfg.dim)
    elif kind == "cantor":
        obj = random_cantor(cfg.seed, cfg.extra["q"], cfg.depth or 0, cfg.dim)
    elif kind == "matrix":
        obj = random_matrix(cfg.seed, size, cfg.extra["cols"], cfg.dim, cfg.norm or Norm.L2)
    else:
        _emit(ser.vectors_doc(zero_sum_vectors(cfg.seed, size, cfg.dim)), cfg, out)
        return Exit.OK
    _emit(ser.to_doc(obj), cfg, out)
    return Exit.OK


COMMANDS = {
    "solve": cmd_solve, "verify": cmd_verify, "oracle": cmd_oracle,
    "counterexample": cmd_counterexample, "diophantine": cmd_diophantine,
    "generate": cmd_generate,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return Exit.PARSE_ERROR if exc.code else Exit.OK
    cfg = RunConfig.from_args(ns)
    try:
        return int(COMMANDS[cfg.command](cfg, out, err))
    except NotMeanZero as exc:
        err.write(f"error: {exc}\n")
        return Exit.NOT_MEAN_ZERO
    except BoundViolated as exc:
        err.write(f"error: bound violated: {exc}\n")
        return Exit.BOUND_VIOLATED
    except (InvalidInstance, TooLarge, SearchExhausted, ValueError, TypeError) as exc:
        err.write(f"error: {exc}\n")
        return Exit.PARSE_ERROR
    except HomologicalError as exc:
        err.write(f"error: {exc}\n")
        return Exit.PARSE_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
