"""Command line interface.

Every command writes its outputs plus a JSON manifest next to the first
output (``<output>.manifest.json``).  Text outputs begin with a
``# manifest: <name>`` line; readers skip lines starting with ``#``.

Exit codes: 0 success, 1 a verification failed, 2 any other error.  Errors
are reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath

from . import density as dens
from . import operators as ops
from . import reference as ref
from .fermions import FermionBasis, compute_V
from .matsubara import MatsubaraData, generate_md
from .numerics import Precision
from .omega import OmegaMatrix, omega_md, omega_zero
from .xsolver import PUBLISHED_SCHEDULE_10, ConsistencyError, XMatrix, consistency_report, d_functionals, solve_x

log = logging.getLogger("xxxfermion")


class VerificationFailed(Exception):
    pass


# ---------------------------------------------------------------------------
# manifests and files

@dataclass
class RunManifest:
    command: str
    params: dict
    seed: int | None = None
    precision: int | None = None
    inputs: dict = field(default_factory=dict)      # path -> sha256
    outputs: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


class Run:
    """Collects inputs and outputs of one command and writes the manifest."""

    def __init__(self, args):
        params = {k: v for k, v in vars(args).items() if k not in ("func", "verbose")}
        params = {k: (str(v) if isinstance(v, (Path, Fraction)) else v) for k, v in params.items()}
        self.manifest = RunManifest(args.command, params, params.get("seed"), params.get("prec"))
        # the manifest belongs to --out when it names a file, else to the first file written
        out = getattr(args, "out", None)
        self.first_output: Path | None = Path(out) if out is not None and args.command != "solve-x" else None
        self.t0 = time.time()

    def read(self, path) -> str:
        path = Path(path)
        self.manifest.inputs[str(path)] = sha256(path)
        return "".join(line for line in path.read_text().splitlines(True) if not line.startswith("#"))

    def write(self, path, text: str):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if self.first_output is None:
            self.first_output = path
        header = f"# manifest: {manifest_path(self.first_output).name}\n"
        path.write_text(header + text)
        self.manifest.outputs[str(path)] = sha256(path)

    def finish(self):
        self.manifest.wall_time = round(time.time() - self.t0, 3)
        if self.first_output is not None:
            manifest_path(self.first_output).write_text(self.manifest.to_json())


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x, digits):
    return mpmath.nstr(x, digits, strip_zeros=False)


# ---------------------------------------------------------------------------
# tables on disk

def load_tables(run: Run, directory, n: int, seed: int = 0) -> dens.Tables:
    """X(l) and V(l) for l = 2..n from ``directory``; missing ones are solved and saved."""
    directory = Path(directory)
    tables = dens.Tables()
    for l in range(2, n + 1):
        fx, fv = directory / f"X{l}.txt", directory / f"V{l}.txt"
        if fx.exists() and fv.exists():
            tables.add(l, FermionBasis.from_text(run.read(fv)), XMatrix.from_text(run.read(fx)))
        else:
            log.info("solving X(%d)", l)
            xm, _ = solve_x(l, seed=seed)
            basis = compute_V(l)
            run.write(fv, basis.to_text())
            run.write(fx, xm.to_text())
            tables.add(l, basis, xm)
    return tables


def read_operator(text: str) -> dict:
    """Lines ``word coefficient``; coefficients are rationals."""
    op = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        w, c = line.split()
        if set(w) - set("ipmz"):
            raise ValueError(f"bad word {w!r}")
        op[w] = op.get(w, 0) + Fraction(c)
    return op


def read_omega(run: Run, path) -> OmegaMatrix:
    return OmegaMatrix.from_text(run.read(path))


# ---------------------------------------------------------------------------
# commands

def cmd_gen_md(args, run):
    md = generate_md(args.L, args.m, args.seed, args.range)
    run.write(args.out, md.to_text() + "\n")
    print(md.to_text())


def cmd_build_basis(args, run):
    basis = compute_V(args.n)
    run.write(args.out, basis.to_text())
    print(f"n={args.n} dim H={basis.dim_H} dim V={basis.dim_V}")


def cmd_solve_x(args, run):
    out = Path(args.out)
    schedule = None
    if args.schedule == "published":
        if args.n != 10:
            raise ValueError("the fixed schedule is defined for n = 10 only")
        schedule = PUBLISHED_SCHEDULE_10
    try:
        report = consistency_report(args.n, seed=args.seed, schedule=schedule)
    except ConsistencyError as exc:
        raise VerificationFailed(str(exc)) from exc
    xm, _ = solve_x(args.n, schedule=schedule, seed=args.seed)
    basis = compute_V(args.n)
    run.write(out / f"X{args.n}.txt", xm.to_text())
    run.write(out / f"V{args.n}.txt", basis.to_text())
    run.write(out / f"D{args.n}.txt", d_functionals(args.n, xm, basis).to_text())
    report["progress"] = [list(p) for p in report["progress"]]
    run.write(out / f"report{args.n}.json", json.dumps(report, indent=2) + "\n")
    print(json.dumps({k: v for k, v in report.items() if k != "progress"}))
    if report["rank"] != report["dimV"] or report["residual_rows"] or not report["held_out_ok"]:
        raise VerificationFailed("X(n) consistency check failed")


def cmd_omega(args, run):
    prec = Precision(args.prec)
    if args.mode == "md":
        if not args.md:
            raise ValueError("--md FILE is required for mode md")
        md = MatsubaraData.from_text(run.read(args.md).strip())
        W = omega_md(md, args.order)
        text = W.to_text()
    elif args.mode == "zero":
        W = omega_zero(args.order, prec)
        with mpmath.workdps(args.prec):
            text = W.to_text(args.prec)
    else:
        from .thermal import ThermalConfig, omega_thermal

        if args.T is None:
            raise ValueError("--T is required for mode thermal")
        T = Fraction(args.T)
        cfg = ThermalConfig.for_temperature(T, args.prec, order=args.order)
        if args.R is not None:
            cfg = ThermalConfig(T, R=args.R, prec=prec, order=args.order)
        W = omega_thermal(cfg)
        with mpmath.workdps(args.prec):
            text = W.to_text(args.prec)
    run.write(args.out, text)
    print(f"omega ({args.mode}, order {args.order}) written to {args.out}")


def cmd_expect(args, run):
    op = read_operator(run.read(args.operator))
    W = read_omega(run, args.omega)
    tables = load_tables(run, args.tables, args.n, args.seed)
    value = operator_expectation(op, W, tables)
    if isinstance(value, Fraction):
        s = str(value)
    else:
        s = _num(value, args.prec)
    run.write(args.out, s + "\n")
    print(s)


def operator_expectation(op: dict, W, tables):
    """<op> from X tables: the operator is split into translational components."""
    total = 0
    for length, comp in ops.translational_reduce(op).items():
        if length == 0:
            total += comp[""]
            continue
        if length == 1:
            continue        # single-site invariants vanish in a C-invariant state
        basis, xm, dual = tables.entries[length]
        D = d_functionals(length, xm, basis)
        total = total + D.expect(comp, W)
    return total


def _entropy_report(args, run):
    W = read_omega(run, args.omega)
    tables = load_tables(run, args.tables, args.n, args.seed)
    with mpmath.workdps(args.prec):
        return dens.entropy(args.n, W, tables, Precision(args.prec))


def cmd_density(args, run):
    rep = _entropy_report(args, run)
    rows = []
    for j2, ev in sorted(rep.spectra.items()):
        for k, lam in enumerate(ev):
            rows.append([str(Fraction(j2, 2)), j2 + 1, k, _num(lam, args.prec)])
    run.write(args.out, _csv(["j", "multiplicity", "index", "eigenvalue"], rows))
    print(f"{sum(len(v) for v in rep.spectra.values())} eigenvalues written to {args.out}")


def cmd_entropy(args, run):
    rep = _entropy_report(args, run)
    rows = [["n", args.n], ["s", _num(rep.s, args.prec)], ["P", _num(rep.P, args.prec)]]
    run.write(args.out, _csv(["quantity", "value"], rows))
    print(_num(rep.s, args.prec))


def cmd_efp(args, run):
    W = read_omega(run, args.omega)
    tables = load_tables(run, args.tables, args.n, args.seed)
    with mpmath.workdps(args.prec):
        P = dens.efp(args.n, W, tables, Precision(args.prec))
    run.write(args.out, _csv(["n", "P"], [[args.n, _num(P, args.prec)]]))
    print(_num(P, args.prec))


def cmd_thermal_table(args, run):
    from .thermal import ThermalConfig, omega_thermal

    prec = Precision(args.prec)
    tables = load_tables(run, args.tables, args.n, args.seed)
    with mpmath.workdps(args.prec):
        s0 = dens.entropy(args.n, omega_zero(10, prec), tables, prec).s
    start, stop, step = (Fraction(x) for x in (args.nt_from, args.nt_to, args.nt_step))
    rows = []
    nT = start
    while nT <= stop:
        T = nT / args.n
        W = omega_thermal(ThermalConfig.for_temperature(T, args.prec))
        with mpmath.workdps(args.prec):
            s = dens.entropy(args.n, W, tables, prec, T).s
            rows.append([f"{float(nT):.2f}", str(T), _num(s - s0, 15), _num(dens.cft_thermal(nT), 15)])
        log.info("nT=%s done", nT)
        nT += step
    run.write(args.out, _csv(["nT", "T", "s(n,T)-s(n,0)", "cft"], rows))
    print(f"{len(rows)} rows written to {args.out}")


# ---------------------------------------------------------------------------
# verify

def _verify_appendix(args):
    prec = Precision(max(args.prec, 30))
    checks = []
    tables = dens.default_tables(args.n_max)
    with mpmath.workdps(prec.digits):
        W = omega_zero(10, prec)
        for n in range(2, args.n_max + 1):
            rep = dens.entropy(n, W, tables, prec)
            for j2, listed in ref.SPECTRA_ZERO[n].items():
                got = rep.spectra[j2]
                for k, v in enumerate(listed):
                    dev = abs(got[k] - mpmath.mpf(v))
                    checks.append((f"spectrum n={n} 2j={j2} #{k}", dev, mpmath.mpf(ref.SPECTRA_TOLERANCE)))
            checks.append((f"entropy n={n}", abs(rep.s - mpmath.mpf(ref.ENTROPY_ZERO[n])), mpmath.mpf("1e-12")))
            checks.append((f"efp n={n}", abs(rep.P - mpmath.mpf(ref.EFP_ZERO[n])), mpmath.mpf("1e-15")))
    return checks


def _verify_thermal(args):
    from .thermal import ThermalConfig, contour_setup, omega_thermal, parity_sentinel

    digits = args.prec
    checks = []
    with mpmath.workdps(digits):
        s1 = contour_setup(1, digits=digits)
        checks.append(("omega_1 parity R=1", mpmath.mpf(parity_sentinel(s1).str(5, radius=False)), mpmath.mpf(10) ** -(digits - 20)))
        T = Fraction(1, 10)
        W1 = omega_thermal(ThermalConfig(T, R=1, prec=Precision(digits)))
        W2 = omega_thermal(ThermalConfig(T, R=2, prec=Precision(digits)))
        dev = max(abs(W1[i][j] - W2[i][j]) for i in range(10) for j in range(10))
        checks.append(("R=1 vs R=2 at T=1/10", dev, mpmath.mpf(10) ** -(digits - 30)))
    return checks


def _verify_properties(args):
    from .schur import eval_schur, gaudin_norm, slavnov_vector

    checks = []
    for seed in range(10):
        md = generate_md(4, 2, seed)
        dev = abs(eval_schur(slavnov_vector(md), list(md.roots)) - gaudin_norm(md))
        checks.append((f"Slavnov vs Gaudin seed={seed}", dev, 0))
    for n in range(2, 5):
        md = generate_md(3, 1, 11 + n)
        ev = ops.DirectEvaluator(md)
        checks.append((f"<1> n={n}", abs(ev.word("i" * n) - 1), 0))
        for w in ("p" + "i" * (n - 1), "z" + "i" * (n - 2) + "p"):
            checks.append((f"charge {w}", abs(ev.word(w)), 0))
    return checks


def cmd_verify(args, run):
    suite = {"appendix": _verify_appendix, "thermal": _verify_thermal, "properties": _verify_properties}[args.suite]
    checks = suite(args)
    rows = []
    failed = 0
    for name, dev, tol in checks:
        ok = dev <= tol
        failed += not ok
        rows.append([name, "pass" if ok else "FAIL", mpmath.nstr(dev, 5), mpmath.nstr(tol, 3)])
        print(f"{'pass' if ok else 'FAIL'}  {name}: deviation {mpmath.nstr(dev, 5)} (tolerance {mpmath.nstr(tol, 3)})")
    if args.out:
        run.write(args.out, _csv(["check", "status", "deviation", "tolerance"], rows))
    if failed:
        raise VerificationFailed(f"{failed} of {len(checks)} checks failed")


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xxxfermion", description="Fermionic basis computations for the XXX chain.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--prec", type=int, default=50, help="working precision in decimal digits")
        sp.add_argument("--jobs", type=int, default=1, help="upper bound on worker processes")
        sp.add_argument("--seed", type=int, default=0)
        sp.set_defaults(func=func)
        return sp

    sp = add("gen-md", cmd_gen_md, "draw admissible Matsubara data")
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--range", type=int, default=9)
    sp.add_argument("--out", type=Path, default=Path("md.txt"))

    sp = add("build-basis", cmd_build_basis, "compute the fermionic basis V(n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", type=Path, default=None)

    sp = add("solve-x", cmd_solve_x, "solve for X(n) and check consistency")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--schedule", choices=["auto", "published"], default="auto")
    sp.add_argument("--out", type=Path, default=Path("tables"))

    sp = add("omega", cmd_omega, "Taylor coefficients of omega")
    sp.add_argument("--mode", choices=["md", "zero", "thermal"], required=True)
    sp.add_argument("--md", type=Path)
    sp.add_argument("--T")
    sp.add_argument("--R", type=int, choices=[1, 2])
    sp.add_argument("--order", type=int, default=10)
    sp.add_argument("--out", type=Path, default=Path("omega.txt"))

    for name, func, help_, default in [
        ("expect", cmd_expect, "expectation value of an operator", "expect.txt"),
        ("density", cmd_density, "spectrum of the reduced density matrix", "spectrum.csv"),
        ("entropy", cmd_entropy, "entanglement entropy", "entropy.csv"),
        ("efp", cmd_efp, "emptiness formation probability", "efp.csv"),
    ]:
        sp = add(name, func, help_)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--omega", type=Path, required=True)
        sp.add_argument("--tables", type=Path, default=Path("tables"))
        sp.add_argument("--out", type=Path, default=Path(default))
        if name == "expect":
            sp.add_argument("--operator", type=Path, required=True)

    sp = add("thermal-table", cmd_thermal_table, "s(n,T) - s(n,0) against nT")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--nt-from", default="0.05")
    sp.add_argument("--nt-to", default="2.0")
    sp.add_argument("--nt-step", default="0.05")
    sp.add_argument("--tables", type=Path, default=Path("tables"))
    sp.add_argument("--out", type=Path, default=Path("thermal_table.csv"))

    sp = add("verify", cmd_verify, "compare against reference values")
    sp.add_argument("--suite", choices=["appendix", "thermal", "properties"], required=True)
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--out", type=Path, default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "out", "") is None and args.command == "build-basis":
        args.out = Path(f"V{args.n}.txt")
    run = Run(args)
    try:
        with mpmath.workdps(args.prec):
            args.func(args, run)
    except VerificationFailed as exc:
        run.finish()
        print(json.dumps({"status": "verification-failed", "command": args.command, "message": str(exc)}), file=sys.stderr)
        return 1
    except Exception as exc:
        log.debug("error", exc_info=True)
        print(json.dumps({"status": "error", "command": args.command, "type": type(exc).__name__,
                          "message": str(exc)}), file=sys.stderr)
        return 2
    run.finish()
    return 0


if __name__ == "__main__":
    sys.exit(main())
