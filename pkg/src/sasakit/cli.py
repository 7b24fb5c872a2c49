"""Command-line front end: ``sasakit <command> DIAGRAM.json [options]``."""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .cone import ConeModel, canonical_reeb, characteristic_polytope, load_cone, reeb_feasible
from .errors import (
    GammaInconsistent,
    InconsistentInputs,
    InfeasibleReeb,
    InvalidDiagram,
    NumericalError,
    PolytopeError,
)
from .futaki import build_sigma, futaki_report, soliton_vector
from .montecarlo import mc_volume_functional, seed_from_env
from .optimize import classify_regularity, minimize
from .potential import build_potential, csv_text, potential_checks
from .report import atomic_write, fmt_float, to_json
from .volume import build_volume_model, vol

EXIT_OK, EXIT_INPUT, EXIT_GEOMETRY, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_reeb(text: str):
    """'a,b,c' with each entry an integer, p/q or a float; 'xc' means the minimizer."""
    if text.strip().lower() in ("xc", "x_c"):
        return None
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            out.append(Fraction(tok) if "/" in tok or tok.lstrip("+-").isdigit() else float(tok))
        except (ValueError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(f"bad Reeb component {tok!r}") from exc
    if any(isinstance(x, float) and not math.isfinite(x) for x in out):
        raise argparse.ArgumentTypeError("Reeb components must be finite")
    return out


class _Run:
    """Shared state of one invocation: the cone, timings, report dict."""

    def __init__(self, args):
        self.args = args
        self.timings: dict[str, float] = {}
        self.text: list[str] = []
        t = time.perf_counter()
        self.cone: ConeModel = load_cone(args.diagram)
        self._tick("cone", t)
        d = self.cone.diagram
        self.report = {
            "tool": "sasakit",
            "version": __version__,
            "command": args.command,
            "input": {"name": d.name, "normals": [list(r) for r in d.normals]},
            "gamma": [Fraction(g) for g in self.cone.gamma],
            "ell": self.cone.ell,
            "rays": [list(r) for r in self.cone.rays],
        }
        self.text.append(f"diagram {d.name}: n={d.n}, {d.d} normals")
        self.text.append(f"gamma = ({', '.join(str(g) for g in self.cone.gamma)}), ell = {self.cone.ell}")
        self.text.append(f"{len(self.cone.rays)} rays: " + " ".join(str(tuple(r)) for r in self.cone.rays))
        self._vm = None
        self._min = None

    def _tick(self, stage: str, t0: float):
        self.timings[stage] = time.perf_counter() - t0

    @property
    def volmodel(self):
        if self._vm is None:
            t = time.perf_counter()
            self._vm = build_volume_model(self.cone)
            self._tick("volume_model", t)
        return self._vm

    def minimizer(self):
        if self._min is None:
            t = time.perf_counter()
            res = minimize(self.volmodel, tol=self.args.tol or 1e-10, max_iter=self.args.max_iter)
            res.regularity = classify_regularity(res.x_c)
            self._tick("minimize", t)
            self._min = res
        return self._min

    def reeb(self):
        """The user's --reeb (checked for feasibility) or the minimizer."""
        xi = getattr(self.args, "reeb", None)
        if xi is None:
            return reeb_feasible(self.cone, self.minimizer().x_c)
        return reeb_feasible(self.cone, xi)

    def finish(self) -> str:
        if self.args.timings:
            self.report["timings"] = dict(self.timings)
        if self.args.output == "json":
            out = to_json(self.report)
        else:
            out = "\n".join(self.text) + "\n"
        if self.args.report:
            atomic_write(self.args.report, to_json(self.report))
        return out


def _vec(v) -> str:
    return "(" + ", ".join(fmt_float(x) if isinstance(x, float) else str(x) for x in v) + ")"


def _xi_json(xi):
    return [x if isinstance(x, Fraction) else float(x) for x in xi.xi]


def cmd_analyze(run: _Run):
    xi = canonical_reeb(run.cone)
    poly = characteristic_polytope(run.cone, xi)
    run.report["canonical_reeb"] = {"xi": list(xi.xi), "feasible": xi.feasible}
    run.report["characteristic_polytope"] = {"vertices": [list(v) for v in poly.vertices]}
    run.text.append(f"canonical Reeb vector {_vec(xi.xi)}: feasible")
    run.text.append(f"characteristic polytope: {len(poly.vertices)} vertices")


def cmd_minimize(run: _Run):
    res = run.minimizer()
    run.report["minimizer"] = {
        "x_c": res.x_c,
        "value": res.value,
        "iterations": res.iterations,
        "slice_grad_norm": res.slice_grad_norm,
        "regularity": res.regularity.kind,
        "certificate": list(res.regularity.certificate) if res.regularity.certificate else None,
        "denominator_bound": res.regularity.denom_bound,
    }
    run.text.append(f"x_c = {_vec(res.x_c)}")
    run.text.append(f"V(x_c) = {fmt_float(res.value)} after {res.iterations} Newton steps")
    run.text.append(f"regularity: {res.regularity}")
    if run.cone.diagram.name.lower() == "dp2":
        ref = 9 / 16 * (math.sqrt(33) - 1)
        err = float(np.max(np.abs(res.x_c - np.array([3.0, ref, ref]))))
        run.report["closed_form"] = {"x_c": [3.0, ref, ref], "max_abs_diff": err}
        run.text.append(f"closed form (3, 9/16(sqrt(33)-1), same) = (3, {fmt_float(ref)}, ...): max |diff| = {err:.3e}")


def cmd_volume(run: _Run):
    xi = run.reeb()
    v = vol(run.volmodel, xi)
    run.report["reeb"] = _xi_json(xi)
    run.report["volume"] = v
    run.text.append(f"V{_vec(xi.xi)} = {fmt_float(v)}  (= {fmt_float(v / math.pi ** (run.cone.m + 1))} pi^{run.cone.m + 1})")
    if run.args.mc_samples:
        t = time.perf_counter()
        est = mc_volume_functional(run.cone, xi.array, run.args.mc_samples, seed_from_env())
        run._tick("monte_carlo", t)
        run.report["monte_carlo"] = {
            "estimate": float(est.mean[0]),
            "stderr": float(est.stderr[0]),
            "samples": est.samples,
            "seed": est.seed,
        }
        run.text.append(f"Monte-Carlo: {fmt_float(est.mean[0])} +- {est.stderr[0]:.3g} ({est.samples} samples, seed {est.seed})")


def cmd_futaki(run: _Run):
    xi = run.reeb()
    t = time.perf_counter()
    sigma = build_sigma(run.cone, xi)
    rep = futaki_report(run.volmodel, sigma, xi, tol=run.args.tol or 1e-7)
    run._tick("futaki", t)
    run.report["reeb"] = _xi_json(xi)
    run.report["futaki"] = {
        "projected_grad": rep.projected_grad,
        "norm": rep.norm,
        "sigma_barycenter": rep.sigma_barycenter,
        "barycenter_norm": rep.barycenter_norm,
        "verdict": rep.verdict,
        "tolerance": rep.tol,
        "fitted_constant": rep.fitted_constant,
    }
    run.text.append(f"Reeb {_vec(xi.xi)}")
    run.text.append(f"projected gradient {_vec(rep.projected_grad)}, norm {rep.norm:.3e}")
    run.text.append(f"Sigma barycenter {_vec(rep.sigma_barycenter)}, norm {rep.barycenter_norm:.3e}")
    run.text.append(f"verdict: {rep.verdict}")


def cmd_soliton(run: _Run):
    xi = run.reeb()
    t = time.perf_counter()
    sigma = build_sigma(run.cone, xi)
    res = soliton_vector(sigma, tol=run.args.tol or 1e-10, max_iter=run.args.max_iter)
    run._tick("soliton", t)
    run.report["reeb"] = _xi_json(xi)
    run.report["soliton"] = {
        "c": res.c,
        "c_ambient": res.c_ambient,
        "residual": res.residual,
        "iterations": res.iterations,
        "residual_history": res.residual_history,
    }
    run.text.append(f"Reeb {_vec(xi.xi)}")
    run.text.append(f"c = {_vec(res.c)}  (ambient {_vec(res.c_ambient)})")
    run.text.append(f"residual {res.residual:.3e} after {res.iterations} Newton steps")


def cmd_potential_check(run: _Run):
    a = run.args
    xi = run.reeb()
    t = time.perf_counter()
    sigma = build_sigma(run.cone, xi)
    rep = potential_checks(build_potential(run.cone, xi), sigma, a.grid_radius, a.samples, threads=a.threads)
    run._tick("potential", t)
    run.report["reeb"] = _xi_json(xi)
    run.report["potential"] = {
        "radius": rep.radius,
        "samples": rep.samples,
        "points": len(rep.grid),
        "asym_sup": rep.asym_sup,
        "ma_sup": rep.ma_sup,
        "asym_growth_ratio": rep.asym_ratio,
        "ma_growth_ratio": rep.ma_ratio,
        "max_sigma_violation": rep.max_sigma_violation,
        "skipped": rep.skipped,
        "passed": rep.passed,
    }
    run.text.append(f"Reeb {_vec(xi.xi)}; grid {a.samples}^{sigma.m} on [-{a.grid_radius}, {a.grid_radius}]^{sigma.m}")
    run.text.append(f"sup |u0 - vbar| = {rep.asym_sup:.6g} (growth ratio {rep.asym_ratio:.4g})")
    run.text.append(f"sup |log det Hess u0 + {2 * sigma.m + 2} u0| = {rep.ma_sup:.6g} (growth ratio {rep.ma_ratio:.4g})")
    run.text.append(f"Du0 outside Sigma by at most {rep.max_sigma_violation:.3e}; skipped {rep.skipped}")
    if not rep.passed:
        raise NumericalError(
            f"potential check failed: skipped {rep.skipped}/{len(rep.grid)}, "
            f"growth ratios {rep.asym_ratio:.4g}/{rep.ma_ratio:.4g}"
        )
    if a.csv:
        atomic_write(a.csv, csv_text(rep))
        run.text.append(f"wrote {len(rep.grid)} rows to {a.csv}")


COMMANDS = {
    "analyze": cmd_analyze,
    "minimize": cmd_minimize,
    "volume": cmd_volume,
    "futaki": cmd_futaki,
    "soliton": cmd_soliton,
    "potential-check": cmd_potential_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("diagram", help="toric diagram JSON: {name, dim, normals}")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--tol", type=float, default=None, help="solver / verdict tolerance")
    common.add_argument("--max-iter", type=int, default=200)
    common.add_argument("--threads", type=int, default=0, help="0 = auto; never changes results")
    common.add_argument("--report", metavar="PATH", help="also write the JSON report to PATH")
    common.add_argument("--timings", action="store_true", help="include wall-clock stage times")

    reeb = argparse.ArgumentParser(add_help=False)
    reeb.add_argument("--reeb", type=parse_reeb, default=None, help="a,b,c (ints, p/q or floats) or 'xc'")

    p = _Parser(prog="sasakit", description="Toric Sasaki geometry: Reeb minimization, Futaki and soliton data.")
    p.add_argument("--version", action="version", version=f"sasakit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("analyze", parents=[common], help="gamma, rays, canonical Reeb vector")
    sub.add_parser("minimize", parents=[common], help="minimize the volume on the Reeb slice")
    vp = sub.add_parser("volume", parents=[common, reeb], help="evaluate V at a Reeb vector")
    vp.add_argument("--mc-samples", type=int, default=0, help="Monte-Carlo cross-check (seed: SASAKIT_SEED)")
    sub.add_parser("futaki", parents=[common, reeb], help="Futaki obstruction at a Reeb vector")
    sub.add_parser("soliton", parents=[common, reeb], help="soliton vector on Sigma")
    pp = sub.add_parser("potential-check", parents=[common, reeb], help="grid checks of the orbit potential")
    pp.add_argument("--grid-radius", type=float, default=10.0)
    pp.add_argument("--samples", type=int, default=21)
    pp.add_argument("--csv", metavar="PATH")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = _Run(args)
        COMMANDS[args.command](run)
        sys.stdout.write(run.finish())
        return EXIT_OK
    except (InvalidDiagram, InconsistentInputs, PolytopeError, OSError) as exc:
        code, exc_ = EXIT_INPUT, exc
    except (GammaInconsistent, InfeasibleReeb) as exc:
        code, exc_ = EXIT_GEOMETRY, exc
    except NumericalError as exc:
        code, exc_ = EXIT_NUMERIC, exc
    except ValueError as exc:
        code, exc_ = EXIT_INPUT, exc
    print(f"sasakit: {type(exc_).__name__}: {exc_}", file=sys.stderr)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
