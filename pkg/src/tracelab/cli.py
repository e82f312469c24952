"""tracelab command-line interface.

Every command writes its data files plus ``manifest.json`` into --out; each
data file carries the manifest's sha256 in a header comment.  Exit codes:
0 success, 2 invalid input, 3 numerical failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    AtAtom, ExponentOverflow, GreenInconclusive, InsufficientProbes, InvalidInput, LogOfZero, NoEscapeDetected,
    NormalFormNotFound, NotHyperbolic, NotNearInfinity, TracelabError,
)
from .green import EscapeParams, Status
from .io import write_csv, write_manifest, write_pgm16
from .parallel import grid_map
from .schrodinger import (
    OperatorFamily, density_of_states, green_on_curve, lyapunov_direct_batch, lyapunov_thouless_batch,
    mixed_bc_eigenvalues, spectrum_escape,
)
from .substitution import FIBONACCI, Substitution
from .surface import TraceMap, infinity_vertex
from .verify import run_all, seed

log = logging.getLogger("tracelab")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4
NUMERICAL_ERRORS = (ExponentOverflow, LogOfZero, NormalFormNotFound, GreenInconclusive, NoEscapeDetected,
                    NotNearInfinity, AtAtom, InsufficientProbes)


def parse_grid(text: str) -> tuple[float, float, float]:
    """'lo:hi:step' -> (lo, hi, step)."""
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise InvalidInput(f"--grid expects lo:hi:step, got {text!r}") from None
    if not (hi > lo and step > 0):
        raise InvalidInput(f"--grid needs lo < hi and step > 0, got {text!r}")
    return lo, hi, step


def parse_complex_grid(text: str) -> tuple[float, float, float, float, int]:
    """'re_lo:re_hi:im_lo:im_hi:n' -> rectangle with n points per axis."""
    try:
        *box, n = text.split(":")
        re_lo, re_hi, im_lo, im_hi = (float(v) for v in box)
        n = int(n)
    except ValueError:
        raise InvalidInput(f"--complex-grid expects re_lo:re_hi:im_lo:im_hi:n, got {text!r}") from None
    if not (re_hi > re_lo and im_hi >= im_lo and n >= 2):
        raise InvalidInput(f"--complex-grid needs re_lo < re_hi, im_lo <= im_hi, n >= 2, got {text!r}")
    return re_lo, re_hi, im_lo, im_hi, n


def complex_grid(re_lo, re_hi, im_lo, im_hi, n) -> np.ndarray:
    """n x n energies; row 0 is the top edge (Im E = im_hi)."""
    re = np.linspace(re_lo, re_hi, n)
    im = np.linspace(im_hi, im_lo, n)
    return re[None, :] + 1j * im[:, None]


@dataclass
class RunConfig:
    command: str
    sub: str
    kappa: float
    out: Path
    workers: int = 1
    params: dict = field(default_factory=dict)

    def manifest(self) -> dict:
        # worker count and output directory do not change results and stay out
        return {"command": self.command, "substitution": self.sub, "kappa": self.kappa, "params": self.params,
                "seed": seed(), "version": __version__}

    def family(self) -> OperatorFamily:
        return OperatorFamily(Substitution.parse(self.sub), self.kappa)

    def escape(self) -> EscapeParams:
        p = self.params
        return EscapeParams(R_escape=p["rescape"], N_max=p["nmax"], tol=p["tol"])


# -- chunk workers (module level so they pickle) -----------------------------

def _green_gamma(of: OperatorFamily, ep: EscapeParams, E: np.ndarray) -> np.ndarray:
    """G+(s(E)) / (alpha + beta); NaN where the escape test was inconclusive."""
    b = green_on_curve(of, E, ep)
    ab = of.trace_map.abelian
    g = b.value / (ab.alpha + ab.beta)
    g[b.mask(Status.INCONCLUSIVE)] = np.nan
    return g


def _direct_gamma(of: OperatorFamily, N: int, E: np.ndarray) -> np.ndarray:
    return lyapunov_direct_batch(of, E, N)


def _gamma_rows(cfg: RunConfig, E: np.ndarray, method: str) -> list[tuple[np.ndarray, str]]:
    of = cfg.family()
    p = cfg.params
    out = []
    if method in ("direct", "all"):
        out.append((grid_map(partial(_direct_gamma, of, p["N"]), E, cfg.workers), "Direct"))
    if method in ("green", "all"):
        g = grid_map(partial(_green_gamma, of, cfg.escape()), E, cfg.workers)
        out.append((g, "Green"))
    if method in ("thouless", "all"):
        dos = density_of_states(of, p["L"], p["windows"])
        out.append((grid_map(partial(lyapunov_thouless_batch, dos=dos), E, cfg.workers), "Thouless"))
    return out


# -- commands -------------------------------------------------------------------

def cmd_info(cfg: RunConfig) -> int:
    sub = Substitution.parse(cfg.sub)
    cls = sub.classify()
    M = sub.abelianization()
    print(f"substitution: {sub}")
    print(f"abelianization M: {M.tolist()}  det {cls.det}  trace {cls.trace}")
    if not cls.hyperbolic:
        print("not hyperbolic", file=sys.stderr)
        return EXIT_INPUT
    ab = sub.abelian_data()
    print("hyperbolic: yes")
    print(f"lambda: {ab.lam:.12f}")
    print(f"normal form N: {np.asarray(ab.N).tolist()}  conjugator: {np.asarray(ab.conjugator).tolist()}")
    print(f"alpha: {ab.alpha:.12f}  beta: {ab.beta:.12f}")
    try:
        print(f"v+: {infinity_vertex(TraceMap(sub, D=4.0 + cfg.kappa**2))}")
    except TracelabError as exc:
        print(f"v+: unavailable ({exc})")
    print(f"u+ prefix: {sub.invariant_word_prefix(60)}")
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    of = cfg.family()
    lo, hi, step = cfg.params["grid"]
    scan = spectrum_escape(of, lo, hi, step, ep=cfg.escape(), workers=cfg.workers)
    digest = write_manifest(cfg.out / "manifest.json", cfg.manifest())
    write_csv(cfg.out / "spectrum_outer.csv", ["lo", "hi"], scan.outer.intervals, digest)
    write_csv(cfg.out / "spectrum_inner.csv", ["lo", "hi"], scan.inner.intervals, digest)
    print(f"outer: {len(scan.outer.intervals)} intervals, length {scan.outer.total_length():.6g}")
    print(f"inner: {len(scan.inner.intervals)} intervals, length {scan.inner.total_length():.6g}")
    return EXIT_OK


def cmd_dos(cfg: RunConfig) -> int:
    of = cfg.family()
    dos = density_of_states(of, cfg.params["L"], cfg.params["windows"])
    digest = write_manifest(cfg.out / "manifest.json", cfg.manifest())
    dos.to_csv(cfg.out / "dos.csv", digest)
    print(f"{dos.atoms.size} atoms, mean {dos.mean():.6g}")
    return EXIT_OK


def _energies(cfg: RunConfig) -> np.ndarray:
    p = cfg.params
    if p.get("complex_grid"):
        return complex_grid(*p["complex_grid"]).ravel()
    lo, hi, step = p["grid"]
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return (lo + step * np.arange(n)).astype(complex)


def cmd_lyapunov(cfg: RunConfig) -> int:
    E = _energies(cfg)
    rows = []
    for g, name in _gamma_rows(cfg, E, cfg.params["method"]):
        rows.extend((e.real, e.imag, v, name) for e, v in zip(E, g))
    digest = write_manifest(cfg.out / "manifest.json", cfg.manifest())
    write_csv(cfg.out / "lyapunov.csv", ["re_E", "im_E", "gamma", "method"], rows, digest)
    print(f"{len(rows)} rows written")
    return EXIT_OK


def cmd_green_map(cfg: RunConfig) -> int:
    """gamma over a complex rectangle by the Green function, Direct where inconclusive."""
    re_lo, re_hi, im_lo, im_hi, n = cfg.params["complex_grid"]
    Z = complex_grid(re_lo, re_hi, im_lo, im_hi, n)
    E = Z.ravel()
    of = cfg.family()
    g = grid_map(partial(_green_gamma, of, cfg.escape()), E, cfg.workers)
    method = np.where(np.isnan(g), "Direct", "Green")
    bad = np.isnan(g)
    if bad.any():
        g[bad] = grid_map(partial(_direct_gamma, of, cfg.params["N"]), E[bad], cfg.workers)
    digest = write_manifest(cfg.out / "manifest.json", cfg.manifest())
    write_csv(cfg.out / "green_map.csv", ["re_E", "im_E", "gamma", "method"],
              zip(E.real, E.imag, g, method), digest)
    write_pgm16(cfg.out / "green_map.pgm", g.reshape(Z.shape), cfg.params["gamma_max"], digest)
    print(f"{n}x{n} map written; {int(bad.sum())} pixels fell back to Direct")
    return EXIT_OK


def cmd_lambda_points(cfg: RunConfig) -> int:
    of = cfg.family()
    roots = mixed_bc_eigenvalues(of, cfg.params["n_power"], cfg.params["target"])
    digest = write_manifest(cfg.out / "manifest.json", cfg.manifest())
    write_csv(cfg.out / "lambda.csv", ["E"], ((e,) for e in roots.roots), digest)
    print(f"{roots.count} roots ({roots.distinct.size} distinct) for word length {roots.length}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    report = run_all(quick=cfg.params["quick"], alpha_offset=cfg.params["alpha_offset"])
    for r in report.results:
        print(r.line())
    (cfg.out / "verify.json").write_text(report.to_json() + "\n")
    print("all criteria pass" if report.passed else "verification FAILED")
    return EXIT_OK if report.passed else EXIT_VERIFY


COMMANDS = {
    "info": cmd_info, "spectrum": cmd_spectrum, "dos": cmd_dos, "lyapunov": cmd_lyapunov,
    "green-map": cmd_green_map, "lambda-points": cmd_lambda_points, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sub", default=str(FIBONACCI), help="substitution, e.g. 'a>ab;b>a' (default Fibonacci)")
    common.add_argument("--kappa", type=float, default=0.0, help="coupling constant (default 0)")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory (default .)")
    common.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--grid", default=None, help="real grid lo:hi:step; use --grid=-3:3:0.01 for negative lo")
    common.add_argument("--complex-grid", default=None, help="re_lo:re_hi:im_lo:im_hi:n (n points per axis)")
    common.add_argument("--N", type=int, default=10_000, help="transfer-matrix length for Direct (default 10000)")
    common.add_argument("--L", type=int, default=2000, help="Dirichlet window length (default 2000)")
    common.add_argument("--windows", type=int, default=64, help="number of DOS windows (default 64)")
    common.add_argument("--n-power", type=int, default=14, help="substitution power for lambda-points (default 14)")
    common.add_argument("--target", type=float, default=2.0, help="trace value for lambda-points (default 2)")
    common.add_argument("--rescape", type=float, default=1e3, help="escape radius (default 1e3)")
    common.add_argument("--nmax", type=int, default=None, help="maximum iterates (default 40 spectrum, 60 otherwise)")
    common.add_argument("--tol", type=float, default=1e-9, help="Cauchy tolerance of the Green iteration")
    common.add_argument("--method", choices=("direct", "green", "thouless", "all"), default="all",
                        help="Lyapunov method(s) for the lyapunov command")
    common.add_argument("--gamma-max", type=float, default=2.0, help="gamma mapped to white in green-map")
    common.add_argument("--quick", action="store_true", help="reduced sizes for verify")
    common.add_argument("--alpha-offset", type=float, default=0.0, help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="tracelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tracelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "info": "substitution data: M, lambda, normal form, alpha, beta, v+",
        "spectrum": "outer/inner spectrum from orbit escape over a real grid",
        "dos": "density of states from Dirichlet windows",
        "lyapunov": "Lyapunov exponent on a real or complex grid",
        "green-map": "gamma over a complex rectangle as CSV and 16-bit PGM",
        "lambda-points": "real roots of tr M(word) = target",
        "verify": "run the acceptance suite and write verify.json",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.workers < 1:
        raise InvalidInput("--workers must be >= 1")
    cmd = args.command
    params: dict = {}
    if cmd == "spectrum":
        r = 2.0 + abs(args.kappa) + 0.5
        params["grid"] = parse_grid(args.grid) if args.grid else (-r, r, 0.005)
        params.update(nmax=args.nmax or 40, rescape=args.rescape, tol=args.tol)
    elif cmd == "dos":
        params.update(L=args.L, windows=args.windows)
    elif cmd in ("lyapunov", "green-map"):
        if cmd == "green-map" or args.complex_grid or not args.grid:
            params["complex_grid"] = parse_complex_grid(args.complex_grid or "-3:3:-1:1:121")
        else:
            params["grid"] = parse_grid(args.grid)
        params.update(N=args.N, L=args.L, windows=args.windows, nmax=args.nmax or 60, rescape=args.rescape,
                      tol=args.tol)
        if cmd == "lyapunov":
            params["method"] = args.method
        else:
            if not args.gamma_max > 0:
                raise InvalidInput("--gamma-max must be positive")
            params["gamma_max"] = args.gamma_max
    elif cmd == "lambda-points":
        params.update(n_power=args.n_power, target=args.target)
    elif cmd == "verify":
        params.update(quick=args.quick, alpha_offset=args.alpha_offset)
    return RunConfig(cmd, args.sub, args.kappa, args.out, args.workers, params)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        if cfg.command != "info":
            Substitution.parse(cfg.sub).abelian_data()  # fail early on bad or non-hyperbolic input
            cfg.out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[cfg.command](cfg)
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NotHyperbolic as exc:
        print(f"not hyperbolic: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TracelabError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
