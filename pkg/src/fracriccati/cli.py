"""Command-line surface: operator evaluation, Riccati solving/verification,
cosmology tables, figure-grid emission, and the acceptance selftest.

Output tables are plain text: one '#' header line naming the columns, comma
separators, 17-significant-digit decimals (bit-faithful round trip), newline
endings.  Lattice points nearest a solution pole (within half a grid step)
are emitted as pole rows: 'nan' in the value column and pole=1.
Exit codes: 0 ok, 2 flag errors, 3 numeric non-convergence, 4 pole inside a
verification/scale interval, 5 cosmology with c = 0.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import cosmo, odeverify, riccati
from . import fracops as fo
from .errors import BranchZeroError, ConvergenceError, DegenerateRegimeError
from .grids import GridSpec
from .specfun import gamma, recip_gamma

EXIT_OK = 0
EXIT_FLAGS = 2
EXIT_NONCONVERGENT = 3
EXIT_POLE = 4
EXIT_BAD_C = 5


def _parse_grid(text: str) -> GridSpec:
    try:
        start_s, stop_s, count_s = text.split(":")
        return GridSpec(float(start_s), float(stop_s), int(count_s))
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(
            f"grid must be start:stop:count, got {text!r} ({exc})"
        )


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _emit(out_path: str | None, header: list[str], rows) -> None:
    lines = ["# " + ",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# row builders (shared with the acceptance suite)
# ---------------------------------------------------------------------------


def pole_search_bounds(grid: GridSpec) -> tuple[float, float]:
    """Zero-search window matching the half-step flag rule on the grid."""
    half = 0.5 * grid.step * (1.0 + 1e-9)
    return max(grid.start - half, 1e-12), grid.stop + half


def _pole_indices(rp: riccati.RiccatiParams, branch: int, grid: GridSpec) -> set[int]:
    """Lattice indices whose nearest denominator zero lies within half a step."""
    bm = riccati.map_params(rp)
    if bm.regime != riccati.OSCILLATORY:
        return set()
    pts = grid.points()
    lo, hi = pole_search_bounds(grid)
    zeros = riccati.find_poles(rp, lo, hi, branch)
    flagged: set[int] = set()
    half = 0.5 * grid.step * (1.0 + 1e-9)
    for z in zeros:
        for i, x in enumerate(pts):
            if abs(float(x) - z) <= half:
                flagged.add(i)
    return flagged


def riccati_rows(rp: riccati.RiccatiParams, branch: int, grid: GridSpec):
    """(x, u, pole) rows of the chosen closed-form branch on the grid."""
    pts = grid.points()
    flagged = _pole_indices(rp, branch, grid)
    ev = riccati.eval_u1 if branch == 1 else riccati.eval_u2
    rows = []
    for i, x in enumerate(pts):
        x = float(x)
        s = ev(rp, x)
        if i in flagged or s.pole_flag:
            rows.append((x, float("nan"), 1))
        else:
            rows.append((x, s.value, 0))
    return rows


def hubble_rows(cp: cosmo.CosmoParams, branch: int, grid: GridSpec):
    """(eta, H, pole) rows; the flat case has no poles by construction."""
    pts = grid.points()
    if cp.k == 0:
        return [(float(e), cosmo.hubble_flat(cp, float(e)).H, 0) for e in pts]
    rp = cp.riccati_params()
    flagged = _pole_indices(rp, branch, grid)
    rows = []
    for i, e in enumerate(pts):
        e = float(e)
        h = cosmo.hubble(cp, e, branch)
        if i in flagged or h.pole_flag:
            rows.append((e, float("nan"), 1))
        else:
            rows.append((e, h.H, 0))
    return rows


def figure_rows(
    k: int,
    c: float,
    eta_grid: GridSpec,
    delta_grid: GridSpec | None = None,
    branch: int = 1,
):
    """(eta, delta, H, pole) rows, delta-major, covering the full lattice.

    The delta axis may ride along as eta_grid.second instead of being passed
    separately."""
    if delta_grid is None:
        delta_grid = eta_grid.second
    if delta_grid is None:
        raise ValueError("figure_rows needs a delta axis")
    rows = []
    for d in delta_grid.points():
        d = float(d)
        cp = cosmo.CosmoParams(k=k, delta=d, c=c)
        for eta, h, pole in hubble_rows(cp, branch, eta_grid):
            rows.append((eta, d, h, pole))
    return rows


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def _cmd_fracderiv(args) -> int:
    if not 0.0 <= args.beta < 2.0:
        _err(f"--beta must lie in [0, 2), got {args.beta}")
        return EXIT_FLAGS
    grid = args.grid
    if grid.start <= 0.0:
        _err("fracderiv grid must start above 0")
        return EXIT_FLAGS
    oracle = None
    if args.power is not None:
        if args.power <= -1.0:
            _err(f"--power must exceed -1, got {args.power}")
            return EXIT_FLAGS
        f = fo.RealFunction.power(args.power)

        def oracle(x, a=args.power, b=args.beta):
            return fo.power_rule(a, b, x)

    else:
        name = args.builtin
        if name == "sin":
            f = fo.RealFunction(np.sin)
        elif name == "exp":
            f = fo.RealFunction(np.exp)
        elif name.startswith("poly:"):
            try:
                coeffs = [float(cstr) for cstr in name[5:].split(",")]
            except ValueError:
                _err(f"bad poly coefficients in {name!r}")
                return EXIT_FLAGS
            f = fo.RealFunction.polynomial(coeffs)

            def oracle(x, coeffs=tuple(coeffs), b=args.beta):
                return sum(
                    cj * gamma(j + 1.0) * recip_gamma(j + 1.0 - b) * x ** (j - b)
                    for j, cj in enumerate(coeffs)
                )

        else:
            _err(f"--builtin must be sin, exp or poly:c0,c1,..., got {name!r}")
            return EXIT_FLAGS
    rows = []
    for x in grid.points():
        x = float(x)
        numeric = fo.rl_derivative(f, args.beta, x)
        if oracle is not None:
            want = oracle(x)
            rows.append((x, numeric, want, abs(numeric - want)))
        else:
            rows.append((x, numeric))
    header = ["x", "numeric", "oracle", "abs_err"] if oracle else ["x", "numeric"]
    _emit(args.out, header, rows)
    return EXIT_OK


def _make_riccati_params(args):
    if args.a == 0.0:
        _err("--a must be nonzero")
        return None
    if args.b == 0.0:
        _err("--b = 0 is degenerate; the flat-case solution lives under 'cosmo --k 0'")
        return None
    try:
        return riccati.RiccatiParams(args.a, args.b, args.delta)
    except ValueError as exc:
        _err(str(exc))
        return None


def _cmd_riccati(args) -> int:
    rp = _make_riccati_params(args)
    if rp is None:
        return EXIT_FLAGS
    if args.branch not in (1, 2):
        _err(f"--branch must be 1 or 2, got {args.branch}")
        return EXIT_FLAGS
    if args.action in ("eval", "poles") and args.grid is None:
        _err(f"--grid is required for {args.action}")
        return EXIT_FLAGS

    if args.action == "eval":
        if args.grid.start <= 0.0:
            _err("evaluation grid must start above 0")
            return EXIT_FLAGS
        _emit(args.out, ["x", "u", "pole"], riccati_rows(rp, args.branch, args.grid))
        return EXIT_OK

    if args.action == "poles":
        poles = riccati.find_poles(rp, args.grid.start, args.grid.stop, args.branch)
        _emit(args.out, ["x_pole"], [(p,) for p in poles])
        return EXIT_OK

    # verify
    if args.x0 is None or args.x1 is None:
        _err("verify needs --x0 and --x1")
        return EXIT_FLAGS
    if not 0.0 < args.x0 < args.x1:
        _err(f"need 0 < x0 < x1, got {args.x0}, {args.x1}")
        return EXIT_FLAGS
    if riccati.find_poles(rp, args.x0, args.x1, args.branch):
        _err(f"verification interval [{args.x0}, {args.x1}] contains a pole")
        return EXIT_POLE
    ev = riccati.eval_u1 if args.branch == 1 else riccati.eval_u2

    def u_of(t):
        return ev(rp, t).value

    pts = np.linspace(args.x0, args.x1, 33)
    max_res = 0.0
    max_dev = 0.0
    u_num = u_of(float(pts[0]))
    for x_prev, x_cur in zip(pts[:-1], pts[1:]):
        u_num = odeverify.integrate_riccati(
            rp, odeverify.IvpSpec(None, float(x_prev), u_num, float(x_cur))
        )
        max_dev = max(max_dev, abs(u_num - u_of(float(x_cur))))
    for x in pts:
        x = float(x)
        up = odeverify.fd_derivative(u_of, x)
        max_res = max(max_res, abs(riccati.residual(rp, x, u_of(x), up)))
    _emit(
        args.out,
        ["a", "b", "delta", "branch", "x0", "x1", "max_residual", "max_deviation"],
        [(rp.a, rp.b, rp.delta, args.branch, args.x0, args.x1, max_res, max_dev)],
    )
    return EXIT_OK


def _cmd_cosmo(args) -> int:
    if args.c is None and args.gamma is None:
        _err("provide --c or --gamma")
        return EXIT_FLAGS
    c = args.c if args.c is not None else cosmo.c_of_gamma(args.gamma)
    if c == 0.0:
        _err("c = 0 (gamma = 2/3) leaves no Riccati coefficient; rejected")
        return EXIT_BAD_C
    try:
        cp = cosmo.CosmoParams(k=args.k, delta=args.delta, c=c, gamma_index=args.gamma)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_FLAGS
    if args.branch not in (1, 2):
        _err(f"--branch must be 1 or 2, got {args.branch}")
        return EXIT_FLAGS
    grid = args.grid
    if grid.start <= 0.0:
        _err("conformal-time grid must start above 0")
        return EXIT_FLAGS

    if args.action == "hubble":
        _emit(args.out, ["eta", "H", "pole"], hubble_rows(cp, args.branch, grid))
        return EXIT_OK

    if args.action == "scale":
        eta_ref = args.eta_ref if args.eta_ref is not None else grid.start
        if eta_ref <= 0.0:
            _err("--eta-ref must be positive")
            return EXIT_FLAGS
        lo = min(eta_ref, grid.start)
        hi = max(eta_ref, grid.stop)
        if cp.k != 0 and riccati.find_poles(cp.riccati_params(), lo, hi, args.branch):
            _err(f"scale interval [{lo}, {hi}] crosses a zero of the linear branch")
            return EXIT_POLE
        rows = [
            (float(e), cosmo.scale_factor(cp, float(e), eta_ref, args.branch))
            for e in grid.points()
        ]
        _emit(args.out, ["eta", "R_ratio"], rows)
        return EXIT_OK

    # figure
    delta_grid = args.delta_grid
    dpts = delta_grid.points()
    if dpts[0] <= 0.0 or dpts[-1] > 1.0:
        _err("delta grid values must lie in (0, 1]")
        return EXIT_FLAGS
    rows = figure_rows(args.k, c, grid, delta_grid, args.branch)
    _emit(args.out, ["eta", "delta", "H", "pole"], rows)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from .acceptance import run_all

    failures = run_all(print)
    return EXIT_OK if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracriccati",
        description=(
            "Riemann-Liouville operators, Bessel-ratio solutions of the "
            "delta-modified Riccati equation, and FRW cosmology tables"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fracderiv", help="fractional derivative tables")
    p.add_argument("--beta", type=float, required=True, help="derivative order in [0, 2)")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--power", type=float, help="differentiate t^a")
    grp.add_argument("--builtin", type=str, help="sin | exp | poly:c0,c1,...")
    p.add_argument("--grid", type=_parse_grid, required=True, help="start:stop:count")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_fracderiv)

    p = sub.add_parser("riccati", help="closed-form branches, verification, poles")
    p.add_argument("action", choices=("eval", "verify", "poles"))
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--branch", type=int, default=1)
    p.add_argument("--grid", type=_parse_grid, default=None)
    p.add_argument("--x0", type=float, default=None)
    p.add_argument("--x1", type=float, default=None)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_riccati)

    p = sub.add_parser("cosmo", help="Hubble-parameter and scale-factor tables")
    p.add_argument("action", choices=("hubble", "scale", "figure"))
    p.add_argument("--k", type=int, required=True, choices=(-1, 0, 1))
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--branch", type=int, default=1)
    p.add_argument("--grid", type=_parse_grid, required=True)
    p.add_argument(
        "--delta-grid",
        dest="delta_grid",
        type=_parse_grid,
        default=GridSpec(0.05, 1.0, 20),
        help="figure delta axis (default 0.05:1:20)",
    )
    p.add_argument("--eta-ref", dest="eta_ref", type=float, default=None)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_cosmo)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_FLAGS
    try:
        return args.func(args)
    except ConvergenceError as exc:
        _err(f"numeric non-convergence: {exc}")
        return EXIT_NONCONVERGENT
    except (BranchZeroError,) as exc:
        _err(str(exc))
        return EXIT_POLE
    except (ValueError, DegenerateRegimeError) as exc:
        _err(str(exc))
        return EXIT_FLAGS


if __name__ == "__main__":
    sys.exit(main())
