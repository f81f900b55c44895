"""``discordctl``: state files, discord reports and parameter sweeps.

Subcommands::

    discordctl discord STATE_FILE [--measures entropic,geometric,concurrence]
    discordctl sweep-decoherence --alpha 0.42 [--d1 X | --d2 X] [--p P]
    discordctl sweep-weak --alpha 0.42 --d1 0.6 --d2 0.8
    discordctl sample-qudit --dim 3 --samples 10000 --seed 7

Exit codes: 0 success, 1 validation or numerical failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field

import numpy as np

from .basis_search import SearchConfig, sample_states_report
from .correlations import concurrence, entropic_discord, geometric_discord
from .damping import ProtocolParams, rho_d, rho_r
from .densmat import DEFAULT_TOL, DensityMatrix, as_density
from .errors import NumericalError, SamplingError, ValidationError

CSV_HEADER = (
    "param",
    "entropic_discord",
    "geometric_discord",
    "concurrence",
    "success_prob",
    "theta_opt",
    "phi_opt",
)
MEASURES = ("entropic", "geometric", "concurrence")


class StateFileError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


# ---------------------------------------------------------------- state file

def parse_state_text(text: str, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Parse the sparse-triplet state format.

    ``#`` starts a comment line; the first other line is ``dims d1 d2``; each
    further line is ``row col re im``. Missing entries are zero and the
    conjugate partner of an off-diagonal entry is inferred when omitted.
    """
    dims = None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if dims is None:
            if tok[0] != "dims" or len(tok) < 2:
                raise StateFileError("expected 'dims d1 d2'", lineno)
            try:
                dims = tuple(int(t) for t in tok[1:])
            except ValueError:
                raise StateFileError(f"bad dimension in {line!r}", lineno) from None
            if any(d < 1 for d in dims):
                raise StateFileError("dimensions must be positive", lineno)
            n = int(np.prod(dims))
            continue
        if len(tok) != 4:
            raise StateFileError(f"expected 'row col re im', got {line!r}", lineno)
        try:
            i, j = int(tok[0]), int(tok[1])
            val = complex(float(tok[2]), float(tok[3]))
        except ValueError:
            raise StateFileError(f"cannot parse {line!r}", lineno) from None
        if not (0 <= i < n and 0 <= j < n):
            raise StateFileError(f"index ({i},{j}) outside 0..{n - 1}", lineno)
        if (i, j) in entries:
            raise StateFileError(f"duplicate entry ({i},{j})", lineno)
        entries[(i, j)] = val
    if dims is None:
        raise StateFileError("missing 'dims' line")

    m = np.zeros((n, n), dtype=complex)
    for (i, j), v in entries.items():
        m[i, j] = v
    for (i, j), v in entries.items():
        if i != j and (j, i) not in entries:
            m[j, i] = np.conj(v)
    return as_density(m, dims, tol)


def parse_state_file(path, tol: float = DEFAULT_TOL) -> DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_state_text(fh.read(), tol)


def format_state(rho: DensityMatrix) -> str:
    """Serialise a state in the triplet format (upper triangle only)."""
    lines = ["dims " + " ".join(str(d) for d in rho.dims)]
    m = rho.matrix
    for i in range(m.shape[0]):
        for j in range(i, m.shape[0]):
            if m[i, j] != 0:
                lines.append(f"{i} {j} {float(m[i, j].real)!r} {float(m[i, j].imag)!r}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------- CSV

def fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), "#.9g")


def write_csv(rows, path=None):
    """Write rows (dicts keyed by header names) to ``path`` or stdout."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([fmt(row.get(k)) for k in CSV_HEADER])
    if path is None or path == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return [
            {k: (float(v) if v != "" else None) for k, v in row.items()}
            for row in csv.DictReader(fh)
        ]


# -------------------------------------------------------------------- sweeps

@dataclass
class SweepSpec:
    target: str
    alpha: float
    values: np.ndarray
    D1: float | None = None
    D2: float | None = None
    p: float | None = None
    measures: tuple = MEASURES
    side: str | None = None
    search: SearchConfig = field(default_factory=SearchConfig)
    out: str | None = None

    def __post_init__(self):
        if self.target not in ("decoherence", "weak-measurement"):
            raise ValueError(f"unknown sweep target {self.target!r}")
        if not 0 <= self.alpha <= 1:
            raise ValueError("alpha must lie in [0, 1]")
        self.values = np.asarray(self.values, dtype=float)
        if self.values.size < 2:
            raise ValueError("a sweep needs at least 2 steps")
        if np.any(self.values < 0) or np.any(self.values > 1):
            raise ValueError("sweep range must lie within [0, 1]")
        for name in ("D1", "D2", "p"):
            v = getattr(self, name)
            if v is not None and not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
        bad = set(self.measures) - set(MEASURES)
        if bad:
            raise ValueError(f"unknown measures {sorted(bad)}")


def evaluate_measures(rho, measures, side=None, search=None):
    """Row fragment with the requested measures of one state."""
    row = {}
    if "entropic" in measures:
        res = entropic_discord(rho, side or "B", search)
        row["entropic_discord"] = res.value
        row["theta_opt"], row["phi_opt"] = res.optimal_basis.theta, res.optimal_basis.phi
    if "geometric" in measures:
        res = geometric_discord(rho, side or "A", search)
        row["geometric_discord"] = res.value
        if "entropic" not in measures:
            row["theta_opt"], row["phi_opt"] = res.optimal_basis.theta, res.optimal_basis.phi
    if "concurrence" in measures:
        row["concurrence"] = concurrence(rho)
    return row


def _beta(alpha):
    return np.sqrt(max(0.0, 1.0 - alpha**2))


def sweep_decoherence(spec: SweepSpec):
    """One row per damping strength. ``D1 = D2 = D`` unless one is pinned."""
    if spec.D1 is not None and spec.D2 is not None:
        raise ValueError("pin at most one of D1, D2 in a decoherence sweep")
    rows = []
    for D in spec.values:
        D1 = spec.D1 if spec.D1 is not None else D
        D2 = spec.D2 if spec.D2 is not None else D
        row = {"param": D}
        if spec.p is None:
            rho = rho_d(spec.alpha, _beta(spec.alpha), D1, D2)
        else:
            params = ProtocolParams.from_alpha(spec.alpha, D1=D1, D2=D2, p1=spec.p, p2=spec.p)
            rho = rho_r(params)
            row["success_prob"] = params.success_probability
        row.update(evaluate_measures(rho, spec.measures, spec.side, spec.search))
        rows.append(row)
    return rows


def sweep_weak(spec: SweepSpec):
    """One row per weak-measurement strength ``p = p1 = p2`` at fixed damping."""
    if spec.D1 is None or spec.D2 is None:
        raise ValueError("weak-measurement sweep needs fixed D1 and D2")
    rows = []
    for p in spec.values:
        params = ProtocolParams.from_alpha(spec.alpha, D1=spec.D1, D2=spec.D2, p1=p, p2=p)
        row = {"param": p, "success_prob": params.success_probability}
        row.update(evaluate_measures(rho_r(params), spec.measures, spec.side, spec.search))
        rows.append(row)
    return rows


# ----------------------------------------------------------------------- CLI

def _search_from(args, measured_dim=2):
    method = args.method
    if method == "auto":
        method = "grid" if measured_dim == 2 else "monte-carlo"
    kw = dict(method=method, seed=args.seed, refine_levels=args.refine)
    if args.grid is not None:
        kw.update(grid_steps_theta=args.grid, grid_steps_phi=2 * args.grid - 1)
    if args.samples is not None:
        kw["samples"] = args.samples
    return SearchConfig(**kw)


def _measures(text):
    items = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = set(items) - set(MEASURES)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown measure(s): {', '.join(sorted(bad))}")
    return items


def _unit(text):
    x = float(text)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is outside [0, 1]")
    return x


def _seed(text):
    x = int(text)
    if not 0 <= x < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return x


def _positive(text):
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return x


def cmd_discord(args, out=None):
    out = out or sys.stdout
    rho = parse_state_file(args.state)
    lines = [f"dims = {' '.join(map(str, rho.dims))}"]
    for name in args.measures:
        if name == "concurrence":
            lines.append(f"concurrence = {fmt(concurrence(rho))}")
            continue
        fn, default = (entropic_discord, "B") if name == "entropic" else (geometric_discord, "A")
        side = args.side or default
        search = _search_from(args, rho.dims[0 if side == "A" else 1])
        res = fn(rho, side, search)
        b = res.optimal_basis
        where = (
            f"theta_opt = {fmt(b.theta)}, phi_opt = {fmt(b.phi)}"
            if b.theta is not None
            else f"basis = {b.digest()}"
        )
        opt = res.optimizer
        meta = f"method = {opt.method}, evaluations = {opt.evaluations}"
        if opt.resolution is not None:
            meta += f", grid = {opt.resolution[0]}x{opt.resolution[1]}, refine = {opt.resolution[2]}"
        if opt.samples is not None:
            meta += f", samples = {opt.samples}, seed = {opt.seed}"
        lines.append(f"{name}_discord = {fmt(res.value)}  (side {side}; {where}; {meta})")
    out.write("\n".join(lines) + "\n")


def _sweep_values(args, default_max):
    hi = default_max if args.max is None else args.max
    return np.linspace(args.min, hi, args.steps)


def cmd_sweep_decoherence(args):
    d1, d2 = args.d1, args.d2
    if args.d is not None:
        raise ValueError("--d is the swept variable here; pin one channel with --d1 or --d2")
    spec = SweepSpec(
        "decoherence", args.alpha, _sweep_values(args, 1.0), D1=d1, D2=d2, p=args.p,
        measures=args.measures, side=args.side, search=_search_from(args), out=args.out,
    )
    write_csv(sweep_decoherence(spec), args.out)


def cmd_sweep_weak(args):
    d1 = args.d if args.d is not None else args.d1
    d2 = args.d if args.d is not None else args.d2
    if args.p is not None:
        raise ValueError("--p is the swept variable here; use --min/--max/--steps")
    if d1 is None or d2 is None:
        raise ValueError("sweep-weak needs --d or both --d1 and --d2")
    spec = SweepSpec(
        "weak-measurement", args.alpha, _sweep_values(args, 0.999), D1=d1, D2=d2,
        measures=args.measures, side=args.side, search=_search_from(args), out=args.out,
    )
    write_csv(sweep_weak(spec), args.out)


def cmd_sample_qudit(args, out=None):
    out = out or sys.stdout
    rep = sample_states_report(args.dim, args.samples, args.seed)
    text = (
        f"d = {rep['d']}\n"
        f"gellmann_matrices = {rep['gellmann_count']}\n"
        f"seed = {rep['seed']}\n"
        f"accepted = {rep['samples']}\n"
        f"drawn = {rep['drawn']}\n"
        f"acceptance_rate = {fmt(rep['acceptance_rate'])}\n"
        f"invariant_violations = {rep['violations']}\n"
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return rep


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--grid", type=_positive, default=None,
                        help="theta grid points (phi uses 2*grid-1); default 181")
    common.add_argument("--refine", type=int, default=2)
    common.add_argument("--samples", type=_positive, default=None)
    common.add_argument("--method", choices=("auto", "grid", "monte-carlo"), default="auto")
    common.add_argument("--side", choices=("A", "B"), default=None)
    common.add_argument("--out", default=None)

    protocol = argparse.ArgumentParser(add_help=False)
    protocol.add_argument("--alpha", type=_unit, default=1 / np.sqrt(2))
    protocol.add_argument("--d1", type=_unit, default=None)
    protocol.add_argument("--d2", type=_unit, default=None)
    protocol.add_argument("--d", type=_unit, default=None, help="sets both D1 and D2")
    protocol.add_argument("--p", type=_unit, default=None)
    protocol.add_argument("--min", type=_unit, default=0.0)
    protocol.add_argument("--max", type=_unit, default=None)
    protocol.add_argument("--steps", type=int, default=21)
    protocol.add_argument("--measures", type=_measures, default=MEASURES)

    parser = argparse.ArgumentParser(prog="discordctl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discord", parents=[common], help="discord of a state file")
    p.add_argument("state")
    p.add_argument("--measures", type=_measures, default=("entropic", "geometric"))
    p.set_defaults(func=cmd_discord)

    p = sub.add_parser("sweep-decoherence", parents=[common, protocol],
                       help="measures of the damped state versus D")
    p.set_defaults(func=cmd_sweep_decoherence)

    p = sub.add_parser("sweep-weak", parents=[common, protocol],
                       help="measures of the protected state versus p")
    p.set_defaults(func=cmd_sweep_weak)

    p = sub.add_parser("sample-qudit", parents=[common], help="Bloch-vector sampler diagnostics")
    p.add_argument("--dim", type=int, default=3)
    p.set_defaults(func=cmd_sample_qudit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sample-qudit":
        if args.dim < 2:
            parser.error("--dim must be >= 2")
        if args.samples is None:
            args.samples = 10_000
    if args.command.startswith("sweep") and args.steps < 2:
        parser.error("--steps must be >= 2")
    try:
        args.func(args)
    except (ValidationError, StateFileError, NumericalError, SamplingError, ValueError, OSError) as exc:
        print(f"discordctl: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
