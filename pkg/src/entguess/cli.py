"""Command-line surface: seeded verification runs, bound sweeps, witness
evaluation from statistics files, and game simulations.

All output is machine readable (JSON or CSV), deterministic for a fixed
(config, seed), and numerically formatted to 12 significant digits so the
two formats carry identical values.  Exit codes: 0 success/certified,
1 relation violated or game outside its 4-sigma band, 2 usage or input
error, 3 witness inconclusive.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import designs, game, relations
from .entropies import JointDistribution
from .errors import EntguessError, FormatError
from .linops import max_entangled
from .states import DensityMatrix, SeedSpec, mixed_rank_states, random_density, random_pure, random_separable


@dataclass
class RunConfig:
    """Parsed invocation, serializable for reproducibility records."""

    command: str
    relation: str | None = None
    d: int | None = None
    d_b: int | None = None
    d_e: int | None = None
    family: str = "mub"
    nu: float = 0.0
    n: int | None = None
    samples: int = 50
    trials: int = 100000
    seed: int = 0
    grid: int = 101
    tolerance: float | None = None
    state: str | None = None
    rank: int | None = None
    input_path: str | None = None
    output_path: str | None = None
    fmt: str = "json"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))


def round12(x):
    """Round floats (recursively through containers) to 12 significant digits."""
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, dict):
        return {k: round12(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [round12(v) for v in x]
    return x


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _emit(text: str, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _reports_json(reports) -> str:
    return json.dumps([round12(r.to_dict()) for r in reports], sort_keys=True, indent=2) + "\n"


def _reports_csv(reports) -> str:
    buf = io.StringIO()
    meta_keys = sorted({k for r in reports for k in r.metadata})
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lhs", "rhs", "defect", "tolerance", "verdict", *meta_keys])
    for r in reports:
        row = [_fmt(r.lhs), _fmt(r.rhs), _fmt(r.defect), _fmt(r.tolerance), r.verdict]
        for k in meta_keys:
            v = r.metadata.get(k, "")
            row.append(_fmt(v) if isinstance(v, float) else str(v))
        writer.writerow(row)
    return buf.getvalue()


def _family_for(name: str, d: int) -> designs.MeasurementFamily:
    if name == "mub":
        return designs.mub_family(d)
    if name == "sic":
        return designs.sic_povm(d)
    if name == "clifford":
        if d != 2:
            raise EntguessError("the Clifford-orbit family is qubit-only (d = 2)")
        return designs.clifford_orbit_family()
    if name.startswith("file:"):
        with open(name[5:]) as fh:
            try:
                fam = designs.MeasurementFamily.from_json_dict(json.load(fh))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"malformed family document: {exc}") from exc
        if fam.d != d:
            raise EntguessError(f"family file is for d = {fam.d}, run asked for d = {d}")
        return fam
    raise EntguessError(f"unknown family {name!r}")


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.relation == "main":
        family = _family_for(cfg.family, cfg.d)
        tol = cfg.tolerance if cfg.tolerance is not None else relations.EQUALITY_TOL
        reports = [
            relations.equality_report(rho, family, cfg.nu, tol)
            for rho in mixed_rank_states(cfg.d, cfg.d_b, cfg.samples, cfg.seed)
        ]
    elif cfg.relation == "monogamy":
        mubs = designs.mub_family(cfg.d)
        tol = cfg.tolerance if cfg.tolerance is not None else relations.MONOGAMY_TOL
        dims = (cfg.d, cfg.d_b, cfg.d_e)
        reports = [
            relations.monogamy_report(
                random_pure(int(np.prod(dims)), SeedSpec(cfg.seed, stream=i)),
                dims,
                mubs,
                tol,
            )
            for i in range(cfg.samples)
        ]
    else:
        raise EntguessError(f"unknown relation {cfg.relation!r}")
    text = _reports_json(reports) if cfg.fmt == "json" else _reports_csv(reports)
    _emit(text, cfg.output_path)
    return 0 if all(r.holds for r in reports) else 1


def cmd_sweep(cfg: RunConfig) -> int:
    d = cfg.d
    designs.mub_family(d)  # reject dimensions without a complete MUB set
    if cfg.grid < 2:
        raise EntguessError(f"grid size must be >= 2, got {cfg.grid}")
    rows = []
    for n in range(1, d + 2):
        for fpg in np.linspace(0.0, 1.0, cfg.grid):
            lower, upper = relations.guessing_bounds(float(fpg), d, n)
            rows.append({"fpg": float(fpg), "n": n, "lower": lower, "upper": upper})
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["fpg", "n", "lower", "upper"])
        for r in rows:
            writer.writerow([_fmt(r["fpg"]), r["n"], _fmt(r["lower"]), _fmt(r["upper"])])
        text = buf.getvalue()
    else:
        text = json.dumps([round12(r) for r in rows], sort_keys=True, indent=2) + "\n"
    _emit(text, cfg.output_path)
    return 0


def cmd_witness(cfg: RunConfig) -> int:
    with open(cfg.input_path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"not valid JSON: {exc}") from exc
    joints = JointDistribution.from_json_dict(doc)
    tol = cfg.tolerance if cfg.tolerance is not None else relations.EQUALITY_TOL
    report = relations.witness(joints, joints.d_a, tol)
    if report.metadata["entangled"]:
        print(f"ENTANGLED ({report.lhs:.3f} > {report.rhs:.3f})")
        code = 0
    else:
        print(f"INCONCLUSIVE ({report.lhs:.3f} <= {report.rhs:.3f})")
        code = 3
    if cfg.output_path:
        _emit(_reports_json([report]), cfg.output_path)
    return code


def _load_state(cfg: RunConfig) -> DensityMatrix:
    d, d_b = cfg.d, cfg.d_b
    spec = SeedSpec(cfg.seed, stream=0)
    if cfg.state == "max-entangled":
        return DensityMatrix.from_pure(max_entangled(d), (d, d))
    if cfg.state == "maximally-mixed":
        n = d * d_b
        return DensityMatrix(np.eye(n) / n, (d, d_b))
    if cfg.state == "random":
        n = d * d_b
        return random_density(n, cfg.rank or n, spec, dims=(d, d_b))
    if cfg.state == "separable":
        return random_separable(d, d_b, terms=4, seed=spec)
    if cfg.state and cfg.state.startswith("file:"):
        with open(cfg.state[5:]) as fh:
            doc = json.load(fh)
        try:
            m = np.array(doc["re"], dtype=float) + 1j * np.array(doc["im"], dtype=float)
            return DensityMatrix(m, tuple(doc["dims"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed density-matrix document: {exc}") from exc
    raise EntguessError(f"unknown state specifier {cfg.state!r}")


def cmd_game(cfg: RunConfig) -> int:
    rho = _load_state(cfg)
    family = _family_for(cfg.family, rho.d_a)
    result = game.simulate_game(rho, family, cfg.trials, SeedSpec(cfg.seed, stream=1))
    _emit(json.dumps(round12(result.to_dict()), sort_keys=True, indent=2) + "\n", cfg.output_path)
    gap = abs(result.empirical_rate - result.analytic_rate)
    return 0 if gap <= 4.0 * result.std_error else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entguess",
        description="verify entanglement/guessing-probability relations numerically",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run seeded relation checks over random states")
    p.add_argument("--relation", choices=["main", "monogamy"], required=True)
    p.add_argument("--d", type=int, required=True, help="Alice dimension (prime for MUBs)")
    p.add_argument("--db", type=int, default=None, help="Bob dimension (default: d)")
    p.add_argument("--de", type=int, default=None, help="Eve dimension, monogamy only (default: d)")
    p.add_argument("--family", default="mub", help="mub | sic | clifford | file:<path>")
    p.add_argument("--nu", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)

    p = sub.add_parser("sweep", help="emit the tight bound curves over an F^pg grid")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--output", default=None)

    p = sub.add_parser("witness", help="evaluate the entanglement witness on a statistics file")
    p.add_argument("--input", required=True)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--output", default=None)

    p = sub.add_parser("game", help="simulate the guessing game against the PGM")
    p.add_argument("--state", default="random",
                   help="max-entangled | maximally-mixed | random | separable | file:<path>")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--db", type=int, default=None)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--family", default="mub", help="mub | clifford | file:<path> (basis families only)")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    cfg.relation = getattr(args, "relation", None)
    cfg.d = getattr(args, "d", None)
    cfg.d_b = getattr(args, "db", None) or (cfg.d if cfg.d else None)
    cfg.d_e = getattr(args, "de", None) or (cfg.d if cfg.d else None)
    cfg.family = getattr(args, "family", "mub")
    cfg.nu = getattr(args, "nu", 0.0)
    cfg.samples = getattr(args, "samples", 50)
    cfg.trials = getattr(args, "trials", 100000)
    cfg.seed = getattr(args, "seed", 0)
    cfg.grid = getattr(args, "grid", 101)
    cfg.tolerance = getattr(args, "tolerance", None)
    cfg.state = getattr(args, "state", None)
    cfg.rank = getattr(args, "rank", None)
    cfg.input_path = getattr(args, "input", None)
    cfg.output_path = getattr(args, "output", None)
    cfg.fmt = getattr(args, "format", "json")
    return cfg


_COMMANDS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "witness": cmd_witness,
    "game": cmd_game,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    try:
        return _COMMANDS[cfg.command](cfg)
    except (EntguessError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
