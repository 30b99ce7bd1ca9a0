"""Command-line front end.

Every verb writes one machine-readable document (JSON, or CSV where noted) to
stdout.  Exit status 0 means a verdict was computed, whatever its value;
2 means the input could not be parsed or validated; 3 means a dimension bound
was exceeded; 4 means a numerical routine failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from mixcone import classical, cone, mixing, quantum, transport
from mixcone.dynamics import damped, fokker_planck, shift
from mixcone.eigen import EigensolverError
from mixcone.simplex import LPError

DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BOUNDS = 3
EXIT_NUMERIC = 4

VERBS = (
    "decompose", "mixdist", "dominates", "find-map", "rss-sweep", "check-stochastic", "check-isometry",
    "classify", "build-isometry", "invert-isometry", "check-channel", "demo-damped", "demo-fp", "demo-shift",
)


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    verb: str
    input_path: str | None = None
    seed: int = DEFAULT_SEED
    tol: float | None = None
    fmt: str = "json"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verb not in VERBS:
            raise InputError(f"unknown verb {self.verb!r}")
        if self.seed < 0:
            raise InputError("seed must be nonnegative")
        if self.fmt not in ("json", "csv"):
            raise InputError(f"unknown format {self.fmt!r}")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _table(config, header, rows) -> str:
    if config.fmt == "json":
        return _dump([dict(zip(header, (float(v) if isinstance(v, np.floating) else v for v in r))) for r in rows])
    return _csv(header, rows)


def _load(config: RunConfig):
    if config.input_path is None:
        raise InputError(f"verb {config.verb!r} needs --input")
    try:
        if config.input_path == "-":
            return json.load(sys.stdin)
        with open(config.input_path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {config.input_path}: {exc}") from exc


def _element(doc, name):
    try:
        return cone.element_from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad element {name!r}: {exc}") from exc


def _quad(doc):
    try:
        return [_element(doc[k], k) for k in ("x", "y", "xp", "yp")]
    except KeyError as exc:
        raise InputError(f"missing key {exc}") from exc


def _tol(config, default):
    return default if config.tol is None else config.tol


def _state(z, name):
    if not cone.is_state(z):
        raise InputError(f"{name} is not a state")
    return np.asarray(z)


def _decompose(config):
    z = _element(_load(config), "input")
    parts = cone.minimal_decomposition(z)
    wrap = cone.SignedMeasure if isinstance(z, cone.SignedMeasure) else cone.HermitianOperator
    return _dump({
        "charge": cone.charge(z),
        "one_norm": cone.one_norm(z),
        "positive_part": wrap(parts.positive_part).to_json(),
        "negative_part": wrap(parts.negative_part).to_json(),
        "positive_charge": parts.positive_charge,
        "negative_charge": parts.negative_charge,
    })


def _mixdist(config):
    doc = _load(config)
    x, y = _state(_element(doc.get("x"), "x"), "x"), _state(_element(doc.get("y"), "y"), "y")
    profile = mixing.mixing_profile(x, y, n_grid=config.options.get("grid") or mixing.DEFAULT_GRID)
    if config.fmt == "csv":
        return profile.to_csv()
    return _dump({
        "kind": profile.kind,
        "breakpoints": profile.breakpoints.tolist(),
        "values": profile.values.tolist(),
        "lipschitz_bound": profile.lipschitz_bound,
    })


def _dominates(config):
    doc = _load(config)
    x, y, xp, yp = (_state(z, n) for z, n in zip(_quad(doc), ("x", "y", "xp", "yp")))
    verdict = mixing.dominates((x, y), (xp, yp), tol=_tol(config, mixing.DEFAULT_TOL),
                               n_grid=config.options.get("grid") or mixing.DEFAULT_GRID)
    return _dump(verdict.to_json())


def _find_map(config):
    x, y, xp, yp = _quad(_load(config))
    try:
        cert = transport.find_transport(x, y, xp, yp, tol=_tol(config, mixing.DEFAULT_TOL),
                                        exact=bool(config.options.get("exact")))
    except transport.DimensionBoundError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    return _dump(cert.to_json())


def _rss_sweep(config):
    dim, count = config.options.get("dim"), config.options.get("count")
    if dim is None or count is None:
        raise InputError("rss-sweep needs --dim and --count")
    if dim < 1 or count < 0:
        raise InputError("dim must be positive and count nonnegative")
    if dim > transport.MAX_DIM:
        raise transport.DimensionBoundError(f"dimension {dim} exceeds the bound {transport.MAX_DIM}")
    rows = []
    for index, kind, report in transport.rss_sweep(dim, count, config.seed, _tol(config, mixing.DEFAULT_TOL)):
        rows.append([index, kind, int(report.lp_feasible), int(report.dominates), int(report.agree),
                     report.margin, "" if report.witness_t is None else report.witness_t,
                     "" if report.gap is None else report.gap])
    header = ["index", "kind", "lp_feasible", "dominates", "agree", "margin", "witness_t", "gap"]
    return _table(config, header, rows)


def _matrix(config):
    doc = _load(config)
    try:
        return classical.matrix_from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad matrix: {exc}") from exc


def _stochastic(config):
    M = _matrix(config)
    check = classical.verify_stochastic(M, _tol(config, cone.TOL))
    if not check:
        raise InputError("matrix is not stochastic: " + "; ".join(check.issues))
    return M


def _check_stochastic(config):
    return _dump(classical.verify_stochastic(_matrix(config), _tol(config, cone.TOL)).to_json())


def _check_isometry(config):
    check = classical.is_isometry(_stochastic(config))
    return _dump({"isometric": check.isometric,
                  "witness_columns": None if check.witness_columns is None else list(check.witness_columns)})


def _classify(config):
    return _dump(classical.classify_reversible(_stochastic(config)).to_json())


def _blueprint(config):
    opts = config.options
    try:
        if config.input_path is not None:
            doc = _load(config)
            blueprint_doc = doc.get("blueprint", doc)
        else:
            if opts.get("dim_in") is None or opts.get("weights") is None:
                raise InputError("give --input or both --dim-in and --weights")
            blueprint_doc = {
                "dim_in": opts["dim_in"],
                "weights": [float(w) for w in opts["weights"].split(",")],
                "extra": opts.get("extra") or 0,
                "antilinear": [f.strip().lower() in ("1", "true", "yes") for f in opts["antilinear"].split(",")]
                if opts.get("antilinear") else None,
                "seed": config.seed if opts.get("randomize") else None,
            }
        return quantum.IsometryBlueprint.from_json(blueprint_doc)
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad blueprint: {exc}") from exc


def _build_isometry(config):
    b = _blueprint(config)
    return _dump({"blueprint": b.to_json(), "channel": quantum.build_isometric_channel(b).to_json()})


def _invert_isometry(config):
    b = _blueprint(config)
    sigma = None
    if config.input_path is not None:
        doc = _load(config)
        if doc.get("residual_state") is not None:
            sigma = _state(_element(doc["residual_state"], "residual_state"), "residual_state")
    try:
        channel = quantum.build_inverse_channel(b, sigma)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return _dump({"blueprint": b.to_json(), "channel": channel.to_json()})


def _check_channel(config):
    doc = _load(config)
    try:
        channel = quantum.KrausChannel.from_json(doc.get("channel", doc))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad channel: {exc}") from exc
    verdict = quantum.is_isometry_channel(channel, samples=config.options.get("samples") or quantum.DEFAULT_SAMPLES,
                                          seed=config.seed, tol=_tol(config, 1e-9))
    return _dump({
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "trace_preservation_error": quantum.completeness_error(channel),
        "completely_positive": not any(channel.conjugate_input),
        "surjective": quantum.is_surjective(channel),
        "isometry": verdict.to_json(),
    })


def _demo_damped(config):
    o = config.options
    kappa = o.get("kappa") or 1.0
    p = damped.PhasePoint(o.get("x0") or 0.0, 1.0 if o.get("v0") is None else o["v0"])
    t_max, samples = o.get("t_max") or 5.0, o.get("samples") or 51
    if not kappa > 0:
        raise InputError("kappa must be positive")
    rows = []
    for t in np.linspace(0.0, t_max, samples):
        q = damped.damped_flow(p, t, kappa)
        rows.append([t, q.position, q.velocity, abs(q.velocity), damped.motion_reversal_defect(p, t, kappa)])
    return _table(config, ["t", "position", "velocity", "speed", "reversal_defect"], rows)


def _demo_fp(config):
    o = config.options
    lower, upper = o.get("lower", -6.0), o.get("upper", 6.0)
    cells, rate = o.get("cells") or 200, o.get("rate") or 1.0
    sigma = o.get("sigma") or math.sqrt(2.0)
    x0, t_max = o.get("x0", 2.0), o.get("t_max") or 8.0
    try:
        grid = fokker_planck.DensityGrid.point_mass(lower, upper, cells, x0)
        drift = lambda x: -rate * x  # noqa: E731
        dt = o.get("dt") or 0.95 * fokker_planck.stability_bound(grid, drift, sigma)
        steps = o.get("steps") or int(math.ceil(t_max / dt))
        trace = fokker_planck.relaxation_run(grid, drift, sigma, dt, steps,
                                             sample_every=max(1, steps // (o.get("samples") or 40)),
                                             check_dominance=False)
    except fokker_planck.StabilityError as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rows = [[t, d, mu, math.fsum(s)] for t, d, mu, s in zip(trace.times, trace.distances, trace.means,
                                                           trace.snapshots)]
    return _table(config, ["t", "l1_distance", "mean", "mass"], rows)


def _demo_shift(config):
    n_max = config.options.get("n_max") or 4
    rng = np.random.default_rng(config.seed)
    support = list(range(-5, 6))
    w = rng.dirichlet(np.ones(len(support)))
    state = shift.ShiftState(dict(zip(support, w)))
    rows = []
    for n in range(n_max + 1):
        image = shift.shift_map(state, n)
        witness = "" if n == 0 else next(iter(shift.shift_surjectivity_witness(n).bins))
        rows.append([n, min(image.bins), max(image.bins), shift.sparse_norm(image.bins), witness])
    return _table(config, ["n", "support_min", "support_max", "one_norm", "witness"], rows)


HANDLERS = {
    "decompose": _decompose,
    "mixdist": _mixdist,
    "dominates": _dominates,
    "find-map": _find_map,
    "rss-sweep": _rss_sweep,
    "check-stochastic": _check_stochastic,
    "check-isometry": _check_isometry,
    "classify": _classify,
    "build-isometry": _build_isometry,
    "invert-isometry": _invert_isometry,
    "check-channel": _check_channel,
    "demo-damped": _demo_damped,
    "demo-fp": _demo_fp,
    "demo-shift": _demo_shift,
}


def run(config: RunConfig) -> tuple[int, str]:
    """Dispatch one verb; returns ``(exit_status, document)``."""
    try:
        return EXIT_OK, HANDLERS[config.verb](config)
    except transport.DimensionBoundError as exc:
        return EXIT_BOUNDS, _dump({"error": str(exc)})
    except (InputError, KeyError, TypeError, ValueError) as exc:
        return EXIT_INPUT, _dump({"error": str(exc)})
    except (EigensolverError, LPError) as exc:
        return EXIT_NUMERIC, _dump({"error": str(exc)})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", dest="input_path", help="JSON input document ('-' for stdin)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=None, help="override the verb's default tolerance")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None)

    parser = argparse.ArgumentParser(prog="mixcone", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        p = sub.add_parser(verb, parents=[common])
        if verb in ("mixdist", "dominates"):
            p.add_argument("--grid", type=int, help="sample count for quantum profiles")
        if verb == "find-map":
            p.add_argument("--exact", action="store_true", help="solve in rational arithmetic")
        if verb == "rss-sweep":
            p.add_argument("--dim", type=int)
            p.add_argument("--count", type=int)
        if verb in ("build-isometry", "invert-isometry"):
            p.add_argument("--dim-in", type=int)
            p.add_argument("--weights", help="comma-separated block weights")
            p.add_argument("--extra", type=int, help="output dimensions beyond n * dim_in")
            p.add_argument("--antilinear", help="comma-separated flags per block")
            p.add_argument("--randomize", action="store_true", help="rotate the blocks with seeded unitaries")
        if verb == "check-channel":
            p.add_argument("--samples", type=int)
        if verb == "demo-damped":
            p.add_argument("--kappa", type=float)
            p.add_argument("--x0", type=float)
            p.add_argument("--v0", type=float)
            p.add_argument("--t-max", type=float)
            p.add_argument("--samples", type=int)
        if verb == "demo-fp":
            p.add_argument("--lower", type=float, default=-6.0)
            p.add_argument("--upper", type=float, default=6.0)
            p.add_argument("--cells", type=int)
            p.add_argument("--rate", type=float, help="OU drift b(X) = -rate X")
            p.add_argument("--sigma", type=float)
            p.add_argument("--x0", type=float, default=2.0)
            p.add_argument("--dt", type=float)
            p.add_argument("--steps", type=int)
            p.add_argument("--t-max", type=float)
            p.add_argument("--samples", type=int)
        if verb == "demo-shift":
            p.add_argument("--n-max", type=int)
    return parser


CSV_VERBS = {"rss-sweep", "demo-damped", "demo-fp", "demo-shift"}


def parse_config(argv=None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    verb = ns.pop("verb")
    fmt = ns.pop("fmt") or ("csv" if verb in CSV_VERBS else "json")
    return RunConfig(verb, ns.pop("input_path"), ns.pop("seed"), ns.pop("tol"), fmt, ns)


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
    except InputError as exc:
        sys.stdout.write(_dump({"error": str(exc)}))
        return EXIT_INPUT
    status, text = run(config)
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
