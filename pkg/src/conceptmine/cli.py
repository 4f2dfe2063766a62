"""Command-line interface.

Subcommands: ``mine`` (context -> lattice JSON), ``index`` (context ->
per-concept index CSV), ``correlate`` / ``approx`` / ``noise`` (the three
study pipelines, CSV out), ``gen`` (random context), ``demo`` (bundled
contexts ``fig2`` / ``table1``).

Exit codes: 0 success, 2 usage or parse problem, 3 concept budget
exceeded, 4 internal invariant violation.  Outputs are written atomically
(temp file + rename) and are byte-identical across reruns with the same
flags and seed.  The environment variable ``CG_BUDGET`` overrides the
default concept budget; an explicit ``--budget`` flag wins over both.
"""

import argparse
import os
import sys
import tempfile

from .errors import BudgetExceededError, ParseError
from .formats import FORMATS, read_context, write_context
from .indices import KINDS, IndexSpec, compute_index_table
from .lattice import enumerate_concepts
from . import experiments, fixtures
from .context import RandomContextSpec, generate_random_context

#: default column set for the pairwise-correlation study
DEFAULT_CORRELATION_INDICES = (
    "stability",
    "delta_l",
    "delta_h",
    "stab2noe",
    "stab2oe",
    "stab2oie",
    "robustness:alpha=0.1",
    "robustness:alpha=0.3",
    "robustness:alpha=0.5",
    "robustness:alpha=0.8",
    "concept_probability",
    "separation",
    "support",
    "margin_closed_relaxed",
    "similarity:neighbor_aggregation=average,object_aggregation=average,similarity=smc",
    "similarity:neighbor_aggregation=average,object_aggregation=minimum,similarity=smc",
    "similarity:neighbor_aggregation=minimum,object_aggregation=average,similarity=smc",
    "similarity:neighbor_aggregation=minimum,object_aggregation=minimum,similarity=smc",
    "similarity:neighbor_aggregation=average,object_aggregation=average,similarity=jaccard",
    "similarity:neighbor_aggregation=average,object_aggregation=minimum,similarity=jaccard",
    "similarity:neighbor_aggregation=minimum,object_aggregation=average,similarity=jaccard",
    "similarity:neighbor_aggregation=minimum,object_aggregation=minimum,similarity=jaccard",
    "predictability",
    "cv",
    "cfc",
    "cu",
)

DEFAULT_NOISE_INDICES = (
    "robustness:alpha=0.3",
    "robustness:alpha=0.5",
    "robustness:alpha=0.8",
    "similarity:similarity=smc",
    "similarity:similarity=jaccard",
    "predictability",
    "cv",
    "cfc",
    "cu",
    "separation",
    "support",
    "stability",
)


def parse_index_list(text):
    """Split a comma-separated index list, keeping parameters attached.

    A comma starts a new spec only when the token's head names an index
    kind; otherwise it continues the parameters of the previous spec, so
    "stability:samples=100,seed=7,support" parses as two specs.
    """
    specs = []
    current = None
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        head = token.split(":", 1)[0]
        starts_spec = head in KINDS and (token == head or ":" in token)
        if starts_spec:
            if current is not None:
                specs.append(IndexSpec.parse(current))
            current = token
        else:
            if current is None or "=" not in token:
                raise ValueError(
                    f"unknown index kind {token.split('=', 1)[0]!r}; "
                    f"valid kinds: {', '.join(sorted(KINDS))}"
                )
            current += "," + token
    if current is not None:
        specs.append(IndexSpec.parse(current))
    if not specs:
        raise ValueError("empty index list")
    return specs


def _parse_range(text):
    lo, _, hi = text.partition(":")
    return (int(lo), int(hi if hi else lo))


def _parse_floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _write_atomic(path, data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if path is None:
        sys.stdout.buffer.write(data)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".conceptmine-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _info(args, message):
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def _load_context(args):
    return read_context(args.input, args.format)


def _budget(args):
    return args.budget  # None falls through to CG_BUDGET / default


def cmd_mine(args):
    ctx = _load_context(args)
    lat = enumerate_concepts(ctx, min_support=args.min_support, budget=_budget(args))
    _write_atomic(args.out, lat.to_json())
    _info(args, f"mined {len(lat)} concepts from {ctx.n_objects}x{ctx.n_attributes} context")
    return 0


def cmd_index(args):
    ctx = _load_context(args)
    specs = parse_index_list(args.indices)
    lat = enumerate_concepts(ctx, min_support=args.min_support, budget=_budget(args))
    table = compute_index_table(lat, specs)
    _write_atomic(args.out, table.to_csv())
    _info(args, f"computed {len(table.names)} index columns over {len(lat)} concepts")
    return 0


def cmd_correlate(args):
    spec = experiments.CorrelationStudySpec(
        densities=_parse_floats(args.densities),
        contexts_per_density=args.contexts,
        object_range=_parse_range(args.objects),
        attribute_range=_parse_range(args.attributes),
        indices=parse_index_list(args.indices),
        seed=args.seed,
        budget=_budget(args),
    )
    result = experiments.run_correlation_study(spec)
    _write_atomic(args.out, result.to_csv())
    _info(
        args,
        f"correlation study over {sum(result.n_contexts[k] for k in result.n_contexts if k != 'overall')}"
        f" contexts; regenerated {result.regenerated}, degenerate pairs {result.degenerate_pairs}",
    )
    return 0


def cmd_approx(args):
    spec = experiments.ApproxStudySpec(
        densities=_parse_floats(args.densities),
        rates=_parse_floats(args.rates),
        contexts_per_density=args.contexts,
        object_range=_parse_range(args.objects),
        attribute_range=_parse_range(args.attributes),
        seed=args.seed,
        budget=_budget(args),
    )
    result = experiments.run_approx_study(spec)
    _write_atomic(args.out, result.to_csv())
    _info(args, f"approximation study: {len(result.rows)} (density, rate) cells")
    return 0


def cmd_noise(args):
    ctx = _load_context(args)
    spec = experiments.NoiseStudySpec(
        base_context=ctx,
        noise_rates=_parse_floats(args.rates),
        trials_per_rate=args.trials,
        indices=parse_index_list(args.indices),
        seed=args.seed,
        match=args.match,
        budget=_budget(args),
    )
    result = experiments.run_noise_study(spec)
    _write_atomic(args.out, result.to_csv())
    _info(args, f"noise study: {len(result.rows)} rows, dropped trials {result.dropped_trials}")
    return 0


def cmd_gen(args):
    spec = RandomContextSpec(args.objects, args.attributes, args.density, args.seed)
    ctx = generate_random_context(spec)
    _write_atomic(args.out, write_context(ctx, args.format))
    _info(args, f"generated {ctx.n_objects}x{ctx.n_attributes} context, density {ctx.density():.3f}")
    return 0


def cmd_demo(args):
    ctx = fixtures.DEMO_CONTEXTS[args.which]()
    _write_atomic(args.out, write_context(ctx, args.format))
    _info(args, f"wrote bundled context {args.which} ({ctx.n_objects}x{ctx.n_attributes})")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="conceptmine",
        description="Concept lattice mining, interestingness indices, and evaluation studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default=None, help="output path (stdout when omitted)")
        p.add_argument("--quiet", action="store_true", help="suppress the summary line")
        p.add_argument("--budget", type=int, default=None, help="concept-count budget override")

    p = sub.add_parser("mine", help="enumerate concepts to a lattice JSON dump")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=FORMATS, default="cxt")
    p.add_argument("--min-support", type=int, default=0, dest="min_support")
    add_common(p)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("index", help="compute per-concept index columns to CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=FORMATS, default="cxt")
    p.add_argument("--indices", required=True, help='e.g. "support,stability,robustness:alpha=0.3"')
    p.add_argument("--min-support", type=int, default=0, dest="min_support")
    add_common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("correlate", help="pairwise rank-correlation study on random contexts")
    p.add_argument("--densities", default="0.1,0.2,0.3,0.4")
    p.add_argument("--contexts", type=int, default=100, help="contexts per density group")
    p.add_argument("--objects", default="40:80", help="inclusive range LO:HI")
    p.add_argument("--attributes", default="10:50", help="inclusive range LO:HI")
    p.add_argument("--indices", default=",".join(DEFAULT_CORRELATION_INDICES))
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("approx", help="stability-approximation regression study")
    p.add_argument("--densities", default="0.2,0.3")
    p.add_argument("--rates", default=",".join(str(round(0.05 * k, 2)) for k in range(1, 20)))
    p.add_argument("--contexts", type=int, default=10, help="contexts per density group")
    p.add_argument("--objects", default="40:80")
    p.add_argument("--attributes", default="10:50")
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("noise", help="noise-filtering AUC study on a base context")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=FORMATS, default="cxt")
    p.add_argument("--rates", default="0.01,0.03,0.05,0.1")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--indices", default=",".join(DEFAULT_NOISE_INDICES))
    p.add_argument("--match", choices=("intent", "extent", "both"), default="intent")
    p.add_argument("--seed", type=int, default=0)
    add_common(p)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("gen", help="generate a random context file")
    p.add_argument("--objects", type=int, required=True)
    p.add_argument("--attributes", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=FORMATS, default="cxt")
    add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("demo", help="emit a bundled demo context")
    p.add_argument("--which", choices=sorted(fixtures.DEMO_CONTEXTS), required=True)
    p.add_argument("--format", choices=FORMATS, default="cxt")
    add_common(p)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValueError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - invariant violations
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
