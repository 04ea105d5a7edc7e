"""Command-line interface: plan design, intervals, curves, simulation, service.

Exit codes: 0 success, 1 runtime failure, 2 invalid input or infeasible plan.
All output is deterministic for identical inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import __version__
from .datasets import get as get_dataset, registry as dataset_registry
from .design import DEFAULT_C2_MAX, design_double, design_sequential, design_single
from .evaluate import asn, curve, oc, write_curve_csv
from .intervals import exact_interval, margin_of_error, required_sample_size
from .models import (
    ConfigError,
    DefectHypothesis,
    DomainError,
    InfeasiblePlanError,
    PopulationModel,
    PRESETS,
    QualityConfig,
)
from .plans import dump_plan, load_plan
from .simulate import simulate

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INVALID = 2


def _model_from_args(args) -> PopulationModel:
    if getattr(args, "with_replacement", False):
        return PopulationModel.with_replacement()
    if args.lot_size is None:
        raise ConfigError("--lot-size is required unless --with-replacement is set")
    return PopulationModel.without_replacement(args.lot_size)


def _config_from_args(args) -> QualityConfig:
    base = PRESETS.get(args.preset) if args.preset else None
    fields = {}
    for name, flag in [
        ("acceptable_rate", "pa"),
        ("rejectable_rate", "pr"),
        ("producer_risk", "alpha"),
        ("consumer_risk", "beta"),
        ("ci_half_width", "half_width"),
    ]:
        v = getattr(args, flag, None)
        if v is not None:
            fields[name] = v
    if base is not None:
        merged = {**base.to_dict(), **fields}
        return QualityConfig(**merged)
    required = {"acceptable_rate", "rejectable_rate", "producer_risk", "consumer_risk"}
    missing = sorted(required - set(fields))
    if missing:
        raise ConfigError(f"missing {missing}; pass --preset or the individual flags")
    return QualityConfig(**fields)


def _emit(doc: dict, args):
    if getattr(args, "format", "table") == "json":
        text = json.dumps(doc, indent=2, sort_keys=True)
    else:
        lines = []
        for key, value in doc.items():
            if isinstance(value, float):
                value = f"{value:.6g}"
            lines.append(f"{key:>24}: {value}")
        text = "\n".join(lines)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_plan(args) -> int:
    config = _config_from_args(args)
    model = _model_from_args(args)
    if args.kind == "single":
        plan = design_single(config, model)
    elif args.kind == "double":
        plan = design_double(config, model, c2_max=args.c2_max)
        if args.curtailed:
            plan = replace(plan, curtailed=True)
    else:
        plan = design_sequential(config, model, curtailment=args.curtailment)
    ha, hr = config.hypotheses(model)
    doc = plan.to_dict()
    doc["evaluation"] = {
        "oc_at_acceptable": oc(plan, ha),
        "oc_at_rejectable": oc(plan, hr),
        "asn_at_acceptable": asn(plan, ha),
        "asn_at_rejectable": asn(plan, hr),
    }
    if args.plan_file:
        dump_plan(plan, args.plan_file)
    _emit(doc, args)
    return EXIT_OK


def cmd_ci(args) -> int:
    model = _model_from_args(args)
    interval = exact_interval(model, args.n, args.k, args.alpha)
    _emit(interval.to_dict(), args)
    return EXIT_OK


def cmd_samplesize(args) -> int:
    model = _model_from_args(args)
    n = required_sample_size(model, args.rate, args.half_width, args.alpha)
    _emit(
        {
            "sample_size": n,
            "assumed_rate": args.rate,
            "half_width": args.half_width,
            "alpha": args.alpha,
            "full_inspection": bool(model.finite and n == model.lot_size),
        },
        args,
    )
    return EXIT_OK


def _sweep(model: PopulationModel, spec: str | None, points: int):
    if model.finite:
        N = model.lot_size
        if spec:
            lo, hi = (int(x) for x in spec.split(":"))
        else:
            lo, hi = 0, N
        step = max(1, (hi - lo) // max(1, points - 1))
        return list(range(lo, hi + 1, step))
    if spec:
        lo, hi = (float(x) for x in spec.split(":"))
    else:
        lo, hi = 0.0, 0.2
    return [lo + (hi - lo) * i / (points - 1) for i in range(points)]


def cmd_curve(args) -> int:
    model = _model_from_args(args)
    if args.metric == "moe":
        alpha = args.alpha if args.alpha is not None else 0.05
        rate = args.rate if args.rate is not None else 0.05
        rows = []
        n_max = args.n_max or (model.lot_size if model.finite else 1000)
        if model.finite:
            n_max = min(n_max, model.lot_size)
        for n in range(max(1, args.n_min), n_max + 1, max(1, args.n_step)):
            rows.append((n, margin_of_error(model, n, rate, alpha)))
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("n,margin_of_error\n")
            for n, m in rows:
                fh.write(f"{n},{m:.10g}\n")
        print(f"wrote {len(rows)} rows to {args.out}")
        return EXIT_OK

    config = _config_from_args(args)
    if args.plan_kind == "single":
        plan = design_single(config, model)
    elif args.plan_kind == "double":
        plan = design_double(config, model)
    else:
        plan = design_sequential(config, model, curtailment=args.curtailment)
    sweep = _sweep(model, args.sweep, args.points)
    points = curve(plan, args.metric, sweep)
    if args.compare_with_replacement:
        points += curve(plan, args.metric, [d / model.lot_size for d in sweep],
                        model=PopulationModel.with_replacement())
    write_curve_csv(points, args.out)
    print(f"wrote {len(points)} rows to {args.out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.plan_file:
        plan = load_plan(args.plan_file)
    else:
        config = _config_from_args(args)
        if args.dataset:
            ds = get_dataset(args.dataset)
            model = PopulationModel.without_replacement(ds.lot_size)
        else:
            model = _model_from_args(args)
        if args.kind == "single":
            plan = design_single(config, model)
        elif args.kind == "double":
            plan = design_double(config, model)
            if args.curtailed:
                plan = replace(plan, curtailed=True)
        else:
            plan = design_sequential(config, model, curtailment=args.curtailment)
    if args.dataset:
        ds = get_dataset(args.dataset)
        defects = ds.defect_count
    elif args.defects is not None:
        defects = args.defects
    else:
        raise ConfigError("need --dataset or --defects")
    report = simulate(plan, defects, repetitions=args.reps, seed=args.seed)
    doc = report.to_dict()
    doc["plan"] = plan.to_dict()
    _emit(doc, args)
    return EXIT_OK


def cmd_datasets(args) -> int:
    doc = {
        name: {
            "lot_size": ds.lot_size,
            "defect_count": ds.defect_count,
            "defect_rate": round(ds.defect_rate, 6),
        }
        for name, ds in sorted(dataset_registry().items())
    }
    _emit(doc, args)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .service import serve

    plan = load_plan(args.plan_file) if args.plan_file else None
    serve(args.storage_dir, host=args.host, port=args.port, initial_plan=plan)
    return EXIT_OK


def _add_model_flags(p):
    p.add_argument("--lot-size", type=int, default=None, help="lot size N (finite lot)")
    p.add_argument(
        "--with-replacement",
        action="store_true",
        help="use the with-replacement (binomial) approximation",
    )


def _add_config_flags(p, half_width=False):
    p.add_argument("--preset", choices=sorted(PRESETS), default=None)
    p.add_argument("--pa", type=float, default=None, help="acceptable defect rate")
    p.add_argument("--pr", type=float, default=None, help="rejectable defect rate")
    p.add_argument("--alpha", type=float, default=None, help="producer risk")
    p.add_argument("--beta", type=float, default=None, help="consumer risk")
    if half_width:
        p.add_argument("--half-width", dest="half_width", type=float, default=None)


def _add_output_flags(p):
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--out", default=None, help="write the report to a file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lotqc",
        description="Statistical quality control for annotated datasets.",
    )
    ap.add_argument("--version", action="version", version=f"lotqc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="design an acceptance-sampling plan")
    p.add_argument("kind", choices=["single", "double", "sequential"])
    _add_config_flags(p)
    _add_model_flags(p)
    p.add_argument("--c2-max", type=int, default=DEFAULT_C2_MAX)
    p.add_argument("--curtailed", action="store_true", help="mark the double plan curtailed")
    p.add_argument("--curtailment", choices=["none", "wedge"], default="none")
    p.add_argument("--plan-file", default=None, help="also write the plan JSON here")
    _add_output_flags(p)
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("ci", help="exact interval for an observed defect count")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    _add_model_flags(p)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_ci)

    p = sub.add_parser("samplesize", help="minimal sample size for a target margin")
    p.add_argument("--rate", type=float, required=True, help="assumed defect rate")
    p.add_argument("--half-width", dest="half_width", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    _add_model_flags(p)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_samplesize)

    p = sub.add_parser("curve", help="export OC/ASN/margin curves as CSV")
    p.add_argument("--metric", choices=["oc", "asn", "moe"], required=True)
    p.add_argument("--plan-kind", choices=["single", "double", "sequential"], default="single")
    _add_config_flags(p)
    _add_model_flags(p)
    p.add_argument("--curtailment", choices=["none", "wedge"], default="none")
    p.add_argument("--sweep", default=None, help="lo:hi defect counts (or rates)")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--rate", type=float, default=None, help="assumed rate for moe curves")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument(
        "--compare-with-replacement",
        action="store_true",
        help="append the same sweep evaluated under the binomial approximation",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_curve)

    p = sub.add_parser("simulate", help="replay a plan against a lot with known defects")
    p.add_argument("--plan-file", default=None, help="evaluate a saved plan JSON")
    p.add_argument("--kind", choices=["single", "double", "sequential"], default="single")
    _add_config_flags(p)
    _add_model_flags(p)
    p.add_argument("--curtailed", action="store_true")
    p.add_argument("--curtailment", choices=["none", "wedge"], default="none")
    p.add_argument("--dataset", default=None, help="bundled dataset name")
    p.add_argument("--defects", type=int, default=None, help="true defect count")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_output_flags(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("datasets", help="list bundled dataset descriptors")
    _add_output_flags(p)
    p.set_defaults(fn=cmd_datasets)

    p = sub.add_parser("serve", help="run the live inspection session service")
    p.add_argument("--plan-file", default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--storage-dir", default=None, help="defaults to $LOTQC_STORAGE_DIR")
    p.set_defaults(fn=cmd_serve)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasiblePlanError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
