"""Command-line front-end: evaluate, tandem-eval, gate, sweep, synth.

Exit codes: 0 success, 1 metric-domain error (empty class, degenerate
cost model), 2 input or parse error. Machine output (``--format csv`` or
``json``) is byte-deterministic for identical inputs and flags; JSON
renders a ``-inf`` threshold as the string ``"-inf"`` so the output stays
standard JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import IO

import numpy as np

from . import __version__
from .adcf import min_adcf, write_cost_curve_csv
from .eer import sasv_eer, spf_eer, sv_eer
from .errcurves import build_curve, format_threshold, write_curve_csv
from .errors import AdcfkitError, InputError, MetricDomainError
from .synth import ClassDistribution, DualClassDistribution, generate_dual, generate_single
from .tandem import (
    constrained_coeffs,
    gate_column,
    min_tdcf,
    tdcf_norm_grid,
    write_tdcf_grid_csv,
)
from .trialdata import (
    CostModel,
    Trial,
    TrialClass,
    partition_dual_scores,
    partition_scores,
    read_dual_scores,
    read_scores,
    read_trial_keys,
    resolve_cost_config,
    write_scores,
)

SASV_NOTICE = (
    "note: SASV-EER depends on the empirical class mix of the evaluation "
    "data; its use is discouraged in favor of SV-EER, SPF-EER, and "
    "detection costs."
)


def _json_safe(obj):
    if isinstance(obj, float):
        return "-inf" if obj == float("-inf") else obj
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _emit_json(report: dict, fh: IO[str]) -> None:
    fh.write(json.dumps(_json_safe(report), sort_keys=True, indent=2, allow_nan=False))
    fh.write("\n")


def _fmt_value(v: float) -> str:
    return repr(float(v))


def _fmt_threshold_csv(t: float) -> str:
    return format_threshold(t)


def _pct(v: float) -> str:
    # '#' keeps trailing zeros: 4 significant digits, paper-table style
    return f"{100.0 * v:#.4g}%"


def _resolve_configs(names: list[str] | None) -> list[tuple[str, CostModel]]:
    if not names:
        names = ["adcf1", "adcf2"]
    configs = [resolve_cost_config(n) for n in names]
    seen: set[str] = set()
    for name, _ in configs:
        if name in seen:
            raise InputError(f"cost config {name!r} given more than once")
        seen.add(name)
    return configs


def _load_keyed_scores(keys_path: str, scores_path: str):
    trials = read_trial_keys(keys_path)
    scores = read_scores(scores_path)
    return trials, partition_scores(trials, scores)


def _dataset_summary(trials: list[Trial]) -> dict:
    counts = {c: 0 for c in TrialClass}
    for t in trials:
        counts[t.label] += 1
    return {
        "n_target": counts[TrialClass.TARGET],
        "n_nontarget": counts[TrialClass.NONTARGET],
        "n_spoof": counts[TrialClass.SPOOF],
    }


# ---------------------------------------------------------------------------
# evaluate


def build_evaluate_report(
    keys_path: str, scores_path: str, config_names: list[str], include_sasv: bool
) -> dict:
    trials, scores = _load_keyed_scores(keys_path, scores_path)
    configs = _resolve_configs(config_names)
    report: dict = {
        "tool": "adcfkit",
        "version": __version__,
        "command": "evaluate",
        "keys": keys_path,
        "scores": scores_path,
        "dataset": _dataset_summary(trials),
        "configs": [],
        "eers": {},
    }
    for name, model in configs:
        res = min_adcf(model, scores)
        report["configs"].append(
            {
                "name": name,
                "cost_model": model.as_dict(),
                "default_cost": res.default_cost,
                "min_adcf": res.min_norm_adcf,
                "argmin_threshold": res.argmin_threshold,
            }
        )
    for key, fn in (("sv_eer", sv_eer), ("spf_eer", spf_eer)):
        r = fn(scores)
        report["eers"][key] = {"eer": r.eer, "eer_percent": f"{100.0 * r.eer:#.4g}",
                               "threshold": r.threshold}
    if include_sasv:
        r = sasv_eer(scores)
        report["eers"]["sasv_eer"] = {
            "eer": r.eer,
            "eer_percent": f"{100.0 * r.eer:#.4g}",
            "threshold": r.threshold,
            "discouraged": True,
        }
    return report


def _evaluate_table(report: dict, fh: IO[str]) -> None:
    ds = report["dataset"]
    fh.write(f"adcfkit {report['version']} evaluate\n")
    fh.write(f"keys:   {report['keys']}\n")
    fh.write(f"scores: {report['scores']}\n")
    fh.write(
        f"trials: {ds['n_target']} target, {ds['n_nontarget']} nontarget, "
        f"{ds['n_spoof']} spoof\n\n"
    )
    fh.write("config  pi_tar  pi_non  pi_spf  c_miss  c_fa_non  c_fa_spf  default\n")
    for c in report["configs"]:
        m = c["cost_model"]
        fh.write(
            f"{c['name']:<7} {m['pi_tar']:<7g} {m['pi_non']:<7g} {m['pi_spf']:<7g} "
            f"{m['c_miss']:<7g} {m['c_fa_non']:<9g} {m['c_fa_spf']:<9g} "
            f"{c['default_cost']:.4f}\n"
        )
    fh.write("\nmetric               value      threshold\n")
    for c in report["configs"]:
        label = f"min a-DCF [{c['name']}]"
        fh.write(
            f"{label:<20} {c['min_adcf']:<10.4f} "
            f"{format_threshold(c['argmin_threshold'])}\n"
        )
    labels = {"sv_eer": "SV-EER", "spf_eer": "SPF-EER", "sasv_eer": "SASV-EER"}
    for key in ("sv_eer", "spf_eer", "sasv_eer"):
        if key in report["eers"]:
            e = report["eers"][key]
            note = "  (discouraged)" if e.get("discouraged") else ""
            fh.write(f"{labels[key]:<20} {_pct(e['eer']):<10} "
                     f"{format_threshold(e['threshold'])}{note}\n")


def _evaluate_csv(report: dict, fh: IO[str]) -> None:
    fh.write("metric,value,threshold\n")
    ds = report["dataset"]
    for k in ("n_target", "n_nontarget", "n_spoof"):
        fh.write(f"{k},{ds[k]},\n")
    for c in report["configs"]:
        fh.write(f"default_cost[{c['name']}],{_fmt_value(c['default_cost'])},\n")
        fh.write(
            f"min_adcf[{c['name']}],{_fmt_value(c['min_adcf'])},"
            f"{_fmt_threshold_csv(c['argmin_threshold'])}\n"
        )
    for key in ("sv_eer", "spf_eer", "sasv_eer"):
        if key in report["eers"]:
            e = report["eers"][key]
            fh.write(f"{key},{_fmt_value(e['eer'])},{_fmt_threshold_csv(e['threshold'])}\n")


def cmd_evaluate(args: argparse.Namespace, out: IO[str]) -> int:
    report = build_evaluate_report(args.keys, args.scores, args.config, args.include_sasv_eer)
    if args.include_sasv_eer:
        print(SASV_NOTICE, file=sys.stderr)
    if args.format == "json":
        _emit_json(report, out)
    elif args.format == "csv":
        _evaluate_csv(report, out)
    else:
        _evaluate_table(report, out)
    return 0


# ---------------------------------------------------------------------------
# tandem-eval


def build_tandem_report(
    keys_path: str,
    dual_path: str,
    config_names: list[str],
    mode: str,
    frozen_t_asv: float | None,
) -> dict:
    trials = read_trial_keys(keys_path)
    dual = partition_dual_scores(trials, read_dual_scores(dual_path))
    configs = _resolve_configs(config_names)
    report: dict = {
        "tool": "adcfkit",
        "version": __version__,
        "command": "tandem-eval",
        "keys": keys_path,
        "dual_scores": dual_path,
        "dataset": _dataset_summary(trials),
        "mode": mode,
        "configs": [],
    }
    if mode == "frozen-asv":
        report["t_asv"] = frozen_t_asv
    for name, model in configs:
        res = min_tdcf(model, dual, frozen_t_asv=frozen_t_asv)
        entry = {
            "name": name,
            "cost_model": model.as_dict(),
            "default_cost": res.default_cost,
            "min_tdcf": res.min_norm_tdcf,
            "argmin": {"t_asv": res.t_asv, "t_cm": res.t_cm},
        }
        if frozen_t_asv is not None:
            # marginal ASV rates at the frozen threshold
            n_tar, n_non, n_spf = dual.counts
            rates = (
                int(np.count_nonzero(dual.tar.asv < frozen_t_asv)) / n_tar,
                int(np.count_nonzero(dual.non.asv >= frozen_t_asv)) / n_non,
                int(np.count_nonzero(dual.spf.asv >= frozen_t_asv)) / n_spf,
            )
            c = constrained_coeffs(model, rates)
            entry["frozen_asv_rates"] = {
                "p_miss_asv": rates[0],
                "p_fa_non_asv": rates[1],
                "p_fa_spf_asv": rates[2],
            }
            entry["constrained_coeffs"] = {"c0": c.c0, "c1": c.c1, "c2": c.c2}
        report["configs"].append(entry)
    return report


def _tandem_table(report: dict, fh: IO[str]) -> None:
    ds = report["dataset"]
    fh.write(f"adcfkit {report['version']} tandem-eval ({report['mode']})\n")
    fh.write(f"keys:        {report['keys']}\n")
    fh.write(f"dual scores: {report['dual_scores']}\n")
    fh.write(
        f"trials: {ds['n_target']} target, {ds['n_nontarget']} nontarget, "
        f"{ds['n_spoof']} spoof\n\n"
    )
    fh.write("config   min t-DCF  t_asv        t_cm\n")
    for c in report["configs"]:
        fh.write(
            f"{c['name']:<8} {c['min_tdcf']:<10.4f} "
            f"{format_threshold(c['argmin']['t_asv']):<12} "
            f"{format_threshold(c['argmin']['t_cm'])}\n"
        )
    for c in report["configs"]:
        if "constrained_coeffs" in c:
            k = c["constrained_coeffs"]
            fh.write(
                f"\nconstrained coefficients [{c['name']}]: "
                f"c0={k['c0']:.6g} c1={k['c1']:.6g} c2={k['c2']:.6g}\n"
            )


def _tandem_csv(report: dict, fh: IO[str]) -> None:
    fh.write("metric,value,t_asv,t_cm\n")
    ds = report["dataset"]
    for k in ("n_target", "n_nontarget", "n_spoof"):
        fh.write(f"{k},{ds[k]},,\n")
    for c in report["configs"]:
        fh.write(
            f"min_tdcf[{c['name']}],{_fmt_value(c['min_tdcf'])},"
            f"{_fmt_threshold_csv(c['argmin']['t_asv'])},"
            f"{_fmt_threshold_csv(c['argmin']['t_cm'])}\n"
        )
        if "constrained_coeffs" in c:
            k = c["constrained_coeffs"]
            for coeff in ("c0", "c1", "c2"):
                fh.write(f"{coeff}[{c['name']}],{_fmt_value(k[coeff])},,\n")
    return None


def cmd_tandem_eval(args: argparse.Namespace, out: IO[str]) -> int:
    frozen = args.t_asv if args.mode == "frozen-asv" else None
    if args.mode == "frozen-asv" and args.t_asv is None:
        raise InputError("--t-asv is required with --mode frozen-asv")
    report = build_tandem_report(args.keys, args.dual_scores, args.config, args.mode, frozen)
    if args.curve_out:
        trials = read_trial_keys(args.keys)
        dual = partition_dual_scores(trials, read_dual_scores(args.dual_scores))
        _, model = _resolve_configs(args.config)[0]
        asv_ts, cm_ts, grid = tdcf_norm_grid(model, dual, frozen_t_asv=frozen)
        with open(args.curve_out, "w", encoding="utf-8") as fh:
            write_tdcf_grid_csv(asv_ts, cm_ts, grid, fh)
    if args.format == "json":
        _emit_json(report, out)
    elif args.format == "csv":
        _tandem_csv(report, out)
    else:
        _tandem_table(report, out)
    return 0


# ---------------------------------------------------------------------------
# gate


def cmd_gate(args: argparse.Namespace, out: IO[str]) -> int:
    rows = read_dual_scores(args.dual_scores)  # insertion-ordered
    order = args.order.replace("-", "_")
    ids = list(rows.keys())
    asv = np.array([rows[i][0] for i in ids], dtype=np.float64)
    cm = np.array([rows[i][1] for i in ids], dtype=np.float64)
    gated = gate_column(asv, cm, order, args.t_gate)
    write_scores(args.out, zip(ids, gated.tolist()))
    print(f"wrote {len(ids)} gated scores to {args.out}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# sweep


def cmd_sweep(args: argparse.Namespace, out: IO[str]) -> int:
    trials, scores = _load_keyed_scores(args.keys, args.scores)
    _, model = _resolve_configs([args.config])[0]
    curve = build_curve(scores)
    res = min_adcf(model, scores, keep_curve=True)
    rates_path = f"{args.out}_rates.csv"
    cost_path = f"{args.out}_cost.csv"
    with open(rates_path, "w", encoding="utf-8") as fh:
        write_curve_csv(curve, fh)
    with open(cost_path, "w", encoding="utf-8") as fh:
        write_cost_curve_csv(res.curve, fh)
    print(f"wrote {rates_path} and {cost_path}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# synth


def _parse_single_dist(token: str, flag: str) -> ClassDistribution:
    parts = token.split(",")
    if len(parts) != 3:
        raise InputError(f"{flag} expects 'mean,stddev,count', got {token!r}")
    try:
        return ClassDistribution(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError:
        raise InputError(f"{flag}: cannot parse {token!r}") from None


def _parse_dual_dist(token: str, flag: str) -> DualClassDistribution:
    parts = token.split(",")
    if len(parts) not in (5, 6):
        raise InputError(
            f"{flag} expects 'asv_mean,asv_stddev,cm_mean,cm_stddev,count[,rho]', got {token!r}"
        )
    try:
        rho = float(parts[5]) if len(parts) == 6 else 0.0
        return DualClassDistribution(
            float(parts[0]), float(parts[1]), float(parts[2]), float(parts[3]),
            int(parts[4]), rho,
        )
    except ValueError:
        raise InputError(f"{flag}: cannot parse {token!r}") from None


def cmd_synth(args: argparse.Namespace, out: IO[str]) -> int:
    keys_path = f"{args.out_prefix}.keys"
    if args.dual:
        dists = [_parse_dual_dist(t, f) for t, f in
                 ((args.tar, "--tar"), (args.non, "--non"), (args.spf, "--spf"))]
        d = generate_dual(args.seed, *dists)
        scores_path = f"{args.out_prefix}.dualscores"
        with open(keys_path, "w", encoding="utf-8") as kf, \
                open(scores_path, "w", encoding="utf-8") as sf:
            i = 0
            for label, pair in (("target", d.tar), ("nontarget", d.non), ("spoof", d.spf)):
                for a, c in zip(pair.asv.tolist(), pair.cm.tolist()):
                    i += 1
                    tid = f"t{i:06d}"
                    kf.write(f"{tid} {label}\n")
                    sf.write(f"{tid} {repr(a)} {repr(c)}\n")
    else:
        dists = [_parse_single_dist(t, f) for t, f in
                 ((args.tar, "--tar"), (args.non, "--non"), (args.spf, "--spf"))]
        s = generate_single(args.seed, *dists)
        scores_path = f"{args.out_prefix}.scores"
        with open(keys_path, "w", encoding="utf-8") as kf, \
                open(scores_path, "w", encoding="utf-8") as sf:
            i = 0
            for label, col in (("target", s.tar), ("nontarget", s.non), ("spoof", s.spf)):
                for v in col.tolist():
                    i += 1
                    tid = f"t{i:06d}"
                    kf.write(f"{tid} {label}\n")
                    sf.write(f"{tid} {repr(v)}\n")
    print(f"wrote {keys_path} and {scores_path}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "csv", "json"), default="table",
                   help="output format (default: table)")
    p.add_argument("--out", default=None, help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adcfkit",
        description="Detection-cost and EER metrics for spoofing-robust "
                    "speaker verification scoring.",
    )
    parser.add_argument("--version", action="version", version=f"adcfkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="single-score metrics from a key and score file")
    p.add_argument("--keys", required=True, help="trial key file")
    p.add_argument("--scores", required=True, help="single-score file")
    p.add_argument("--config", action="append", default=None, metavar="NAME_OR_PATH",
                   help="cost config preset name or file (repeatable; "
                        "default: adcf1 adcf2)")
    p.add_argument("--include-sasv-eer", action="store_true",
                   help="also report the discouraged pooled-negatives EER")
    _add_common_output(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("tandem-eval", help="tandem t-DCF metrics from a dual-score file")
    p.add_argument("--keys", required=True)
    p.add_argument("--dual-scores", required=True, help="dual-score file (asv, cm columns)")
    p.add_argument("--config", action="append", default=None, metavar="NAME_OR_PATH")
    p.add_argument("--mode", choices=("grid", "frozen-asv"), default="grid",
                   help="minimize over the full threshold grid or with a frozen "
                        "ASV threshold")
    p.add_argument("--t-asv", type=float, default=None,
                   help="frozen ASV threshold (required with --mode frozen-asv)")
    p.add_argument("--curve-out", default=None,
                   help="write the normalized-cost grid CSV for the first config here")
    _add_common_output(p)
    p.set_defaults(func=cmd_tandem_eval)

    p = sub.add_parser("gate", help="collapse a dual-score file into a gated score file")
    p.add_argument("--dual-scores", required=True)
    p.add_argument("--order", choices=("cm-first", "asv-first"), required=True)
    p.add_argument("--t-gate", type=float, required=True,
                   help="gating threshold ('-inf' passes everything through)")
    p.add_argument("--out", required=True, help="output single-score file")
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("sweep", help="export rate and cost curves as CSV")
    p.add_argument("--keys", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--config", default="adcf1", metavar="NAME_OR_PATH")
    p.add_argument("--out", required=True, metavar="PREFIX",
                   help="output prefix; writes PREFIX_rates.csv and PREFIX_cost.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="generate seeded synthetic key/score files")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--dual", action="store_true", help="generate paired (asv, cm) scores")
    p.add_argument("--tar", required=True, help="'mean,stddev,count' "
                   "(dual: 'asv_mean,asv_stddev,cm_mean,cm_stddev,count[,rho]')")
    p.add_argument("--non", required=True)
    p.add_argument("--spf", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        # gate/sweep handle --out themselves (score file / CSV prefix)
        if getattr(args, "out", None) and args.command in ("evaluate", "tandem-eval"):
            with open(args.out, "w", encoding="utf-8") as fh:
                return args.func(args, fh)
        return args.func(args, sys.stdout)
    except MetricDomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (InputError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except AdcfkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
