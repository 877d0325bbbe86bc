"""Command-line interface: every library pipeline as a subcommand with a
flat dotted-key configuration.

Configuration precedence: built-in defaults, then a --config JSON file of
flat dotted keys, then individual --<dotted.key> flags. Reports go to
out.json / out.csv with all floats at 12 significant digits; reruns with the
same config are byte-identical (timings are zeroed unless emit_timings).

Exit codes: 0 all checks passed, 1 a verification failed (first failure is
printed), 2 invalid configuration, 3 a search or oracle guard tripped,
4 an output path cannot be written.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from math import inf

from . import io as iomod
from . import tree
from .averages import DescendantSumTable, equivalence_constant, maximal_field, spherical_average
from .bounds import (
    LevelSetInstance,
    certified_bilinear_constant,
    chain_verify,
    interaction_min_sum,
    level_set_bound_verify,
    operator_norm_scan,
    radius_series_window,
    two_weight_level_set_report,
)
from .errors import ConfigError, DomainError, GuardLimitError, OutOfTreeError, RegionError
from .exponents import derived_exponents
from .functions import TreeFunction, Weight, lp_norm, map_lp_norm, random_function, random_set
from .tree import TreeParams
from .weight_class import (
    CSV_HEADER as SEARCH_CSV_HEADER,
    certify_radial_weight,
    search_constants,
    window_agreement,
)

PAIR_CSV_HEADER = ["instance_id", "step", "lhs", "rhs", "slack", "pass"]
EQ_TOL = 1e-12


@dataclass(frozen=True)
class Field:
    name: str
    kind: str  # int | float | bool | str
    default: object
    help: str
    choices: tuple = ()


COMMON_FIELDS = [
    Field("k", "int", 2, "branching number of the tree (>= 2)"),
    Field("support_depth", "int", 3, "deepest level carrying function support"),
    Field("eval_depth", "int", 4, "deepest level of the evaluation region"),
    Field("p", "float", 2.0, "input integrability exponent, 1 < p < 1/alpha"),
    Field("alpha", "float", 0.25, "fractional order, 0 < alpha < 1"),
    Field("mode", "str", "sobolev", "target exponent mode", ("sobolev", "free")),
    Field("q", "float", 0.0, "target exponent (free mode only; 0 = unset)"),
    Field("seed", "int", 0, "base seed for every random draw"),
    Field("threads", "int", 1, "worker threads for field evaluation"),
    Field("emit_timings", "bool", False, "report real milliseconds instead of 0"),
    Field("radii", "str", "0,1,2,3,4", "comma-separated radii to process"),
    Field("out.csv", "str", "", "CSV output path (empty = no CSV)"),
    Field("out.json", "str", "", "JSON output path (empty = no JSON)"),
    Field("weight.kind", "str", "radial", "weight family", ("radial", "tabulated")),
    Field("weight.beta", "float", 0.0, "radial growth rate: w = k^(beta depth)"),
    Field("weight.table", "str", "", "JSON file with a tabulated weight"),
    Field("function.kind", "str", "random", "test function source", ("random", "file", "zero")),
    Field("function.density", "float", 0.5, "support density for random functions"),
    Field("function.vmax", "float", 1.0, "value-range top for random functions (power of two)"),
    Field("function.path", "str", "", "JSON file with an explicit function"),
]

SUB_FIELDS = {
    "geometry": [
        Field("geometry.max_j", "int", 6, "deepest center level to verify"),
        Field("geometry.max_r", "int", 8, "largest radius to verify"),
    ],
    "maxfn": [
        Field("maxfn.operator", "str", "both", "which maximal operator to evaluate",
              ("sphere", "ball", "both")),
    ],
    "zconst": [
        Field("zconst.method", "str", "both", "search method",
              ("exhaustive", "heuristic", "both")),
        Field("zconst.region_depth", "int", 2, "depth of the search region"),
        Field("zconst.starts", "int", 8, "random restarts for the heuristic"),
        Field("zconst.anneal_steps", "int", 200, "annealing steps for the heuristic"),
    ],
    "certify": [
        Field("certify.max_j", "int", 12, "center-level range of the counting scan"),
        Field("certify.max_r", "int", 12, "radius range of the counting scan"),
        Field("certify.grid_points", "int", 100, "window-agreement grid resolution"),
    ],
    "lemma": [
        Field("lemma.dyadic_beta", "float", 0.4, "dyadic shell exponent in (0, 1)"),
        Field("lemma.lambda_quantiles", "str", "0.25,0.5,0.9",
              "quantiles of positive averages used as thresholds"),
        Field("lemma.include_max_lambda", "bool", True,
              "also test at the maximal average value"),
        Field("lemma.c_w", "float", 0.0,
              "bilinear constant to use (0 = derive certified value)"),
        Field("lemma.restrict", "str", "region", "superlevel-set domain",
              ("region", "support_neighborhood")),
        Field("lemma.seeds", "int", 2, "number of random functions to test"),
    ],
    "chain": [
        Field("chain.instances", "int", 20, "random set pairs to verify"),
        Field("chain.density", "float", 0.4, "density of the random set pairs"),
        Field("chain.series_beta", "float", 0.4,
              "dyadic shell exponent for the radius-series report"),
    ],
    "scan": [
        Field("scan.family", "str", "deltas", "input family for the norm scan",
              ("deltas", "level-indicators", "sphere-indicators", "random")),
        Field("scan.depths", "str", "4,6,8", "comma-separated truncation depths"),
    ],
    "twoweight": [
        Field("vweight.kind", "str", "same", "center-side weight family",
              ("same", "radial", "tabulated")),
        Field("vweight.beta", "float", 0.0, "center-side radial growth rate"),
        Field("vweight.table", "str", "", "JSON file with a tabulated center-side weight"),
        Field("twoweight.dyadic_beta", "float", 0.4, "dyadic shell exponent in (0, 1)"),
        Field("twoweight.lambda_quantiles", "str", "0.25,0.5,0.9",
              "quantiles of positive averages used as thresholds"),
        Field("twoweight.include_max_lambda", "bool", True,
              "also test at the maximal average value"),
    ],
}

COMMAND_HELP = {
    "geometry": "verify sphere/ball counting formulas against a BFS oracle",
    "maxfn": "evaluate the fractional maximal operators and their norms",
    "zconst": "search for best constants in the weighted bilinear ratio",
    "certify": "certify a power weight through the per-level counting condition",
    "lemma": "verify the weighted level-set bound on random instances",
    "chain": "verify every link of the certified constant chain",
    "scan": "track operator norms across deepening truncations",
    "twoweight": "two-weight level-set check with a measured constant",
}


def _parse_bool(raw, name):
    if isinstance(raw, bool):
        return raw
    if isinstance(raw, str) and raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    raise ConfigError(f"field {name!r} expects true or false, got {raw!r}")


def _coerce(field, raw):
    try:
        if field.kind == "bool":
            val = _parse_bool(raw, field.name)
        elif field.kind == "int":
            if isinstance(raw, bool) or (isinstance(raw, float) and raw != int(raw)):
                raise ValueError(raw)
            val = int(raw)
        elif field.kind == "float":
            if isinstance(raw, bool):
                raise ValueError(raw)
            val = float(raw)
        else:
            val = str(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"field {field.name!r} expects {field.kind}, got {raw!r}") from None
    if field.choices and val not in field.choices:
        raise ConfigError(
            f"field {field.name!r} must be one of {', '.join(field.choices)}, got {val!r}"
        )
    return val


def _dest(name):
    return "opt_" + name.replace(".", "__")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="treemax",
        description="fractional maximal operators on the rooted k-ary tree, "
        "with certified weighted bounds",
    )
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    for name in SUB_FIELDS:
        sp = sub.add_parser(name, help=COMMAND_HELP[name])
        sp.add_argument("--config", default=None, metavar="PATH",
                        help="flat dotted-key JSON config file")
        for field in COMMON_FIELDS + SUB_FIELDS[name]:
            sp.add_argument(
                "--" + field.name,
                dest=_dest(field.name),
                default=None,
                metavar=field.kind.upper(),
                help=f"{field.help} (default: {field.default!r})",
            )
    return ap


def resolve_config(command, args):
    fields = {f.name: f for f in COMMON_FIELDS + SUB_FIELDS[command]}
    values = {name: f.default for name, f in fields.items()}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except OSError as e:
            raise ConfigError(f"cannot read config file: {e}") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file is not valid JSON: {e}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for key, raw in doc.items():
            if key not in fields:
                raise ConfigError(f"unknown config field {key!r} for subcommand {command!r}")
            values[key] = _coerce(fields[key], raw)
    for name, field in fields.items():
        raw = getattr(args, _dest(name), None)
        if raw is not None:
            values[name] = _coerce(field, raw)
    return values


def _int_list(raw, name, minimum=0):
    out = []
    for part in str(raw).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            val = int(part)
        except ValueError:
            raise ConfigError(f"field {name!r} expects comma-separated integers, got {raw!r}") from None
        if val < minimum:
            raise ConfigError(f"field {name!r} entries must be >= {minimum}, got {val}")
        out.append(val)
    if not out:
        raise ConfigError(f"field {name!r} must list at least one value")
    return out


def _float_list(raw, name, lo=0.0, hi=1.0):
    out = []
    for part in str(raw).split(","):
        part = part.strip()
        if not part:
            continue
        try:
            val = float(part)
        except ValueError:
            raise ConfigError(f"field {name!r} expects comma-separated numbers, got {raw!r}") from None
        if not lo <= val < hi:
            raise ConfigError(f"field {name!r} entries must lie in [{lo}, {hi}), got {val}")
        out.append(val)
    if not out:
        raise ConfigError(f"field {name!r} must list at least one value")
    return out


def make_params(c):
    return TreeParams(c["k"], c["support_depth"], c["eval_depth"])


def make_exponents(c):
    q = c["q"] if c["q"] > 0 else None
    return derived_exponents(c["k"], c["p"], c["alpha"], mode=c["mode"], q=q)


def make_weight(c, params, prefix="weight"):
    kind = c[f"{prefix}.kind"]
    if kind == "radial":
        return Weight.radial(params, c[f"{prefix}.beta"])
    path = c[f"{prefix}.table"]
    if not path:
        raise ConfigError(f"field {prefix}.table is required when {prefix}.kind is tabulated")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read {prefix}.table: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{prefix}.table is not valid JSON: {e}") from None
    if int(doc.get("k", params.k)) != params.k:
        raise ConfigError(f"{prefix}.table was built for k={doc['k']}, config has k={params.k}")
    table = {tree.parse_vertex(s): x for s, x in doc["values"].items()}
    return Weight.tabulated(params, table)


def make_function(c, params, seed=None):
    kind = c["function.kind"]
    if kind == "zero":
        return TreeFunction(params, {})
    if kind == "random":
        return random_function(
            params,
            c["seed"] if seed is None else seed,
            density=c["function.density"],
            value_range=(0.0, c["function.vmax"]),
        )
    path = c["function.path"]
    if not path:
        raise ConfigError("field function.path is required when function.kind is file")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read function.path: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"function.path is not valid JSON: {e}") from None
    if int(doc.get("k", params.k)) != params.k:
        raise ConfigError(f"function file was built for k={doc['k']}, config has k={params.k}")
    values = {tree.parse_vertex(s): x for s, x in doc.get("values", {}).items()}
    return TreeFunction(params, values)


def _pair_row(instance_id, step, lhs, rhs, passed):
    slack = inf if lhs == 0.0 else rhs / lhs
    return {
        "instance_id": instance_id,
        "step": step,
        "lhs": lhs,
        "rhs": rhs,
        "slack": slack,
        "pass": passed,
    }


def _pair_csv(rows):
    return [
        [r["instance_id"], r["step"], r["lhs"], r["rhs"], r["slack"], r["pass"]]
        for r in rows
    ]


def _lambda_values(pos_sorted, quantiles, include_max):
    lams = []
    for qq in quantiles:
        label = f"q{int(round(qq * 100)):02d}"
        lams.append((label, pos_sorted[int(qq * (len(pos_sorted) - 1))]))
    if include_max:
        lams.append(("max", pos_sorted[-1]))
    return lams


# ---------------------------------------------------------------- subcommands


def run_geometry(c):
    k = c["k"]
    max_j, max_r = c["geometry.max_j"], c["geometry.max_r"]
    if max_j < 0 or max_r < 0:
        raise ConfigError("geometry.max_j and geometry.max_r must be >= 0")
    rows = []
    failures = []
    checks = 0
    for j in range(max_j + 1):
        center = (0,) * j
        running_ball = 0
        for r in range(max_r + 1):
            oracle = tree.sphere_bfs_oracle(k, center, r, j + r)
            running_ball += len(oracle)
            sphere = tree.sphere_size(k, j, r)
            ball = tree.ball_size(k, j, r)
            by_depth = {}
            for v in oracle:
                by_depth[len(v)] = by_depth.get(len(v), 0) + 1
            levels_ok = True
            for m in range(r + 1):
                i = j + r - 2 * m
                want = tree.level_sphere_count(k, j, r, m) if i >= 0 else 0
                got = by_depth.get(i, 0) if i >= 0 else 0
                if want != got:
                    levels_ok = False
            sandwich_ok = k**r <= sphere <= 2 * k**r and 1.0 <= ball / sphere <= 2.0
            checks += 1
            ok = sphere == len(oracle) and ball == running_ball and levels_ok and sandwich_ok
            if not ok and not failures:
                failures.append(
                    f"geometry mismatch at j={j} r={r}: closed sphere {sphere}, "
                    f"oracle {len(oracle)}, closed ball {ball}, oracle ball {running_ball}"
                )
            rows.append(
                {
                    "j": j,
                    "r": r,
                    "sphere_size": sphere,
                    "sphere_oracle": len(oracle),
                    "ball_size": ball,
                    "ball_oracle": running_ball,
                    "levels_match": levels_ok,
                    "sandwich_ok": sandwich_ok,
                }
            )
    payload = {"checks": checks, "all_match": not failures, "rows": rows}
    header = ["j", "r", "sphere_size", "sphere_oracle", "ball_size", "ball_oracle",
              "levels_match", "sandwich_ok"]
    csv_rows = [[row[h] for h in header] for row in rows]
    summary = f"geometry: {checks} (j, r) cells verified against the BFS oracle"
    return payload, (header, csv_rows), failures, summary


def run_maxfn(c):
    params = make_params(c)
    cfg = make_exponents(c)
    w = make_weight(c, params)
    f = make_function(c, params)
    operators = ["sphere", "ball"] if c["maxfn.operator"] == "both" else [c["maxfn.operator"]]
    fields = {}
    norms = {"input_p_norm": lp_norm(f, cfg.p, w)}
    for op in operators:
        fields[op] = maximal_field(f, cfg.alpha, operator=op, threads=c["threads"])
        norms[f"{op}_q_norm"] = map_lp_norm(((x, mv.value) for x, mv in fields[op]), cfg.q, w)
        if norms["input_p_norm"] > 0:
            norms[f"{op}_ratio"] = norms[f"{op}_q_norm"] / norms["input_p_norm"]
    failures = []
    equivalence = None
    if len(operators) == 2:
        cab = 2.0 ** (1.0 - cfg.alpha)
        cba = equivalence_constant(cfg.k, cfg.alpha)
        worst_ab = worst_ba = 0.0
        for (x, s_val), (_, b_val) in zip(fields["sphere"], fields["ball"]):
            if b_val.value > 0:
                worst_ab = max(worst_ab, s_val.value / (cab * b_val.value))
            if s_val.value > 0:
                worst_ba = max(worst_ba, b_val.value / (cba * s_val.value))
        equivalence = {
            "sphere_le_scaled_ball": worst_ab,
            "ball_le_scaled_sphere": worst_ba,
            "scale_to_ball": cab,
            "scale_to_sphere": cba,
        }
        if worst_ab > 1.0 + EQ_TOL:
            failures.append(
                f"sphere maximal exceeds 2^(1-alpha) * ball maximal by factor {worst_ab:.12g}"
            )
        if worst_ba > 1.0 + EQ_TOL:
            failures.append(
                f"ball maximal exceeds c(k, alpha) * sphere maximal by factor {worst_ba:.12g}"
            )
    header = ["vertex", "operator", "value", "radius"]
    csv_rows = []
    field_json = {}
    for op in operators:
        field_json[op] = []
        for x, mv in fields[op]:
            csv_rows.append([tree.format_vertex(x), op, mv.value, mv.radius])
            field_json[op].append(
                {"vertex": tree.format_vertex(x), "value": mv.value, "radius": mv.radius}
            )
    payload = {
        "support_size": len(f.support()),
        "norms": norms,
        "equivalence": equivalence,
        "fields": field_json,
    }
    summary = (
        f"maxfn: {' and '.join(operators)} maximal over {len(fields[operators[0]])} vertices, "
        f"input p-norm {iomod.format_float(norms['input_p_norm'])}"
    )
    return payload, (header, csv_rows), failures, summary


def run_zconst(c):
    params = make_params(c)
    cfg = make_exponents(c)
    w = make_weight(c, params)
    radii = _int_list(c["radii"], "radii")
    report = search_constants(
        w,
        cfg,
        radii,
        method=c["zconst.method"],
        region_depth=c["zconst.region_depth"],
        seed=c["seed"],
        starts=c["zconst.starts"],
        anneal_steps=c["zconst.anneal_steps"],
    )
    if not c["emit_timings"]:
        for e in report.entries:
            e.millis = 0
    failures = []
    if c["zconst.method"] == "both":
        for r in radii:
            ex = next(e for e in report.entries if e.r == r and e.method == "exhaustive")
            he = next(e for e in report.entries if e.r == r and e.method != "exhaustive")
            if he.constant > ex.constant * (1.0 + 1e-9):
                failures.append(
                    f"heuristic constant {he.constant:.12g} exceeds exhaustive "
                    f"{ex.constant:.12g} at r={r}"
                )
    payload = report.to_json_dict()
    csv_rows = report.csv_rows()
    summary = f"zconst: {len(report.entries)} search entries over radii {','.join(map(str, radii))}"
    return payload, (SEARCH_CSV_HEADER, csv_rows), failures, summary


def run_certify(c):
    cfg = make_exponents(c)
    beta = c["weight.beta"]
    if c["weight.kind"] != "radial":
        raise ConfigError("certify works on radial weights; set weight.kind radial")
    cert = certify_radial_weight(beta, cfg, c["certify.max_j"], c["certify.max_r"])
    agreement = window_agreement(
        cfg, c["certify.grid_points"], c["certify.max_j"], c["certify.max_r"]
    )
    failures = []
    if cert.verdict == "refuted":
        probe = next(pr for pr in cert.probes if pr.diverges)
        failures.append(
            f"weight beta={beta:.12g} refuted: {probe.name} ratio grows at "
            f"{probe.overall_slope:.12g} per radius step"
        )
    payload = {
        "certificate": cert.to_json_dict(),
        "window_agreement": {
            "scalar_matches_window": agreement.agree_scalar_window,
            "scalar_matches_per_level": agreement.agree_scalar_per_level,
            "disagreements": len(agreement.disagreements),
        },
    }
    header = ["beta", "in_window", "scalar_pass", "per_level_pass"]
    csv_rows = [[b, iw, sc, pl] for b, iw, sc, pl in agreement.grid]
    summary = f"certify: beta={iomod.format_float(beta)} -> {cert.verdict}"
    return payload, (header, csv_rows), failures, summary


def run_lemma(c):
    params = make_params(c)
    cfg = make_exponents(c)
    w = make_weight(c, params)
    radii = _int_list(c["radii"], "radii")
    quantiles = _float_list(c["lemma.lambda_quantiles"], "lemma.lambda_quantiles")
    if c["lemma.c_w"] < 0:
        raise ConfigError("lemma.c_w must be >= 0 (0 derives the certified constant)")
    if c["lemma.c_w"] == 0.0 and w.kind != "radial":
        raise ConfigError(
            "lemma.c_w can only be derived for radial weights; pass it explicitly"
        )
    seeds = range(c["lemma.seeds"]) if c["function.kind"] == "random" else [0]
    rows = []
    failures = []
    constants = {}
    skipped = 0
    for s in seeds:
        f = make_function(c, params, seed=c["seed"] + 7919 * s)
        table = DescendantSumTable(f)
        domain = tree.vertices_up_to(params.k, params.eval_depth)
        for r in radii:
            if c["lemma.c_w"] > 0:
                c_w = c["lemma.c_w"]
            else:
                key = r
                if key not in constants:
                    constants[key] = certified_bilinear_constant(
                        w.weight_beta, cfg, r, params.support_depth
                    ).c_w
                c_w = constants[key]
            field = [spherical_average(f, x, r, cfg.alpha, table=table) for x in domain]
            pos = sorted(v for v in field if v > 0)
            if not pos:
                skipped += 1
                continue
            for label, lam in _lambda_values(pos, quantiles, c["lemma.include_max_lambda"]):
                inst = LevelSetInstance(
                    w=w, f=f, r=r, lam=lam, dyadic_beta=c["lemma.dyadic_beta"],
                    c_w=c_w, cfg=cfg,
                )
                rep = level_set_bound_verify(inst, restrict=c["lemma.restrict"])
                rid = f"s{s}-r{r}-{label}"
                rows.append(_pair_row(rid, "level_set_bound", rep.lhs, rep.rhs, rep.passed))
                if not rep.passed:
                    failures.append(
                        f"level-set bound failed at {rid}: lhs {rep.lhs:.12g} > rhs {rep.rhs:.12g}"
                    )
    payload = {
        "instances": len(rows),
        "skipped_zero_fields": skipped,
        "derived_constants": {str(r): v for r, v in sorted(constants.items())},
        "rows": rows,
    }
    summary = f"lemma: {len(rows)} level-set instances verified, {skipped} skipped (zero field)"
    return payload, (PAIR_CSV_HEADER, _pair_csv(rows)), failures, summary


def run_chain(c):
    params = make_params(c)
    cfg = make_exponents(c)
    w = make_weight(c, params)
    radii = _int_list(c["radii"], "radii")
    if not 0 < c["chain.density"] <= 1:
        raise ConfigError("chain.density must lie in (0, 1]")
    rows = []
    failures = []
    for i in range(c["chain.instances"]):
        base = c["seed"] * 100003 + i
        E = random_set(params, 2 * base, c["chain.density"])
        F = random_set(params, 2 * base + 1, c["chain.density"])
        for r in radii:
            rid = f"i{i}-r{r}"
            trace = chain_verify(w, E, F, r, cfg)
            for step in trace.steps:
                rows.append(_pair_row(rid, step.name, step.lhs, step.rhs, step.passed))
                if not step.passed:
                    failures.append(
                        f"chain step {step.name} failed at {rid}: "
                        f"lhs {step.lhs:.12g} > rhs {step.rhs:.12g}"
                    )
            rep = interaction_min_sum(w, E, F, r, cfg)
            rows.append(_pair_row(rid, "levelwise_power_sum", rep.power_sum_lhs,
                                  rep.power_sum_rhs, rep.power_sum_ok))
            rows.append(_pair_row(rid, "levelwise_weight_sum", rep.weight_sum_lhs,
                                  rep.weight_sum_rhs, rep.level_sum_exact))
            if not rep.power_sum_ok:
                failures.append(f"levelwise power sum exceeded total at {rid}")
            if not rep.level_sum_exact:
                failures.append(f"levelwise weight sum is not exact at {rid}")
    series = radius_series_window(cfg, c["chain.series_beta"])
    payload = {
        "instances": c["chain.instances"],
        "rows": rows,
        "series": {
            "dyadic_beta": series.dyadic_beta,
            "exponent": series.exponent,
            "boundary": series.boundary,
            "convergent": series.convergent,
            "partial_sums": [[n, val] for n, val in series.partial_sums],
            "limit": series.limit,
        },
    }
    summary = (
        f"chain: {c['chain.instances']} instances x {len(radii)} radii, "
        f"{len(rows)} rows; series exponent {iomod.format_float(series.exponent)}"
    )
    return payload, (PAIR_CSV_HEADER, _pair_csv(rows)), failures, summary


def run_scan(c):
    cfg = make_exponents(c)
    depths = _int_list(c["scan.depths"], "scan.depths", minimum=1)
    if c["weight.kind"] != "radial":
        raise ConfigError("scan rebuilds the weight at every depth; set weight.kind radial")
    report = operator_norm_scan(
        cfg, c["scan.family"], depths, seed=c["seed"], weight_beta=c["weight.beta"]
    )
    payload = {
        "family": report.family,
        "depths": report.depths,
        "ratios": report.ratios,
        "diffs": report.diffs,
    }
    header = ["depth", "ratio", "diff_prev"]
    csv_rows = []
    for idx, (d, ratio) in enumerate(zip(report.depths, report.ratios)):
        csv_rows.append([d, ratio, 0.0 if idx == 0 else report.diffs[idx - 1]])
    summary = f"scan: {report.family} over depths {','.join(map(str, depths))}"
    return payload, (header, csv_rows), [], summary


def run_twoweight(c):
    params = make_params(c)
    cfg = make_exponents(c)
    u = make_weight(c, params)
    v = u if c["vweight.kind"] == "same" else make_weight(c, params, prefix="vweight")
    f = make_function(c, params)
    radii = _int_list(c["radii"], "radii")
    quantiles = _float_list(c["twoweight.lambda_quantiles"], "twoweight.lambda_quantiles")
    table = DescendantSumTable(f)
    domain = tree.vertices_up_to(params.k, params.eval_depth)
    rows = []
    failures = []
    searches = []
    skipped = 0
    for r in radii:
        field = [spherical_average(f, x, r, cfg.alpha, table=table) for x in domain]
        pos = sorted(val for val in field if val > 0)
        if not pos:
            skipped += 1
            continue
        lams = _lambda_values(pos, quantiles, c["twoweight.include_max_lambda"])
        rep = two_weight_level_set_report(
            u, v, f, r, [lam for _, lam in lams], c["twoweight.dyadic_beta"], cfg,
            seed=c["seed"],
        )
        if not c["emit_timings"]:
            rep.search.millis = 0
        searches.append(rep.search.to_json_dict())
        for (label, _), row in zip(lams, rep.rows):
            rid = f"r{r}-{label}"
            rows.append(_pair_row(rid, "two_weight_level_set", row.lhs, row.rhs, row.passed))
            if not row.passed:
                failures.append(
                    f"two-weight level-set check failed at {rid}: "
                    f"lhs {row.lhs:.12g} > rhs {row.rhs:.12g}"
                )
    payload = {
        "searches": searches,
        "rows": rows,
        "skipped_zero_fields": skipped,
    }
    summary = f"twoweight: {len(rows)} level-set rows across {len(radii)} radii"
    return payload, (PAIR_CSV_HEADER, _pair_csv(rows)), failures, summary


RUNNERS = {
    "geometry": run_geometry,
    "maxfn": run_maxfn,
    "zconst": run_zconst,
    "certify": run_certify,
    "lemma": run_lemma,
    "chain": run_chain,
    "scan": run_scan,
    "twoweight": run_twoweight,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        config = resolve_config(args.command, args)
        payload, csv_data, failures, summary = RUNNERS[args.command](config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (DomainError, RegionError, OutOfTreeError) as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return 2
    except GuardLimitError as e:
        print(f"guard limit: {e}", file=sys.stderr)
        return 3
    # threads is an execution detail: results are independent of it, and the
    # reports must stay byte-identical across thread counts
    echo = {key: val for key, val in config.items() if key != "threads"}
    document = {
        "command": args.command,
        "config": echo,
        "passed": not failures,
        "results": payload,
    }
    try:
        if config["out.json"]:
            iomod.write_json(config["out.json"], document)
        if config["out.csv"]:
            header, rows = csv_data
            iomod.write_csv(config["out.csv"], header, rows)
    except OSError as e:
        print(f"cannot write output: {e}", file=sys.stderr)
        return 4
    if failures:
        print(f"FAIL: {failures[0]}")
        return 1
    print(summary)
    for path_key in ("out.json", "out.csv"):
        if config[path_key]:
            print(f"wrote {config[path_key]}")
    return 0


def entry():
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
