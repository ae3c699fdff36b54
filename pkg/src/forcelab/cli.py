"""Batch front door: one verb per operation family, canonical JSON reports.

Exit status 0 means the checked property holds or the construction succeeded,
1 means it failed with a witness in the report, 2 means a parse error or a
contract violation. Identical invocations produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import __version__
from .amalgam import (
    AmalgamationError,
    amalgamate_asymmetric,
    brute_force_common_extension,
    check_amalgam_hypotheses,
)
from .conditions import find_isomorphism, validate_condition
from .deltaprop import family_has_witness, recognize_delta_system, search_pair_table
from .documents import (
    SchemaError,
    canonical_dumps,
    condition_doc,
    loads,
    p_condition_doc,
    pair_table_doc,
    parse_chain,
    parse_condition,
    parse_cutspec,
    parse_ensemble,
    parse_family,
    parse_p_chain,
    parse_p_condition,
    parse_pair_table,
    parse_sequence,
)
from .errors import PreconditionError, PropertyFault
from .sideforce import (
    StrongDeltaAmalgamInput,
    amalgamate_p_isomorphic,
    amalgamate_p_strong_delta,
    extract_pair_table,
    p_isomorphic,
    validate_p_condition,
    validate_ranked_family,
)
from .spacelab import (
    basic_nbhd,
    is_left_separated,
    kill_left_separation,
    level_structure,
    levels_summary,
    merge_chain,
    sequence_violations,
    validate_chain,
)
from .suite import run_suite, scaled_counts

VERBS = (
    "validate",
    "amalgamate",
    "oracle-extend",
    "delta-check",
    "delta-search",
    "pforce-validate",
    "pforce-amalgamate",
    "pforce-extract",
    "chain-merge",
    "levels",
    "left-sep",
    "kill",
    "suite",
)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation parameters; embedded into every report."""

    seed: int
    universe: int | None
    budget: int
    mode: str | None
    count: int | None
    inputs: tuple[str, ...]
    out: str | None
    plot_dir: str | None

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "universe": self.universe,
            "budget": self.budget,
            "mode": self.mode,
            "count": self.count,
            "inputs": list(self.inputs),
            "out": self.out,
            "plot_dir": self.plot_dir,
        }


def _read_doc(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise SchemaError(f"{path}: {exc}") from None
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _need_inputs(config: RunConfig, count: int, shapes: str) -> list:
    if len(config.inputs) != count:
        raise SchemaError(f"this verb needs {count} --in files: {shapes}")
    return [_read_doc(p) for p in config.inputs]


# --------------------------------------------------------------------------
# verb handlers: each returns (ok, report_body)

def _run_validate(config: RunConfig):
    cond_doc, table_doc = _need_inputs(config, 2, "condition, pair-table")
    p = parse_condition(cond_doc)
    f = parse_pair_table(table_doc)
    rep = validate_condition(p, f)
    return rep.ok, {"validation": rep.to_json()}


def _run_amalgamate(config: RunConfig):
    d1, d2, dt = _need_inputs(config, 3, "condition, condition, pair-table")
    p1, p2 = parse_condition(d1), parse_condition(d2)
    f = parse_pair_table(dt)
    e = find_isomorphism(p1, p2)
    if e is None:
        raise PreconditionError("inputs are not isomorphic")
    try:
        q = amalgamate_asymmetric(p1, p2, e, f)
    except AmalgamationError as exc:
        return False, {"hypotheses": exc.hypotheses.to_json()}
    hyp = check_amalgam_hypotheses(p1, p2, e, f)
    return True, {"amalgam": condition_doc(q), "hypotheses": hyp.to_json()}


def _run_oracle_extend(config: RunConfig):
    d1, d2, dt = _need_inputs(config, 3, "condition, condition, pair-table")
    p1, p2 = parse_condition(d1), parse_condition(d2)
    f = parse_pair_table(dt)
    bound = config.universe if config.universe is not None else 7
    q = brute_force_common_extension(p1, p2, f, bound=bound)
    if q is None:
        return False, {"extension": None}
    return True, {"extension": condition_doc(q)}


def _run_delta_check(config: RunConfig):
    de, dt = _need_inputs(config, 2, "ensemble, pair-table")
    systems = parse_ensemble(de)
    f = parse_pair_table(dt)
    mode = config.mode or "strong"
    bodies = []
    all_ok = True
    for idx, members in enumerate(systems):
        sys_ = recognize_delta_system(members)
        if sys_ is None:
            raise PreconditionError(f"ensemble system {idx} is not a sunflower")
        rep = family_has_witness(f, sys_, mode)
        bodies.append({"witness": None if rep is None else rep.to_json()})
        all_ok = all_ok and rep is not None and rep.ok
    return all_ok, {"mode": mode, "systems": bodies}


def _run_delta_search(config: RunConfig):
    (de,) = _need_inputs(config, 1, "ensemble")
    if config.universe is None:
        raise SchemaError("delta-search needs --universe")
    systems = parse_ensemble(de)
    recognized = []
    for idx, members in enumerate(systems):
        sys_ = recognize_delta_system(members)
        if sys_ is None:
            raise PreconditionError(f"ensemble system {idx} is not a sunflower")
        recognized.append(sys_)
    mode = config.mode or "strong"
    result = search_pair_table(config.universe, recognized, mode, config.budget)
    body = {"mode": mode, "status": result.status, "nodes": result.nodes}
    if result.found:
        body["table"] = pair_table_doc(result.table)
        return True, body
    if result.status == "unsat":
        body["system"] = result.unsat_system
    return False, body


def _run_pforce_validate(config: RunConfig):
    if len(config.inputs) == 1:
        (df,) = _need_inputs(config, 1, "family")
        fam = parse_family(df)
        rep = validate_ranked_family(fam)
        return rep.ok, {"family": rep.to_json()}
    df, dp = _need_inputs(config, 2, "family, p-condition")
    fam = parse_family(df)
    fam_rep = validate_ranked_family(fam)
    p = parse_p_condition(dp, fam)
    rep = validate_p_condition(p, fam)
    return fam_rep.ok and rep.ok, {"family": fam_rep.to_json(), "condition": rep.to_json()}


def _run_pforce_amalgamate(config: RunConfig):
    mode = config.mode or "iso"
    if mode == "iso":
        df, dp, dq = _need_inputs(config, 3, "family, p-condition, p-condition")
        fam = parse_family(df)
        p = parse_p_condition(dp, fam)
        q = parse_p_condition(dq, fam)
        pi = p_isomorphic(p, q)
        if pi is None:
            raise PreconditionError("side conditions are not isomorphic")
        r = amalgamate_p_isomorphic(p, q, pi)
        return True, {"amalgam": p_condition_doc(r, fam)}
    if mode != "cut":
        raise SchemaError(f"unknown pforce-amalgamate mode {mode!r}")
    df, dq, ds, dc = _need_inputs(config, 4, "family, p-condition, p-condition, cutspec")
    fam = parse_family(df)
    q = parse_p_condition(dq, fam)
    s = parse_p_condition(ds, fam)
    cut = parse_cutspec(dc, fam)
    inp = StrongDeltaAmalgamInput(q, s, cut["a"], cut["b"], cut["x0"], cut["delta"], cut["z"])
    r = amalgamate_p_strong_delta(inp, fam)
    cross = [
        {"pair": [xi, eta] if xi < eta else [eta, xi], "value": sorted(r.f_value(xi, eta))}
        for xi in sorted(s.a - q.a)
        for eta in sorted(q.a - s.a)
    ]
    return True, {"amalgam": p_condition_doc(r, fam), "cross": cross}


def _run_pforce_extract(config: RunConfig):
    df, dc = _need_inputs(config, 2, "family, chain of p-conditions")
    fam = parse_family(df)
    chain = parse_p_chain(dc, fam)
    table = extract_pair_table(chain, fam.universe)
    return True, {"table": pair_table_doc(table)}


def _load_chain_and_table(config: RunConfig, extra: int = 0, shapes: str = "chain, pair-table"):
    docs = _need_inputs(config, 2 + extra, shapes)
    chain = parse_chain(docs[0])
    f = parse_pair_table(docs[1])
    return chain, f, docs[2:]


def _run_chain_merge(config: RunConfig):
    chain, f, _ = _load_chain_and_table(config)
    rep = validate_chain(chain, f)
    if not rep.ok:
        return False, {"validation": rep.to_json()}
    g = merge_chain(chain)
    body = {
        "approximation": {
            "universe": g.universe,
            "h": {str(x): sorted(v) for x, v in g.h.items()},
            "has_infinity": g.has_infinity,
        },
        "validation": rep.to_json(),
    }
    return True, body


def _run_levels(config: RunConfig):
    chain, f, _ = _load_chain_and_table(config)
    rep = validate_chain(chain, f)
    if not rep.ok:
        return False, {"validation": rep.to_json()}
    g = merge_chain(chain)
    levels = level_structure(g)
    height, width = levels_summary(levels)
    sizes = {
        str(lvl): sum(1 for v in levels.values() if v == lvl) for lvl in range(height)
    }
    body = {
        "levels": {str(x): lvl for x, lvl in levels.items()},
        "height": height,
        "width": width,
        "sizes": sizes,
        "has_infinity": g.has_infinity,
    }
    if config.plot_dir:
        from .plots import figure_path, render_level_figure

        body["figure"] = render_level_figure(levels, figure_path(config.plot_dir, "levels.png"))
    return True, body


def _run_left_sep(config: RunConfig):
    chain, f, rest = _load_chain_and_table(config, 1, "chain, pair-table, sequence")
    seq = parse_sequence(rest[0])
    rep = validate_chain(chain, f)
    if not rep.ok:
        raise PreconditionError("chain does not validate")
    g = merge_chain(chain)
    bad = sequence_violations(g, seq)
    if bad:
        raise PreconditionError(f"sequence leaves its own neighborhoods at {bad}")
    separated = is_left_separated(g, seq)
    witness = None
    if not separated:
        for ia in range(len(seq.points)):
            for ib in range(ia + 1, len(seq.points)):
                pa, pb, gb = seq.points[ia], seq.points[ib], seq.guards[ib]
                if all(pa[i] in basic_nbhd(g, pb[i], gb[i]) for i in range(len(pb))):
                    witness = [ia, ib]
                    break
            if witness:
                break
    return separated, {"left_separated": separated, "witness": witness}


def _run_kill(config: RunConfig):
    d1, d2, dt, dseq = _need_inputs(
        config, 4, "condition, condition, pair-table, sequence"
    )
    p_a, p_b = parse_condition(d1), parse_condition(d2)
    f = parse_pair_table(dt)
    seq = parse_sequence(dseq)
    if len(seq.points) != 2:
        raise PreconditionError("kill expects a sequence of exactly two tuples")
    e = find_isomorphism(p_a, p_b)
    if e is None:
        raise PreconditionError("inputs are not isomorphic")
    try:
        result = kill_left_separation(
            p_a, p_b, e, (seq.points[0], seq.points[1]), seq.guards[1], f
        )
    except AmalgamationError as exc:
        return False, {"hypotheses": exc.hypotheses.to_json()}
    return result.ok, {
        "amalgam": condition_doc(result.q),
        "coordinates": list(result.coordinates),
        "ok": result.ok,
    }


def _run_suite(config: RunConfig):
    results = run_suite(config.seed, scaled_counts(config.count))
    for res in results:
        print(res.line(), file=sys.stderr)
    body = {
        "criteria": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
    }
    if config.plot_dir:
        from .plots import figure_path, render_suite_figure

        body["figure"] = render_suite_figure(results, figure_path(config.plot_dir, "suite.png"))
    return body["passed"], body


HANDLERS = {
    "validate": _run_validate,
    "amalgamate": _run_amalgamate,
    "oracle-extend": _run_oracle_extend,
    "delta-check": _run_delta_check,
    "delta-search": _run_delta_search,
    "pforce-validate": _run_pforce_validate,
    "pforce-amalgamate": _run_pforce_amalgamate,
    "pforce-extract": _run_pforce_extract,
    "chain-merge": _run_chain_merge,
    "levels": _run_levels,
    "left-sep": _run_left_sep,
    "kill": _run_kill,
    "suite": _run_suite,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forcelab",
        description="Finite-scale forcing-condition laboratory: validation, "
        "amalgamation, witness search and scattering diagnostics.",
    )
    parser.add_argument("verb", choices=VERBS, help="operation to run")
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        default=[],
        metavar="FILE",
        help="input document; repeat in the order the verb expects",
    )
    parser.add_argument("--out", default=None, help="report path (default: stdout)")
    parser.add_argument("--seed", type=int, default=0, help="corpus seed for suite")
    parser.add_argument("--universe", type=int, default=None, help="universe size where needed")
    parser.add_argument("--budget", type=int, default=100_000, help="search node budget")
    parser.add_argument("--mode", default=None, help="verb mode (strong|bs, iso|cut)")
    parser.add_argument("--count", type=int, default=None, help="cap suite corpus sizes")
    parser.add_argument("--plot-dir", default=None, help="render figures into this directory")
    return parser


def make_report(verb: str, config: RunConfig, ok: bool, body: dict) -> dict:
    return {
        "config": config.to_json(),
        "report": body,
        "status": "ok" if ok else "fail",
        "tool": {"name": "forcelab", "version": __version__},
        "verb": verb,
    }


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    config = RunConfig(
        seed=args.seed,
        universe=args.universe,
        budget=args.budget,
        mode=args.mode,
        count=args.count,
        inputs=tuple(args.inputs),
        out=args.out,
        plot_dir=args.plot_dir,
    )
    try:
        ok, body = HANDLERS[args.verb](config)
    except (SchemaError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PropertyFault as exc:
        print(f"internal fault: {exc}", file=sys.stderr)
        return 2
    text = canonical_dumps(make_report(args.verb, config, ok, body))
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
