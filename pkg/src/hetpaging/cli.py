"""Command-line workbench: run algorithms, compare with the oracle, drive adversaries."""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from statistics import mean

from . import generators as gen
from .adversaries.aoo import DEFAULT_REPS, all_or_one_adversary
from .adversaries.forcing import forcing_sequence, greedy_code, is_forcing
from .adversaries.gz import family_theorem1i, family_theorem1ii
from .adversaries.lemma2 import lemma2_adversary
from .bounds import enforce, height
from .core import (PageSetSequence, RequestSequence, SlotSetFamily, family_stats, slots_of,
                   validate_schedule)
from .errors import CapExceeded, HetPagingError, InvariantViolation, ParameterError, TraceParseError
from .offline.oracle import OracleCaps, opt_bruteforce
from .offline.vc import parse_graph, vc_reduce
from .online.base import OnlineAlgorithm
from .online.registry import algorithm_names, input_kind, make_algorithm
from .traceio import format_trace, format_weights, read_trace, read_weights

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAP, EXIT_INVARIANT = 0, 1, 2, 3, 4
CSV_COLUMNS = ("instance_id", "k", "family_kind", "h", "T", "alg", "seed", "cost", "opt", "ratio")


class UsageError(HetPagingError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(_jsonable(v) for v in obj)
    return _num(obj)


def parse_caps(text: str | None) -> OracleCaps:
    if not text:
        return OracleCaps()
    fields = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in OracleCaps.__dataclass_fields__:
            raise UsageError(f"bad --caps entry {part!r}; use k=..,pages=..,T=..,states=..")
        try:
            fields[key] = int(val)
        except ValueError:
            raise UsageError(f"cap {key} must be an integer") from None
    return OracleCaps(**fields)


class _Output:
    def __init__(self, path: str | None):
        self.fh = open(path, "w", encoding="utf-8") if path else sys.stdout

    def line(self, obj: dict) -> None:
        self.fh.write(json.dumps(_jsonable(obj), ensure_ascii=False) + "\n")

    def text(self, s: str) -> None:
        self.fh.write(s)

    def close(self) -> None:
        if self.fh is not sys.stdout:
            self.fh.close()
        else:
            self.fh.flush()


def _check_input(alg: str, seq, weights) -> None:
    kind = input_kind(alg)
    if kind == "pageset":
        if not isinstance(seq, PageSetSequence):
            raise UsageError(f"{alg} needs a page-set trace")
        return
    if isinstance(seq, PageSetSequence):
        raise UsageError(f"{alg} needs a slot-request trace")
    if kind == "laminar" and not seq.family.laminar:
        raise UsageError(f"{alg} needs a laminar slot family")
    if kind == "aoo":
        allowed = set(SlotSetFamily.all_or_one(seq.k).members)
        if any(m not in allowed for m in seq.family.members):
            raise UsageError(f"{alg} needs an All-or-One family")
        if weights is None:
            raise UsageError(f"{alg} needs --weights")


def _run_alg(alg: str, seq, weights, seed: int):
    result = make_algorithm(alg, seed).run(seq, weights)
    bad = validate_schedule(seq, result.schedule)
    if bad is not None:
        raise InvariantViolation(f"{alg} schedule does not serve request {bad}")
    return result


def _weights_for(alg: str, seq, weights):
    # weighted cost only for the weighted algorithm; the others ignore weights
    return weights if input_kind(alg) == "aoo" else None


def cmd_run(args, out: _Output) -> None:
    seq = read_trace(args.trace)
    weights = read_weights(args.weights) if args.weights else None
    _check_input(args.alg, seq, weights)
    result = _run_alg(args.alg, seq, _weights_for(args.alg, seq, weights), args.seed)
    report = {"trace": args.trace, "alg": args.alg, "k": seq.k, "T": len(seq), "seed": args.seed,
              "cost": result.cost, "valid": True}
    if result.phases:
        report["phases"] = result.phases
    for key in ("phase_lengths", "phase_costs", "phi", "virtual_cost", "inner_total"):
        if key in result.details:
            report[key] = result.details[key]
    if args.dump_schedule:
        report["schedule"] = [list(c) for c in result.schedule]
    out.line(report)


@dataclass
class RatioJob:
    instance_id: str
    family_kind: str
    seq: object
    weights: object
    alg: str
    seed: int
    caps: OracleCaps


def ratio_job(job: RatioJob) -> dict:
    seq, alg = job.seq, job.alg
    w = _weights_for(alg, seq, job.weights)
    result = _run_alg(alg, seq, w, job.seed)
    h = height(seq)
    row = {"instance_id": job.instance_id, "k": seq.k, "family_kind": job.family_kind, "h": h,
           "T": len(seq), "alg": alg, "seed": job.seed, "cost": result.cost, "opt": None, "ratio": None}
    try:
        opt = opt_bruteforce(seq, w, job.caps, need_schedule=False).cost
    except CapExceeded as e:
        row["warning"] = f"oracle skipped: {e}"
        return row
    row["opt"] = opt
    row["ratio"] = float(Fraction(result.cost) / max(Fraction(opt), 1))
    row["bounds"] = {b.label: _num(b.limit) for b in enforce(alg, seq, result, opt)}
    return row


def _generated(args) -> list[tuple[str, str, object, object]]:
    out = []
    for i in range(args.count):
        seed = args.seed + i
        if args.gen == "pagelaminar":
            seq = gen.random_page_laminar(args.k, args.pages, args.len, seed)
            weights = None
        elif args.gen == "motivating":
            seq, weights = gen.motivating_instance(args.len)
        else:
            seq = gen.random_instance(args.k, args.gen, args.pages, args.len, seed)
            weights = gen.random_weights(seq.pages(), seed)
        out.append((f"{args.gen}-{seed}", args.gen, seq, weights))
    return out


def cmd_ratio(args, out: _Output) -> None:
    caps = parse_caps(args.caps)
    if bool(args.traces) == bool(args.gen):
        raise UsageError("give trace files or --gen, not both or neither")
    if args.gen:
        instances = _generated(args)
    else:
        weights = read_weights(args.weights) if args.weights else None
        instances = [(path, "trace", read_trace(path), weights) for path in args.traces]
    jobs = []
    for iid, kind, seq, weights in instances:
        _check_input(args.alg, seq, weights)
        jobs.append(RatioJob(iid, kind, seq, weights, args.alg, args.seed, caps))
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(ratio_job, jobs))
    else:
        rows = [ratio_job(j) for j in jobs]
    order = {j.instance_id: i for i, j in enumerate(jobs)}
    rows.sort(key=lambda r: order[r["instance_id"]])
    for row in rows:
        if "warning" in row:
            print(f"warning: {row['instance_id']}: {row['warning']}", file=sys.stderr)
        out.line(row)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                writer.writerow({c: "" if row[c] is None else _num(row[c]) for c in CSV_COLUMNS})


def _online(name: str, seed: int) -> OnlineAlgorithm:
    alg = make_algorithm(name, seed)
    if not isinstance(alg, OnlineAlgorithm):
        raise UsageError(f"{name} does not serve requests one at a time")
    return alg


def cmd_adversary(args, out: _Output) -> None:
    if args.kind == "lemma2":
        which = args.family or ("theorem1ii" if args.m is not None else "theorem1i")
        if which == "theorem1ii":
            if args.m is None:
                raise UsageError("theorem1ii needs --m")
            fams = family_theorem1ii(args.k, args.m)
        else:
            fams = family_theorem1i(args.k)
        rep = lemma2_adversary(fams, _online(args.alg, args.seed), args.rounds, args.seed,
                               verify=args.k <= 16)
        report = rep.as_dict()
        if args.m is not None:
            report["m"] = args.m
        report["seed"] = args.seed
        out.line(report)
    elif args.kind == "aoo":
        ratios = []
        for i in range(args.seeds):
            rep = all_or_one_adversary(args.k, args.phases, args.seed + i, _online(args.alg, args.seed + i),
                                       args.reps)
            ratios.append(rep.ratio)
            out.line(rep.as_dict())
        if args.seeds > 1:
            out.line({"k": args.k, "L": args.phases, "seeds": args.seeds, "alg": args.alg,
                      "mean_ratio": mean(ratios)})
    else:
        code = greedy_code(args.k)
        out.line({"k": args.k, "code": [list(slots_of(m)) for m in code],
                  "forcing": is_forcing(forcing_sequence(args.k, code), code)})


def cmd_gen(args, out: _Output) -> None:
    if args.kind == "random":
        seq = gen.random_instance(args.k, args.family, args.pages, args.len, args.seed)
        out.text(format_trace(seq))
        if args.weights_out:
            with open(args.weights_out, "w", encoding="utf-8") as fh:
                fh.write(format_weights(gen.random_weights(seq.pages(), args.seed)))
    elif args.kind == "pagelaminar":
        out.text(format_trace(gen.random_page_laminar(args.k, args.pages, args.len, args.seed)))
    elif args.kind == "motivating":
        seq, weights = gen.motivating_instance(args.len)
        out.text(format_trace(seq))
        if args.weights_out:
            with open(args.weights_out, "w", encoding="utf-8") as fh:
                fh.write(format_weights(weights))
    elif args.kind == "vc":
        if not args.graph:
            raise UsageError("gen vc needs --graph")
        with open(args.graph, encoding="utf-8") as fh:
            inst = parse_graph(fh.read())
        red = vc_reduce(inst)
        out.text(format_trace(red.seq))
        sidecar = {"n": inst.n, "edges": [list(e) for e in inst.edges], "cover_size": inst.k,
                   "T": len(red.seq), **inst.quantities()}
        if args.out:
            with open(args.out + ".json", "w", encoding="utf-8") as fh:
                fh.write(json.dumps(sidecar) + "\n")
        else:
            print(json.dumps(sidecar), file=sys.stderr)
    else:
        if args.family == "theorem1i":
            family = family_theorem1i(args.k).family()
        elif args.family == "theorem1ii":
            if args.m is None:
                raise UsageError("theorem1ii needs --m")
            family = family_theorem1ii(args.k, args.m).family()
        else:
            rng = random.Random(args.seed)
            family = gen.random_family(rng, args.family, args.k)
        out.text(format_trace(RequestSequence(args.k, family, ()), comment=f"{len(family)} sets"))


def cmd_stats(args, out: _Output) -> None:
    seq = read_trace(args.trace)
    report = {"trace": args.trace, "k": seq.k, "T": len(seq), "pages": len(seq.pages())}
    if isinstance(seq, PageSetSequence):
        report.update(kind="pageset", family_size=len(seq.page_family), height=seq.forest().height)
    else:
        st = family_stats(seq.family)
        report.update(kind="slot", family_size=st.size, mass=st.mass, laminar=st.laminar,
                      height=st.height, closure_size=st.closure_size)
    out.line(report)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hetpaging", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="write output here instead of stdout")

    algs = algorithm_names()
    r = sub.add_parser("run", help="run one algorithm on a trace")
    r.add_argument("trace")
    r.add_argument("--alg", required=True, choices=algs, metavar="ALG")
    r.add_argument("--weights")
    r.add_argument("--dump-schedule", action="store_true")
    common(r)

    q = sub.add_parser("ratio", help="compare algorithm cost with the exact optimum")
    q.add_argument("traces", nargs="*")
    q.add_argument("--alg", required=True, choices=algs, metavar="ALG")
    q.add_argument("--weights")
    q.add_argument("--gen", choices=gen.FAMILY_KINDS + ("pagelaminar", "motivating"))
    q.add_argument("--k", type=int, default=3)
    q.add_argument("--pages", type=int, default=5)
    q.add_argument("--len", type=int, default=15)
    q.add_argument("--count", type=int, default=1)
    q.add_argument("--caps")
    q.add_argument("--csv")
    q.add_argument("--jobs", type=int, default=1)
    common(q)

    a = sub.add_parser("adversary", help="run a lower-bound adversary")
    a.add_argument("kind", choices=("lemma2", "aoo", "forcing"))
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--m", type=int)
    a.add_argument("--family", choices=("theorem1i", "theorem1ii"))
    a.add_argument("--alg", default="exh", choices=algs, metavar="ALG")
    a.add_argument("--rounds", type=int, default=500)
    a.add_argument("--phases", type=int, default=200)
    a.add_argument("--reps", type=int, default=DEFAULT_REPS)
    a.add_argument("--seeds", type=int, default=1)
    common(a)

    g = sub.add_parser("gen", help="generate traces and families")
    g.add_argument("kind", choices=("random", "pagelaminar", "motivating", "vc", "family"))
    g.add_argument("family", nargs="?", default="laminar",
                   help="family kind for random and family dumps")
    g.add_argument("--family", dest="family_opt")
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--m", type=int)
    g.add_argument("--pages", type=int, default=5)
    g.add_argument("--len", type=int, default=20)
    g.add_argument("--graph")
    g.add_argument("--weights-out")
    common(g)

    s = sub.add_parser("stats", help="family statistics of a trace")
    s.add_argument("trace")
    common(s)
    return p


COMMANDS = {"run": cmd_run, "ratio": cmd_ratio, "adversary": cmd_adversary, "gen": cmd_gen, "stats": cmd_stats}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gen" and args.family_opt:
        args.family = args.family_opt
    out = None
    try:
        out = _Output(args.out)
        COMMANDS[args.command](args, out)
    except (UsageError, ParameterError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TraceParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if out is not None:
            out.close()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
