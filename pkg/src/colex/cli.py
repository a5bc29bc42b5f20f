"""Command line front end.

Exit codes: 0 success, 1 negative answer (not equivalent, not accepted,
width above the bound, ...), 2 bad input or usage, 3 a cap or memory budget
was hit.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time

from . import gallery
from .abwt import Abwt, abwt_of_dfa, build_abwt, invert_abwt_dfa, invert_abwt_nfa
from .automaton import Automaton, minimize, parse, serialize
from .errors import BudgetError, CapExceededError, ColexError
from .generate import random_dfa, random_words
from .index import Index, build_index
from .langwidth import DEFAULT_BUDGET, decide_width_leq, replay_certificate
from .order import (
    brute_force_nfa_width,
    chain_partition,
    check_colex_axioms,
    compute_max_colex_order,
    dfa_width,
    maximal_colex_order,
    to_dot,
)
from .powerset import DEFAULT_CAP, check_powerset_bounds, nfa_equivalent, powerset_construct

OK, NEGATIVE, USAGE, ABORT = 0, 1, 2, 3


class _Fail(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path) -> Automaton:
    return parse(_read_text(path))


def _write(text, path=None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit(obj):
    print(json.dumps(obj, sort_keys=False))


def _ids(states):
    return [u + 1 for u in states]


def _order_for(a: Automaton, method: str, cap: int):
    """Pick a co-lex order. Returns (order, how)."""
    if method == "auto":
        if a.is_deterministic():
            method = "max"
        elif a.n <= cap:
            method = "exhaustive"
        else:
            method = "greedy"
    if method == "max":
        return compute_max_colex_order(a), "max"
    if method == "exhaustive":
        return brute_force_nfa_width(a, cap)[1], "exhaustive"
    if method == "greedy":
        return maximal_colex_order(a), "greedy"
    raise _Fail(USAGE, f"unknown order method {method!r}")


# -- commands -------------------------------------------------------------------


def cmd_validate(args):
    a = _load(args.file)
    reach = a.reachable()
    co = a.coreachable()
    report = {
        "states": a.n,
        "edges": a.e,
        "alphabet": list(a.alphabet),
        "deterministic": a.is_deterministic(),
        "trim": len(reach & co) == a.n,
        "unreachable": _ids(sorted(set(range(a.n)) - reach)),
        "not_coreachable": _ids(sorted(set(range(a.n)) - co)),
    }
    if args.json:
        _emit(report)
    else:
        for k, v in report.items():
            print(f"{k}: {v}")
    return OK if report["trim"] else NEGATIVE


def cmd_minimize(args):
    a = _load(args.file)
    if not a.is_deterministic():
        a = powerset_construct(a, args.cap).dfa
    _write(serialize(minimize(a)), args.output)
    return OK


def _width_info(a: Automaton, args):
    po, how = _order_for(a, args.order, args.exhaustive_cap)
    cp = chain_partition(po, a.source)
    return po, cp, how


def cmd_width(args):
    a = _load(args.file)
    _, cp, how = _width_info(a, args)
    _emit({"width": cp.width, "order": how, "antichain": _ids(cp.antichain)})
    return OK


def cmd_chains(args):
    a = _load(args.file)
    _, cp, how = _width_info(a, args)
    _emit({"width": cp.width, "chains": [_ids(ch) for ch in cp.chains], "order": how})
    return OK


def cmd_order(args):
    a = _load(args.file)
    po, _, _ = _width_info(a, args)
    _write(to_dot(po), args.output)
    return OK


def cmd_powerset(args):
    a = _load(args.file)
    res = powerset_construct(a, args.cap)
    stats = {"nfa_states": a.n, "dfa_states": res.dfa.n, "dfa_edges": res.dfa.e}
    if args.p is not None:
        stats.update(check_powerset_bounds(a, args.p, args.cap).as_dict())
    text = serialize(res.dfa) + "# stats " + json.dumps(stats) + "\n"
    _write(text, args.output)
    return OK


def cmd_equiv(args):
    same = nfa_equivalent(_load(args.first), _load(args.second), args.cap)
    if args.json:
        _emit({"equivalent": same})
    else:
        print("equivalent" if same else "different")
    return OK if same else NEGATIVE


def cmd_member(args):
    a = _load(args.file)
    ok = a.accepts(args.word)
    if args.json:
        _emit({"word": args.word, "accepted": ok})
    else:
        print("accepted" if ok else "rejected")
    return OK if ok else NEGATIVE


def cmd_lang_width(args):
    a = _load(args.file)
    if not a.is_deterministic():
        a = powerset_construct(a).dfa
    mode = "exact" if args.mode == "exact" else "bounded_search"
    if mode == "bounded_search" and args.cap is None:
        raise _Fail(USAGE, "--cap is required with --mode search")
    dec = decide_width_leq(a, args.p, mode, args.cap, args.budget_bytes)
    out = dec.as_dict(a.alphabet)
    if dec.certificate is not None:
        out["certificate_replayed"] = replay_certificate(minimize(a), dec.certificate)
    _emit(out)
    return NEGATIVE if dec.answer == "gt" else OK


def cmd_abwt_build(args):
    a = _load(args.file)
    po, _ = _order_for(a, args.order, args.exhaustive_cap)
    cp = chain_partition(po, a.source)
    t = build_abwt(a, cp, po)
    if args.output:
        t.save(args.output)
    if args.dump or not args.output:
        sys.stdout.write(t.dump())
    return OK


def cmd_abwt_dump(args):
    sys.stdout.write(Abwt.load(args.file).dump())
    return OK


def cmd_abwt_invert(args):
    t = Abwt.load(args.file)
    a = invert_abwt_nfa(t, args.max_states) if args.exhaustive else invert_abwt_dfa(t)
    _write(serialize(a), args.output)
    return OK


def cmd_index_build(args):
    with open(args.file, "rb") as fh:
        data = fh.read()
    if data[:4] == b"ABWT":
        t = Abwt.from_bytes(data)
    else:
        a = parse(data.decode("utf-8"))
        po, _ = _order_for(a, args.order, args.exhaustive_cap)
        t = build_abwt(a, chain_partition(po, a.source), po)
    build_index(t).save(args.output)
    return OK


def _answer(ix: Index, op, pattern):
    if op == "exists":
        return ix.exists(pattern)
    if op == "count":
        return ix.count(pattern)
    if op == "locate":
        return _ids(ix.locate(pattern))
    return ix.member(pattern)


def cmd_index_query(args):
    ix = Index.load(args.index)
    if args.batch:
        for line in sys.stdin:
            pattern = line.rstrip("\n")
            _emit({"pattern": pattern, args.op: _answer(ix, args.op, pattern)})
        return OK
    if args.pattern is None:
        raise _Fail(USAGE, "give --pattern or --batch")
    ans = _answer(ix, args.op, args.pattern)
    if args.json:
        _emit({"pattern": args.pattern, args.op: ans})
    else:
        print(json.dumps(ans))
    if args.op in ("exists", "member"):
        return OK if ans else NEGATIVE
    return OK


def run_bench(sizes, sigma, reps, patterns, max_len, seed):
    """Time the main operations on random DFAs. Returns CSV-ready rows."""
    rng = random.Random(seed)
    rows = []

    def timed(op, d, p, fn):
        t0 = time.perf_counter_ns()
        out = fn()
        rows.append({"op": op, "n": d.n, "e": d.e, "sigma": d.sigma, "p": p,
                     "wall_ns": time.perf_counter_ns() - t0})
        return out

    for n in sizes:
        for _ in range(reps):
            d = random_dfa(rng, n, sigma)
            start = len(rows)
            po = timed("max_order", d, 0, lambda: compute_max_colex_order(d))
            cp = timed("chain_partition", d, 0, lambda: chain_partition(po, d.source))
            for row in rows[start:]:
                row["p"] = cp.width
            t = timed("abwt_build", d, cp.width, lambda: build_abwt(d, cp))
            ix = timed("index_build", d, cp.width, lambda: build_index(t))
            words = random_words(rng, sigma, patterns, max_len)
            timed("query_count", d, cp.width, lambda: [ix.count(w) for w in words])
            timed("invert", d, cp.width, lambda: invert_abwt_dfa(t))
    return rows


def cmd_bench(args):
    sizes = [int(x) for x in args.sizes.split(",") if x]
    rows = run_bench(sizes, args.sigma, args.reps, args.patterns, args.max_len, args.seed)
    fields = ["op", "n", "e", "sigma", "p", "wall_ns"]
    if args.csv in (None, "-"):
        w = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(rows)
    if args.figure:
        from .plotting import plot_bench

        plot_bench(rows, args.figure)
    return OK


def selftest_checks():
    """Named checks against the reference automata; each returns a bool."""
    d = gallery.running_dfa()

    def running_transform():
        t = abwt_of_dfa(d)
        return (
            str(t.chain) == "1000100" and str(t.final) == "0001110"
            and str(t.in_deg) == "10100100101010001"
            and str(t.out_deg) == "01010101001001001"
            and "".join(t.pair_str(x) for x in t.out)
            == "(1,a)(2,b)(2,a)(2,b)(1,a)(2,b)(1,a)(2,b)(1,b)(1,c)"
            and str(build_index(t).in_prime) == "1001111000"
        )

    def running_queries():
        ix = build_index(abwt_of_dfa(d))
        return (
            ix.locate("a") == [1, 2, 4] and ix.locate("aa") == [2, 4]
            and not ix.exists("cc") and ix.accepts_from_source("ab")[0].states == [5]
            and ix.member("abaa")
        )

    def fan_widths():
        ws = [dfa_width(f())[0] for f in (gallery.fan_dfa, gallery.fan_dfa_split_k, gallery.fan_dfa_split_h)]
        return ws == [3, 2, 2]

    def chain_nfa_width():
        a = gallery.chain_nfa()
        w, po = brute_force_nfa_width(a, 6)
        return w == 1 and bool(check_colex_axioms(a, po))

    def twins_collide():
        from .order import PartialOrder, partition_from_chains

        ts = []
        for a, pairs in zip(gallery.twin_nfas(), gallery.TWIN_ORDER_PAIRS):
            po = PartialOrder.from_pairs(a.n, pairs)
            ts.append(build_abwt(a, partition_from_chains(po, gallery.TWIN_CHAINS), po))
        try:
            invert_abwt_dfa(ts[0])
            return False
        except ColexError:
            return ts[0] == ts[1]

    def staircase():
        from .langwidth import language_width_bounds

        b = language_width_bounds(gallery.staircase_dfa(3), 6)
        return b.lower == 3 and b.upper == 3

    def fan_witness():
        dec = decide_width_leq(gallery.fan_dfa(), 1, "bounded_search", 6)
        return dec.answer == "gt" and replay_certificate(minimize(gallery.fan_dfa()), dec.certificate)

    return [
        ("transform of the seven-state DFA", running_transform),
        ("index queries on the seven-state DFA", running_queries),
        ("widths 3/2/2 of the fan DFAs", fan_widths),
        ("total co-lex order of the six-state NFA", chain_nfa_width),
        ("twin NFAs share a transform that does not invert", twins_collide),
        ("staircase language width pinned at 3", staircase),
        ("fan language has width above 1", fan_witness),
    ]


def cmd_selftest(args):
    failed = 0
    for name, check in selftest_checks():
        try:
            ok = check()
        except Exception as exc:  # report, do not crash the whole run
            ok = False
            name = f"{name} ({exc!r})"
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return OK if not failed else NEGATIVE


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output and errors")

    ordering = argparse.ArgumentParser(add_help=False)
    ordering.add_argument("--order", default="auto", choices=["auto", "max", "exhaustive", "greedy"],
                          help="how to choose the co-lex order (default: max for DFAs, "
                               "exhaustive search for small NFAs, greedy otherwise)")
    ordering.add_argument("--exhaustive-cap", type=int, default=6,
                          help="largest NFA for exhaustive order search (default 6)")

    parser = argparse.ArgumentParser(prog="colex", description="Co-lex orders, width and the automaton transform.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check an automaton file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("minimize", parents=[common], help="minimum DFA (determinizing first if needed)")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_minimize)

    for name, func, hlp in [
        ("width", cmd_width, "width of a co-lex order"),
        ("chains", cmd_chains, "minimum chain partition as JSON"),
        ("order", cmd_order, "Hasse diagram of the order in DOT"),
    ]:
        p = sub.add_parser(name, parents=[common, ordering], help=hlp)
        p.add_argument("file")
        if name == "order":
            p.add_argument("-o", "--output")
        p.set_defaults(func=func)

    p = sub.add_parser("powerset", parents=[common], help="subset construction with stats")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--p", type=int, help="also check the size bounds for this width")
    p.set_defaults(func=cmd_powerset)

    p = sub.add_parser("equiv", parents=[common], help="language equivalence")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("member", parents=[common], help="word membership")
    p.add_argument("file")
    p.add_argument("word")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("lang-width", parents=[common], help="decide deterministic language width <= p")
    p.add_argument("file")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "search"], default="search")
    p.add_argument("--cap", type=int)
    p.add_argument("--budget-bytes", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_lang_width)

    p = sub.add_parser("abwt", help="build, dump or invert the transform")
    asub = p.add_subparsers(dest="abwt_command", required=True)
    q = asub.add_parser("build", parents=[common, ordering])
    q.add_argument("file")
    q.add_argument("-o", "--output")
    q.add_argument("--dump", action="store_true", help="also print the text form")
    q.set_defaults(func=cmd_abwt_build)
    q = asub.add_parser("dump", parents=[common])
    q.add_argument("file")
    q.set_defaults(func=cmd_abwt_dump)
    q = asub.add_parser("invert", parents=[common])
    q.add_argument("file")
    q.add_argument("-o", "--output")
    q.add_argument("--exhaustive", action="store_true",
                   help="general inversion for automata whose states are each reached alone by some word")
    q.add_argument("--max-states", type=int, default=12)
    q.set_defaults(func=cmd_abwt_invert)

    p = sub.add_parser("index", help="build or query the path index")
    isub = p.add_subparsers(dest="index_command", required=True)
    q = isub.add_parser("build", parents=[common, ordering])
    q.add_argument("file", help="automaton text or transform file")
    q.add_argument("-o", "--output", required=True)
    q.set_defaults(func=cmd_index_build)
    q = isub.add_parser("query", parents=[common])
    q.add_argument("index")
    q.add_argument("--pattern")
    q.add_argument("--op", choices=["exists", "count", "locate", "member"], default="exists")
    q.add_argument("--batch", action="store_true", help="read one pattern per line from stdin")
    q.set_defaults(func=cmd_index_query)

    p = sub.add_parser("bench", parents=[common], help="time operations on random DFAs")
    p.add_argument("--sizes", default="8,16,32,64")
    p.add_argument("--sigma", type=int, default=3)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--patterns", type=int, default=200)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="CSV output path (default stdout)")
    p.add_argument("--figure", help="write a timing plot to this file")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", parents=[common], help="run the built-in reference checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetError, CapExceededError) as exc:
        return _report(args, exc, ABORT)
    except _Fail as exc:
        return _report(args, exc, exc.code)
    except (ColexError, ValueError, OSError) as exc:
        return _report(args, exc, USAGE)


def _report(args, exc, code):
    if getattr(args, "json", False):
        _emit({"error": type(exc).__name__, "message": str(exc), "exit_code": code})
    else:
        print(f"colex: error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
