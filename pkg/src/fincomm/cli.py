"""Command-line front end.

Exit codes: 0 success, 1 counterexample or negative answer, 2 parse or
validation error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .algebra import DEFAULT_BUDGET, Algebra, AlgebraError, BudgetExceeded, parse_algebra
from .ceq import CeqEvalError, CeqSyntaxError, check_ceq_universal, format_ceq, parse_ceq
from .commutators import (complement_check, square_context, sym_commutator, tc_commutator,
                          theorem35_check)
from .congruence import congruence_lattice, format_lattice
from .corpus import corpus_algebra
from .linear import (REFLEXIVE, NotInCommutator, classify, commutator_chain_report,
                     labelling_witness, lin_commutator, lin_witness, parse_labelling_witness)
from .malcev import (CeqSynthesisData, NotFound, check_lemma49_term, find_difference_term,
                     find_lemma43_term, find_weak_difference_term, lemma46_counterexample,
                     synthesize_lemma46_inclusion)
from .partition import Partition, PartitionError
from .report import render

OK, COUNTEREXAMPLE, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load(path: str) -> Algebra:
    """A file path, or the name of a shipped corpus algebra such as ``z2.alg``."""
    p = Path(path)
    if p.exists():
        return parse_algebra(p.read_text(encoding="utf-8"))
    try:
        return corpus_algebra(p.name)
    except KeyError:
        raise UsageError(f"no such file or corpus algebra: {path}") from None


def _partition(alg: Algebra, text: str) -> Partition:
    return Partition.parse(text, alg.size)


def _pair(alg: Algebra, text: str) -> tuple[int, int]:
    try:
        u, v = (int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--pair expects u,v, got {text!r}") from None
    if not (0 <= u < alg.size and 0 <= v < alg.size):
        raise UsageError(f"pair ({u},{v}) outside 0..{alg.size - 1}")
    return u, v


def cmd_con(args, out) -> int:
    alg = load(args.file)
    out.append(render(format_lattice(congruence_lattice(alg)), args.porcelain))
    return OK


def cmd_comm(args, out) -> int:
    alg = load(args.file)
    a, b = _partition(alg, args.alpha), _partition(alg, args.beta)
    fn = {"tc": tc_commutator, "sym": sym_commutator, "lin": lin_commutator}[args.kind]
    result = fn(alg, a, b)
    out.append(render([(f"{args.kind}-commutator", str(result))], True)
               if args.porcelain else f"{result}\n")
    return OK


def cmd_chain(args, out) -> int:
    alg = load(args.file)
    r = commutator_chain_report(alg, _partition(alg, args.alpha), _partition(alg, args.beta))
    out.append(render(r.items(), args.porcelain))
    return OK if r.holds else COUNTEREXAMPLE


def cmd_witness(args, out) -> int:
    alg = load(args.file)
    a, b = _partition(alg, args.alpha), _partition(alg, args.beta)
    u, v = _pair(alg, args.pair)
    try:
        w = lin_witness(alg, a, b, u, v)
    except NotInCommutator as exc:
        out.append(render([("pair", f"({u},{v})"), ("in linear commutator", "no")],
                          args.porcelain))
        print(f"fincomm: {exc}", file=sys.stderr)
        return COUNTEREXAMPLE
    lab = labelling_witness(w)
    items = w.items() + [("note", "witness is valid but not minimized")]
    out.append(render(items, args.porcelain))
    text = lab.serialize()
    out.append(text)
    if args.verify:
        problems = w.problems()
        if lab is not REFLEXIVE:
            problems += lab.problems(alg, a, b)
        if parse_labelling_witness(text) != lab:
            problems.append("serialized labelling does not parse back to itself")
        for p in problems:
            out.append(render([("problem", p)], args.porcelain))
        out.append(render([("verified", "yes" if not problems else "no")], args.porcelain))
        if problems:
            return COUNTEREXAMPLE
    return OK


def cmd_classify(args, out) -> int:
    c = classify(load(args.file), args.budget)
    if args.porcelain:
        out.append(render(c.items(), True))
    else:
        out.append(c.headline() + "\n")
        out.append(render(c.items()[3:]))
    return OK if c.affine is not None else BUDGET


def cmd_delta(args, out) -> int:
    alg = load(args.file)
    delta = _partition(alg, args.delta)
    ctx = square_context(alg, delta)
    items = [("delta", str(delta)), ("square size", str(len(ctx.square.pairs))),
             ("Delta_delta", ctx.describe(ctx.Delta))]
    alpha = _partition(alg, args.alpha) if args.alpha else delta
    beta = _partition(alg, args.beta) if args.beta else delta
    rep = theorem35_check(alg, alpha, beta)
    items += rep.items()
    if delta.is_total:
        items += complement_check(alg).items()
    out.append(render(items, args.porcelain))
    return OK if rep.consistent else COUNTEREXAMPLE


def cmd_taylor(args, out) -> int:
    alg = load(args.file)
    cert = find_lemma43_term(alg, args.max_arity, args.budget)
    if not cert:
        out.append(render([("found", "no"), ("reason", cert.reason)], args.porcelain))
        return COUNTEREXAMPLE if cert.complete else BUDGET
    out.append(render([("found", "yes"), ("scope", "identities hold in the variety; "
                                          "term found among this algebra's term operations")],
                      args.porcelain))
    out.append(cert.serialize())
    if args.lemma49:
        out.append(render(check_lemma49_term(alg, cert.f, args.alphabet).items(),
                          args.porcelain))
    return OK


def cmd_wdiff(args, out) -> int:
    alg = load(args.file)
    finder = find_difference_term if args.exact else find_weak_difference_term
    d = finder(alg, args.budget)
    kind = "difference" if args.exact else "weak difference"
    scope = ("scope", "checked on this algebra only, not on its whole variety")
    if isinstance(d, NotFound):
        out.append(render([("found", "no"), ("kind", kind), ("reason", d.reason), scope],
                          args.porcelain))
        return COUNTEREXAMPLE if d.complete else BUDGET
    out.append(render([("found", "yes"), ("kind", kind), ("term", str(d.term)), scope],
                      args.porcelain))
    return OK


def cmd_ceq(args, out) -> int:
    alg = load(args.file)
    c = parse_ceq(Path(args.eqfile).read_text(encoding="utf-8"), commutator=not args.strict)
    res = check_ceq_universal(alg, c, args.budget_ceq)
    out.append(render([("statement", format_ceq(c).strip().splitlines()[-1])] + res.items(),
                      args.porcelain))
    return OK if res.holds else COUNTEREXAMPLE


def cmd_synth46(args, out) -> int:
    data = CeqSynthesisData.parse(Path(args.datafile).read_text(encoding="utf-8"))
    inc = synthesize_lemma46_inclusion(data)
    out.append(format_ceq(inc))
    if args.counterexample:
        out.append(render(lemma46_counterexample(data).items(), args.porcelain))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fincomm", description="Commutators and Mal'cev conditions "
                "for finite algebras.")
    p.add_argument("--porcelain", action="store_true", help="key<TAB>value output")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="element budget for free-algebra closures")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        s = sub.add_parser(name, help=help_text)
        s.set_defaults(fn=fn)
        s.add_argument("--porcelain", action="store_true", default=argparse.SUPPRESS)
        return s

    s = add("con", cmd_con, "congruence lattice")
    s.add_argument("file")
    s = add("comm", cmd_comm, "one commutator")
    s.add_argument("file")
    s.add_argument("--alpha", required=True)
    s.add_argument("--beta", required=True)
    s.add_argument("--kind", choices=("tc", "sym", "lin"), default="tc")
    s = add("chain", cmd_chain, "[a,b] <= [a,b]_s <= [a,b]_l <= a^b")
    s.add_argument("file")
    s.add_argument("--alpha", required=True)
    s.add_argument("--beta", required=True)
    s = add("witness", cmd_witness, "linear-commutator witness and its labelling")
    s.add_argument("file")
    s.add_argument("--alpha", required=True)
    s.add_argument("--beta", required=True)
    s.add_argument("--pair", required=True)
    s.add_argument("--verify", action="store_true")
    s = add("classify", cmd_classify, "abelian / quasi-affine / affine")
    s.add_argument("file")
    s = add("delta", cmd_delta, "Delta_delta and the square-meet report")
    s.add_argument("file")
    s.add_argument("--delta", required=True)
    s.add_argument("--alpha")
    s.add_argument("--beta")
    s = add("taylor", cmd_taylor, "two-variable identity system of an idempotent term")
    s.add_argument("file")
    s.add_argument("--max-arity", type=int, default=3)
    s.add_argument("--lemma49", action="store_true",
                   help="also check the distinct-variable-set condition for the term")
    s.add_argument("--alphabet", type=int, default=2)
    s = add("wdiff", cmd_wdiff, "weak difference term search")
    s.add_argument("file")
    s.add_argument("--exact", action="store_true", help="search for a difference term")
    s = add("ceq", cmd_ceq, "check a congruence equation")
    s.add_argument("file")
    s.add_argument("eqfile")
    s.add_argument("--strict", action="store_true", help="disable commutator atoms")
    s.add_argument("--budget-ceq", type=int, default=10_000_000)
    s = add("synth46", cmd_synth46, "congruence inclusion from two-variable identities")
    s.add_argument("datafile")
    s.add_argument("--counterexample", action="store_true")
    return p


def run(argv: list[str]) -> tuple[int, str]:
    """Run a command; returns the exit code and the report text."""
    out: list[str] = []
    try:
        args = build_parser().parse_args(argv)
        code = args.fn(args, out)
    except UsageError as exc:
        print(f"fincomm: {exc}", file=sys.stderr)
        return USAGE, "".join(out)
    except BudgetExceeded as exc:
        print(f"fincomm: {exc}", file=sys.stderr)
        return BUDGET, "".join(out)
    except (AlgebraError, PartitionError, CeqSyntaxError, CeqEvalError, ValueError,
            OSError) as exc:
        print(f"fincomm: {exc}", file=sys.stderr)
        return USAGE, "".join(out)
    return code, "".join(out)


def main(argv: list[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
