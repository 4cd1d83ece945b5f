"""Command-line front end.

Verbs are grouped by module: ``qg`` (tables), ``ca`` (rules and words),
``mu`` (measures), ``eca`` (group/endomorphism analysis), plus
``paper-suite`` and ``export-fixtures``.  Inputs are file paths or ``@`` specs
naming built-ins (see fixtures).  Reports are TSV with a header row;
rationals print as p/q and floats with 12 significant digits.

Exit codes: 0 success, 1 analysis failure or falsification, 2 bad input,
3 resource bound exceeded.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import automaton as ca
from . import eca as eca_mod
from . import matfp
from . import measure as mu
from . import quasigroup as qg
from .errors import AnalysisError, BoundError, InputError, ParseError
from .fixtures import (export_fixtures, resolve_group, resolve_matrix,
                       resolve_measure, resolve_rule, resolve_table)
from .measure import format_fraction, parse_fraction
from .suite import paper_suite


def _fmt_float(v: float) -> str:
    return f"{v:.12g}"


def _parse_word(text: str, symbols, n: int) -> tuple[int, ...]:
    tokens = text.split()
    out = []
    for tok in tokens:
        if symbols is not None and tok in symbols:
            out.append(symbols.index(tok))
            continue
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"unknown symbol {tok!r}") from None
        if not 0 <= v < n:
            raise ParseError(f"symbol index {v} outside 0..{n - 1}")
        out.append(v)
    return tuple(out)


def _names(word, symbols) -> str:
    if symbols is None:
        return " ".join(str(s) for s in word)
    return " ".join(symbols[s] for s in word)


def _emit(text: str, out_path) -> None:
    if out_path:
        from pathlib import Path
        Path(out_path).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# qg

def _cmd_qg_validate(args) -> int:
    q = resolve_table(args.table)
    print(f"LATIN OK N={q.order}")
    return 0


def _cmd_qg_dual(args) -> int:
    q = resolve_table(args.table)
    _emit(qg.format_table(qg.dual(q)), args.out)
    return 0


def _cmd_qg_sub(args) -> int:
    q = resolve_table(args.table)
    subs = qg.subquasigroups(q, include_trivial=args.include_trivial)
    lines = ["size\tmembers"]
    for s in subs:
        lines.append(f"{len(s)}\t" + " ".join(q.symbols[i] for i in s))
    _emit("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------
# ca

def _cmd_ca_step(args) -> int:
    rule, symbols = resolve_rule(args.rule)
    w = _parse_word(args.word, symbols, rule.alphabet_size)
    for _ in range(args.times):
        w = ca.step(rule, w)
    _emit(_names(w, symbols), args.out)
    return 0


def _cmd_ca_orbit(args) -> int:
    rule, symbols = resolve_rule(args.rule)
    w = _parse_word(args.word, symbols, rule.alphabet_size)
    pre, per = ca.orbit_period(rule, w)
    _emit(f"preperiod={pre} period={per}", args.out)
    return 0


def _cmd_ca_fiber(args) -> int:
    rule, symbols = resolve_rule(args.rule)
    w = _parse_word(args.word, symbols, rule.alphabet_size)
    lines = ["first_symbol\tpreimage"]
    for b, f in enumerate(ca.fiber_preimages(rule, w)):
        name = symbols[b] if symbols else str(b)
        lines.append(f"{name}\t{_names(f, symbols)}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_ca_xi(args) -> int:
    rule, symbols = resolve_rule(args.rule)
    w = _parse_word(args.word, symbols, rule.alphabet_size)
    out = ca.xi_inverse(rule, w) if args.inverse else ca.xi(rule, w)
    _emit(_names(out, symbols), args.out)
    return 0


def _cmd_ca_dual(args) -> int:
    rule, _ = resolve_rule(args.rule)
    _emit(ca.format_rule(ca.dual_rule(rule)), args.out)
    return 0


def _cmd_ca_recode(args) -> int:
    rule, _ = resolve_rule(args.rule)
    rec = ca.recode_block(rule)
    lines = [f"block={rec.block} alphabet={rec.rule.alphabet_size}"]
    if args.word:
        w = _parse_word(args.word, None, rule.alphabet_size)
        enc = rec.encode(w)
        lines.append("encoded\t" + " ".join(str(v) for v in enc))
        lines.append("stepped\t" + " ".join(str(v)
                                            for v in ca.step(rec.rule, enc)))
    lines.append(ca.format_rule(rec.rule).rstrip("\n"))
    _emit("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------
# mu

def _cmd_mu_eval(args) -> int:
    doc = resolve_measure(args.measure)
    w = _parse_word(args.word, doc.symbols, doc.measure.alphabet_size)
    _emit(format_fraction(mu.eval_cylinder(doc.measure, w)), args.out)
    return 0


def _cmd_mu_invariance(args) -> int:
    doc = resolve_measure(args.measure)
    rule = None
    if args.ca:
        rule, _ = resolve_rule(args.ca)
    rep = mu.invariance_report(doc.measure, args.depth, rule)
    worst = "-" if rep.worst_word is None else _names(rep.worst_word, doc.symbols)
    _emit(f"transform={rep.transform} depth={rep.depth} "
          f"max_dev={format_fraction(rep.max_abs_deviation)} worst={worst}",
          args.out)
    return 0 if rep.max_abs_deviation == 0 else 1


def _cmd_mu_entropy(args) -> int:
    doc = resolve_measure(args.measure)
    lines = ["depth\tblock_entropy\tincrement"]
    profile = mu.entropy_rate_profile(doc.measure, args.depth) \
        if args.depth >= 2 else []
    for k in range(1, args.depth + 1):
        h = mu.block_entropy(doc.measure, k)
        inc = _fmt_float(profile[k - 2]) if k >= 2 else "-"
        lines.append(f"{k}\t{_fmt_float(h)}\t{inc}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_mu_conditional(args) -> int:
    doc = resolve_measure(args.measure)
    w = _parse_word(args.word, doc.symbols, doc.measure.alphabet_size)
    dist = mu.conditional_dist(doc.measure, w)
    lines = ["symbol\tweight"]
    for b, v in enumerate(dist):
        name = doc.symbols[b] if doc.symbols else str(b)
        lines.append(f"{name}\t{format_fraction(v)}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_mu_cmeasure(args) -> int:
    doc = resolve_measure(args.measure)
    g = resolve_group(args.group)
    members = [g.index(tok) if not tok.isdigit() else int(tok)
               for tok in args.subgroup.split()]
    rep = mu.coset_measure_check(doc.measure, g, members, args.depth,
                                 args.mass_floor)
    lines = [f"passed={rep.passed} depth={rep.depth} "
             f"checked={rep.words_checked} "
             f"shift_dev={format_fraction(rep.shift_deviation)}"]
    if not rep.passed:
        lines.append(f"worst={_names(rep.worst_word, doc.symbols)} "
                     f"reason={rep.worst_reason}")
    _emit("\n".join(lines), args.out)
    return 0 if rep.passed else 1


def _cmd_mu_fibers(args) -> int:
    doc = resolve_measure(args.measure)
    rule, _ = resolve_rule(args.rule)
    rep = mu.fiber_spectrum(doc.measure, rule, args.depth, args.mass_floor)
    lines = ["word\ttotal_mass\tsupport\tweights"]
    for r in rep.rows:
        lines.append("\t".join((
            _names(r.word, doc.symbols), format_fraction(r.total_mass),
            str(r.support_count),
            " ".join(format_fraction(v) for v in r.weights))))
    eta = "nonconstant" if rep.eta_constant is None \
        else format_fraction(rep.eta_constant)
    lines.append(f"K_estimate={rep.K_estimate} eta={eta} "
                 f"entropy_check={_fmt_float(rep.entropy_check)} "
                 f"invariance_dev={format_fraction(rep.invariance_deviation)}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_mu_support(args) -> int:
    doc = resolve_measure(args.measure)
    symbols, full = mu.support_alphabet(doc.measure, args.depth)
    name = (lambda b: doc.symbols[b]) if doc.symbols else str
    _emit(f"symbols={' '.join(name(b) for b in sorted(symbols))}\n"
          f"full_shift_over_support={full}", args.out)
    return 0


def _cmd_mu_example11(args) -> int:
    g_c = resolve_group(args.group)
    from .groups import group_product, quaternion_group
    combined = group_product(g_c, quaternion_group())
    rule = ca.from_quasigroup(combined.quasigroup())
    m = mu.example11(g_c)
    d = args.depth
    shift = mu.invariance_report(m, d).max_abs_deviation
    phi = mu.invariance_report(m, d, rule).max_abs_deviation
    prof = mu.entropy_rate_profile(m, d + 1)
    lines = ["check\tvalue",
             f"alphabet\t{combined.order}",
             f"shift_dev\t{format_fraction(shift)}",
             f"ca_dev\t{format_fraction(phi)}",
             "entropy_increments\t" + " ".join(_fmt_float(v) for v in prof)]
    _emit("\n".join(lines), args.out)
    return 0 if shift == 0 and phi == 0 else 1


# ---------------------------------------------------------------------------
# eca

def _cmd_eca_decompose(args) -> int:
    rule, _ = resolve_rule(args.rule)
    g = resolve_group(args.group)
    dec = eca_mod.decompose_affine(rule, g)
    lines = [f"phi0_automorphism={dec.phi0_automorphism} "
             f"phi1_automorphism={dec.phi1_automorphism} "
             f"bipermutative={dec.bipermutative}"]
    if g.order <= 64:
        lines.append("a\tphi0(a)\tphi1(a)")
        for a in range(g.order):
            lines.append(f"{g.symbols[a]}\t{g.symbols[dec.phi0[a]]}\t"
                         f"{g.symbols[dec.phi1[a]]}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_eca_kernel(args) -> int:
    rule, _ = resolve_rule(args.rule)
    g = resolve_group(args.group)
    rep = eca_mod.kernel(rule, g)
    lines = ["symbol\trho\tperiod\tkernel_word"]
    shown = range(g.order) if g.order <= 64 else range(8)
    for a in shown:
        word = " ".join(g.symbols[v] for v in rep.zeta[a]) \
            if rep.periods[a] <= 16 else f"(period {rep.periods[a]})"
        lines.append(f"{g.symbols[a]}\t{g.symbols[rep.rho[a]]}\t"
                     f"{rep.periods[a]}\t{word}")
    if g.order > 64:
        lines.append(f"... {g.order - 8} more symbols")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_eca_orbits(args) -> int:
    rule, _ = resolve_rule(args.rule)
    g = resolve_group(args.group)
    rep = eca_mod.kernel(rule, g)
    orb = eca_mod.rho_orbits(rep.rho, g)
    lines = [f"orbits={len(orb.orbits)} single_orbit={orb.single_orbit}"]
    for cyc in orb.orbits[:64]:
        if len(cyc) <= 32:
            lines.append(" ".join(g.symbols[v] for v in cyc))
        else:
            lines.append(f"(cycle of length {len(cyc)} from {g.symbols[cyc[0]]})")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_eca_invsubgroups(args) -> int:
    g = resolve_group(args.group)
    rho = None
    if args.rule:
        rule, _ = resolve_rule(args.rule)
        rho = eca_mod.kernel(rule, g).rho
    subs = eca_mod.invariant_subgroups(g, rho)
    lines = ["order\tmembers"]
    for s in subs:
        lines.append(f"{len(s)}\t" + " ".join(g.symbols[i] for i in s))
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_eca_hmax(args) -> int:
    g = resolve_group(args.group)
    _emit(f"h_max={_fmt_float(eca_mod.h_max(g))}", args.out)
    return 0


def _cmd_eca_charpoly(args) -> int:
    m = resolve_matrix(args.matrix)
    _emit(f"char={matfp.p_str(matfp.char_poly(m))}\n"
          f"min={matfp.p_str(matfp.min_poly(m))}", args.out)
    return 0


def _cmd_eca_rcf(args) -> int:
    m = resolve_matrix(args.matrix)
    result = matfp.rcf(m)
    lines = [f"simple={result.simple} blocks={len(result.invariant_factors)}"]
    for f in result.invariant_factors:
        lines.append(matfp.p_str(f))
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_eca_invsubspaces(args) -> int:
    m = resolve_matrix(args.matrix)
    spaces = matfp.invariant_subspaces(m)
    lines = [f"count={len(spaces)}"]
    for basis in spaces:
        lines.append(f"dim={len(basis)}\t" +
                     " | ".join(" ".join(str(v) for v in row) for row in basis))
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_eca_audit(args) -> int:
    rule, _ = resolve_rule(args.rule)
    g = resolve_group(args.group)
    rep = eca_mod.lemma_audit(g, rule)
    lines = [
        f"single_orbit={rep.single_orbit} orbit_count={len(rep.orbits)}",
        f"has_invariant_subgroup={rep.has_invariant_subgroup} "
        f"method={rep.subgroup_method}",
        f"kernel_lemma={rep.kernel_lemma_verdict}",
    ]
    if rep.subgroup_witness:
        shown = " ".join(g.symbols[i] for i in rep.subgroup_witness[:16])
        lines.append(f"subgroup_witness=[{shown}]"
                     f" order={len(rep.subgroup_witness)}")
    if rep.linear:
        blocks = [matfp.p_str(f) for f in rep.invariant_factors]
        lines.append(f"simple={rep.simple} blocks={blocks}")
        lines.append(f"eigenvalue_scan={list(rep.eigenvalues)}")
        lines.append(f"has_invariant_subspace={rep.has_invariant_subspace}")
        if rep.subspace_witness:
            basis = " | ".join(" ".join(str(v) for v in row)
                               for row in rep.subspace_witness)
            lines.append(f"subspace_witness={basis}")
        lines.append(f"rcf_lemma={rep.rcf_lemma_verdict}")
    _emit("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------
# suite and fixtures

def _cmd_paper_suite(args) -> int:
    rows = paper_suite(depth=args.depth, seed=args.seed)
    lines = ["criterion\tname\tstatus\tdetail"]
    for r in rows:
        lines.append(f"{r.criterion}\t{r.name}\t{r.status}\t{r.detail}")
    _emit("\n".join(lines), args.out)
    return 1 if any(r.status == "FAIL" for r in rows) else 0


def _cmd_export_fixtures(args) -> int:
    written = export_fixtures(args.directory)
    print("\n".join(written))
    return 0


# ---------------------------------------------------------------------------
# parser assembly

def _add_common(p: argparse.ArgumentParser, *, depth: int | None = None,
                mass_floor: bool = False) -> None:
    p.add_argument("--out", default=None, help="write the report to a file")
    p.add_argument("--jobs", type=int, default=1,
                   help="reserved; sweeps currently run sequentially")
    if depth is not None:
        p.add_argument("--depth", type=int, default=depth)
    if mass_floor:
        p.add_argument("--mass-floor", type=parse_fraction,
                       default=Fraction(0), dest="mass_floor",
                       metavar="P/Q")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="qgca",
        description="exact quasigroup-CA, cylinder-measure, and "
                    "endomorphic-CA analysis")
    sub = top.add_subparsers(dest="command", required=True)

    qg_p = sub.add_parser("qg", help="quasigroup tables").add_subparsers(
        dest="verb", required=True)
    p = qg_p.add_parser("validate")
    p.add_argument("table")
    _add_common(p)
    p.set_defaults(fn=_cmd_qg_validate)
    p = qg_p.add_parser("dual")
    p.add_argument("table")
    _add_common(p)
    p.set_defaults(fn=_cmd_qg_dual)
    p = qg_p.add_parser("sub")
    p.add_argument("table")
    p.add_argument("--include-trivial", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_qg_sub)

    ca_p = sub.add_parser("ca", help="rules and words").add_subparsers(
        dest="verb", required=True)
    p = ca_p.add_parser("step")
    p.add_argument("rule")
    p.add_argument("word")
    p.add_argument("--times", type=int, default=1)
    _add_common(p)
    p.set_defaults(fn=_cmd_ca_step)
    p = ca_p.add_parser("orbit")
    p.add_argument("rule")
    p.add_argument("word")
    _add_common(p)
    p.set_defaults(fn=_cmd_ca_orbit)
    p = ca_p.add_parser("fiber")
    p.add_argument("rule")
    p.add_argument("word")
    _add_common(p)
    p.set_defaults(fn=_cmd_ca_fiber)
    p = ca_p.add_parser("xi")
    p.add_argument("rule")
    p.add_argument("word")
    p.add_argument("--inverse", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_ca_xi)
    p = ca_p.add_parser("dual")
    p.add_argument("rule")
    _add_common(p)
    p.set_defaults(fn=_cmd_ca_dual)
    p = ca_p.add_parser("recode")
    p.add_argument("rule")
    p.add_argument("word", nargs="?", default=None)
    _add_common(p)
    p.set_defaults(fn=_cmd_ca_recode)

    mu_p = sub.add_parser("mu", help="cylinder measures").add_subparsers(
        dest="verb", required=True)
    p = mu_p.add_parser("eval")
    p.add_argument("measure")
    p.add_argument("word")
    _add_common(p)
    p.set_defaults(fn=_cmd_mu_eval)
    p = mu_p.add_parser("invariance")
    p.add_argument("measure")
    p.add_argument("--ca", default=None, metavar="RULE")
    p.add_argument("--shift", action="store_true",
                   help="check the shift (default when --ca is absent)")
    _add_common(p, depth=4)
    p.set_defaults(fn=_cmd_mu_invariance)
    p = mu_p.add_parser("entropy")
    p.add_argument("measure")
    _add_common(p, depth=5)
    p.set_defaults(fn=_cmd_mu_entropy)
    p = mu_p.add_parser("conditional")
    p.add_argument("measure")
    p.add_argument("word")
    _add_common(p)
    p.set_defaults(fn=_cmd_mu_conditional)
    p = mu_p.add_parser("cmeasure")
    p.add_argument("measure")
    p.add_argument("group")
    p.add_argument("--subgroup", required=True,
                   help="subgroup members, space-separated names or indices")
    _add_common(p, depth=4, mass_floor=True)
    p.set_defaults(fn=_cmd_mu_cmeasure)
    p = mu_p.add_parser("fibers")
    p.add_argument("measure")
    p.add_argument("rule")
    _add_common(p, depth=3, mass_floor=True)
    p.set_defaults(fn=_cmd_mu_fibers)
    p = mu_p.add_parser("support")
    p.add_argument("measure")
    _add_common(p, depth=3)
    p.set_defaults(fn=_cmd_mu_support)
    p = mu_p.add_parser("example11")
    p.add_argument("group", help="the factor group C (file or @spec)")
    _add_common(p, depth=4)
    p.set_defaults(fn=_cmd_mu_example11)

    eca_p = sub.add_parser("eca", help="endomorphic-CA analysis").add_subparsers(
        dest="verb", required=True)
    for verb, fn, needs in (
            ("decompose", _cmd_eca_decompose, ("rule", "group")),
            ("kernel", _cmd_eca_kernel, ("rule", "group")),
            ("orbits", _cmd_eca_orbits, ("rule", "group")),
            ("audit", _cmd_eca_audit, ("rule", "group")),
            ("hmax", _cmd_eca_hmax, ("group",)),
            ("charpoly", _cmd_eca_charpoly, ("matrix",)),
            ("rcf", _cmd_eca_rcf, ("matrix",)),
            ("invsubspaces", _cmd_eca_invsubspaces, ("matrix",))):
        p = eca_p.add_parser(verb)
        for arg in needs:
            p.add_argument(arg)
        _add_common(p)
        p.set_defaults(fn=fn)
    p = eca_p.add_parser("invsubgroups")
    p.add_argument("group")
    p.add_argument("--rule", default=None,
                   help="derive rho from this rule's kernel")
    _add_common(p)
    p.set_defaults(fn=_cmd_eca_invsubgroups)

    p = sub.add_parser("paper-suite", help="run every acceptance scenario")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=_cmd_paper_suite)

    p = sub.add_parser("export-fixtures", help="write the builtin example files")
    p.add_argument("directory")
    p.set_defaults(fn=_cmd_export_fixtures)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except BoundError as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return 3
    except AnalysisError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
