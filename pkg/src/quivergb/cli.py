"""Command-line interface: generator listings, Groebner checks, chain
certificates, S-pair decompositions, tensor utilities, and independence
ideals.  Exit codes: 0 verified/success, 1 property refuted, 2 bad input."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .poly import QQ, DomainError, InputError, PrimeField, render
from .layout import build_layout, default_order, parse_order_file, parse_quiver
from .minors import natural_generators, parse_minor_spec, render_minor_spec
from .groebner import buchberger_check, initial_ideal_gens, is_squarefree
from . import spair, tensors


def _field_of(args):
    p = getattr(args, "field", 0)
    return PrimeField(p) if p else QQ


def _load_layout(args):
    if getattr(args, "quiver", None):
        path = Path(args.quiver)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read quiver file: {exc}") from None
        spec = parse_quiver(text)
        layout = build_layout(spec)
        if spec.order_file:
            opath = path.parent / spec.order_file
            try:
                ord = parse_order_file(layout, opath.read_text())
            except OSError as exc:
                raise InputError(f"cannot read order file: {exc}") from None
        else:
            ord = default_order(layout)
        return layout, ord
    # double determinantal shorthand
    layout = build_layout(tensors.double_det_spec(args.m, args.n, args.r,
                                                  args.u, args.v))
    return layout, default_order(layout)


def _gens(layout, ord, field, out):
    lines = []
    for ref, poly in natural_generators(layout, field):
        lines.append(f"{render_minor_spec(ref)} {render(poly, ord, layout.var_name)}")
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _check(layout, ord, field, args):
    polys = [p for _, p in natural_generators(layout, field)]
    report = buchberger_check(polys, ord,
                              coprime_skip=not args.no_coprime_skip,
                              fail_fast=args.fail_fast,
                              threads=args.threads)
    print(report.render(ord, layout.var_name, machine=True))
    return 0 if report.is_groebner else 1


def _certify(layout, ord, field, args):
    refs = [ref for ref, _ in natural_generators(layout, field)]
    if args.pairs == "all":
        wanted = [(i, j) for i in range(len(refs)) for j in range(i + 1, len(refs))]
    else:
        try:
            i, j = (int(x) for x in args.pairs.split(","))
        except ValueError:
            raise InputError(f"bad --pairs value {args.pairs!r}") from None
        if not (0 <= i < len(refs) and 0 <= j < len(refs)):
            raise InputError("pair index out of range")
        wanted = [(i, j)]
    failures = 0
    for i, j in wanted:
        cert = spair.build_chain(layout, refs[i], refs[j], ord, field)
        ok = spair.verify_chain(layout, cert, ord, field)
        print(f"pair {i} {j} chain {len(cert.refs)} verified {'true' if ok else 'false'}")
        if len(wanted) == 1:
            print(spair.render_certificate(layout, cert, ord))
        if not ok:
            failures += 1
    print(f"certified: {len(wanted) - failures}/{len(wanted)}")
    return 0 if failures == 0 else 1


def _spair(layout, ord, field, args):
    from .minors import expand_minor
    from .poly import s_polynomial
    M = parse_minor_spec(args.m1)
    N = parse_minor_spec(args.m2)
    pm, pn = expand_minor(layout, M, field), expand_minor(layout, N, field)
    S = s_polynomial(pm, pn, ord)
    print("S " + render(S, ord, layout.var_name))
    if args.decompose:
        d = spair.p_decomposition(layout, M, N, ord, field)
        print(spair.render_decomposition(layout, d, ord))
        an = spair.analyze(layout, M, N, ord, field)
        small = spair.has_small_lts(layout, d, an.L, ord, field)
        ok = spair.expand_decomposition(layout, d, field) == S
        print(f"identity {'true' if ok else 'false'} small-lts {'true' if small else 'false'}")
        return 0 if ok else 1
    return 0


def _init_ideal(layout, ord, field):
    polys = [p for _, p in natural_generators(layout, field)]
    monos = initial_ideal_gens(polys, ord)
    for m in monos:
        print(render(_mono_poly(m, field), ord, layout.var_name))
    print(f"squarefree {'true' if is_squarefree(monos) else 'false'}")
    return 0


def _mono_poly(m, field):
    from .poly import Polynomial
    return Polynomial({m: field.of(1)})


def _read_tensor(path):
    try:
        return tensors.parse_tensor(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read tensor file: {exc}") from None


def _axes_list(text):
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad axis list {text!r}") from None


def _print_matrix(M):
    for row in M:
        print(" ".join(str(v) for v in row))


def _tensor(args):
    X = _read_tensor(args.data)
    if args.tverb == "contract":
        out = tensors.contraction(X, _axes_list(args.axes))
        if isinstance(out, tensors.Tensor):
            sys.stdout.write(tensors.render_tensor(out))
        else:
            print(out)
    elif args.tverb == "scan":
        for i, piece in enumerate(tensors.scan(X, args.axis), start=1):
            print(f"slice {i}")
            sys.stdout.write(tensors.render_tensor(piece))
    else:
        _print_matrix(tensors.flatten(X, args.axis))
    return 0


def _triple_eq(args):
    res = tensors.triple_eq_check(args.m, args.n, args.r, args.u, args.v, args.w,
                                  _field_of(args))
    print(f"predicted {'equal' if res.predicted else 'different'}")
    if res.predicted:
        print(f"reduced {res.evidence['reduced']}/{res.evidence['total']}")
    else:
        print("witness ranks " + " ".join(map(str, res.evidence["ranks"])))
    print(f"verified {'true' if res.verified else 'false'}")
    return 0 if res.verified else 1


def _indep(args):
    shape = _axes_list(args.shape)
    stmts = [tensors.parse_statement(s) for s in args.statements.split(",")]
    gens = tensors.independence_ideal(shape, stmts, _field_of(args))
    ord = tensors.tensor_var_order(shape)
    namer = tensors.tensor_var_namer(shape)
    for g in gens:
        print(render(g, ord, namer))
    print(f"generators {len(gens)}")
    return 0


def _add_quiver_flags(p):
    p.add_argument("--quiver", required=True, help="quiver config file")
    p.add_argument("--field", type=int, default=0, metavar="P",
                   help="work over GF(P) instead of the rationals")


def _add_check_flags(p):
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-coprime-skip", action="store_true")
    p.add_argument("--fail-fast", action="store_true")


def build_parser():
    ap = argparse.ArgumentParser(prog="quivergb")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gens", help="print the natural generators")
    _add_quiver_flags(p)
    p.add_argument("--out", help="write to file instead of stdout")

    p = sub.add_parser("check", help="verify the Groebner property by S-pair reduction")
    _add_quiver_flags(p)
    _add_check_flags(p)

    p = sub.add_parser("certify", help="chain certificates per generator pair")
    _add_quiver_flags(p)
    p.add_argument("--pairs", default="all", help="'all' or 'i,j'")

    p = sub.add_parser("spair", help="S-polynomial and decomposition of two minors")
    _add_quiver_flags(p)
    p.add_argument("--m1", required=True, help="minor spec vertex:r1,..;c1,..")
    p.add_argument("--m2", required=True)
    p.add_argument("--decompose", action="store_true")

    p = sub.add_parser("init-ideal", help="initial ideal generators")
    _add_quiver_flags(p)

    p = sub.add_parser("double", help="double determinantal shorthand")
    for flag in "mnruv":
        p.add_argument(f"--{flag}", type=int, required=True)
    p.add_argument("subverb", choices=["gens", "check", "certify", "init-ideal"])
    p.add_argument("--field", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--pairs", default="all")
    _add_check_flags(p)

    p = sub.add_parser("tensor", help="tensor utilities")
    tsub = p.add_subparsers(dest="tverb", required=True)
    tc = tsub.add_parser("contract")
    tc.add_argument("--data", required=True)
    tc.add_argument("--axes", required=True, help="comma-separated axes to sum out")
    ts = tsub.add_parser("scan")
    ts.add_argument("--data", required=True)
    ts.add_argument("--axis", type=int, required=True)
    tf = tsub.add_parser("flatten")
    tf.add_argument("--data", required=True)
    tf.add_argument("--axis", type=int, required=True)

    p = sub.add_parser("triple-eq", help="double vs triple ideal equality check")
    for flag in "mnruvw":
        p.add_argument(f"--{flag}", type=int, required=True)
    p.add_argument("--field", type=int, default=0)

    p = sub.add_parser("indep", help="independence ideal generators")
    p.add_argument("--shape", required=True, help="comma-separated table shape")
    p.add_argument("--statements", required=True,
                   help="comma-separated: a_b | a|rest | a_b|c | a|rest:s")
    p.add_argument("--field", type=int, default=0)

    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.verb in ("gens", "check", "certify", "spair", "init-ideal", "double"):
            layout, ord = _load_layout(args)
            field = _field_of(args)
            verb = args.subverb if args.verb == "double" else args.verb
            if verb == "gens":
                return _gens(layout, ord, field, getattr(args, "out", None))
            if verb == "check":
                return _check(layout, ord, field, args)
            if verb == "certify":
                return _certify(layout, ord, field, args)
            if verb == "spair":
                return _spair(layout, ord, field, args)
            return _init_ideal(layout, ord, field)
        if args.verb == "tensor":
            return _tensor(args)
        if args.verb == "triple-eq":
            return _triple_eq(args)
        return _indep(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
