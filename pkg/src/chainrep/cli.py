"""Command line interface: ``chainrep <subcommand> ...``.

Output is deterministic.  ``--json`` prints canonical JSON (sorted keys);
otherwise a short human-readable summary is printed.  Exit codes: 0 success,
1 failed verification, 2 usage or input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .chain_ring import RingSpec
from .group_engine import BudgetExceeded
from .matrix_algebra import RMatrix

EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# input helpers


def _load_json(arg: str):
    text = arg.strip()
    if text.startswith(("{", "[")):
        return json.loads(text)
    path = Path(arg)
    if not path.exists():
        raise UsageError(f"no such file: {arg}")
    return json.loads(path.read_text())


def resolve_ring(args) -> RingSpec:
    if getattr(args, "ring", None):
        text = args.ring.strip()
        return RingSpec.from_json(json.loads(text)) if text.startswith("{") else RingSpec.parse(text)
    if getattr(args, "p", None) is not None and getattr(args, "r", None) is not None:
        return RingSpec(args.kind, args.p, args.m, args.r)
    raise UsageError("give --ring NAME or --p P --r R")


def load_matrix(arg: str, spec: RingSpec | None = None) -> RMatrix:
    """A matrix from a JSON file, inline JSON object, or inline rows read in ``spec``."""
    data = _load_json(arg)
    if isinstance(data, dict):
        return RMatrix.from_json(data)
    if spec is None:
        raise UsageError("inline rows need a ring")
    return RMatrix.from_json({"ring": spec.to_json(), "n": len(data), "entries": data})


def _rows(M: RMatrix) -> list:
    return [[M.spec.encode(x) for x in row] for row in M.rows()]


def emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


# --------------------------------------------------------------------------
# ring, mat, jcf, centralizer, stable


def cmd_ring(args) -> int:
    R = resolve_ring(args)
    units = sum(1 for a in R.elements() if R.is_unit(a))
    out = {"ring": R.to_json(), "name": R.name, "size": R.size, "q": R.q, "units": units}
    if args.element is not None:
        a = R.decode(json.loads(args.element))
        info = {"element": R.encode(a), "valuation": R.valuation(a), "residue": R.residue(a)}
        if R.is_unit(a):
            info["inverse"] = R.encode(R.inv(a))
        info["teichmullerOfResidue"] = R.encode(R.teichmuller(R.residue(a)))
        out["elementInfo"] = info
    lines = [f"{R.name}: size {R.size}, residue field F_{R.q}, {units} units"]
    if "elementInfo" in out:
        lines.append(f"element {out['elementInfo']}")
    emit(args, out, "\n".join(lines))
    return 0


def cmd_mat(args) -> int:
    from .centralizer import commutant
    from .matrix_algebra import conjugate, mat_reduce, mat_section

    M = load_matrix(args.matrix, _maybe_ring(args))
    op = args.op
    if op == "det":
        d = M.det()
        out = {"det": M.spec.encode(d.code)}
        text = f"det = {M.spec.format(d.code)}"
    elif op == "inv":
        Mi = M.inv()
        out = {"inverse": Mi.to_json()}
        text = repr(Mi)
    elif op == "conj":
        if not args.by:
            raise UsageError("mat conj needs --by MATRIX")
        g = load_matrix(args.by, M.spec)
        C = conjugate(g, M)
        out = {"conjugate": C.to_json()}
        text = repr(C)
    elif op in ("reduce", "section"):
        if args.to is None:
            raise UsageError(f"mat {op} needs --to LENGTH")
        C = mat_reduce(M, args.to) if op == "reduce" else mat_section(M, args.to)
        out = {op: C.to_json()}
        text = repr(C)
    else:
        sol = commutant(M)
        out = {"cardinality": sol.cardinality, "basis": [list(b) for b in sol.basis]}
        text = f"commutant: {sol.cardinality} elements, Howell basis of {len(sol.basis)} rows"
    emit(args, out, text)
    return 0


def _maybe_ring(args) -> RingSpec | None:
    try:
        return resolve_ring(args)
    except UsageError:
        return None


def cmd_jcf(args) -> int:
    from .jordan import residue_jcf

    M = load_matrix(args.matrix, _maybe_ring(args))
    jf = residue_jcf(M)
    out = jf.to_json()
    blocks = ", ".join(f"J_{s}({jf.field_spec.format(e)})" for e, s in jf.blocks)
    emit(args, out, f"residue Jordan form over F_{jf.field_spec.q}: {blocks} (split degree {jf.split_degree})")
    return 0


def cmd_centralizer(args) -> int:
    from .centralizer import center_of_commutant, commutant, unit_commutant

    M = load_matrix(args.matrix, _maybe_ring(args))
    sol = commutant(M)
    out = {"commutant": {"cardinality": sol.cardinality, "basis": [list(b) for b in sol.basis]}}
    lines = [f"commutant: {sol.cardinality} elements"]
    if args.units:
        U = unit_commutant(M, args.budget)
        out["units"] = {"order": U.order}
        lines.append(f"unit centralizer: {U.order} elements")
    if args.center:
        Z, _ = center_of_commutant(M)
        out["center"] = {"cardinality": Z.cardinality, "basis": [list(b) for b in Z.basis]}
        lines.append(f"center of the commutant: {Z.cardinality} elements")
    emit(args, out, "\n".join(lines))
    return 0


def cmd_stable(args) -> int:
    from .stability import is_stable, matrix_classes

    if args.search:
        R = resolve_ring(args)
        if args.n is None:
            raise UsageError("stable --search needs --n")
        verdicts: dict[str, int] = {}
        unstable = []
        for rep in matrix_classes(R, args.n):
            M = RMatrix(R, args.n, rep)
            v = is_stable(M, args.budget).verdict
            verdicts[v] = verdicts.get(v, 0) + 1
            if v != "stable":
                unstable.append(_rows(M))
        out = {"ring": R.to_json(), "n": args.n, "verdicts": verdicts, "notStableClasses": unstable}
        emit(args, out, f"{R.name}, n = {args.n}: " + ", ".join(f"{k} {v}" for k, v in sorted(verdicts.items())))
        return 0
    if args.matrix is None:
        raise UsageError("stable needs a matrix (or --search)")
    M = load_matrix(args.matrix, _maybe_ring(args))
    cert = is_stable(M, args.budget)
    emit(args, cert.to_json(), f"{cert.verdict} ({cert.method})")
    return 0


# --------------------------------------------------------------------------
# char, heis, group


def _kernel_char(args):
    from .characters import KernelCharacter

    R = resolve_ring(args)
    if args.level is None:
        raise UsageError("char needs --level")
    M = load_matrix(args.matrix, R.with_length(R.r - args.level))
    return KernelCharacter(R, args.level, M)


def cmd_char(args) -> int:
    from .centralizer import unit_commutant
    from .characters import stabilizer_of_kernel_char
    from .group_engine import gl_order

    chi = _kernel_char(args)
    out = {"character": chi.to_json()}
    if args.op == "eval":
        if not args.element:
            raise UsageError("char eval needs --element")
        k = load_matrix(args.element, chi.spec)
        ph = chi(k.entries)
        out["value"] = {"numerator": ph.num, "denominator": ph.den}
        text = f"psi_M(k) = exp(2 pi i {ph.num}/{ph.den})"
    elif args.op == "orbit":
        S = chi.M.spec
        C = unit_commutant(chi.M, args.budget)
        size = gl_order(S, chi.n) // C.order
        out["orbitSize"] = size
        text = f"orbit of psi_M under G_r has {size} characters"
    else:
        rep = stabilizer_of_kernel_char(chi, args.budget)
        out["stabilizer"] = rep.to_json()
        text = f"|G_r(psi_M)| = {rep.table.order}; centralizer preimage agrees: {rep.hill_agrees}"
    emit(args, out, text)
    return 0


def cmd_heis(args) -> int:
    from . import heisenberg as hz

    R = resolve_ring(args)
    l, _lp = hz._check_params(R)
    Mhat = load_matrix(args.matrix, R.with_length(l))
    form = hz.gram(Mhat)
    if args.op == "form":
        out = form.to_json()
        emit(args, out, f"B_M has rank {form.rank()} on g_1 of dimension {form.dim}")
        return 0
    data = hz.radical_and_isotropic(form, reverse=args.reverse)
    if args.op == "isotropic":
        out = data.to_json()
        emit(args, out, f"radical dimension {data.dim_radical}, maximal isotropic dimension {data.dim_isotropic}")
        return 0
    setup = hz.setup_for(R, Mhat.n, args.budget)
    lifted = hz.LiftedCharacter(R, Mhat, data)
    if args.op == "lift":
        dom = hz.domain_elements(lifted, setup)
        out = {"Mhat": Mhat.to_json(), "domainOrder": len(dom), "isotropic": data.to_json()}
        if args.element:
            k = load_matrix(args.element, R)
            ph = lifted(k.entries)
            out["value"] = {"numerator": ph.num, "denominator": ph.den}
        emit(args, out, f"psi_Mhat defined on J_M of order {len(dom)}")
        return 0
    sigma = hz.induce_sigma(lifted, setup)
    if args.op == "induce":
        out = sigma.to_json()
        emit(args, out, f"sigma of degree {sigma.degree()}, digest {sigma.digest()}")
        return 0
    G = hz.sigma_stabilizer(sigma, args.budget)
    hill = hz.hill_preimage(Mhat, R, args.budget)
    out = {"order": G.order, "equalsCentralizerPreimage": G.same_elements(hill), "preimageOrder": hill.order}
    emit(args, out, f"|G_r(sigma)| = {G.order}; rho_l^-1(C(Mhat)) has order {hill.order}")
    return 0


def cmd_group(args) -> int:
    from .group_engine import commutator_subgroup, gl_order, sylow_p
    from .verify import group_data

    R = resolve_ring(args)
    n = args.n
    if args.op == "order":
        out = {"ring": R.to_json(), "n": n, "order": gl_order(R, n)}
        emit(args, out, f"|GL_{n}({R.name})| = {out['order']}")
        return 0
    G, T = group_data(R, n, args.budget)
    if args.op == "classes":
        sizes = sorted(T.sizes)
        out = {"order": G.order, "classes": len(T), "classSizes": sizes}
        text = f"{len(T)} conjugacy classes in a group of order {G.order}"
    elif args.op == "commutator":
        D = commutator_subgroup(G, args.budget)
        out = {"order": G.order, "commutatorOrder": D.order}
        text = f"|[G,G]| = {D.order}"
    else:
        q = args.prime or R.p
        P = sylow_p(G, q, args.budget)
        out = {"order": G.order, "prime": q, "sylowOrder": P.order}
        text = f"Sylow {q}-subgroup of order {P.order}"
    emit(args, out, text)
    return 0


# --------------------------------------------------------------------------
# verify and corpus


def _theorem_b_job(payload: tuple) -> dict:
    from .verify import verify_theorem_B

    ring_json, n, M_json, budget = payload
    R = RingSpec.from_json(ring_json)
    return verify_theorem_B(R, n, RMatrix.from_json(M_json), budget).to_json()


def run_theorem_b_all(R: RingSpec, n: int, budget: int | None, threads: int) -> list[dict]:
    """Every stable representative over O_l; results are ordered as the representatives."""
    from .verify import super_stable_representatives

    jobs = [(R.to_json(), n, M.to_json(), budget) for M in super_stable_representatives(R, n, budget)]
    if threads <= 1:
        return [_theorem_b_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_theorem_b_job, jobs))


def run_suite(suite: str, R: RingSpec, n: int, args) -> dict:
    """Run one verification suite and return its JSON report."""
    from . import verify as vf
    from .characters import ceil_half

    budget = args.budget
    l, _lp = ceil_half(R.r)
    if suite == "theorem-a":
        return vf.verify_theorem_A(R, n, load_matrix(args.matrix, R.with_length(l)), budget).report.to_json()
    if suite == "theorem-b":
        if args.all:
            reports = run_theorem_b_all(R, n, budget, args.threads)
            return {"suite": "theorem-b", "instances": len(reports), "pass": all(r["pass"] for r in reports), "reports": reports}
        return vf.verify_theorem_B(R, n, load_matrix(args.matrix, R.with_length(l)), budget).to_json()
    if suite == "r2-complete":
        return vf.verify_all_stable_r2(R, n, budget).to_json()
    if suite == "hill":
        B = None
        if args.B:
            B = load_matrix(args.B, R.with_length(l)).entries
        return vf.verify_hill_counterexample(R, n, args.a, B, budget).to_json()
    if suite == "det-lemma":
        return vf.verify_det_lemma(R, n, args.count).to_json()
    if suite == "commutator-blocks":
        from .centralizer import unit_commutant

        if not args.blocks:
            raise UsageError("commutator-blocks needs --blocks MATRIX [MATRIX ...]")
        tables = [unit_commutant(load_matrix(b, R), budget) for b in args.blocks]
        return vf.verify_commutator_blocks(tables, budget).to_json()
    raise UsageError(f"unknown suite {suite}")


def _report_text(report: dict) -> str:
    if "reports" in report:
        lines = [f"{report['suite']}: {report['instances']} instances, {'PASS' if report['pass'] else 'FAIL'}"]
        for r in report["reports"]:
            lines.append(f"  {'PASS' if r['pass'] else 'FAIL'} {r['instance'].get('Mhat')}")
        return "\n".join(lines)
    head = " ".join(f"{k}={v}" for k, v in report["instance"].items() if not isinstance(v, (dict, list)))
    lines = [f"{report['suite']} {head}: {'PASS' if report['pass'] else 'FAIL'}"]
    for c in report["checks"]:
        lines.append(f"  [{'ok  ' if c['pass'] else 'FAIL'}] {c['name']}: expected {c['expected']}, observed {c['observed']}")
    for k in sorted(report.get("witnesses", {})):
        lines.append(f"  {k}: {report['witnesses'][k]}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    R = resolve_ring(args)
    if args.n is None:
        raise UsageError("verify needs --n")
    if args.suite in ("theorem-a", "theorem-b") and not args.matrix and not getattr(args, "all", False):
        raise UsageError(f"verify {args.suite} needs --matrix (or --all for theorem-b)")
    report = run_suite(args.suite, R, args.n, args)
    emit(args, report, _report_text(report))
    return 0 if report["pass"] else EXIT_FAILED


def run_corpus_instance(inst, args) -> dict:
    from . import verify as vf
    from .characters import ceil_half
    from .stability import is_stable

    R = inst.spec
    budget = args.budget
    l, _lp = ceil_half(R.r)
    if inst.kind == "stable":
        cert = is_stable(inst.matrix_over(), budget)
        report = {"suite": "stable", "instance": {"name": inst.name}, "certificate": cert.to_json()}
        report["pass"] = cert.verdict == inst.expect.get("verdict", cert.verdict)
        report["checks"] = [{"name": "verdict", "expected": inst.expect.get("verdict"), "observed": cert.verdict, "pass": report["pass"]}]
        return report
    if inst.kind == "theorem-a":
        return vf.verify_theorem_A(R, inst.n, inst.matrix_over(l), budget).report.to_json()
    if inst.kind == "theorem-b":
        return vf.verify_theorem_B(R, inst.n, inst.matrix_over(l), budget).to_json()
    if inst.kind == "r2-complete":
        return vf.verify_all_stable_r2(R, inst.n, budget).to_json()
    if inst.kind == "hill":
        fam = inst.family or {}
        B = None
        if "B" in fam:
            B = RMatrix.from_json({"ring": R.with_length(l).to_json(), "n": inst.n, "entries": fam["B"]}).entries
        rep = vf.verify_hill_counterexample(R, inst.n, fam.get("a", 1), B, budget).to_json()
        for key in ("counterexample", "index"):
            if key in inst.expect:
                ok = rep["witnesses"][key] == inst.expect[key]
                rep["checks"].append({"name": f"corpus expectation {key}", "expected": inst.expect[key], "observed": rep["witnesses"][key], "pass": ok})
                rep["pass"] = rep["pass"] and ok
        return rep
    if inst.kind == "det-lemma":
        return vf.verify_det_lemma(R, inst.n, (inst.family or {}).get("count")).to_json()
    raise UsageError(f"unknown corpus kind {inst.kind}")


def cmd_corpus(args) -> int:
    from .corpus import corpus_get, corpus_list

    if args.op == "list":
        insts = corpus_list()
        out = {"instances": [i.to_json() for i in insts]}
        emit(args, out, "\n".join(f"{i.name:32s} {i.kind:12s} {i.spec.name} n={i.n}" for i in insts))
        return 0
    if not args.name:
        raise UsageError(f"corpus {args.op} needs an instance name")
    try:
        inst = corpus_get(args.name)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    if args.op == "show":
        emit(args, inst.to_json(), json.dumps(inst.to_json(), sort_keys=True, indent=2))
        return 0
    report = run_corpus_instance(inst, args)
    emit(args, report, _report_text(report))
    return 0 if report["pass"] else EXIT_FAILED


# --------------------------------------------------------------------------
# parser


def _ring_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ring", help="ring name (z9, gr9_2, f2t2) or JSON descriptor")
    p.add_argument("--p", type=int, help="residue characteristic (with --r)")
    p.add_argument("--r", type=int, help="length r of O_r (with --p)")
    p.add_argument("--m", type=int, default=1, help="residue degree (with --p)")
    p.add_argument("--kind", choices=["mixed", "equal"], default="mixed", help="ring kind (with --p)")


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable JSON output")
    p.add_argument("--seedless", action="store_true", default=d(False), help="no-op: every command is deterministic")
    p.add_argument("--threads", type=int, default=d(1), help="worker processes for independent instances")
    p.add_argument("--budget", type=int, default=d(None), help="enumeration budget (default $CHAINREP_BUDGET)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chainrep", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    # the same flags after the subcommand; SUPPRESS keeps them from resetting earlier values
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ring", parents=[common], help="ring descriptor and element arithmetic")
    _ring_flags(p)
    p.add_argument("--element", help="element as JSON (integer or digit list)")
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("mat", parents=[common], help="matrix operations")
    p.add_argument("op", choices=["det", "inv", "conj", "reduce", "section", "commutant"])
    p.add_argument("matrix")
    _ring_flags(p)
    p.add_argument("--by", help="conjugating matrix for 'conj'")
    p.add_argument("--to", type=int, help="target length for 'reduce' and 'section'")
    p.set_defaults(func=cmd_mat)

    p = sub.add_parser("jcf", parents=[common], help="residue Jordan form")
    p.add_argument("matrix")
    _ring_flags(p)
    p.set_defaults(func=cmd_jcf)

    p = sub.add_parser("centralizer", parents=[common], help="commutant, unit centralizer and center")
    p.add_argument("matrix")
    _ring_flags(p)
    p.add_argument("--units", action="store_true")
    p.add_argument("--center", action="store_true")
    p.set_defaults(func=cmd_centralizer)

    p = sub.add_parser("stable", parents=[common], help="stability certificate")
    p.add_argument("matrix", nargs="?")
    _ring_flags(p)
    p.add_argument("--search", action="store_true", help="classify every conjugacy class of M_n(O_r)")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_stable)

    p = sub.add_parser("char", parents=[common], help="characters psi_M of K^i")
    p.add_argument("op", choices=["eval", "orbit", "stabilizer"])
    _ring_flags(p)
    p.add_argument("--level", type=int)
    p.add_argument("--matrix", required=True, help="M over O_{r-i}")
    p.add_argument("--element", help="element of K^i over O_r")
    p.set_defaults(func=cmd_char)

    p = sub.add_parser("heis", parents=[common], help="Heisenberg lift for r odd")
    p.add_argument("op", choices=["form", "isotropic", "lift", "induce", "stabilizer"])
    _ring_flags(p)
    p.add_argument("--matrix", required=True, help="Mhat over O_l")
    p.add_argument("--element", help="element of K^l' for 'lift'")
    p.add_argument("--reverse", action="store_true", help="build J_M from the reversed basis order")
    p.set_defaults(func=cmd_heis)

    p = sub.add_parser("group", parents=[common], help="GL_n(O_r) as an explicit group")
    p.add_argument("op", choices=["order", "classes", "commutator", "sylow"])
    _ring_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prime", type=int, help="prime for 'sylow' (default p)")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("verify", parents=[common], help="verification suites")
    p.add_argument("suite", choices=["theorem-a", "theorem-b", "r2-complete", "hill", "det-lemma", "commutator-blocks"])
    _ring_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--matrix", help="M (theorem-a) or Mhat (theorem-b) over O_l")
    p.add_argument("--all", action="store_true", help="theorem-b: every stable representative")
    p.add_argument("--a", type=int, default=1, help="hill: residue a of the scalar part")
    p.add_argument("--B", help="hill: the matrix B (default E_11)")
    p.add_argument("--count", type=int, help="det-lemma: number of matrices (default all)")
    p.add_argument("--blocks", nargs="+", help="commutator-blocks: matrices A_i with H_i = C(A_i)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", parents=[common], help="bundled instances")
    p.add_argument("op", choices=["list", "show", "run"])
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_corpus)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
