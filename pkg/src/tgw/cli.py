"""Command-line front end.

Exit codes: 0 success, 1 a reported check failed, 2 bad input,
3 an internal cross-check disagreed.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .cartan import dynkin_diagram, gcm, gcm_from_rows, gcm_oracle, serre_all, tc_morphism_check
from .catalog import preset
from .errors import CrossCheckError, ParseError
from .graph import equilibrium_analysis, incidence_matrix, is_acyclic, kernel_basis, parse_multiquiver, random_multiquiver
from .rep import faithfulness_report, local_surjectivity_report, parse_tgw, phi, relation_instances
from .ring import consistency_check
from .weyl import format_weyl, normal_order_word, parse_weyl
from .words import parse_words

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CROSSCHECK = 0, 1, 2, 3


def dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ------------------------------------------------------------- analysis
@dataclass
class AnalysisBundle:
    matrix: object
    equilibrium: object
    kernel: list
    faithfulness: object
    surjectivity: object
    cartan: object
    dynkin: object
    consistency: object

    def __post_init__(self):
        if self.faithfulness.faithful != (len(self.kernel) == 0):
            raise CrossCheckError("faithfulness verdict disagrees with the kernel rank")
        if self.dynkin.gcm() != self.cartan:
            raise CrossCheckError("Dynkin GCM differs from the formula GCM")

    def to_json(self) -> dict:
        return {
            "incidence_matrix": {
                "edges": list(self.matrix.rows),
                "vertices": list(self.matrix.cols),
                "rows": self.matrix.dense(),
            },
            "equilibrium": self.equilibrium.to_json(),
            "kernel_basis": self.kernel,
            "faithfulness": self.faithfulness.to_json(),
            "local_surjectivity": self.surjectivity.to_json(),
            "gcm": self.cartan.to_json(),
            "dynkin": self.dynkin.to_json(),
            "consistency": self.consistency.to_json(),
        }

    def render(self) -> str:
        lines = ["incidence matrix (rows " + " ".join(_show(e) for e in self.matrix.rows)
                 + "; columns " + " ".join(self.matrix.cols) + "):"]
        lines += ["  " + r for r in str(self.matrix).splitlines()] if self.matrix.rows else ["  (empty)"]
        lines.append(f"kernel rank: {self.equilibrium.kernel_rank}")
        for c in self.equilibrium.components:
            state = "in equilibrium" if c.in_equilibrium else "not in equilibrium"
            w = "" if c.weight is None else " weight " + _vec(c.weight)
            lines.append(f"  component {{{', '.join(c.vertices)}}}: {state}{w}")
        lines.append(f"faithful: {'yes' if self.faithfulness.faithful else 'no'}")
        s = self.surjectivity
        lines.append(f"locally surjective: {'yes' if s.locally_surjective else 'no'}")
        if s.locally_surjective:
            lines.append(f"  certificate: {s.certificate}")
        else:
            lines.append("  cycle: " + " ".join(s.cycle) + " via edges " + " ".join(s.cycle_edges))
            lines.append("  obstruction generators: " + ", ".join(p.factored() for p in s.generators))
            lines.append("  common zero: " + _vec(s.common_zero))
        lines.append("generalized Cartan matrix:")
        lines += ["  " + r for r in str(self.cartan).splitlines()] if self.cartan.index else ["  (empty)"]
        lines.append("Dynkin diagram:")
        lines += ["  " + r for r in self.dynkin.edge_lines()]
        lines.append(f"  type: {self.dynkin.type_name}")
        lines.append(f"consistency: {'pass' if self.consistency.passed else 'FAIL'}")
        return "\n".join(lines)


def _show(e: str) -> str:
    return e if e else "_"


def _vec(d: dict) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in d.items()) + "}"


def analyze(g, degree=None) -> AnalysisBundle:
    return AnalysisBundle(
        matrix=incidence_matrix(g),
        equilibrium=equilibrium_analysis(g),
        kernel=kernel_basis(g),
        faithfulness=faithfulness_report(g),
        surjectivity=local_surjectivity_report(g, degree),
        cartan=gcm(g),
        dynkin=dynkin_diagram(g),
        consistency=consistency_check(g),
    )


# --------------------------------------------------------------- inputs
def load_graph(args):
    if getattr(args, "preset", None):
        try:
            return preset(args.preset)
        except (KeyError, ValueError) as exc:
            raise ParseError(str(exc).strip("'\"")) from None
    if not args.file:
        raise ParseError("give a multiquiver file or --preset")
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.file}: {exc.strerror}") from None
    return parse_multiquiver(text)


def parse_degree(text: str | None, g) -> dict | None:
    if not text:
        return None
    names = [s.strip() for s in text.split("+")]
    if any(not n for n in names) or len(set(names)) != len(names):
        raise ParseError(f"degree {text!r} must be a sum of distinct vertices")
    unknown = [n for n in names if n not in g.vertices]
    if unknown:
        raise ParseError(f"unknown vertices in degree: {', '.join(unknown)}")
    return {n: 1 for n in names}


def parse_matrix(text: str):
    text = text.strip()
    try:
        if text.startswith("["):
            rows = json.loads(text)
        else:
            rows = [[int(x) for x in r.replace(",", " ").split()] for r in text.split(";")]
        return gcm_from_rows(rows)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"cannot read matrix {text!r}: {exc}") from None


# ------------------------------------------------------------- commands
def cmd_analyze(args) -> int:
    g = load_graph(args)
    bundle = analyze(g, parse_degree(args.degree, g))
    print(dump(bundle.to_json()) if args.json else bundle.render())
    return EXIT_OK if bundle.consistency.passed else EXIT_FAIL


def cmd_phi(args) -> int:
    g = load_graph(args)
    w = parse_tgw(args.word, g)
    image = phi(g, w)
    if args.json:
        print(dump({"word": args.word, "image": image.to_json(), "text": format_weyl(image)}))
    else:
        print(format_weyl(image))
    return EXIT_OK


def cmd_weyl(args) -> int:
    direct = parse_weyl(args.expr)
    oracle = normal_order_word(parse_words(args.expr, "xy"))
    if direct != oracle:
        raise CrossCheckError(f"engine gives {format_weyl(direct)} but word rewriting gives {format_weyl(oracle)}")
    if args.json:
        print(dump({"expr": args.expr, "normal_form": direct.to_json(), "text": format_weyl(direct)}))
    else:
        print(format_weyl(direct))
    return EXIT_OK


def cmd_gcm(args) -> int:
    g = load_graph(args)
    c = gcm_oracle(g)
    if args.json:
        out = c.to_json()
        out["p_exponents"] = {f"{i},{j}": k for (i, j), k in sorted(c.p_exponents().items())}
        print(dump(out))
    else:
        print(c if c.index else "(empty)")
    return EXIT_OK


def cmd_dynkin(args) -> int:
    d = dynkin_diagram(load_graph(args))
    print(dump(d.to_json()) if args.json else str(d))
    return EXIT_OK


def cmd_serre(args) -> int:
    results = serre_all(load_graph(args))
    ok = all(results)
    if args.json:
        print(dump({"passed": ok, "pairs": [r.to_json() for r in results]}))
    else:
        for r in results:
            print(f"{r.i},{r.j} (a = {r.a_ij}): {r.label}")
        print("all pairs pass" if ok else "some pairs FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_consistency(args) -> int:
    rep = consistency_check(load_graph(args), expand=args.expand)
    if args.json:
        print(dump(rep.to_json()))
    else:
        print(f"pairs: {len(rep.pair_residuals)}, triples: {len(rep.triple_residuals)}")
        for k, r in rep.failures():
            print(f"  residual at {','.join(k)}: {r}")
        print("pass" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_tc(args) -> int:
    c = parse_matrix(args.matrix)
    try:
        rep = tc_morphism_check(c)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if args.json:
        print(dump(rep.to_json()))
    else:
        print(f"generators: {rep.generator_count}")
        print(f"equivariance residuals nonzero: {sum(1 for r in rep.equivariance_residuals.values() if r)}")
        print(f"t residuals nonzero: {sum(1 for r in rep.t_residuals.values() if r)}")
        print("pass" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_FAIL


def selftest(seed: int, count: int) -> dict:
    """Seeded random checks: rank vs equilibrium, consistency, GCM oracle,
    relation images, surjectivity vs acyclicity."""
    rng = random.Random(seed)
    failures = []
    for k in range(count):
        g = random_multiquiver(rng, max_vertices=4, max_edges=5, max_mult=3)
        tag = f"graph {k}"
        if len(kernel_basis(g)) != equilibrium_analysis(g).kernel_rank:
            failures.append(f"{tag}: kernel rank")
        if not consistency_check(g).passed:
            failures.append(f"{tag}: consistency")
        gcm_oracle(g)
        for label, rel in relation_instances(g):
            if phi(g, rel):
                failures.append(f"{tag}: relation {label}")
        if local_surjectivity_report(g).locally_surjective != is_acyclic(g):
            failures.append(f"{tag}: surjectivity verdict")
    return {"seed": seed, "graphs": count, "failures": failures, "passed": not failures}


def cmd_selftest(args) -> int:
    res = selftest(args.seed, args.count)
    if args.json:
        print(dump(res))
    else:
        for f in res["failures"]:
            print(f)
        print(f"seed {res['seed']}: {res['graphs']} graphs, {'pass' if res['passed'] else 'FAIL'}")
    return EXIT_OK if res["passed"] else EXIT_FAIL


# --------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tgw", description="Multiquiver TGW algebra toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", nargs="?", help="multiquiver file ('-' for stdin)")
        sp.add_argument("--preset", help="built-in graph, e.g. A~:3, C~:2, weyl:2, triangle")
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=fn)
        return sp

    graph_cmd("analyze", cmd_analyze, "full report").add_argument(
        "--degree", help="test degree for the surjectivity certificate, e.g. v1+v2"
    )
    graph_cmd("phi", cmd_phi, "image of a TGW word").add_argument("word")
    graph_cmd("gcm", cmd_gcm, "generalized Cartan matrix")
    graph_cmd("dynkin", cmd_dynkin, "Dynkin diagram")
    graph_cmd("serre", cmd_serre, "Serre relations in the Weyl image")
    graph_cmd("consistency", cmd_consistency, "consistency equations").add_argument(
        "--expand", action="store_true", help="expand products instead of cancelling factors"
    )

    sp = sub.add_parser("weyl", help="normal form of a Weyl-algebra expression")
    sp.add_argument("expr")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_weyl)

    sp = sub.add_parser("tc-check", help="symmetric GCM morphism check")
    sp.add_argument("matrix", help="rows separated by ';' (e.g. '2 -1; -1 2') or JSON")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_tc)

    sp = sub.add_parser("selftest", help="seeded random property checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CrossCheckError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
