"""Command-line surface: JSON in, JSON out, exact numbers as strings.

Subcommands mirror the library modules. Every integer in a report is a
decimal string and every rational a "num/den" string, so arbitrary
precision survives any JSON consumer. Output is deterministic: the same
invocation produces byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional

from . import bounds, csa, pairing, quadform, replay, torus
from .errors import AnisoError
from .scalars import (Field, cyclotomic, element_from_json, element_to_json,
                      function_field)


class SchemaError(AnisoError):
    """Input payload does not match the expected shape; path points at
    the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _expect(obj, path: str, kind, what: str):
    if not isinstance(obj, kind):
        raise SchemaError(path, f"expected {what}, got {type(obj).__name__}")
    return obj


def _expect_key(obj: dict, path: str, key: str):
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required field")
    return obj[key]


def _expect_int(obj, path: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise SchemaError(path, "expected an integer or a decimal string")
    try:
        return int(obj)
    except ValueError:
        raise SchemaError(path, f"not a decimal integer: {obj!r}") from None


def _load_payload(source: Optional[str], path: str = "$") -> dict:
    if source is None:
        raise SchemaError(path, "this subcommand needs --input FILE "
                          "(use - for stdin)")
    try:
        text = sys.stdin.read() if source == "-" else open(source).read()
    except OSError as exc:
        raise SchemaError(path, f"cannot read {source}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"malformed JSON: {exc}") from None
    return _expect(obj, path, dict, "a JSON object")


def _fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# subcommand implementations, each returning (report dict, exit status)


def _cmd_bounds(args) -> tuple[dict, int]:
    kind = args.kind
    if kind == "minkowski":
        if args.n is None:
            raise SchemaError("$.n", "--n is required for kind minkowski")
        mv = bounds.minkowski_values(args.n)
        return {"kind": "minkowski", "n": str(mv.n),
                "upsilon_a": None if mv.upsilon_a is None else str(mv.upsilon_a),
                "upsilon_a_known": mv.upsilon_a_known,
                "upsilon_m": str(mv.upsilon_m)}, 0
    if kind == "torsion":
        if not args.types:
            raise SchemaError("$.types", "--types is required for kind "
                              "torsion, e.g. A:2,E:8")
        type_list = []
        for chunk in args.types.split(","):
            if ":" not in chunk:
                raise SchemaError("$.types", f"bad component {chunk!r}, "
                                  "expected LETTER:RANK")
            letter, _, rank = chunk.partition(":")
            type_list.append((letter.strip(), _expect_int(rank, "$.types")))
        primes = bounds.torsion_primes(type_list)
        return {"kind": "torsion",
                "types": [f"{l}:{r}" for l, r in type_list],
                "torsion_primes": [str(p) for p in sorted(primes)]}, 0
    query = bounds.BoundQuery(kind=kind, n=args.n, r=args.r, N=args.N,
                              p=args.p, m=args.m)
    result = bounds.bound_calculator(query)
    report = {"kind": kind, "divisor_bound": str(result.divisor_bound),
              "meaning": result.meaning}
    for name in ("n", "r", "N", "p", "m"):
        value = getattr(query, name)
        if value is not None:
            report[name] = str(value)
    return report, 0


def _parse_torus_model(obj: dict) -> torus.TorusModel:
    rank = _expect_int(_expect_key(obj, "$", "rank"), "$.rank")
    gens_obj = _expect(_expect_key(obj, "$", "theta_generators"),
                       "$.theta_generators", list, "a list of matrices")
    for idx, g in enumerate(gens_obj):
        gpath = f"$.theta_generators[{idx}]"
        _expect(g, gpath, dict, "a matrix object")
        for key in ("rows", "cols", "entries"):
            _expect_key(g, gpath, key)
    try:
        return torus.TorusModel.from_json(obj)
    except (ValueError, TypeError) as exc:
        raise SchemaError("$", f"bad torus model: {exc}") from None


def _cmd_torus_analyze(args) -> tuple[dict, int]:
    model = _parse_torus_model(_load_payload(args.input))
    aniso = torus.is_anisotropic(model)
    rows = []
    for d in range(2, args.d_max + 1):
        if model.characteristic and d % model.characteristic == 0:
            continue
        rep = torus.torsion_points(model, d)
        rows.append({
            "d": str(d),
            "invariant_factors": [str(f) for f in rep.group.invariant_factors],
            "exponent": str(rep.group.exponent),
            "exponent_divides_theta_order": rep.divisibility_check,
        })
    return {"label": model.label, "rank": str(model.rank),
            "theta_order": str(model.theta_order), "anisotropic": aniso,
            "torsion": rows}, 0


def _parse_pairing(obj: dict) -> pairing.AlternatingPairing:
    factors = _expect(_expect_key(obj, "$", "invariant_factors"),
                      "$.invariant_factors", list, "a list")
    for idx, f in enumerate(factors):
        _expect_int(f, f"$.invariant_factors[{idx}]")
    gram = _expect(_expect_key(obj, "$", "gram"), "$.gram", list,
                   "a list of rows")
    for i, row in enumerate(gram):
        _expect(row, f"$.gram[{i}]", list, "a list")
        for j, v in enumerate(row):
            try:
                Fraction(v)
            except (ValueError, TypeError, ZeroDivisionError):
                raise SchemaError(f"$.gram[{i}][{j}]",
                                  f"not a rational: {v!r}") from None
    return pairing.AlternatingPairing.from_json(obj)


def _cmd_pairing_isotropic(args) -> tuple[dict, int]:
    pr = _parse_pairing(_load_payload(args.input))
    check = pairing.validate_pairing(pr)
    if not check:
        raise pairing.InvalidPairing(check.message)
    sub = pairing.isotropic_subgroup(pr, enum_cap=args.cap or 4096)
    total = pr.group.order
    return {
        "group_order": str(total),
        "invariant_factors": [str(d) for d in pr.group.invariant_factors],
        "isotropic_generators": [[str(x) for x in g] for g in sub.generators],
        "generator_orders": [str(o) for o in sub.generator_orders],
        "isotropic_order": str(sub.order),
        "order_squared_covers_group": (sub.order * sub.order) % total == 0,
    }, 0


def _cmd_pairing_fuzz(args) -> tuple[dict, int]:
    rng = random.Random(args.seed)
    failures = []
    for trial in range(args.trials):
        pr = pairing.random_pairing(rng, max_order=args.max_order)
        sub = pairing.isotropic_subgroup(pr)
        vanishes = all(pr.value(g, h).numerator == 0
                       for g in sub.generators for h in sub.generators)
        covers = (sub.order * sub.order) % pr.group.order == 0
        if not (vanishes and covers):
            failures.append({"trial": str(trial), "pairing": pr.to_json()})
    return {"trials": str(args.trials), "seed": str(args.seed),
            "max_order": str(args.max_order),
            "failures": failures, "all_pass": not failures}, \
        (0 if not failures else 1)


def _generic_symbol_spec(degree: int) -> csa.SymbolAlgebraSpec:
    base = function_field(cyclotomic(degree), ("a", "b"))
    field = Field(base)
    return csa.SymbolAlgebraSpec(base, degree, field.var("a"), field.var("b"))


def _cmd_csa_norm(args) -> tuple[dict, int]:
    obj = _load_payload(args.input)
    degree = _expect_int(_expect_key(obj, "$", "degree"), "$.degree")
    element_obj = _expect(_expect_key(obj, "$", "element"), "$.element",
                          dict, "an object keyed by \"i,j\"")
    spec = _generic_symbol_spec(degree)
    for key in element_obj:
        parts = str(key).split(",")
        if len(parts) != 2:
            raise SchemaError(f"$.element[{key!r}]",
                              "keys must look like \"i,j\"")
        for part in parts:
            _expect_int(part, f"$.element[{key!r}]")
    element = csa.AlgebraElement.from_json(spec, element_obj)
    norm = csa.reduced_norm(element)
    return {"degree": str(degree), "reduced_norm": element_to_json(norm),
            "norm_repr": repr(norm)}, 0


def _cmd_csa_verify_weyl(args) -> tuple[dict, int]:
    cert = csa.weyl_split_verification(csa.WeylModPSpec(args.p))
    def matrix_json(m):
        return [[repr(entry) for entry in row] for row in m]
    return {"p": str(cert.p),
            "u_matrix": matrix_json(cert.u_matrix),
            "v_matrix": matrix_json(cert.v_matrix),
            "u_power_is_y": cert.u_power_is_y,
            "v_power_is_x": cert.v_power_is_x,
            "commutator_is_one": cert.commutator_is_one,
            "monomials_independent": cert.monomials_independent,
            "splits_as_full_matrix_algebra": cert.ok}, (0 if cert.ok else 1)


def _cmd_csa_torsion(args) -> tuple[dict, int]:
    spec = csa.WeylModPSpec(args.p)
    family = csa.distinct_irreducible_family(spec, args.m)
    report = csa.inseparable_torsion_subgroup(spec, family)
    return {"p": str(args.p), "requested_rank": str(args.m),
            "generators": [repr(g) for g in family],
            "orders_divide_p": report.orders_divide_p,
            "commute": report.commute,
            "rank": str(report.rank),
            "group_order": str(report.group_order)}, \
        (0 if report.rank == args.m else 1)


def _parse_form(obj: dict, path: str = "$") -> quadform.QuadraticForm:
    _expect_key(obj, path, "field")
    _expect_int(_expect_key(obj, path, "dim"), f"{path}.dim")
    coeffs = _expect(_expect_key(obj, path, "coeffs"), f"{path}.coeffs",
                     dict, "an object keyed by \"i,j\"")
    for key in coeffs:
        parts = str(key).split(",")
        if len(parts) != 2:
            raise SchemaError(f"{path}.coeffs[{key!r}]",
                              "keys must look like \"i,j\"")
        for part in parts:
            _expect_int(part, f"{path}.coeffs[{key!r}]")
    try:
        return quadform.QuadraticForm.from_json(obj)
    except (ValueError, TypeError, KeyError) as exc:
        raise SchemaError(path, f"bad quadratic form: {exc}") from None


def _cmd_quad_arf(args) -> tuple[dict, int]:
    q = _parse_form(_load_payload(args.input))
    result = quadform.arf_normal_form(q)
    return {"dim": str(q.dim),
            "arf_invariant": element_to_json(result.arf),
            "arf_repr": repr(result.arf),
            "canonical_form": result.canonical_form.to_json(),
            "change_of_basis": [[element_to_json(entry) for entry in row]
                                for row in result.change_of_basis]}, 0


def _cmd_quad_pfister(args) -> tuple[dict, int]:
    data = quadform.pfister_build(args.k)
    group = quadform.pfister_group_closure(args.k, cap=args.cap or 4096)
    rng = random.Random(args.seed)
    refuted = 0
    for _ in range(args.trials):
        candidate = quadform.random_candidate(args.k, rng)
        report = quadform.pfister_refute_point(args.k, candidate, data=data)
        if not report.value.is_zero:
            refuted += 1
    ok = refuted == args.trials and group.order_divides_bound
    return {"k": str(args.k), "dim": str(data.n),
            "closure_order": str(group.order),
            "closure_nonabelian": group.nonabelian,
            "order_bound": str(group.order_bound),
            "order_divides_bound": group.order_divides_bound,
            "projective_orders": sorted({str(o)
                                         for o in group.projective_orders}),
            "refutation_trials": str(args.trials),
            "candidates_refuted": str(refuted),
            "seed": str(args.seed)}, (0 if ok else 1)


def _cmd_quad_extract(args) -> tuple[dict, int]:
    obj = _load_payload(args.input)
    form_obj = _expect(_expect_key(obj, "$", "form"), "$.form", dict,
                       "a quadratic form object")
    q = _parse_form(form_obj, "$.form")
    matrix_obj = _expect(_expect_key(obj, "$", "matrix"), "$.matrix", list,
                         "a list of rows")
    rows = []
    for i, row in enumerate(matrix_obj):
        _expect(row, f"$.matrix[{i}]", list, "a list")
        if len(row) != q.dim:
            raise SchemaError(f"$.matrix[{i}]",
                              f"expected {q.dim} entries, got {len(row)}")
        parsed = []
        for j, entry in enumerate(row):
            try:
                parsed.append(element_from_json(entry, q.descriptor))
            except (AnisoError, ValueError, TypeError, KeyError) as exc:
                raise SchemaError(f"$.matrix[{i}][{j}]",
                                  f"bad field element: {exc}") from None
        rows.append(tuple(parsed))
    if len(rows) != q.dim:
        raise SchemaError("$.matrix", f"expected {q.dim} rows, got {len(rows)}")
    vector = quadform.extract_isotropic_from_order_p(tuple(rows), q)
    value = q.evaluate(vector)
    return {"vector": [element_to_json(x) for x in vector],
            "vector_repr": [repr(x) for x in vector],
            "form_value_is_zero": value.is_zero}, 0


def _cmd_replay(args) -> tuple[list, int]:
    results = replay.run_replay(args.ids or None, seed=args.seed)
    failed = any(r["status"] != "pass" for r in results)
    return results, (1 if failed else 0)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized trials (default 0)")
    common.add_argument("--json", action="store_true",
                        help="compact single-line JSON output")
    common.add_argument("--cap", type=int, default=None,
                        help="cap for enumerations and closures")

    parser = argparse.ArgumentParser(
        prog="aniso",
        description="exact finite-subgroup bounds for anisotropic groups")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", parents=[common],
                              help="divisor bounds for finite subgroups")
    p_bounds.add_argument("--kind", required=True,
                          choices=list(bounds.BOUND_KINDS)
                          + ["minkowski", "torsion"])
    p_bounds.add_argument("--n", type=int)
    p_bounds.add_argument("--r", type=int)
    p_bounds.add_argument("--N", type=int)
    p_bounds.add_argument("--p", type=int)
    p_bounds.add_argument("--m", type=int)
    p_bounds.add_argument("--types", help="comma list LETTER:RANK for kind "
                          "torsion, e.g. A:2,E:8")
    p_bounds.set_defaults(func=_cmd_bounds)

    p_torus = sub.add_parser("torus",
                             help="lattice models of anisotropic tori")
    torus_sub = p_torus.add_subparsers(dest="action", required=True)
    p_analyze = torus_sub.add_parser("analyze", parents=[common],
                                     help="torsion structure of a model")
    p_analyze.add_argument("--input", help="model JSON file, - for stdin")
    p_analyze.add_argument("--d-max", type=int, default=30)
    p_analyze.set_defaults(func=_cmd_torus_analyze)

    p_pairing = sub.add_parser("pairing",
                               help="alternating pairings on finite groups")
    pairing_sub = p_pairing.add_subparsers(dest="action", required=True)
    p_iso = pairing_sub.add_parser("isotropic", parents=[common],
                                   help="isotropic subgroup with order^2 "
                                   "covering the group")
    p_iso.add_argument("--input", help="pairing JSON file, - for stdin")
    p_iso.set_defaults(func=_cmd_pairing_isotropic)
    p_fuzz = pairing_sub.add_parser("fuzz", parents=[common],
                                    help="randomized isotropic-subgroup "
                                    "property trials")
    p_fuzz.add_argument("--trials", type=int, default=50)
    p_fuzz.add_argument("--max-order", type=int, default=128)
    p_fuzz.set_defaults(func=_cmd_pairing_fuzz)

    p_csa = sub.add_parser("csa",
                           help="symbol algebras and their torsion")
    csa_sub = p_csa.add_subparsers(dest="action", required=True)
    p_norm = csa_sub.add_parser("norm", parents=[common],
                                help="reduced norm in a generic symbol "
                                "algebra")
    p_norm.add_argument("--input", help="payload JSON file, - for stdin")
    p_norm.set_defaults(func=_cmd_csa_norm)
    p_weyl = csa_sub.add_parser("verify-weyl", parents=[common],
                                help="split certificate for the mod-p Weyl "
                                "algebra")
    p_weyl.add_argument("--p", type=int, required=True)
    p_weyl.set_defaults(func=_cmd_csa_verify_weyl)
    p_tors = csa_sub.add_parser("torsion", parents=[common],
                                help="elementary abelian p-subgroup of "
                                "requested rank")
    p_tors.add_argument("--p", type=int, required=True)
    p_tors.add_argument("--m", type=int, required=True)
    p_tors.set_defaults(func=_cmd_csa_torsion)

    p_quad = sub.add_parser("quad",
                            help="quadratic forms and their isometries")
    quad_sub = p_quad.add_subparsers(dest="action", required=True)
    p_arf = quad_sub.add_parser("arf", parents=[common],
                                help="characteristic-2 normal form")
    p_arf.add_argument("--input", help="form JSON file, - for stdin")
    p_arf.set_defaults(func=_cmd_quad_arf)
    p_pf = quad_sub.add_parser("pfister", parents=[common],
                               help="pointless multiplier quadric with its "
                               "isometry closure")
    p_pf.add_argument("--k", type=int, default=3)
    p_pf.add_argument("--trials", type=int, default=50)
    p_pf.set_defaults(func=_cmd_quad_pfister)
    p_ext = quad_sub.add_parser("extract-isotropic", parents=[common],
                                help="isotropic vector from an order-p "
                                "isometry in characteristic p")
    p_ext.add_argument("--input", help="payload JSON file, - for stdin")
    p_ext.set_defaults(func=_cmd_quad_extract)

    p_replay = sub.add_parser("replay", parents=[common],
                              help="re-verify the registered worked examples")
    p_replay.add_argument("ids", nargs="*",
                          help="entry ids to run (default: all)")
    p_replay.set_defaults(func=_cmd_replay)

    return parser


def _emit(obj, compact: bool) -> None:
    if compact:
        text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    else:
        text = json.dumps(obj, sort_keys=True, indent=2)
    sys.stdout.write(text + "\n")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, status = args.func(args)
    except SchemaError as exc:
        _emit({"error": {"type": "SchemaError", "path": exc.path,
                         "message": str(exc)}}, args.json)
        return 2
    except AnisoError as exc:
        _emit({"error": {"type": type(exc).__name__,
                         "message": str(exc)}}, args.json)
        return 2
    _emit(report, args.json)
    return status


if __name__ == "__main__":
    sys.exit(main())
