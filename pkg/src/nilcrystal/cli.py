"""Command-line front end.

Every subcommand emits one machine-readable JSON report on standard output
(canonical form: sorted keys, two-space indent, trailing newline) and uses
exit status 0 for success, 1 for computational errors, 2 for usage errors.
`catalog show` is the exception: it emits the catalog file format itself so
that its output can be fed back to `group check`.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import acg as acgmod
from .acg import (
    CATALOG_NAMES,
    catalog_group,
    canonical_json_bytes,
    parse_group_bytes,
    self_map_conjugates,
    serialize_group,
    torsion_test,
    torsion_witness_search,
)
from .affinerep import AffineElement
from .errors import NilcrystalError, ParseError
from .exactmath import (
    QMatrix,
    QPoly,
    format_rational,
    matrix_from_lists,
    matrix_to_lists,
    parse_rational,
)
from .invariants import (
    Grading,
    averaging_invariants,
    classify_dynamics,
    verify_grading,
)
from .malcev import LatticeElement
from .unipotent import (
    LieSubspace,
    NilMatrix,
    UniMatrix,
    bch_truncated,
    exp_unipotent,
    log_unipotent,
    rational_power,
)


def to_jsonable(x):
    """Exact values to JSON-safe structures; rationals become canonical text."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, QMatrix):
        return matrix_to_lists(x)
    if isinstance(x, (NilMatrix, UniMatrix)):
        return matrix_to_lists(x.body)
    if isinstance(x, QPoly):
        return x.to_text_list()
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return str(x)


def emit_report(report: dict, stream) -> bytes:
    """Canonical JSON bytes of the report, written to the stream."""
    payload = canonical_json_bytes(report)
    stream.write(payload)
    return payload


def _ok(command: str, inputs: dict, verdicts: dict, certificates: dict | None = None) -> dict:
    report = {
        "command": command,
        "inputs": to_jsonable(inputs),
        "verdicts": to_jsonable(verdicts),
        "status": "ok",
    }
    if certificates:
        report["certificates"] = to_jsonable(certificates)
    return report


def _error(command: str, inputs: dict, code: str, message: str) -> dict:
    return {
        "command": command,
        "inputs": to_jsonable(inputs),
        "status": {"error": {"code": code, "message": message}},
    }


def _read_json(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _load_map(group, path: str) -> AffineElement:
    data = _read_json(path)
    if not isinstance(data, dict) or "translation" not in data or "differential" not in data:
        raise ParseError(f"{path} must contain 'translation' and 'differential'")
    coords = [parse_rational(tok) for tok in data["translation"]]
    differential = matrix_from_lists(data["differential"])
    return AffineElement.from_coords(group.rep, coords, differential)


def _parse_element_spec(spec: str) -> tuple[list[Fraction], int]:
    coset = 0
    if "@" in spec:
        spec, _, coset_text = spec.partition("@")
        if not coset_text.isdigit():
            raise ParseError(f"malformed coset index {coset_text!r}")
        coset = int(coset_text)
    coords = [parse_rational(tok) for tok in spec.split(",") if tok != ""] if spec else []
    return coords, coset


def _load_matrix_file(path: str) -> list:
    data = _read_json(path)
    if not isinstance(data, list):
        raise ParseError(f"{path} must contain a matrix as nested lists")
    return data


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_catalog(args) -> tuple[dict | bytes, int]:
    if args.catalog_action == "list":
        return _ok("catalog list", {}, {"groups": list(CATALOG_NAMES)}), 0
    group = catalog_group(args.name)
    return serialize_group(group), 0


def _cmd_group_check(args) -> tuple[dict, int]:
    inputs = {"file": args.file}
    with open(args.file, "rb") as fh:
        raw = fh.read()
    group = parse_group_bytes(raw)
    verdicts = {
        "valid": True,
        "canonical": serialize_group(group) == raw,
        "name": group.name,
        "dimension": group.dimension,
        "nilpotency_class": group.nilpotency_class,
        "holonomy_order": group.holonomy.order,
    }
    return _ok("group check", inputs, verdicts), 0


def _cmd_torsion(args) -> tuple[dict, int]:
    group = catalog_group(args.group)
    coords, coset = _parse_element_spec(args.element)
    inputs = {"group": args.group, "element": args.element}
    e = group.element(coords, coset)
    order = torsion_test(group, e)
    verdicts = {"order": "infinite" if order is None else order}
    return _ok("torsion", inputs, verdicts), 0


def _cmd_torsion_search(args) -> tuple[dict, int]:
    group = catalog_group(args.group)
    inputs = {"group": args.group, "bound": args.bound}
    witness = torsion_witness_search(group, args.bound)
    if witness is None:
        verdicts = {"witness": None, "summary": "none up to bound"}
    else:
        verdicts = {
            "witness": {
                "lattice_coords": list(witness.coords),
                "coset": witness.coset_index,
                "order": witness.order,
            },
            "summary": "torsion element found",
        }
    return _ok("torsion-search", inputs, verdicts), 0


def _cmd_map(args) -> tuple[dict, int]:
    group = catalog_group(args.group)
    affine_map = _load_map(group, args.map)
    inputs = {
        "group": args.group,
        "map_file": args.map,
        "translation": affine_map.translation_coords,
        "differential": affine_map.differential,
    }
    if args.map_action == "classify":
        result = classify_dynamics(group, affine_map, as_diffeomorphism=args.as_diffeomorphism)
        verdicts = {
            "expanding": result.expanding,
            "hyperbolic": result.hyperbolic,
            "self_map_valid": result.self_map_valid,
        }
        certificates = {
            "char_poly": result.certificate.char_poly,
            "witnesses": list(result.certificate.witnesses),
        }
        return _ok("map classify", inputs, verdicts, certificates), 0
    conjugates = self_map_conjugates(group, affine_map)
    verdicts = {
        "induces_self_map": all(res.member for _, res in conjugates),
        "conjugates": [
            {
                "generator": label,
                "member": res.member,
                "coset": res.coset_index,
                "lattice_coords": None if res.lattice_coords is None else list(res.lattice_coords),
            }
            for label, res in conjugates
        ],
    }
    return _ok("map self", inputs, verdicts), 0


def _cmd_nielsen(args) -> tuple[dict, int]:
    group = catalog_group(args.group)
    affine_map = _load_map(group, args.map)
    inputs = {
        "group": args.group,
        "map_file": args.map,
        "translation": affine_map.translation_coords,
        "differential": affine_map.differential,
    }
    report = averaging_invariants(group, affine_map)
    verdicts = {
        "lefschetz": report.lefschetz,
        "nielsen": report.nielsen,
        "per_holonomy_terms": [[name, value] for name, value in report.per_holonomy_terms],
        "anosov_relation": report.anosov_relation,
        "orientable": report.orientable,
        "holonomy_order": group.holonomy.order,
    }
    return _ok("nielsen", inputs, verdicts), 0


def _cmd_lie(args) -> tuple[dict, int]:
    if args.lie_action == "exp":
        x = NilMatrix(matrix_from_lists(_load_matrix_file(args.files[0])))
        result = exp_unipotent(x)
        return _ok("lie exp", {"file": args.files[0], "matrix": x}, {"result": result}), 0
    if args.lie_action == "log":
        g = UniMatrix(matrix_from_lists(_load_matrix_file(args.files[0])))
        result = log_unipotent(g)
        return _ok("lie log", {"file": args.files[0], "matrix": g}, {"result": result}), 0
    if args.lie_action == "power":
        g = UniMatrix(matrix_from_lists(_load_matrix_file(args.files[0])))
        t = parse_rational(args.exponent)
        result = rational_power(g, t)
        inputs = {"file": args.files[0], "matrix": g, "exponent": t}
        return _ok("lie power", inputs, {"result": result}), 0
    if len(args.files) < 2:
        raise ParseError("lie bch needs two matrix files")
    x = NilMatrix(matrix_from_lists(_load_matrix_file(args.files[0])))
    y = NilMatrix(matrix_from_lists(_load_matrix_file(args.files[1])))
    result = bch_truncated(x, y, args.class_bound)
    inputs = {"files": list(args.files), "class_bound": args.class_bound}
    return _ok("lie bch", inputs, {"result": result}), 0


def _cmd_grading(args) -> tuple[dict, int]:
    data = _read_json(args.file)
    if not isinstance(data, dict) or "algebra" not in data or "components" not in data:
        raise ParseError(f"{args.file} must contain 'algebra' and 'components'")
    algebra_vectors = [NilMatrix(matrix_from_lists(m)) for m in data["algebra"]]
    if not algebra_vectors:
        raise ParseError("grading file lists no algebra basis")
    ambient = algebra_vectors[0].dim
    algebra = LieSubspace(ambient, algebra_vectors)
    components = []
    for comp in data["components"]:
        degree = comp["degree"]
        if not isinstance(degree, int):
            raise ParseError("component degree must be an integer")
        vectors = [NilMatrix(matrix_from_lists(m)) for m in comp["basis"]]
        components.append((degree, LieSubspace(ambient, vectors)))
    grading = Grading(tuple(components))
    valid, witness = verify_grading(algebra, grading, require_positive=args.positive)
    inputs = {"file": args.file, "require_positive": args.positive}
    verdicts = {"valid": valid, "witness": witness}
    return _ok("grading verify", inputs, verdicts), 0


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilcrystal",
        description="Exact computations with almost-crystallographic groups and their affine self-maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_catalog = sub.add_parser("catalog", help="built-in group catalog")
    cat_sub = p_catalog.add_subparsers(dest="catalog_action", required=True)
    cat_sub.add_parser("list", help="list built-in groups")
    p_show = cat_sub.add_parser("show", help="emit a catalog file for a built-in group")
    p_show.add_argument("name")
    p_catalog.set_defaults(handler=_cmd_catalog)

    p_group = sub.add_parser("group", help="operate on catalog files")
    group_sub = p_group.add_subparsers(dest="group_action", required=True)
    p_check = group_sub.add_parser("check", help="validate a catalog file")
    p_check.add_argument("file")
    p_group.set_defaults(handler=_cmd_group_check)

    p_torsion = sub.add_parser("torsion", help="order of a group element")
    p_torsion.add_argument("--group", required=True)
    p_torsion.add_argument("--element", required=True, metavar="COORDS[@COSET]")
    p_torsion.set_defaults(handler=_cmd_torsion)

    p_search = sub.add_parser("torsion-search", help="bounded search for torsion elements")
    p_search.add_argument("--group", required=True)
    p_search.add_argument("--bound", required=True, type=int)
    p_search.set_defaults(handler=_cmd_torsion_search)

    p_map = sub.add_parser("map", help="classify affine maps or test the self-map condition")
    map_sub = p_map.add_subparsers(dest="map_action", required=True)
    for action in ("classify", "self"):
        p_action = map_sub.add_parser(action)
        p_action.add_argument("--group", required=True)
        p_action.add_argument("--map", required=True)
        if action == "classify":
            p_action.add_argument("--as-diffeomorphism", action="store_true")
    p_map.set_defaults(handler=_cmd_map)

    p_nielsen = sub.add_parser("nielsen", help="Lefschetz and Nielsen numbers of an affine self-map")
    p_nielsen.add_argument("--group", required=True)
    p_nielsen.add_argument("--map", required=True)
    p_nielsen.set_defaults(handler=_cmd_nielsen)

    p_lie = sub.add_parser("lie", help="exp/log/bch/power on triangular matrices")
    lie_sub = p_lie.add_subparsers(dest="lie_action", required=True)
    for action in ("exp", "log", "bch", "power"):
        p_action = lie_sub.add_parser(action)
        p_action.add_argument("files", nargs="+" if action == "bch" else 1)
        if action == "power":
            p_action.add_argument("--exponent", required=True)
        if action == "bch":
            p_action.add_argument("--class-bound", type=int, default=3)
    p_lie.set_defaults(handler=_cmd_lie)

    p_grading = sub.add_parser("grading", help="verify a candidate grading")
    grading_sub = p_grading.add_subparsers(dest="grading_action", required=True)
    p_verify = grading_sub.add_parser("verify")
    p_verify.add_argument("file")
    p_verify.add_argument("--positive", action="store_true")
    p_grading.set_defaults(handler=_cmd_grading)

    return parser


def parse_and_dispatch(argv: list[str]) -> tuple[bytes, int]:
    """Route argv to a subcommand and return (report bytes, exit status)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    command = " ".join(a for a in argv[:2] if not a.startswith("-"))
    try:
        result, code = args.handler(args)
    except NilcrystalError as exc:
        report = _error(command, {"argv": list(argv)}, exc.code, str(exc))
        return canonical_json_bytes(report), 1
    if isinstance(result, bytes):
        return result, code
    return canonical_json_bytes(result), code


def main() -> None:
    try:
        payload, code = parse_and_dispatch(sys.argv[1:])
    except SystemExit as exc:
        raise exc
    sys.stdout.buffer.write(payload)
    sys.stdout.buffer.flush()
    sys.exit(code)
