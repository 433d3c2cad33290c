"""The ``algebroid`` command line driver.

Each subcommand parses a model document, runs one core operation, and emits
a deterministic report (``--format json|text``, default text).  Every number
in a report is exact — rationals render as ``p/q`` strings — and JSON is
printed with sorted keys and a trailing newline, so reports are byte-stable
under a fixed seed.  Timing is recorded only when ``--timing`` is given.

Exit codes: 0 when every verdict passes, 1 on a mathematical failure (the
report carries a witness), 2 on usage, parse, or validation errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from algebroid import dsl
from algebroid.algebroids import (
    check_algebroid_axioms,
    contravariant_differential,
    cotangent_algebroid,
    tangent_algebroid,
)
from algebroid.cohomology import (
    TruncationSpec,
    check_lp_ce_agreement,
    compute_cohomology,
)
from algebroid.courant import (
    DiracStructure,
    GeneralizedSection,
    check_courant_axioms,
    check_dirac,
    courant_bracket,
    dorfman_bracket,
    orthogonal_complement,
)
from algebroid.errors import (
    AlgebroidError,
    DslError,
    NotInvertible,
    TruncationTooLarge,
)
from algebroid.exterior import (
    KForm,
    KVector,
    de_rham,
    lie_bracket,
    lie_derivative,
    schouten_bracket,
)
from algebroid.poly import Poly, render_fraction
from algebroid.sampling import Sampler
from algebroid.symplectic import (
    check_weak_symplectic,
    oneform_bracket,
    poisson_bracket,
)

DEFAULT_SEED = 1729


class UsageError(Exception):
    """A bad request that is not the model's fault: exit code 2."""


# -- report plumbing ---------------------------------------------------------


def _jsonify(value):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return render_fraction(value)
    if isinstance(value, (Poly, KForm, KVector, GeneralizedSection)):
        return dsl.render_value(value)
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(key): _jsonify(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(item) for item in value]
    raise TypeError(f"cannot serialize {value!r}")


def _render_text(report, lines=None, indent=""):
    lines = [] if lines is None else lines
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            _render_text(value, lines, indent + "  ")
        elif isinstance(value, list):
            if all(isinstance(item, dict) for item in value) and value:
                lines.append(f"{indent}{key}:")
                for item in value:
                    inner = []
                    _render_text(item, inner, indent + "    ")
                    if inner:
                        inner[0] = indent + "  - " + inner[0].lstrip()
                    lines.extend(inner)
            else:
                rendered = ", ".join(str(item) for item in value)
                lines.append(f"{indent}{key}: [{rendered}]")
        elif isinstance(value, bool):
            lines.append(f"{indent}{key}: {'yes' if value else 'no'}")
        elif value is None:
            lines.append(f"{indent}{key}: none")
        else:
            lines.append(f"{indent}{key}: {value}")
    return lines


def _emit(report, args) -> None:
    normalized = _jsonify(report)
    if args.format == "json":
        text = json.dumps(normalized, sort_keys=True, indent=2) + "\n"
    else:
        text = "\n".join(_render_text(normalized)) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load(args):
    try:
        with open(args.input, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    digest = hashlib.sha256(raw).hexdigest()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UsageError(f"{args.input} is not UTF-8: {exc}") from None
    document = dsl.parse_document(text)
    return document, digest


def _base_report(args, digest) -> dict:
    return {
        "schema": 1,
        "command": args.command,
        "input": {"file": os.path.basename(args.input), "sha256": digest},
        "seed": getattr(args, "seed", DEFAULT_SEED),
    }


def _require_symplectic(document):
    if document.symplectic is None:
        raise UsageError("this command needs a 'symplectic' declaration")
    return document.symplectic


def _require_binding(document, name, kinds, what):
    binding = document.lookup(name)
    if binding is None:
        raise UsageError(f"{what}: no binding named {name!r}")
    if binding.kind not in kinds:
        raise UsageError(
            f"{what}: {name!r} is a {binding.kind}, expected one of {', '.join(kinds)}"
        )
    return binding


def _parse_index_list(text, what):
    """Accept ``a..b`` ranges and comma lists, with optional braces."""
    body = text.strip().strip("{}").strip()
    if not body:
        return ()
    out = []
    for piece in body.split(","):
        piece = piece.strip()
        if ".." in piece:
            lo, _, hi = piece.partition("..")
            try:
                lo, hi = int(lo), int(hi)
            except ValueError:
                raise UsageError(f"bad {what} range {piece!r}") from None
            if hi < lo:
                raise UsageError(f"empty {what} range {piece!r}")
            out.extend(range(lo, hi + 1))
        else:
            try:
                out.append(int(piece))
            except ValueError:
                raise UsageError(f"bad {what} entry {piece!r}") from None
    return tuple(sorted(set(out)))


def _model_support(document, args, default=None):
    if getattr(args, "support", None):
        return _parse_index_list(args.support, "support")
    if default is not None:
        return default
    if document.var_indices:
        return document.var_indices
    raise UsageError("no coordinates declared and no --support given")


def _axiom_entries(report):
    return [
        {"axiom": check.axiom, "passed": check.passed, "witness": check.witness}
        for check in report.checks
    ]


# -- subcommand handlers -----------------------------------------------------


def _cmd_check_axioms(args, document, report):
    structure_name = args.structure
    if structure_name == "tangent":
        structure = tangent_algebroid()
        pool_kind = "vector"
    else:
        w = _require_symplectic(document)
        structure = cotangent_algebroid(w)
        pool_kind = "form"
    sections = []
    for binding in document.bindings:
        if binding.kind == pool_kind and binding.value.grade == 1:
            sections.append(binding.value)
    functions = [b.value for b in document.bindings if b.kind == "fn"]
    sampler = Sampler(args.seed)
    support = _model_support(document, args)
    while len(sections) < args.sections:
        if pool_kind == "vector":
            sections.append(sampler.vector_field(support, args.degree))
        else:
            sections.append(sampler.oneform(support, args.degree))
    while len(functions) < args.functions:
        functions.append(sampler.nonzero_poly(support, args.degree))
    result = check_algebroid_axioms(structure, sections, functions)
    report["options"] = {
        "structure": structure_name,
        "sections": len(sections),
        "functions": len(functions),
        "support": list(support),
        "degree": args.degree,
    }
    report["checks"] = _axiom_entries(result)
    report["passed"] = result.passed
    return result.passed


def _cmd_check_courant(args, document, report):
    sections = [b.value for b in document.bindings if b.kind == "section"]
    functions = [b.value for b in document.bindings if b.kind == "fn"]
    sampler = Sampler(args.seed)
    support = _model_support(document, args)
    while len(sections) < args.sections:
        sections.append(sampler.section(support, args.degree))
    while len(functions) < args.functions:
        functions.append(sampler.nonzero_poly(support, args.degree))
    result = check_courant_axioms(sections, functions)
    report["options"] = {
        "sections": len(sections),
        "functions": len(functions),
        "support": list(support),
        "degree": args.degree,
    }
    report["checks"] = _axiom_entries(result)
    report["passed"] = result.passed
    return result.passed


def _dirac_structure(args, document):
    if args.target:
        binding = _require_binding(document, args.target, ("form",), "--target")
        if binding.value.grade != 2:
            raise UsageError(f"--target: {args.target!r} must be a 2-form")
        return DiracStructure(binding.value)
    if document.symplectic is not None:
        return DiracStructure(document.symplectic)
    raise UsageError("check-dirac needs a symplectic declaration or --target")


def _default_dirac_support(structure):
    form = structure.form
    if isinstance(form, KForm):
        return tuple(sorted(form.support()))
    if form.kind == "standard":
        return (0, 1, 2, 3)
    return form.block


def _cmd_check_dirac(args, document, report):
    structure = _dirac_structure(args, document)
    support = _model_support(document, args, default=_default_dirac_support(structure))
    result = check_dirac(
        structure, args.trials, args.seed, support=support, degree=args.degree
    )
    report["options"] = {
        "trials": args.trials,
        "support": list(support),
        "degree": args.degree,
        "target": args.target,
    }
    report["isotropy_failures"] = [
        {"left": x, "right": y, "pairing": value}
        for x, y, value in result.isotropy_failures
    ]
    report["involutivity_failures"] = [
        {"left": x, "right": y, "defect": defect}
        for x, y, defect in result.involutivity_failures
    ]
    report["defect_matches_prediction"] = result.defect_matches_prediction
    report["axioms"] = _axiom_entries(result.axioms)
    passed = result.passed
    try:
        complement = orthogonal_complement(structure, support)
    except TypeError:
        complement = None
    if complement is not None:
        report["complement"] = {
            "ambient": list(complement.ambient_indices),
            "fiber_dimension": complement.fiber_dimension,
            "dim_subbundle": complement.dim_subbundle,
            "dim_complement": complement.dim_complement,
            "isotropic": complement.isotropic,
            "equals_complement": complement.equals_complement,
            "witness": complement.witness,
        }
        passed = passed and complement.equals_complement and complement.isotropic
    report["passed"] = passed
    return passed


def _cmd_check_weak_symplectic(args, document, report):
    if args.target:
        binding = _require_binding(document, args.target, ("form",), "--target")
        if binding.value.grade != 2:
            raise UsageError(f"--target: {args.target!r} must be a 2-form")
        target = binding.value
    else:
        target = _require_symplectic(document)
    support = _model_support(document, args)
    result = check_weak_symplectic(target, support)
    report["options"] = {"support": list(support), "target": args.target}
    report["closed"] = result.closed
    report["closed_witness"] = result.closed_witness
    report["injective"] = result.injective
    report["injective_witness"] = result.injective_witness
    report["rank"] = result.rank
    report["dimension"] = result.dimension
    report["generic"] = result.generic
    report["caveats"] = [str(entry) for entry in result.caveats]
    report["passed"] = result.passed
    return result.passed


_BRACKET_KINDS = ("fn", "form", "vector", "multivector", "section")


def _cmd_bracket(args, document, report):
    left = _require_binding(document, args.left, _BRACKET_KINDS, "--left")
    right = _require_binding(document, args.right, _BRACKET_KINDS, "--right")
    kinds = (left.kind, right.kind)
    lval, rval = left.value, right.value
    if kinds == ("section", "section"):
        op = dorfman_bracket if args.kind == "dorfman" else courant_bracket
        value = op(lval, rval)
        result_kind = "section"
    elif "section" in kinds:
        raise UsageError("sections only bracket with sections")
    elif kinds == ("fn", "fn"):
        value = poisson_bracket(_require_symplectic(document), lval, rval)
        result_kind = "fn"
    elif kinds == ("form", "form"):
        if lval.grade != 1 or rval.grade != 1:
            raise UsageError("the form bracket needs two 1-forms")
        value = oneform_bracket(_require_symplectic(document), lval, rval)
        result_kind = "form"
    elif "form" in kinds:
        raise UsageError("forms only bracket with forms")
    elif kinds == ("vector", "vector"):
        value = lie_bracket(lval, rval)
        result_kind = "vector"
    else:  # remaining mixes of fn / vector / multivector: Schouten
        value = schouten_bracket(
            lval if not isinstance(lval, Poly) else KVector.from_poly(lval),
            rval if not isinstance(rval, Poly) else KVector.from_poly(rval),
        )
        result_kind = "multivector"
    report["options"] = {
        "left": args.left,
        "right": args.right,
        "kind": args.kind if kinds == ("section", "section") else None,
    }
    report["result"] = value
    report["result_kind"] = result_kind
    if isinstance(value, (KForm, KVector)):
        report["result_grade"] = value.grade
    report["passed"] = True
    return True


def _cmd_d(args, document, report):
    binding = _require_binding(document, args.target, ("fn", "form"), "--target")
    value = de_rham(binding.value)
    report["options"] = {"target": args.target}
    report["result"] = value
    report["result_grade"] = value.grade
    report["closed"] = value.is_zero()
    report["passed"] = True
    return True


def _cmd_lie(args, document, report):
    field = _require_binding(document, args.vector, ("vector",), "--vector")
    target = _require_binding(
        document, args.target, ("fn", "form", "vector", "multivector"), "--target"
    )
    value = lie_derivative(field.value, target.value)
    report["options"] = {"vector": args.vector, "target": args.target}
    report["result"] = value
    if isinstance(value, (KForm, KVector)):
        report["result_grade"] = value.grade
    report["passed"] = True
    return True


def _cmd_sigma(args, document, report):
    w = _require_symplectic(document)
    binding = _require_binding(
        document, args.target, ("fn", "vector", "multivector"), "--target"
    )
    value = contravariant_differential(w, binding.value)
    report["options"] = {"target": args.target}
    report["result"] = value
    report["result_grade"] = value.grade
    report["passed"] = True
    return True


def _truncation(args, document):
    support = _model_support(document, args)
    return TruncationSpec(support=support, degree=args.degree)


def _table_payload(table):
    return {
        str(grade): {
            "cocycles": dims[0],
            "coboundaries": dims[1],
            "dim": dims[2],
        }
        for grade, dims in table.items()
    }


def _cmd_cohomology(args, document, report):
    w = None
    if args.complex in ("lp", "ce-cotangent"):
        w = _require_symplectic(document)
    spec = _truncation(args, document)
    grades = _parse_index_list(args.grades, "grades")
    result = compute_cohomology(
        args.complex,
        w,
        spec,
        grades,
        max_basis=args.max_basis,
        threads=args.threads,
    )
    report["options"] = {
        "complex": args.complex,
        "support": list(spec.support),
        "degree": spec.degree,
        "grades": list(grades),
        "max_basis": args.max_basis,
    }
    report["table"] = _table_payload(result.table())
    report["passed"] = True
    return True


def _cmd_theorem_check(args, document, report):
    w = _require_symplectic(document)
    spec = _truncation(args, document)
    grades = _parse_index_list(args.grades, "grades")
    result = check_lp_ce_agreement(
        w,
        spec,
        grades,
        args.trials,
        args.seed,
        max_basis=args.max_basis,
        threads=args.threads,
    )
    report["options"] = {
        "support": list(spec.support),
        "degree": spec.degree,
        "grades": list(grades),
        "trials": args.trials,
        "max_basis": args.max_basis,
    }
    report["operator_grades"] = list(result.operator_grades)
    report["operator_mismatches"] = [
        {"grade": grade, "field": field, "difference": diff}
        for grade, field, _args, diff in result.mismatches
    ]
    report["lp_table"] = _table_payload(result.lp_table)
    report["ce_table"] = _table_payload(result.ce_table)
    report["tables_equal"] = result.tables_equal
    report["passed"] = result.passed
    return result.passed


_HANDLERS = {
    "check-axioms": _cmd_check_axioms,
    "check-courant": _cmd_check_courant,
    "check-dirac": _cmd_check_dirac,
    "check-weak-symplectic": _cmd_check_weak_symplectic,
    "bracket": _cmd_bracket,
    "d": _cmd_d,
    "lie": _cmd_lie,
    "sigma": _cmd_sigma,
    "cohomology": _cmd_cohomology,
    "theorem-check": _cmd_theorem_check,
}


# -- argument parsing --------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--input", required=True, help="model document (.adsl)")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--output", help="write the report here instead of stdout")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--timing", action="store_true", help="record wall time")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="algebroid",
        description="exact checks and cohomology for polynomial models",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("check-axioms", help="algebroid axioms on sections")
    _add_common(sub)
    sub.add_argument("--structure", choices=("tangent", "cotangent"), required=True)
    sub.add_argument("--sections", type=int, default=3, help="minimum section count")
    sub.add_argument("--functions", type=int, default=2)
    sub.add_argument("--support", help="sampling support, e.g. 0..3 or 0,2")
    sub.add_argument("--degree", type=int, default=2, help="sampling degree")

    sub = commands.add_parser("check-courant", help="Courant axioms on sections")
    _add_common(sub)
    sub.add_argument("--sections", type=int, default=3)
    sub.add_argument("--functions", type=int, default=2)
    sub.add_argument("--support")
    sub.add_argument("--degree", type=int, default=2)

    sub = commands.add_parser("check-dirac", help="graph Dirac structure checks")
    _add_common(sub)
    sub.add_argument("--target", help="a bound 2-form (default: the symplectic)")
    sub.add_argument("--trials", type=int, default=8)
    sub.add_argument("--support")
    sub.add_argument("--degree", type=int, default=2)

    sub = commands.add_parser(
        "check-weak-symplectic", help="closedness and injectivity of a 2-form"
    )
    _add_common(sub)
    sub.add_argument("--target", help="a bound 2-form (default: the symplectic)")
    sub.add_argument("--support")

    sub = commands.add_parser("bracket", help="bracket of two bound entities")
    _add_common(sub)
    sub.add_argument("--left", required=True)
    sub.add_argument("--right", required=True)
    sub.add_argument(
        "--kind",
        choices=("courant", "dorfman"),
        default="courant",
        help="which bracket for section operands",
    )

    sub = commands.add_parser("d", help="exterior derivative of a bound entity")
    _add_common(sub)
    sub.add_argument("--target", required=True)

    sub = commands.add_parser("lie", help="Lie derivative along a bound vector")
    _add_common(sub)
    sub.add_argument("--vector", required=True)
    sub.add_argument("--target", required=True)

    sub = commands.add_parser("sigma", help="contravariant differential")
    _add_common(sub)
    sub.add_argument("--target", required=True)

    sub = commands.add_parser("cohomology", help="truncated cohomology table")
    _add_common(sub)
    sub.add_argument(
        "--complex", choices=("lp", "ce-tangent", "ce-cotangent"), required=True
    )
    sub.add_argument("--support", required=True)
    sub.add_argument("--degree", type=int, required=True)
    sub.add_argument("--grades", default="0..2")
    sub.add_argument("--max-basis", type=int, default=20000)
    sub.add_argument("--threads", type=int, default=None)

    sub = commands.add_parser(
        "theorem-check", help="contravariant vs Chevalley-Eilenberg agreement"
    )
    _add_common(sub)
    sub.add_argument("--support", required=True)
    sub.add_argument("--degree", type=int, required=True)
    sub.add_argument("--grades", default="0..2")
    sub.add_argument("--trials", type=int, default=25)
    sub.add_argument("--max-basis", type=int, default=20000)
    sub.add_argument("--threads", type=int, default=None)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        document, digest = _load(args)
    except DslError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 2
    except NotInvertible as exc:
        # A declared symplectic structure that is singular is a mathematical
        # failure of the model, reported with its kernel witness.
        report = {
            "schema": 1,
            "command": args.command,
            "input": {"file": os.path.basename(args.input)},
            "seed": getattr(args, "seed", DEFAULT_SEED),
            "error": "the symplectic matrix is singular",
            "witness": str(getattr(exc, "witness", "")),
            "passed": False,
        }
        _emit(report, args)
        return 1
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = _base_report(args, digest)
    try:
        passed = _HANDLERS[args.command](args, document, report)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TruncationTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotInvertible as exc:
        report["error"] = str(exc)
        witness = getattr(exc, "witness", None)
        if witness is not None:
            report["witness"] = str(witness)
        report["passed"] = False
        _emit(report, args)
        return 1
    except AlgebroidError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        # The single inexact field, and the only one excluded from the
        # byte-identity contract; everything else in a report is exact.
        report["timing"] = {"seconds": f"{time.monotonic() - started:.6f}"}
    _emit(report, args)
    return 0 if passed else 1


def entrypoint() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entrypoint()
