"""Case analysis for isolated points on X1(l^n), l > 7, as a replayable decision procedure.

For every image class the driver records, in a fixed order: class
admissibility, level lowering to X1(l), then the elimination rules that apply.
Each step is a RuleVerdict whose inputs are enough to recompute its outcome.
"""

from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .atlas import NamedSubgroupKind, build_named
from .criteria import (RULES, ImageClass, Outcome, RuleVerdict, class_admissible_verdict,
                       dkm_verdict, exceptional_13_verdict, level_lowering_ok,
                       mazur_torsion_verdict, nonsplit_bound_verdict, riemann_roch_verdict,
                       supersingular_forced)
from .curves import invariants_x1
from .degrees import degree_profile
from .errors import DataError, OutOfScopeError, SingularElementError
from .facts import FACTS, JInvariant
from .gl2_core import Mat2, Modulus, Subgroup, closure, is_prime

REPORT_SCHEMA = "isopoint.report/1"
CLASS_ORDER = (ImageClass.SURJECTIVE, ImageClass.BOREL, ImageClass.SPLIT_CARTAN_NORMALIZER,
               ImageClass.NONSPLIT_CARTAN_NORMALIZER, ImageClass.EXCEPTIONAL)
EXCEPTIONAL_PROJECTIVE_ORDERS = (12, 24, 60)
TAG_KNOWN = "isolation known"
TAG_OPEN = "open"


# --- external image records -----------------------------------------------------

class SchemaError(DataError):
    pass


class ContainmentError(DataError):
    pass


class DeterminantError(DataError):
    pass


class GenerationError(DataError):
    pass


@dataclass(frozen=True)
class ExternalImageRecord:
    label: str
    image_class: ImageClass
    ell: int
    level: Modulus
    j: Fraction
    j_factored: str
    generators: tuple[Mat2, ...]
    source: str
    line: int = 0

    def group(self) -> Subgroup:
        return closure(self.generators, self.level.value, label=self.label)

    def to_dict(self) -> dict:
        return {"label": self.label, "class": self.image_class.value, "ell": self.ell,
                "level": self.level.value, "j": _frac(self.j), "j_factored": self.j_factored,
                "generators": [m.rows() for m in self.generators], "source": self.source}


_FIELDS = {"label": str, "class": str, "ell": int, "level": int, "j": str,
           "generators": list, "source": str}


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _records_with_lines(text: str) -> list[tuple[int, object]]:
    """Decode a top-level JSON array, keeping the start line of each element."""
    dec = json.JSONDecoder()
    pos = _skip(text, 0)
    if pos >= len(text) or text[pos] != "[":
        raise SchemaError(f"line {_line(text, pos)}: expected a JSON array")
    pos = _skip(text, pos + 1)
    out = []
    if pos < len(text) and text[pos] == "]":
        return out
    while True:
        try:
            obj, end = dec.raw_decode(text, pos)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {exc.lineno}: {exc.msg}") from None
        out.append((_line(text, pos), obj))
        pos = _skip(text, end)
        if pos < len(text) and text[pos] == ",":
            pos = _skip(text, pos + 1)
            continue
        if pos < len(text) and text[pos] == "]":
            break
        raise SchemaError(f"line {_line(text, pos)}: expected ',' or ']'")
    if _skip(text, pos + 1) != len(text):
        raise SchemaError(f"line {_line(text, pos + 1)}: trailing data after array")
    return out


def _skip(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def _line(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _container(image_class: ImageClass, ell: int) -> Subgroup | None:
    kind = {ImageClass.BOREL: "Borel", ImageClass.SPLIT_CARTAN_NORMALIZER: "SplitCartanNormalizer",
            ImageClass.NONSPLIT_CARTAN_NORMALIZER: "NonsplitCartanNormalizer"}.get(image_class)
    return None if kind is None else build_named(NamedSubgroupKind(kind, ell))


def _parse_record(line: int, obj) -> ExternalImageRecord:
    where = f"line {line}"
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: record must be an object")
    for key, typ in _FIELDS.items():
        if key not in obj:
            raise SchemaError(f"{where}: missing field {key!r}")
        if not isinstance(obj[key], typ) or (typ is int and isinstance(obj[key], bool)):
            raise SchemaError(f"{where}: field {key!r} must be {typ.__name__}")
    try:
        image_class = ImageClass(obj["class"])
    except ValueError:
        raise SchemaError(f"{where}: unknown class {obj['class']!r}") from None
    ell, level = obj["ell"], obj["level"]
    if not is_prime(ell) or ell == 2:
        raise SchemaError(f"{where}: ell={ell} is not an odd prime")
    try:
        mod = Modulus(level)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    if mod.ell != ell:
        raise SchemaError(f"{where}: level {level} is not a power of {ell}")
    try:
        j = Fraction(obj["j"])
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: j must be an exact rational 'p/q', got {obj['j']!r}") from None
    if not obj["generators"]:
        raise GenerationError(f"{where}: empty generator list")
    gens = []
    for k, rows in enumerate(obj["generators"]):
        try:
            m = Mat2.from_rows(rows, level)
        except DataError as exc:
            raise SchemaError(f"{where}: generator {k}: {exc}") from None
        if not m.is_invertible:
            raise SingularElementError(f"{where}: generator {k} = {rows}")
        gens.append(m)
    rec = ExternalImageRecord(obj["label"], image_class, ell, mod, j, obj.get("j_factored", ""),
                              tuple(gens), obj["source"], line)
    _validate(rec, where)
    return rec


def _validate(rec: ExternalImageRecord, where: str) -> None:
    ell = rec.ell
    red = [Mat2(m.a, m.b, m.c, m.d, ell) for m in rec.generators]
    g = closure(red, ell)
    container = _container(rec.image_class, ell)
    if container is not None and not g.is_subgroup_of(container):
        raise ContainmentError(f"{where}: {rec.label} is not contained in the canonical "
                               f"{rec.image_class.value} subgroup mod {ell}")
    if rec.image_class is ImageClass.EXCEPTIONAL:
        a, b, c, d = g.entry_arrays
        scalars = int(np.count_nonzero((b == 0) & (c == 0) & (a == d)))
        proj = g.order // scalars
        if proj not in EXCEPTIONAL_PROJECTIVE_ORDERS:
            raise ContainmentError(f"{where}: {rec.label} has projective image of order {proj}, "
                                   f"not one of {EXCEPTIONAL_PROJECTIVE_ORDERS}")
    if rec.level.n == 1 and np.unique(g.dets()).size != ell - 1:
        raise DeterminantError(f"{where}: {rec.label} has non-surjective determinant")


def load_image_table(path: "str | Path") -> list[ExternalImageRecord]:
    text = Path(path).read_text()
    if not text.strip():
        return []
    return [_parse_record(line, obj) for line, obj in _records_with_lines(text)]


def bundled_table() -> list[ExternalImageRecord]:
    with resources.as_file(resources.files("isopoint") / "data" / "images.json") as p:
        return load_image_table(p)


# --- j-invariant renderings --------------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow}


def eval_factored(text: str) -> Fraction:
    """Exact value of a rendering like ``-7*137^3*2083^3`` or ``a/(b^13*c^13)``."""
    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow):
                if right.denominator != 1:
                    raise ValueError("non-integer exponent")
                return left ** int(right)
            return _OPS[type(node.op)](left, right)
        raise ValueError(f"unsupported expression in {text!r}")
    return ev(ast.parse(text.replace("^", "**"), mode="eval").body)


def _fact_for(record_j: Fraction, ell: int) -> JInvariant | None:
    for fact in FACTS.borel_j(ell):
        if record_j == fact.value or any(record_j == eval_factored(a) for a in fact.alt_renderings):
            return fact
    return None


# --- report --------------------------------------------------------------------------

@dataclass(frozen=True)
class Survivor:
    ell: int
    j: Fraction
    factored: str
    tag: str
    record_label: str
    degrees: tuple[int, ...]
    alt_renderings: tuple[str, ...] = ()
    note: str = ""
    citation: str = ""

    def to_dict(self) -> dict:
        return {"ell": self.ell, "j": _frac(self.j), "j_factored": self.factored,
                "alt_renderings": list(self.alt_renderings), "status": "candidate",
                "tag": self.tag, "record": self.record_label, "degrees_at_or_below_genus": list(self.degrees),
                "citation": self.citation, "note": self.note}


@dataclass
class ClassVerdict:
    image_class: ImageClass
    outcome: Outcome
    steps: list[RuleVerdict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"image_class": self.image_class.value, "outcome": self.outcome.value,
                "steps": [s.to_dict() for s in self.steps]}


@dataclass
class ClassificationReport:
    ell: int
    n: int
    genus: int
    per_class_verdicts: list[ClassVerdict] = field(default_factory=list)
    surviving_j_invariants: list[Survivor] = field(default_factory=list)

    @property
    def trace(self) -> list[RuleVerdict]:
        return [s for cv in self.per_class_verdicts for s in cv.steps]

    @property
    def survivors(self) -> set[tuple[int, Fraction]]:
        return {(s.ell, s.j) for s in self.surviving_j_invariants}

    def to_dict(self) -> dict:
        return {"schema": REPORT_SCHEMA, "ell": self.ell, "n": self.n, "genus": self.genus,
                "per_class_verdicts": [cv.to_dict() for cv in self.per_class_verdicts],
                "surviving_j_invariants": [s.to_dict() for s in self.surviving_j_invariants],
                "trace": [dict(s.to_dict(), step=i + 1) for i, s in enumerate(self.trace)]}


def _external_data_verdict(image_class: ImageClass | None, ell: int, what: str, have: int, need: int) -> RuleVerdict:
    return RuleVerdict("external_data_required",
                       Outcome.SURVIVES if have >= need else Outcome.INSUFFICIENT_DATA,
                       witnesses={"have": have, "need": need, "what": what},
                       inputs={"have": have, "need": need, "what": what},
                       image_class=image_class,
                       note="" if have >= need else "insufficient external data")


RULES["external_data_required"] = lambda i: _external_data_verdict(
    None, 0, i["what"], i["have"], i["need"])


def _tag(step: RuleVerdict, c: ImageClass) -> RuleVerdict:
    if step.image_class is c:
        return step
    return RuleVerdict(step.rule_id, step.outcome, step.citations, step.witnesses, step.inputs, c, step.note)


def _classify_records(c: ImageClass, ell: int, genus: int, records: list[ExternalImageRecord],
                      steps: list[RuleVerdict], survivors: list[Survivor]) -> Outcome:
    """Degree-based elimination for images given by external records."""
    outcome = Outcome.ELIMINATES
    for rec in records:
        prof = degree_profile(rec.group())
        degs = prof.degrees
        if c is ImageClass.EXCEPTIONAL and ell == 13:
            steps.append(_tag(exceptional_13_verdict(degs, genus), c))
            if steps[-1].outcome is Outcome.ELIMINATES:
                continue
        low = [d for d in degs if d <= genus]
        high = [d for d in degs if d > genus]
        if high:
            steps.append(_tag(riemann_roch_verdict(min(high), genus, note=f"{rec.label}: degrees {high}"), c))
        open_degrees = []
        for d in low:
            v = dkm_verdict(ell, d)
            if v.outcome is Outcome.ELIMINATES:
                steps.append(_tag(v, c))
                continue
            steps.append(_tag(riemann_roch_verdict(d, genus, note=f"{rec.label}: degree {d} <= genus"), c))
            open_degrees.append(d)
        if open_degrees:
            outcome = Outcome.SURVIVES
            fact = _fact_for(rec.j, ell)
            if fact is None:
                survivors.append(Survivor(ell, rec.j, rec.j_factored, TAG_OPEN, rec.label,
                                          tuple(open_degrees), citation=rec.source))
            else:
                known = fact.value in FACTS.isolation_known
                survivors.append(Survivor(
                    ell, fact.value, fact.factored, TAG_KNOWN if known else TAG_OPEN, rec.label,
                    tuple(open_degrees), fact.alt_renderings, fact.note,
                    FACTS.citation("isolated_37") if known else fact.citation))
    return outcome


def classify(ell: int, n: int, table: list[ExternalImageRecord] | None = None) -> ClassificationReport:
    if not (is_prime(ell) and ell > 7):
        raise OutOfScopeError(f"need a prime l > 7, got {ell}")
    if n < 1:
        raise ValueError("n must be >= 1")
    table = [] if table is None else table
    genus = invariants_x1(ell).genus
    report = ClassificationReport(ell, n, genus)
    for c in CLASS_ORDER:
        steps = [class_admissible_verdict(c, ell)]
        cv = ClassVerdict(c, Outcome.ELIMINATES, steps)
        report.per_class_verdicts.append(cv)
        if steps[0].outcome is Outcome.ELIMINATES:
            continue
        steps.append(level_lowering_ok(c, ell, n))

        if c is ImageClass.SURJECTIVE:
            prof = degree_profile(build_named(NamedSubgroupKind("FullGL2", ell)))
            steps.append(_tag(riemann_roch_verdict(prof.min_degree, genus,
                                                   note="transitive on points of order l"), c))
            cv.outcome = steps[-1].outcome

        elif c is ImageClass.NONSPLIT_CARTAN_NORMALIZER:
            steps.append(_tag(supersingular_forced(ell).verdict(), c))
            steps.append(nonsplit_bound_verdict(ell, genus))
            cv.outcome = steps[-1].outcome

        elif c is ImageClass.BOREL and ell == 11:
            steps.append(mazur_torsion_verdict(ell, genus))
            cv.outcome = steps[-1].outcome

        elif c in (ImageClass.BOREL, ImageClass.EXCEPTIONAL):
            recs = [r for r in table if r.image_class is c and r.ell == ell]
            if c is ImageClass.BOREL:
                need = len(FACTS.borel_j(ell))
                have = sum(1 for f in FACTS.borel_j(ell)
                           if any(_fact_for(r.j, ell) is f for r in recs))
                what = f"image records for the {need} Borel j-invariants at l={ell}"
            else:
                need = FACTS.exceptional_j_count_13
                have = len({r.j for r in recs})
                what = f"image records for the {need} exceptional j-invariants at l=13"
            steps.append(_external_data_verdict(c, ell, what, have, need))
            if have < need:
                cv.outcome = Outcome.INSUFFICIENT_DATA
                continue
            cv.outcome = _classify_records(c, ell, genus, recs, steps, report.surviving_j_invariants)

        else:
            raise AssertionError(f"no rule path for {c} at l={ell}")
    report.surviving_j_invariants.sort(key=lambda s: (s.ell, s.tag != TAG_KNOWN, s.j))
    return report


def classify_range(ells, n: int, table: list[ExternalImageRecord] | None = None) -> list[ClassificationReport]:
    return [classify(ell, n, table) for ell in sorted(ells)]


def primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in range(lo, hi + 1) if is_prime(p)]


def survivor_summary(reports: list[ClassificationReport]) -> dict:
    surv = [(r.ell, s) for r in reports for s in r.surviving_j_invariants]
    return {"primes": [r.ell for r in reports],
            "primes_with_survivors": sorted({ell for ell, _ in surv}),
            "survivors": [s.to_dict() for _, s in surv]}


def replay(report: "ClassificationReport | dict") -> list[tuple[int, str, str, str]]:
    """Recompute every trace step; returns (step, rule, recorded, recomputed) mismatches."""
    doc = report.to_dict() if isinstance(report, ClassificationReport) else report
    bad = []
    for step in doc["trace"]:
        rule = RULES[step["rule_id"]]
        got = rule(step["inputs"]).outcome.value
        if got != step["outcome"]:
            bad.append((step["step"], step["rule_id"], step["outcome"], got))
    return bad


# --- rendering -------------------------------------------------------------------------

def emit_report(report: "ClassificationReport | list[ClassificationReport]", format: str = "json") -> str:
    reports = report if isinstance(report, list) else [report]
    if format == "json":
        if isinstance(report, list):
            return json.dumps({"schema": REPORT_SCHEMA, "reports": [r.to_dict() for r in reports],
                               "summary": survivor_summary(reports)}, indent=2)
        return json.dumps(report.to_dict(), indent=2)
    if format == "text":
        return "\n\n".join(_text(r) for r in reports) + "\n"
    raise ValueError(f"unknown format {format!r}")


def _text(r: ClassificationReport) -> str:
    lines = [f"X1({r.ell}^{r.n}): l = {r.ell}, genus of X1({r.ell}) = {r.genus}"]
    for i, s in enumerate(r.trace, 1):
        wit = ", ".join(f"{k}={v}" for k, v in s.witnesses.items())
        head = f"{i}. [{s.image_class.value if s.image_class else '-'}] {s.rule_id}: {s.outcome.value}"
        if wit:
            head += f" ({wit})"
        if s.note:
            head += f"; {s.note}"
        lines.append(head)
        for cite in s.citations:
            lines.append(f"     cite: {cite}")
    lines.append("classes: " + ", ".join(f"{cv.image_class.value}={cv.outcome.value}"
                                         for cv in r.per_class_verdicts))
    if not r.surviving_j_invariants:
        lines.append("survivors: none")
    for s in r.surviving_j_invariants:
        alt = f" (also rendered {', '.join(s.alt_renderings)})" if s.alt_renderings else ""
        lines.append(f"survivor: j = {s.factored} = {_frac(s.j)}{alt}; candidate, {s.tag}")
    return "\n".join(lines)
