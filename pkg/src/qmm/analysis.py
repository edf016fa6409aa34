"""Impact tracing, goal reports and quantified evaluation.

Evaluation contract (stated here because the generated reports rely on it):

* an activity tuple scores ``sum(sign * weight * value(source))`` over the
  impacts that target exactly that tuple; unassessed sources count as 0;
* a node's score for an attribute is the frequency-weighted mean over the
  node itself (when it carries the attribute) and those children whose
  subtree carries it, children contributing their rolled-up score;
* a node's frequency weight is its assessed FREQUENCY value when the node
  carries FREQUENCY and the assessment binds it, otherwise 1;
* a goal scores the mean of the root node scores over its basis attributes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .dsl import Assessment
from .model import (
    AmbiguousPath,
    AttributedElement,
    Direction,
    Impact,
    ModelError,
    NodePath,
    NotFound,
    PathLike,
    QualityModel,
    Tree,
    locate,
    walk,
)

FREQUENCY = "FREQUENCY"


class UnknownGoal(ModelError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown goal {name}")


class UnresolvableBinding(ModelError):
    def __init__(self, path: NodePath, attribute: str, reason: str = "no such attributed fact"):
        self.path = path
        self.attribute = attribute
        super().__init__(f"cannot bind [{path}|{attribute}]: {reason}")


@dataclass(frozen=True)
class TraceEntry:
    impact: Impact
    goal_names: tuple[str, ...]

    def render(self) -> str:
        imp = self.impact
        goals = ", ".join(self.goal_names) or "(none)"
        return f"{imp.source} -> {imp.target} {imp.direction.value} {imp.weight!r}; goals: {goals}"


class GoalReportEntry(NamedTuple):
    source: AttributedElement
    target: AttributedElement
    direction: Direction
    weight: float

    def render(self) -> str:
        return f"{self.source} -> {self.target} {self.direction.value} {self.weight!r}"


@dataclass(frozen=True)
class GoalReport:
    goal: str
    entries: tuple[GoalReportEntry, ...]
    note: str | None = None

    def __iter__(self) -> Iterator[GoalReportEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def render(self) -> str:
        lines = [e.render() for e in self.entries]
        if self.note:
            lines.append(f"note: {self.note}")
        return "".join(line + "\n" for line in lines)


def goals_reaching(model: QualityModel, attribute: str) -> tuple[str, ...]:
    return tuple(sorted(g.name for g in model.goals if attribute in g.basis))


def _impact_order(imp: Impact) -> tuple:
    return (imp.source.path.segments, imp.source.attribute, imp.target.path.segments, imp.target.attribute)


def trace_fact(model: QualityModel, fact_path: PathLike) -> list[TraceEntry]:
    """Impacts leaving the fact or any of its descendants, with the goals they reach."""
    root = locate(model, Tree.FACT, fact_path)
    hits = [imp for imp in model.impacts if imp.source.path.is_within(root)]
    hits.sort(key=_impact_order)
    return [TraceEntry(imp, goals_reaching(model, imp.target.attribute)) for imp in hits]


def goal_report(model: QualityModel, goal_name: str) -> GoalReport:
    goal = model.goal_map.get(goal_name)
    if goal is None:
        raise UnknownGoal(goal_name)
    if not goal.basis:
        return GoalReport(goal_name, (), f"I101 goal {goal_name} is declared but unmapped (empty basis)")
    basis = set(goal.basis)
    hits = sorted((imp for imp in model.impacts if imp.target.attribute in basis), key=_impact_order)
    return GoalReport(
        goal_name,
        tuple(GoalReportEntry(i.source, i.target, i.direction, i.weight) for i in hits),
    )


@dataclass(frozen=True)
class EvaluationReport:
    tuple_scores: dict[AttributedElement, float] = field(default_factory=dict)
    node_scores: dict[NodePath, dict[str, float]] = field(default_factory=dict)
    goal_scores: dict[str, float] = field(default_factory=dict)

    def records(self) -> dict:
        return {
            "tuple_scores": [
                {"activity": str(k.path), "attribute": k.attribute, "score": _fmt(v)}
                for k, v in self.tuple_scores.items()
            ],
            "node_scores": [
                {"activity": str(path), "attribute": attr, "score": _fmt(v)}
                for path, scores in self.node_scores.items()
                for attr, v in scores.items()
            ],
            "goal_scores": [{"goal": g, "score": _fmt(v)} for g, v in self.goal_scores.items()],
        }

    def render_records(self) -> str:
        return json.dumps(self.records(), indent=2, ensure_ascii=False) + "\n"

    def render_text(self) -> str:
        sections = [
            ("tuple scores", ("activity", "attribute", "score"),
             [(str(k.path), k.attribute, _fmt(v)) for k, v in self.tuple_scores.items()]),
            ("node scores (rolled up)", ("activity", "attribute", "score"),
             [(str(p), a, _fmt(v)) for p, scores in self.node_scores.items() for a, v in scores.items()]),
            ("goal scores", ("goal", "score"),
             [(g, _fmt(v)) for g, v in self.goal_scores.items()]),
        ]
        out: list[str] = []
        for title, header, rows in sections:
            out.append(title)
            table = [header, *rows]
            widths = [max(len(r[i]) for r in table) for i in range(len(header))]
            for row in table:
                cells = [c.ljust(w) for c, w in zip(row[:-1], widths)] + [row[-1].rjust(widths[-1])]
                out.append("  " + "  ".join(cells).rstrip())
            out.append("")
        out.append("roll-up: frequency-weighted mean over the node and its children; goal: mean over root nodes and basis attributes")
        return "\n".join(out) + "\n"


def _fmt(value: float) -> str:
    text = f"{value:.9f}"
    return "0.000000000" if text == "-0.000000000" else text


def _bind(model: QualityModel, assessment: Assessment):
    fact_values: dict[AttributedElement, float] = {}
    frequencies: dict[NodePath, float] = {}
    for key, value in assessment.bindings.items():
        try:
            path = locate(model, Tree.FACT, key.path)
        except (NotFound, AmbiguousPath) as exc:
            path, fact_error = None, exc
        else:
            fact_error = None
        if path is not None and key.attribute in model.node_at(Tree.FACT, path).attribute_names:
            elem = AttributedElement(path, key.attribute)
            if elem in fact_values:
                raise UnresolvableBinding(key.path, key.attribute, "bound twice")
            fact_values[elem] = value
            continue
        if key.attribute == FREQUENCY:
            try:
                apath = locate(model, Tree.ACTIVITY, key.path)
            except (NotFound, AmbiguousPath) as exc:
                raise UnresolvableBinding(key.path, key.attribute, str(exc)) from None
            if FREQUENCY in model.node_at(Tree.ACTIVITY, apath).attribute_names:
                if apath in frequencies:
                    raise UnresolvableBinding(key.path, key.attribute, "bound twice")
                frequencies[apath] = value
                continue
            raise UnresolvableBinding(key.path, key.attribute, "activity does not carry FREQUENCY")
        reason = str(fact_error) if fact_error else "fact does not carry the attribute"
        raise UnresolvableBinding(key.path, key.attribute, reason)
    return fact_values, frequencies


def evaluate(model: QualityModel, assessment: Assessment) -> EvaluationReport:
    """Score every activity tuple, roll scores up the activity tree, and score goals.

    Arithmetic is exact (rational) and converted to float once at the end, so
    results do not depend on summation order.
    """
    fact_values, frequencies = _bind(model, assessment)

    exact: dict[AttributedElement, Fraction] = {
        elem: Fraction(0) for elem in model.activity_tuples() if elem.attribute != FREQUENCY
    }
    for imp in model.impacts:
        if imp.target in exact:
            value = Fraction(fact_values.get(imp.source, 0.0))
            exact[imp.target] += imp.direction.sign * Fraction(imp.weight) * value

    def weight(path: NodePath, node) -> Fraction:
        if FREQUENCY in node.attribute_names and path in frequencies:
            return Fraction(frequencies[path])
        return Fraction(1)

    order = _attr_order(model)
    nodes = list(walk(model.activity_roots))
    rolled: dict[NodePath, dict[str, Fraction]] = {}
    for path, node in reversed(nodes):  # children before parents
        attrs = {a for a in node.attribute_names if a != FREQUENCY}
        kids = [(path.child(c.name), c) for c in node.children]
        for kpath, _ in kids:
            attrs.update(rolled[kpath])
        scores: dict[str, Fraction] = {}
        for attr in sorted(attrs, key=order):
            num = den = Fraction(0)
            if attr in node.attribute_names:
                w = weight(path, node)
                num += w * exact[AttributedElement(path, attr)]
                den += w
            for kpath, kid in kids:
                if attr in rolled[kpath]:
                    w = weight(kpath, kid)
                    num += w * rolled[kpath][attr]
                    den += w
            scores[attr] = num / den if den else Fraction(0)
        rolled[path] = scores

    goal_scores: dict[str, float] = {}
    for goal in model.goals:
        values = []
        for root in model.activity_roots:
            root_scores = rolled[NodePath((root.name,))]
            values.extend(root_scores[a] for a in goal.basis if a in root_scores)
        goal_scores[goal.name] = float(sum(values) / len(values)) if values else 0.0

    return EvaluationReport(
        tuple_scores={k: float(v) for k, v in exact.items()},
        node_scores={path: {a: float(v) for a, v in rolled[path].items()} for path, _ in nodes},
        goal_scores=goal_scores,
    )


def _attr_order(model: QualityModel):
    order = {a.name: i for i, a in enumerate(model.attributes)}
    return lambda name: (order.get(name, len(order)), name)
