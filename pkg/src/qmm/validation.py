"""Completeness checks over a parsed model.

Structural breakage is rejected by the parser, so everything reported here
is advisory (WARNING or INFO). Each code fixes its severity and message.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable

from .model import AttributedElement, Impact, NodePath, QualityModel, walk


class Severity(enum.IntEnum):
    INFO = 1
    WARNING = 2
    ERROR = 3

    @classmethod
    def parse(cls, text: str) -> "Severity":
        return cls[text.strip().upper()]


CODES: dict[str, tuple[Severity, str]] = {
    "W001": (Severity.WARNING, "attributed fact has no impact on any activity"),
    "W002": (Severity.WARNING, "fact has no attributed tuples in its subtree"),
    "W003": (Severity.WARNING, "attributed activity is not targeted by any impact"),
    "W004": (Severity.WARNING, "attribute is declared but attached to no node"),
    "W005": (Severity.WARNING, "impact has no rationale"),
    "I101": (Severity.INFO, "goal is declared but unmapped (empty basis)"),
    "I102": (Severity.INFO, "activity attribute is in no goal's basis"),
}

# ordering of subject kinds in a listing
_KIND_RANK = {"fact": 0, "activity": 1, "impact": 2, "attribute": 3, "goal": 4}


@dataclass(frozen=True)
class Subject:
    """What a diagnostic is about: a node, a tuple, an impact, an attribute or a goal."""

    kind: str
    path: NodePath | None = None
    attribute: str | None = None
    name: str | None = None
    target: AttributedElement | None = None

    @classmethod
    def of_impact(cls, impact: Impact) -> "Subject":
        return cls("impact", impact.source.path, impact.source.attribute, target=impact.target)

    def sort_key(self) -> tuple:
        target = (self.target.path.segments, self.target.attribute) if self.target else ()
        return (
            _KIND_RANK[self.kind],
            self.path.segments if self.path else (),
            self.attribute or "",
            self.name or "",
            target,
        )

    def __str__(self) -> str:
        if self.kind == "impact":
            return f"[{self.path}|{self.attribute}] -> {self.target}"
        if self.kind in ("fact", "activity"):
            if self.attribute is None:
                return str(self.path)
            return f"[{self.path}|{self.attribute}]"
        return str(self.name)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: Severity
    subject: Subject
    message: str

    @classmethod
    def make(cls, code: str, subject: Subject) -> "Diagnostic":
        severity, message = CODES[code]
        return cls(code, severity, subject, message)

    def render(self) -> str:
        return f"{self.code} {self.severity.name} {self.subject}: {self.message}"

    def record(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity.name,
            "subject": str(self.subject),
            "message": self.message,
        }


def check(model: QualityModel) -> list[Diagnostic]:
    """Run every completeness check; deterministic order by (tree, path, code)."""
    out: list[Diagnostic] = []
    impacted_sources = {imp.source for imp in model.impacts}
    targeted = {imp.target for imp in model.impacts}

    for elem, _ in model.fact_tuples():
        if elem not in impacted_sources:
            out.append(Diagnostic.make("W001", Subject("fact", elem.path, elem.attribute)))

    for path in _inert_facts(model):
        out.append(Diagnostic.make("W002", Subject("fact", path)))

    used: set[str] = set()
    activity_attrs_used: set[str] = set()
    for elem in model.activity_tuples():
        used.add(elem.attribute)
        activity_attrs_used.add(elem.attribute)
        if elem not in targeted:
            out.append(Diagnostic.make("W003", Subject("activity", elem.path, elem.attribute)))
    for elem, _ in model.fact_tuples():
        used.add(elem.attribute)

    for imp in model.impacts:
        if not (imp.rationale and imp.rationale.strip()):
            out.append(Diagnostic.make("W005", Subject.of_impact(imp)))

    for attr in model.attributes:
        if attr.name not in used:
            out.append(Diagnostic.make("W004", Subject("attribute", name=attr.name)))

    in_basis = {a for g in model.goals for a in g.basis}
    for attr in model.attributes:
        if attr.name in activity_attrs_used and attr.name not in in_basis:
            out.append(Diagnostic.make("I102", Subject("attribute", name=attr.name)))

    for goal in model.goals:
        if not goal.basis:
            out.append(Diagnostic.make("I101", Subject("goal", name=goal.name)))

    out.sort(key=lambda d: (d.subject.sort_key(), d.code))
    return out


def _inert_facts(model: QualityModel) -> list[NodePath]:
    """Facts whose whole subtree (self included) carries no attribute."""
    nodes = list(walk(model.fact_roots))
    live: dict[NodePath, bool] = {}
    for path, node in reversed(nodes):
        live[path] = bool(node.attributed) or any(live[path.child(c.name)] for c in node.children)
    return [path for path, _ in nodes if not live[path]]


def worst(diagnostics: Iterable[Diagnostic]) -> Severity | None:
    levels = [d.severity for d in diagnostics]
    return max(levels) if levels else None


def render_text(diagnostics: Iterable[Diagnostic]) -> str:
    return "".join(d.render() + "\n" for d in diagnostics)


def render_records(diagnostics: Iterable[Diagnostic]) -> str:
    """One JSON object per line with code, severity, subject and message."""
    return "".join(json.dumps(d.record(), ensure_ascii=False, sort_keys=True) + "\n" for d in diagnostics)
