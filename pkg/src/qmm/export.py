"""Deterministic review documents generated from a model.

Every generator is a pure function ``(model, options) -> str``. Built-ins are
registered in :data:`REGISTRY` under ``guideline``, ``checklist``,
``glossary``, ``graph`` and ``qmm``; third-party generators can be added with
:func:`register_generator` or through the ``qmm.generators`` entry-point group.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import metadata
from typing import Callable, Iterable, Mapping

from .analysis import goals_reaching
from .dsl import serialize
from .model import (
    Assessability,
    AttributedElement,
    Direction,
    Impact,
    NodePath,
    PathLike,
    QualityModel,
    Tree,
    locate,
)

Options = Mapping[str, object]
Producer = Callable[[QualityModel, Options], str]

ALL_LEVELS = frozenset(Assessability)
_VERB = {Direction.POSITIVE: "benefits", Direction.NEGATIVE: "harms"}
_SIGN = {Direction.POSITIVE: "+", Direction.NEGATIVE: "−"}


class DuplicateGenerator(ValueError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"generator '{name}' is already registered")


class UnknownGenerator(LookupError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown generator '{name}'")


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    produce: Producer
    description: str = ""


class Registry:
    def __init__(self, specs: Iterable[GeneratorSpec] = ()):
        self._specs: dict[str, GeneratorSpec] = {}
        for spec in specs:
            self.register(spec)

    def register(self, spec: GeneratorSpec) -> None:
        if spec.name in self._specs:
            raise DuplicateGenerator(spec.name)
        self._specs[spec.name] = spec

    def run(self, name: str, model: QualityModel, options: Options | None = None) -> str:
        spec = self._specs.get(name)
        if spec is None:
            raise UnknownGenerator(name)
        return spec.produce(model, dict(options or {}))

    def names(self) -> list[str]:
        return sorted(self._specs)

    def __contains__(self, name: str) -> bool:
        return name in self._specs


def _tuple_label(model: QualityModel, tree: Tree, elem: AttributedElement) -> str:
    return f"{model.display_name(tree, elem.path)} ({elem.attribute})"


def export_guideline(model: QualityModel, scope: PathLike | None = None) -> str:
    """One rule per impact leaving ``scope`` (default: all facts), grouped by fact."""
    root = locate(model, Tree.FACT, scope) if scope is not None else None
    by_source: dict[NodePath, list[Impact]] = {}
    for imp in model.impacts:
        if root is None or imp.source.path.is_within(root):
            by_source.setdefault(imp.source.path, []).append(imp)

    lines = [f"# Quality guideline: {model.name}"]
    if root is not None:
        lines.append(f"Scope: {root}")
    for path, _ in model.nodes(Tree.FACT):
        rules = by_source.get(path)
        if not rules:
            continue
        lines += ["", f"## {path}"]
        for imp in rules:
            goals = ", ".join(goals_reaching(model, imp.target.attribute)) or "(none)"
            lines.append(
                f"- Ensure {imp.source.attribute} of {model.display_name(Tree.FACT, path)} — "
                f"{_VERB[imp.direction]} {model.display_name(Tree.ACTIVITY, imp.target.path)} "
                f"({imp.target.attribute}); goals: {goals}"
            )
            if imp.rationale:
                lines.append(f"  Rationale: {imp.rationale}")
    return "\n".join(lines) + "\n"


def export_checklist(model: QualityModel, levels: Iterable[Assessability] = ALL_LEVELS) -> str:
    levels = frozenset(levels)
    impacts_from: dict[AttributedElement, list[Impact]] = {}
    for imp in model.impacts:
        impacts_from.setdefault(imp.source, []).append(imp)

    items = sorted(
        ((elem, tag) for elem, tag in model.fact_tuples() if tag in levels),
        key=lambda item: (item[0].path.segments, item[0].attribute),
    )
    shown = ", ".join(a.name for a in Assessability if a in levels) or "(none)"
    lines = [f"# Review checklist: {model.name}", f"Assessability: {shown}", ""]
    for elem, tag in items:
        cited = [
            f"{_tuple_label(model, Tree.ACTIVITY, imp.target)} {imp.direction.value}"
            for imp in impacts_from.get(elem, [])
        ]
        impacts = "; ".join(cited) or "(none)"
        name = model.display_name(Tree.FACT, elem.path)
        lines.append(f"- [ ] [{name} | {elem.attribute}] ({tag.value}) — impacts: {impacts}")
    return "\n".join(lines) + "\n"


def export_glossary(model: QualityModel) -> str:
    entries: list[tuple[str, int, str]] = []
    for rank, tree in enumerate(Tree):
        for path, node in model.nodes(tree):
            entries.append((model.display_name(tree, path), rank, node.description or "(no description)"))
    for attr in model.attributes:
        entries.append((attr.name, 2, attr.description or "(no description)"))
    entries.sort(key=lambda e: (e[0].casefold(), e[0], e[1]))
    lines = [f"# Glossary: {model.name}", ""]
    lines += [f"{term} — {text}" for term, _, text in entries]
    return "\n".join(lines) + "\n"


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_graph(model: QualityModel) -> str:
    """Graph in ``digraph { ... }`` text form.

    Solid edges are tree edges, dotted edges attach a tuple to its node and
    dashed edges are impacts labelled with sign and weight.
    """
    fact_ids = {str(p) for p in model.paths(Tree.FACT)}

    def node_id(tree: Tree, path: NodePath) -> str:
        text = str(path)
        if tree is Tree.ACTIVITY and text in fact_ids:
            text += " (activity)"
        return text

    def tuple_id(tree: Tree, elem: AttributedElement) -> str:
        return f"{node_id(tree, elem.path)}|{elem.attribute}"

    lines = [f"digraph {_dot_id(model.name)} {{", "  rankdir=LR;"]
    for tree, shape in ((Tree.FACT, "ellipse"), (Tree.ACTIVITY, "box")):
        lines.append(f"  // {tree.value} tree")
        for path, node in model.nodes(tree):
            nid = node_id(tree, path)
            lines.append(f"  {_dot_id(nid)} [label={_dot_id(node.name)}, shape={shape}];")
            if path.parent is not None:
                lines.append(f"  {_dot_id(node_id(tree, path.parent))} -> {_dot_id(nid)} [style=solid];")
            for attr in node.attribute_names:
                tid = tuple_id(tree, AttributedElement(path, attr))
                lines.append(f"  {_dot_id(tid)} [label={_dot_id(attr)}, shape=note];")
                lines.append(f"  {_dot_id(nid)} -> {_dot_id(tid)} [style=dotted, arrowhead=none];")
    lines.append("  // impacts")
    for imp in model.impacts:
        label = f"{_SIGN[imp.direction]} {imp.weight!r}"
        lines.append(
            f"  {_dot_id(tuple_id(Tree.FACT, imp.source))} -> {_dot_id(tuple_id(Tree.ACTIVITY, imp.target))}"
            f" [style=dashed, label={_dot_id(label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_levels(spec: str | Iterable[str] | None) -> frozenset[Assessability]:
    """Parse ``"auto,semi"`` style filters; None means all levels."""
    if spec is None:
        return ALL_LEVELS
    parts = spec.split(",") if isinstance(spec, str) else list(spec)
    return frozenset(Assessability(p.strip().lower()) for p in parts if p.strip())


def _guideline(model: QualityModel, options: Options) -> str:
    return export_guideline(model, options.get("scope"))  # type: ignore[arg-type]


def _checklist(model: QualityModel, options: Options) -> str:
    return export_checklist(model, parse_levels(options.get("assess_filter")))  # type: ignore[arg-type]


BUILTINS = (
    GeneratorSpec("guideline", _guideline, "review guideline, one rule per impact"),
    GeneratorSpec("checklist", _checklist, "checkbox per attributed fact"),
    GeneratorSpec("glossary", lambda m, o: export_glossary(m), "alphabetical terms"),
    GeneratorSpec("graph", lambda m, o: export_graph(m), "digraph of both trees and impacts"),
    GeneratorSpec("qmm", lambda m, o: serialize(m), "canonical model text"),
)

REGISTRY = Registry(BUILTINS)


def register_generator(spec: GeneratorSpec, registry: Registry = REGISTRY) -> None:
    registry.register(spec)


def run_generator(name: str, model: QualityModel, options: Options | None = None, registry: Registry = REGISTRY) -> str:
    return registry.run(name, model, options)


def load_plugins(registry: Registry = REGISTRY, group: str = "qmm.generators") -> list[str]:
    """Register generators advertised by installed packages; returns their names."""
    loaded = []
    for ep in metadata.entry_points(group=group):
        if ep.name in registry:
            continue
        obj = ep.load()
        spec = obj if isinstance(obj, GeneratorSpec) else GeneratorSpec(ep.name, obj)
        registry.register(spec)
        loaded.append(spec.name)
    return loaded
