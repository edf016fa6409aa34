"""In-memory two-dimensional quality model.

A model holds two independent trees: facts (entities of the system and its
situation of use) and activities (what the user does). Attributes are
attached to nodes of either tree, and impacts connect a fact-side
``(node, attribute)`` tuple to an activity-side tuple.

Models are immutable. Use :class:`ModelBuilder` or :func:`add_impact` /
:func:`remove_impact` to derive new ones.
"""

from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence, Union


class Tree(enum.Enum):
    FACT = "fact"
    ACTIVITY = "activity"


class AppliesTo(enum.Enum):
    FACT = "facts"
    ACTIVITY = "activities"
    BOTH = "both"

    def allows(self, tree: Tree) -> bool:
        if self is AppliesTo.BOTH:
            return True
        return (self is AppliesTo.FACT) == (tree is Tree.FACT)


class Assessability(enum.Enum):
    AUTO = "auto"
    SEMI = "semi"
    MANUAL = "manual"


class Direction(enum.Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.POSITIVE else -1

    def flipped(self) -> "Direction":
        return Direction.NEGATIVE if self is Direction.POSITIVE else Direction.POSITIVE


class ModelError(Exception):
    """Base class for errors raised while building or querying a model."""


class NotFound(ModelError):
    def __init__(self, tree: Tree, path: "NodePath", nearest: "NodePath | None" = None):
        self.tree = tree
        self.path = path
        self.nearest = nearest
        where = f"; nearest existing prefix is '{nearest}'" if nearest else ""
        super().__init__(f"no {tree.value} at path '{path}'{where}")


class AmbiguousPath(ModelError):
    def __init__(self, tree: Tree, name: str, candidates: Sequence["NodePath"]):
        self.tree = tree
        self.name = name
        self.candidates = tuple(candidates)
        listed = ", ".join(f"'{c}'" for c in self.candidates)
        super().__init__(f"{tree.value} name '{name}' is ambiguous: {listed}")


class AttributeNotAttached(ModelError):
    def __init__(self, element: "AttributedElement", tree: Tree):
        self.element = element
        self.tree = tree
        super().__init__(
            f"{tree.value} '{element.path}' does not carry attribute {element.attribute}"
        )


class DuplicateImpact(ModelError):
    def __init__(self, source: "AttributedElement", target: "AttributedElement"):
        self.source = source
        self.target = target
        super().__init__(f"impact {source} -> {target} already exists")


class InvalidModel(ModelError):
    """A model violates one of the structural invariants."""

    def __init__(self, problems: Sequence[str]):
        self.problems = tuple(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True, order=True)
class NodePath:
    """Root-first sequence of node names, rendered ``A/B/C``."""

    segments: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("a path needs at least one segment")

    @classmethod
    def parse(cls, text: str) -> "NodePath":
        return cls(tuple(part.strip() for part in text.split("/")))

    @classmethod
    def of(cls, value: "PathLike") -> "NodePath":
        if isinstance(value, NodePath):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(tuple(value))

    @property
    def leaf(self) -> str:
        return self.segments[-1]

    @property
    def parent(self) -> "NodePath | None":
        if len(self.segments) == 1:
            return None
        return NodePath(self.segments[:-1])

    def child(self, name: str) -> "NodePath":
        return NodePath(self.segments + (name,))

    def is_within(self, ancestor: "NodePath") -> bool:
        n = len(ancestor.segments)
        return self.segments[:n] == ancestor.segments

    def __str__(self) -> str:
        return "/".join(self.segments)


PathLike = Union[NodePath, str, Sequence[str]]


@dataclass(frozen=True, order=True)
class AttributedElement:
    """A ``(node, attribute)`` tuple; the unit impacts connect."""

    path: NodePath
    attribute: str

    def __str__(self) -> str:
        return f"[{self.path}|{self.attribute}]"


@dataclass(frozen=True)
class AttributeDef:
    name: str
    applies_to: AppliesTo = AppliesTo.BOTH
    description: str | None = None


@dataclass(frozen=True)
class FactNode:
    name: str
    description: str | None = None
    attributed: tuple[tuple[str, Assessability], ...] = ()
    children: tuple["FactNode", ...] = ()

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.attributed)

    def assessability(self, attribute: str) -> Assessability | None:
        for name, tag in self.attributed:
            if name == attribute:
                return tag
        return None


@dataclass(frozen=True)
class ActivityNode:
    name: str
    description: str | None = None
    attributed: tuple[str, ...] = ()
    children: tuple["ActivityNode", ...] = ()

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return self.attributed


Node = Union[FactNode, ActivityNode]


@dataclass(frozen=True)
class Impact:
    source: AttributedElement
    target: AttributedElement
    direction: Direction = Direction.POSITIVE
    weight: float = 1.0
    rationale: str | None = None

    @property
    def key(self) -> tuple[AttributedElement, AttributedElement]:
        return (self.source, self.target)

    def __str__(self) -> str:
        return f"{self.source} -> {self.target} {self.direction.value}"


@dataclass(frozen=True)
class GoalDef:
    name: str
    basis: tuple[str, ...] = ()
    description: str | None = None


@dataclass(frozen=True)
class ModelStats:
    n_facts: int = 0
    n_activities: int = 0
    n_attributes: int = 0
    n_attributed_facts: int = 0
    n_attributed_activities: int = 0
    n_impacts: int = 0
    n_goals: int = 0

    def lines(self) -> list[str]:
        return [
            f"facts: {self.n_facts}",
            f"activities: {self.n_activities}",
            f"attributes: {self.n_attributes}",
            f"attributed_facts: {self.n_attributed_facts}",
            f"attributed_activities: {self.n_attributed_activities}",
            f"impacts: {self.n_impacts}",
            f"goals: {self.n_goals}",
        ]


def walk(roots: Sequence[Node], prefix: NodePath | None = None) -> Iterator[tuple[NodePath, Node]]:
    """Depth-first pre-order traversal yielding ``(path, node)``."""
    stack = [
        (prefix.child(n.name) if prefix else NodePath((n.name,)), n) for n in reversed(roots)
    ]
    while stack:
        path, node = stack.pop()
        yield path, node
        for child in reversed(node.children):
            stack.append((path.child(child.name), child))


@dataclass(frozen=True)
class QualityModel:
    name: str
    attributes: tuple[AttributeDef, ...] = ()
    fact_roots: tuple[FactNode, ...] = ()
    activity_roots: tuple[ActivityNode, ...] = ()
    impacts: tuple[Impact, ...] = ()
    goals: tuple[GoalDef, ...] = ()
    description: str | None = None
    validate: dataclasses.InitVar[bool] = True

    def __post_init__(self, validate: bool) -> None:
        if validate:
            problems = structural_problems(self)
            if problems:
                raise InvalidModel(problems)

    def roots(self, tree: Tree) -> tuple[Node, ...]:
        return self.fact_roots if tree is Tree.FACT else self.activity_roots

    def nodes(self, tree: Tree) -> Iterator[tuple[NodePath, Node]]:
        return walk(self.roots(tree))

    @cached_property
    def _index(self) -> dict[Tree, dict[NodePath, Node]]:
        return {tree: dict(self.nodes(tree)) for tree in Tree}

    @cached_property
    def _leaf_index(self) -> dict[Tree, dict[str, list[NodePath]]]:
        out: dict[Tree, dict[str, list[NodePath]]] = {}
        for tree in Tree:
            names: dict[str, list[NodePath]] = {}
            for path in self._index[tree]:
                names.setdefault(path.leaf, []).append(path)
            out[tree] = names
        return out

    @cached_property
    def attribute_map(self) -> dict[str, AttributeDef]:
        return {a.name: a for a in self.attributes}

    @cached_property
    def goal_map(self) -> dict[str, GoalDef]:
        return {g.name: g for g in self.goals}

    def node_at(self, tree: Tree, path: NodePath) -> Node | None:
        return self._index[tree].get(path)

    def paths(self, tree: Tree) -> list[NodePath]:
        return list(self._index[tree])

    def leaf_paths(self, tree: Tree, name: str) -> list[NodePath]:
        return list(self._leaf_index[tree].get(name, ()))

    def display_name(self, tree: Tree, path: NodePath) -> str:
        """Leaf name when unique within its tree, else the full path."""
        if len(self._leaf_index[tree].get(path.leaf, ())) == 1:
            return path.leaf
        return str(path)

    def fact_tuples(self) -> Iterator[tuple[AttributedElement, Assessability]]:
        for path, node in self.nodes(Tree.FACT):
            for attr, tag in node.attributed:
                yield AttributedElement(path, attr), tag

    def activity_tuples(self) -> Iterator[AttributedElement]:
        for path, node in self.nodes(Tree.ACTIVITY):
            for attr in node.attributed:
                yield AttributedElement(path, attr)

    def carries(self, tree: Tree, element: AttributedElement) -> bool:
        node = self.node_at(tree, element.path)
        return node is not None and element.attribute in node.attribute_names


def structural_problems(model: QualityModel) -> list[str]:
    """List every violated structural invariant (empty when the model is valid)."""
    problems: list[str] = []
    if not model.name:
        problems.append("model name is empty")

    attrs: dict[str, AttributeDef] = {}
    for a in model.attributes:
        if a.name in attrs:
            problems.append(f"attribute {a.name} declared twice")
        attrs[a.name] = a

    for tree in Tree:
        # Trees are built from immutable tuples, so cycles and shared parents
        # cannot be expressed; only sibling names need checking.
        roots = model.roots(tree)
        _check_siblings(tree, None, roots, problems)
        for path, node in walk(roots):
            bad = name_problem(node.name)
            if bad:
                problems.append(f"{tree.value} name {node.name!r} {bad}")
            _check_siblings(tree, path, node.children, problems)
            seen: set[str] = set()
            for attr in node.attribute_names:
                if attr in seen:
                    problems.append(f"{tree.value} '{path}' carries {attr} twice")
                seen.add(attr)
                adef = attrs.get(attr)
                if adef is None:
                    problems.append(f"{tree.value} '{path}' uses undeclared attribute {attr}")
                elif not adef.applies_to.allows(tree):
                    problems.append(f"attribute {attr} does not apply to {tree.value}s ('{path}')")

    index = {tree: dict(walk(model.roots(tree))) for tree in Tree}
    seen_impacts: set[tuple[AttributedElement, AttributedElement]] = set()
    for imp in model.impacts:
        for tree, end in ((Tree.FACT, imp.source), (Tree.ACTIVITY, imp.target)):
            node = index[tree].get(end.path)
            if node is None:
                problems.append(f"impact endpoint {end} is not an existing {tree.value}")
            elif end.attribute not in node.attribute_names:
                problems.append(f"impact endpoint {end}: attribute not attached")
        if not 0.0 < imp.weight <= 1.0:
            problems.append(f"impact {imp} has weight {imp.weight!r} outside (0, 1]")
        if imp.key in seen_impacts:
            problems.append(f"impact {imp.source} -> {imp.target} declared twice")
        seen_impacts.add(imp.key)

    goal_names: set[str] = set()
    for g in model.goals:
        if g.name in goal_names:
            problems.append(f"goal {g.name} declared twice")
        goal_names.add(g.name)
        if len(set(g.basis)) != len(g.basis):
            problems.append(f"goal {g.name} lists an attribute twice")
        for attr in g.basis:
            adef = attrs.get(attr)
            if adef is None:
                problems.append(f"goal {g.name} uses undeclared attribute {attr}")
            elif not adef.applies_to.allows(Tree.ACTIVITY):
                problems.append(f"goal {g.name}: attribute {attr} does not apply to activities")
    return problems


_FORBIDDEN = set('/"\\')


def name_problem(name: str) -> str | None:
    """Why ``name`` cannot be a node name, or None when it can."""
    if not name:
        return "is empty"
    if name != name.strip():
        return "has leading or trailing whitespace"
    if any(ch in _FORBIDDEN or ord(ch) < 0x20 or ord(ch) == 0x7F for ch in name):
        return "contains '/', '\"', '\\' or a control character"
    return None


def _check_siblings(tree: Tree, parent: NodePath | None, nodes: Sequence[Node], problems: list[str]) -> None:
    names: set[str] = set()
    for n in nodes:
        if n.name in names:
            where = f"under '{parent}'" if parent else "at the root"
            problems.append(f"duplicate {tree.value} name '{n.name}' {where}")
        names.add(n.name)


def resolve(model: QualityModel, tree: Tree, path: PathLike) -> Node:
    """Return the node at the exact root-first ``path``; never matches bare leaf names."""
    path = NodePath.of(path)
    node = model.node_at(tree, path)
    if node is not None:
        return node
    nearest = None
    for i in range(len(path.segments) - 1, 0, -1):
        prefix = NodePath(path.segments[:i])
        if model.node_at(tree, prefix) is not None:
            nearest = prefix
            break
    raise NotFound(tree, path, nearest)


def locate(model: QualityModel, tree: Tree, path: PathLike) -> NodePath:
    """Resolve a full path, or a single leaf name that is unique within the tree."""
    path = NodePath.of(path)
    if model.node_at(tree, path) is not None:
        return path
    if len(path.segments) == 1:
        candidates = model.leaf_paths(tree, path.leaf)
        if len(candidates) == 1:
            return candidates[0]
        if candidates:
            raise AmbiguousPath(tree, path.leaf, candidates)
    resolve(model, tree, path)  # raises NotFound with the nearest prefix
    raise AssertionError("unreachable")


def path_of(model: QualityModel, tree: Tree, node: Node) -> NodePath:
    for path, candidate in model.nodes(tree):
        if candidate is node:
            return path
    raise NotFound(tree, NodePath((node.name,)))


def stats(model: QualityModel) -> ModelStats:
    n_facts = n_attr_facts = 0
    for _, node in walk(model.fact_roots):
        n_facts += 1
        n_attr_facts += len(node.attributed)
    n_acts = n_attr_acts = 0
    for _, node in walk(model.activity_roots):
        n_acts += 1
        n_attr_acts += len(node.attributed)
    return ModelStats(
        n_facts=n_facts,
        n_activities=n_acts,
        n_attributes=len(model.attributes),
        n_attributed_facts=n_attr_facts,
        n_attributed_activities=n_attr_acts,
        n_impacts=len(model.impacts),
        n_goals=len(model.goals),
    )


def add_impact(
    model: QualityModel,
    source: AttributedElement,
    target: AttributedElement,
    direction: Direction = Direction.POSITIVE,
    weight: float = 1.0,
    rationale: str | None = None,
) -> QualityModel:
    """Return a copy of ``model`` with one more impact appended."""
    for tree, end in ((Tree.FACT, source), (Tree.ACTIVITY, target)):
        resolve(model, tree, end.path)
        if not model.carries(tree, end):
            raise AttributeNotAttached(end, tree)
    if any(imp.key == (source, target) for imp in model.impacts):
        raise DuplicateImpact(source, target)
    if not 0.0 < weight <= 1.0:
        raise ValueError(f"weight must lie in (0, 1], got {weight!r}")
    impact = Impact(source, target, direction, float(weight), rationale)
    return dataclasses.replace(model, impacts=model.impacts + (impact,))


def remove_impact(model: QualityModel, source: AttributedElement, target: AttributedElement) -> QualityModel:
    kept = tuple(imp for imp in model.impacts if imp.key != (source, target))
    if len(kept) == len(model.impacts):
        raise ModelError(f"no impact {source} -> {target}")
    return dataclasses.replace(model, impacts=kept)


@dataclass
class _Draft:
    name: str
    description: str | None = None
    attributed: list = field(default_factory=list)
    children: dict[str, "_Draft"] = field(default_factory=dict)


class ModelBuilder:
    """Incremental, single-threaded construction of a :class:`QualityModel`.

    Nodes are addressed by full path; missing ancestors are created on demand.
    """

    def __init__(self, name: str, description: str | None = None):
        self.name = name
        self.description = description
        self._attributes: dict[str, AttributeDef] = {}
        self._roots: dict[Tree, dict[str, _Draft]] = {Tree.FACT: {}, Tree.ACTIVITY: {}}
        self._impacts: list[Impact] = []
        self._goals: dict[str, GoalDef] = {}

    def attribute(self, name: str, applies_to: AppliesTo = AppliesTo.BOTH, description: str | None = None) -> "ModelBuilder":
        self._attributes[name] = AttributeDef(name, applies_to, description)
        return self

    def _draft(self, tree: Tree, path: PathLike) -> _Draft:
        path = NodePath.of(path)
        level = self._roots[tree]
        draft = None
        for seg in path.segments:
            draft = level.setdefault(seg, _Draft(seg))
            level = draft.children
        assert draft is not None
        return draft

    def fact(self, path: PathLike, *attributes: str | tuple[str, Assessability], description: str | None = None) -> "ModelBuilder":
        draft = self._draft(Tree.FACT, path)
        for attr in attributes:
            if isinstance(attr, str):
                attr = (attr, Assessability.MANUAL)
            draft.attributed.append(attr)
        if description is not None:
            draft.description = description
        return self

    def activity(self, path: PathLike, *attributes: str, description: str | None = None) -> "ModelBuilder":
        draft = self._draft(Tree.ACTIVITY, path)
        draft.attributed.extend(attributes)
        if description is not None:
            draft.description = description
        return self

    def impact(
        self,
        source: tuple[PathLike, str],
        target: tuple[PathLike, str],
        direction: Direction = Direction.POSITIVE,
        weight: float = 1.0,
        rationale: str | None = None,
    ) -> "ModelBuilder":
        src = AttributedElement(NodePath.of(source[0]), source[1])
        tgt = AttributedElement(NodePath.of(target[0]), target[1])
        self._impacts.append(Impact(src, tgt, direction, float(weight), rationale))
        return self

    def goal(self, name: str, *basis: str, description: str | None = None) -> "ModelBuilder":
        self._goals[name] = GoalDef(name, tuple(basis), description)
        return self

    def build(self) -> QualityModel:
        def freeze(draft: _Draft, tree: Tree) -> Node:
            kids = tuple(freeze(c, tree) for c in draft.children.values())
            if tree is Tree.FACT:
                return FactNode(draft.name, draft.description, tuple(draft.attributed), kids)
            return ActivityNode(draft.name, draft.description, tuple(draft.attributed), kids)

        return QualityModel(
            name=self.name,
            attributes=tuple(self._attributes.values()),
            fact_roots=tuple(freeze(d, Tree.FACT) for d in self._roots[Tree.FACT].values()),
            activity_roots=tuple(freeze(d, Tree.ACTIVITY) for d in self._roots[Tree.ACTIVITY].values()),
            impacts=tuple(self._impacts),
            goals=tuple(self._goals.values()),
            description=self.description,
        )
