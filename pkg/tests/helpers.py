"""Random model generation and independent oracles shared by the tests."""

from __future__ import annotations

import random
import string
from fractions import Fraction

from qmm.dsl import Assessment
from qmm.model import (
    ActivityNode,
    AppliesTo,
    Assessability,
    AttributeDef,
    AttributedElement,
    Direction,
    FactNode,
    GoalDef,
    Impact,
    NodePath,
    QualityModel,
)

NAME_POOL = [
    "Font Face", "Reading", "Output Data", "fact", "has", "weight", "3D View", "Näh-Ansicht",
    "a|b", "x#y", "{brace}", "[sq]", "plain", "_under", "UPPER", "mixed Case 42", "émoji ✓",
    "comma,sep", "eq=sign", "minus-sign", "arrow->", "tab\tless", "semi;colon",
]
TEXT_ALPHABET = string.ascii_letters + string.digits + ' _-|#{}[]/\\"\'=+,.;:é✓\n\t'


def random_name(rng: random.Random) -> str:
    if rng.random() < 0.4:
        name = rng.choice(NAME_POOL).replace("\t", " ")
    else:
        alphabet = string.ascii_letters + string.digits + " _-|#{}[]=+,.é"
        name = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 12)))
    return name.strip() or "n"


def random_text(rng: random.Random) -> str | None:
    if rng.random() < 0.4:
        return None
    return "".join(rng.choice(TEXT_ALPHABET) for _ in range(rng.randint(0, 20)))


def _attr_name(rng: random.Random, taken: set[str]) -> str:
    while True:
        name = rng.choice(string.ascii_uppercase) + "".join(
            rng.choice(string.ascii_uppercase + string.digits + "_") for _ in range(rng.randint(0, 8))
        )
        if name not in taken:
            taken.add(name)
            return name


def _tree(rng: random.Random, budget: int, cls, attr_pool: list[str], fact: bool):
    """Build up to ``budget`` nodes as a forest of ``cls``."""
    counter = [budget]

    def make(depth: int):
        counter[0] -= 1
        attrs = rng.sample(attr_pool, rng.randint(0, min(3, len(attr_pool)))) if attr_pool else []
        if fact:
            attributed = tuple((a, rng.choice(list(Assessability))) for a in attrs)
        else:
            attributed = tuple(attrs)
        kids = []
        names: set[str] = set()
        while counter[0] > 0 and depth < 6 and rng.random() < 0.6:
            child = make(depth + 1)
            if child.name in names:
                continue
            names.add(child.name)
            kids.append(child)
        return cls(random_name(rng), random_text(rng), attributed, tuple(kids))

    roots = []
    names: set[str] = set()
    while counter[0] > 0 and (not roots or rng.random() < 0.5):
        node = make(0)
        if node.name not in names:
            names.add(node.name)
            roots.append(node)
    return tuple(roots)


def random_model(rng: random.Random, max_nodes: int = 50, max_impacts: int | None = None, weights=None) -> QualityModel:
    taken: set[str] = set()
    attributes = []
    fact_attrs, act_attrs = [], []
    for _ in range(rng.randint(0, 4)):
        n = _attr_name(rng, taken)
        attributes.append(AttributeDef(n, AppliesTo.FACT, random_text(rng)))
        fact_attrs.append(n)
    for _ in range(rng.randint(0, 4)):
        n = _attr_name(rng, taken)
        attributes.append(AttributeDef(n, AppliesTo.ACTIVITY, random_text(rng)))
        act_attrs.append(n)
    if rng.random() < 0.5:
        attributes.append(AttributeDef("FREQUENCY", AppliesTo.ACTIVITY, None))
        act_attrs.append("FREQUENCY")
        taken.add("FREQUENCY")
    if rng.random() < 0.5:
        n = _attr_name(rng, taken)
        attributes.append(AttributeDef(n, AppliesTo.BOTH, random_text(rng)))
        fact_attrs.append(n)
        act_attrs.append(n)
    rng.shuffle(attributes)

    budget = rng.randint(0, max_nodes)
    split = rng.randint(0, budget)
    facts = _tree(rng, split, FactNode, fact_attrs, True) if split else ()
    acts = _tree(rng, budget - split, ActivityNode, act_attrs, False) if budget - split else ()

    partial = QualityModel("tmp", tuple(attributes), facts, acts)
    sources = [e for e, _ in partial.fact_tuples()]
    targets = list(partial.activity_tuples())
    impacts = []
    if sources and targets:
        pairs = {(rng.choice(sources), rng.choice(targets)) for _ in range(rng.randint(0, 15))}
        pairs = sorted(pairs)
        rng.shuffle(pairs)
        if max_impacts is not None:
            pairs = pairs[:max_impacts]
        for src, tgt in pairs:
            weight = rng.choice(weights) if weights else rng.choice([1.0, 0.5, 0.25, rng.uniform(1e-6, 1.0)])
            impacts.append(Impact(src, tgt, rng.choice(list(Direction)), weight, random_text(rng)))

    goals = []
    goal_taken = set(taken)
    for _ in range(rng.randint(0, 3)):
        basis = tuple(rng.sample(act_attrs, rng.randint(0, len(act_attrs)))) if act_attrs else ()
        goals.append(GoalDef(_attr_name(rng, goal_taken), basis, random_text(rng)))

    return QualityModel(
        name=random_name(rng) + ("\"quoted\"" if rng.random() < 0.1 else ""),
        attributes=tuple(attributes),
        fact_roots=facts,
        activity_roots=acts,
        impacts=tuple(impacts),
        goals=tuple(goals),
        description=random_text(rng),
    )


GRID = [i / 20 for i in range(21)]


def random_assessment(rng: random.Random, model: QualityModel) -> Assessment:
    bindings = {}
    for elem, _ in model.fact_tuples():
        if rng.random() < 0.8:
            bindings[elem] = rng.choice(GRID)
    for elem in model.activity_tuples():
        if elem.attribute == "FREQUENCY" and rng.random() < 0.8:
            bindings[elem] = rng.choice([0.0, 0.25, 0.5, 0.75, 1.0])
    return Assessment(bindings)


# -- oracles; these deliberately avoid qmm.analysis --

def _children_paths(node, path):
    return [(path + (c.name,), c) for c in node.children]


def _all_nodes(roots, prefix=()):
    out = []
    for r in roots:
        p = prefix + (r.name,)
        out.append((p, r))
        out.extend(_all_nodes(r.children, p))
    return out


def oracle_evaluate(model: QualityModel, assessment: Assessment):
    """Exact rational re-computation of the evaluation contract."""
    values = {(k.path.segments, k.attribute): Fraction(v) for k, v in assessment.bindings.items()}
    acts = _all_nodes(model.activity_roots)

    tuple_scores = {}
    for path, node in acts:
        for attr in node.attributed:
            if attr == "FREQUENCY":
                continue
            total = Fraction(0)
            for imp in model.impacts:
                if imp.target.path.segments == path and imp.target.attribute == attr:
                    v = values.get((imp.source.path.segments, imp.source.attribute), Fraction(0))
                    sign = 1 if imp.direction is Direction.POSITIVE else -1
                    total += sign * Fraction(imp.weight) * v
            tuple_scores[(path, attr)] = total

    def freq(path, node):
        if "FREQUENCY" in node.attributed and (path, "FREQUENCY") in values:
            return values[(path, "FREQUENCY")]
        return Fraction(1)

    def subtree_attrs(node):
        s = {a for a in node.attributed if a != "FREQUENCY"}
        for c in node.children:
            s |= subtree_attrs(c)
        return s

    def node_score(path, node, attr):
        terms = []
        if attr in node.attributed:
            terms.append((freq(path, node), tuple_scores[(path, attr)]))
        for cpath, child in _children_paths(node, path):
            if attr in subtree_attrs(child):
                terms.append((freq(cpath, child), node_score(cpath, child, attr)))
        den = sum(w for w, _ in terms)
        if den == 0:
            return Fraction(0)
        return sum(w * s for w, s in terms) / den

    node_scores = {}
    for path, node in acts:
        node_scores[path] = {a: node_score(path, node, a) for a in subtree_attrs(node)}

    goal_scores = {}
    for goal in model.goals:
        vals = [
            node_scores[(root.name,)][a]
            for root in model.activity_roots
            for a in goal.basis
            if a in node_scores[(root.name,)]
        ]
        goal_scores[goal.name] = sum(vals) / len(vals) if vals else Fraction(0)
    return tuple_scores, node_scores, goal_scores


def fmt9(value) -> str:
    """Nine-decimal rendering of the nearest double, as reports print scores."""
    text = f"{float(value):.9f}"
    return "0.000000000" if text == "-0.000000000" else text


def recount(model: QualityModel) -> dict[str, int]:
    """Independent element count via explicit recursion."""
    facts = _all_nodes(model.fact_roots)
    acts = _all_nodes(model.activity_roots)
    return {
        "facts": len(facts),
        "activities": len(acts),
        "attributes": len(model.attributes),
        "attributed_facts": sum(len(n.attributed) for _, n in facts),
        "attributed_activities": sum(len(n.attributed) for _, n in acts),
        "impacts": len(model.impacts),
        "goals": len(model.goals),
    }


def element(path: str, attribute: str) -> AttributedElement:
    return AttributedElement(NodePath.parse(path), attribute)
