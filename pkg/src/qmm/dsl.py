"""Text format for quality models (``.qmm``) and assessments (``.qma``).

Model grammar, whitespace-insensitive, ``#`` starting a line comment::

    file      := "model" NAME [STRING] statement*
    statement := attribute | fact | activity | impact | goal
    attribute := "attribute" IDENT ["on" ("facts" | "activities" | "both")] [STRING]
    fact      := "fact" NAME [STRING] ["{" ("has" IDENT ["assess" LEVEL] | fact)* "}"]
    activity  := "activity" NAME [STRING] ["{" ("has" IDENT | activity)* "}"]
    impact    := "impact" ref "->" ref ("+" | "-") ["weight" NUMBER] [STRING]
    ref       := "[" NAME ("/" NAME)* "|" IDENT "]"
    goal      := "goal" IDENT [STRING] ["=" [IDENT ("," IDENT)*]]

A NAME is a bare identifier or a double-quoted string; the string following a
declared name is its description (for impacts, the trailing string is the
rationale). Impact references may use a leaf name when it is unique in its
tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping

from .model import (
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
    Tree,
    name_problem,
    walk,
)

KEYWORDS = frozenset(
    {"model", "attribute", "on", "fact", "activity", "has", "assess", "impact", "goal", "weight"}
)
STATEMENT_KEYWORDS = frozenset({"attribute", "fact", "activity", "impact", "goal"})
MAX_ERRORS = 200

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_ATTR_RE = re.compile(r"[A-Z][A-Z0-9_]*\Z")
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<badstring>"(?:[^"\\\n]|\\.)*)
  | (?P<punct>->|[{}\[\]|/+\-=,])
  | (?P<bad>.)
    """,
    re.VERBOSE,
)
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    expected: str
    found: str
    message: str | None = None

    def __str__(self) -> str:
        if self.message:
            return f"{self.span}: {self.message}"
        return f"{self.span}: expected {self.expected}, found {self.found}"


class ModelSyntaxError(ValueError):
    """Raised by :func:`parse` with every error found in the input."""

    def __init__(self, errors: Iterable[ParseError]):
        self.errors = tuple(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan
    line_start: bool
    value: object = None

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def _unescape(body: str) -> str:
    return re.sub(r"\\(.)", lambda m: _ESCAPES.get(m.group(1), m.group(1)), body)


def tokenize(text: str) -> tuple[list[Token], list[ParseError]]:
    tokens: list[Token] = []
    errors: list[ParseError] = []
    line, line_pos, first = 1, 0, True
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        tok = m.group()
        span = SourceSpan(line, m.start() - line_pos + 1, len(tok))
        if kind == "nl":
            line += 1
            line_pos = m.end()
            first = True
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "badstring":
            errors.append(ParseError(span, "closing '\"'", "end of line", "unterminated string"))
            continue
        if kind == "bad":
            errors.append(ParseError(span, "a token", repr(tok), f"unexpected character {tok!r}"))
            continue
        value: object = None
        if kind == "string":
            value = _unescape(tok[1:-1])
        elif kind == "number":
            value = float(tok)
        tokens.append(Token(kind, tok, span, first, value))
        first = False
    tokens.append(Token("eof", "", SourceSpan(line, len(text) - line_pos + 1, 0), True))
    return tokens, errors


class _Syntax(Exception):
    def __init__(self, error: ParseError):
        self.error = error


# Raw parse tree; spans are kept only until the model is assembled.
@dataclass
class _RawNode:
    name: str
    span: SourceSpan
    description: str | None = None
    has: list[tuple[str, Assessability | None, SourceSpan]] = field(default_factory=list)
    children: list["_RawNode"] = field(default_factory=list)


@dataclass
class _RawRef:
    segments: tuple[str, ...]
    attribute: str
    span: SourceSpan


@dataclass
class _RawImpact:
    source: _RawRef
    target: _RawRef
    direction: Direction
    weight: float
    weight_span: SourceSpan | None
    rationale: str | None
    span: SourceSpan


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self.errors: list[ParseError] = []
        self.model_name: str | None = None
        self.model_span: SourceSpan | None = None
        self.description: str | None = None
        self.attributes: list[tuple[AttributeDef, SourceSpan]] = []
        self.facts: list[_RawNode] = []
        self.activities: list[_RawNode] = []
        self.impacts: list[_RawImpact] = []
        self.goals: list[tuple[GoalDef, SourceSpan, list[SourceSpan]]] = []

    # -- token helpers --
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.tok
        return tok.kind in ("ident", "punct") and tok.text == text

    def fail(self, expected: str) -> _Syntax:
        tok = self.tok
        return _Syntax(ParseError(tok.span, expected, tok.describe()))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail(f"'{text}'")
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            raise self.fail(what)
        return self.advance()

    def name(self, what: str = "name") -> tuple[str, SourceSpan]:
        tok = self.tok
        if tok.kind == "ident":
            self.advance()
            return tok.text, tok.span
        if tok.kind == "string":
            self.advance()
            return str(tok.value), tok.span
        raise self.fail(what)

    def optional_string(self) -> str | None:
        if self.tok.kind == "string":
            return str(self.advance().value)
        return None

    def record(self, error: ParseError) -> None:
        if len(self.errors) < MAX_ERRORS:
            self.errors.append(error)

    def sync(self, start: int, stops: frozenset[str]) -> None:
        if self.pos == start:
            self.advance()
        while True:
            tok = self.tok
            if tok.kind == "eof" or (tok.kind == "punct" and tok.text == "}"):
                return
            if tok.kind == "ident" and tok.line_start and tok.text in stops:
                return
            self.advance()

    # -- grammar --
    def parse_file(self) -> None:
        try:
            self.model_span = self.expect("model").span
            self.model_name, _ = self.name("model name")
            self.description = self.optional_string()
        except _Syntax as exc:
            self.record(exc.error)
            self.sync(self.pos, STATEMENT_KEYWORDS)
        while self.tok.kind != "eof":
            start = self.pos
            try:
                self.statement()
            except _Syntax as exc:
                self.record(exc.error)
                self.sync(start, STATEMENT_KEYWORDS)
                if self.at("}"):
                    self.record(ParseError(self.tok.span, "a statement", "'}'", "unbalanced '}'"))
                    self.advance()

    def statement(self) -> None:
        if self.at("attribute"):
            self.attribute()
        elif self.at("fact"):
            self.facts.append(self.node(Tree.FACT))
        elif self.at("activity"):
            self.activities.append(self.node(Tree.ACTIVITY))
        elif self.at("impact"):
            self.impact()
        elif self.at("goal"):
            self.goal()
        else:
            raise self.fail("'attribute', 'fact', 'activity', 'impact' or 'goal'")

    def attribute(self) -> None:
        self.advance()
        name_tok = self.ident("attribute name")
        applies = AppliesTo.BOTH
        if self.at("on"):
            self.advance()
            tok = self.ident("'facts', 'activities' or 'both'")
            try:
                applies = AppliesTo(tok.text)
            except ValueError:
                raise _Syntax(ParseError(tok.span, "'facts', 'activities' or 'both'", repr(tok.text)))
        desc = self.optional_string()
        self.attributes.append((AttributeDef(name_tok.text, applies, desc), name_tok.span))

    def node(self, tree: Tree) -> _RawNode:
        self.advance()
        name, span = self.name(f"{tree.value} name")
        raw = _RawNode(name, span, self.optional_string())
        if not self.at("{"):
            return raw
        self.advance()
        own_kw = tree.value
        stops = frozenset({"has", own_kw}) | STATEMENT_KEYWORDS
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.fail("'}'")
            start = self.pos
            try:
                if self.at("has"):
                    self.advance()
                    attr = self.ident("attribute name")
                    level = None
                    if tree is Tree.FACT and self.at("assess"):
                        self.advance()
                        lvl = self.ident("'auto', 'semi' or 'manual'")
                        try:
                            level = Assessability(lvl.text)
                        except ValueError:
                            raise _Syntax(ParseError(lvl.span, "'auto', 'semi' or 'manual'", repr(lvl.text)))
                    raw.has.append((attr.text, level, attr.span))
                elif self.at(own_kw):
                    raw.children.append(self.node(tree))
                else:
                    raise self.fail(f"'has', '{own_kw}' or '}}'")
            except _Syntax as exc:
                self.record(exc.error)
                self.sync(start, stops)
                if self.tok.kind == "ident" and self.tok.text in STATEMENT_KEYWORDS - {own_kw}:
                    raise self.fail("'}'")
        self.advance()
        return raw

    def ref(self) -> _RawRef:
        span = self.expect("[").span
        segments: list[str] = []
        while True:
            name, _ = self.name("node name")
            # a quoted segment may carry a whole path
            segments.extend(part.strip() for part in name.split("/"))
            if self.at("/"):
                self.advance()
                continue
            break
        self.expect("|")
        attr = self.ident("attribute name")
        self.expect("]")
        return _RawRef(tuple(segments), attr.text, span)

    def impact(self) -> None:
        span = self.advance().span
        src = self.ref()
        self.expect("->")
        tgt = self.ref()
        if self.at("+"):
            direction = Direction.POSITIVE
        elif self.at("-"):
            direction = Direction.NEGATIVE
        else:
            raise self.fail("impact direction '+' or '-'")
        self.advance()
        weight, wspan = 1.0, None
        if self.at("weight"):
            self.advance()
            tok = self.tok
            if tok.kind != "number":
                raise self.fail("decimal weight")
            self.advance()
            weight, wspan = float(tok.value), tok.span
        rationale = self.optional_string()
        self.impacts.append(_RawImpact(src, tgt, direction, weight, wspan, rationale, span))

    def goal(self) -> None:
        self.advance()
        name_tok = self.ident("goal name")
        desc = self.optional_string()
        basis: list[str] = []
        spans: list[SourceSpan] = []
        if self.at("="):
            self.advance()
            if self.tok.kind == "ident" and not (self.tok.line_start and self.tok.text in STATEMENT_KEYWORDS):
                while True:
                    tok = self.ident("activity attribute name")
                    basis.append(tok.text)
                    spans.append(tok.span)
                    if not self.at(","):
                        break
                    self.advance()
        self.goals.append((GoalDef(name_tok.text, tuple(basis), desc), name_tok.span, spans))


def _semantic_error(span: SourceSpan, expected: str, found: str, message: str) -> ParseError:
    return ParseError(span, expected, found, message)


class _Assembler:
    """Second pass: resolve names, check references, build the model."""

    def __init__(self, parser: _Parser, prelude: QualityModel | None):
        self.p = parser
        self.prelude = prelude
        self.errors: list[ParseError] = []

    def err(self, span: SourceSpan, expected: str, found: str, message: str) -> None:
        self.errors.append(_semantic_error(span, expected, found, message))

    def build(self) -> QualityModel | None:
        p = self.p
        if p.model_name is not None and not p.model_name:
            self.err(p.model_span or SourceSpan(1, 1), "non-empty model name", '""', "model name is empty")

        attrs = self._attributes()
        facts = tuple(self._nodes(Tree.FACT, p.facts, None, attrs))
        acts = tuple(self._nodes(Tree.ACTIVITY, p.activities, None, attrs))
        trees = {
            Tree.FACT: dict(walk(facts)),
            Tree.ACTIVITY: dict(walk(acts)),
        }
        leaves: dict[Tree, dict[str, list[NodePath]]] = {}
        for tree, index in trees.items():
            names: dict[str, list[NodePath]] = {}
            for path in index:
                names.setdefault(path.leaf, []).append(path)
            leaves[tree] = names
        impacts = self._impacts(trees, leaves, attrs)
        goals = self._goals(attrs)
        if self.errors or p.errors or p.model_name is None:
            return None
        return QualityModel(
            name=p.model_name,
            attributes=tuple(attrs.values()),
            fact_roots=facts,
            activity_roots=acts,
            impacts=impacts,
            goals=goals,
            description=p.description,
        )

    def _attributes(self) -> dict[str, AttributeDef]:
        attrs: dict[str, AttributeDef] = {}
        if self.prelude is not None:
            attrs.update((a.name, a) for a in self.prelude.attributes)
        own: set[str] = set()
        for adef, span in self.p.attributes:
            if not _ATTR_RE.match(adef.name):
                self.err(span, "uppercase attribute name", repr(adef.name), f"attribute name {adef.name!r} must be uppercase")
            if adef.name in own:
                self.err(span, "unique attribute name", adef.name, f"attribute {adef.name} declared twice")
                continue
            own.add(adef.name)
            # a file declaration replaces a same-named prelude entry in place
            attrs[adef.name] = adef
        return attrs

    def _nodes(self, tree: Tree, raws: list[_RawNode], parent: NodePath | None, attrs: Mapping[str, AttributeDef]):
        seen: set[str] = set()
        out = []
        for raw in raws:
            path = parent.child(raw.name) if parent else NodePath((raw.name,))
            problem = name_problem(raw.name)
            if problem:
                self.err(raw.span, f"valid {tree.value} name", repr(raw.name), f"{tree.value} name {raw.name!r} {problem}")
            if raw.name in seen:
                where = f"under '{parent}'" if parent else "at the root"
                self.err(raw.span, "unique sibling name", repr(raw.name), f"duplicate sibling name {raw.name!r} {where}")
                continue
            seen.add(raw.name)
            has_seen: set[str] = set()
            attributed = []
            for attr, level, span in raw.has:
                adef = attrs.get(attr)
                if adef is None:
                    self.err(span, "declared attribute", attr, f"undeclared attribute {attr}")
                    continue
                if not adef.applies_to.allows(tree):
                    self.err(span, f"attribute applying to {tree.value}s", attr, f"attribute {attr} does not apply to {tree.value}s")
                    continue
                if attr in has_seen:
                    self.err(span, "distinct attribute", attr, f"attribute {attr} attached twice to '{path}'")
                    continue
                has_seen.add(attr)
                if tree is Tree.FACT:
                    attributed.append((attr, level or Assessability.MANUAL))
                else:
                    attributed.append(attr)
            kids = tuple(self._nodes(tree, raw.children, path, attrs))
            cls = FactNode if tree is Tree.FACT else ActivityNode
            out.append(cls(raw.name, raw.description, tuple(attributed), kids))
        return out

    def _resolve_ref(self, ref: _RawRef, tree: Tree, trees, leaves) -> AttributedElement | None:
        path = NodePath(ref.segments)
        index = trees[tree]
        shown = "/".join(ref.segments)
        if path not in index:
            candidates = leaves[tree].get(path.leaf, []) if len(ref.segments) == 1 else []
            if len(candidates) == 1:
                path = candidates[0]
            elif len(candidates) > 1:
                listed = ", ".join(f"'{c}'" for c in candidates)
                self.err(ref.span, f"unambiguous {tree.value} path", shown, f"ambiguous {tree.value} name {shown!r}: {listed}")
                return None
            else:
                self.err(ref.span, f"existing {tree.value} path", shown, f"unresolvable {tree.value} path {shown!r}")
                return None
        if ref.attribute not in index[path].attribute_names:
            self.err(ref.span, "attached attribute", ref.attribute, f"{tree.value} '{path}' does not carry attribute {ref.attribute}")
            return None
        return AttributedElement(path, ref.attribute)

    def _impacts(self, trees, leaves, attrs) -> tuple[Impact, ...]:
        out: list[Impact] = []
        seen: set = set()
        for raw in self.p.impacts:
            src = self._resolve_ref(raw.source, Tree.FACT, trees, leaves)
            tgt = self._resolve_ref(raw.target, Tree.ACTIVITY, trees, leaves)
            if not 0.0 < raw.weight <= 1.0:
                self.err(raw.weight_span or raw.span, "weight in (0, 1]", repr(raw.weight), f"weight {raw.weight!r} outside (0, 1]")
                continue
            if src is None or tgt is None:
                continue
            if (src, tgt) in seen:
                self.err(raw.span, "unique impact", f"{src} -> {tgt}", f"duplicate impact {src} -> {tgt}")
                continue
            seen.add((src, tgt))
            out.append(Impact(src, tgt, raw.direction, raw.weight, raw.rationale))
        return tuple(out)

    def _goals(self, attrs: Mapping[str, AttributeDef]) -> tuple[GoalDef, ...]:
        goals: dict[str, GoalDef] = {}
        if self.prelude is not None:
            goals.update((g.name, g) for g in self.prelude.goals)
        own: set[str] = set()
        for goal, span, basis_spans in self.p.goals:
            if goal.name in own:
                self.err(span, "unique goal name", goal.name, f"goal {goal.name} declared twice")
                continue
            own.add(goal.name)
            ok = True
            seen: set[str] = set()
            for attr, aspan in zip(goal.basis, basis_spans):
                adef = attrs.get(attr)
                if adef is None:
                    self.err(aspan, "declared attribute", attr, f"undeclared attribute {attr}")
                    ok = False
                elif not adef.applies_to.allows(Tree.ACTIVITY):
                    self.err(aspan, "activity attribute", attr, f"attribute {attr} does not apply to activities")
                    ok = False
                elif attr in seen:
                    self.err(aspan, "distinct attribute", attr, f"attribute {attr} listed twice in goal {goal.name}")
                    ok = False
                seen.add(attr)
            if ok:
                goals[goal.name] = goal
        return tuple(goals.values())


def parse(text: str, prelude: bool | QualityModel = False) -> QualityModel:
    """Parse model text.

    With ``prelude`` set, the standard attribute and goal definitions are
    available to the file; declarations in the file replace same-named ones.
    Raises :class:`ModelSyntaxError` carrying every error found.
    """
    tokens, lex_errors = tokenize(text)
    parser = _Parser(tokens)
    parser.parse_file()
    base = standard_prelude() if prelude is True else (prelude or None)
    assembler = _Assembler(parser, base)
    model = assembler.build()
    errors = sorted(
        set(lex_errors + parser.errors + assembler.errors),
        key=lambda e: (e.span.line, e.span.column, e.expected, e.found, e.message or ""),
    )
    if errors or model is None:
        if not errors:
            errors = [ParseError(tokens[-1].span, "'model'", "end of input")]
        raise ModelSyntaxError(errors)
    return model


def load(path, prelude: bool = True) -> QualityModel:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), prelude=prelude)


_prelude_cache: QualityModel | None = None


def standard_prelude() -> QualityModel:
    """Built-in attribute and goal definitions (parsed once)."""
    global _prelude_cache
    if _prelude_cache is None:
        _prelude_cache = parse(read_data("prelude.qmm"))
    return _prelude_cache


def read_data(name: str) -> str:
    return resources.files("qmm").joinpath("data").joinpath(name).read_text(encoding="utf-8")


# -- serialization --

def quote(text: str) -> str:
    body = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
    return f'"{body}"'


def name_token(name: str) -> str:
    if _IDENT_RE.match(name) and name not in KEYWORDS:
        return name
    return quote(name)


def _ref(element: AttributedElement) -> str:
    path = "/".join(name_token(seg) for seg in element.path.segments)
    return f"[{path}|{element.attribute}]"


def _format_number(value: float) -> str:
    return repr(float(value))


def _node_lines(node, tree: Tree, indent: int) -> list[str]:
    pad = "  " * indent
    head = f"{pad}{tree.value} {name_token(node.name)}"
    if node.description is not None:
        head += f" {quote(node.description)}"
    body: list[str] = []
    if tree is Tree.FACT:
        for attr, level in node.attributed:
            body.append(f"{pad}  has {attr} assess {level.value}")
    else:
        for attr in node.attributed:
            body.append(f"{pad}  has {attr}")
    for child in node.children:
        body.extend(_node_lines(child, tree, indent + 1))
    if not body:
        return [head]
    return [head + " {", *body, pad + "}"]


def serialize(model: QualityModel) -> str:
    """Canonical text for ``model``; ``parse(serialize(m)) == m``."""
    head = f"model {quote(model.name)}"
    if model.description is not None:
        head += f" {quote(model.description)}"
    sections: list[list[str]] = [[head]]

    attrs = []
    for a in model.attributes:
        line = f"attribute {a.name}"
        if a.applies_to is not AppliesTo.BOTH:
            line += f" on {a.applies_to.value}"
        if a.description is not None:
            line += f" {quote(a.description)}"
        attrs.append(line)
    sections.append(attrs)

    for tree in (Tree.ACTIVITY, Tree.FACT):
        for root in model.roots(tree):
            sections.append(_node_lines(root, tree, 0))

    imps = []
    for imp in model.impacts:
        line = f"impact {_ref(imp.source)} -> {_ref(imp.target)} {imp.direction.value}"
        if imp.weight != 1.0:
            line += f" weight {_format_number(imp.weight)}"
        if imp.rationale is not None:
            line += f" {quote(imp.rationale)}"
        imps.append(line)
    sections.append(imps)

    goals = []
    for g in model.goals:
        line = f"goal {g.name}"
        if g.description is not None:
            line += f" {quote(g.description)}"
        if g.basis:
            line += " = " + ", ".join(g.basis)
        goals.append(line)
    sections.append(goals)

    return "\n\n".join("\n".join(s) for s in sections if s) + "\n"


# -- assessments --

@dataclass(frozen=True)
class Assessment:
    """Degree-of-satisfaction values in [0, 1] keyed by ``(path, attribute)``.

    Paths are resolved against a model only when evaluating.
    """

    bindings: Mapping[AttributedElement, float] = field(default_factory=dict)

    def get(self, element: AttributedElement, default: float = 0.0) -> float:
        return self.bindings.get(element, default)

    def scaled(self, factor: float, keep: Iterable[str] = ()) -> "Assessment":
        """Multiply every value by ``factor`` except bindings on attributes in ``keep``."""
        keep = set(keep)
        return Assessment(
            {k: (v if k.attribute in keep else v * factor) for k, v in self.bindings.items()}
        )


class AssessmentSyntaxError(ValueError):
    def __init__(self, errors: Iterable[tuple[int, str]]):
        self.errors = tuple(errors)
        super().__init__("\n".join(f"line {n}: {msg}" for n, msg in self.errors))


_VALUE_RE = re.compile(r"[+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?\Z|[+-]?\.\d+(?:[eE][+-]?\d+)?\Z")


def _segment(text: str) -> str:
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] == '"':
        return _unescape(text[1:-1])
    return text


def parse_assessment(text: str) -> Assessment:
    """Parse ``<fact-path> | <ATTRIBUTE> = <value>`` lines; ``#`` lines are comments."""
    bindings: dict[AttributedElement, float] = {}
    errors: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        left, eq, value_text = line.rpartition("=")
        path_text, bar, attr = left.rpartition("|")
        value_text = value_text.split("#", 1)[0].strip()
        attr = attr.strip()
        segments = tuple(_segment(s) for s in path_text.split("/")) if path_text.strip() else ()
        if not eq or not bar or not segments or any(not s for s in segments) or not _ATTR_RE.match(attr):
            errors.append((lineno, "malformed line, expected '<fact-path> | <ATTRIBUTE> = <value>'"))
            continue
        if not _VALUE_RE.match(value_text):
            errors.append((lineno, f"malformed value {value_text!r}"))
            continue
        value = float(value_text)
        if not 0.0 <= value <= 1.0:
            errors.append((lineno, f"value out of range [0, 1]: {value_text}"))
            continue
        key = AttributedElement(NodePath(segments), attr)
        if key in bindings:
            errors.append((lineno, f"duplicate binding for {key}"))
            continue
        bindings[key] = value
    if errors:
        raise AssessmentSyntaxError(errors)
    return Assessment(bindings)


def load_assessment(path) -> Assessment:
    with open(path, encoding="utf-8") as fh:
        return parse_assessment(fh.read())


__all__ = [
    "Assessment",
    "AssessmentSyntaxError",
    "ModelSyntaxError",
    "ParseError",
    "SourceSpan",
    "load",
    "load_assessment",
    "parse",
    "parse_assessment",
    "serialize",
    "standard_prelude",
]
