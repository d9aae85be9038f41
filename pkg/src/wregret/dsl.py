"""Text format for decision problems and trees.

Problem files are line-oriented; `#` starts a comment.  Rationals are
written `a/b`, as decimals (converted exactly), or as integers.

    states: s1 s2 ...
    prizes: p1 p2 ...
    utility: p1 = 1, p2 = -1/2
    lottery name = { prize: rational, ... }
    act name = { state: lottery-or-inline, ... }
    menu name = [ act, act, ... ]
    hypothesis name weight rational = { state: rational, ... }
    event name = { state, state, ... }

Trees use a nested prefix form over the same tokens:

    decision name { branch name = <node> ... }
    nature { on event: <node> ... }
    leaf utility rational        or        leaf lottery-name

Every rejection carries at least one diagnostic with a line and column; the
parsers never raise anything else on malformed input.  Canonical
serialization sorts every section and key and prints rationals in lowest
terms, so serialize(parse(serialize(doc))) is byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .decisions import Act, Lottery, Menu, UtilitySpec
from .dynamics import DecisionNode, DecisionTree, Leaf, NatureNode, TreeNode
from .errors import ParseError
from .measures import Event, Measure, WeightedMeasureSet
from .rational import format_rational, parse_rational


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error"
    line: int      # 1-based
    column: int    # 1-based
    message: str
    token: str = ""

    def __str__(self) -> str:
        near = f" (near {self.token!r})" if self.token else ""
        return f"{self.severity}: line {self.line}, column {self.column}: {self.message}{near}"


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | NUMBER | PUNCT | EOF
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<number>-?(?:\d+\s*/\s*\d+|\d+\.\d*|\.\d+|\d+))
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<punct>[:={}\[\],])
    """,
    re.VERBOSE,
)


def _tokenize(text: str, diagnostics: list[ParseDiagnostic]) -> list[Token]:
    tokens: list[Token] = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            column = pos - line_start + 1
            diagnostics.append(
                ParseDiagnostic("error", line, column, "unexpected character", text[pos])
            )
            pos += 1
            continue
        kind = match.lastgroup
        value = match.group()
        if kind not in ("ws", "comment"):
            tokens.append(
                Token(kind.upper() if kind != "punct" else "PUNCT", value, line, pos - line_start + 1)
            )
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + value.rindex("\n") + 1
        pos = match.end()
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class _TokenStream:
    def __init__(self, tokens: Sequence[Token], diagnostics: list[ParseDiagnostic]):
        self.tokens = tokens
        self.index = 0
        self.diagnostics = diagnostics

    def peek(self) -> Token:
        return self.tokens[self.index]

    def next(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "EOF":
            self.index += 1
        return token

    def error(self, token: Token, message: str) -> None:
        self.diagnostics.append(
            ParseDiagnostic("error", token.line, token.column, message, token.text)
        )

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Optional[Token]:
        token = self.peek()
        if token.kind != kind or (text is not None and token.text != text):
            expected = what or (text if text is not None else kind.lower())
            self.error(token, f"expected {expected}")
            return None
        return self.next()

    def accept(self, kind: str, text: str | None = None) -> Optional[Token]:
        token = self.peek()
        if token.kind == kind and (text is None or token.text == text):
            return self.next()
        return None


# -- problem documents -----------------------------------------------------------

@dataclass
class ProblemDoc:
    """A fully resolved decision problem: the named sections of one file."""

    states: tuple[str, ...]
    prizes: tuple[str, ...]
    utility: UtilitySpec
    lotteries: dict[str, Lottery]
    acts: dict[str, Act]
    menus: dict[str, Menu]
    hypotheses: dict[str, tuple[Measure, Fraction]]
    events: dict[str, Event]

    def weighted_set(self) -> WeightedMeasureSet:
        if not self.hypotheses:
            raise ValueError("the document declares no hypotheses")
        return WeightedMeasureSet(
            tuple((m, w) for m, w in self.hypotheses.values()), self.states
        )

    def measures(self) -> tuple[Measure, ...]:
        return tuple(m for m, _ in (self.hypotheses[k] for k in sorted(self.hypotheses)))


@dataclass
class _RawEntry:
    token: Token
    payload: object


def _split_lines(text: str) -> Iterator[tuple[int, str]]:
    for i, raw in enumerate(text.split("\n"), start=1):
        yield i, raw


def parse_problem(text: str) -> ProblemDoc:
    """Parse a problem document; raise ParseError with diagnostics on failure."""
    diagnostics: list[ParseDiagnostic] = []
    sections: dict[str, dict[str, _RawEntry]] = {
        "lottery": {}, "act": {}, "menu": {}, "hypothesis": {}, "event": {},
    }
    states_decl: Optional[tuple[Token, list[str]]] = None
    prizes_decl: Optional[tuple[Token, list[str]]] = None
    utility_decl: dict[str, tuple[Token, Fraction]] = {}

    for line_no, raw in _split_lines(text):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        line_diags: list[ParseDiagnostic] = []
        tokens = _tokenize(raw.split("#", 1)[0], line_diags)
        for d in line_diags:
            diagnostics.append(
                ParseDiagnostic(d.severity, line_no, d.column, d.message, d.token)
            )
        if line_diags:
            continue
        stream = _TokenStream(tokens, diagnostics)
        head = stream.peek()
        # adjust token line numbers: single-line tokenization reports line 1
        def fix(t: Token) -> Token:
            return Token(t.kind, t.text, line_no, t.column)

        stream.tokens = [fix(t) for t in stream.tokens]
        head = stream.peek()
        if head.kind != "IDENT":
            stream.error(head, "expected a section keyword")
            continue
        keyword = head.text
        if keyword == "states":
            stream.next()
            if not stream.accept("PUNCT", ":"):
                stream.error(stream.peek(), "expected ':' after 'states'")
                continue
            names = _ident_list(stream)
            if states_decl is not None:
                stream.error(head, "duplicate states section")
            elif not names:
                stream.error(head, "states section declares no states")
            else:
                states_decl = (head, names)
        elif keyword == "prizes":
            stream.next()
            if not stream.accept("PUNCT", ":"):
                stream.error(stream.peek(), "expected ':' after 'prizes'")
                continue
            names = _ident_list(stream)
            if prizes_decl is not None:
                stream.error(head, "duplicate prizes section")
            elif not names:
                stream.error(head, "prizes section declares no prizes")
            else:
                prizes_decl = (head, names)
        elif keyword == "utility":
            stream.next()
            if not stream.accept("PUNCT", ":"):
                stream.error(stream.peek(), "expected ':' after 'utility'")
                continue
            pairs = _assignment_list(stream)
            if stream.peek().kind != "EOF":
                stream.error(stream.peek(), "unexpected trailing input")
                continue
            for name_tok, value in pairs:
                if name_tok.text in utility_decl:
                    stream.error(name_tok, f"duplicate utility for prize '{name_tok.text}'")
                else:
                    utility_decl[name_tok.text] = (name_tok, value)
        elif keyword in sections:
            stream.next()
            name_tok = stream.expect("IDENT", what="a name")
            if name_tok is None:
                continue
            payload = _parse_definition(keyword, stream)
            if payload is None:
                continue
            if stream.peek().kind != "EOF":
                stream.error(stream.peek(), "unexpected trailing input")
                continue
            if name_tok.text in sections[keyword]:
                stream.error(name_tok, f"duplicate {keyword} '{name_tok.text}'")
            else:
                sections[keyword][name_tok.text] = _RawEntry(name_tok, payload)
        else:
            stream.error(head, f"unknown section keyword '{keyword}'")

    doc = _resolve_problem(
        states_decl, prizes_decl, utility_decl, sections, diagnostics
    )
    if diagnostics:
        raise ParseError(diagnostics)
    assert doc is not None
    return doc


def _ident_list(stream: _TokenStream) -> list[str]:
    names = []
    while True:
        token = stream.accept("IDENT")
        if token is None:
            break
        names.append(token.text)
    if stream.peek().kind != "EOF":
        stream.error(stream.peek(), "expected an identifier")
    return names


def _assignment_list(stream: _TokenStream) -> list[tuple[Token, Fraction]]:
    pairs = []
    while True:
        name_tok = stream.expect("IDENT", what="a prize name")
        if name_tok is None:
            break
        if not stream.expect("PUNCT", "="):
            break
        value = _rational(stream)
        if value is None:
            break
        pairs.append((name_tok, value))
        if not stream.accept("PUNCT", ","):
            break
    return pairs


def _rational(stream: _TokenStream) -> Optional[Fraction]:
    token = stream.peek()
    if token.kind != "NUMBER":
        stream.error(token, "expected a rational number")
        return None
    stream.next()
    try:
        return parse_rational(token.text)
    except ValueError as exc:
        stream.error(token, str(exc))
        return None


def _parse_definition(keyword: str, stream: _TokenStream):
    if keyword == "hypothesis":
        if not stream.expect("IDENT", "weight", what="'weight'"):
            return None
        weight = _rational(stream)
        if weight is None:
            return None
        if not stream.expect("PUNCT", "="):
            return None
        body = _brace_map(stream, values="number")
        if body is None:
            return None
        return (weight, body)
    if not stream.expect("PUNCT", "="):
        return None
    if keyword == "lottery":
        return _brace_map(stream, values="number")
    if keyword == "act":
        return _brace_map(stream, values="lotterm")
    if keyword == "menu":
        return _bracket_list(stream)
    if keyword == "event":
        return _brace_idents(stream)
    raise AssertionError(keyword)


def _brace_map(stream: _TokenStream, values: str):
    """`{ ident: value, ... }` where value is a number or a lottery term."""
    if not stream.expect("PUNCT", "{"):
        return None
    entries: list[tuple[Token, object]] = []
    if not stream.accept("PUNCT", "}"):
        while True:
            key = stream.expect("IDENT", what="a name")
            if key is None:
                return None
            if not stream.expect("PUNCT", ":"):
                return None
            if values == "number":
                value = _rational(stream)
                if value is None:
                    return None
            else:
                if stream.peek().kind == "PUNCT" and stream.peek().text == "{":
                    value = _brace_map(stream, values="number")
                    if value is None:
                        return None
                else:
                    ref = stream.expect("IDENT", what="a lottery name or inline lottery")
                    if ref is None:
                        return None
                    value = ref
            entries.append((key, value))
            if stream.accept("PUNCT", ","):
                continue
            if stream.accept("PUNCT", "}"):
                break
            stream.error(stream.peek(), "expected ',' or '}'")
            return None
    return entries


def _bracket_list(stream: _TokenStream):
    if not stream.expect("PUNCT", "["):
        return None
    names: list[Token] = []
    if not stream.accept("PUNCT", "]"):
        while True:
            token = stream.expect("IDENT", what="an act name")
            if token is None:
                return None
            names.append(token)
            if stream.accept("PUNCT", ","):
                continue
            if stream.accept("PUNCT", "]"):
                break
            stream.error(stream.peek(), "expected ',' or ']'")
            return None
    return names


def _brace_idents(stream: _TokenStream):
    if not stream.expect("PUNCT", "{"):
        return None
    names: list[Token] = []
    if not stream.accept("PUNCT", "}"):
        while True:
            token = stream.expect("IDENT", what="a state name")
            if token is None:
                return None
            names.append(token)
            if stream.accept("PUNCT", ","):
                continue
            if stream.accept("PUNCT", "}"):
                break
            stream.error(stream.peek(), "expected ',' or '}'")
            return None
    return names


def _resolve_problem(states_decl, prizes_decl, utility_decl, sections, diagnostics):
    def err(token: Token, message: str) -> None:
        diagnostics.append(ParseDiagnostic("error", token.line, token.column, message, token.text))

    if states_decl is None:
        diagnostics.append(ParseDiagnostic("error", 1, 1, "no states section"))
        return None
    states_tok, state_names = states_decl
    if len(set(state_names)) != len(state_names):
        err(states_tok, "duplicate state names")
        return None
    states = tuple(state_names)
    state_set = set(states)

    prize_names = prizes_decl[1] if prizes_decl else []
    if prizes_decl and len(set(prize_names)) != len(prize_names):
        err(prizes_decl[0], "duplicate prize names")
        return None
    prizes = tuple(prize_names)
    prize_set = set(prizes)

    utils: dict[str, Fraction] = {}
    for prize, (token, value) in utility_decl.items():
        if prize not in prize_set:
            err(token, f"utility assigned to undeclared prize '{prize}'")
        else:
            utils[prize] = value

    def build_lottery(entries, context: Token) -> Optional[Lottery]:
        probs: dict[str, Fraction] = {}
        for key, value in entries:
            if key.text not in prize_set:
                err(key, f"unknown prize '{key.text}'")
                return None
            if key.text not in utils:
                err(key, f"prize '{key.text}' has no utility assignment")
                return None
            if key.text in probs:
                err(key, f"duplicate prize '{key.text}' in lottery")
                return None
            probs[key.text] = value
        total = sum(probs.values(), Fraction(0))
        if total != 1:
            err(context, f"lottery probabilities sum to {format_rational(total)}, expected 1/1")
            return None
        if any(v < 0 for v in probs.values()):
            err(context, "lottery probabilities must be nonnegative")
            return None
        return Lottery(probs)

    lotteries: dict[str, Lottery] = {}
    for name, entry in sections["lottery"].items():
        lottery = build_lottery(entry.payload, entry.token)
        if lottery is not None:
            lotteries[name] = lottery

    acts: dict[str, Act] = {}
    for name, entry in sections["act"].items():
        outcomes: dict[str, Lottery] = {}
        ok = True
        for key, value in entry.payload:
            if key.text not in state_set:
                err(key, f"unknown state '{key.text}'")
                ok = False
            elif key.text in outcomes:
                err(key, f"duplicate state '{key.text}' in act")
                ok = False
            elif isinstance(value, Token):
                if value.text not in lotteries:
                    err(value, f"unknown lottery '{value.text}'")
                    ok = False
                else:
                    outcomes[key.text] = lotteries[value.text]
            else:
                inline = build_lottery(value, key)
                if inline is None:
                    ok = False
                else:
                    outcomes[key.text] = inline
        missing = state_set - set(outcomes)
        if missing and ok:
            err(entry.token, f"act does not cover states {sorted(missing)}")
            ok = False
        if ok:
            acts[name] = Act(name, outcomes)

    menus: dict[str, Menu] = {}
    for name, entry in sections["menu"].items():
        listed: list[Act] = []
        ok = True
        seen: set[str] = set()
        for token in entry.payload:
            if token.text not in acts:
                err(token, f"unknown act '{token.text}'")
                ok = False
            elif token.text in seen:
                err(token, f"duplicate act '{token.text}' in menu")
                ok = False
            else:
                seen.add(token.text)
                listed.append(acts[token.text])
        if ok and not listed:
            err(entry.token, "menu lists no acts")
            ok = False
        if ok:
            menus[name] = Menu(tuple(listed))

    hypotheses: dict[str, tuple[Measure, Fraction]] = {}
    for name, entry in sections["hypothesis"].items():
        weight, body = entry.payload
        if not (0 <= weight <= 1):
            err(entry.token, f"weight {format_rational(weight)} outside [0, 1]")
            continue
        probs: dict[str, Fraction] = {}
        ok = True
        for key, value in body:
            if key.text not in state_set:
                err(key, f"unknown state '{key.text}'")
                ok = False
            elif key.text in probs:
                err(key, f"duplicate state '{key.text}' in hypothesis")
                ok = False
            elif value < 0:
                err(key, "probabilities must be nonnegative")
                ok = False
            else:
                probs[key.text] = value
        if not ok:
            continue
        missing = state_set - set(probs)
        if missing:
            err(entry.token, f"hypothesis does not cover states {sorted(missing)}")
            continue
        total = sum(probs.values(), Fraction(0))
        if total != 1:
            err(entry.token, f"probabilities sum to {format_rational(total)}, expected 1/1")
            continue
        hypotheses[name] = (Measure(probs), weight)

    if hypotheses:
        top = max(w for _, w in hypotheses.values())
        if top == 0:
            any_tok = sections["hypothesis"][next(iter(sections["hypothesis"]))].token
            err(any_tok, "every hypothesis has weight 0")
        else:
            hypotheses = {k: (m, w / top) for k, (m, w) in hypotheses.items()}

    events: dict[str, Event] = {}
    for name, entry in sections["event"].items():
        members: list[str] = []
        ok = True
        for token in entry.payload:
            if token.text not in state_set:
                err(token, f"unknown state '{token.text}'")
                ok = False
            elif token.text in members:
                err(token, f"duplicate state '{token.text}' in event")
                ok = False
            else:
                members.append(token.text)
        if ok:
            events[name] = Event(members)

    if diagnostics:
        return None
    try:
        utility = UtilitySpec(utils) if utils else None
    except ValueError as exc:
        err(states_tok, str(exc))
        return None
    if utility is None and (lotteries or acts):
        err(states_tok, "no utility section but lotteries are declared")
        return None
    if utility is None:
        # a measures-only document still needs a nominal utility table
        utility = UtilitySpec({"_zero": 0, "_one": 1})
    return ProblemDoc(
        states=states,
        prizes=prizes,
        utility=utility,
        lotteries=lotteries,
        acts=acts,
        menus=menus,
        hypotheses=hypotheses,
        events=events,
    )


# -- canonical serialization -------------------------------------------------------

def serialize_problem(doc: ProblemDoc) -> str:
    """Canonical text: sections and keys sorted, rationals in lowest terms.

    Acts reference a named lottery whenever one with the same distribution
    exists (the lexicographically first such name), otherwise inline.
    """
    lines: list[str] = []
    lines.append("states: " + " ".join(sorted(doc.states)))
    if doc.prizes:
        lines.append("prizes: " + " ".join(sorted(doc.prizes)))
        pairs = ", ".join(
            f"{prize} = {format_rational(value)}"
            for prize, value in doc.utility.items()
            if prize in set(doc.prizes)
        )
        if pairs:
            lines.append("utility: " + pairs)
    by_value: dict[Lottery, str] = {}
    for name in sorted(doc.lotteries):
        by_value.setdefault(doc.lotteries[name], name)

    def lottery_text(lottery: Lottery) -> str:
        inner = ", ".join(f"{p}: {format_rational(v)}" for p, v in lottery.items())
        return f"{{ {inner} }}"

    for name in sorted(doc.lotteries):
        lines.append(f"lottery {name} = {lottery_text(doc.lotteries[name])}")
    for name in sorted(doc.acts):
        act = doc.acts[name]
        parts = []
        for state in sorted(act.state_space):
            lottery = act[state]
            ref = by_value.get(lottery)
            parts.append(f"{state}: {ref if ref is not None else lottery_text(lottery)}")
        lines.append(f"act {name} = {{ {', '.join(parts)} }}")
    for name in sorted(doc.menus):
        refs = ", ".join(sorted(a.name for a in doc.menus[name]))
        lines.append(f"menu {name} = [ {refs} ]")
    for name in sorted(doc.hypotheses):
        measure, weight = doc.hypotheses[name]
        inner = ", ".join(f"{s}: {format_rational(p)}" for s, p in measure.items())
        lines.append(f"hypothesis {name} weight {format_rational(weight)} = {{ {inner} }}")
    for name in sorted(doc.events):
        members = ", ".join(sorted(doc.events[name].members))
        lines.append(f"event {name} = {{ {members} }}")
    return "\n".join(lines) + "\n"


def serialize_weighted_set(
    wset: WeightedMeasureSet, names: dict[str, tuple[Measure, Fraction]] | None = None
) -> str:
    """Weighted set as hypothesis lines; optional name hints from a document."""
    lines = ["states: " + " ".join(sorted(wset.state_space))]
    label_of: dict[Measure, str] = {}
    if names:
        for name in sorted(names):
            measure, _ = names[name]
            label_of.setdefault(measure, name)
    entries = []
    for i, (measure, weight) in enumerate(sorted(wset.entries, key=lambda mw: (mw[0].items(), mw[1]))):
        label = label_of.get(measure, f"h{i}")
        entries.append((label, measure, weight))
    for label, measure, weight in sorted(entries):
        inner = ", ".join(f"{s}: {format_rational(p)}" for s, p in measure.items())
        lines.append(f"hypothesis {label} weight {format_rational(weight)} = {{ {inner} }}")
    return "\n".join(lines) + "\n"


# -- decision trees -----------------------------------------------------------------

def parse_tree(text: str, doc: ProblemDoc) -> DecisionTree:
    """Parse a tree against an already-parsed problem document.

    Nature partitions are validated during the walk: each node's events must
    be disjoint and cover exactly the states still possible at that point.
    """
    diagnostics: list[ParseDiagnostic] = []
    tokens = _tokenize(text, diagnostics)
    if diagnostics:
        raise ParseError(diagnostics)
    stream = _TokenStream(tokens, diagnostics)
    root = _parse_node(stream, doc, frozenset(doc.states))
    if root is not None and stream.peek().kind != "EOF":
        stream.error(stream.peek(), "unexpected trailing input")
    if diagnostics:
        raise ParseError(diagnostics)
    assert root is not None
    return DecisionTree(root)


def _parse_node(stream: _TokenStream, doc: ProblemDoc, live: frozenset[str]) -> Optional[TreeNode]:
    token = stream.peek()
    if token.kind != "IDENT":
        stream.error(token, "expected 'decision', 'nature' or 'leaf'")
        return None
    if token.text == "decision":
        return _parse_decision(stream, doc, live)
    if token.text == "nature":
        return _parse_nature(stream, doc, live)
    if token.text == "leaf":
        return _parse_leaf(stream, doc)
    stream.error(token, f"expected 'decision', 'nature' or 'leaf', found '{token.text}'")
    return None


def _parse_decision(stream: _TokenStream, doc: ProblemDoc, live: frozenset[str]) -> Optional[TreeNode]:
    stream.next()
    name_tok = stream.expect("IDENT", what="a decision node name")
    if name_tok is None or not stream.expect("PUNCT", "{"):
        return None
    branches: list[tuple[str, TreeNode]] = []
    seen: set[str] = set()
    ok = True
    while not stream.accept("PUNCT", "}"):
        if stream.peek().kind == "EOF":
            stream.error(stream.peek(), "unterminated decision node")
            return None
        if not stream.expect("IDENT", "branch", what="'branch'"):
            return None
        branch_tok = stream.expect("IDENT", what="a branch name")
        if branch_tok is None or not stream.expect("PUNCT", "="):
            return None
        child = _parse_node(stream, doc, live)
        if child is None:
            return None
        if branch_tok.text in seen:
            stream.error(branch_tok, f"duplicate branch '{branch_tok.text}'")
            ok = False
        seen.add(branch_tok.text)
        branches.append((branch_tok.text, child))
        stream.accept("PUNCT", ",")
    if not branches:
        stream.error(name_tok, "decision node has no branches")
        return None
    return DecisionNode(name_tok.text, tuple(branches)) if ok else None


def _parse_nature(stream: _TokenStream, doc: ProblemDoc, live: frozenset[str]) -> Optional[TreeNode]:
    nature_tok = stream.next()
    if not stream.expect("PUNCT", "{"):
        return None
    cells: list[tuple[Event, TreeNode]] = []
    covered: set[str] = set()
    ok = True
    while not stream.accept("PUNCT", "}"):
        if stream.peek().kind == "EOF":
            stream.error(stream.peek(), "unterminated nature node")
            return None
        if not stream.expect("IDENT", "on", what="'on'"):
            return None
        event_tok = stream.expect("IDENT", what="an event name")
        if event_tok is None or not stream.expect("PUNCT", ":"):
            return None
        event = doc.events.get(event_tok.text)
        if event is None:
            stream.error(event_tok, f"unknown event '{event_tok.text}'")
            return None
        cell = event.members & live
        overlap = covered & cell
        if overlap:
            stream.error(event_tok, f"nature partition duplicates states {sorted(overlap)}")
            ok = False
        if not cell:
            stream.error(event_tok, "nature branch covers no surviving state")
            ok = False
        covered |= cell
        child = _parse_node(stream, doc, frozenset(cell))
        if child is None:
            return None
        cells.append((Event(cell), child))
        stream.accept("PUNCT", ",")
    missing = live - covered
    if missing:
        stream.error(nature_tok, f"nature partition misses states {sorted(missing)}")
        ok = False
    if not cells:
        stream.error(nature_tok, "nature node has no branches")
        return None
    return NatureNode(tuple(cells)) if ok else None


def _parse_leaf(stream: _TokenStream, doc: ProblemDoc) -> Optional[TreeNode]:
    stream.next()
    token = stream.peek()
    if token.kind == "IDENT" and token.text == "utility":
        stream.next()
        value = _rational(stream)
        if value is None:
            return None
        return Leaf(utility=value)
    ref = stream.expect("IDENT", what="'utility' or a lottery name")
    if ref is None:
        return None
    lottery = doc.lotteries.get(ref.text)
    if lottery is None:
        stream.error(ref, f"unknown lottery '{ref.text}'")
        return None
    return Leaf(lottery=lottery)
