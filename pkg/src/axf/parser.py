"""Reader and printer for the S-expression program and state syntax.

Programs look like::

    (program
      (objects a b c)
      (basic (E 2))
      (derived (path 2) (acyclic 0))
      (stratum
        (axiom (path ?x ?y)
          (or (E ?x ?y) (exists (?z) (and (E ?x ?z) (path ?z ?y))))))
      (stratum
        (axiom (acyclic) (forall (?x) (not (path ?x ?x))))))

States look like ``(state (E a b) (E b c))``.  A semicolon starts a comment
that runs to the end of the line.  Variables carry a ``?`` sigil in the
concrete syntax only; internally names are stored bare.

Parsing is total: any byte string either yields an AST or raises ParseError
carrying a list of diagnostics, each with a span into the input.  ``imply``
is desugared to ``(or (not a) b)`` while reading.  A quantifier that rebinds
a variable already bound further out (including head variables) is renamed
on the spot (``x`` becomes ``x__1``), so downstream code never needs
capture-avoidance logic.

``print_program`` is the inverse: deterministic text whose reparse is
structurally equal to the original program, including for transformed
programs with generated predicate names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .logic import (
    And,
    Atom,
    Axiom,
    AxiomProgram,
    Bottom,
    Const,
    Exists,
    Forall,
    Formula,
    LogicError,
    Not,
    Or,
    Predicate,
    SourceSpan,
    Term,
    Top,
    Var,
    check_stratified,
    formula_at,
    free_vars,
)

RESERVED = {
    "program", "objects", "basic", "derived", "stratum", "axiom", "state",
    "and", "or", "not", "imply", "exists", "forall", "true", "false",
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: SourceSpan

    def __str__(self) -> str:
        return f"{self.span}: {self.code}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = list(diagnostics)
        summary = "\n".join(str(d) for d in self.diagnostics)
        super().__init__(f"{len(self.diagnostics)} parse diagnostic(s):\n{summary}")


# ---------------------------------------------------------------------------
# Lexing and reading


@dataclass(frozen=True)
class _Token:
    text: str  # "(", ")", or a symbol
    span: SourceSpan


@dataclass(frozen=True)
class _SAtom:
    text: str
    span: SourceSpan


@dataclass(frozen=True)
class _SList:
    items: tuple
    span: SourceSpan


_SNode = Union[_SAtom, _SList]


def _lex(text: str, filename: str) -> tuple[list[_Token], list[Diagnostic]]:
    tokens: list[_Token] = []
    diags: list[Diagnostic] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def span(start: int, end: int, sline: int, scol: int) -> SourceSpan:
        return SourceSpan(filename, start, end, sline, scol)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
        elif ch.isspace():
            i += 1
            col += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append(_Token(ch, span(i, i + 1, line, col)))
            i += 1
            col += 1
        else:
            start, sline, scol = i, line, col
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
                col += 1
            tokens.append(_Token(text[start:i], span(start, i, sline, scol)))
    return tokens, diags


def _read(tokens: list[_Token], filename: str, length: int) -> tuple[list[_SNode], list[Diagnostic]]:
    """Group tokens into nested lists; reports unbalanced parentheses."""
    diags: list[Diagnostic] = []
    top: list[_SNode] = []
    stack: list[tuple[list[_SNode], SourceSpan]] = []
    current = top
    for tok in tokens:
        if tok.text == "(":
            stack.append((current, tok.span))
            current = []
        elif tok.text == ")":
            if not stack:
                diags.append(Diagnostic("unbalanced-paren", "unmatched ')'", tok.span))
                continue
            parent, open_span = stack.pop()
            full = SourceSpan(
                filename, open_span.start, tok.span.end, open_span.line, open_span.column
            )
            parent.append(_SList(tuple(current), full))
            current = parent
        else:
            current.append(_SAtom(tok.text, tok.span))
    while stack:
        parent, open_span = stack.pop()
        diags.append(Diagnostic("unbalanced-paren", "unclosed '('", open_span))
        current = parent
    return top, diags


# ---------------------------------------------------------------------------
# Program parsing


class _Builder:
    def __init__(self, filename: str):
        self.filename = filename
        self.diags: list[Diagnostic] = []

    def err(self, code: str, message: str, span: SourceSpan) -> None:
        self.diags.append(Diagnostic(code, message, span))

    # -- small helpers

    def expect_list(self, node: _SNode, what: str) -> Optional[_SList]:
        if not isinstance(node, _SList):
            self.err("expected-list", f"expected {what}, got {node.text!r}", node.span)
            return None
        return node

    def head_is(self, node: _SList, word: str) -> bool:
        return (
            bool(node.items)
            and isinstance(node.items[0], _SAtom)
            and node.items[0].text == word
        )

    def name_token(self, node: _SNode, what: str) -> Optional[_SAtom]:
        if not isinstance(node, _SAtom):
            self.err("expected-name", f"expected {what}", node.span)
            return None
        if node.text.startswith("?"):
            self.err("expected-name", f"{what} may not be a variable", node.span)
            return None
        if node.text in RESERVED:
            self.err("reserved-name", f"{node.text!r} is reserved", node.span)
            return None
        return node


def parse_program(text: str, filename: str = "<string>") -> AxiomProgram:
    """Parse a program; raises ParseError with all collected diagnostics."""
    b = _Builder(filename)
    tokens, lex_diags = _lex(text, filename)
    b.diags.extend(lex_diags)
    forms, read_diags = _read(tokens, filename, len(text))
    b.diags.extend(read_diags)
    if b.diags:
        raise ParseError(b.diags)

    whole = SourceSpan(filename, 0, len(text), 1, 1)
    if len(forms) != 1:
        b.err("program-shape", "input must be exactly one (program ...) form", whole)
        raise ParseError(b.diags)
    root = forms[0]
    if not isinstance(root, _SList) or not b.head_is(root, "program"):
        b.err("program-shape", "top-level form must start with 'program'", root.span)
        raise ParseError(b.diags)

    sections = root.items[1:]
    if len(sections) < 3:
        b.err(
            "program-shape",
            "program needs (objects ...), (basic ...), and (derived ...) sections",
            root.span,
        )
        raise ParseError(b.diags)

    objects = _parse_objects(b, sections[0])
    predicates: dict[str, Predicate] = {}
    _parse_decls(b, sections[1], "basic", predicates)
    _parse_decls(b, sections[2], "derived", predicates)

    strata: list[list[Axiom]] = []
    for section in sections[3:]:
        node = b.expect_list(section, "a (stratum ...) section")
        if node is None:
            continue
        if not b.head_is(node, "stratum"):
            b.err("program-shape", "expected a (stratum ...) section", node.span)
            continue
        axioms: list[Axiom] = []
        for form in node.items[1:]:
            ax = _parse_axiom(b, form, predicates, set(objects))
            if ax is not None:
                axioms.append(ax)
        strata.append(axioms)

    if b.diags:
        raise ParseError(b.diags)

    program = AxiomProgram(predicates.values(), objects, strata, validate=False)
    for v in check_stratified(program):
        span = _violation_span(program, v, whole)
        b.err("not-stratified", v.message, span)
    if b.diags:
        raise ParseError(b.diags)
    program.validate()
    return program


def _violation_span(program: AxiomProgram, violation, fallback: SourceSpan) -> SourceSpan:
    if violation.occurrence is not None:
        o = violation.occurrence
        body = program.strata[o.stratum_index][o.axiom_index].body
        try:
            node = formula_at(body, o.path)
        except LogicError:
            node = None
        if node is not None and node.span is not None:
            return node.span
    axiom = program.strata[violation.stratum_index][violation.axiom_index]
    return axiom.span if axiom.span is not None else fallback


def _parse_objects(b: _Builder, node: _SNode) -> list[str]:
    out: list[str] = []
    lst = b.expect_list(node, "an (objects ...) section")
    if lst is None:
        return out
    if not b.head_is(lst, "objects"):
        b.err("program-shape", "first section must be (objects ...)", lst.span)
        return out
    for item in lst.items[1:]:
        name = b.name_token(item, "an object name")
        if name is None:
            continue
        if name.text in out:
            b.err("duplicate-object", f"object {name.text} declared twice", name.span)
            continue
        out.append(name.text)
    return out


def _parse_decls(
    b: _Builder, node: _SNode, kind: str, predicates: dict[str, Predicate]
) -> None:
    lst = b.expect_list(node, f"a ({kind} ...) section")
    if lst is None:
        return
    if not b.head_is(lst, kind):
        b.err("program-shape", f"expected a ({kind} ...) section", lst.span)
        return
    for item in lst.items[1:]:
        decl = b.expect_list(item, "a (name arity) declaration")
        if decl is None:
            continue
        if len(decl.items) != 2:
            b.err("bad-declaration", "declaration must be (name arity)", decl.span)
            continue
        name = b.name_token(decl.items[0], "a predicate name")
        if name is None:
            continue
        arity_tok = decl.items[1]
        if not isinstance(arity_tok, _SAtom) or not arity_tok.text.isdigit():
            b.err("bad-declaration", "arity must be a nonnegative integer", decl.items[1].span)
            continue
        if name.text in predicates:
            b.err("duplicate-predicate", f"predicate {name.text} declared twice", name.span)
            continue
        predicates[name.text] = Predicate(name.text, int(arity_tok.text), kind)  # type: ignore[arg-type]


def _parse_axiom(
    b: _Builder, node: _SNode, predicates: dict[str, Predicate], objects: set[str]
) -> Optional[Axiom]:
    lst = b.expect_list(node, "an (axiom head body) form")
    if lst is None:
        return None
    if not b.head_is(lst, "axiom") or len(lst.items) != 3:
        b.err("bad-axiom", "axiom must be (axiom (pred ?v ...) formula)", lst.span)
        return None
    head = b.expect_list(lst.items[1], "an axiom head")
    if head is None or not head.items:
        if head is not None:
            b.err("bad-axiom", "axiom head must be (pred ?v ...)", head.span)
        return None
    name = b.name_token(head.items[0], "a predicate name")
    if name is None:
        return None
    pred = predicates.get(name.text)
    if pred is None:
        b.err("undeclared-predicate", f"undeclared predicate {name.text}", name.span)
        return None
    if pred.kind != "derived":
        b.err("head-not-derived", f"head predicate {name.text} is basic", name.span)
        return None
    head_vars: list[str] = []
    ok = True
    for item in head.items[1:]:
        if not isinstance(item, _SAtom) or not item.text.startswith("?"):
            b.err("head-constant", "axiom head arguments must be variables", item.span)
            ok = False
            continue
        v = item.text[1:]
        if not v:
            b.err("bad-variable", "bare '?' is not a variable", item.span)
            ok = False
            continue
        if v in head_vars:
            b.err("repeated-head-variable", f"head variable ?{v} repeated", item.span)
            ok = False
            continue
        head_vars.append(v)
    if ok and len(head_vars) != pred.arity:
        b.err(
            "arity-mismatch",
            f"head of {pred.name} has {len(head_vars)} arguments, declared arity is {pred.arity}",
            head.span,
        )
        ok = False
    body = _parse_formula(
        b, lst.items[2], predicates, objects, {v: v for v in head_vars}, frozenset(head_vars)
    )
    if body is None or not ok:
        return None
    loose = free_vars(body) - set(head_vars)
    if loose:
        names = ", ".join("?" + v for v in sorted(loose))
        b.err(
            "free-variable-mismatch",
            f"body uses variables not bound by the head: {names}",
            lst.items[2].span,
        )
        return None
    return Axiom(pred.name, tuple(head_vars), body, span=lst.span)


def _parse_formula(
    b: _Builder,
    node: _SNode,
    predicates: dict[str, Predicate],
    objects: set[str],
    scope: dict[str, str],
    taken: frozenset[str],
) -> Optional[Formula]:
    """Parse one formula.  ``scope`` maps every source-visible bound name
    (head variables included) to its current, possibly renamed, name, and
    ``taken`` holds every internal name bound anywhere on this path, even
    ones whose source name was since rebound; fresh names must avoid all of
    them or nested rebindings of one source name could collide."""
    if isinstance(node, _SAtom):
        if node.text == "true":
            return Top(span=node.span)
        if node.text == "false":
            return Bottom(span=node.span)
        b.err("bad-formula", f"expected a formula, got {node.text!r}", node.span)
        return None
    if not node.items:
        b.err("bad-formula", "empty list is not a formula", node.span)
        return None
    head = node.items[0]
    if not isinstance(head, _SAtom):
        b.err("bad-formula", "formula must start with a connective or predicate", head.span)
        return None
    word = head.text

    if word in ("and", "or"):
        if len(node.items) < 3:
            b.err("bad-formula", f"({word} ...) needs at least two subformulas", node.span)
            return None
        subs = [
            _parse_formula(b, item, predicates, objects, scope, taken)
            for item in node.items[1:]
        ]
        if any(s is None for s in subs):
            return None
        cls = And if word == "and" else Or
        return cls(tuple(subs), span=node.span)  # type: ignore[arg-type]

    if word == "not":
        if len(node.items) != 2:
            b.err("bad-formula", "(not ...) takes exactly one subformula", node.span)
            return None
        sub = _parse_formula(b, node.items[1], predicates, objects, scope, taken)
        return None if sub is None else Not(sub, span=node.span)

    if word == "imply":
        if len(node.items) != 3:
            b.err("bad-formula", "(imply a b) takes exactly two subformulas", node.span)
            return None
        left = _parse_formula(b, node.items[1], predicates, objects, scope, taken)
        right = _parse_formula(b, node.items[2], predicates, objects, scope, taken)
        if left is None or right is None:
            return None
        return Or((Not(left, span=node.items[1].span), right), span=node.span)

    if word in ("exists", "forall"):
        if len(node.items) != 3:
            b.err("bad-formula", f"({word} (?v ...) body) takes a variable list and a body", node.span)
            return None
        var_list = b.expect_list(node.items[1], "a variable list")
        if var_list is None:
            return None
        names: list[str] = []
        for item in var_list.items:
            if not isinstance(item, _SAtom) or not item.text.startswith("?") or len(item.text) < 2:
                b.err("bad-variable", "quantifier variables look like ?name", item.span)
                return None
            v = item.text[1:]
            if v in names:
                b.err("duplicate-quantifier-variable", f"?{v} bound twice in one quantifier", item.span)
                return None
            names.append(v)
        if not names:
            b.err("bad-formula", "quantifier needs at least one variable", var_list.span)
            return None
        inner_scope = dict(scope)
        in_use = set(taken)
        bound: list[str] = []
        for v in names:
            fresh = v
            n = 0
            while fresh in in_use:
                n += 1
                fresh = f"{v}__{n}"
            inner_scope[v] = fresh
            in_use.add(fresh)
            bound.append(fresh)
        sub = _parse_formula(
            b, node.items[2], predicates, objects, inner_scope, frozenset(in_use)
        )
        if sub is None:
            return None
        cls = Exists if word == "exists" else Forall
        return cls(tuple(bound), sub, span=node.span)

    # Atom.
    pred = predicates.get(word)
    if word.startswith("?"):
        b.err("bad-formula", "a variable is not a formula", head.span)
        return None
    if word in RESERVED:
        b.err("bad-formula", f"{word!r} cannot start a formula here", head.span)
        return None
    if pred is None:
        b.err("undeclared-predicate", f"undeclared predicate {word}", head.span)
        return None
    args: list[Term] = []
    ok = True
    for item in node.items[1:]:
        if not isinstance(item, _SAtom):
            b.err("bad-term", "atom arguments must be variables or objects", item.span)
            ok = False
            continue
        if item.text.startswith("?"):
            v = item.text[1:]
            if not v:
                b.err("bad-variable", "bare '?' is not a variable", item.span)
                ok = False
                continue
            args.append(Var(scope.get(v, v)))
        else:
            if item.text not in objects:
                b.err("unknown-object", f"unknown object {item.text}", item.span)
                ok = False
                continue
            args.append(Const(item.text))
    if len(args) != pred.arity and ok:
        b.err(
            "arity-mismatch",
            f"atom {word} has {len(node.items) - 1} arguments, declared arity is {pred.arity}",
            node.span,
        )
        ok = False
    return Atom(pred.name, tuple(args), span=node.span) if ok else None


# ---------------------------------------------------------------------------
# State parsing


def parse_state(text: str, program: AxiomProgram, filename: str = "<string>"):
    """Parse ``(state (P obj ...) ...)`` into a basic-state TruthAssignment
    over the program's declared objects."""
    from .evaluator import TruthAssignment, Universe

    b = _Builder(filename)
    tokens, lex_diags = _lex(text, filename)
    b.diags.extend(lex_diags)
    forms, read_diags = _read(tokens, filename, len(text))
    b.diags.extend(read_diags)
    if b.diags:
        raise ParseError(b.diags)
    whole = SourceSpan(filename, 0, len(text), 1, 1)
    if len(forms) != 1 or not isinstance(forms[0], _SList) or not b.head_is(forms[0], "state"):
        b.err("state-shape", "input must be exactly one (state ...) form", whole)
        raise ParseError(b.diags)
    if not program.universe_hint:
        b.err("empty-universe", "program declares no objects to build a state over", whole)
        raise ParseError(b.diags)

    objects = set(program.universe_hint)
    atoms: set[tuple[str, tuple[str, ...]]] = set()
    for item in forms[0].items[1:]:
        lst = b.expect_list(item, "a ground atom (P obj ...)")
        if lst is None or not lst.items:
            if lst is not None:
                b.err("bad-ground-atom", "empty list is not a ground atom", lst.span)
            continue
        name = b.name_token(lst.items[0], "a predicate name")
        if name is None:
            continue
        pred = program.signature.get(name.text)
        if pred is None:
            b.err("undeclared-predicate", f"undeclared predicate {name.text}", name.span)
            continue
        if pred.kind != "basic":
            b.err("derived-in-state", f"{name.text} is derived; states assign basic predicates only", name.span)
            continue
        consts: list[str] = []
        ok = True
        for arg in lst.items[1:]:
            if not isinstance(arg, _SAtom) or arg.text.startswith("?"):
                b.err("bad-ground-atom", "state atoms take object names only", arg.span)
                ok = False
                continue
            if arg.text not in objects:
                b.err("unknown-object", f"unknown object {arg.text}", arg.span)
                ok = False
                continue
            consts.append(arg.text)
        if ok and len(consts) != pred.arity:
            b.err(
                "arity-mismatch",
                f"atom {pred.name} has {len(consts)} arguments, declared arity is {pred.arity}",
                lst.span,
            )
            ok = False
        if ok:
            atoms.add((pred.name, tuple(consts)))
    if b.diags:
        raise ParseError(b.diags)
    basic = frozenset(p.name for p in program.basic_predicates)
    return TruthAssignment(Universe(program.universe_hint), frozenset(atoms), basic)


# ---------------------------------------------------------------------------
# Printing


def format_term(term: Term) -> str:
    return f"?{term.name}" if isinstance(term, Var) else term.name


def format_formula(formula: Formula) -> str:
    if isinstance(formula, Atom):
        if not formula.args:
            return f"({formula.pred})"
        return f"({formula.pred} " + " ".join(format_term(t) for t in formula.args) + ")"
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Bottom):
        return "false"
    if isinstance(formula, Not):
        return f"(not {format_formula(formula.sub)})"
    if isinstance(formula, And):
        return "(and " + " ".join(format_formula(s) for s in formula.subs) + ")"
    if isinstance(formula, Or):
        return "(or " + " ".join(format_formula(s) for s in formula.subs) + ")"
    if isinstance(formula, Exists):
        vs = " ".join("?" + v for v in formula.vars)
        return f"(exists ({vs}) {format_formula(formula.sub)})"
    if isinstance(formula, Forall):
        vs = " ".join("?" + v for v in formula.vars)
        return f"(forall ({vs}) {format_formula(formula.sub)})"
    raise LogicError(f"unknown formula node {type(formula).__name__}")


def print_program(program: AxiomProgram) -> str:
    """Deterministic text form: objects in declared order, declarations
    sorted by name, strata and axioms in order, one axiom per block."""
    lines: list[str] = ["(program"]
    lines.append("  (objects" + "".join(" " + o for o in program.universe_hint) + ")")
    for kind in ("basic", "derived"):
        decls = sorted(
            (p for p in program.signature.values() if p.kind == kind),
            key=lambda p: p.name,
        )
        if not decls:
            lines.append(f"  ({kind})")
        else:
            lines.append(f"  ({kind}")
            for i, p in enumerate(decls):
                tail = ")" if i == len(decls) - 1 else ""
                lines.append(f"    ({p.name} {p.arity}){tail}")
    for stratum in program.strata:
        if not stratum:
            lines.append("  (stratum)")
            continue
        lines.append("  (stratum")
        for i, axiom in enumerate(stratum):
            head = "(" + axiom.head_pred + "".join(" ?" + v for v in axiom.head_vars) + ")"
            tail = ")" if i == len(stratum) - 1 else ""
            lines.append(f"    (axiom {head}")
            lines.append(f"      {format_formula(axiom.body)}){tail}")
    lines[-1] += ")"
    return "\n".join(lines) + "\n"


def print_state(assignment) -> str:
    """Serialize a basic state as ``(state ...)`` with atoms sorted."""
    atoms = sorted(assignment.true_atoms)
    if not atoms:
        return "(state)\n"
    parts = [
        "(" + name + "".join(" " + c for c in args) + ")" for name, args in atoms
    ]
    return "(state " + " ".join(parts) + ")\n"


def program_to_json(program: AxiomProgram) -> dict:
    """JSON-friendly view of a program; formula bodies stay in concrete syntax."""
    return {
        "objects": list(program.universe_hint),
        "basic": [
            {"name": p.name, "arity": p.arity}
            for p in sorted(program.basic_predicates, key=lambda p: p.name)
        ],
        "derived": [
            {"name": p.name, "arity": p.arity}
            for p in sorted(program.derived_predicates, key=lambda p: p.name)
        ],
        "strata": [
            [
                {
                    "head": ax.head_pred,
                    "vars": list(ax.head_vars),
                    "body": format_formula(ax.body),
                }
                for ax in stratum
            ]
            for stratum in program.strata
        ],
    }
