"""Text front-end for theories, goals, narratives, and structural models.

One file holds a domain declaration followed by sections in any order::

    file        := domainDecl { section }
    domainDecl  := "domain" "{" "objects:" nameList ";"
                               "fluents:" sigList ";"
                               "actions:" sigList ";" "}"
    section     := possDecl | ssaDecl | initDecl | goalDecl | narrDecl | hpDecl
    possDecl    := "poss" actionPattern ":" formula ";"
    ssaDecl     := "ssa" fluentPattern ":" formula ";"   // may use the action variable "a"
    initDecl    := "init" ("closed"|"open") "{" { literalOrForall ";" } "}"
    goalDecl    := "goal" NAME ":" formula ";"
    narrDecl    := "narrative" NAME ":" groundAction { ";" groundAction } ";"
    hpDecl      := "hpmodel" NAME "{" { exo/endo/eq/context decl } "}"

Signatures are written ``Name/arity``.  Formula connectives are
``& | ! -> <->`` with ``forall x.`` and ``exists x.``; equalities are
``t = t`` and ``t != t``; ``[action] f`` and ``Poss(action)`` are accepted
in raw queries.  Implications are sugar for their or/not unfoldings.
Line comments start with ``//``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .logic import (
    OBJECT,
    ActionTerm,
    After,
    And,
    Box,
    Equal,
    Exists,
    FALSE,
    FluentAtom,
    Forall,
    Formula,
    GroundAction,
    LanguageError,
    Not,
    ObjName,
    Or,
    Poss,
    RESERVED_WORDS,
    TRUE,
    Term,
    Trace,
    Var,
    Vocabulary,
    free_vars,
    is_static,
)
from .theory import (
    ACTION_VAR,
    BasicActionTheory,
    InitialTheory,
    PreconditionClause,
    SuccessorStateAxiom,
    ValidationReport,
    CLOSED,
    OPEN,
    validate,
)
from .hpmodels import (
    CaseEquation,
    Cmp,
    Context,
    EAnd,
    EConst,
    ENot,
    EOr,
    Equation,
    ExprEquation,
    HPModel,
    ModelError,
    ValueExpr,
    VarDecl,
    check_context,
)

SECTION_WORDS = frozenset({"poss", "ssa", "init", "goal", "narrative", "hpmodel"})


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str,
                 expected: tuple[str, ...] = ()):
        self.span = span
        self.message = message
        self.expected = expected
        super().__init__(f"line {span.line}, column {span.column}: {message}")


class TheoryValidationError(Exception):
    """The input parsed but the assembled theory is ill-shaped."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(report.violations))


# ---------------------------------------------------------------------------
# Tokens

IDENT = "IDENT"
NUMBER = "NUMBER"
EOF = "EOF"

_TWO_CHAR = {"->": "ARROW", "!=": "NEQ"}
_ONE_CHAR = {
    "{": "LBRACE", "}": "RBRACE", "(": "LPAREN", ")": "RPAREN",
    "[": "LBRACK", "]": "RBRACK", ":": "COLON", ";": "SEMI", ",": "COMMA",
    ".": "DOT", "/": "SLASH", "&": "AMP", "|": "PIPE", "=": "EQ", "!": "BANG",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    span: SourceSpan


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        three = text[i:i + 3]
        if three == "<->":
            tokens.append(Token("DARROW", three, SourceSpan(i, i + 3, line, col)))
            i += 3
            col += 3
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR:
            tokens.append(Token(_TWO_CHAR[two], two, SourceSpan(i, i + 2, line, col)))
            i += 2
            col += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token(_ONE_CHAR[ch], ch, SourceSpan(i, i + 1, line, col)))
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token(IDENT, text[i:j], SourceSpan(i, j, line, col)))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token(NUMBER, text[i:j], SourceSpan(i, j, line, col)))
            col += j - i
            i = j
            continue
        raise ParseError(SourceSpan(i, i + 1, line, col), f"unexpected character {ch!r}")
    tokens.append(Token(EOF, "", SourceSpan(n, n, line, col)))
    return tokens


# ---------------------------------------------------------------------------
# Parsed file contents


@dataclass
class HPModelDecl:
    model: HPModel
    contexts: dict[str, Context] = field(default_factory=dict)


@dataclass
class ParsedFile:
    bat: BasicActionTheory
    goals: dict[str, Formula] = field(default_factory=dict)
    narratives: dict[str, Trace] = field(default_factory=dict)
    hpmodels: dict[str, HPModelDecl] = field(default_factory=dict)


@dataclass
class _Env:
    vocab: Vocabulary
    bound: dict[str, Var]
    action_var: bool = False


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing --

    def peek(self, off: int = 0) -> Token:
        return self.tokens[min(self.pos + off, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != EOF:
            self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == IDENT and tok.value == word

    def error(self, message: str, tok: Optional[Token] = None,
              expected: tuple[str, ...] = ()) -> ParseError:
        tok = tok or self.peek()
        return ParseError(tok.span, message, expected)

    def expect(self, kind: str, what: str) -> Token:
        if not self.at(kind):
            raise self.error(f"expected {what}", expected=(what,))
        return self.advance()

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            raise self.error(f"expected '{word}'", expected=(word,))
        return self.advance()

    def expect_name(self, what: str) -> Token:
        tok = self.expect(IDENT, what)
        return tok

    # -- file --

    def parse_file(self) -> ParsedFile:
        vocab = self.parse_domain()
        clauses: list[PreconditionClause] = []
        ssas: list[SuccessorStateAxiom] = []
        initial: Optional[InitialTheory] = None
        goals: dict[str, Formula] = {}
        narratives: dict[str, Trace] = {}
        hpmodels: dict[str, HPModelDecl] = {}
        while not self.at(EOF):
            tok = self.peek()
            if self.at_word("poss"):
                clauses.append(self.parse_poss(vocab))
            elif self.at_word("ssa"):
                ssas.append(self.parse_ssa(vocab))
            elif self.at_word("init"):
                if initial is not None:
                    raise self.error("duplicate init section")
                initial = self.parse_init(vocab)
            elif self.at_word("goal"):
                name, formula = self.parse_goal_decl(vocab)
                if name in goals:
                    raise self.error(f"duplicate goal {name!r}", tok)
                goals[name] = formula
            elif self.at_word("narrative"):
                name, trace = self.parse_narrative(vocab)
                if name in narratives:
                    raise self.error(f"duplicate narrative {name!r}", tok)
                narratives[name] = trace
            elif self.at_word("hpmodel"):
                name, decl = self.parse_hpmodel()
                if name in hpmodels:
                    raise self.error(f"duplicate hpmodel {name!r}", tok)
                hpmodels[name] = decl
            else:
                raise self.error(
                    "expected a section (poss, ssa, init, goal, narrative, hpmodel)")
        if initial is None:
            initial = InitialTheory(CLOSED, frozenset())
        bat = BasicActionTheory(vocab, initial, tuple(clauses), tuple(ssas))
        report = validate(bat)
        if not report.ok:
            raise TheoryValidationError(report)
        return ParsedFile(bat, goals, narratives, hpmodels)

    def parse_domain(self) -> Vocabulary:
        start = self.peek()
        self.expect_word("domain")
        self.expect("LBRACE", "'{'")
        self.expect_word("objects")
        self.expect("COLON", "':'")
        objects = self.parse_name_list()
        self.expect("SEMI", "';'")
        self.expect_word("fluents")
        self.expect("COLON", "':'")
        fluents = self.parse_sig_list()
        self.expect("SEMI", "';'")
        self.expect_word("actions")
        self.expect("COLON", "':'")
        actions = self.parse_sig_list()
        self.expect("SEMI", "';'")
        self.expect("RBRACE", "'}'")
        try:
            return Vocabulary(tuple(objects), tuple(fluents), tuple(actions))
        except LanguageError as exc:
            raise ParseError(start.span, str(exc)) from exc

    def parse_name_list(self) -> list[str]:
        names = [self.expect_name("a name").value]
        while self.at("COMMA"):
            self.advance()
            names.append(self.expect_name("a name").value)
        return names

    def parse_sig_list(self) -> list[tuple[str, int]]:
        if self.at("SEMI"):
            return []
        sigs = [self.parse_sig()]
        while self.at("COMMA"):
            self.advance()
            sigs.append(self.parse_sig())
        return sigs

    def parse_sig(self) -> tuple[str, int]:
        name = self.expect_name("a signature like Name/1")
        self.expect("SLASH", "'/'")
        arity = self.expect(NUMBER, "an arity")
        return name.value, int(arity.value)

    # -- axiom sections --

    def parse_params(self, vocab: Vocabulary) -> tuple[Var, ...]:
        if not self.at("LPAREN"):
            return ()
        self.advance()
        params = []
        while True:
            tok = self.expect_name("a parameter variable")
            if vocab.is_object(tok.value) or vocab.is_fluent(tok.value) \
                    or vocab.is_action(tok.value) or tok.value in RESERVED_WORDS:
                raise self.error(
                    f"parameter {tok.value!r} collides with a declared name", tok)
            params.append(Var(tok.value, OBJECT))
            if self.at("COMMA"):
                self.advance()
                continue
            break
        self.expect("RPAREN", "')'")
        if len({p.name for p in params}) != len(params):
            raise self.error("repeated parameter name")
        return tuple(params)

    def parse_poss(self, vocab: Vocabulary) -> PreconditionClause:
        self.expect_word("poss")
        sym = self.expect_name("an action symbol")
        if not vocab.is_action(sym.value):
            raise self.error(f"undeclared action {sym.value!r}", sym)
        params = self.parse_params(vocab)
        if len(params) != vocab.action_arity(sym.value):
            raise self.error(
                f"action {sym.value!r} expects {vocab.action_arity(sym.value)} "
                f"parameter(s), got {len(params)}", sym)
        self.expect("COLON", "':'")
        env = _Env(vocab, {p.name: p for p in params}, action_var=False)
        condition = self.parse_formula(env)
        self.expect("SEMI", "';'")
        return PreconditionClause(sym.value, params, condition)

    def parse_ssa(self, vocab: Vocabulary) -> SuccessorStateAxiom:
        self.expect_word("ssa")
        sym = self.expect_name("a fluent symbol")
        if not vocab.is_fluent(sym.value):
            raise self.error(f"undeclared fluent {sym.value!r}", sym)
        params = self.parse_params(vocab)
        if len(params) != vocab.fluent_arity(sym.value):
            raise self.error(
                f"fluent {sym.value!r} expects {vocab.fluent_arity(sym.value)} "
                f"parameter(s), got {len(params)}", sym)
        self.expect("COLON", "':'")
        env = _Env(vocab, {p.name: p for p in params}, action_var=True)
        rhs = self.parse_formula(env)
        self.expect("SEMI", "';'")
        return SuccessorStateAxiom(sym.value, params, rhs)

    def parse_init(self, vocab: Vocabulary) -> InitialTheory:
        self.expect_word("init")
        if self.at_word(CLOSED):
            mode = CLOSED
        elif self.at_word(OPEN):
            mode = OPEN
        else:
            raise self.error("expected 'closed' or 'open'")
        self.advance()
        self.expect("LBRACE", "'{'")
        literals: set[tuple] = set()
        while not self.at("RBRACE"):
            literals.update(self.parse_init_item(vocab, {}))
            self.expect("SEMI", "';'")
        self.expect("RBRACE", "'}'")
        return InitialTheory(mode, frozenset(literals))

    def parse_init_item(self, vocab: Vocabulary, bound: dict[str, Var]
                        ) -> list[tuple]:
        # A signed ground atom, or a universally quantified one, expanded
        # over the declared objects on the spot.
        if self.at_word("forall"):
            self.advance()
            names = [self.expect_name("a variable").value]
            while self.at("COMMA"):
                self.advance()
                names.append(self.expect_name("a variable").value)
            self.expect("DOT", "'.'")
            inner = dict(bound)
            for name in names:
                if vocab.is_object(name):
                    raise self.error(f"cannot bind declared object {name!r}")
                inner[name] = Var(name, OBJECT)
            return self.parse_init_item(vocab, inner)
        sign = True
        if self.at("BANG"):
            self.advance()
            sign = False
        sym = self.expect_name("a fluent symbol")
        if not vocab.is_fluent(sym.value):
            raise self.error(f"undeclared fluent {sym.value!r}", sym)
        args: list = []
        if self.at("LPAREN"):
            self.advance()
            while True:
                tok = self.expect_name("an object constant or bound variable")
                if vocab.is_object(tok.value):
                    args.append(ObjName(tok.value))
                elif tok.value in bound:
                    args.append(bound[tok.value])
                else:
                    raise self.error(f"unbound variable {tok.value!r}", tok)
                if self.at("COMMA"):
                    self.advance()
                    continue
                break
            self.expect("RPAREN", "')'")
        if len(args) != vocab.fluent_arity(sym.value):
            raise self.error(
                f"fluent {sym.value!r} expects {vocab.fluent_arity(sym.value)} "
                f"argument(s), got {len(args)}", sym)
        import itertools as _it
        var_order = [v for v in bound.values()
                     if any(arg == v for arg in args)]
        out = []
        for combo in _it.product(vocab.objects, repeat=len(var_order)):
            binding = dict(zip(var_order, combo))
            names = tuple(
                binding[arg] if isinstance(arg, Var) else arg.name for arg in args
            )
            out.append(((sym.value, names), sign))
        return out

    def parse_goal_decl(self, vocab: Vocabulary) -> tuple[str, Formula]:
        self.expect_word("goal")
        name = self.expect_name("a goal name")
        self.expect("COLON", "':'")
        start = self.peek()
        env = _Env(vocab, {}, action_var=False)
        formula = self.parse_formula(env)
        self.expect("SEMI", "';'")
        if not is_static(formula):
            raise ParseError(start.span, "goal must be static")
        return name.value, formula

    def parse_narrative(self, vocab: Vocabulary) -> tuple[str, Trace]:
        self.expect_word("narrative")
        name = self.expect_name("a narrative name")
        self.expect("COLON", "':'")
        actions = [self.parse_ground_action(vocab)]
        while self.at("SEMI"):
            self.advance()
            nxt = self.peek()
            if nxt.kind != IDENT or nxt.value in SECTION_WORDS:
                break
            actions.append(self.parse_ground_action(vocab))
        else:
            self.expect("SEMI", "';'")
        return name.value, Trace(tuple(actions))

    def parse_ground_action(self, vocab: Vocabulary) -> GroundAction:
        sym = self.expect_name("an action symbol")
        if not vocab.is_action(sym.value):
            raise self.error(f"undeclared action {sym.value!r}", sym)
        args: list[str] = []
        if self.at("LPAREN"):
            self.advance()
            while True:
                tok = self.expect_name("an object constant")
                if not vocab.is_object(tok.value):
                    raise self.error(
                        f"argument {tok.value!r} is not an object constant", tok)
                args.append(tok.value)
                if self.at("COMMA"):
                    self.advance()
                    continue
                break
            self.expect("RPAREN", "')'")
        if len(args) != vocab.action_arity(sym.value):
            raise self.error(
                f"action {sym.value!r} expects {vocab.action_arity(sym.value)} "
                f"argument(s), got {len(args)}", sym)
        return GroundAction(sym.value, tuple(args))

    # -- formulas --

    def parse_formula(self, env: _Env) -> Formula:
        return self._iff(env)

    def _iff(self, env: _Env) -> Formula:
        left = self._impl(env)
        while self.at("DARROW"):
            self.advance()
            right = self._impl(env)
            left = And(Or(Not(left), right), Or(Not(right), left))
        return left

    def _impl(self, env: _Env) -> Formula:
        left = self._or(env)
        if self.at("ARROW"):
            self.advance()
            right = self._impl(env)
            return Or(Not(left), right)
        return left

    def _or(self, env: _Env) -> Formula:
        left = self._and(env)
        while self.at("PIPE"):
            self.advance()
            left = Or(left, self._and(env))
        return left

    def _and(self, env: _Env) -> Formula:
        left = self._unary(env)
        while self.at("AMP"):
            self.advance()
            left = And(left, self._unary(env))
        return left

    def _unary(self, env: _Env) -> Formula:
        if self.at("BANG"):
            self.advance()
            return Not(self._unary(env))
        if self.at("LBRACK"):
            self.advance()
            term = self.parse_action_operand(env)
            self.expect("RBRACK", "']'")
            return After(term, self._unary(env))
        if self.at_word("box"):
            self.advance()
            return Box(self._unary(env))
        if self.at_word("forall") or self.at_word("exists"):
            which = self.advance().value
            names: list[Token] = [self.expect_name("a variable")]
            while self.at("COMMA"):
                self.advance()
                names.append(self.expect_name("a variable"))
            self.expect("DOT", "'.'")
            inner = _Env(env.vocab, dict(env.bound), env.action_var)
            variables = []
            for tok in names:
                if env.vocab.is_object(tok.value) or env.vocab.is_fluent(tok.value) \
                        or env.vocab.is_action(tok.value) or tok.value in RESERVED_WORDS:
                    raise self.error(
                        f"cannot bind declared name {tok.value!r}", tok)
                var = Var(tok.value, OBJECT)
                variables.append(var)
                inner.bound[tok.value] = var
            body = self.parse_formula(inner)
            for var in reversed(variables):
                body = Forall(var, body) if which == "forall" else Exists(var, body)
            return body
        return self._primary(env)

    def _primary(self, env: _Env) -> Formula:
        if self.at("LPAREN"):
            self.advance()
            f = self.parse_formula(env)
            self.expect("RPAREN", "')'")
            return f
        tok = self.peek()
        if tok.kind != IDENT:
            raise self.error("expected a formula")
        if tok.value == "true":
            self.advance()
            return TRUE
        if tok.value == "false":
            self.advance()
            return FALSE
        if tok.value == "Poss":
            self.advance()
            self.expect("LPAREN", "'('")
            term = self.parse_action_operand(env)
            self.expect("RPAREN", "')'")
            return Poss(term)
        if env.vocab.is_fluent(tok.value):
            self.advance()
            args = self.parse_object_args(env)
            if len(args) != env.vocab.fluent_arity(tok.value):
                raise self.error(
                    f"fluent {tok.value!r} expects "
                    f"{env.vocab.fluent_arity(tok.value)} argument(s), "
                    f"got {len(args)}", tok)
            return FluentAtom(tok.value, tuple(args))
        left = self.parse_term(env)
        if self.at("EQ"):
            op = self.advance()
            negate = False
        elif self.at("NEQ"):
            op = self.advance()
            negate = True
        else:
            raise self.error("expected '=' or '!=' after a term", tok)
        right = self.parse_term(env)
        try:
            eq = Equal(left, right)
        except LanguageError as exc:
            raise ParseError(op.span, str(exc)) from exc
        return Not(eq) if negate else eq

    def parse_object_args(self, env: _Env) -> list[Term]:
        if not self.at("LPAREN"):
            return []
        self.advance()
        args = [self.parse_object_term(env)]
        while self.at("COMMA"):
            self.advance()
            args.append(self.parse_object_term(env))
        self.expect("RPAREN", "')'")
        return args

    def parse_object_term(self, env: _Env) -> Term:
        tok = self.expect_name("an object term")
        if env.vocab.is_object(tok.value):
            return ObjName(tok.value)
        if tok.value in env.bound:
            return env.bound[tok.value]
        raise self.error(f"unbound variable {tok.value!r}", tok)

    def parse_action_operand(self, env: _Env) -> Term:
        tok = self.expect_name("an action term")
        if tok.value == "a":
            if not env.action_var:
                raise self.error("the action variable 'a' is only available "
                                 "on SSA right-hand sides", tok)
            return ACTION_VAR
        if not env.vocab.is_action(tok.value):
            raise self.error(f"undeclared action {tok.value!r}", tok)
        args = self.parse_object_args(env)
        if len(args) != env.vocab.action_arity(tok.value):
            raise self.error(
                f"action {tok.value!r} expects "
                f"{env.vocab.action_arity(tok.value)} argument(s), got {len(args)}",
                tok)
        return ActionTerm(tok.value, tuple(args))

    def parse_term(self, env: _Env) -> Term:
        tok = self.peek()
        if tok.kind != IDENT:
            raise self.error("expected a term")
        if tok.value == "a":
            if not env.action_var:
                raise self.error("the action variable 'a' is only available "
                                 "on SSA right-hand sides", tok)
            self.advance()
            return ACTION_VAR
        if env.vocab.is_action(tok.value):
            return self.parse_action_operand(env)
        self.advance()
        if env.vocab.is_object(tok.value):
            return ObjName(tok.value)
        if tok.value in env.bound:
            return env.bound[tok.value]
        raise self.error(f"unbound variable {tok.value!r}", tok)

    # -- structural models --

    def parse_hpmodel(self) -> tuple[str, HPModelDecl]:
        self.expect_word("hpmodel")
        name = self.expect_name("a model name")
        self.expect("LBRACE", "'{'")
        exo: list[VarDecl] = []
        endo: list[VarDecl] = []
        equations: list[tuple[str, Equation]] = []
        raw_contexts: list[tuple[Token, list[tuple[str, str]]]] = []
        while not self.at("RBRACE"):
            if self.at_word("exo"):
                self.advance()
                self.expect("COLON", "':'")
                exo.extend(self.parse_var_decls())
                self.expect("SEMI", "';'")
            elif self.at_word("endo"):
                self.advance()
                self.expect("COLON", "':'")
                endo.extend(self.parse_var_decls())
                self.expect("SEMI", "';'")
            elif self.at_word("eq"):
                self.advance()
                var = self.expect_name("an endogenous variable")
                self.expect("COLON", "':'")
                equations.append((var.value, self.parse_equation()))
                self.expect("SEMI", "';'")
            elif self.at_word("context"):
                self.advance()
                cname = self.expect_name("a context name")
                self.expect("COLON", "':'")
                raw_contexts.append((cname, self.parse_assignments()))
                self.expect("SEMI", "';'")
            else:
                raise self.error("expected exo, endo, eq, or context")
        self.expect("RBRACE", "'}'")
        try:
            model = HPModel(tuple(exo), tuple(endo), tuple(equations))
        except ModelError as exc:
            raise ParseError(name.span, str(exc)) from exc
        contexts: dict[str, Context] = {}
        for cname, assigns in raw_contexts:
            if cname.value in contexts:
                raise self.error(f"duplicate context {cname.value!r}", cname)
            ctx = Context(tuple(assigns))
            try:
                check_context(model, ctx)
            except ModelError as exc:
                raise ParseError(cname.span, str(exc)) from exc
            contexts[cname.value] = ctx
        return name.value, HPModelDecl(model, contexts)

    def parse_var_decls(self) -> list[VarDecl]:
        decls = [self.parse_var_decl()]
        while self.at("COMMA"):
            self.advance()
            decls.append(self.parse_var_decl())
        return decls

    def parse_var_decl(self) -> VarDecl:
        name = self.expect_name("a variable name")
        if not self.at_word("in"):
            return VarDecl(name.value)
        self.advance()
        self.expect("LBRACE", "'{'")
        values = [self.parse_value()]
        while self.at("COMMA"):
            self.advance()
            values.append(self.parse_value())
        self.expect("RBRACE", "'}'")
        try:
            return VarDecl(name.value, tuple(values))
        except ModelError as exc:
            raise ParseError(name.span, str(exc)) from exc

    def parse_value(self) -> str:
        tok = self.peek()
        if tok.kind in (IDENT, NUMBER):
            self.advance()
            return tok.value
        raise self.error("expected a value")

    def parse_equation(self) -> Equation:
        if not self.at_word("case"):
            return ExprEquation(self.parse_vexpr())
        self.advance()
        self.expect("LBRACE", "'{'")
        cases = []
        while not self.at_word("else"):
            cond = self.parse_vexpr()
            self.expect("ARROW", "'->'")
            value = self.parse_value()
            self.expect("SEMI", "';'")
            cases.append((cond, value))
        self.expect_word("else")
        self.expect("ARROW", "'->'")
        default = self.parse_value()
        self.expect("SEMI", "';'")
        self.expect("RBRACE", "'}'")
        return CaseEquation(tuple(cases), default)

    def parse_assignments(self) -> list[tuple[str, str]]:
        out = [self.parse_assignment()]
        while self.at("COMMA"):
            self.advance()
            out.append(self.parse_assignment())
        return out

    def parse_assignment(self) -> tuple[str, str]:
        name = self.expect_name("a variable name")
        self.expect("EQ", "'='")
        return name.value, self.parse_value()

    def parse_vexpr(self) -> ValueExpr:
        left = self._vand()
        while self.at("PIPE"):
            self.advance()
            left = EOr(left, self._vand())
        return left

    def _vand(self) -> ValueExpr:
        left = self._vunary()
        while self.at("AMP"):
            self.advance()
            left = EAnd(left, self._vunary())
        return left

    def _vunary(self) -> ValueExpr:
        if self.at("BANG"):
            self.advance()
            return ENot(self._vunary())
        if self.at("LPAREN"):
            self.advance()
            e = self.parse_vexpr()
            self.expect("RPAREN", "')'")
            return e
        tok = self.expect_name("a variable or constant")
        if tok.value == "true":
            return EConst(True)
        if tok.value == "false":
            return EConst(False)
        if self.at("EQ"):
            self.advance()
            return Cmp(tok.value, self.parse_value())
        if self.at("NEQ"):
            self.advance()
            return ENot(Cmp(tok.value, self.parse_value()))
        return Cmp(tok.value, "true")


# ---------------------------------------------------------------------------
# Public entry points


def parse_file(text: str) -> ParsedFile:
    """Parse a full input file; raises :class:`ParseError` on the first
    syntax error and :class:`TheoryValidationError` on shape violations."""
    return _Parser(text).parse_file()


def parse_theory(text: str) -> BasicActionTheory:
    return parse_file(text).bat


def _standalone(text: str) -> _Parser:
    return _Parser(text)


def parse_goal(text: str, vocab: Vocabulary) -> Formula:
    """A static sentence; rejects modal operators and free variables."""
    p = _standalone(text)
    env = _Env(vocab, {}, action_var=False)
    f = p.parse_formula(env)
    p.expect(EOF, "end of input")
    if not is_static(f):
        raise ParseError(p.tokens[0].span, "goal must be static")
    if free_vars(f):
        raise ParseError(p.tokens[0].span, "goal must be a sentence")
    return f


def parse_query(text: str, vocab: Vocabulary) -> Formula:
    """A raw query sentence; after-action modalities are allowed here."""
    p = _standalone(text)
    env = _Env(vocab, {}, action_var=False)
    f = p.parse_formula(env)
    p.expect(EOF, "end of input")
    if free_vars(f):
        raise ParseError(p.tokens[0].span, "query must be a sentence")
    return f


def parse_trace(text: str, vocab: Vocabulary) -> Trace:
    """A semicolon-separated ground action sequence; empty input is the
    empty trace."""
    p = _standalone(text)
    if p.at(EOF):
        return Trace()
    actions = [p.parse_ground_action(vocab)]
    while p.at("SEMI"):
        p.advance()
        if p.at(EOF):
            break
        actions.append(p.parse_ground_action(vocab))
    p.expect(EOF, "end of input")
    return Trace(tuple(actions))


def parse_value_query(text: str, model: HPModel) -> ValueExpr:
    """A boolean query over a structural model's variables."""
    p = _standalone(text)
    expr = p.parse_vexpr()
    p.expect(EOF, "end of input")
    decls = model.decls()
    from .hpmodels import expr_vars
    for var in sorted(expr_vars(expr)):
        if var not in decls:
            raise ParseError(p.tokens[0].span,
                             f"query references undeclared variable {var!r}")
    return expr
