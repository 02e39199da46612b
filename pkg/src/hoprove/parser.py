"""Reader and printer for the line-oriented ``.hrs`` input format.

A file is a sequence of ``;``-terminated declarations::

    sort N;  sort Ord;
    sortprec Ord > N;
    fun lim : (N -> Ord) -> Ord;
    fun rec : Ord * Ord * (Ord -> Ord -> Ord) * ((N -> Ord) -> (N -> Ord) -> Ord) -> Ord;
    prec rec > lim;  status rec = lex;
    var F : N -> Ord;
    rule rec(lim(F),U,V,W) -> W F (\\n:N. rec(F n, U, V, W));
    option budget = 32;

In a ``fun`` declaration the first top-level ``->`` separates the argument
product from the result type, so arrow-typed arguments are parenthesised.
Application is juxtaposition (left associative), abstraction is
``\\x:T. t`` and extends as far right as possible.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Arrow,
    Fun,
    FunctionSymbol,
    Sort,
    SortSymbol,
    TypeDeclaration,
    Var,
    annotate,
    app,
    free_vars,
    lam,
    show,
    show_type,
)
from .errors import HoproveError, ParseError, TypingError
from .orders import LEX, MUL, Precedence, Signature
from .system import RewriteRule, RewriteSystem

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>\#[^\n]*)"
    r"|(?P<arrow>->)|(?P<punct>[(),;:.*\\>=/λ])|(?P<ident>[A-Za-z0-9_'][A-Za-z0-9_']*)"
)
KEYWORDS = {"sort", "sortprec", "fun", "prec", "status", "var", "rule", "option"}
DEFAULT_OPTIONS = {"budget": 32, "beta_steps": 8}


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str
    source: str = "<input>"

    def __str__(self):
        return f"{self.source}:{self.line}:{self.col}: {self.message}"


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


class _Fail(Exception):
    def __init__(self, tok: Optional[Tok], message: str):
        self.tok, self.message = tok, message


def tokenize(text: str) -> list:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError([Diagnostic(line, pos - start + 1, f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tk = "punct" if kind == "arrow" else kind
            tx = "\\" if m.group() == "λ" else m.group()
            out.append(Tok(tk, tx, line, m.start() - start + 1))
        pos = m.end()
    return out


@dataclass
class SpecFile:
    sig: Signature
    env: dict
    rules: list
    options: dict = field(default_factory=lambda: dict(DEFAULT_OPTIONS))
    source: str = ""

    @property
    def system(self) -> RewriteSystem:
        return RewriteSystem(self.sig, list(self.rules))


class _Stream:
    def __init__(self, toks, end_tok=None):
        self.toks, self.i, self.end_tok = toks, 0, end_tok

    def peek(self, k=0) -> Optional[Tok]:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def next(self) -> Tok:
        t = self.peek()
        if t is None:
            raise _Fail(self.end_tok, "unexpected end of declaration")
        self.i += 1
        return t

    def expect(self, text) -> Tok:
        t = self.next()
        if t.text != text:
            raise _Fail(t, f"expected {text!r}, found {t.text!r}")
        return t

    def ident(self) -> Tok:
        t = self.next()
        if t.kind != "ident":
            raise _Fail(t, f"expected a name, found {t.text!r}")
        return t

    def done(self):
        t = self.peek()
        if t is not None:
            raise _Fail(t, f"unexpected {t.text!r}")


# ------------------------------------------------------------------ types


def _type(st: _Stream, sig: Signature):
    left = _atype(st, sig)
    if st.at("->"):
        st.next()
        return Arrow(left, _type(st, sig))
    return left


def _atype(st: _Stream, sig: Signature):
    if st.at("("):
        st.next()
        ty = _type(st, sig)
        st.expect(")")
        return ty
    tok = st.ident()
    sym = sig.sorts.get(tok.text)
    if sym is None:
        raise _Fail(tok, f"unknown sort {tok.text!r}")
    args = []
    if sym.arity:
        st.expect("(")
        args.append(_type(st, sig))
        while st.at(","):
            st.next()
            args.append(_type(st, sig))
        st.expect(")")
    if len(args) != sym.arity:
        raise _Fail(tok, f"sort {tok.text} takes {sym.arity} arguments")
    return Sort(tok.text, tuple(args))


def parse_type(sig: Signature, text: str):
    st = _Stream(tokenize(text))
    try:
        ty = _type(st, sig)
        st.done()
    except _Fail as e:
        tok = e.tok
        raise ParseError([Diagnostic(tok.line if tok else 1, tok.col if tok else 1, e.message)]) from None
    return ty


def _decl(st: _Stream, sig: Signature) -> TypeDeclaration:
    first = _atype(st, sig)
    if not st.at("*") and not st.at("->"):
        return TypeDeclaration((), first)
    args = [first]
    while st.at("*"):
        st.next()
        args.append(_atype(st, sig))
    st.expect("->")
    return TypeDeclaration(tuple(args), _type(st, sig))


# ------------------------------------------------------------------ terms


def _term(st: _Stream, sig: Signature, env: dict, scope: dict):
    if st.at("\\"):
        return _lambda(st, sig, env, scope)
    head = _atom(st, sig, env, scope)
    args = []
    while True:
        t = st.peek()
        if t is None or t.text in (")", ",", "->", ";"):
            break
        if t.text == "\\":
            args.append(_lambda(st, sig, env, scope))
            break
        args.append(_atom(st, sig, env, scope))
    return app(head, *args)


def _lambda(st, sig, env, scope):
    st.expect("\\")
    name = st.ident()
    st.expect(":")
    ty = _type(st, sig)
    st.expect(".")
    x = Var(name.text, ty)
    body = _term(st, sig, env, {**scope, name.text: x})
    return lam(x, body)


def _atom(st, sig, env, scope):
    tok = st.next()
    if tok.text == "(":
        t = _term(st, sig, env, scope)
        st.expect(")")
        return t
    if tok.kind != "ident":
        raise _Fail(tok, f"unexpected {tok.text!r}")
    if tok.text in scope:
        return scope[tok.text]
    if tok.text in env:
        return Var(tok.text, env[tok.text])
    sym = sig.symbols.get(tok.text)
    if sym is None:
        raise _Fail(tok, f"unknown name {tok.text!r}")
    args = []
    if st.at("("):
        st.next()
        if not st.at(")"):
            args.append(_term(st, sig, env, scope))
            while st.at(","):
                st.next()
                args.append(_term(st, sig, env, scope))
        st.expect(")")
    if len(args) != sym.arity:
        raise _Fail(tok, f"{sym.name} must be applied to exactly {sym.arity} arguments "
                         f"(function symbols are not curried)")
    return Fun(sym, tuple(args))


def parse_term(sig: Signature, env: dict, text: str):
    """Parse and typecheck a single term in the variable environment ``env``."""
    st = _Stream(tokenize(text))
    try:
        t = _term(st, sig, env, {})
        st.done()
        return annotate(env, t)
    except _Fail as e:
        tok = e.tok
        raise ParseError([Diagnostic(tok.line if tok else 1, tok.col if tok else 1, e.message)]) from None
    except TypingError as e:
        raise ParseError([Diagnostic(1, 1, str(e))]) from None


# ------------------------------------------------------------------ files


def _statements(toks):
    cur = []
    for t in toks:
        if t.text == ";":
            if cur:
                yield cur, t
            cur = []
        else:
            cur.append(t)
    if cur:
        yield cur, None


def _chain(st: _Stream):
    names = [st.ident().text]
    rels = []
    while st.peek() is not None:
        op = st.next()
        if op.text not in (">", "="):
            raise _Fail(op, f"expected '>' or '=', found {op.text!r}")
        rels.append(op.text)
        names.append(st.ident().text)
    if not rels:
        raise _Fail(st.end_tok, "a precedence needs at least two names")
    strict, equiv = [], []
    for (a, b), r in zip(zip(names, names[1:]), rels):
        (strict if r == ">" else equiv).append((a, b))
    return strict, equiv


def parse_spec(text: str, source: str = "<input>") -> SpecFile:
    """Parse a whole ``.hrs`` file; raises ParseError with every diagnostic."""
    diags = []

    def fail(tok, msg):
        diags.append(Diagnostic(tok.line if tok else 0, tok.col if tok else 0, msg, source))

    try:
        toks = tokenize(text)
    except ParseError as e:
        raise ParseError([Diagnostic(d.line, d.col, d.message, source) for d in e.diagnostics]) from None
    stmts = []
    for body, end in _statements(toks):
        kw = body[0]
        if kw.text not in KEYWORDS:
            fail(kw, f"unknown declaration {kw.text!r}")
            continue
        stmts.append((kw, _Stream(body[1:], end or body[-1])))

    sig = Signature()
    env = {}
    options = dict(DEFAULT_OPTIONS)
    strict, equiv, sstrict, sequiv = [], [], [], []
    rules = []

    def run(kinds, handler):
        for kw, st in stmts:
            if kw.text not in kinds:
                continue
            st.i = 0
            try:
                handler(kw, st)
                st.done()
            except _Fail as e:
                fail(e.tok or kw, e.message)

    def on_sort(kw, st):
        name = st.ident()
        arity = 0
        if st.at("/"):
            st.next()
            arity = int(st.ident().text)
        if name.text in sig.sorts:
            raise _Fail(name, f"sort {name.text} declared twice")
        sig.sorts[name.text] = SortSymbol(name.text, arity)

    def on_fun(kw, st):
        name = st.ident()
        st.expect(":")
        decl = _decl(st, sig)
        if name.text in sig.symbols:
            raise _Fail(name, f"function symbol {name.text} declared twice")
        sig.symbols[name.text] = FunctionSymbol(name.text, decl)

    def on_var(kw, st):
        names = [st.ident()]
        while st.at(","):
            st.next()
            names.append(st.ident())
        st.expect(":")
        ty = _type(st, sig)
        for n in names:
            if n.text in env:
                raise _Fail(n, f"variable {n.text} declared twice")
            if n.text in sig.symbols:
                raise _Fail(n, f"{n.text} is already a function symbol")
            env[n.text] = ty

    def on_prec(kw, st):
        s, e = _chain(st)
        if kw.text == "prec":
            for pair in s + e:
                for n in pair:
                    if n not in sig.symbols:
                        raise _Fail(kw, f"precedence mentions undeclared symbol {n!r}")
            strict.extend(s)
            equiv.extend(e)
        else:
            for pair in s + e:
                for n in pair:
                    if n not in sig.sorts:
                        raise _Fail(kw, f"sort precedence mentions undeclared sort {n!r}")
            sstrict.extend(s)
            sequiv.extend(e)

    def on_status(kw, st):
        name = st.ident()
        st.expect("=")
        val = st.ident()
        if name.text not in sig.symbols:
            raise _Fail(name, f"status for undeclared symbol {name.text!r}")
        if val.text not in (MUL, LEX):
            raise _Fail(val, f"status must be 'mul' or 'lex', not {val.text!r}")
        sig.status[name.text] = val.text

    def on_option(kw, st):
        name = st.ident()
        st.expect("=")
        val = st.ident().text
        options[name.text] = int(val) if val.isdigit() else val

    def on_rule(kw, st):
        lhs = _term(st, sig, env, {})
        st.expect("->")
        rhs = _term(st, sig, env, {})
        try:
            lhs = annotate(env, lhs)
            rhs = annotate(env, rhs)
        except TypingError as e:
            raise _Fail(kw, f"ill-typed rule: {e}") from None
        if lhs.type != rhs.type:
            raise _Fail(kw, f"rule sides have different types {show_type(lhs.type)} "
                            f"and {show_type(rhs.type)}")
        if not isinstance(lhs, Fun):
            raise _Fail(kw, f"left-hand side {show(lhs)} is not headed by a function symbol")
        extra = free_vars(rhs) - free_vars(lhs)
        if extra:
            names = ", ".join(sorted(v.name for v in extra))
            raise _Fail(kw, f"right-hand side variables {names} do not occur on the left")
        used = {v.name: v.ty for v in free_vars(lhs)}
        rules.append(RewriteRule(used, lhs, rhs, kw.line))

    run({"sort"}, on_sort)
    run({"fun"}, on_fun)
    run({"var"}, on_var)
    run({"prec", "sortprec"}, on_prec)
    run({"status"}, on_status)
    run({"option"}, on_option)
    if not diags:
        sig.precedence = Precedence(strict, equiv)
        sig.sort_prec = Precedence(sstrict, sequiv)
        run({"rule"}, on_rule)
    if diags:
        raise ParseError(diags)
    return SpecFile(sig, env, rules, options, text)


def load_spec(path) -> SpecFile:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), str(path))


# ------------------------------------------------------------------ printing


def print_spec(spec: SpecFile) -> str:
    sig = spec.sig
    lines = []
    for s in sig.sorts.values():
        lines.append(f"sort {s.name}{'/' + str(s.arity) if s.arity else ''};")
    for a, b in sorted(sig.sort_prec.strict):
        lines.append(f"sortprec {a} > {b};")
    for pair in sorted(sorted(p) for p in sig.sort_prec.equiv):
        lines.append(f"sortprec {' = '.join(pair)};")
    for f in sig.symbols.values():
        lines.append(f"fun {f.name} : {f.decl};")
    for a, b in sorted(sig.precedence.strict):
        lines.append(f"prec {a} > {b};")
    for pair in sorted(sorted(p) for p in sig.precedence.equiv):
        lines.append(f"prec {' = '.join(pair)};")
    for name, st in sorted(sig.status.items()):
        lines.append(f"status {name} = {st};")
    for name, ty in spec.env.items():
        lines.append(f"var {name} : {show_type(ty)};")
    for k, v in spec.options.items():
        if DEFAULT_OPTIONS.get(k) != v:
            lines.append(f"option {k} = {v};")
    for r in spec.rules:
        lines.append(f"rule {show(r.lhs)} -> {show(r.rhs)};")
    return "\n".join(lines) + "\n"


__all__ = [
    "Diagnostic",
    "HoproveError",
    "SpecFile",
    "load_spec",
    "parse_spec",
    "parse_term",
    "parse_type",
    "print_spec",
    "tokenize",
]
