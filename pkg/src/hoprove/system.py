"""Rewrite rules, matching and one-step rewriting."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Abs,
    App,
    BVar,
    Fun,
    Term,
    Type,
    Var,
    close,
    free_var_names,
    substitute,
    unbind,
)
from .orders import Signature


@dataclass(frozen=True)
class RewriteRule:
    env: dict
    lhs: Term
    rhs: Term
    line: int = 0

    @property
    def type(self) -> Type:
        return self.lhs.type

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


@dataclass
class RewriteSystem:
    sig: Signature
    rules: list = field(default_factory=list)


def match(pattern: Term, t: Term, subst: Optional[dict] = None) -> Optional[dict]:
    """Syntactic (first-order) matching of ``pattern`` against ``t``.

    Pattern variables may only be bound to terms without loose bound
    indices, so a match never captures a binder of ``t``.
    """
    subst = {} if subst is None else subst
    if isinstance(pattern, Var):
        if _loose_any(t) or pattern.ty != t.type:
            return None
        if pattern.name in subst:
            return subst if subst[pattern.name] == t else None
        return {**subst, pattern.name: t}
    if isinstance(pattern, BVar):
        return subst if pattern == t else None
    if isinstance(pattern, Fun):
        if not isinstance(t, Fun) or t.sym.name != pattern.sym.name:
            return None
        for p, u in zip(pattern.args, t.args):
            subst = match(p, u, subst)
            if subst is None:
                return None
        return subst
    if isinstance(pattern, App):
        if not isinstance(t, App):
            return None
        subst = match(pattern.fun, t.fun, subst)
        return None if subst is None else match(pattern.arg, t.arg, subst)
    if not isinstance(t, Abs) or t.ty != pattern.ty:
        return None
    return match(pattern.body, t.body, subst)


def _loose_any(t: Term, depth: int = 0) -> bool:
    if isinstance(t, BVar):
        return t.index >= depth
    if isinstance(t, Var):
        return False
    if isinstance(t, App):
        return _loose_any(t.fun, depth) or _loose_any(t.arg, depth)
    if isinstance(t, Abs):
        return _loose_any(t.body, depth + 1)
    return any(_loose_any(a, depth) for a in t.args)


def rewrite_step(rules, t: Term) -> list:
    """All ``(position, reduct)`` for one rule application anywhere in ``t``."""
    out = []
    _rewrites(list(rules), t, (), out, free_var_names(t))
    return out


def _rewrites(rules, t, pos, out, avoid):
    for r in rules:
        s = match(r.lhs, t)
        if s is not None:
            out.append((pos, substitute(r.rhs, s)))
    if isinstance(t, Fun):
        for i, a in enumerate(t.args):
            sub = []
            _rewrites(rules, a, pos + (i + 1,), sub, avoid)
            out.extend((p, Fun(t.sym, t.args[:i] + (r,) + t.args[i + 1:])) for p, r in sub)
    elif isinstance(t, App):
        sub = []
        _rewrites(rules, t.fun, pos + (1,), sub, avoid)
        out.extend((p, App(r, t.arg)) for p, r in sub)
        sub = []
        _rewrites(rules, t.arg, pos + (2,), sub, avoid)
        out.extend((p, App(t.fun, r)) for p, r in sub)
    elif isinstance(t, Abs):
        x, body = unbind(t, avoid)
        sub = []
        _rewrites(rules, body, pos + (1,), sub, avoid | {x.name})
        out.extend((p, Abs(t.ty, close(r, x), t.hint)) for p, r in sub)
