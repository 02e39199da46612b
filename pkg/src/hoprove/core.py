"""Types, terms, typing and the alpha/beta/eta machinery.

Terms are locally nameless: a binder stores only a name hint, its body
refers to it with a de Bruijn index (``BVar``), and free variables carry
their name and type.  Alpha-equivalence is therefore plain structural
equality, and substitution of free variables can never capture.

Top-level terms handed to the engines are always locally closed; code that
needs to look under a binder opens it with a fresh free variable
(:func:`unbind`) and closes it again afterwards (:func:`lam`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import (
    ArityMismatch,
    DomainMismatch,
    InvalidPosition,
    NonArrowApplied,
    TypeMismatch,
    UnboundVariable,
)


def _memo(obj, key, compute):
    d = obj.__dict__
    try:
        return d[key]
    except KeyError:
        val = compute()
        object.__setattr__(obj, key, val)
        return val


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class SortSymbol:
    name: str
    arity: int = 0


@dataclass(frozen=True, repr=False)
class Sort:
    """A basic type ``s(args)``; ``args`` is empty for 0-ary sorts."""

    name: str
    args: tuple = ()

    def __str__(self):
        return show_type(self)

    __repr__ = __str__

    def __hash__(self):
        return _memo(self, "_h", lambda: hash(("S", self.name, self.args)))


@dataclass(frozen=True, repr=False)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __str__(self):
        return show_type(self)

    __repr__ = __str__

    def __hash__(self):
        return _memo(self, "_h", lambda: hash(("A", self.dom, self.cod)))


Type = Union[Sort, Arrow]


def arrows(*types: Type) -> Type:
    """``arrows(a, b, c)`` is ``a -> (b -> c)``."""
    out = types[-1]
    for ty in reversed(types[:-1]):
        out = Arrow(ty, out)
    return out


def is_basic(ty: Type) -> bool:
    return isinstance(ty, Sort)


def type_depth(ty: Type) -> int:
    if isinstance(ty, Arrow):
        return 1 + max(type_depth(ty.dom), type_depth(ty.cod))
    return 1 + max((type_depth(a) for a in ty.args), default=0)


def target_sort(ty: Type) -> Sort:
    while isinstance(ty, Arrow):
        ty = ty.cod
    return ty


def show_type(ty: Type) -> str:
    if isinstance(ty, Arrow):
        dom = show_type(ty.dom)
        if isinstance(ty.dom, Arrow):
            dom = f"({dom})"
        return f"{dom} -> {show_type(ty.cod)}"
    if ty.args:
        return f"{ty.name}({', '.join(show_type(a) for a in ty.args)})"
    return ty.name


@dataclass(frozen=True)
class TypeDeclaration:
    arg_types: tuple
    result: Type

    @property
    def arity(self) -> int:
        return len(self.arg_types)

    def is_first_order(self) -> bool:
        return all(isinstance(t, Sort) and not t.args for t in (*self.arg_types, self.result))

    def __str__(self):
        if not self.arg_types:
            return show_type(self.result)
        parts = []
        for a in self.arg_types:
            s = show_type(a)
            parts.append(f"({s})" if isinstance(a, Arrow) else s)
        res = show_type(self.result)
        if isinstance(self.result, Arrow):
            res = f"({res})"
        return f"{' * '.join(parts)} -> {res}"


@dataclass(frozen=True)
class FunctionSymbol:
    name: str
    decl: TypeDeclaration

    @property
    def arity(self) -> int:
        return self.decl.arity

    def __str__(self):
        return self.name


# ---------------------------------------------------------------- terms


class _TermOps:
    def __hash__(self):
        return _memo(self, "_h", lambda: hash(self._key()))

    def __str__(self):
        return show(self)

    def __repr__(self):
        return f"<{type(self).__name__} {show(self)}>"

    @property
    def type(self) -> Type:
        return _memo(self, "_ty", lambda: type_of(self))


@dataclass(frozen=True, eq=True, repr=False)
class Var(_TermOps):
    name: str
    ty: Optional[Type] = None

    def _key(self):
        return ("v", self.name, self.ty)

    __hash__ = _TermOps.__hash__
    __str__ = _TermOps.__str__


@dataclass(frozen=True, eq=True, repr=False)
class BVar(_TermOps):
    """Bound occurrence; ``index`` counts enclosing binders, innermost 0."""

    index: int
    ty: Optional[Type] = None

    def _key(self):
        return ("b", self.index, self.ty)

    __hash__ = _TermOps.__hash__
    __str__ = _TermOps.__str__


@dataclass(frozen=True, eq=True, repr=False)
class Abs(_TermOps):
    ty: Type
    body: "Term"
    hint: str = field(default="x", compare=False)

    def _key(self):
        return ("l", self.ty, self.body)

    __hash__ = _TermOps.__hash__
    __str__ = _TermOps.__str__


@dataclass(frozen=True, eq=True, repr=False)
class App(_TermOps):
    fun: "Term"
    arg: "Term"

    def _key(self):
        return ("@", self.fun, self.arg)

    __hash__ = _TermOps.__hash__
    __str__ = _TermOps.__str__


@dataclass(frozen=True, eq=True, repr=False)
class Fun(_TermOps):
    sym: FunctionSymbol
    args: tuple = ()

    @property
    def name(self) -> str:
        return self.sym.name

    def _key(self):
        return ("f", self.sym.name, self.args)

    __hash__ = _TermOps.__hash__
    __str__ = _TermOps.__str__


Term = Union[Var, BVar, Abs, App, Fun]
Position = tuple


def fun(sym: FunctionSymbol, *args: Term) -> Fun:
    return Fun(sym, tuple(args))


def app(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def type_of(t: Term) -> Type:
    """Type of an annotated term, read off structurally (no environment)."""
    if isinstance(t, (Var, BVar)):
        if t.ty is None:
            raise UnboundVariable(f"variable {t} carries no type")
        return t.ty
    if isinstance(t, Fun):
        return t.sym.decl.result
    if isinstance(t, Abs):
        return Arrow(t.ty, t.body.type)
    ft = t.fun.type
    if not isinstance(ft, Arrow):
        raise NonArrowApplied(f"{show(t.fun)} : {show_type(ft)} is applied")
    return ft.cod


# ------------------------------------------------- binders (locally nameless)


def _map_bvars(t: Term, depth: int, on_bvar, on_var=None) -> Term:
    if isinstance(t, BVar):
        return on_bvar(t, depth)
    if isinstance(t, Var):
        return on_var(t, depth) if on_var else t
    if isinstance(t, App):
        f = _map_bvars(t.fun, depth, on_bvar, on_var)
        a = _map_bvars(t.arg, depth, on_bvar, on_var)
        return t if (f is t.fun and a is t.arg) else App(f, a)
    if isinstance(t, Abs):
        b = _map_bvars(t.body, depth + 1, on_bvar, on_var)
        return t if b is t.body else Abs(t.ty, b, t.hint)
    args = tuple(_map_bvars(a, depth, on_bvar, on_var) for a in t.args)
    return t if all(x is y for x, y in zip(args, t.args)) else Fun(t.sym, args)


def instantiate(body: Term, u: Term) -> Term:
    """Replace the loose index 0 of ``body`` by the locally closed ``u``."""

    def on_bvar(b, depth):
        if b.index == depth:
            return u
        if b.index > depth:
            return BVar(b.index - 1, b.ty)
        return b

    return _map_bvars(body, 0, on_bvar)


def close(t: Term, x: Var) -> Term:
    """Abstract the free variable ``x`` into a loose index 0."""

    def on_var(v, depth):
        return BVar(depth, v.ty) if v == x else v

    def on_bvar(b, depth):
        return BVar(b.index + 1, b.ty) if b.index >= depth else b

    return _map_bvars(t, 0, on_bvar, on_var)


def lam(x: Var, body: Term) -> Abs:
    if x.ty is None:
        raise TypeMismatch(f"binder {x.name} needs a type")
    return Abs(x.ty, close(body, x), x.name)


def has_loose(t: Term, level: int = 0) -> bool:
    if isinstance(t, BVar):
        return t.index == level
    if isinstance(t, Var):
        return False
    if isinstance(t, App):
        return has_loose(t.fun, level) or has_loose(t.arg, level)
    if isinstance(t, Abs):
        return has_loose(t.body, level + 1)
    return any(has_loose(a, level) for a in t.args)


def lower(t: Term) -> Term:
    """Drop one binder level from a body that does not use index 0."""

    def on_bvar(b, depth):
        return BVar(b.index - 1, b.ty) if b.index > depth else b

    return _map_bvars(t, 0, on_bvar)


def fresh_name(hint: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if hint not in avoid:
        return hint
    k = 1
    while f"{hint}{k}" in avoid:
        k += 1
    return f"{hint}{k}"


def unbind(t: Abs, avoid: Iterable[str] = ()) -> tuple:
    """Open ``t`` with a variable named after its hint, fresh for ``avoid``
    and for the free variables of ``t``."""
    names = set(avoid) | free_var_names(t)
    x = Var(fresh_name(t.hint, names), t.ty)
    return x, instantiate(t.body, x)


# ------------------------------------------------------------- queries


def free_vars(t: Term) -> frozenset:
    def compute():
        if isinstance(t, Var):
            return frozenset((t,))
        if isinstance(t, BVar):
            return frozenset()
        if isinstance(t, App):
            return free_vars(t.fun) | free_vars(t.arg)
        if isinstance(t, Abs):
            return free_vars(t.body)
        out = frozenset()
        for a in t.args:
            out |= free_vars(a)
        return out

    return _memo(t, "_fv", compute)


def free_var_names(t: Term) -> set:
    return {v.name for v in free_vars(t)}


def bound_vars(t: Term) -> set:
    """Binder name hints occurring in ``t``."""
    if isinstance(t, Abs):
        return {t.hint} | bound_vars(t.body)
    if isinstance(t, App):
        return bound_vars(t.fun) | bound_vars(t.arg)
    if isinstance(t, Fun):
        out = set()
        for a in t.args:
            out |= bound_vars(a)
        return out
    return set()


def alpha_eq(s: Term, t: Term) -> bool:
    return s == t


def size(t: Term) -> int:
    if isinstance(t, (Var, BVar)):
        return 1
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    if isinstance(t, Abs):
        return 1 + size(t.body)
    return 1 + sum(size(a) for a in t.args)


def is_first_order(t: Term) -> bool:
    if isinstance(t, Var):
        return True
    if isinstance(t, Fun):
        return all(is_first_order(a) for a in t.args)
    return False


def spine(t: Term) -> tuple:
    """Full left-flattening: ``@(@(u, a), b)`` gives ``(u, [a, b])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def flattenings(t: App) -> list:
    """All partial left-flattenings ``(head, args)`` of an application,
    longest first."""
    head, args = spine(t)
    out = []
    for k in range(len(args), 0, -1):
        out.append((app(head, *args[: len(args) - k]), args[len(args) - k:]))
    return out


# ---------------------------------------------------------------- typing

Environment = Mapping[str, Type]


def typecheck(env: Environment, t: Term) -> Type:
    return _check(env, t, ())


def _check(env, t, ctx):
    if isinstance(t, Var):
        declared = env.get(t.name)
        if declared is None:
            if t.ty is None:
                raise UnboundVariable(f"unbound variable {t.name}")
            return t.ty
        if t.ty is not None and t.ty != declared:
            raise TypeMismatch(
                f"{t.name} is annotated {show_type(t.ty)} but declared {show_type(declared)}"
            )
        return declared
    if isinstance(t, BVar):
        if t.index >= len(ctx):
            raise UnboundVariable(f"loose bound index {t.index}")
        ty = ctx[len(ctx) - 1 - t.index]
        if t.ty is not None and t.ty != ty:
            raise TypeMismatch(f"bound occurrence typed {show_type(t.ty)}, binder {show_type(ty)}")
        return ty
    if isinstance(t, Fun):
        decl = t.sym.decl
        if len(t.args) != decl.arity:
            raise ArityMismatch(f"{t.sym.name} expects {decl.arity} arguments, got {len(t.args)}")
        for i, (a, want) in enumerate(zip(t.args, decl.arg_types), 1):
            got = _check(env, a, ctx)
            if got != want:
                raise ArityMismatch(
                    f"argument {i} of {t.sym.name} has type {show_type(got)}, expected {show_type(want)}"
                )
        return decl.result
    if isinstance(t, Abs):
        return Arrow(t.ty, _check(env, t.body, ctx + (t.ty,)))
    ft = _check(env, t.fun, ctx)
    if not isinstance(ft, Arrow):
        raise NonArrowApplied(f"{show(t.fun)} of basic type {show_type(ft)} is applied")
    at = _check(env, t.arg, ctx)
    if at != ft.dom:
        raise DomainMismatch(
            f"{show(t.fun)} expects {show_type(ft.dom)}, argument has {show_type(at)}"
        )
    return ft.cod


def annotate(env: Environment, t: Term) -> Term:
    """Typecheck ``t`` and return it with every variable carrying its type."""
    typecheck(env, t)
    return _annotate(env, t, ())


def _annotate(env, t, ctx):
    if isinstance(t, Var):
        return Var(t.name, env.get(t.name, t.ty))
    if isinstance(t, BVar):
        return BVar(t.index, ctx[len(ctx) - 1 - t.index])
    if isinstance(t, Fun):
        return Fun(t.sym, tuple(_annotate(env, a, ctx) for a in t.args))
    if isinstance(t, Abs):
        return Abs(t.ty, _annotate(env, t.body, ctx + (t.ty,)), t.hint)
    return App(_annotate(env, t.fun, ctx), _annotate(env, t.arg, ctx))


# ---------------------------------------------------------- substitution

Substitution = Mapping[Union[str, Var], Term]


def substitute(t: Term, gamma: Substitution) -> Term:
    """Simultaneous capture-avoiding substitution of free variables."""
    by_name = {}
    for k, v in gamma.items():
        name = k.name if isinstance(k, Var) else k
        by_name[name] = v
    if not by_name:
        return t
    for v in free_vars(t):
        if v.name in by_name and v.ty is not None:
            rt = by_name[v.name].type
            if rt != v.ty:
                raise TypeMismatch(
                    f"{v.name} : {show_type(v.ty)} cannot be replaced by a term of type {show_type(rt)}"
                )

    def on_var(v, depth):
        return by_name.get(v.name, v)

    return _map_bvars(t, 0, lambda b, d: b, on_var)


# ------------------------------------------------------------- positions


def _children(t: Term, avoid) -> list:
    if isinstance(t, Fun):
        return list(t.args)
    if isinstance(t, App):
        return [t.fun, t.arg]
    if isinstance(t, Abs):
        return [unbind(t, avoid)[1]]
    return []


def subterm_at(t: Term, p: Sequence[int]) -> Term:
    avoid = free_var_names(t)
    cur = t
    for i in p:
        kids = _children(cur, avoid)
        if not 1 <= i <= len(kids):
            raise InvalidPosition(f"position {list(p)} is not in {show(t)}")
        cur = kids[i - 1]
    return cur


def replace_at(t: Term, p: Sequence[int], u: Term) -> Term:
    old = subterm_at(t, p)
    if old.type != u.type:
        raise TypeMismatch(f"cannot put {show_type(u.type)} where {show_type(old.type)} was")
    return _replace(t, tuple(p), u, free_var_names(t))


def _replace(t, p, u, avoid):
    if not p:
        return u
    i, rest = p[0], p[1:]
    if isinstance(t, Fun):
        args = list(t.args)
        args[i - 1] = _replace(args[i - 1], rest, u, avoid)
        return Fun(t.sym, tuple(args))
    if isinstance(t, App):
        if i == 1:
            return App(_replace(t.fun, rest, u, avoid), t.arg)
        return App(t.fun, _replace(t.arg, rest, u, avoid))
    x, body = unbind(t, avoid)
    return Abs(t.ty, close(_replace(body, rest, u, avoid), x), t.hint)


def positions(t: Term) -> list:
    out = [()]
    for i, c in enumerate(_children(t, free_var_names(t)), 1):
        out.extend((i,) + q for q in positions(c))
    return out


def subterms(t: Term, avoid: Iterable[str] = ()) -> Iterator[Term]:
    """All subterms (``t`` included); binders are opened with fresh names."""
    avoid = set(avoid) | free_var_names(t)
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(_children(cur, avoid)))


def strict_subterms(t: Term, avoid: Iterable[str] = ()) -> set:
    it = subterms(t, avoid)
    next(it)
    return set(it)


def immediate_subterms(t: Term, avoid: Iterable[str] = ()) -> list:
    return _children(t, set(avoid) | free_var_names(t))


# ------------------------------------------------------------- reduction

BETA, ETA, BETAETA = "beta", "eta", "betaEta"


def is_beta_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Abs)


def is_eta_redex(t: Term) -> bool:
    return (
        isinstance(t, Abs)
        and isinstance(t.body, App)
        and t.body.arg == BVar(0, t.ty)
        and not has_loose(t.body.fun, 0)
    )


def contract_beta(t: App) -> Term:
    return instantiate(t.fun.body, t.arg)


def contract_eta(t: Abs) -> Term:
    return lower(t.body.fun)


def reduce_step(t: Term, mode: str = BETAETA) -> list:
    """All one-step reducts ``(position, reduct)`` of ``t``."""
    if mode not in (BETA, ETA, BETAETA):
        raise ValueError(f"unknown reduction mode {mode!r}")
    out = []
    _reducts(t, (), mode, out, free_var_names(t))
    return out


def _reducts(t, pos, mode, out, avoid):
    if mode != ETA and is_beta_redex(t):
        out.append((pos, contract_beta(t)))
    if mode != BETA and is_eta_redex(t):
        out.append((pos, contract_eta(t)))
    if isinstance(t, Fun):
        for i, a in enumerate(t.args):
            sub = []
            _reducts(a, pos + (i + 1,), mode, sub, avoid)
            for p, r in sub:
                out.append((p, Fun(t.sym, t.args[:i] + (r,) + t.args[i + 1:])))
    elif isinstance(t, App):
        sub = []
        _reducts(t.fun, pos + (1,), mode, sub, avoid)
        out.extend((p, App(r, t.arg)) for p, r in sub)
        sub = []
        _reducts(t.arg, pos + (2,), mode, sub, avoid)
        out.extend((p, App(t.fun, r)) for p, r in sub)
    elif isinstance(t, Abs):
        x, body = unbind(t, avoid)
        sub = []
        _reducts(body, pos + (1,), mode, sub, avoid | {x.name})
        out.extend((p, Abs(t.ty, close(r, x), t.hint)) for p, r in sub)


def normal_forms(t: Term, mode: str = BETAETA, bound: int = 10_000) -> Term:
    """Leftmost-outermost normal form (bounded)."""
    for _ in range(bound):
        steps = reduce_step(t, mode)
        if not steps:
            return t
        t = min(steps, key=lambda s: s[0])[1]
    raise RuntimeError("normalisation bound exceeded")


# ------------------------------------------------------------- printing


def show(t: Term, _avoid: Optional[set] = None) -> str:
    avoid = set(free_var_names(t)) if _avoid is None else _avoid
    return _show(t, avoid, [])


def _show(t, avoid, names):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, BVar):
        i = len(names) - 1 - t.index
        return names[i] if i >= 0 else f"#{t.index}"
    if isinstance(t, Fun):
        if not t.args:
            return t.sym.name
        return f"{t.sym.name}({', '.join(_show(a, avoid, names) for a in t.args)})"
    if isinstance(t, Abs):
        name = fresh_name(t.hint, avoid | set(names))
        body = _show(t.body, avoid, names + [name])
        return f"\\{name}:{show_type(t.ty)}. {body}"
    head, args = spine(t)
    parts = [_show_atom(head, avoid, names)]
    parts.extend(_show_atom(a, avoid, names) for a in args)
    return " ".join(parts)


def _show_atom(t, avoid, names):
    s = _show(t, avoid, names)
    if isinstance(t, (App, Abs)):
        return f"({s})"
    return s
