"""Precedences, statuses, lexicographic/multiset extensions and the type ordering."""
from __future__ import annotations

import enum
import itertools
import operator
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import networkx as nx

from .core import Arrow, FunctionSymbol, Sort, SortSymbol, Type, show_type
from .errors import LengthMismatch, UndeclaredSymbol

MUL, LEX = "mul", "lex"


class Cmp(enum.Enum):
    GREATER = "greater"
    EQUIV = "equiv"
    LESS = "less"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


class Precedence:
    """A quasi-order given by strict edges ``f > g`` and equivalences ``f = g``.

    Used both for function symbols and for sorts.  Comparisons answer with
    respect to the transitive closure of the declared edges.
    """

    def __init__(self, strict: Iterable[tuple] = (), equiv: Iterable[tuple] = ()):
        self.strict = frozenset((a, b) for a, b in strict)
        self.equiv = frozenset(frozenset(p) for p in equiv)
        self._parent = {}
        for pair in self.equiv:
            a, *rest = sorted(pair)
            for b in rest:
                self._union(a, b)
        self._succ = {}
        for a, b in self.strict:
            self._succ.setdefault(self.rep(a), set()).add(self.rep(b))
        self._reach = {}

    def _find(self, a):
        while self._parent.get(a, a) != a:
            a = self._parent[a]
        return a

    def _union(self, a, b):
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            self._parent[hi] = lo

    def rep(self, a):
        return self._find(a)

    def names(self) -> set:
        out = set()
        for a, b in self.strict:
            out |= {a, b}
        for p in self.equiv:
            out |= p
        return out

    def classes(self) -> dict:
        out = {}
        for n in self.names():
            out.setdefault(self.rep(n), set()).add(n)
        return out

    def _reachable(self, r) -> frozenset:
        if r not in self._reach:
            seen, stack = set(), list(self._succ.get(r, ()))
            while stack:
                c = stack.pop()
                if c in seen:
                    continue
                seen.add(c)
                stack.extend(self._succ.get(c, ()))
            self._reach[r] = frozenset(seen)
        return self._reach[r]

    def greater(self, a, b) -> bool:
        return self.rep(b) in self._reachable(self.rep(a))

    def equivalent(self, a, b) -> bool:
        return self.rep(a) == self.rep(b)

    def compare(self, a, b) -> Cmp:
        if self.equivalent(a, b):
            return Cmp.EQUIV
        if self.greater(a, b):
            return Cmp.GREATER
        if self.greater(b, a):
            return Cmp.LESS
        return Cmp.INCOMPARABLE

    def cycles(self) -> list:
        g = nx.DiGraph()
        for a, b in self.strict:
            g.add_edge(self.rep(a), self.rep(b))
        return [c for c in nx.simple_cycles(g)]


@dataclass
class Signature:
    """Symbols, precedence, statuses and sort precedence of one input system."""

    sorts: dict = field(default_factory=dict)
    symbols: dict = field(default_factory=dict)
    precedence: Precedence = field(default_factory=Precedence)
    status: dict = field(default_factory=dict)
    sort_prec: Precedence = field(default_factory=Precedence)

    def symbol(self, name: str) -> FunctionSymbol:
        try:
            return self.symbols[name]
        except KeyError:
            raise UndeclaredSymbol(f"function symbol {name!r} is not declared") from None

    def stat(self, f) -> str:
        name = f.name if isinstance(f, FunctionSymbol) else f
        self.symbol(name)
        return self.status.get(name, MUL)

    def prec_greater(self, f: str, g: str) -> bool:
        return prec_compare(self, f, g) is Cmp.GREATER

    def prec_equiv(self, f: str, g: str) -> bool:
        return prec_compare(self, f, g) is Cmp.EQUIV

    def is_first_order(self) -> bool:
        return all(s.decl.is_first_order() for s in self.symbols.values())


def prec_compare(sig: Signature, f: str, g: str) -> Cmp:
    sig.symbol(f)
    sig.symbol(g)
    if f == g:
        return Cmp.EQUIV
    return sig.precedence.compare(f, g)


def validate_precedence(sig: Signature) -> list:
    out = []
    for name in sorted(sig.precedence.names() | set(sig.status)):
        if name not in sig.symbols:
            out.append(Violation("undeclared", f"{name} appears in precedence/status but is not declared"))
    for cyc in sig.precedence.cycles():
        out.append(Violation("cycle", " > ".join(cyc + cyc[:1])))
    for a, b in sorted(sig.precedence.strict):
        if sig.precedence.equivalent(a, b):
            out.append(Violation("cycle", f"{a} > {b} but {a} = {b}"))
    for members in sig.precedence.classes().values():
        members = sorted(m for m in members if m in sig.symbols)
        for a, b in zip(members, members[1:]):
            if sig.symbols[a].arity != sig.symbols[b].arity:
                out.append(Violation("arity", f"{a} = {b} with arities "
                                              f"{sig.symbols[a].arity} and {sig.symbols[b].arity}"))
            if sig.stat(a) != sig.stat(b):
                out.append(Violation("status", f"{a} = {b} with statuses {sig.stat(a)} and {sig.stat(b)}"))
    for name in sig.status:
        if sig.status[name] not in (MUL, LEX):
            out.append(Violation("status", f"{name} has unknown status {sig.status[name]!r}"))
    for cyc in sig.sort_prec.cycles():
        out.append(Violation("sort-cycle", " > ".join(cyc + cyc[:1])))
    for members in sig.sort_prec.classes().values():
        arities = {sig.sorts[m].arity for m in members if m in sig.sorts}
        if len(arities) > 1:
            out.append(Violation("sort-arity", f"equivalent sorts {sorted(members)} differ in arity"))
    return out


# ---------------------------------------------------------------- extensions


def lex_witness(rel: Callable, xs: Sequence, ys: Sequence, eq: Callable = operator.eq):
    """Return ``(i, w)`` where ``xs[:i] == ys[:i]`` and ``w = rel(xs[i], ys[i])``."""
    if len(xs) != len(ys):
        raise LengthMismatch(f"lexicographic comparison of lengths {len(xs)} and {len(ys)}")
    for i, (x, y) in enumerate(zip(xs, ys)):
        if eq(x, y):
            continue
        w = rel(x, y)
        return (i, w) if w else None
    return None


def lex_ext(rel: Callable, xs: Sequence, ys: Sequence, eq: Callable = operator.eq) -> bool:
    return lex_witness(rel, xs, ys, eq) is not None


@dataclass
class MulWitness:
    """``ys[j]`` for ``(i, j)`` in ``eq_pairs`` cancels against ``xs[i]``; every
    other ``ys[j]`` is dominated by ``xs[i]`` for ``(i, j, w)`` in ``gt_pairs``."""

    eq_pairs: list
    gt_pairs: list


def mul_witness(rel: Callable, xs: Sequence, ys: Sequence, eq: Callable = operator.eq) -> Optional[MulWitness]:
    """One-shot multiset extension: some nonempty ``X`` of ``xs`` is removed and
    replaced by ``Y`` with every ``y`` in ``Y`` below some ``x`` in ``X``."""
    xs, ys = list(xs), list(ys)
    cache = {}

    def r(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = rel(xs[i], ys[j])
        return cache[(i, j)]

    eqs = [[i for i in range(len(xs)) if eq(xs[i], y)] for y in ys]

    def search(j, used, matched):
        if j == len(ys):
            removed = [i for i in range(len(xs)) if i not in used]
            if not removed:
                return None
            gts = []
            for jj in range(len(ys)):
                if jj in matched:
                    continue
                for i in removed:
                    w = r(i, jj)
                    if w:
                        gts.append((i, jj, w))
                        break
                else:
                    return None
            return MulWitness(sorted((i, jj) for jj, i in matched.items()), gts)
        for i in eqs[j]:
            if i not in used:
                found = search(j + 1, used | {i}, {**matched, j: i})
                if found:
                    return found
        return search(j + 1, used, matched)

    return search(0, frozenset(), {})


def mul_ext(rel: Callable, xs: Sequence, ys: Sequence, eq: Callable = operator.eq) -> bool:
    return mul_witness(rel, xs, ys, eq) is not None


def ext_witness(status: str, rel, xs, ys, eq=operator.eq):
    if status == LEX:
        return lex_witness(rel, xs, ys, eq)
    return mul_witness(rel, xs, ys, eq)


# ---------------------------------------------------------------- type order
#
# RPO on type trees.  Sorts are compared by the sort precedence with
# multiset status.  The arrow is a binary constructor whose subterm case
# only looks at the codomain; two arrows compare only with equal domains.


def type_eq(sig: Signature, a: Type, b: Type) -> bool:
    if isinstance(a, Arrow):
        return isinstance(b, Arrow) and type_eq(sig, a.dom, b.dom) and type_eq(sig, a.cod, b.cod)
    if not isinstance(b, Sort):
        return False
    if not (a.name == b.name or sig.sort_prec.equivalent(a.name, b.name)):
        return False
    return len(a.args) == len(b.args) and all(type_eq(sig, x, y) for x, y in zip(a.args, b.args))


def type_gt(sig: Signature, a: Type, b: Type) -> bool:
    if isinstance(a, Arrow):
        if type_ge(sig, a.cod, b):
            return True
        return isinstance(b, Arrow) and type_eq(sig, a.dom, b.dom) and type_gt(sig, a.cod, b.cod)
    if any(type_ge(sig, x, b) for x in a.args):
        return True
    if not isinstance(b, Sort):
        return False
    if a.name != b.name and sig.sort_prec.greater(a.name, b.name):
        return all(type_gt(sig, a, y) for y in b.args)
    if a.name == b.name or sig.sort_prec.equivalent(a.name, b.name):
        return mul_ext(lambda x, y: type_gt(sig, x, y), a.args, b.args,
                       lambda x, y: type_eq(sig, x, y))
    return False


def type_ge(sig: Signature, a: Type, b: Type) -> bool:
    return type_eq(sig, a, b) or type_gt(sig, a, b)


def enumerate_types(sorts: Iterable[SortSymbol], depth: int) -> list:
    """All types of depth at most ``depth`` (a 0-ary sort has depth 1)."""
    sorts = list(sorts)
    levels = [[]]  # levels[d]: types of depth <= d
    for d in range(1, depth + 1):
        prev = levels[-1]
        cur = []
        for s in sorts:
            for args in itertools.product(prev, repeat=s.arity):
                cur.append(Sort(s.name, tuple(args)))
        cur.extend(Arrow(x, y) for x in prev for y in prev)
        levels.append(cur)
    return levels[-1]


def validate_type_order(sig: Signature, depth_bound: int, *, gt=None, eq=None) -> list:
    """Check the four type-ordering axioms on every type up to ``depth_bound``.

    ``gt``/``eq`` override the ordering under test (defaults: the built-in
    instantiation for ``sig``).
    """
    gt = gt or (lambda a, b: type_gt(sig, a, b))
    eq = eq or (lambda a, b: type_eq(sig, a, b))

    def ge(a, b):
        return eq(a, b) or gt(a, b)

    types = enumerate_types(sig.sorts.values(), depth_bound)
    out = []
    for t in types:
        if not isinstance(t, Arrow):
            continue
        for a in types:
            rhs = isinstance(a, Arrow) and eq(a.dom, t.dom) and eq(t.cod, a.cod)
            if eq(t, a) != rhs:
                out.append(Violation("arrow-preservation",
                                     f"{show_type(t)} vs {show_type(a)}"))
            if gt(t, a) and not (ge(t.cod, a) or (isinstance(a, Arrow) and eq(a.dom, t.dom)
                                                  and gt(t.cod, a.cod))):
                out.append(Violation("arrow-decreasingness",
                                     f"{show_type(t)} > {show_type(a)}"))
    for t, s in itertools.product(types, repeat=2):
        if not ge(t, s):
            continue
        for a in types:
            if not ge(Arrow(a, t), Arrow(a, s)):
                out.append(Violation("arrow-monotonicity",
                                     f"codomain: {show_type(t)} >= {show_type(s)} but not "
                                     f"{show_type(Arrow(a, t))} >= {show_type(Arrow(a, s))}"))
            if not ge(Arrow(t, a), Arrow(s, a)):
                out.append(Violation("arrow-monotonicity",
                                     f"domain: {show_type(t)} >= {show_type(s)} but not "
                                     f"{show_type(Arrow(t, a))} >= {show_type(Arrow(s, a))}"))
    g = nx.DiGraph()
    g.add_nodes_from(range(len(types)))
    for i, j in itertools.product(range(len(types)), repeat=2):
        if gt(types[i], types[j]):
            g.add_edge(i, j)
    try:
        cyc = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        cyc = None
    if cyc:
        out.append(Violation("well-foundedness",
                             " > ".join(show_type(types[i]) for i, _ in cyc)))
    return out
