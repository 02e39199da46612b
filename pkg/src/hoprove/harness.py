"""Exhaustive term enumeration and empirical property checks.

Terms are enumerated in locally nameless form, so each alpha class shows up
exactly once.  Size is the node count, binders included.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

import networkx as nx
import numpy as np

from .core import (
    BETA,
    Abs,
    App,
    Arrow,
    BVar,
    Fun,
    Term,
    Var,
    free_vars,
    is_beta_redex,
    is_eta_redex,
    positions,
    reduce_step,
    replace_at,
    size,
    subterm_at,
    substitute,
)
from .errors import NotFirstOrder
from .orders import LEX, Cmp, Signature, prec_compare
from .system import rewrite_step

DEFAULT_SEED = 20240601
_HINTS = "xyzwuv"


@dataclass
class EnumSpec:
    sig: Signature
    env: dict = field(default_factory=dict)  # seed variables: name -> type
    max_size: int = 3
    binder_types: tuple = ()  # types a lambda may bind; empty means no lambdas
    type_filter: Optional[object] = None
    applications: bool = True


@dataclass
class PropertyReport:
    name: str
    instances: int = 0
    counterexamples: list = field(default_factory=list)
    elapsed: float = 0.0
    seed: Optional[int] = None
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def summary(self) -> str:
        state = "ok" if self.ok else f"{len(self.counterexamples)} counterexample(s)"
        seed = f", seed {self.seed}" if self.seed is not None else ""
        return f"{self.name}: {self.instances} instances, {state} ({self.elapsed:.2f}s{seed})"


# ------------------------------------------------------------------ enumeration


class _Enumerator:
    def __init__(self, spec: EnumSpec):
        self.spec = spec
        self.vars = [Var(n, ty) for n, ty in spec.env.items()]
        self.consts = [f for f in spec.sig.symbols.values() if f.arity == 0]
        self.funs = [f for f in spec.sig.symbols.values() if f.arity > 0]
        self.gen = lru_cache(maxsize=None)(self._gen)

    def _gen(self, n: int, ctx: tuple) -> dict:
        """Terms of exactly size ``n`` under binder types ``ctx``, by type."""
        out = {}

        def add(t, ty):
            out.setdefault(ty, []).append(t)

        if n == 1:
            for v in self.vars:
                add(v, v.ty)
            for i in range(len(ctx)):
                ty = ctx[len(ctx) - 1 - i]
                add(BVar(i, ty), ty)
            for f in self.consts:
                add(Fun(f, ()), f.decl.result)
            return out
        for f in self.funs:
            k = f.arity
            for parts in _compositions(n - 1, k):
                pools = [self.gen(m, ctx).get(ty, []) for m, ty in zip(parts, f.decl.arg_types)]
                for args in itertools.product(*pools):
                    add(Fun(f, tuple(args)), f.decl.result)
        if self.spec.applications:
            for a in range(1, n - 1):
                heads = self.gen(a, ctx)
                args = self.gen(n - 1 - a, ctx)
                for ty, hs in heads.items():
                    if isinstance(ty, Arrow) and ty.dom in args:
                        for h in hs:
                            for u in args[ty.dom]:
                                add(App(h, u), ty.cod)
        for bt in self.spec.binder_types:
            inner = ctx + (bt,)
            for ty, bodies in self.gen(n - 1, inner).items():
                hint = _HINTS[len(ctx) % len(_HINTS)]
                for b in bodies:
                    add(Abs(bt, b, hint), Arrow(bt, ty))
        return out


def _compositions(n: int, k: int):
    if k == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def enumerate_terms(spec: EnumSpec) -> Iterator[Term]:
    """Every well-typed closed-over-``env`` term up to ``spec.max_size``, once each."""
    en = _Enumerator(spec)
    for n in range(1, spec.max_size + 1):
        for ty, ts in en.gen(n, ()).items():
            if spec.type_filter is None or ty == spec.type_filter:
                yield from ts


# ------------------------------------------------------------------ order axioms


def comparison_matrix(gt: Callable, terms: Sequence[Term]) -> np.ndarray:
    n = len(terms)
    m = np.zeros((n, n), dtype=bool)
    for i, s in enumerate(terms):
        for j, t in enumerate(terms):
            m[i, j] = bool(gt(s, t))
    return m


def check_order_axioms(name: str, gt: Callable, terms: Sequence[Term],
                       axioms=("irreflexive", "transitive", "acyclic"),
                       matrix: Optional[np.ndarray] = None) -> PropertyReport:
    t0 = time.perf_counter()
    terms = list(terms)
    m = comparison_matrix(gt, terms) if matrix is None else matrix
    rep = PropertyReport(f"{name}: {', '.join(axioms)}", instances=len(terms))
    if "irreflexive" in axioms:
        for i in np.flatnonzero(np.diag(m)):
            rep.counterexamples.append(("irreflexive", terms[i]))
    if "transitive" in axioms:
        for i, k in zip(*np.nonzero((m.astype(np.int64) @ m.astype(np.int64) > 0) & ~m)):
            j = int(np.flatnonzero(m[i] & m[:, k])[0])
            rep.counterexamples.append(("transitive", terms[i], terms[j], terms[k]))
    if "acyclic" in axioms:
        cyc = find_cycle(m)
        if cyc:
            rep.counterexamples.append(("acyclic", [terms[i] for i in cyc]))
    rep.elapsed = time.perf_counter() - t0
    return rep


def find_cycle(m: np.ndarray) -> Optional[list]:
    g = nx.from_numpy_array(m.astype(np.int8), create_using=nx.DiGraph)
    try:
        return [u for u, _ in nx.find_cycle(g)]
    except nx.NetworkXNoCycle:
        return None


def nontransitivity_witness(gt: Callable, terms: Sequence[Term],
                            matrix: Optional[np.ndarray] = None) -> Optional[tuple]:
    """A triple ``(s, u, t)`` with ``s > u > t`` but not ``s > t``, if one exists
    among ``terms`` with the two comparisons typed compatibly."""
    terms = list(terms)
    m = comparison_matrix(gt, terms) if matrix is None else matrix
    bad = (m.astype(np.int64) @ m.astype(np.int64) > 0) & ~m
    np.fill_diagonal(bad, False)
    for i, k in zip(*np.nonzero(bad)):
        j = int(np.flatnonzero(m[i] & m[:, k])[0])
        return terms[i], terms[j], terms[k]
    return None


# ------------------------------------------------------------------ stability / monotonicity


def check_stability_monotonicity(name: str, gt: Callable, terms: Sequence[Term], samples: int = 200,
                                 seed: int = DEFAULT_SEED, max_pairs: int = 2000) -> PropertyReport:
    """Re-check sampled oriented pairs under substitutions and in contexts."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    terms = list(terms)
    by_type = {}
    for t in terms:
        by_type.setdefault(t.type, []).append(t)
    pairs = []
    for s, t in itertools.product(terms, terms):
        if gt(s, t):
            pairs.append((s, t))
            if len(pairs) >= max_pairs:
                break
    rep = PropertyReport(f"{name}: stability and monotonicity", seed=seed)
    if not pairs:
        rep.elapsed = time.perf_counter() - t0
        return rep
    for _ in range(samples):
        s, t = rng.choice(pairs)
        gamma = {}
        for v in sorted(free_vars(s) | free_vars(t), key=lambda v: v.name):
            pool = by_type.get(v.ty)
            if pool:
                gamma[v] = rng.choice(pool)
        if gamma:
            rep.instances += 1
            if not gt(substitute(s, gamma), substitute(t, gamma)):
                rep.counterexamples.append(("stability", s, t, gamma))
        if s.type != t.type:
            continue
        ctx = rng.choice(terms)
        spots = [p for p in positions(ctx) if subterm_at(ctx, p).type == s.type]
        if not spots:
            continue
        p = rng.choice(spots)
        hole = subterm_at(ctx, p)
        if any(v not in free_vars(ctx) for v in free_vars(hole)):
            continue  # position under a binder whose variable the hole mentions
        rep.instances += 1
        if not gt(replace_at(ctx, p, s), replace_at(ctx, p, t)):
            rep.counterexamples.append(("monotonicity", s, t, ctx, p))
    rep.elapsed = time.perf_counter() - t0
    return rep


# ------------------------------------------------------------------ reduction


@dataclass
class Terminated:
    max_length: int


@dataclass
class BoundHit:
    chain: list


def reduction_steps(t: Term, rules=(), mode: Optional[str] = BETA) -> list:
    out = [r for _, r in rewrite_step(rules, t)] if rules else []
    if mode is not None:
        out += [r for _, r in reduce_step(t, mode)]
    return out


def explore_reduction(start: Term, rules=(), mode: Optional[str] = BETA, step_bound: int = 50):
    """Longest reduction chain from ``start``, or a chain that reaches the bound."""
    longest = {}

    def go(t, depth, chain):
        if t in longest:
            return longest[t]
        if depth >= step_bound:
            raise _Hit(chain)
        best = 0
        for u in reduction_steps(t, rules, mode):
            best = max(best, 1 + go(u, depth + 1, chain + [u]))
        longest[t] = best
        return best

    try:
        return Terminated(go(start, 0, [start]))
    except _Hit as h:
        return BoundHit(h.chain)


class _Hit(Exception):
    def __init__(self, chain):
        self.chain = chain


# ------------------------------------------------------------------ oracle


def oracle_rpo(sig: Signature, s: Term, t: Term) -> bool:
    """Memo-free transcription of the recursive path ordering, for differential testing."""
    for u in (s, t):
        if not _first_order(u):
            raise NotFirstOrder(f"{u} is not first order")
    return _rpo(sig, s, t)


def _first_order(t) -> bool:
    return isinstance(t, Var) or (isinstance(t, Fun) and all(_first_order(a) for a in t.args))


def _rpo(sig, s, t) -> bool:
    if not isinstance(s, Fun):
        return False
    if any(u == t or _rpo(sig, u, t) for u in s.args):
        return True
    if not isinstance(t, Fun):
        return False
    c = prec_compare(sig, s.name, t.name)
    dominated = all(_rpo(sig, s, v) for v in t.args)
    if c is Cmp.GREATER:
        return dominated
    if c is not Cmp.EQUIV:
        return False
    if sig.stat(s.name) == LEX:
        if len(s.args) != len(t.args):
            return False
        for a, b in zip(s.args, t.args):
            if a != b:
                return _rpo(sig, a, b) and dominated
        return False
    return _mul_gt(sig, list(s.args), list(t.args))


def _mul_gt(sig, xs, ys) -> bool:
    # X >mul Y iff X != Y and every element of Y - X is beaten by some element of X - Y
    xs, ys = list(xs), list(ys)
    for y in list(ys):
        if y in xs:
            xs.remove(y)
            ys.remove(y)
    if not xs:
        return False
    return all(any(_rpo(sig, x, y) for x in xs) for y in ys)


# ------------------------------------------------------------------ redexes


def beta_redexes(terms) -> list:
    return [t for t in terms if is_beta_redex(t)]


def eta_redexes(terms) -> list:
    return [t for t in terms if is_eta_redex(t)]


__all__ = [
    "BoundHit",
    "EnumSpec",
    "PropertyReport",
    "Terminated",
    "beta_redexes",
    "check_order_axioms",
    "check_stability_monotonicity",
    "comparison_matrix",
    "enumerate_terms",
    "eta_redexes",
    "explore_reduction",
    "find_cycle",
    "nontransitivity_witness",
    "oracle_rpo",
    "size",
]
