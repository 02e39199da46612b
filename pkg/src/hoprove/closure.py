"""Computability-closure membership and the general-schema check.

Membership is only semi-decidable, so the search is goal directed and
depth bounded.  Rules are tried in the order base, 1, 2, 4, 5, 3, 6.
Rules 1 and 6 work forward from the terms already known to be members
(the *frontier*): the arguments of the anchor, the variables of V, and
everything proven earlier in the same session.
"""
from __future__ import annotations

import time
from collections import deque
from typing import Optional

from .core import (
    Abs,
    App,
    BETA,
    Fun,
    Term,
    Var,
    flattenings,
    free_var_names,
    free_vars,
    fresh_name,
    immediate_subterms,
    instantiate,
    is_basic,
    reduce_step,
    subterms,
)
from .errors import BudgetExhausted, MalformedLhs
from .horpo import declared
from .orders import LEX, Cmp, Signature, ext_witness, prec_compare
from .proof import ACCEPTED, REJECTED, UNKNOWN, Proof, Verdict, mul_data

REL = "cc"
DEFAULT_BUDGET = 32
DEFAULT_BETA_STEPS = 8
ORDER = ("base-var", "base-arg", "1", "2", "4", "5", "3", "6")


def _bound(V) -> tuple:
    return tuple(sorted(V, key=lambda v: v.name))


def one_step(t: Term, avoid=()) -> list:
    """Successors of ``t`` under one beta step or one immediate-subterm step."""
    out = [("beta", r) for _, r in reduce_step(t, BETA)]
    out += [("subterm", u) for u in immediate_subterms(t, avoid)]
    return out


class Reach:
    """The relation ``(->beta u |>)+`` cut off after ``steps`` steps."""

    def __init__(self, steps: int, avoid=()):
        self.steps, self.avoid = steps, set(avoid)
        self.cache = {}
        self.truncated = False

    def __call__(self, a: Term, b: Term) -> bool:
        if a not in self.cache:
            seen, frontier = set(), [a]
            for _ in range(self.steps):
                nxt = []
                for u in frontier:
                    for _, v in one_step(u, self.avoid):
                        if v not in seen:
                            seen.add(v)
                            nxt.append(v)
                frontier = nxt
                if not frontier:
                    break
            self.cache[a] = (seen, bool(frontier))
        seen, open_ = self.cache[a]
        if b in seen:
            return True
        if open_:
            self.truncated = True
        return False


class ClosureSearch:
    """One membership session for a fixed anchor ``f(t1, ..., tn)``."""

    def __init__(self, sig: Signature, anchor: Term, budget: int = DEFAULT_BUDGET,
                 beta_steps: int = DEFAULT_BETA_STEPS):
        if not isinstance(anchor, Fun):
            raise MalformedLhs(f"{anchor} is not headed by a function symbol")
        declared(sig, anchor)
        self.sig, self.anchor = sig, anchor
        self.budget, self.beta_steps = budget, beta_steps
        self.avoid = free_var_names(anchor)
        self.reach = Reach(beta_steps, self.avoid)
        self.hit = False
        self.proven = {}  # (candidate, V) -> proof
        self.frontier = []  # (V, term, proof) in discovery order
        for i, a in enumerate(anchor.args):
            self._learn(frozenset(), a, self._node("base-arg", a, frozenset(), data={"arg": i}))

    def _node(self, case, c, V, subs=(), data=None):
        return Proof(REL, case, self.anchor, c, list(subs), data or {}, _bound(V))

    def _learn(self, V, c, p):
        if (c, V) not in self.proven:
            self.proven[(c, V)] = p
            self.frontier.append((V, c, p))
        return p

    def members(self, V):
        return [(c, p) for W, c, p in self.frontier if W <= V]

    def prove(self, c: Term, V=frozenset()) -> Optional[Proof]:
        """A membership proof for ``c`` in CC(anchor, V), or None.

        A branch that runs past the depth budget sets ``self.hit``.
        """
        V = frozenset(V)
        if V & free_vars(self.anchor):
            raise ValueError("V must be disjoint from the anchor's variables")
        try:
            return self._prove(c, V, 0)
        except BudgetExhausted:
            self.hit = True
            return None

    def _prove(self, c, V, depth):
        if (c, V) in self.proven:
            return self.proven[(c, V)]
        if depth > self.budget:
            raise BudgetExhausted(f"closure search deeper than {self.budget}")
        for rule in ORDER:
            try:
                p = getattr(self, "_r" + rule.replace("-", "_"))(c, V, depth)
            except BudgetExhausted:
                self.hit = True
                p = None
            if p is not None:
                return self._learn(V, c, p)
        return None

    def _all(self, cs, V, depth):
        out = []
        for c in cs:
            p = self._prove(c, V, depth + 1)
            if p is None:
                return None
            out.append(p)
        return out

    # -- rules -----------------------------------------------------------

    def _rbase_var(self, c, V, depth):
        if isinstance(c, Var) and c in V:
            return self._node("base-var", c, V)

    def _rbase_arg(self, c, V, depth):
        if c in self.anchor.args:
            return self._node("base-arg", c, V, data={"arg": self.anchor.args.index(c)})

    def _r1(self, c, V, depth):
        if not is_basic(c.type) or not free_vars(c) <= free_vars(self.anchor):
            return None
        for m, p in self.members(V):
            if m != c and c in set(subterms(m, self.avoid)):
                return self._node("1", c, V, [p])

    def _r2(self, c, V, depth):
        if isinstance(c, Fun) and prec_compare(self.sig, self.anchor.name, c.name) is Cmp.GREATER:
            subs = self._all(c.args, V, depth)
            if subs is not None:
                return self._node("2", c, V, subs)

    def _r4(self, c, V, depth):
        if isinstance(c, App):
            for head, args in flattenings(c):
                subs = self._all([head] + args, V, depth)
                if subs is not None:
                    return self._node("4", c, V, subs, {"split": len(args)})

    def _r5(self, c, V, depth):
        if isinstance(c, Abs):
            avoid = self.avoid | {v.name for v in V} | free_var_names(c)
            x = Var(fresh_name(c.hint, avoid), c.ty)
            p = self._prove(instantiate(c.body, x), V | {x}, depth + 1)
            if p is not None:
                return self._node("5", c, V, [p], {"var": x})

    def _r3(self, c, V, depth):
        f = self.anchor
        if not isinstance(c, Fun) or prec_compare(self.sig, f.name, c.name) is not Cmp.EQUIV:
            return None
        stat = self.sig.stat(f.name)
        if stat == LEX and len(f.args) != len(c.args):
            return None
        w = ext_witness(stat, self.reach, f.args, c.args)
        if not w:
            return None
        subs = self._all(c.args, V, depth)
        if subs is None:
            return None
        data = {"status": LEX, "index": w[0]} if stat == LEX else {**mul_data(w), "status": stat}
        data["beta_steps"] = self.beta_steps
        return self._node("3", c, V, subs, data)

    def _r6(self, c, V, depth):
        # forward breadth-first saturation of the usable frontier
        seen = {m for m, _ in self.members(V)}
        queue = deque((m, p, 0) for m, p in self.members(V))
        while queue:
            m, p, d = queue.popleft()
            if d >= self.beta_steps:
                self.hit = True
                continue
            for how, v in one_step(m, self.avoid):
                if v in seen:
                    continue
                seen.add(v)
                node = self._node("6", v, V, [p], {"step": how})
                if v == c:
                    return node
                queue.append((v, node, d + 1))


def in_closure(sig: Signature, anchor: Term, candidate: Term, V=frozenset(),
               budget: int = DEFAULT_BUDGET, beta_steps: int = DEFAULT_BETA_STEPS,
               session: Optional[ClosureSearch] = None):
    """``(proof, budget_hit)`` for ``candidate`` in CC(anchor, V)."""
    search = session or ClosureSearch(sig, anchor, budget, beta_steps)
    declared(sig, candidate)
    p = search.prove(candidate, V)
    return p, search.hit


def check_rule(sig: Signature, rule, budget: int = DEFAULT_BUDGET,
               beta_steps: int = DEFAULT_BETA_STEPS) -> Verdict:
    t0 = time.perf_counter()
    p, hit = in_closure(sig, rule.lhs, rule.rhs, budget=budget, beta_steps=beta_steps)
    status = ACCEPTED if p else (UNKNOWN if hit else REJECTED)
    notes = ["search budget exhausted on some branch"] if hit and not p else []
    return Verdict(rule, status, p, notes, time.perf_counter() - t0)


def check_general_schema(sig: Signature, rules, budget: int = DEFAULT_BUDGET,
                         beta_steps: int = DEFAULT_BETA_STEPS) -> list:
    return [check_rule(sig, r, budget, beta_steps) for r in rules]


# ------------------------------------------------------------------ replay


def closure_check_proof(sig: Signature, proof: Proof) -> bool:
    try:
        return _check(sig, proof, proof.lhs)
    except Exception:
        return False


def _check(sig, p, anchor) -> bool:
    if p.rel != REL or p.lhs != anchor or not isinstance(anchor, Fun):
        return False
    c, V = p.rhs, frozenset(p.bound)
    avoid = free_var_names(anchor)
    if V & free_vars(anchor):
        return False

    def sub_ok(q, cand=None, bound=None):
        if bound is None:
            if not frozenset(q.bound) <= V:
                return False
        elif frozenset(q.bound) != bound:
            return False
        return (cand is None or q.rhs == cand) and _check(sig, q, anchor)

    def all_ok(cands):
        return len(p.subs) == len(cands) and all(sub_ok(q, x, V) for q, x in zip(p.subs, cands))

    if p.case == "base-var":
        return isinstance(c, Var) and c in V and not p.subs
    if p.case == "base-arg":
        i = p.data.get("arg")
        return isinstance(i, int) and 0 <= i < len(anchor.args) and anchor.args[i] == c and not p.subs
    if p.case == "1":
        if len(p.subs) != 1 or not is_basic(c.type) or not free_vars(c) <= free_vars(anchor):
            return False
        q = p.subs[0]
        return sub_ok(q) and c in set(subterms(q.rhs, avoid))
    if p.case == "2":
        return (isinstance(c, Fun) and prec_compare(sig, anchor.name, c.name) is Cmp.GREATER
                and all_ok(c.args))
    if p.case == "3":
        if not isinstance(c, Fun) or prec_compare(sig, anchor.name, c.name) is not Cmp.EQUIV:
            return False
        stat = sig.stat(anchor.name)
        if stat == LEX and len(anchor.args) != len(c.args):
            return False
        reach = Reach(int(p.data.get("beta_steps", DEFAULT_BETA_STEPS)), avoid)
        return bool(ext_witness(stat, reach, anchor.args, c.args)) and all_ok(c.args)
    if p.case == "4":
        if not isinstance(c, App):
            return False
        for head, args in flattenings(c):
            if len(args) == p.data.get("split"):
                return all_ok([head] + args)
        return False
    if p.case == "5":
        x = p.data.get("var")
        if not isinstance(c, Abs) or not isinstance(x, Var) or x.ty != c.ty or len(p.subs) != 1:
            return False
        if x.name in avoid or x in V or x.name in free_var_names(c):
            return False
        return sub_ok(p.subs[0], instantiate(c.body, x), V | {x})
    if p.case == "6":
        if len(p.subs) != 1:
            return False
        q = p.subs[0]
        return sub_ok(q) and any(v == c for _, v in one_step(q.rhs, avoid))
    return False
