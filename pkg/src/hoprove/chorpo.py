"""HORPO with the computability closure built in.

Two mutually recursive relations: the ordering itself (proof tag
``"chorpo"``, cases 1, 2a-2c, 3a-3c, 4a-4c) and the closure relation
indexed by a list X of bound variables (tag ``"cx"``, cases 1-6).  A
closure goal may descend into an argument only when that argument is
*accessible*, either because the whole term is the left side of an
enclosing ordering goal (clause 1) or because the result sort of the head
occurs only positively in the argument's type (clause 2).

No well-foundedness proof is known for this ordering, so every verdict
carries a provenance note saying so.
"""
from __future__ import annotations

import enum
import time
from typing import Optional

from .core import (
    Abs,
    App,
    Fun,
    Sort,
    SortSymbol,
    Term,
    Var,
    contract_eta,
    flattenings,
    free_var_names,
    free_vars,
    fresh_name,
    instantiate,
    is_eta_redex,
    lam,
)
from .errors import BudgetExhausted, IndexOutOfRange
from .horpo import declared, fresh_for, open_with
from .orders import LEX, MUL, Cmp, Signature, ext_witness, prec_compare, type_eq, type_ge
from .proof import ACCEPTED, EQ, REJECTED, UNKNOWN, Proof, Verdict, check_ext, ext_data

REL, CX = "chorpo", "cx"
DEFAULT_BUDGET = 32
PROVENANCE = ("conjectural: no strong normalisation proof is known for the "
              "ordering with built-in closure")
# Case 5 is tried before case 2 so that applications are split first
CX_ORDER = ("1", "5", "2", "3", "4", "6")


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"
    ABSENT = "absent"


def polarity(sort, ty) -> Polarity:
    """Where ``sort`` occurs in ``ty``; arrow domains flip the sign and
    occurrences inside sort arguments count as both."""
    name = sort if isinstance(sort, str) else sort.name

    def occ(t, pos):
        if isinstance(t, Sort):
            found = {pos} if t.name == name else set()
            if any(occ(a, True) for a in t.args):
                found |= {True, False}
            return found
        return occ(t.dom, not pos) | occ(t.cod, pos)

    got = occ(ty, True)
    if not got:
        return Polarity.ABSENT
    if got == {True}:
        return Polarity.POSITIVE
    return Polarity.NEGATIVE if got == {False} else Polarity.BOTH


def accessible(s: Fun, i: int, ancestry=frozenset()) -> Optional[dict]:
    """Evidence that argument ``i`` of ``s`` is accessible, or None.

    ``ancestry`` holds the left sides of the enclosing ordering goals.
    """
    if not 0 <= i < len(s.args):
        raise IndexOutOfRange(f"{s.name} has no argument {i}")
    if s in ancestry:
        return {"clause": 1}
    decl = s.sym.decl
    if isinstance(decl.result, Sort):
        pol = polarity(decl.result.name, decl.arg_types[i])
        if pol in (Polarity.POSITIVE, Polarity.ABSENT):
            return {"clause": 2, "polarity": pol.value}
    return None


def abstract_over(xs, t: Term) -> Term:
    for x in reversed(xs):
        t = lam(x, t)
    return t


class Chorpo:
    def __init__(self, sig: Signature, budget: int = DEFAULT_BUDGET):
        self.sig, self.budget = sig, budget
        self.memo = {}
        self.hit = False

    # -- entry points ----------------------------------------------------

    def gt(self, s, t, anc=frozenset(), depth=0) -> Optional[Proof]:
        return self._memo(("gt", s, t, (), anc), depth, lambda: self._gt(s, t, anc | {s}, depth))

    def ge(self, s, t, anc=frozenset(), depth=0) -> Optional[Proof]:
        if s == t:
            return Proof(REL, EQ, s, t)
        return self.gt(s, t, anc, depth)

    def cx(self, s, X, t, anc=frozenset(), depth=0) -> Optional[Proof]:
        X = tuple(X)
        return self._memo(("cx", s, t, X, anc), depth, lambda: self._cx(s, X, t, anc, depth))

    def cxe(self, s, X, t, anc, depth):
        if s == t:
            return Proof(CX, EQ, s, t, bound=tuple(X))
        if isinstance(s, Fun):
            return self.cx(s, X, t, anc, depth)
        return None

    def _memo(self, key, depth, compute):
        if key in self.memo:
            return self.memo[key]
        if depth > self.budget:
            self.hit = True
            raise BudgetExhausted(f"search deeper than {self.budget}")
        self.memo[key] = None
        was = self.hit
        self.hit = False
        try:
            got = compute()
        finally:
            clean = not self.hit
            self.hit = was or self.hit
        if got is not None or clean:
            self.memo[key] = got
        else:
            del self.memo[key]
        return got

    def _try(self, fn, *args):
        try:
            return fn(*args)
        except BudgetExhausted:
            self.hit = True
            return None

    # -- the ordering ----------------------------------------------------

    def _gt(self, s, t, anc, depth):
        if not free_vars(t) <= free_vars(s):
            return None
        d = depth + 1
        if isinstance(s, Fun):
            p = self._try(self.cx, s, (), t, anc, d)
            if p is not None:
                return Proof(REL, "1", s, t, [p])
        if not type_ge(self.sig, s.type, t.type):
            return None
        ev = {"type": [s.type, t.type]}
        for case in (self._c2a, self._c2b, self._c2c, self._c3a, self._c3b, self._c3c,
                     self._c4a, self._c4b, self._c4c):
            got = self._try(case, s, t, anc, d)
            if got is not None:
                name, subs, data = got
                return Proof(REL, name, s, t, subs, {**ev, **data})
        return None

    def cond_a(self, s, ts, anc, d):
        out = []
        for v in ts:
            p = self.gt(s, v, anc, d)
            if not p:
                p = next((q for q in (self.gt(u, v, anc, d) for u in s.args) if q), None)
            if not p:
                return None
            out.append(p)
        return out

    def _c2a(self, s, t, anc, d):
        if isinstance(s, Fun) and isinstance(t, Fun) and prec_compare(self.sig, s.name, t.name) is Cmp.GREATER:
            a = self.cond_a(s, t.args, anc, d)
            if a is not None:
                return "2a", a, {}

    def _c2b(self, s, t, anc, d):
        if not (isinstance(s, Fun) and isinstance(t, Fun)
                and prec_compare(self.sig, s.name, t.name) is Cmp.EQUIV):
            return None
        stat = self.sig.stat(s.name)
        if stat == LEX and len(s.args) != len(t.args):
            return None
        w = ext_witness(stat, lambda a, b: self.gt(a, b, anc, d), s.args, t.args)
        if w:
            a = self.cond_a(s, t.args, anc, d)
            if a is not None:
                data, subs = ext_data(stat, w)
                return "2b", subs + a, data

    def _c2c(self, s, t, anc, d):
        if isinstance(s, Fun) and isinstance(t, App):
            a = self.cond_a(s, [t.fun, t.arg], anc, d)
            if a is not None:
                return "2c", a, {}

    def _c3a(self, s, t, anc, d):
        if isinstance(s, App) and isinstance(t, App):
            w = ext_witness(MUL, lambda a, b: self.gt(a, b, anc, d), [s.fun, s.arg], [t.fun, t.arg])
            if w:
                data, subs = ext_data(MUL, w)
                return "3a", subs, data

    def _c3b(self, s, t, anc, d):
        if isinstance(s, App):
            for i, u in enumerate((s.fun, s.arg)):
                p = self.ge(u, t, anc, d)
                if p:
                    return "3b", [p], {"arg": i}

    def _c3c(self, s, t, anc, d):
        if isinstance(s, App) and isinstance(s.fun, Abs):
            p = self.ge(instantiate(s.fun.body, s.arg), t, anc, d)
            if p:
                return "3c", [p], {}

    def _c4a(self, s, t, anc, d):
        if isinstance(s, Abs) and isinstance(t, Abs) and type_eq(self.sig, s.ty, t.ty):
            name = fresh_name(s.hint, free_var_names(s) | free_var_names(t))
            x, u = open_with(s, name)
            _, v = open_with(t, name)
            p = self.gt(u, v, anc, d)
            if p:
                return "4a", [p], {"var": x}

    def _c4b(self, s, t, anc, d):
        if isinstance(s, Abs):
            x, u = open_with(s, fresh_for(s, s, t))
            p = self.ge(u, t, anc, d)
            if p:
                return "4b", [p], {"var": x}

    def _c4c(self, s, t, anc, d):
        if is_eta_redex(s):
            p = self.ge(contract_eta(s), t, anc, d)
            if p:
                return "4c", [p], {}

    # -- the closure relation ---------------------------------------------

    def _cx(self, s, X, t, anc, depth):
        d = depth + 1
        for case in CX_ORDER:
            got = self._try(getattr(self, "_x" + case), s, X, t, anc, d)
            if got is not None:
                subs, data = got
                return Proof(CX, case, s, t, subs, data, X)
        return None

    def _all(self, s, X, ts, anc, d):
        out = []
        for v in ts:
            p = self.cx(s, X, v, anc, d)
            if p is None:
                return None
            out.append(p)
        return out

    def _x1(self, s, X, t, anc, d):
        if t in X:
            return [], {}

    def _x2(self, s, X, t, anc, d):
        for i, si in enumerate(s.args):
            ev = accessible(s, i, anc)
            if ev is None:
                continue
            p = self.cxe(si, X, t, anc, d)
            if p is not None:
                return [p], {"arg": i, "access": ev}

    def _x3(self, s, X, t, anc, d):
        if isinstance(t, Fun) and prec_compare(self.sig, s.name, t.name) is Cmp.GREATER:
            subs = self._all(s, X, t.args, anc, d)
            if subs is not None:
                return subs, {}

    def _x4(self, s, X, t, anc, d):
        if not isinstance(t, Fun) or prec_compare(self.sig, s.name, t.name) is not Cmp.EQUIV:
            return None
        stat = self.sig.stat(s.name)
        if stat == LEX and len(s.args) != len(t.args):
            return None
        subs = self._all(s, X, t.args, anc, d)
        if subs is None:
            return None
        access = [accessible(s, i, anc) for i in range(len(s.args))]
        xs = list(enumerate(s.args))
        ys = [(j, abstract_over(X, v)) for j, v in enumerate(t.args)]

        def rel(a, b):
            return access[a[0]] is not None and self.gt(a[1], b[1], anc, d)

        w = ext_witness(stat, rel, xs, ys, lambda a, b: a[1] == b[1])
        if not w:
            return None
        data, ext = ext_data(stat, w)
        return subs + ext, {**data, "access": access}

    def _x5(self, s, X, t, anc, d):
        if isinstance(t, App):
            for head, args in flattenings(t):
                subs = self._all(s, X, [head] + args, anc, d)
                if subs is not None:
                    return subs, {"split": len(args)}

    def _x6(self, s, X, t, anc, d):
        if isinstance(t, Abs):
            avoid = free_var_names(s) | free_var_names(t) | {x.name for x in X}
            x, u = open_with(t, fresh_name(t.hint, avoid))
            p = self.cx(s, X + (x,), u, anc, d)
            if p is not None:
                return [p], {"var": x}


def chorpo_gt(sig: Signature, s: Term, t: Term, engine: Optional[Chorpo] = None,
              budget: int = DEFAULT_BUDGET) -> Optional[Proof]:
    declared(sig, s, t)
    eng = engine or Chorpo(sig, budget)
    try:
        return eng.gt(s, t)
    except BudgetExhausted:
        eng.hit = True
        return None


def closure_gt(sig: Signature, s: Fun, X, t: Term, ancestry=frozenset(),
               engine: Optional[Chorpo] = None, budget: int = DEFAULT_BUDGET) -> Optional[Proof]:
    declared(sig, s, t)
    sig.symbol(s.name)
    eng = engine or Chorpo(sig, budget)
    try:
        return eng.cx(s, tuple(X), t, frozenset(ancestry))
    except BudgetExhausted:
        eng.hit = True
        return None


def chorpo_orient_rule(sig: Signature, rule, budget: int = DEFAULT_BUDGET) -> Verdict:
    t0 = time.perf_counter()
    eng = Chorpo(sig, budget)
    p = chorpo_gt(sig, rule.lhs, rule.rhs, eng)
    status = ACCEPTED if p else (UNKNOWN if eng.hit else REJECTED)
    notes = [PROVENANCE]
    if eng.hit and not p:
        notes.append("search budget exhausted on some branch")
    return Verdict(rule, status, p, notes, time.perf_counter() - t0)


# ------------------------------------------------------------------ replay


def chorpo_check_proof(sig: Signature, proof: Proof) -> bool:
    try:
        if proof.rel == CX:
            return _Checker(sig).cx(proof, frozenset())
        return _Checker(sig).gt(proof, frozenset())
    except Exception:
        return False


class _Checker:
    def __init__(self, sig):
        self.sig = sig

    def sub(self, q, lhs, rhs, anc, strict=None):
        if q.lhs != lhs or q.rhs != rhs or (strict is not None and q.strict != strict):
            return False
        return self.gt(q, anc)

    def cond_a(self, s, ts, subs, anc):
        if len(subs) != len(ts):
            return False
        return all(q.rhs == v and q.strict and (q.lhs == s or q.lhs in s.args) and self.gt(q, anc)
                   for q, v in zip(subs, ts))

    def gt(self, p, anc) -> bool:
        if p.rel != REL:
            return False
        s, t = p.lhs, p.rhs
        if p.case == EQ:
            return s == t and not p.subs
        if not free_vars(t) <= free_vars(s):
            return False
        anc = anc | {s}
        if p.case == "1":
            if "type" in p.data or len(p.subs) != 1 or not isinstance(s, Fun):
                return False
            q = p.subs[0]
            return q.lhs == s and q.rhs == t and q.bound == () and self.cx(q, anc)
        ev = p.data.get("type")
        if not ev or list(ev) != [s.type, t.type] or not type_ge(self.sig, s.type, t.type):
            return False
        strict_ok = lambda q, x, y: self.sub(q, x, y, anc, True)  # noqa: E731
        one = p.subs[0] if len(p.subs) == 1 else None
        c = p.case
        if c in ("2a", "2b", "2c") and not isinstance(s, Fun):
            return False
        if c == "2a":
            return (isinstance(t, Fun) and prec_compare(self.sig, s.name, t.name) is Cmp.GREATER
                    and self.cond_a(s, t.args, p.subs, anc))
        if c == "2b":
            if not isinstance(t, Fun) or prec_compare(self.sig, s.name, t.name) is not Cmp.EQUIV:
                return False
            stat = self.sig.stat(s.name)
            n = 1 if stat == LEX else len(p.data.get("gt_pairs", []))
            return (check_ext(p.data, stat, s.args, t.args, p.subs[:n], strict_ok)
                    and self.cond_a(s, t.args, p.subs[n:], anc))
        if c == "2c":
            return isinstance(t, App) and self.cond_a(s, [t.fun, t.arg], p.subs, anc)
        if c in ("3a", "3b", "3c") and not isinstance(s, App):
            return False
        if c == "3a":
            return isinstance(t, App) and check_ext(p.data, MUL, [s.fun, s.arg], [t.fun, t.arg], p.subs, strict_ok)
        if c == "3b":
            i = p.data.get("arg")
            return one is not None and i in (0, 1) and self.sub(one, (s.fun, s.arg)[i], t, anc)
        if c == "3c":
            return (one is not None and isinstance(s.fun, Abs)
                    and self.sub(one, instantiate(s.fun.body, s.arg), t, anc))
        if c in ("4a", "4b"):
            x = p.data.get("var")
            if (one is None or not isinstance(s, Abs) or not isinstance(x, Var) or x.ty != s.ty
                    or x.name in free_var_names(s) | free_var_names(t)):
                return False
            if c == "4b":
                return self.sub(one, instantiate(s.body, x), t, anc)
            return (isinstance(t, Abs) and type_eq(self.sig, s.ty, t.ty)
                    and self.sub(one, instantiate(s.body, x), instantiate(t.body, Var(x.name, t.ty)), anc, True))
        if c == "4c":
            return one is not None and is_eta_redex(s) and self.sub(one, contract_eta(s), t, anc)
        return False

    def access_ok(self, s, i, ev, anc):
        if not isinstance(ev, dict):
            return False
        if ev.get("clause") == 1:
            return s in anc
        if ev.get("clause") == 2:
            good = accessible(s, i, frozenset())
            return good is not None and good == ev
        return False

    def cx(self, p, anc) -> bool:
        if p.rel != CX or not isinstance(p.lhs, Fun):
            return False
        s, t, X = p.lhs, p.rhs, tuple(p.bound)

        def sub_cx(q, lhs, rhs, bound=X):
            return q.lhs == lhs and q.rhs == rhs and tuple(q.bound) == tuple(bound) and self.cx(q, anc)

        def all_cx(ts, subs):
            return len(subs) == len(ts) and all(sub_cx(q, s, v) for q, v in zip(subs, ts))

        c = p.case
        if c == "1":
            return t in X and not p.subs
        if c == "2":
            i = p.data.get("arg")
            if not isinstance(i, int) or not 0 <= i < len(s.args) or len(p.subs) != 1:
                return False
            if not self.access_ok(s, i, p.data.get("access"), anc):
                return False
            q, si = p.subs[0], s.args[i]
            if q.case == EQ:
                return q.rel == CX and q.lhs == si and q.rhs == t and si == t and not q.subs
            return sub_cx(q, si, t)
        if c == "3":
            return (isinstance(t, Fun) and prec_compare(self.sig, s.name, t.name) is Cmp.GREATER
                    and all_cx(t.args, p.subs))
        if c == "4":
            if not isinstance(t, Fun) or prec_compare(self.sig, s.name, t.name) is not Cmp.EQUIV:
                return False
            stat = self.sig.stat(s.name)
            n = len(t.args)
            access = p.data.get("access")
            if not isinstance(access, list) or len(access) != len(s.args):
                return False
            if any(ev is not None and not self.access_ok(s, i, ev, anc) for i, ev in enumerate(access)):
                return False
            if not all_cx(t.args, p.subs[:n]):
                return False
            xs = list(enumerate(s.args))
            ys = [(j, abstract_over(X, v)) for j, v in enumerate(t.args)]

            def ok(q, a, b):
                return access[a[0]] is not None and self.sub(q, a[1], b[1], anc, True)

            return check_ext(p.data, stat, xs, ys, p.subs[n:], ok, lambda a, b: a[1] == b[1])
        if c == "5":
            if not isinstance(t, App):
                return False
            for head, args in flattenings(t):
                if len(args) == p.data.get("split"):
                    return all_cx([head] + args, p.subs)
            return False
        if c == "6":
            x = p.data.get("var")
            if not isinstance(t, Abs) or not isinstance(x, Var) or x.ty != t.ty or len(p.subs) != 1:
                return False
            if x.name in free_var_names(s) | free_var_names(t) | {v.name for v in X}:
                return False
            return sub_cx(p.subs[0], s, instantiate(t.body, x), X + (x,))
        return False


__all__ = [
    "Chorpo",
    "Polarity",
    "PROVENANCE",
    "SortSymbol",
    "accessible",
    "chorpo_check_proof",
    "chorpo_gt",
    "chorpo_orient_rule",
    "closure_gt",
    "polarity",
]
