"""The higher-order recursive path ordering on typed terms.

Proof nodes carry the case number as a string ("1" .. "12"); every strict
node records the compared types under ``data["type"]``.
"""
from __future__ import annotations

import time
from typing import Optional

from .core import (
    Abs,
    App,
    Fun,
    Term,
    Var,
    contract_beta,
    contract_eta,
    flattenings,
    free_var_names,
    free_vars,
    fresh_name,
    has_loose,
    instantiate,
    is_beta_redex,
    is_eta_redex,
    lower,
)
from .orders import LEX, MUL, Cmp, Signature, ext_witness, prec_compare, type_eq, type_ge
from .proof import ACCEPTED, EQ, REJECTED, Proof, Verdict, check_ext, ext_data

REL = "horpo"
CASE8_WARNING = "case 8 read literally: the abstraction on the right does not use its variable"


def declared(sig: Signature, *terms: Term):
    """Raise UndeclaredSymbol if a term mentions a symbol outside ``sig``."""
    for t in terms:
        stack = [t]
        while stack:
            u = stack.pop()
            if isinstance(u, Fun):
                sig.symbol(u.sym.name)
                stack.extend(u.args)
            elif isinstance(u, App):
                stack += [u.fun, u.arg]
            elif isinstance(u, Abs):
                stack.append(u.body)


def open_with(t: Abs, name: str, ty=None):
    x = Var(name, t.ty if ty is None else ty)
    return x, instantiate(t.body, x)


def fresh_for(t: Abs, *others: Term) -> str:
    avoid = set()
    for o in others:
        avoid |= free_var_names(o)
    return fresh_name(t.hint, avoid)


class Horpo:
    def __init__(self, sig: Signature):
        self.sig = sig
        self.memo = {}

    def ge(self, s, t) -> Optional[Proof]:
        if s == t:
            return Proof(REL, EQ, s, t)
        return self.gt(s, t)

    def gt(self, s, t) -> Optional[Proof]:
        key = (s, t)
        if key not in self.memo:
            self.memo[key] = None
            self.memo[key] = self._gt(s, t)
        return self.memo[key]

    def _gt(self, s, t):
        if not type_ge(self.sig, s.type, t.type):
            return None
        ev = {"type": [s.type, t.type]}
        for case in (self._c11, self._c12, self._c1, self._c2, self._c3, self._c4,
                     self._c5, self._c6, self._c7, self._c8, self._c9, self._c10):
            got = case(s, t)
            if got is not None:
                name, subs, data = got
                return Proof(REL, name, s, t, subs, {**ev, **data})
        return None

    def cond_a(self, s: Fun, ts) -> Optional[list]:
        out = []
        for v in ts:
            p = self.gt(s, v)
            if not p:
                p = next((q for q in (self.ge(u, v) for u in s.args) if q), None)
            if not p:
                return None
            out.append(p)
        return out

    # -- cases -----------------------------------------------------------

    def _c11(self, s, t):
        if is_beta_redex(s):
            p = self.ge(contract_beta(s), t)
            if p:
                return "11", [p], {}

    def _c12(self, s, t):
        if is_eta_redex(s):
            p = self.ge(contract_eta(s), t)
            if p:
                return "12", [p], {}

    def _c1(self, s, t):
        if isinstance(s, Fun):
            for i, u in enumerate(s.args):
                p = self.ge(u, t)
                if p:
                    return "1", [p], {"arg": i}

    def _c2(self, s, t):
        if isinstance(s, Fun) and isinstance(t, Fun) and prec_compare(self.sig, s.name, t.name) is Cmp.GREATER:
            a = self.cond_a(s, t.args)
            if a is not None:
                return "2", a, {}

    def _c3(self, s, t):
        if self._same(s, t, MUL):
            w = ext_witness(MUL, self.gt, s.args, t.args)
            if w:
                data, subs = ext_data(MUL, w)
                return "3", subs, data

    def _c4(self, s, t):
        if self._same(s, t, LEX) and len(s.args) == len(t.args):
            w = ext_witness(LEX, self.gt, s.args, t.args)
            if w:
                a = self.cond_a(s, t.args)
                if a is not None:
                    data, subs = ext_data(LEX, w)
                    return "4", subs + a, data

    def _same(self, s, t, status):
        return (isinstance(s, Fun) and isinstance(t, Fun)
                and prec_compare(self.sig, s.name, t.name) is Cmp.EQUIV
                and self.sig.stat(s.name) == status)

    def _c5(self, s, t):
        if isinstance(s, App):
            for i, u in enumerate((s.fun, s.arg)):
                p = self.ge(u, t)
                if p:
                    return "5", [p], {"arg": i}

    def _c6(self, s, t):
        if isinstance(s, Abs):
            x, u = open_with(s, fresh_for(s, s, t))
            p = self.ge(u, t)
            if p:
                return "6", [p], {"var": x}

    def _c7(self, s, t):
        if isinstance(s, Fun) and isinstance(t, App):
            for head, args in flattenings(t):
                a = self.cond_a(s, [head] + args)
                if a is not None:
                    return "7", a, {"split": len(args)}

    def _c8(self, s, t):
        if isinstance(s, Fun) and isinstance(t, Abs) and not has_loose(t.body, 0):
            p = self.gt(s, lower(t.body))
            if p:
                return "8", [p], {"warning": CASE8_WARNING}

    def _c9(self, s, t):
        if isinstance(s, App) and isinstance(t, App):
            for head, args in flattenings(t):
                w = ext_witness(MUL, self.gt, [s.fun, s.arg], [head] + args)
                if w:
                    data, subs = ext_data(MUL, w)
                    return "9", subs, {**data, "split": len(args)}

    def _c10(self, s, t):
        if isinstance(s, Abs) and isinstance(t, Abs) and type_eq(self.sig, s.ty, t.ty):
            name = fresh_name(s.hint, free_var_names(s) | free_var_names(t))
            x, u = open_with(s, name)
            _, v = open_with(t, name)
            p = self.gt(u, v)
            if p:
                return "10", [p], {"var": x}


def horpo_gt(sig: Signature, s: Term, t: Term, engine: Optional[Horpo] = None) -> Optional[Proof]:
    """A proof of ``s >horpo t`` or None; both terms must be well typed."""
    declared(sig, s, t)
    return (engine or Horpo(sig)).gt(s, t)


def horpo_orient_rule(sig: Signature, rule, engine: Optional[Horpo] = None) -> Verdict:
    t0 = time.perf_counter()
    p = horpo_gt(sig, rule.lhs, rule.rhs, engine)
    notes = []
    if p and any(q.case == "8" for q in p.walk()):
        notes.append(CASE8_WARNING)
    return Verdict(rule, ACCEPTED if p else REJECTED, p, notes, time.perf_counter() - t0)


# ------------------------------------------------------------------ replay


def horpo_check_proof(sig: Signature, proof: Proof) -> bool:
    try:
        return _Checker(sig).check(proof)
    except Exception:
        return False


class _Checker:
    def __init__(self, sig):
        self.sig = sig

    def goal(self, p, lhs, rhs, strict=None):
        if p.lhs != lhs or p.rhs != rhs:
            return False
        if strict is not None and p.strict != strict:
            return False
        return self.check(p)

    def strict_ok(self, p, x, y):
        return self.goal(p, x, y, True)

    def cond_a(self, s, ts, subs):
        if len(subs) != len(ts):
            return False
        for q, v in zip(subs, ts):
            if q.rhs != v:
                return False
            if q.lhs == s:
                if not (q.strict and self.check(q)):
                    return False
            elif q.lhs not in s.args or not self.check(q):
                return False
        return True

    def check(self, p) -> bool:
        if p.rel != REL:
            return False
        s, t = p.lhs, p.rhs
        if p.case == EQ:
            return s == t and not p.subs
        ev = p.data.get("type")
        if not ev or list(ev) != [s.type, t.type] or not type_ge(self.sig, s.type, t.type):
            return False
        fn = getattr(self, "_c" + str(p.case), None)
        return bool(fn and fn(p, s, t))

    def _one(self, p):
        return p.subs[0] if len(p.subs) == 1 else None

    def _c11(self, p, s, t):
        q = self._one(p)
        return q is not None and is_beta_redex(s) and self.goal(q, contract_beta(s), t)

    def _c12(self, p, s, t):
        q = self._one(p)
        return q is not None and is_eta_redex(s) and self.goal(q, contract_eta(s), t)

    def _c1(self, p, s, t):
        q, i = self._one(p), p.data.get("arg")
        return (q is not None and isinstance(s, Fun) and isinstance(i, int)
                and 0 <= i < len(s.args) and self.goal(q, s.args[i], t))

    def _c2(self, p, s, t):
        return (isinstance(s, Fun) and isinstance(t, Fun)
                and prec_compare(self.sig, s.name, t.name) is Cmp.GREATER
                and self.cond_a(s, t.args, p.subs))

    def _same(self, s, t, status):
        return (isinstance(s, Fun) and isinstance(t, Fun)
                and prec_compare(self.sig, s.name, t.name) is Cmp.EQUIV
                and self.sig.stat(s.name) == status)

    def _c3(self, p, s, t):
        return self._same(s, t, MUL) and check_ext(p.data, MUL, s.args, t.args, p.subs, self.strict_ok)

    def _c4(self, p, s, t):
        return (self._same(s, t, LEX) and len(p.subs) == 1 + len(t.args)
                and check_ext(p.data, LEX, s.args, t.args, p.subs[:1], self.strict_ok)
                and self.cond_a(s, t.args, p.subs[1:]))

    def _c5(self, p, s, t):
        q, i = self._one(p), p.data.get("arg")
        return q is not None and isinstance(s, App) and i in (0, 1) and self.goal(q, (s.fun, s.arg)[i], t)

    def _var(self, p, s: Abs, *others):
        x = p.data.get("var")
        if not isinstance(x, Var) or x.ty != s.ty:
            return None
        if any(x.name in free_var_names(o) for o in others):
            return None
        return x

    def _c6(self, p, s, t):
        q = self._one(p)
        if q is None or not isinstance(s, Abs):
            return False
        x = self._var(p, s, s, t)
        return x is not None and x not in free_vars(t) and self.goal(q, instantiate(s.body, x), t)

    def _split(self, t, k):
        for head, args in flattenings(t):
            if len(args) == k:
                return [head] + args
        return None

    def _c7(self, p, s, t):
        if not (isinstance(s, Fun) and isinstance(t, App)):
            return False
        ts = self._split(t, p.data.get("split"))
        return ts is not None and self.cond_a(s, ts, p.subs)

    def _c8(self, p, s, t):
        q = self._one(p)
        return (q is not None and isinstance(s, Fun) and isinstance(t, Abs)
                and not has_loose(t.body, 0) and self.strict_ok(q, s, lower(t.body)))

    def _c9(self, p, s, t):
        if not (isinstance(s, App) and isinstance(t, App)):
            return False
        ts = self._split(t, p.data.get("split"))
        return ts is not None and check_ext(p.data, MUL, [s.fun, s.arg], ts, p.subs, self.strict_ok)

    def _c10(self, p, s, t):
        q = self._one(p)
        if q is None or not (isinstance(s, Abs) and isinstance(t, Abs)) or not type_eq(self.sig, s.ty, t.ty):
            return False
        x = self._var(p, s, s, t)
        if x is None:
            return False
        return self.strict_ok(q, instantiate(s.body, x), instantiate(t.body, Var(x.name, t.ty)))
