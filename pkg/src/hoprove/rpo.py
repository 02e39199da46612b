"""First-order recursive path ordering with proof output."""
from __future__ import annotations

from typing import Optional

from .core import Fun, Term, is_first_order, show
from .errors import NotFirstOrder
from .orders import LEX, MUL, Cmp, Signature, ext_witness, prec_compare
from .proof import EQ, Proof, check_ext, ext_data

REL = "rpo"


def _require_first_order(sig: Signature, *terms: Term):
    for t in terms:
        if not is_first_order(t):
            raise NotFirstOrder(f"{show(t)} is not a first-order algebraic term")
        stack = [t]
        while stack:
            u = stack.pop()
            if isinstance(u, Fun):
                sig.symbol(u.sym.name)
                stack.extend(u.args)


class RPO:
    """Comparisons for one signature; results are memoised per instance."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.memo = {}

    def gt(self, s: Term, t: Term) -> Optional[Proof]:
        key = (s, t)
        if key not in self.memo:
            self.memo[key] = None
            self.memo[key] = self._gt(s, t)
        return self.memo[key]

    def ge(self, s: Term, t: Term) -> Optional[Proof]:
        if s == t:
            return Proof(REL, EQ, s, t)
        return self.gt(s, t)

    def _gt(self, s, t):
        if not isinstance(s, Fun):
            return None
        for i, u in enumerate(s.args):
            sub = self.ge(u, t)
            if sub:
                return Proof(REL, "1", s, t, [sub], {"arg": i})
        if not isinstance(t, Fun):
            return None
        c = prec_compare(self.sig, s.name, t.name)
        if c is Cmp.GREATER:
            a = self._cond_a(s, t)
            if a is not None:
                return Proof(REL, "2", s, t, a)
        elif c is Cmp.EQUIV:
            stat = self.sig.stat(s.name)
            if len(s.args) != len(t.args) and stat == LEX:
                return None
            w = ext_witness(stat, self.gt, s.args, t.args)
            if not w:
                return None
            data, subs = ext_data(stat, w)
            if stat == MUL:
                return Proof(REL, "3", s, t, subs, data)
            a = self._cond_a(s, t)
            if a is not None:
                return Proof(REL, "4", s, t, subs + a, data)
        return None

    def _cond_a(self, s, t):
        out = []
        for v in t.args:
            p = self.gt(s, v)
            if not p:
                return None
            out.append(p)
        return out


def rpo_gt(sig: Signature, s: Term, t: Term, engine: Optional[RPO] = None) -> Optional[Proof]:
    """A proof of ``s >rpo t``, or None."""
    _require_first_order(sig, s, t)
    return (engine or RPO(sig)).gt(s, t)


def rpo_check_proof(sig: Signature, proof: Proof) -> bool:
    try:
        return _check(sig, proof)
    except Exception:
        return False


def _check(sig, p) -> bool:
    if p.rel != REL:
        return False
    s, t = p.lhs, p.rhs
    if p.case == EQ:
        return s == t and not p.subs
    if not isinstance(s, Fun):
        return False

    def strict_ok(sub, x, y):
        return sub.strict and sub.lhs == x and sub.rhs == y and _check(sig, sub)

    def cond_a(subs):
        return len(subs) == len(t.args) and all(strict_ok(q, s, v) for q, v in zip(subs, t.args))

    if p.case == "1":
        i = p.data.get("arg")
        if not isinstance(i, int) or not 0 <= i < len(s.args) or len(p.subs) != 1:
            return False
        sub = p.subs[0]
        return sub.lhs == s.args[i] and sub.rhs == t and _check(sig, sub)
    if not isinstance(t, Fun):
        return False
    c = prec_compare(sig, s.name, t.name)
    if p.case == "2":
        return c is Cmp.GREATER and cond_a(p.subs)
    if p.case == "3":
        if c is not Cmp.EQUIV or sig.stat(s.name) != MUL:
            return False
        return check_ext(p.data, MUL, s.args, t.args, p.subs, strict_ok)
    if p.case == "4":
        if c is not Cmp.EQUIV or sig.stat(s.name) != LEX or not p.subs:
            return False
        return (check_ext(p.data, LEX, s.args, t.args, p.subs[:1], strict_ok)
                and cond_a(p.subs[1:]))
    return False
