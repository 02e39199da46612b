"""Proof trees shared by all engines, and their JSON encoding."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .core import Abs, App, Arrow, BVar, Fun, Sort, Var, show, show_type
from .orders import LEX, MulWitness

EQ = "="  # the reflexive branch of a non-strict comparison


@dataclass
class Proof:
    """One goal ``lhs rel rhs`` with the case that discharged it.

    ``bound`` holds the variable list a closure goal is indexed by (the
    extra variables of a closure membership, or the X of the unified
    ordering); it is empty for plain ordering goals.
    """

    rel: str
    case: str
    lhs: object
    rhs: object
    subs: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    bound: tuple = ()

    @property
    def strict(self) -> bool:
        return self.case != EQ

    def walk(self) -> Iterator["Proof"]:
        yield self
        for s in self.subs:
            yield from s.walk()

    def goal_text(self) -> str:
        rel = {"rpo": ">rpo", "horpo": ">horpo", "chorpo": ">horpo", "cx": "]X", "cc": "in CC"}.get(self.rel, self.rel)
        if self.case == EQ:
            rel = "=="
        if self.rel == "cx":
            xs = ", ".join(v.name for v in self.bound)
            rel = f"]{{{xs}}}"
        if self.rel == "cc":
            vs = ", ".join(v.name for v in self.bound)
            return f"{show(self.rhs)} in CC({show(self.lhs)}{'; ' + vs if vs else ''})"
        return f"{show(self.lhs)} {rel} {show(self.rhs)}"


ACCEPTED, REJECTED, UNKNOWN = "accepted", "rejected", "unknown"


@dataclass
class Verdict:
    """Outcome of orienting (or schema-checking) one rule."""

    rule: object
    status: str
    proof: Optional[Proof] = None
    notes: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def accepted(self) -> bool:
        return self.status == ACCEPTED


def mul_data(w: MulWitness) -> dict:
    return {"eq_pairs": [list(p) for p in w.eq_pairs],
            "gt_pairs": [[i, j] for i, j, _ in w.gt_pairs]}


def ext_data(status: str, w) -> tuple:
    """Proof data and sub-proofs for a witness from :func:`orders.ext_witness`."""
    if status == LEX:
        i, sub = w
        return {"status": LEX, "index": i}, [sub]
    d = mul_data(w)
    d["status"] = "mul"
    return d, [x for _, _, x in w.gt_pairs]


def check_ext(data: dict, status: str, xs, ys, subs, sub_ok, eq=lambda a, b: a == b) -> bool:
    """Replay an extension witness; ``sub_ok(sub, x, y)`` validates one strict step."""
    if data.get("status") != status:
        return False
    xs, ys = list(xs), list(ys)
    if status == LEX:
        i = data.get("index")
        if not isinstance(i, int) or not 0 <= i < len(xs) or len(xs) != len(ys) or len(subs) < 1:
            return False
        if not all(eq(xs[k], ys[k]) for k in range(i)):
            return False
        return sub_ok(subs[0], xs[i], ys[i])
    eqp = [tuple(p) for p in data.get("eq_pairs", [])]
    gtp = [tuple(p) for p in data.get("gt_pairs", [])]
    if len(gtp) != len(subs):
        return False
    used_x = [i for i, _ in eqp]
    used_y = [j for _, j in eqp] + [j for _, j in gtp]
    if len(set(used_x)) != len(used_x) or sorted(used_y) != list(range(len(ys))):
        return False
    removed = set(range(len(xs))) - set(used_x)
    if not removed:
        return False
    for i, j in eqp:
        if not (0 <= i < len(xs) and eq(xs[i], ys[j])):
            return False
    for (i, j), sub in zip(gtp, subs):
        if i not in removed or not sub_ok(sub, xs[i], ys[j]):
            return False
    return True


# ------------------------------------------------------------------ JSON


def term_to_json(t) -> dict:
    if isinstance(t, Var):
        return {"var": t.name, "type": show_type(t.ty)}
    if isinstance(t, BVar):
        return {"bvar": t.index, "type": show_type(t.ty)}
    if isinstance(t, Fun):
        return {"fun": t.sym.name, "args": [term_to_json(a) for a in t.args]}
    if isinstance(t, App):
        return {"app": [term_to_json(t.fun), term_to_json(t.arg)]}
    return {"lam": t.hint, "type": show_type(t.ty), "body": term_to_json(t.body)}


def term_from_json(sig, d: dict):
    from .parser import parse_type

    if "var" in d:
        return Var(d["var"], parse_type(sig, d["type"]))
    if "bvar" in d:
        return BVar(int(d["bvar"]), parse_type(sig, d["type"]))
    if "fun" in d:
        return Fun(sig.symbol(d["fun"]), tuple(term_from_json(sig, a) for a in d["args"]))
    if "app" in d:
        f, a = d["app"]
        return App(term_from_json(sig, f), term_from_json(sig, a))
    return Abs(parse_type(sig, d["type"]), term_from_json(sig, d["body"]), d["lam"])


def _value_to_json(v):
    if isinstance(v, (Var, BVar, Fun, App, Abs)):
        return {"term": term_to_json(v)}
    if isinstance(v, (Sort, Arrow)):
        return {"type": show_type(v)}
    if isinstance(v, (list, tuple)):
        return [_value_to_json(x) for x in v]
    if isinstance(v, dict):
        return {k: _value_to_json(x) for k, x in v.items()}
    return v


def _value_from_json(sig, v):
    from .parser import parse_type

    if isinstance(v, dict):
        if set(v) == {"term"}:
            return term_from_json(sig, v["term"])
        if set(v) == {"type"}:
            return parse_type(sig, v["type"])
        return {k: _value_from_json(sig, x) for k, x in v.items()}
    if isinstance(v, list):
        return [_value_from_json(sig, x) for x in v]
    return v


def proof_to_json(p: Proof) -> dict:
    return {
        "rel": p.rel,
        "case": p.case,
        "goal": p.goal_text(),
        "lhs": term_to_json(p.lhs),
        "rhs": term_to_json(p.rhs),
        "bound": [term_to_json(v) for v in p.bound],
        "data": _value_to_json(p.data),
        "subs": [proof_to_json(s) for s in p.subs],
    }


def proof_from_json(sig, d: dict) -> Proof:
    return Proof(
        rel=d["rel"],
        case=d["case"],
        lhs=term_from_json(sig, d["lhs"]),
        rhs=term_from_json(sig, d["rhs"]),
        subs=[proof_from_json(sig, s) for s in d.get("subs", [])],
        data=_value_from_json(sig, d.get("data", {})),
        bound=tuple(term_from_json(sig, v) for v in d.get("bound", [])),
    )
