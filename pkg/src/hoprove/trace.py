"""Running a method over a whole system, and the trace documents it emits."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from . import __version__
from .chorpo import PROVENANCE, chorpo_check_proof, chorpo_orient_rule
from .closure import check_rule, closure_check_proof
from .horpo import horpo_check_proof, horpo_orient_rule
from .parser import SpecFile, parse_spec
from .proof import ACCEPTED, EQ, REJECTED, Proof, Verdict, proof_from_json, proof_to_json
from .rpo import _require_first_order, rpo_check_proof, rpo_gt

METHODS = ("rpo", "schema", "horpo", "chorpo")
SCHEMA_VERSION = 1
ROOT_REL = {"rpo": "rpo", "schema": "cc", "horpo": "horpo", "chorpo": "chorpo"}
CHECKERS = {
    "rpo": rpo_check_proof,
    "schema": closure_check_proof,
    "horpo": horpo_check_proof,
    "chorpo": chorpo_check_proof,
}


@dataclass
class TraceDocument:
    method: str
    spec: SpecFile
    verdicts: list
    options: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def all_accepted(self) -> bool:
        return all(v.accepted for v in self.verdicts)


def _rpo_rule(sig, rule) -> Verdict:
    t0 = time.perf_counter()
    p = rpo_gt(sig, rule.lhs, rule.rhs)
    return Verdict(rule, ACCEPTED if p else REJECTED, p, [], time.perf_counter() - t0)


def run_method(spec: SpecFile, method: str, budget=None, beta_steps=None) -> TraceDocument:
    """Orient (or schema-check) every rule of ``spec`` with one method.

    Raises NotFirstOrder when ``rpo`` is asked to handle a higher-order system.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    opts = dict(spec.options)
    if budget is not None:
        opts["budget"] = budget
    if beta_steps is not None:
        opts["beta_steps"] = beta_steps
    sig = spec.sig
    t0 = time.perf_counter()
    if method == "rpo":
        for r in spec.rules:
            _require_first_order(sig, r.lhs, r.rhs)
        verdicts = [_rpo_rule(sig, r) for r in spec.rules]
    elif method == "schema":
        verdicts = [check_rule(sig, r, opts["budget"], opts["beta_steps"]) for r in spec.rules]
    elif method == "horpo":
        verdicts = [horpo_orient_rule(sig, r) for r in spec.rules]
    else:
        verdicts = [chorpo_orient_rule(sig, r, opts["budget"]) for r in spec.rules]
    notes = [PROVENANCE] if method == "chorpo" else []
    used = {k: opts[k] for k in ("budget", "beta_steps") if k in opts}
    return TraceDocument(method, spec, verdicts, used, notes, time.perf_counter() - t0)


# ------------------------------------------------------------------ JSON


def to_json(doc: TraceDocument) -> dict:
    rules = []
    for i, v in enumerate(doc.verdicts):
        rules.append({
            "index": i,
            "line": v.rule.line,
            "rule": str(v.rule),
            "verdict": v.status,
            "notes": [n for n in dict.fromkeys(v.notes) if n not in doc.notes],
            "elapsed": round(v.elapsed, 6),
            "proof": proof_to_json(v.proof) if v.proof is not None else None,
        })
    return {
        "tool": "hoprove",
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "method": doc.method,
        "source": doc.spec.source,
        "options": doc.options,
        "notes": doc.notes,
        "elapsed": round(doc.elapsed, 6),
        "rules": rules,
    }


def trace_schema() -> dict:
    text = resources.files("hoprove").joinpath("data/trace.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_json(d: dict):
    jsonschema.validate(d, trace_schema())


def dumps(doc: TraceDocument) -> str:
    return json.dumps(to_json(doc), indent=2, ensure_ascii=False)


# ------------------------------------------------------------------ text

_TAG = {"rpo": "rpo", "cc": "closure rule", "horpo": "case", "chorpo": ">horpo case", "cx": "]X case"}


def numbered_goals(p: Proof) -> list:
    """Depth-first goal list, skipping identity leaves: ``(number, depth, proof)``."""
    out = []

    def go(q, depth):
        if q.case == EQ:
            return
        out.append((len(out) + 1, depth, q))
        for s in q.subs:
            go(s, depth + 1)

    go(p, 0)
    return out


def to_text(doc: TraceDocument) -> str:
    lines = [f"hoprove {__version__}  method: {doc.method}"]
    lines += [f"note: {n}" for n in doc.notes]
    for i, v in enumerate(doc.verdicts):
        lines.append("")
        lines.append(f"rule {i + 1} (line {v.rule.line}): {v.rule}")
        lines.append(f"verdict: {v.status}")
        for n in v.notes:
            if n not in doc.notes:
                lines.append(f"note: {n}")
        if v.proof is None:
            continue
        for num, depth, q in numbered_goals(v.proof):
            lines.append(f"{'  ' * depth}{num}. {q.goal_text()}    [{_TAG.get(q.rel, q.rel)} {q.case}]")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ replay


@dataclass
class ReplayResult:
    index: int
    ok: bool
    message: str


def check_trace(d: dict) -> list:
    """Replay every proof of a JSON trace against the embedded source."""
    validate_json(d)
    spec = parse_spec(d["source"])
    method = d["method"]
    if len(d["rules"]) != len(spec.rules):
        return [ReplayResult(-1, False, "rule count differs from the embedded source")]
    out = []
    for entry, rule in zip(d["rules"], spec.rules):
        i = entry["index"]
        if entry["proof"] is None:
            ok = entry["verdict"] != ACCEPTED
            out.append(ReplayResult(i, ok, "no proof" if ok else "accepted without a proof"))
            continue
        if entry["verdict"] != ACCEPTED:
            out.append(ReplayResult(i, False, "proof attached to a rule that was not accepted"))
            continue
        try:
            p = proof_from_json(spec.sig, entry["proof"])
        except Exception as e:  # malformed terms or types
            out.append(ReplayResult(i, False, f"undecodable proof: {e}"))
            continue
        if p.rel != ROOT_REL[method] or p.lhs != rule.lhs or p.rhs != rule.rhs:
            out.append(ReplayResult(i, False, "root goal is not the rule"))
            continue
        if method == "schema" and p.bound:
            out.append(ReplayResult(i, False, "root closure goal has extra variables"))
            continue
        ok = CHECKERS[method](spec.sig, p)
        out.append(ReplayResult(i, ok, "replayed" if ok else "proof does not replay"))
    return out
