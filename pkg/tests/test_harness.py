import numpy as np
import pytest

from hoprove.core import BETAETA, Sort, size
from hoprove.errors import NotFirstOrder
from hoprove.harness import (
    BoundHit,
    EnumSpec,
    Terminated,
    beta_redexes,
    check_order_axioms,
    check_stability_monotonicity,
    enumerate_terms,
    eta_redexes,
    explore_reduction,
    find_cycle,
    nontransitivity_witness,
    oracle_rpo,
)
from hoprove.parser import parse_spec, parse_term
from hoprove.properties import run_suite
from hoprove.rpo import RPO

N = Sort("N")
HO = parse_spec("sort N; fun 0 : N; var x : N; var F : N -> N;")
NAT = parse_spec("sort N; fun 0 : N; fun s : N -> N; fun f : N * N -> N; prec f > s; var x, y : N;")


def term(spec, text):
    return parse_term(spec.sig, dict(spec.env), text)


def shown(spec, **kw):
    return {str(t) for t in enumerate_terms(EnumSpec(spec.sig, **kw))}


def test_ground_enumeration():
    sig = parse_spec("sort N; fun 0 : N; fun s : N -> N;")
    assert shown(sig, max_size=3) == {"0", "s(0)", "s(s(0))"}


def test_variables_and_binders():
    sig = parse_spec("sort N; fun 0 : N; fun s : N -> N; var x : N;")
    assert shown(sig, env={"x": N}, max_size=1) == {"x", "0"}
    assert "\\x:N. x" in {str(t) for t in enumerate_terms(EnumSpec(sig.sig, {}, 2, (N,)))}


def test_enumeration_is_complete_and_duplicate_free():
    spec = EnumSpec(NAT.sig, dict(NAT.env), 5, (N,))
    terms = list(enumerate_terms(spec))
    assert len(terms) == len(set(terms))
    assert all(size(t) <= 5 for t in terms)
    # sizes grow one level at a time
    for n in range(1, 6):
        assert any(size(t) == n for t in terms)


def test_type_filter():
    assert all(t.type == N for t in enumerate_terms(EnumSpec(NAT.sig, {}, 3, (N,), N)))
    assert any(t.type != N for t in enumerate_terms(EnumSpec(NAT.sig, {}, 3, (N,))))


def test_system_t_counts(system_t):
    env = {k: system_t.env[k] for k in ("X", "U", "V")}
    terms = list(enumerate_terms(EnumSpec(system_t.sig, env, 6, (N,))))
    assert len(terms) == 814
    assert len(beta_redexes(terms)) == 165 and len(eta_redexes(terms)) == 19


def test_oracle_examples():
    assert oracle_rpo(NAT.sig, term(NAT, "f(x, y)"), term(NAT, "s(y)"))
    assert oracle_rpo(NAT.sig, term(NAT, "s(x)"), term(NAT, "x"))
    assert not oracle_rpo(NAT.sig, term(NAT, "s(x)"), term(NAT, "s(x)"))
    assert not oracle_rpo(NAT.sig, term(NAT, "x"), term(NAT, "y"))
    with pytest.raises(NotFirstOrder):
        oracle_rpo(HO.sig, term(HO, "F x"), term(HO, "x"))


def test_reduction_exploration(system_t, nonterm):
    sig = parse_spec("sort N; fun a : N;")
    t = parse_term(sig.sig, {}, "(\\z:N. z) a")
    assert explore_reduction(t) == Terminated(1)
    ground = term(system_t, "rec(s(s(0)), 0, \\a:N. \\b:N. s(b))")
    got = explore_reduction(ground, system_t.rules, BETAETA)
    assert isinstance(got, Terminated) and got.max_length > 3
    loop = explore_reduction(term(nonterm, "f(x)"), nonterm.rules, step_bound=10)
    assert isinstance(loop, BoundHit) and len(loop.chain) == 11


def test_axiom_checks_on_rpo():
    terms = list(enumerate_terms(EnumSpec(NAT.sig, dict(NAT.env), 3)))
    eng = RPO(NAT.sig)
    rep = check_order_axioms("rpo", eng.gt, terms)
    assert rep.ok and rep.instances == len(terms)


def test_axiom_checks_catch_broken_relations():
    terms = list(enumerate_terms(EnumSpec(NAT.sig, dict(NAT.env), 2)))
    rep = check_order_axioms("le", lambda s, t: size(s) <= size(t), terms)
    kinds = {c[0] for c in rep.counterexamples}
    assert kinds == {"irreflexive", "acyclic"}
    m = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=bool)
    assert sorted(find_cycle(m)) == [0, 1, 2]
    hop = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=bool)
    assert nontransitivity_witness(None, ["a", "b", "c"], hop) == ("a", "b", "c")


def test_size_relation_is_not_stable():
    terms = list(enumerate_terms(EnumSpec(NAT.sig, dict(NAT.env), 3)))
    rep = check_stability_monotonicity("size", lambda s, t: size(s) > size(t), terms, samples=300)
    assert any(c[0] == "stability" for c in rep.counterexamples)
    rep = check_stability_monotonicity("rpo", RPO(NAT.sig).gt, terms, samples=300)
    assert rep.ok and rep.instances > 0


def test_run_suite_first_order(arith):
    reports = run_suite(arith, EnumSpec(arith.sig, dict(arith.env), 3), samples=50)
    assert reports and all(r.ok for r in reports)
    assert any(r.name.startswith("rpo: agreement") for r in reports)
