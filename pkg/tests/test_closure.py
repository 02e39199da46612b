import dataclasses

import pytest

from hoprove.closure import ClosureSearch, check_general_schema, check_rule, closure_check_proof, in_closure
from hoprove.errors import MalformedLhs
from hoprove.parser import parse_spec, parse_term
from hoprove.proof import ACCEPTED, REJECTED, UNKNOWN

SPEC = parse_spec("""
sort N;
fun a : N; fun f : N -> N; fun g : N -> N; fun h : N * N -> N;
prec g > f;
var x, y : N;
var F : N -> N;
""")


def term(text):
    return parse_term(SPEC.sig, dict(SPEC.env), text)


def cases(p):
    return [q.case for q in p.walk()]


def test_system_t_accepted(system_t):
    vs = check_general_schema(system_t.sig, system_t.rules)
    assert [v.status for v in vs] == [ACCEPTED, ACCEPTED]
    p = vs[1].proof
    assert p.case == "4"
    assert [q.case for q in p.subs] == ["base-arg", "1", "3"]
    assert p.subs[1].subs[0].rhs == parse_term(system_t.sig, dict(system_t.env), "s(X)")
    assert all(closure_check_proof(system_t.sig, v.proof) for v in vs)


def test_argument_is_a_member():
    p, hit = in_closure(SPEC.sig, term("f(a)"), term("a"))
    assert p.case == "base-arg" and not hit


def test_bigger_head_is_not_a_member():
    p, hit = in_closure(SPEC.sig, term("f(a)"), term("g(a)"))
    assert p is None and not hit


def test_smaller_head_is_a_member():
    p, _ = in_closure(SPEC.sig, term("g(x)"), term("f(f(x))"))
    assert p.case == "2" and closure_check_proof(SPEC.sig, p)


def test_abstraction_and_application():
    p, _ = in_closure(SPEC.sig, term("h(F(x), y)"), term("\\z:N. F z"))
    # lambdas go through rule 5, which extends V with the bound variable
    assert p.case == "5" and p.subs[0].case == "4"
    assert closure_check_proof(SPEC.sig, p)


def test_beta_reduct_through_rule_6():
    p, _ = in_closure(SPEC.sig, term("h((\\z:N. f(z)) x, y)"), term("f(x)"))
    assert p is not None and "6" in cases(p)
    assert closure_check_proof(SPEC.sig, p)


def test_nonterm_rejected(nonterm):
    (v,) = check_general_schema(nonterm.sig, nonterm.rules)
    assert v.status == REJECTED and v.proof is None


def test_brouwer_rule_3_rejected(brouwer):
    vs = check_general_schema(brouwer.sig, brouwer.rules)
    assert [v.status for v in vs] == [ACCEPTED, ACCEPTED, REJECTED]


def test_empty_system():
    assert check_general_schema(SPEC.sig, []) == []


def test_non_fun_anchor():
    with pytest.raises(MalformedLhs):
        ClosureSearch(SPEC.sig, term("x"))


def test_budget_monotonicity(system_t):
    r = system_t.rules[1]
    found = [check_rule(system_t.sig, r, budget=b).accepted for b in range(0, 8)]
    first = found.index(True)
    assert all(found[first:])


def test_tiny_budget_is_unknown(system_t):
    v = check_rule(system_t.sig, system_t.rules[1], budget=0)
    assert v.status == UNKNOWN and v.notes


def test_tampered_proofs_fail(system_t):
    v = check_rule(system_t.sig, system_t.rules[1])
    p = v.proof
    assert not closure_check_proof(system_t.sig, dataclasses.replace(p, case="2"))
    bad_arg = dataclasses.replace(p.subs[0], data={"arg": 0})
    assert not closure_check_proof(system_t.sig, dataclasses.replace(p, subs=[bad_arg] + p.subs[1:]))
    assert not closure_check_proof(system_t.sig, dataclasses.replace(p, subs=p.subs[:2]))
    assert not closure_check_proof(system_t.sig, dataclasses.replace(p, data={"split": 1}))
