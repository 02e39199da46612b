import dataclasses

from hoprove.core import contract_beta, contract_eta
from hoprove.harness import EnumSpec, beta_redexes, enumerate_terms, eta_redexes
from hoprove.horpo import CASE8_WARNING, horpo_check_proof, horpo_gt, horpo_orient_rule
from hoprove.parser import parse_spec, parse_term
from hoprove.proof import ACCEPTED, EQ, REJECTED

SPEC = parse_spec("""
sort N;
fun a : N; fun f : N -> N; fun g : N -> N; fun c : N -> N -> N; fun h : (N -> N) * N -> N;
prec g > f; prec c > f; prec h > f;
var x, y : N;
var F : N -> N;
""")


def term(text):
    return parse_term(SPEC.sig, dict(SPEC.env), text)


def gt(a, b):
    return horpo_gt(SPEC.sig, term(a), term(b))


def test_system_t(system_t):
    v1, v2 = (horpo_orient_rule(system_t.sig, r) for r in system_t.rules)
    assert v1.status == v2.status == ACCEPTED
    assert v1.proof.case == "1"
    root = v2.proof
    assert root.case == "7" and root.data["split"] == 2
    # V is discharged by the reflexive branch of condition A, X through s(X), rec(...) by case 3
    assert [q.case for q in root.subs] == [EQ, "1", "3"]
    assert root.subs[1].subs[0].case == "1"
    assert all(horpo_check_proof(system_t.sig, v.proof) for v in (v1, v2))


def test_type_evidence_everywhere(system_t):
    p = horpo_orient_rule(system_t.sig, system_t.rules[1]).proof
    for q in p.walk():
        if q.strict:
            assert q.data["type"] == [q.lhs.type, q.rhs.type]


def test_brouwer(brouwer):
    vs = [horpo_orient_rule(brouwer.sig, r) for r in brouwer.rules]
    assert [v.status for v in vs] == [ACCEPTED, ACCEPTED, REJECTED]
    assert vs[1].proof.case == "7"


def test_nonterm_and_growth_rejected(nonterm):
    (r,) = nonterm.rules
    assert horpo_orient_rule(nonterm.sig, r).status == REJECTED
    assert gt("a", "f(a)") is None
    assert gt("x", "x") is None


def test_individual_cases():
    assert gt("g(x)", "f(x)").case == "2"
    assert gt("(\\z:N. f(z)) x", "f(x)").case == "11"
    assert gt("\\z:N. F z", "F").case == "12"
    assert gt("F x", "x").case == "5"
    assert gt("\\z:N. g(z)", "\\z:N. f(z)").case == "10"
    assert gt("h(F, x)", "F f(x)").case == "7"


def test_case_8_is_flagged():
    p = gt("c(x)", "\\z:N. f(x)")
    assert p.case == "8" and p.data["warning"] == CASE8_WARNING


def test_beta_eta_containment_small():
    spec = EnumSpec(SPEC.sig, {"x": term("x").type, "F": term("F").type}, 5, (term("x").type,))
    terms = list(enumerate_terms(spec))
    reds = beta_redexes(terms)
    etas = eta_redexes(terms)
    assert reds and etas
    for r in reds:
        p = horpo_gt(SPEC.sig, r, contract_beta(r))
        assert p is not None and horpo_check_proof(SPEC.sig, p)
    for r in etas:
        assert horpo_gt(SPEC.sig, r, contract_eta(r)) is not None


def test_tampered_case_fails(system_t):
    p = horpo_orient_rule(system_t.sig, system_t.rules[1]).proof
    assert not horpo_check_proof(system_t.sig, dataclasses.replace(p, case="2"))
    assert not horpo_check_proof(system_t.sig, dataclasses.replace(p, subs=p.subs[1:]))


def test_dropped_type_evidence_fails(system_t):
    p = horpo_orient_rule(system_t.sig, system_t.rules[1]).proof
    data = {k: v for k, v in p.data.items() if k != "type"}
    assert not horpo_check_proof(system_t.sig, dataclasses.replace(p, data=data))
    wrong = dict(p.data, type=[p.lhs.type, system_t.env["V"]])
    assert not horpo_check_proof(system_t.sig, dataclasses.replace(p, data=wrong))
