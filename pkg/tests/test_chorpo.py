import dataclasses

import pytest

from hoprove.chorpo import (
    CX,
    PROVENANCE,
    Polarity,
    accessible,
    chorpo_check_proof,
    chorpo_gt,
    chorpo_orient_rule,
    closure_gt,
    polarity,
)
from hoprove.core import Sort, Var, contract_beta, contract_eta, free_vars
from hoprove.errors import IndexOutOfRange
from hoprove.harness import EnumSpec, beta_redexes, enumerate_terms, eta_redexes
from hoprove.horpo import horpo_orient_rule
from hoprove.parser import parse_term, parse_type
from hoprove.proof import ACCEPTED, EQ, REJECTED


def ty(spec, text):
    return parse_type(spec.sig, text)


def test_polarity(brouwer):
    assert polarity("Ord", ty(brouwer, "N -> Ord")) is Polarity.POSITIVE
    assert polarity("Ord", ty(brouwer, "Ord -> N")) is Polarity.NEGATIVE
    assert polarity("Ord", ty(brouwer, "Ord -> Ord")) is Polarity.BOTH
    assert polarity("Ord", ty(brouwer, "(Ord -> N) -> Ord")) is Polarity.POSITIVE
    assert polarity("Ord", ty(brouwer, "(Ord -> N) -> N")) is Polarity.POSITIVE
    assert polarity("Ord", ty(brouwer, "N -> N")) is Polarity.ABSENT


def test_accessibility(brouwer):
    t = lambda s: parse_term(brouwer.sig, dict(brouwer.env), s)  # noqa: E731
    lim = t("lim(F)")
    assert accessible(lim, 0) == {"clause": 2, "polarity": "positive"}
    rec = t("rec(X, U, V, W)")
    assert accessible(rec, 2) is None  # Ord -> Ord -> Ord has Ord in a domain
    assert accessible(rec, 2, frozenset({rec})) == {"clause": 1}
    with pytest.raises(IndexOutOfRange):
        accessible(lim, 1)


# (step, lhs, relation, X, rhs, case) for each step of the Brouwer walkthrough
WALKTHROUGH = [
    (1, "rec(lim(F), U, V, W)", "chorpo", "", "W F (\\n:N. rec(F n, U, V, W))", "1"),
    (2, "rec(lim(F), U, V, W)", CX, "", "W F (\\n:N. rec(F n, U, V, W))", "5"),
    (3, "rec(lim(F), U, V, W)", CX, "", "W", "2"),
    (4, "rec(lim(F), U, V, W)", CX, "", "F", "2"),
    (5, "rec(lim(F), U, V, W)", CX, "", "\\n:N. rec(F n, U, V, W)", "6"),
    (6, "lim(F)", CX, "", "F", "2"),
    (7, "rec(lim(F), U, V, W)", CX, "n", "rec(F n, U, V, W)", "4"),
    (8, "rec(lim(F), U, V, W)", CX, "n", "F n", "5"),
    (9, "rec(lim(F), U, V, W)", CX, "n", "U", "2"),
    (10, "rec(lim(F), U, V, W)", CX, "n", "V", "2"),
    (11, "rec(lim(F), U, V, W)", CX, "n", "W", "2"),
    (13, "rec(lim(F), U, V, W)", CX, "n", "n", "1"),
    (14, "lim(F)", "chorpo", "", "\\n:N. F n", "1"),
    (15, "lim(F)", CX, "", "\\n:N. F n", "6"),
    (16, "lim(F)", CX, "n", "F n", "5"),
    (17, "lim(F)", CX, "n", "n", "1"),
]


@pytest.fixture(scope="module")
def brouwer_rule3(brouwer):
    return chorpo_orient_rule(brouwer.sig, brouwer.rules[2])


def test_brouwer_walkthrough_goals(brouwer, brouwer_rule3):
    n = Var("n", Sort("N"))
    env = dict(brouwer.env, n=n.ty)
    nodes = [(q.lhs, q.rel, tuple(v.name for v in q.bound), q.rhs, q.case) for q in brouwer_rule3.proof.walk()]
    for num, lhs, rel, X, rhs, case in WALKTHROUGH:
        want = (parse_term(brouwer.sig, env, lhs), rel, tuple(X.split()), parse_term(brouwer.sig, env, rhs), case)
        assert want in nodes, f"step {num}"


def test_lex_comparison_of_goal_12(brouwer_rule3):
    node7 = next(q for q in brouwer_rule3.proof.walk() if q.rel == CX and q.case == "4")
    assert node7.data["status"] == "lex" and node7.data["index"] == 0
    assert [a["clause"] for a in node7.data["access"]] == [1, 1, 1, 1]


def test_brouwer_and_system_t_accepted(brouwer, system_t):
    for spec in (brouwer, system_t):
        for r in spec.rules:
            v = chorpo_orient_rule(spec.sig, r)
            assert v.status == ACCEPTED and PROVENANCE in v.notes
            assert chorpo_check_proof(spec.sig, v.proof)


def test_nonterm_rejected(nonterm):
    assert chorpo_orient_rule(nonterm.sig, nonterm.rules[0]).status == REJECTED


def test_case_1_carries_no_type_evidence(brouwer_rule3):
    for q in brouwer_rule3.proof.walk():
        if q.rel == "chorpo" and q.case == "1":
            assert "type" not in q.data
        if q.rel == "chorpo" and q.case not in ("1", EQ):
            assert q.data["type"] == [q.lhs.type, q.rhs.type]


def test_variable_condition(brouwer_rule3):
    for q in brouwer_rule3.proof.walk():
        if q.rel == "chorpo":
            assert free_vars(q.rhs) <= free_vars(q.lhs)


def test_tampered_access_evidence_fails(brouwer, brouwer_rule3):
    p = brouwer_rule3.proof
    assert chorpo_check_proof(brouwer.sig, p)

    def retag(q):
        if q.rel == CX and q.case == "2" and q.data["access"] == {"clause": 2, "polarity": "positive"}:
            return dataclasses.replace(q, data=dict(q.data, access={"clause": 1}))
        return dataclasses.replace(q, subs=[retag(s) for s in q.subs])

    assert not chorpo_check_proof(brouwer.sig, retag(p))


def test_tampered_case_fails(brouwer, brouwer_rule3):
    p = brouwer_rule3.proof
    assert not chorpo_check_proof(brouwer.sig, dataclasses.replace(p, case="2a"))
    cx = p.subs[0]
    assert not chorpo_check_proof(brouwer.sig, dataclasses.replace(p, subs=[dataclasses.replace(cx, case="6")]))
    assert not chorpo_check_proof(brouwer.sig, dataclasses.replace(p, subs=[dataclasses.replace(cx, subs=cx.subs[1:])]))


def test_closure_gt_entry_point(brouwer):
    t = lambda s: parse_term(brouwer.sig, dict(brouwer.env), s)  # noqa: E731
    p = closure_gt(brouwer.sig, t("lim(F)"), (), t("F"))
    assert p is not None and p.case == "2" and chorpo_check_proof(brouwer.sig, p)
    assert closure_gt(brouwer.sig, t("s(X)"), (), t("U")) is None


def test_agrees_with_horpo_on_the_corpus(system_t, brouwer, arith, nonterm):
    for spec in (system_t, brouwer, arith, nonterm):
        for r in spec.rules:
            if horpo_orient_rule(spec.sig, r).accepted:
                assert chorpo_orient_rule(spec.sig, r).accepted, str(r)


def test_beta_eta_via_3c_and_4c(system_t):
    N = ty(system_t, "N")
    spec = EnumSpec(system_t.sig, {"X": N, "V": ty(system_t, "N -> N -> N")}, 5, (N,))
    terms = list(enumerate_terms(spec))
    for r in beta_redexes(terms):
        p = chorpo_gt(system_t.sig, r, contract_beta(r))
        assert p is not None and chorpo_check_proof(system_t.sig, p)
    used = set()
    for r in eta_redexes(terms):
        p = chorpo_gt(system_t.sig, r, contract_eta(r))
        assert p is not None and chorpo_check_proof(system_t.sig, p)
        used.add(p.case)
    assert "4c" in used
