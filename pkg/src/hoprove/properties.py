"""The empirical property suite run by ``hoprove properties``."""
from __future__ import annotations

import time

from .chorpo import Chorpo
from .core import BETAETA, contract_beta, contract_eta, free_vars, is_first_order
from .harness import (
    DEFAULT_SEED,
    BoundHit,
    EnumSpec,
    PropertyReport,
    beta_redexes,
    check_order_axioms,
    check_stability_monotonicity,
    comparison_matrix,
    enumerate_terms,
    eta_redexes,
    explore_reduction,
    nontransitivity_witness,
    oracle_rpo,
)
from .horpo import Horpo
from .orders import type_ge
from .rpo import RPO


def containment(name, gt, terms) -> PropertyReport:
    """Every beta/eta redex in ``terms`` must be greater than its contractum."""
    t0 = time.perf_counter()
    rep = PropertyReport(f"{name}: beta/eta containment")
    for r in beta_redexes(terms):
        rep.instances += 1
        if not gt(r, contract_beta(r)):
            rep.counterexamples.append(("beta", r))
    for r in eta_redexes(terms):
        rep.instances += 1
        if not gt(r, contract_eta(r)):
            rep.counterexamples.append(("eta", r))
    rep.elapsed = time.perf_counter() - t0
    return rep


def oracle_agreement(sig, terms, engine=None) -> PropertyReport:
    t0 = time.perf_counter()
    eng = engine or RPO(sig)
    rep = PropertyReport("rpo: agreement with the oracle")
    for s in terms:
        for t in terms:
            rep.instances += 1
            if bool(eng.gt(s, t)) != oracle_rpo(sig, s, t):
                rep.counterexamples.append(("disagree", s, t))
    rep.elapsed = time.perf_counter() - t0
    return rep


def witness_report(gt, terms, matrix, size_bound) -> PropertyReport:
    t0 = time.perf_counter()
    w = nontransitivity_witness(gt, terms, matrix)
    rep = PropertyReport("horpo: non-transitivity witness", instances=len(terms))
    if w:
        s, u, t = w
        rep.notes.append(f"{s} > {u} > {t} but not {s} > {t}")
    else:
        rep.notes.append(f"no witness among {len(terms)} terms of size <= {size_bound}")
    rep.elapsed = time.perf_counter() - t0
    return rep


def termination_report(terms, step_bound=50) -> PropertyReport:
    t0 = time.perf_counter()
    rep = PropertyReport(f"beta/eta reduction terminates within {step_bound} steps")
    longest = 0
    for t in terms:
        rep.instances += 1
        got = explore_reduction(t, mode=BETAETA, step_bound=step_bound)
        if isinstance(got, BoundHit):
            rep.counterexamples.append(("bound hit", t, got.chain))
        else:
            longest = max(longest, got.max_length)
    rep.notes.append(f"longest chain {longest}")
    rep.elapsed = time.perf_counter() - t0
    return rep


def run_suite(spec, enum: EnumSpec, samples: int = 200, seed=None) -> list:
    seed = DEFAULT_SEED if seed is None else seed
    sig = spec.sig
    terms = list(enumerate_terms(enum))
    reports = []
    if all(is_first_order(t) for t in terms):
        rpo = RPO(sig)
        reports.append(check_order_axioms("rpo", rpo.gt, terms))
        reports.append(oracle_agreement(sig, terms, rpo))
        reports.append(check_stability_monotonicity("rpo", rpo.gt, terms, samples, seed))
    h = Horpo(sig)
    hm = comparison_matrix(h.gt, terms)
    reports.append(check_order_axioms("horpo", h.gt, terms, ("irreflexive", "acyclic"), hm))
    reports.append(witness_report(h.gt, terms, hm, enum.max_size))
    t0 = time.perf_counter()
    rep = PropertyReport("horpo: type decrease", instances=int(hm.sum()))
    for i, j in zip(*hm.nonzero()):
        if not type_ge(sig, terms[i].type, terms[j].type):
            rep.counterexamples.append(("type", terms[i], terms[j]))
    rep.elapsed = time.perf_counter() - t0
    reports.append(rep)
    reports.append(check_stability_monotonicity("horpo", h.gt, terms, samples, seed))
    reports.append(containment("horpo", h.gt, terms))
    c = Chorpo(sig)
    cm = comparison_matrix(c.gt, terms)
    reports.append(check_order_axioms("chorpo", c.gt, terms, ("irreflexive", "acyclic"), cm))
    rep = PropertyReport("chorpo: variable condition", instances=int(cm.sum()))
    for i, j in zip(*cm.nonzero()):
        if not free_vars(terms[j]) <= free_vars(terms[i]):
            rep.counterexamples.append(("vars", terms[i], terms[j]))
    reports.append(rep)
    reports.append(containment("chorpo", c.gt, terms))
    reports.append(termination_report(terms))
    return reports
