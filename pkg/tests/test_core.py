import pytest

from hoprove.core import (
    BETA,
    BETAETA,
    ETA,
    Abs,
    App,
    Arrow,
    BVar,
    Sort,
    Var,
    alpha_eq,
    annotate,
    bound_vars,
    flattenings,
    free_var_names,
    lam,
    normal_forms,
    positions,
    reduce_step,
    replace_at,
    show,
    spine,
    strict_subterms,
    substitute,
    subterm_at,
    typecheck,
)
from hoprove.errors import (
    ArityMismatch,
    DomainMismatch,
    InvalidPosition,
    NonArrowApplied,
    TypeMismatch,
    UnboundVariable,
)
from hoprove.parser import parse_spec, parse_term

N = Sort("N")
NN = Arrow(N, N)

SIG = parse_spec("""
sort N;
fun a : N;  fun b : N;
fun f : N -> N;
fun g : N * N -> N;
fun rec : N * N * (N -> N -> N) -> N;
var x, y, z : N;
var u : N -> N;
var U : N;  var V : N -> N -> N;  var X : N;
""")
ENV = SIG.env


def term(text):
    return parse_term(SIG.sig, ENV, text)


def test_typecheck_variable():
    assert typecheck({"x": N}, Var("x")) == N


def test_typecheck_recursor_application():
    assert typecheck(ENV, term("rec(a, U, V)")) == N


def test_typecheck_errors():
    sym = SIG.sig.symbols
    from hoprove.core import Fun

    with pytest.raises(NonArrowApplied):
        typecheck(ENV, App(Var("x"), Var("x")))
    with pytest.raises(UnboundVariable):
        typecheck({}, Var("nope"))
    with pytest.raises(ArityMismatch):
        typecheck(ENV, Fun(sym["g"], (Var("x"),)))
    with pytest.raises(ArityMismatch):
        typecheck(ENV, Fun(sym["f"], (Var("u"),)))
    with pytest.raises(DomainMismatch):
        typecheck(ENV, App(Var("u"), Var("u")))


def test_typecheck_is_deterministic_on_annotated_terms():
    t = term(r"\w:N. u (f(w))")
    assert typecheck(ENV, t) == typecheck(ENV, annotate(ENV, t)) == NN


def test_free_vars():
    assert free_var_names(term(r"\w:N. g(f(y), w)")) == {"y"}
    assert free_var_names(term("x")) == {"x"}
    assert free_var_names(term("rec(f(X), U, V)")) == {"X", "U", "V"}
    assert bound_vars(term(r"\w:N. g(f(y), w)")) == {"w"}


def test_alpha_equivalence():
    assert alpha_eq(term(r"\p:N. p"), term(r"\q:N. q"))
    assert not alpha_eq(term(r"\x:N. y"), term(r"\y:N. y"))
    assert alpha_eq(term(r"\p:N. u p"), term(r"\q:N. u q"))


def test_substitution_simple_and_beta():
    assert substitute(term("x"), {"x": term("f(a)")}) == term("f(a)")
    redex = term(r"(\p:N. g(p, p)) f(a)")
    ((pos, r),) = reduce_step(redex, BETA)
    assert pos == () and r == term("g(f(a), f(a))")


def test_substitution_avoids_capture():
    t = term(r"\y:N. g(x, y)")
    out = substitute(t, {"x": term("y")})
    assert out == lam(Var("z", N), term("g(y, z)"))
    assert show(out) == r"\y1:N. g(y, y1)"


def test_substitution_type_mismatch():
    with pytest.raises(TypeMismatch):
        substitute(term("f(x)"), {"x": term("u")})


def test_substitution_respects_alpha():
    s, t = term(r"\p:N. g(p, x)"), term(r"\q:N. g(q, x)")
    assert substitute(s, {"x": term("y")}) == substitute(t, {"x": term("y")})


def test_reduce_step_cases():
    assert reduce_step(term(r"(\p:N. p) a"), BETA) == [((), term("a"))]
    assert reduce_step(term(r"\p:N. u p"), ETA) == [((), term("u"))]
    assert reduce_step(term("a"), BETAETA) == []
    # the eta side condition: the bound variable must not occur in the function part
    assert reduce_step(term(r"\p:N. V p p"), ETA) == []


def test_subject_reduction_on_nested_redexes():
    t = term(r"(\p:N. (\q:N. g(p, q)) a) ((\r:N. f(r)) b)")
    for _, r in reduce_step(t, BETAETA):
        assert typecheck(ENV, r) == typecheck(ENV, t)
    assert normal_forms(t) == term("g(f(b), a)")


def test_positions_and_replacement():
    t = term("g(a, f(b))")
    assert subterm_at(t, [2, 1]) == term("b")
    assert replace_at(term("f(a)"), [1], term("b")) == term("f(b)")
    assert strict_subterms(term("f(X)")) == {term("X")}
    assert len(positions(t)) == 4
    with pytest.raises(InvalidPosition):
        subterm_at(t, [3])
    with pytest.raises(TypeMismatch):
        replace_at(t, [1], term("u"))


def test_replace_under_binder_keeps_binding():
    t = term(r"\p:N. g(p, a)")
    out = replace_at(t, [1, 2], term("b"))
    assert out == term(r"\p:N. g(p, b)")


def test_spine_and_flattenings():
    t = term("V X U")
    head, args = spine(t)
    assert head == term("V") and args == [term("X"), term("U")]
    fl = flattenings(t)
    assert [len(a) for _, a in fl] == [2, 1]
    assert fl[1][0] == term("V X")


def test_show_roundtrips_through_parser():
    for text in [r"\p:N. u (f(p))", "V X (rec(X, U, V))", r"(\p:N. p) a", r"\p:N. \q:N. g(q, p)"]:
        t = term(text)
        assert term(show(t)) == t


def test_locally_nameless_shape():
    t = term(r"\p:N. p")
    assert isinstance(t, Abs) and t.body == BVar(0, N)
