from fractions import Fraction as F

import pytest

from invbilin import tensors as T
from invbilin.catalog import (FIXTURE_TAGS, T2_COEFFS, T2_PRINTED, TAGS, get_operator,
                              make_op_id, parse_kind, kind_name, registry, supported)
from invbilin.tensors import Forms, Function, TensorField
from invbilin.verify import input_basis


def test_registry_size_and_names():
    assert len(TAGS) == 21
    assert not set(TAGS) & set(FIXTURE_TAGS)
    ops = registry()
    assert {o["tag"] for o in ops} == set(TAGS)
    for o in ops:
        assert "§" not in o["formula"]


@pytest.mark.parametrize("text", ["form(2)", "polyvector(1)", "symtensor(3)", "vvform(1)",
                                  "function", "dual(vvform(2))"])
def test_kind_names_roundtrip(text):
    assert kind_name(parse_kind(text)) == text


def test_unknown_operator_and_parameter():
    with pytest.raises(ValueError, match="unknown operator"):
        get_operator("P9", 2)
    with pytest.raises(ValueError, match="no parameter"):
        get_operator("P6", 2, bogus=1)
    with pytest.raises(ValueError, match="only for n = 1"):
        get_operator("T2", 2)


def test_op_id_is_canonical():
    a = make_op_id("P6", 2, mu="1/2", nu=F(-1, 3))
    b = make_op_id("P6", 2, nu="-1/3", mu=F(1, 2))
    assert a == b and str(a) == "P6(mu=1/2,nu=-1/3,p=1,q=0)"


def test_signature_mismatch():
    op = get_operator("P6", 1)
    good = TensorField(1, Forms(1), {(0,): {(1,): 1}}, F(1, 2))
    wrong_twist = TensorField(1, Forms(1), {(0,): {(1,): 1}}, 0)
    g = TensorField(1, Forms(0), {(): {(2,): 1}}, F(-1, 3))
    op.apply(good, g)
    with pytest.raises(ValueError, match="signature mismatch"):
        op.apply(wrong_twist, g)


def test_traceless_constraint_enforced():
    op = get_operator("N", 2)
    K = TensorField(2, T.vvform(1), {((0,), (0,)): {(0, 0): 1}})
    with pytest.raises(ValueError, match="not traceless"):
        op.apply(K, K)


def test_p6_example_is_invariant_at_one_point():
    from invbilin.verify import residual
    op = get_operator("P6", 1, p=0, q=0, mu=1, nu=1)
    s1 = TensorField(1, Forms(0), {(): {(1,): 1}}, 1)
    s2 = TensorField(1, Forms(0), {(): {(0,): 1}}, 1)
    from invbilin.jets import FieldMonomial
    assert residual(op, FieldMonomial((2,), 0), s1, s2).is_zero()


def test_t2_value():
    op = get_operator("T2", 1)
    one = TensorField(1, Function(), {(): {(0,): 1}}, F(-2, 3))
    cube = TensorField(1, Function(), {(): {(3,): 1}}, F(-2, 3))
    out = op.apply(one, cube)
    # only f g''' contributes: -2 * 6
    assert out.comps == {(): {(0,): F(-12)}} and out.twist == F(5, 3)


def test_t2_printed_variants_coincide():
    a, b = T2_PRINTED.values()
    assert a == b == T2_COEFFS


@pytest.mark.parametrize("tag", TAGS)
def test_order_accounting(tag):
    """Monomial inputs of degrees b, c give outputs of degree b + c - order."""
    # traceless vector valued 2-forms vanish in dimension 2
    n = {"T2": 1, "N": 3}.get(tag, 2)
    if not supported(tag, n):
        pytest.skip("not defined in this dimension")
    op = get_operator(tag, n)
    seen = False
    for b in range(op.order, op.order + 2):
        for c in range(0, 3):
            for s1 in input_basis(op.inputs[0], n, b):
                for s2 in input_basis(op.inputs[1], n, c):
                    out = op.apply(s1, s2)
                    if not out.is_zero():
                        seen = True
                        assert {sum(e) for _, e, _ in out.terms()} == {b + c - op.order}
    assert seen


def test_invariant_flags():
    for tag in TAGS:
        n = 1 if tag == "T2" else 2
        if supported(tag, n):
            assert get_operator(tag, n).invariant
    assert not get_operator("P6_broken", 1).invariant
    assert not get_operator("DIVDIV", 2).invariant
