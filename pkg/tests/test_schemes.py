from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jordanlab.cayley import abelian_group, abelian_invariants, cyclic_group
from jordanlab.closures import ClosureKind, closure
from jordanlab.errors import (
    KTooLarge,
    NotAbelian,
    NotAGroup,
    NotAJC,
    NotAJordanScheme,
    NotNonRegularThinJS,
)
from jordanlab.named import quaternion8, s3
from jordanlab.rainbow import (
    ExactMatrix,
    classify_rainbow,
    combinatorial_isomorphism,
    relabel_points,
    same_partition,
    standard_basis,
    trivial_rainbow,
)
from jordanlab.loops import scheme_from_loop
from jordanlab.schemes import (
    analyze,
    closure_witness,
    construct_jcal,
    intersection_numbers,
    is_proper_js,
    jordan_triple_check,
    ratio_report,
    recognize_nonregular_thin,
    span_membership,
    symmetrization_membership_check,
    symmetrized_sum,
    symmetrize,
)

from corpus import directed_cycle, o16, order_two_example, thin_group_scheme
from oracles import ExactSpan, assoc_tensor, jordan_tensor

A, J = ClosureKind.ASSOCIATIVE, ClosureKind.JORDAN


def test_thin_z3_numbers():
    z3 = thin_group_scheme(cyclic_group(3))
    # colors: 0 = identity, then g and g^2 in canonical order
    g = 1
    g2 = 2
    assert intersection_numbers(z3, A)[g, g, g2] == 1
    assert intersection_numbers(z3, J)[g, g, g2] == 2
    for s in range(3):
        assert intersection_numbers(z3, A)[0, s, s] == 1


def test_tensors_match_matrix_products():
    for cm in (thin_group_scheme(s3()), order_two_example(), construct_jcal(cyclic_group(3)).cm):
        jt = intersection_numbers(cm, J)
        assert np.array_equal(jt.dense(), jordan_tensor(cm.colors))
        at = intersection_numbers(cm, A)
        if at is not None:
            assert np.array_equal(at.dense(), assoc_tensor(cm.colors))


def test_non_closed_witness():
    seed = standard_basis([directed_cycle(5)])
    assert intersection_numbers(seed, A) is None
    w = closure_witness(seed, A)
    assert w is not None
    assert w.counts[0] != w.counts[1]
    # the witness cells really see different path counts
    ind = seed.indicators()
    prod = ind[w.i] @ ind[w.j]
    (a1, b1), (a2, b2) = w.cells
    assert prod[a1, b1] == w.counts[0] and prod[a2, b2] == w.counts[1]
    assert seed.colors[a1, b1] == seed.colors[a2, b2] == w.t


def test_row_sums():
    cm = thin_group_scheme(s3())
    at = intersection_numbers(cm, A)
    sizes = cm.class_sizes()
    ind = cm.indicators()
    for i in range(cm.rank):
        for j in range(cm.rank):
            total = sum(at[i, j, t] * sizes[t] for t in range(cm.rank))
            assert total == (ind[i] @ ind[j]).sum()


def test_order_two_example_record():
    rec = analyze(order_two_example())
    assert not rec.is_cc and rec.is_jc and rec.is_js and not rec.is_as
    assert rec.proper_js is True
    rep = ratio_report(order_two_example())
    assert rep.ratio == Fraction(3, 2) and rep.bound_tight
    assert rep.split == ((0,), (1,))


@pytest.mark.parametrize("factors,order,rank", [((1,), 2, 3), ((2,), 4, 6), ((3,), 6, 9), ((2, 2), 8, 12)])
def test_jcal(factors, order, rank):
    rec = construct_jcal(abelian_group(*factors))
    assert (rec.cm.n, rec.cm.rank) == (order, rank)
    assert rec.is_js and not rec.is_cc
    info = classify_rainbow(rec.cm)
    assert info.thin and not info.regular
    assert ratio_report(rec.cm).bound_tight
    assert closure(rec.cm, J) == rec.cm


def test_jcal_z1_is_order_two_example():
    assert same_partition(construct_jcal(cyclic_group(1)).cm, order_two_example())


def test_jcal_errors():
    with pytest.raises(NotAbelian):
        construct_jcal(s3())
    from jordanlab.cayley import CayleyTable
    bad = CayleyTable(np.array([[0, 1, 2], [1, 0, 2], [2, 2, 0]]))
    with pytest.raises(NotAGroup):
        construct_jcal(bad)


def test_ratio_examples():
    z5 = thin_group_scheme(cyclic_group(5))
    rep = ratio_report(z5)
    assert rep.ratio == 1 and not rep.bound_tight and rep.split is None
    with pytest.raises(NotAJordanScheme):
        ratio_report(standard_basis([directed_cycle(5)]))


def test_recognize_examples(rng):
    r = recognize_nonregular_thin(construct_jcal(cyclic_group(4)).cm)
    assert abelian_invariants(r.group) == [4]
    cm = construct_jcal(abelian_group(2, 2)).cm
    moved = relabel_points(cm, rng.permutation(cm.n))
    r = recognize_nonregular_thin(moved)
    assert abelian_invariants(r.group) == [2, 2]
    assert same_partition(relabel_points(moved, r.conjugator), construct_jcal(r.group).cm)
    with pytest.raises(NotNonRegularThinJS):
        recognize_nonregular_thin(thin_group_scheme(cyclic_group(5)))


def test_recognize_round_trip_isomorphic():
    for G in (cyclic_group(3), abelian_group(2, 2)):
        cm = construct_jcal(G).cm
        again = construct_jcal(recognize_nonregular_thin(cm).group).cm
        assert combinatorial_isomorphism(cm, again) is not None


def test_symmetrize_examples():
    z5 = thin_group_scheme(cyclic_group(5))
    sym = symmetrize(z5)
    assert sym.rank == 3 and analyze(sym).is_js
    assert symmetrize(sym) == sym
    k4 = thin_group_scheme(abelian_group(2, 2))
    assert same_partition(symmetrize(k4), k4)


def test_properness():
    z5 = thin_group_scheme(cyclic_group(5))
    assert is_proper_js(z5)  # not symmetric
    assert not is_proper_js(symmetrize(z5))
    assert not is_proper_js(trivial_rainbow(4))
    o = scheme_from_loop(o16()).scheme
    assert o.is_js and not o.is_cc and o.proper_js
    with pytest.raises(NotAJordanScheme):
        is_proper_js(standard_basis([directed_cycle(5)]))


def test_span_membership_examples():
    z5 = thin_group_scheme(cyclic_group(5))
    assert span_membership(z5, ExactMatrix.ones(5)) == [1] * 5
    coeffs = span_membership(z5, ExactMatrix.identity(5))
    assert coeffs == [1, 0, 0, 0, 0]
    o = scheme_from_loop(o16()).scheme.cm
    ind = o.indicators()
    outside = [(i, j) for i in range(o.rank) for j in range(o.rank)
               if span_membership(o, ind[i] @ ind[j]) is None]
    assert outside  # the octonion-loop scheme is not coherent
    span = ExactSpan(o.colors)
    for i, j in outside[:5]:
        assert not span.contains(ind[i] @ ind[j])
        assert span.contains(ind[i] @ ind[j] + ind[j] @ ind[i])


def test_structure_invariants_on_ccs():
    for cm in (thin_group_scheme(s3()), thin_group_scheme(quaternion8()), symmetrize(thin_group_scheme(cyclic_group(7)))):
        at, jt = intersection_numbers(cm, A).dense(), intersection_numbers(cm, J).dense()
        assert np.array_equal(jt, at + at.transpose(1, 0, 2))
        assert closure(cm, A) == cm


def test_symmetric_js_is_regular():
    for cm in (symmetrize(thin_group_scheme(cyclic_group(7))), trivial_rainbow(5)):
        assert classify_rainbow(cm).regular


def test_membership_identity_examples(rng):
    z5 = thin_group_scheme(cyclic_group(5))
    e = [1, 0, 0, 0, 0]
    assert jordan_triple_check(z5, e, e, e)
    for _ in range(100):
        a, b, c = (rng.integers(-5, 6, size=5).tolist() for _ in range(3))
        assert jordan_triple_check(z5, a, b, c)
        assert jordan_triple_check(z5, a, b, a)
    o = scheme_from_loop(o16()).scheme.cm
    vecs = [[Fraction(int(x), int(d)) for x, d in zip(rng.integers(-3, 4, 16), rng.integers(1, 4, 16))] for _ in range(3)]
    assert symmetrization_membership_check(o, *vecs)
    jz3 = construct_jcal(cyclic_group(3)).cm
    vecs = [rng.integers(-3, 4, 9).tolist() for _ in range(4)]
    assert symmetrization_membership_check(jz3, *vecs)
    assert symmetrization_membership_check(jz3, *vecs[:2])


def test_membership_identity_errors():
    seed = standard_basis([directed_cycle(5)])
    with pytest.raises(NotAJC):
        jordan_triple_check(seed, [1] * 4, [1] * 4, [1] * 4)
    z3 = thin_group_scheme(cyclic_group(3))
    with pytest.raises(KTooLarge):
        symmetrization_membership_check(z3, *([[1, 0, 0]] * 7))


def test_symmetrized_sum_matches_permutation_sum(rng):
    from itertools import permutations
    mats = [rng.integers(-2, 3, size=(3, 3)) for _ in range(4)]
    brute = sum(np.linalg.multi_dot([mats[i] for i in p]) for p in permutations(range(4)))
    assert np.array_equal(symmetrized_sum(mats), brute)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6).flatmap(
    lambda n: st.lists(st.integers(0, 2), min_size=n * n, max_size=n * n).map(
        lambda xs: standard_basis([np.array(xs).reshape(n, n)], n))))
def test_well_definedness_duality(seed):
    for kind in (A, J):
        assert (intersection_numbers(seed, kind) is not None) == (closure(seed, kind) == seed)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6).flatmap(
    lambda n: st.lists(st.integers(0, 2), min_size=n * n, max_size=n * n).map(
        lambda xs: standard_basis([np.array(xs).reshape(n, n)], n))))
def test_flag_invariants_and_ratio(seed):
    for cm in (closure(seed, A), closure(seed, J)):
        rec = analyze(cm)
        assert not rec.is_cc or rec.is_jc
        homog = len(cm.diagonal_colors) == 1
        assert rec.is_as == (rec.is_cc and homog)
        assert rec.is_js == (rec.is_jc and homog)
        if rec.is_js:
            info = classify_rainbow(cm)
            assert info.ratio <= Fraction(3, 2)
            assert (info.ratio == Fraction(3, 2)) == (info.thin and not info.regular)
