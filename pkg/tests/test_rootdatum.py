from math import factorial

import pytest

from rootfold.errors import EnumerationOverflow, UnknownTypeError
from rootfold.lattice import integer_kernel, mat_vec
from rootfold.rootdatum import (
    BasedRootDatum,
    RootDatum,
    base_of,
    canonical_base,
    classify,
    from_cartan_type,
    is_positive_system,
    is_reduced,
    positive_systems,
    reflection,
    root_permutation,
    verify_axioms,
    verify_base,
    weyl_group,
)


def test_a1_sc_realization():
    b = from_cartan_type("A1:sc")
    d = b.datum
    assert set(d.roots) == {(2,), (-2,)}
    assert set(d.coroots) == {(1,), (-1,)}
    assert verify_axioms(d) == []
    assert verify_base(b) == []


def test_a1_ad_realization():
    d = from_cartan_type("A1:ad").datum
    assert set(d.roots) == {(1,), (-1,)}
    assert set(d.coroots) == {(2,), (-2,)}
    assert verify_axioms(d) == []


def test_a2_sc_realization():
    b = from_cartan_type("A2:sc")
    d = b.datum
    assert len(d.roots) == 6
    assert {(2, -1), (-1, 2), (1, 1)} <= set(d.roots)
    assert set(b.simple_coroots) == {(1, 0), (0, 1)}
    assert verify_axioms(d) == []
    assert verify_base(b) == []


def test_verify_axioms_rejects_bad_pairing():
    d = RootDatum(1, ((2,), (-2,)), ((2,), (-2,)))
    problems = verify_axioms(d)
    assert any("expected 2" in p for p in problems)


def test_verify_axioms_rejects_missing_negative():
    d = RootDatum(1, ((2,),), ((1,),))
    problems = verify_axioms(d)
    assert any("negation" in p for p in problems)


def test_reflection_a1():
    d = from_cartan_type("A1:sc").datum
    i = d.index_of((2,))
    w = reflection(d, i)
    assert w.apply((1,)) == (-1,)


def test_reflection_a2_formula_oracle():
    # oracle: apply x - <x, coroot> root directly, independent of the
    # matrix construction inside reflection()
    d = from_cartan_type("A2:sc").datum
    i = d.index_of((2, -1))
    w = reflection(d, i)
    for x in [(1, 0), (0, 1), (3, -2), (1, 1)]:
        n = d.pair(x, d.coroots[i])
        expect = tuple(a - n * b for a, b in zip(x, d.roots[i]))
        assert w.apply(x) == expect
    assert w.apply((1, 0)) == (-1, 1)
    assert w.apply((0, 1)) == (0, 1)


def test_reflection_is_involution():
    for spec in ["A2:sc", "B2:sc", "G2:ad", "BC2"]:
        d = from_cartan_type(spec).datum
        for i in range(len(d.roots)):
            w = reflection(d, i)
            assert (w * w).is_identity()


def test_reflection_fixes_pairing_hyperplane():
    d = from_cartan_type("A2:sc").datum
    for i in range(len(d.roots)):
        cov_row = (mat_vec(d.pairing_matrix, d.coroots[i]),)
        w = reflection(d, i)
        for v in integer_kernel(cov_row):
            assert w.apply(v) == v
        assert w.apply(d.roots[i]) == tuple(-x for x in d.roots[i])


WEYL_TABLE = [
    ("A1:sc", 2, 2),
    ("A2:sc", 6, 6),
    ("A3:sc", 12, 24),
    ("A4:sc", 20, 120),
    ("B2:sc", 8, 8),
    ("B3:sc", 18, 48),
    ("C3:sc", 18, 48),
    ("D4:sc", 24, 192),
    ("G2:sc", 12, 12),
    ("BC1", 4, 2),
    ("BC2", 12, 8),
]


@pytest.mark.parametrize("spec,nroots,order", WEYL_TABLE)
def test_weyl_orders_by_enumeration(spec, nroots, order):
    b = from_cartan_type(spec)
    d = b.datum
    assert verify_axioms(d) == []
    assert len(d.roots) == nroots
    assert len(weyl_group(d)) == order
    assert len(weyl_group(d, base=b.base)) == order


def test_weyl_a_series_matches_factorials():
    for n in range(1, 5):
        d = from_cartan_type(f"A{n}:sc").datum
        assert len(d.roots) == n * (n + 1)
        assert len(weyl_group(d)) == factorial(n + 1)


def test_weyl_group_closure_properties():
    d = from_cartan_type("A2:sc").datum
    w = weyl_group(d)
    mats = {a.on_characters for a in w}
    for a in w:
        assert a.inverse().on_characters in mats
        for b in w:
            assert (a * b).on_characters in mats
        assert root_permutation(d, a) is not None


def test_weyl_enumeration_overflow():
    d = from_cartan_type("A3:sc").datum
    with pytest.raises(EnumerationOverflow):
        weyl_group(d, bound=5)


def test_from_cartan_type_unknown():
    for bad in ["Z2", "A0", "E9", "BC0", "F5", "A2:xx", "A9"]:
        with pytest.raises(UnknownTypeError):
            from_cartan_type(bad)


def test_product_datum():
    b = from_cartan_type("A1:sc x A1:sc")
    d = b.datum
    assert d.rank == 2
    assert set(d.roots) == {(2, 0), (-2, 0), (0, 2), (0, -2)}
    assert verify_axioms(d) == []
    assert classify(d) == [("A1", 2)]
    assert len(weyl_group(d)) == 4


CLASSIFY_ROUNDTRIP = [
    "A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4",
    "D4", "D5", "G2", "F4", "BC1", "BC2", "BC3",
]


@pytest.mark.parametrize("name", CLASSIFY_ROUNDTRIP)
def test_classify_roundtrip(name):
    tag = "" if name.startswith("BC") else ":sc"
    d = from_cartan_type(name + tag).datum
    assert classify(d) == [(name, 1)]


def test_classify_ad_realization_matches():
    assert classify(from_cartan_type("A3:ad").datum) == [("A3", 1)]
    assert classify(from_cartan_type("B3:ad").datum) == [("B3", 1)]


def test_classify_b2_c2_identified():
    # B2 and C2 are the same root system up to relabeling; the rank-2
    # member of the B/C family is reported as B2
    assert classify(from_cartan_type("C2:sc").datum) == [("B2", 1)]


def test_positive_systems_a1():
    d = from_cartan_type("A1:sc").datum
    assert len(positive_systems(d)) == 2


def test_positive_systems_a2():
    d = from_cartan_type("A2:sc").datum
    systems = positive_systems(d)
    assert len(systems) == 6
    for s in systems:
        assert is_positive_system(d, s)


def test_base_of_a2():
    d = from_cartan_type("A2:sc").datum
    pos = frozenset(d.index_of(v) for v in [(2, -1), (-1, 2), (1, 1)])
    assert is_positive_system(d, pos)
    base = base_of(d, pos)
    assert {d.roots[i] for i in base} == {(2, -1), (-1, 2)}


def test_positive_system_count_equals_weyl_order():
    for spec in ["A1:sc", "A2:sc", "A3:sc", "B2:sc", "B3:ad", "G2:sc",
                 "A1:sc x A1:sc", "BC2"]:
        b = from_cartan_type(spec)
        assert len(positive_systems(b.datum)) == len(weyl_group(b.datum))


def test_is_reduced():
    assert is_reduced(from_cartan_type("A2:sc").datum)
    assert not is_reduced(from_cartan_type("BC1").datum)


def test_bc1_realization():
    b = from_cartan_type("BC1")
    d = b.datum
    assert list(zip(d.roots, d.coroots)) == sorted(
        zip(d.roots, d.coroots))
    pairs = dict(zip(d.roots, d.coroots))
    assert pairs[(1,)] == (2,)
    assert pairs[(2,)] == (1,)
    assert verify_axioms(d) == []
    assert b.simple_roots == ((1,),)
    assert verify_base(b) == []


def test_canonical_base_is_valid():
    # the canonical base need not equal the constructed one, but it
    # must be a valid base of the same datum, of the same size
    for spec in ["A2:sc", "B3:sc", "D4:sc", "BC2"]:
        b = from_cartan_type(spec)
        cb = canonical_base(b.datum)
        assert len(cb) == len(b.base)
        assert verify_base(BasedRootDatum(b.datum, cb)) == []


def test_verify_base_rejects_bad_base():
    b = from_cartan_type("A2:sc")
    d = b.datum
    bad = BasedRootDatum(d, (d.index_of((2, -1)), d.index_of((1, 1))))
    assert verify_base(bad) != []


def skew_realization(datum, u, v):
    """The same datum written in independently changed bases on the two
    lattices, which forces an explicit nontrivial pairing matrix."""
    from rootfold.lattice import mat_mul, mat_vec, transpose, unimodular_inverse

    pairing = mat_mul(transpose(unimodular_inverse(u)), unimodular_inverse(v))
    return RootDatum(
        datum.rank,
        tuple(mat_vec(u, r) for r in datum.roots),
        tuple(mat_vec(v, c) for c in datum.coroots),
        pairing,
    )


def test_explicit_pairing_realizations():
    u = ((1, 1), (0, 1))
    v = ((1, 0), (2, 1))
    for spec in ["A2:sc", "B2:sc", "BC2"]:
        d = from_cartan_type(spec).datum
        skew = skew_realization(d, u, v)
        assert skew.pairing_matrix != ((1, 0), (0, 1))
        assert verify_axioms(skew) == []
        assert classify(skew) == classify(d)
        assert len(weyl_group(skew)) == len(weyl_group(d))
        assert len(positive_systems(skew)) == len(positive_systems(d))


def test_explicit_pairing_isomorphism_search():
    # the isomorphism search must bridge a standard realization and a
    # skewed one with a genuinely different pairing matrix
    from rootfold.action import FiniteGroup, make_action
    from rootfold.twist import equivariant_isomorphic

    d = from_cartan_type("A2:sc").datum
    skew = skew_realization(d, ((1, 1), (0, 1)), ((1, 0), (2, 1)))
    a1 = make_action(d, [], group=FiniteGroup.trivial())
    a2 = make_action(skew, [], group=FiniteGroup.trivial())
    iso = equivariant_isomorphic(d, [a1], skew, [a2])
    assert iso is not None
    # the map must carry roots to roots with matching coroots
    from rootfold.lattice import mat_vec

    for i in range(len(d.roots)):
        j = skew.index_of(mat_vec(iso.on_characters, d.roots[i]))
        assert mat_vec(iso.on_cocharacters, d.coroots[i]) == skew.coroots[j]


def test_weyl_group_with_torus_factor():
    # rank 2 datum whose roots span only a line: matrix closure path
    d = RootDatum(2, ((2, 0), (-2, 0)), ((1, 0), (-1, 0)))
    assert not d.is_semisimple
    assert verify_axioms(d) == []
    w = weyl_group(d)
    assert len(w) == 2
    nontriv = next(a for a in w if not a.is_identity())
    assert nontriv.apply((0, 1)) == (0, 1)  # torus direction fixed
    assert len(positive_systems(d)) == 2
