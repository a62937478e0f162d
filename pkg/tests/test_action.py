import pytest

from rootfold.action import (
    DatumAction,
    FiniteGroup,
    actions_commute,
    coinvariants,
    fixed_weyl,
    make_action,
    orbit,
    orthogonal_orbit,
)
from rootfold.errors import InvalidActionError
from rootfold.lattice import identity_matrix, mat_mul, mat_vec
from rootfold.rootdatum import from_cartan_type, weyl_group


def flip_matrix(n):
    """Coordinate reversal, the diagram flip on sc weight coordinates."""
    return tuple(tuple(int(j == n - 1 - i) for j in range(n)) for i in range(n))


def a2_flip():
    b = from_cartan_type("A2:sc")
    return make_action(b, [(flip_matrix(2), "s")])


def a3_flip():
    b = from_cartan_type("A3:sc")
    return make_action(b, [(flip_matrix(3), "s")])


def trivial_action(based):
    return make_action(based, [], group=FiniteGroup.trivial())


# ---------------------------------------------------------------------------
# FiniteGroup


def test_finite_group_cyclic():
    g = FiniteGroup.cyclic(4)
    assert len(g) == 4
    assert g.identity == 0
    assert g.mul(1, 3) == 0
    assert g.inv(1) == 3
    assert g.generating_set == (1,)


def test_finite_group_rejects_bad_table():
    with pytest.raises(ValueError):
        FiniteGroup(("e", "a"), ((0, 1), (1, 1)))
    with pytest.raises(ValueError):
        # Z/4 table corrupted at one entry: breaks associativity
        t = [[0, 1, 2, 3], [1, 2, 3, 0], [2, 3, 0, 0], [3, 0, 1, 2]]
        FiniteGroup((0, 1, 2, 3), t)


def test_direct_product():
    g = FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
    assert len(g) == 4
    assert all(g.mul(x, x) == g.identity for x in g.elements())


# ---------------------------------------------------------------------------
# make_action


def test_a2_flip_is_valid_z2_action():
    act = a2_flip()
    assert len(act.group) == 2
    assert act.is_based
    s = next(a for a in act.images if not a.is_identity())
    assert s.apply((2, -1)) == (-1, 2)  # swaps the simple roots


def test_non_permuting_generator_rejected():
    b = from_cartan_type("A2:sc")
    with pytest.raises(InvalidActionError):
        make_action(b, [(((1, 0), (0, 2)), "s")])


def test_non_unimodular_generator_rejected():
    b = from_cartan_type("A2:sc")
    with pytest.raises(InvalidActionError):
        make_action(b, [(((2, 0), (0, 2)), "s")])


def test_trivial_group_action():
    b = from_cartan_type("A2:sc")
    act = trivial_action(b)
    assert act.is_trivial()


def test_base_stabilization_enforced():
    b = from_cartan_type("A2:sc")
    neg = tuple(tuple(-int(i == j) for j in range(2)) for i in range(2))
    with pytest.raises(InvalidActionError):
        make_action(b, [(neg, "s")])
    # the same matrix is fine on the unbased datum
    act = make_action(b.datum, [(neg, "s")])
    assert len(act.group) == 2


def test_explicit_group_homomorphism_check():
    b = from_cartan_type("A2:sc")
    g = FiniteGroup.cyclic(2)
    act = make_action(b, [(flip_matrix(2), 1)], group=g)
    assert act.images[0].is_identity()
    # a non-faithful extension over Z/4 is legitimate
    act4 = make_action(b, [(flip_matrix(2), 1)], group=FiniteGroup.cyclic(4))
    assert act4.images[2].is_identity()
    with pytest.raises(InvalidActionError):
        # inconsistent: 1+1 = 2 would force flip^2 = flip
        make_action(b, [(flip_matrix(2), 1), (flip_matrix(2), 2)],
                    group=FiniteGroup.cyclic(4))


def test_closure_builds_group_table():
    b = from_cartan_type("A2:sc").datum
    neg = tuple(tuple(-int(i == j) for j in range(2)) for i in range(2))
    act = make_action(b, [(neg, "m")])
    assert len(act.group) == 2


# ---------------------------------------------------------------------------
# orbits


def test_orbit_a2_flip():
    act = a2_flip()
    d = act.datum
    a1, a2 = d.index_of((2, -1)), d.index_of((-1, 2))
    assert orbit(act, a1) == tuple(sorted((a1, a2)))


def test_orbit_fixed_root_a3():
    act = a3_flip()
    d = act.datum
    a2 = d.index_of((-1, 2, -1))
    assert orbit(act, a2) == (a2,)


def test_orbit_trivial_action():
    b = from_cartan_type("A2:sc")
    act = trivial_action(b)
    for i in range(len(b.datum.roots)):
        assert orbit(act, i) == (i,)


def test_orthogonal_orbit_a2_flip_merges_pair():
    # <alpha1, alpha2^vee> = -1, so the orbit is non-orthogonal and the
    # attached set is the singleton {alpha1 + alpha2}
    act = a2_flip()
    d = act.datum
    a1 = d.index_of((2, -1))
    assert d.pair((2, -1), d.coroots[d.index_of((-1, 2))]) == -1
    assert orthogonal_orbit(act, a1) == (d.index_of((1, 1)),)


def test_orthogonal_orbit_a3_flip_keeps_pair():
    act = a3_flip()
    d = act.datum
    a1 = d.index_of((2, -1, 0))
    a3 = d.index_of((0, -1, 2))
    assert d.pair(d.roots[a1], d.coroots[a3]) == 0
    assert orthogonal_orbit(act, a1) == tuple(sorted((a1, a3)))


def test_orthogonal_orbit_singleton():
    act = a3_flip()
    d = act.datum
    a2 = d.index_of((-1, 2, -1))
    assert orthogonal_orbit(act, a2) == (a2,)


def test_orthogonal_orbit_requires_base():
    d = from_cartan_type("A2:sc").datum
    act = make_action(d, [(flip_matrix(2), "s")])
    with pytest.raises(InvalidActionError):
        orthogonal_orbit(act, 0)


def test_orthogonal_orbit_flags_malformed_upstream_action():
    # bypass validation to fake a "based" action that does not stabilize
    # the base: the pair-sum machinery must refuse it, signalling that
    # the precondition was violated upstream
    b = from_cartan_type("A2:sc")
    d = b.datum
    from rootfold.rootdatum import DatumAutomorphism, reflection

    s1 = reflection(d, d.index_of((2, -1)))
    fake = DatumAction(
        group=FiniteGroup.cyclic(2),
        images=(DatumAutomorphism.identity(2), s1),
        target=b,
    )
    a2 = d.index_of((-1, 2))
    with pytest.raises(InvalidActionError):
        # orbit of the second simple root under s1 is {a2, a1+a2}, whose
        # sum 2*a1... is not handled by any orthogonal-orbit rule
        orthogonal_orbit(fake, a2)


def test_orthogonal_orbit_is_orthogonal_and_stable():
    # whatever the input orbit looked like, the attached set must be
    # pairwise orthogonal and stable under the action
    from rootfold.selftest import node_permutation_matrix

    tri = node_permutation_matrix({0: 2, 1: 1, 2: 3, 3: 0}, 4)
    actions = [
        a2_flip(),
        a3_flip(),
        make_action(from_cartan_type("D4:sc"), [(tri, "t")]),
        make_action(from_cartan_type("A4:sc"), [(flip_matrix(4), "s")]),
    ]
    for act in actions:
        d = act.datum
        for i in range(len(d.roots)):
            xi = orthogonal_orbit(act, i)
            for a in xi:
                for b in xi:
                    if a != b:
                        assert d.pair(d.roots[a], d.coroots[b]) == 0
            for p in act.root_perms:
                assert frozenset(p[k] for k in xi) == frozenset(xi)


def test_orbit_coroot_sum_dichotomy():
    # sum over the orbit of <beta, theta^vee> is 2 for orthogonal orbits
    # and 1 for non-orthogonal ones
    for act in [a2_flip(), a3_flip()]:
        d = act.datum
        for i in range(len(d.roots)):
            orb = orbit(act, i)
            total = sum(d.pair(d.roots[i], d.coroots[t]) for t in orb)
            orthogonal = all(
                d.pair(d.roots[a], d.coroots[b]) == 0
                for a in orb for b in orb if a != b)
            assert total == (2 if orthogonal else 1)
            xi = orthogonal_orbit(act, i)
            assert len(orb) % len(xi) == 0
            assert len(orb) // len(xi) in (1, 2)


# ---------------------------------------------------------------------------
# coinvariants


def test_coinvariants_a2_flip():
    cv = coinvariants(a2_flip())
    assert cv.free_rank == 1
    assert cv.projection == ((1, 1),)  # (a, b) -> a + b
    assert cv.fixed_basis == ((1, 1),)
    assert cv.pairing == ((1,),)
    assert cv.torsion == ()


def test_coinvariants_trivial():
    b = from_cartan_type("A2:sc")
    cv = coinvariants(trivial_action(b))
    assert cv.projection == identity_matrix(2)
    assert cv.pairing == identity_matrix(2)


def test_coinvariants_a3_flip():
    cv = coinvariants(a3_flip())
    assert cv.free_rank == 2
    assert set(cv.fixed_basis) == {(1, 0, 1), (0, 1, 0)}
    from rootfold.lattice import det
    assert abs(det(cv.pairing)) == 1


def test_coinvariants_average_formula():
    # the embedding of the quotient must average preimages over the group
    act = a2_flip()
    cv = coinvariants(act)
    d = act.datum
    for k in range(d.rank):
        e = identity_matrix(d.rank)[k]
        xbar = cv.project(e)
        lifted = mat_vec(cv.average, xbar)
        avg = [0] * d.rank
        for aut in act.images:
            img = aut.apply(e)
            avg = [a + x for a, x in zip(avg, img)]
        expected = tuple(
            __import__("fractions").Fraction(a, len(act.group)) for a in avg)
        assert tuple(lifted) == expected


# ---------------------------------------------------------------------------
# fixed Weyl subgroup


def test_fixed_weyl_a2_flip():
    act = a2_flip()
    fw = fixed_weyl(act)
    assert len(fw) == 2
    d = act.datum
    nontrivial = next(w for w in fw if not w.is_identity())
    # the order-2 fixed element is the reflection in the merged root
    from rootfold.rootdatum import reflection
    assert nontrivial.on_characters == reflection(d, d.index_of((1, 1))).on_characters


def test_fixed_weyl_a3_flip():
    assert len(fixed_weyl(a3_flip())) == 8


def test_fixed_weyl_trivial_action():
    b = from_cartan_type("A2:sc")
    act = trivial_action(b)
    assert len(fixed_weyl(act)) == len(weyl_group(b.datum))


def test_fixed_weyl_acts_faithfully_on_quotient():
    # distinct fixed elements induce distinct maps on the coinvariants
    for act in [a2_flip(), a3_flip()]:
        cv = coinvariants(act)
        fw = fixed_weyl(act)
        induced = set()
        for w in fw:
            m = mat_mul(cv.projection, mat_mul(w.on_characters, cv.section))
            # well-defined: the composite must kill every relation
            for aut in act.images:
                diff = mat_mul(cv.projection, w.on_characters)
                assert mat_mul(diff, aut.on_characters) == diff
            induced.add(m)
        assert len(induced) == len(fw)


def test_actions_commute():
    act = a2_flip()
    b = from_cartan_type("A2:sc")
    triv = trivial_action(b)
    assert actions_commute(act, act)
    d = act.datum
    neg = make_action(d, [(tuple(tuple(-int(i == j) for j in range(2))
                                 for i in range(2)), "m")])
    assert actions_commute(act, neg)
