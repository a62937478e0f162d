"""Finite groups acting on root data by automorphisms.

The abstract group and its matrix image are kept separate so that
non-faithful actions work (a Galois quotient may act trivially).  A
based action must stabilize the base setwise; that is exactly the
precondition for the orbit machinery used by folding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import EnumerationOverflow, InvalidActionError
from .lattice import (
    det,
    identity_matrix,
    mat_mul,
    mat_vec,
    quotient_lattice,
    integer_kernel,
    transpose,
    vec_sub,
)
from .rootdatum import (
    BasedRootDatum,
    DatumAutomorphism,
    WeylGroup,
    contragredient,
    root_permutation,
    weyl_group,
)

CLOSURE_BOUND = 10 ** 4


class FiniteGroup:
    """A finite group as labels plus a multiplication table on indices."""

    def __init__(self, labels, table, identity_label=None, check=True):
        self.labels = tuple(labels)
        self.table = tuple(tuple(row) for row in table)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("duplicate element labels")
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("multiplication table has wrong shape")
        if any(x < 0 or x >= n for row in self.table for x in row):
            raise ValueError("multiplication table entry out of range")
        ident = None
        for e in range(n):
            if all(self.table[e][x] == x == self.table[x][e] for x in range(n)):
                ident = e
                break
        if ident is None:
            raise ValueError("no identity element")
        if identity_label is not None and self.labels[ident] != identity_label:
            raise ValueError("declared identity does not act as identity")
        self.identity = ident
        self._inverse = []
        for x in range(n):
            inv = next((y for y in range(n)
                        if self.table[x][y] == ident == self.table[y][x]), None)
            if inv is None:
                raise ValueError(f"element {self.labels[x]!r} has no inverse")
            self._inverse.append(inv)
        if check:
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        if (self.table[self.table[a][b]][c]
                                != self.table[a][self.table[b][c]]):
                            raise ValueError("multiplication table not associative")

    def __len__(self):
        return len(self.labels)

    def elements(self):
        return range(len(self.labels))

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inverse[a]

    def index_of(self, label):
        return self.labels.index(label)

    @cached_property
    def generating_set(self):
        """A small deterministic generating set (greedy closure)."""
        n = len(self.labels)
        gens = []
        closure = {self.identity}
        while len(closure) < n:
            nxt = next(x for x in range(n) if x not in closure)
            gens.append(nxt)
            frontier = [self.identity]
            closure = {self.identity}
            while frontier:
                new = []
                for x in frontier:
                    for g in gens:
                        y = self.table[x][g]
                        if y not in closure:
                            closure.add(y)
                            new.append(y)
                frontier = new
        return tuple(gens)

    @classmethod
    def trivial(cls):
        return cls(("e",), ((0,),), check=False)

    @classmethod
    def cyclic(cls, n):
        labels = tuple(range(n))
        table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        return cls(labels, table, check=False)

    @classmethod
    def direct_product(cls, g, h):
        labels = tuple((a, b) for a in g.labels for b in h.labels)
        nh = len(h)
        table = []
        for a in range(len(g)):
            for b in range(nh):
                row = []
                for c in range(len(g)):
                    for d in range(nh):
                        row.append(g.mul(a, c) * nh + h.mul(b, d))
                table.append(row)
        return cls(labels, table, check=False)


def _require_automorphism(datum, matrix, context):
    if len(matrix) != datum.rank or any(len(r) != datum.rank for r in matrix):
        raise InvalidActionError(f"{context}: matrix has wrong shape")
    if abs(det(matrix)) != 1:
        raise InvalidActionError(f"{context}: matrix is not unimodular")
    aut = DatumAutomorphism(
        matrix,
        contragredient(matrix, None if datum.has_standard_pairing else datum.pairing_matrix),
    )
    if root_permutation(datum, aut) is None:
        raise InvalidActionError(
            f"{context}: matrix does not permute the roots compatibly with coroots")
    return aut


@dataclass(frozen=True)
class DatumAction:
    """A homomorphism from a finite abstract group into the automorphisms
    of a (possibly based) root datum."""

    group: FiniteGroup
    images: tuple
    target: object  # RootDatum | BasedRootDatum

    @property
    def datum(self):
        return self.target.datum if isinstance(self.target, BasedRootDatum) else self.target

    @property
    def is_based(self):
        return isinstance(self.target, BasedRootDatum)

    def image(self, element):
        return self.images[element]

    @cached_property
    def root_perms(self):
        return tuple(root_permutation(self.datum, a) for a in self.images)

    def is_trivial(self):
        return all(a.is_identity() for a in self.images)

    @classmethod
    def build(cls, group, images, target):
        """Validate and construct: images must be a homomorphism of
        datum automorphisms, stabilizing the base when target is based."""
        datum = target.datum if isinstance(target, BasedRootDatum) else target
        images = tuple(images)
        if len(images) != len(group):
            raise InvalidActionError("one image per group element is required")
        auts = []
        for i, im in enumerate(images):
            mat = im.on_characters if isinstance(im, DatumAutomorphism) else tuple(map(tuple, im))
            auts.append(_require_automorphism(datum, mat, f"element {group.labels[i]!r}"))
        ident = identity_matrix(datum.rank)
        if auts[group.identity].on_characters != ident:
            raise InvalidActionError("identity element must act trivially")
        for a in group.elements():
            for b in group.elements():
                prod = mat_mul(auts[a].on_characters, auts[b].on_characters)
                if prod != auts[group.mul(a, b)].on_characters:
                    raise InvalidActionError(
                        f"images are not a homomorphism at "
                        f"({group.labels[a]!r}, {group.labels[b]!r})")
        action = cls(group, tuple(auts), target)
        if isinstance(target, BasedRootDatum):
            base_set = {datum.roots[i] for i in target.base}
            for i, aut in enumerate(auts):
                if {tuple(aut.apply(r)) for r in base_set} != base_set:
                    raise InvalidActionError(
                        f"element {group.labels[i]!r} does not stabilize the base")
        return action


def make_action(target, generators, group="closure", closure_bound=CLOSURE_BOUND):
    """Build a DatumAction.

    ``generators`` is a list of (matrix, label) pairs.  With
    group="closure" the matrices are closed into a finite matrix group
    (bound ``closure_bound``) and the abstract group is read off from
    it.  With an explicit FiniteGroup, each label must name a group
    element, the labeled elements must generate, and the assignment must
    extend to a homomorphism.
    """
    datum = target.datum if isinstance(target, BasedRootDatum) else target
    gen_auts = []
    for mat, label in generators:
        mat = tuple(tuple(int(x) for x in row) for row in mat)
        gen_auts.append((label, _require_automorphism(datum, mat, f"generator {label!r}")))

    if group == "closure":
        ident = DatumAutomorphism.identity(datum.rank)
        seen = {ident.on_characters: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for w in frontier:
                for _, g in gen_auts:
                    c = g * w
                    if c.on_characters not in seen:
                        seen[c.on_characters] = c
                        nxt.append(c)
            if len(seen) > closure_bound:
                raise EnumerationOverflow(
                    f"generator closure exceeds {closure_bound} elements")
            frontier = nxt
        elements = sorted(seen.values(), key=lambda a: a.sort_key())
        index = {a.on_characters: i for i, a in enumerate(elements)}
        table = tuple(
            tuple(index[mat_mul(a.on_characters, b.on_characters)] for b in elements)
            for a in elements
        )
        grp = FiniteGroup(tuple(range(len(elements))), table, check=False)
        return DatumAction.build(grp, elements, target)

    grp = group
    assigned = {}
    for label, aut in gen_auts:
        try:
            idx = grp.index_of(label)
        except ValueError:
            raise InvalidActionError(f"generator label {label!r} is not a group element")
        assigned[idx] = aut
    images = {grp.identity: DatumAutomorphism.identity(datum.rank)}
    images.update(assigned)
    frontier = list(images)
    while frontier:
        nxt = []
        for x in frontier:
            for g in assigned:
                y = grp.mul(x, g)
                prod = images[x] * images[g]
                if y in images:
                    if images[y].on_characters != prod.on_characters:
                        raise InvalidActionError(
                            "generator assignment is inconsistent with the group table")
                else:
                    images[y] = prod
                    nxt.append(y)
        frontier = nxt
    if len(images) != len(grp):
        raise InvalidActionError("the labeled generators do not generate the group")
    return DatumAction.build(grp, tuple(images[i] for i in grp.elements()), target)


def orbit(action, root_index):
    """The orbit of a root index, canonically ordered."""
    seen = {root_index}
    frontier = [root_index]
    while frontier:
        nxt = []
        for i in frontier:
            for p in action.root_perms:
                j = p[i]
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return tuple(sorted(seen))


def orthogonal_orbit(action, root_index):
    """The orthogonal orbit attached to a root: the orbit itself when its
    members pairwise pair to zero, else the set of sums of the unique
    non-orthogonal partner pairs.  Requires a based action; a failure of
    the uniqueness or root-sum property means the base precondition was
    violated upstream."""
    if not action.is_based:
        raise InvalidActionError("orthogonal orbits require a based action")
    datum = action.datum
    orb = orbit(action, root_index)
    pairs_nonzero = {
        (i, j)
        for i in orb for j in orb
        if i != j and datum.pair(datum.roots[i], datum.coroots[j]) != 0
    }
    if not pairs_nonzero:
        return orb
    sums = set()
    for theta in orb:
        partners = [j for j in orb if (theta, j) in pairs_nonzero]
        if len(partners) != 1:
            raise InvalidActionError(
                f"root {theta} has {len(partners)} non-orthogonal partners in its orbit")
        total = tuple(a + b for a, b in zip(datum.roots[theta], datum.roots[partners[0]]))
        k = datum.root_index.get(total)
        if k is None:
            raise InvalidActionError(
                f"sum of the non-orthogonal pair at root {theta} is not a root")
        if k in orb:
            raise InvalidActionError(
                f"sum of the non-orthogonal pair at root {theta} lies in the orbit")
        sums.add(k)
    return tuple(sorted(sums))


@dataclass(frozen=True)
class Coinvariants:
    """The maps around the coinvariant quotient of the character lattice
    and the fixed sublattice of the cocharacter lattice.

    projection : free coinvariant quotient map (free_rank x n)
    section    : integer right inverse of projection
    average    : rational embedding of the quotient into the character
                 space, landing in the fixed subspace (n x free_rank)
    fixed_basis: basis of the fixed cocharacter lattice (tuple of vectors)
    pairing    : restricted pairing matrix, unimodular (free_rank square)
    torsion    : invariant factors > 1 of the coinvariant torsion
    """

    action: DatumAction
    projection: tuple
    section: tuple
    average: tuple
    fixed_basis: tuple
    pairing: tuple
    torsion: tuple

    @property
    def free_rank(self):
        return len(self.projection)

    def project(self, v):
        return mat_vec(self.projection, v)

    def fixed_matrix(self):
        """Fixed cocharacter basis vectors as columns (n x free_rank)."""
        return transpose(self.fixed_basis)


def coinvariants(action):
    """Compute the coinvariant quotient, the fixed cocharacter lattice,
    and the restricted pairing, verifying every structural identity."""
    datum = action.datum
    n = datum.rank
    relations = []
    for aut in action.images:
        if aut.is_identity():
            continue
        for k in range(n):
            e = identity_matrix(n)[k]
            r = vec_sub(e, aut.apply(e))
            if any(r):
                relations.append(r)
    quotient = quotient_lattice(n, tuple(relations))
    stacked = []
    for aut in action.images:
        if aut.is_identity():
            continue
        delta = tuple(
            tuple(aut.on_cocharacters[i][j] - int(i == j) for j in range(n))
            for i in range(n)
        )
        stacked.extend(delta)
    if stacked:
        fixed_basis = integer_kernel(tuple(stacked))
    else:
        fixed_basis = tuple(identity_matrix(n))

    size = len(action.group)
    avg_full = tuple(
        tuple(
            Fraction(sum(aut.on_characters[i][j] for aut in action.images), size)
            for j in range(n)
        )
        for i in range(n)
    )
    average = mat_mul(avg_full, quotient.section) if quotient.free_rank else tuple(
        () for _ in range(n))

    f = quotient.free_rank
    if len(fixed_basis) != f:
        raise AssertionError(
            "fixed cocharacter rank differs from coinvariant free rank")
    if f:
        # pairing[p][q] = <section e_p, fixed_q> through the source pairing
        fixed_cols = transpose(fixed_basis)
        paired_cols = (fixed_cols if datum.has_standard_pairing
                       else mat_mul(datum.pairing_matrix, fixed_cols))
        pairing = mat_mul(transpose(quotient.section), paired_cols)
    else:
        pairing = ()
    cv = Coinvariants(
        action=action,
        projection=quotient.projection,
        section=quotient.section,
        average=average,
        fixed_basis=fixed_basis,
        pairing=pairing,
        torsion=quotient.torsion_invariants,
    )
    _check_coinvariants(cv)
    return cv


def _check_coinvariants(cv):
    action = cv.action
    datum = action.datum
    n = datum.rank
    f = cv.free_rank
    for aut in action.images:
        # projection factors through the group: P(gamma x) = P(x)
        if mat_mul(cv.projection, aut.on_characters) != cv.projection:
            raise AssertionError("projection is not invariant under the action")
        # the averaged embedding lands in the fixed subspace
        if mat_mul(aut.on_characters, cv.average) != cv.average:
            raise AssertionError("averaged embedding is not fixed by the action")
        # fixed cocharacter basis really is fixed
        for v in cv.fixed_basis:
            if aut.apply_cochar(v) != v:
                raise AssertionError("fixed cocharacter basis vector moves")
    if f:
        if mat_mul(cv.projection, cv.section) != identity_matrix(f):
            raise AssertionError("section is not a right inverse")
        if abs(det(cv.pairing)) != 1:
            raise AssertionError("restricted pairing is not perfect")
        # the restricted pairing is computable through preimages:
        # pairing[p][q] = <section e_p, fixed_q>, and transposing the
        # projection against it recovers the inclusion
        fixed_cols = cv.fixed_matrix()
        paired_cols = (fixed_cols if datum.has_standard_pairing
                       else mat_mul(datum.pairing_matrix, fixed_cols))
        lhs = mat_mul(transpose(mat_mul(cv.section, cv.projection)), paired_cols)
        if lhs != paired_cols:
            raise AssertionError("projection is not the transpose of the inclusion")
        # preimage independence: the averaged embedding composed with the
        # projection is the plain group average, and relation vectors
        # pair to zero against every fixed cocharacter
        size = len(action.group)
        avg_full = tuple(
            tuple(Fraction(sum(a.on_characters[i][j] for a in action.images), size)
                  for j in range(n))
            for i in range(n)
        )
        if mat_mul(cv.average, cv.projection) != avg_full:
            raise AssertionError("embedding depends on the choice of preimage")
        for aut in action.images:
            for k in range(n):
                e = identity_matrix(n)[k]
                rel = vec_sub(e, aut.apply(e))
                for v in cv.fixed_basis:
                    if datum.pair(rel, v) != 0:
                        raise AssertionError(
                            "pairing depends on the choice of preimage")


def fixed_weyl(action, weyl=None, bound=None):
    """The subgroup of Weyl elements commuting with every group image."""
    from .rootdatum import WEYL_BOUND

    datum = action.datum
    if weyl is None:
        base = action.target.base if action.is_based else None
        weyl = weyl_group(datum, base=base, bound=bound or WEYL_BOUND)
    gens = [action.images[g] for g in action.group.generating_set]
    gens = [g for g in gens if not g.is_identity()]
    fixed = []
    for w in weyl:
        wm = w.on_characters
        if all(mat_mul(g.on_characters, wm) == mat_mul(wm, g.on_characters)
               for g in gens):
            fixed.append(w)
    return WeylGroup(fixed)


def actions_commute(a, b):
    """Elementwise commutation of two actions on the same datum."""
    if a.datum is not b.datum and a.datum != b.datum:
        return False
    for x in a.images:
        for y in b.images:
            if mat_mul(x.on_characters, y.on_characters) != mat_mul(
                    y.on_characters, x.on_characters):
                return False
    return True
