import random

import pytest

from torusbrauer.errors import (
    NonSignCharacterOnLatticeError,
    NotAnInvolutionError,
    ValidationError,
)
from torusbrauer.groups import (
    C2Decomposition,
    CoeffModule,
    FiniteGroup,
    GaloisDatum,
    GLattice,
    c2_decompose,
    invariants_finite,
    involution_lattice,
    pair_module,
    permutation_lattice,
    subgroup_from_ids,
    subgroup_generated,
    tate_twist,
    unimodular_inverse,
)
from torusbrauer.intlat import IntMatrix


def swap_datum_qi():
    # Q(i)/Q norm-restriction torus: C2 swapping two characters, chi(s) = 3 mod 4
    return GaloisDatum.from_generators(2, 4, [((1, 0), 3)])


def s3_datum():
    return GaloisDatum.from_generators(
        3, 2, [((1, 0, 2), 1), ((0, 2, 1), 1)]
    )


class TestFiniteGroup:
    def test_cyclic(self):
        g = FiniteGroup.cyclic(6)
        assert g.order == 6
        assert g.element_order(1) == 6
        assert g.generator_if_cyclic() is not None

    def test_symmetric(self):
        s3, elems = FiniteGroup.symmetric(3)
        assert s3.order == 6
        assert s3.generator_if_cyclic() is None
        orders = sorted(s3.element_order(g) for g in s3.elements())
        assert orders == [1, 2, 2, 2, 3, 3]

    def test_direct_product(self):
        v4 = FiniteGroup.direct_product(FiniteGroup.cyclic(2), FiniteGroup.cyclic(2))
        assert v4.order == 4
        assert all(v4.element_order(g) <= 2 for g in v4.elements())

    def test_bad_table_rejected(self):
        with pytest.raises(ValidationError):
            FiniteGroup(((0, 1), (1, 1)))

    def test_subgroups(self):
        s3, _ = FiniteGroup.symmetric(3)
        rot = next(g for g in s3.elements() if s3.element_order(g) == 3)
        sub = subgroup_generated(s3, [rot])
        assert sub.group.order == 3
        assert sub.index == 2
        assert len(sub.left_coset_reps()) == 2
        refl = next(g for g in s3.elements() if s3.element_order(g) == 2)
        reps = sub.left_coset_reps()
        r, h = sub.coset_rep_of(refl, reps)
        assert s3.mul(r, sub.embed[h]) == refl


class TestGaloisDatum:
    def test_qi_datum(self):
        d = swap_datum_qi()
        assert d.group.order == 2
        assert d.chi[1] == 3

    def test_odd_modulus_rejected(self):
        with pytest.raises(ValidationError):
            GaloisDatum.from_generators(2, 3, [((1, 0), 2)])

    def test_nonunit_rejected(self):
        with pytest.raises(ValidationError):
            GaloisDatum.from_generators(2, 4, [((1, 0), 2)])


class TestPermutationLattice:
    def test_trivial(self):
        d = GaloisDatum.from_generators(3, 2, [])
        lat = permutation_lattice(d)
        assert lat.rank == 3
        assert lat.rho[0].entries == IntMatrix.identity(3).entries

    def test_swap(self):
        lat = permutation_lattice(swap_datum_qi())
        assert lat.rho[1].entries == ((0, 1), (1, 0))

    def test_s3(self):
        lat = permutation_lattice(s3_datum())
        for g in lat.group.elements():
            m = lat.rho[g]
            assert sorted(m.column(j) for j in range(3)) == [
                (0, 0, 1),
                (0, 1, 0),
                (1, 0, 0),
            ]


class TestTateTwist:
    def test_sign_twist_trivial_lattice(self):
        c2 = FiniteGroup.cyclic(2)
        lat = GLattice.trivial(c2, 1)
        tw = tate_twist(lat, (1, -1))
        assert tw.rho[1].entries == ((-1,),)

    def test_power_zero(self):
        c2 = FiniteGroup.cyclic(2)
        lat = involution_lattice(IntMatrix.from_rows([[0, 1], [1, 0]]))
        assert tate_twist(lat, (1, -1), 0).rho == lat.rho

    def test_ind_twist(self):
        lat = involution_lattice(IntMatrix.from_rows([[0, 1], [1, 0]]))
        tw = tate_twist(lat, (1, -1))
        assert tw.rho[1].entries == ((0, -1), (-1, 0))

    def test_non_sign_rejected(self):
        c2 = FiniteGroup.cyclic(2)
        lat = GLattice.trivial(c2, 1)
        with pytest.raises(NonSignCharacterOnLatticeError):
            tate_twist(lat, (1, 3))


class TestInvariants:
    def test_trivial_action(self):
        c2 = FiniteGroup.cyclic(2)
        m = CoeffModule.trivial(c2, 1, 4)
        g = invariants_finite(m)
        assert g.torsion == (4,)

    def test_negation_mod4(self):
        c2 = FiniteGroup.cyclic(2)
        m = CoeffModule.mu(c2, 4, (1, -1))
        g = invariants_finite(m)
        assert g.torsion == (2,)
        assert g.generators[0] in ((2,),)

    def test_swap_mod2(self):
        c2 = FiniteGroup.cyclic(2)
        swap = IntMatrix.from_rows([[0, 1], [1, 0]])
        m = CoeffModule.make(c2, 2, 2, [IntMatrix.identity(2), swap])
        g = invariants_finite(m)
        assert g.torsion == (2,)
        assert g.generators[0] == (1, 1)


def random_unimodular(n, rng, steps=10):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-1, 1])
        for k in range(n):
            m[i][k] += c * m[j][k]
    return IntMatrix.from_rows(m)


def canonical_involution(a, b, c):
    return C2Decomposition(a, b, c, IntMatrix.identity(a + b + 2 * c)).canonical_matrix()


def exhaustive_c2_oracle(S):
    """Search small unimodular base changes for the canonical form (rank <= 2)."""
    n = S.rows
    from itertools import product

    for entries in product(range(-2, 3), repeat=n * n):
        B = IntMatrix.from_rows(
            [list(entries[i * n : (i + 1) * n]) for i in range(n)]
        )
        if abs(B.det()) != 1:
            continue
        conj = B.mul(S).mul(unimodular_inverse(B))
        for a in range(n + 1):
            for b in range(n + 1 - a):
                if (n - a - b) % 2:
                    continue
                c = (n - a - b) // 2
                if conj.entries == canonical_involution(a, b, c).entries:
                    return a, b, c
    return None


class TestC2Decompose:
    def test_identity(self):
        d = c2_decompose(IntMatrix.identity(2))
        assert (d.a, d.b, d.c) == (2, 0, 0)

    def test_ind(self):
        d = c2_decompose(IntMatrix.from_rows([[0, 1], [1, 0]]))
        assert (d.a, d.b, d.c) == (0, 0, 1)

    def test_skew_example_matches_exhaustive_oracle(self):
        S = IntMatrix.from_rows([[1, 2], [0, -1]])
        d = c2_decompose(S)
        assert d.a + d.b + 2 * d.c == 2
        conj = d.B.mul(S).mul(unimodular_inverse(d.B))
        assert conj.entries == d.canonical_matrix().entries
        assert exhaustive_c2_oracle(S) == (d.a, d.b, d.c)

    def test_not_involution(self):
        with pytest.raises(NotAnInvolutionError):
            c2_decompose(IntMatrix.from_rows([[2]]))

    def test_random_conjugates(self):
        rng = random.Random(11)
        for a, b, c in [(1, 1, 0), (0, 1, 1), (1, 0, 1), (0, 0, 2), (2, 1, 0)]:
            S0 = canonical_involution(a, b, c)
            for _ in range(8):
                P = random_unimodular(S0.rows, rng)
                S = P.mul(S0).mul(unimodular_inverse(P))
                d = c2_decompose(S)
                assert (d.a, d.b, d.c) == (a, b, c)
                conj = d.B.mul(S).mul(unimodular_inverse(d.B))
                assert conj.entries == d.canonical_matrix().entries
                # Lefschetz sanity: trace = a - b
                tr = sum(S.entries[i][i] for i in range(S.rows))
                assert tr == d.a - d.b


class TestPairModule:
    def test_trivial_r3(self):
        d = GaloisDatum.from_generators(3, 2, [])
        m = pair_module(d, 2)
        assert m.rank == 3 and m.modulus == 2
        assert all(
            mat.entries == IntMatrix.identity(3).mod(2).entries for mat in m.action
        )

    def test_qi_action_is_trivial(self):
        m = pair_module(swap_datum_qi(), 4)
        assert m.rank == 1
        # s . e12 = -chi(s)^{-1} e12 = -3 = 1 mod 4
        assert m.action[1].entries == ((1,),)

    def test_s3_mod2_permutes_pairs(self):
        d = s3_datum()
        m = pair_module(d, 2)
        assert m.rank == 3
        for g in d.group.elements():
            mat = m.action[g]
            assert sorted(mat.column(j) for j in range(3)) == [
                (0, 0, 1),
                (0, 1, 0),
                (1, 0, 0),
            ]
