"""Finite groups, actions on lattices and finite modules, Galois data for
quasi-trivial tori, and the decomposition of involution lattices into
trivial / sign / induced summands."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .errors import (
    NonSignCharacterOnLatticeError,
    NotAnInvolutionError,
    NotASubgroupError,
    ValidationError,
)
from .intlat import FinAbGroup, IntMatrix, Subquotient, kernel_basis, smith, solve


@dataclass(frozen=True)
class FiniteGroup:
    """Multiplication table on element ids 0..n-1.  Id 0 is the identity."""

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.table)
        for row in self.table:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise ValidationError("malformed multiplication table")
        for g in range(n):
            if self.table[0][g] != g or self.table[g][0] != g:
                raise ValidationError("id 0 is not a two-sided identity")
        for g in range(n):
            if 0 not in self.table[g]:
                raise ValidationError(f"element {g} has no inverse")
        for g in range(n):
            for h in range(n):
                for k in range(n):
                    if (
                        self.table[self.table[g][h]][k]
                        != self.table[g][self.table[h][k]]
                    ):
                        raise ValidationError("multiplication is not associative")

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return 0

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.table[g].index(0)

    def elements(self):
        return range(len(self.table))

    def element_order(self, g: int) -> int:
        n, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            n += 1
        return n

    def generator_if_cyclic(self) -> int | None:
        for g in self.elements():
            if self.element_order(g) == self.order:
                return g
        return None

    def word(self, ids) -> int:
        out = 0
        for g in ids:
            out = self.mul(out, g)
        return out

    @staticmethod
    def trivial() -> "FiniteGroup":
        return FiniteGroup(((0,),))

    @staticmethod
    def cyclic(m: int) -> "FiniteGroup":
        return FiniteGroup(
            tuple(tuple((i + j) % m for j in range(m)) for i in range(m))
        )

    @staticmethod
    def from_concrete(elements, mul, identity) -> tuple["FiniteGroup", list]:
        """Close a generating set under multiplication; returns the abstract
        group plus the element list (identity listed first)."""
        elems = [identity]
        index = {identity: 0}
        frontier = list(elements)
        for e in frontier:
            if e not in index:
                index[e] = len(elems)
                elems.append(e)
        changed = True
        while changed:
            changed = False
            for a in list(elems):
                for b in list(elems):
                    c = mul(a, b)
                    if c not in index:
                        index[c] = len(elems)
                        elems.append(c)
                        changed = True
            if len(elems) > 10000:
                raise ValidationError("generated group is unreasonably large")
        table = tuple(
            tuple(index[mul(a, b)] for b in elems) for a in elems
        )
        return FiniteGroup(table), elems

    @staticmethod
    def symmetric(n: int) -> tuple["FiniteGroup", list]:
        perms = [tuple(p) for p in itertools.permutations(range(n))]
        ident = tuple(range(n))
        perms.remove(ident)

        def mul(p, q):  # (p*q)(i) = p(q(i))
            return tuple(p[q[i]] for i in range(n))

        return FiniteGroup.from_concrete(perms, mul, ident)

    @staticmethod
    def direct_product(g1: "FiniteGroup", g2: "FiniteGroup") -> "FiniteGroup":
        pairs = [(a, b) for a in g1.elements() for b in g2.elements()]

        def mul(x, y):
            return (g1.mul(x[0], y[0]), g2.mul(x[1], y[1]))

        grp, _ = FiniteGroup.from_concrete(pairs, mul, (0, 0))
        return grp


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of `ambient`, with `embed[h] = ambient id of h`."""

    ambient: FiniteGroup
    group: FiniteGroup
    embed: tuple[int, ...]

    @property
    def index(self) -> int:
        return self.ambient.order // self.group.order

    def contains(self, g: int) -> bool:
        return g in self.embed

    def left_coset_reps(self) -> tuple[int, ...]:
        """One representative per left coset gH; the identity represents H."""
        seen = set()
        reps = []
        for g in self.ambient.elements():
            coset = frozenset(self.ambient.mul(g, h) for h in self.embed)
            if coset not in seen:
                seen.add(coset)
                reps.append(g)
        return tuple(reps)

    def coset_rep_of(self, g: int, reps) -> tuple[int, int]:
        """Split g = h * r with r a coset reference? No: g = r * h."""
        for r in reps:
            rinv_g = self.ambient.mul(self.ambient.inv(r), g)
            if rinv_g in self.embed:
                return r, self.embed.index(rinv_g)
        raise ValidationError("coset decomposition failed")


def subgroup_from_ids(G: FiniteGroup, ids) -> Subgroup:
    ids = sorted(set(ids) | {0})
    idset = set(ids)
    for a in ids:
        for b in ids:
            if G.mul(a, b) not in idset:
                raise NotASubgroupError("subset is not closed under multiplication")
    index = {g: i for i, g in enumerate(ids)}
    table = tuple(tuple(index[G.mul(a, b)] for b in ids) for a in ids)
    return Subgroup(G, FiniteGroup(table), tuple(ids))


def subgroup_generated(G: FiniteGroup, gens) -> Subgroup:
    ids = {0}
    frontier = set(gens)
    while frontier:
        ids |= frontier
        frontier = {
            G.mul(a, b) for a in ids for b in ids
        } - ids
    return subgroup_from_ids(G, ids)


@dataclass(frozen=True)
class GaloisDatum:
    """Finite image of the Galois group acting on r permuted characters,
    together with the cyclotomic character mod M (M even)."""

    group: FiniteGroup
    r: int
    M: int
    perm: tuple[tuple[int, ...], ...]  # perm[g][i] = g(i), 0-based
    chi: tuple[int, ...]

    def __post_init__(self):
        G = self.group
        if self.M < 2 or self.M % 2:
            raise ValidationError("modulus M must be even (mu_2 is always rational)")
        if len(self.perm) != G.order or len(self.chi) != G.order:
            raise ValidationError("perm/chi tables must cover the whole group")
        for p in self.perm:
            if sorted(p) != list(range(self.r)):
                raise ValidationError("perm values must be permutations of 0..r-1")
        if self.perm[0] != tuple(range(self.r)):
            raise ValidationError("identity must act trivially")
        if self.chi[0] % self.M != 1 % self.M:
            raise ValidationError("chi(identity) must be 1")
        for u in self.chi:
            if gcd(u, self.M) != 1:
                raise ValidationError("chi values must be units mod M")
        for g in G.elements():
            for h in G.elements():
                gh = G.mul(g, h)
                composed = tuple(self.perm[g][self.perm[h][i]] for i in range(self.r))
                if composed != self.perm[gh]:
                    raise ValidationError("perm is not a homomorphism")
                if (self.chi[g] * self.chi[h] - self.chi[gh]) % self.M:
                    raise ValidationError("chi is not a homomorphism")

    @staticmethod
    def from_generators(r: int, M: int, pairs) -> "GaloisDatum":
        """Build the subgroup of S_r x (Z/M)^* generated by (perm, unit) pairs.

        Permutations are 0-based tuples of length r.
        """
        gens = [(tuple(p), u % M) for p, u in pairs]
        ident = (tuple(range(r)), 1 % M)

        def mul(x, y):
            p, u = x
            q, v = y
            return (tuple(p[q[i]] for i in range(r)), (u * v) % M)

        grp, elems = FiniteGroup.from_concrete(gens, mul, ident)
        return GaloisDatum(
            grp,
            r,
            M,
            tuple(e[0] for e in elems),
            tuple(e[1] for e in elems),
        )

    def chi_inverse(self, g: int, modulus: int | None = None) -> int:
        m = self.M if modulus is None else modulus
        return pow(self.chi[g] % m, -1, m)


@dataclass(frozen=True)
class GLattice:
    """Free Z-module of finite rank with a group acting by GL_n(Z) matrices."""

    group: FiniteGroup
    rank: int
    rho: tuple[IntMatrix, ...]

    def __post_init__(self):
        G = self.group
        if len(self.rho) != G.order:
            raise ValidationError("one matrix per group element required")
        ident = IntMatrix.identity(self.rank)
        if self.rho[0].entries != ident.entries:
            raise ValidationError("identity must act as the identity matrix")
        for m in self.rho:
            if m.rows != self.rank or m.cols != self.rank:
                raise ValidationError("action matrix has wrong shape")
        for g in G.elements():
            for h in G.elements():
                if self.rho[g].mul(self.rho[h]).entries != self.rho[G.mul(g, h)].entries:
                    raise ValidationError("lattice action is not a homomorphism")

    @staticmethod
    def trivial(group: FiniteGroup, rank: int) -> "GLattice":
        ident = IntMatrix.identity(rank)
        return GLattice(group, rank, tuple(ident for _ in group.elements()))

    def direct_sum(self, other: "GLattice") -> "GLattice":
        if self.group != other.group:
            raise ValidationError("direct sum needs a common group")
        r1, r2 = self.rank, other.rank
        mats = []
        for g in self.group.elements():
            a, b = self.rho[g], other.rho[g]
            rows = []
            for i in range(r1):
                rows.append(a.entries[i] + (0,) * r2)
            for i in range(r2):
                rows.append((0,) * r1 + b.entries[i])
            mats.append(IntMatrix.from_rows(rows))
        return GLattice(self.group, r1 + r2, tuple(mats))

    def conjugate(self, B: IntMatrix) -> "GLattice":
        """Same action written in the basis given by the columns of B^-1."""
        Binv = unimodular_inverse(B)
        return GLattice(
            self.group,
            self.rank,
            tuple(B.mul(m).mul(Binv) for m in self.rho),
        )


@dataclass(frozen=True)
class CoeffModule:
    """(Z/n)^k (or Z^k when modulus is None) with a finite-group action."""

    group: FiniteGroup
    rank: int
    modulus: int | None
    action: tuple[IntMatrix, ...]

    def __post_init__(self):
        G = self.group
        n = self.modulus
        if n is not None and n < 2:
            raise ValidationError("modulus must be >= 2 when present")
        if len(self.action) != G.order:
            raise ValidationError("one matrix per group element required")
        for m in self.action:
            if m.rows != self.rank or m.cols != self.rank:
                raise ValidationError("action matrix has wrong shape")
            if n is not None and any(
                x < 0 or x >= n for row in m.entries for x in row
            ):
                raise ValidationError("entries must be reduced mod n")
        ident = IntMatrix.identity(self.rank)
        if n is not None:
            ident = ident.mod(n)
        if self.action[0].entries != ident.entries:
            raise ValidationError("identity must act as the identity matrix")
        for g in G.elements():
            for h in G.elements():
                prod = self.action[g].mul(self.action[h], modulus=n)
                if prod.entries != self.action[G.mul(g, h)].entries:
                    raise ValidationError("module action is not a homomorphism")

    @staticmethod
    def make(group, rank, modulus, matrices) -> "CoeffModule":
        mats = tuple(
            m.mod(modulus) if modulus is not None else m for m in matrices
        )
        return CoeffModule(group, rank, modulus, mats)

    @staticmethod
    def trivial(group: FiniteGroup, rank: int, modulus: int | None) -> "CoeffModule":
        ident = IntMatrix.identity(rank)
        return CoeffModule.make(group, rank, modulus, [ident] * group.order)

    @staticmethod
    def mu(group: FiniteGroup, n: int, chi_values) -> "CoeffModule":
        """Rank-1 module Z/n with g acting by the unit chi_values[g]."""
        mats = [IntMatrix.from_rows([[chi_values[g] % n]]) for g in group.elements()]
        return CoeffModule.make(group, 1, n, mats)

    def restrict(self, sub: Subgroup) -> "CoeffModule":
        return CoeffModule(
            sub.group,
            self.rank,
            self.modulus,
            tuple(self.action[sub.embed[h]] for h in sub.group.elements()),
        )

    def zero_vector(self):
        return (0,) * self.rank

    def act(self, g: int, vec):
        return self.action[g].apply(vec, modulus=self.modulus)

    def reduce(self, vec):
        if self.modulus is None:
            return tuple(vec)
        return tuple(x % self.modulus for x in vec)


def unimodular_inverse(B: IntMatrix) -> IntMatrix:
    if B.rows != B.cols:
        raise ValidationError("not square")
    s = smith(B)
    if any(d != 1 for d in s.diagonal()):
        raise ValidationError("matrix is not unimodular")
    # B = Uinv D Vinv = Uinv Vinv, so B^-1 = V U
    return s.V.mul(s.U)


def permutation_lattice(datum: GaloisDatum) -> GLattice:
    """Character lattice of the quasi-trivial torus: permutation matrices."""
    mats = []
    for g in datum.group.elements():
        p = datum.perm[g]
        mats.append(
            IntMatrix.from_rows(
                [[1 if p[j] == i else 0 for j in range(datum.r)] for i in range(datum.r)]
            )
        )
    return GLattice(datum.group, datum.r, tuple(mats))


def tate_twist(obj, chi_values, power: int = 1):
    """Multiply every action matrix entrywise by chi_values[g]^power."""
    if isinstance(obj, GLattice):
        for u in chi_values:
            if u not in (1, -1):
                raise NonSignCharacterOnLatticeError(
                    "lattice twists need a sign-valued character"
                )
        mats = tuple(
            m.scale(chi_values[g] ** (power % 2) if power % 2 else 1)
            for g, m in zip(obj.group.elements(), obj.rho)
        )
        return GLattice(obj.group, obj.rank, mats)
    if isinstance(obj, CoeffModule):
        n = obj.modulus
        mats = []
        for g, m in zip(obj.group.elements(), obj.action):
            c = chi_values[g] ** power if power >= 0 else pow(chi_values[g], power, n)
            if n is not None:
                mats.append(m.scale(c).mod(n))
            else:
                mats.append(m.scale(c))
        return CoeffModule(obj.group, obj.rank, n, tuple(mats))
    raise TypeError("tate_twist expects a GLattice or CoeffModule")


def invariants_subquotient(module: CoeffModule) -> Subquotient:
    """Fixed submodule as a Subquotient (kernel of stacked rho(g) - 1)."""
    G = module.group
    rows = []
    for g in G.elements():
        if g == 0:
            continue
        m = module.action[g]
        for i in range(module.rank):
            row = list(m.entries[i])
            row[i] -= 1
            rows.append(row)
    if not rows:
        stacked = IntMatrix.zero(0, module.rank)
    else:
        stacked = IntMatrix.from_rows(rows, ncols=module.rank)
    return Subquotient(
        stacked, IntMatrix.zero(module.rank, 0), modulus=module.modulus
    )


def invariants_finite(module: CoeffModule) -> FinAbGroup:
    return invariants_subquotient(module).group


CANONICAL_TRIVIAL = "trivial"


@dataclass(frozen=True)
class C2Decomposition:
    a: int  # trivial summands Z
    b: int  # sign summands Z(1)
    c: int  # induced rank-2 summands
    B: IntMatrix  # B * S * B^-1 is the canonical block matrix

    def canonical_matrix(self) -> IntMatrix:
        n = self.a + self.b + 2 * self.c
        rows = [[0] * n for _ in range(n)]
        for i in range(self.a):
            rows[i][i] = 1
        for i in range(self.a, self.a + self.b):
            rows[i][i] = -1
        for t in range(self.c):
            i = self.a + self.b + 2 * t
            rows[i][i + 1] = 1
            rows[i + 1][i] = 1
        return IntMatrix.from_rows(rows, ncols=n)


def _basis_completion(W: IntMatrix) -> IntMatrix:
    """Extend the columns of W (spanning a primitive sublattice) to a basis."""
    s = smith(W)
    if any(d != 1 for d in s.diagonal()):
        raise ValidationError("columns do not span a primitive sublattice")
    extra = [s.u_inv.column(j) for j in range(W.cols, W.rows)]
    cols = W.columns() + extra
    return IntMatrix.from_columns(cols, nrows=W.rows)


def _saturation(W: IntMatrix) -> IntMatrix:
    """Basis of the saturation {x : k*x in span(W) for some k > 0}."""
    s = smith(W)
    rank = sum(1 for d in s.diagonal() if d)
    return IntMatrix.from_columns(
        [s.u_inv.column(j) for j in range(rank)], nrows=W.rows
    )


def c2_decompose(S: IntMatrix) -> C2Decomposition:
    """Split an integral involution into trivial/sign/induced blocks.

    Induced summands are split off recursively: a generator g of the 2-torsion
    quotient N/(N+ + N-) spans, together with Sg, a free rank-2 invariant
    summand, and an equivariant projector onto it (built from any integral
    functional dual to g) yields an invariant complement.
    """
    n = S.rows
    if S.cols != n or S.mul(S).entries != IntMatrix.identity(n).entries:
        raise NotAnInvolutionError("matrix is not an involution")

    ident = IntMatrix.identity(n)
    s_minus_1 = S.add(ident.neg())
    s_plus_1 = S.add(ident)
    plus = kernel_basis(s_minus_1)
    minus = kernel_basis(s_plus_1)

    both = IntMatrix.from_columns(plus + minus, nrows=n)
    quot = Subquotient(IntMatrix.zero(0, n), both)
    c = len(quot.group.torsion)
    assert all(t == 2 for t in quot.group.torsion) and quot.group.free_rank == 0
    a = len(plus) - c
    b = len(minus) - c

    if c == 0:
        cols = plus + minus
        b_inv = IntMatrix.from_columns(cols, nrows=n) if n else IntMatrix.zero(0, 0)
        B = unimodular_inverse(b_inv) if n else IntMatrix.zero(0, 0)
        return C2Decomposition(a, b, c, B)

    g0 = quot.group.generators[0]
    # saturate span(g0, S g0): an induced rank-2 sublattice, then rebuild an
    # honest Ind basis (w, Sw) from generators of its (anti-)fixed lines
    L0 = IntMatrix.from_columns([g0, S.apply(g0)], nrows=n)
    Lsat = _saturation(L0)
    lam_plus = kernel_basis(s_minus_1.mul(Lsat))
    lam_minus = kernel_basis(s_plus_1.mul(Lsat))
    if len(lam_plus) != 1 or len(lam_minus) != 1:
        raise ValidationError("saturated sublattice is not of induced type")
    p = Lsat.apply(lam_plus[0])
    mvec = Lsat.apply(lam_minus[0])
    if any((x + y) % 2 for x, y in zip(p, mvec)):
        raise ValidationError("induced basis reconstruction failed")
    g = tuple((x + y) // 2 for x, y in zip(p, mvec))
    Sg = S.apply(g)
    L = IntMatrix.from_columns([g, Sg], nrows=n)
    full = _basis_completion(L)
    full_inv = unimodular_inverse(full)
    psi = full_inv.row(0)  # functional with psi(g)=1, psi(Sg)=0
    psi_s = tuple(
        sum(psi[i] * S.entries[i][j] for i in range(n)) for j in range(n)
    )
    # equivariant projector onto span(g, Sg)
    proj = IntMatrix.from_rows(
        [
            [g[i] * psi[j] + Sg[i] * psi_s[j] for j in range(n)]
            for i in range(n)
        ]
    )
    comp = kernel_basis(proj)
    K = IntMatrix.from_columns(comp, nrows=n)
    # restriction of S to the complement, in the K-coordinates
    SK = S.mul(K)
    s_small_cols = []
    ksnf = smith(K)
    for j in range(SK.cols):
        x = solve(K, SK.column(j), snf=ksnf)
        if x is None:
            raise ValidationError("complement is not S-invariant")
        s_small_cols.append(x)
    S_small = IntMatrix.from_columns(s_small_cols, nrows=K.cols)
    sub = c2_decompose(S_small)

    # reassemble: canonical order is (trivial, sign, induced pairs)
    sub_basis = K.mul(unimodular_inverse(sub.B))  # ambient vectors
    aa, bb, cc = sub.a, sub.b, sub.c
    cols = []
    cols += [sub_basis.column(j) for j in range(aa)]
    cols += [sub_basis.column(j) for j in range(aa, aa + bb)]
    cols += [g, tuple(Sg)]
    cols += [sub_basis.column(j) for j in range(aa + bb, aa + bb + 2 * cc)]
    b_inv = IntMatrix.from_columns(cols, nrows=n)
    B = unimodular_inverse(b_inv)
    out = C2Decomposition(aa, bb, cc + 1, B)
    if B.mul(S).mul(b_inv).entries != out.canonical_matrix().entries:
        raise ValidationError("decomposition verification failed")
    assert (aa, bb, cc + 1) == (a, b, c)
    return out


def involution_lattice(S: IntMatrix) -> GLattice:
    """C2-lattice defined by a single involution matrix."""
    if S.mul(S).entries != IntMatrix.identity(S.rows).entries:
        raise NotAnInvolutionError("matrix is not an involution")
    return GLattice(FiniteGroup.cyclic(2), S.rows, (IntMatrix.identity(S.rows), S))


def pair_module(datum: GaloisDatum, m: int) -> CoeffModule:
    """The module of level-m symbols (y_i, y_j): basis e_ij (i < j), with
    g . e_ij = chi(g)^{-1} * sign * e_{g(i) g(j)} (alternating convention)."""
    if m < 2:
        raise ValidationError("modulus must be >= 2")
    r = datum.r
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    index = {p: t for t, p in enumerate(pairs)}
    mats = []
    for g in datum.group.elements():
        if gcd(datum.chi[g] % m, m) != 1:
            raise ValidationError("chi values must be units mod the given modulus")
        u = pow(datum.chi[g] % m, -1, m)
        p = datum.perm[g]
        rows = [[0] * len(pairs) for _ in pairs]
        for (i, j), t in index.items():
            gi, gj = p[i], p[j]
            sign = 1
            if gi > gj:
                gi, gj = gj, gi
                sign = -1
            rows[index[(gi, gj)]][t] = (sign * u) % m
        mats.append(IntMatrix.from_rows(rows, ncols=len(pairs)))
    return CoeffModule(datum.group, len(pairs), m, tuple(mats))
