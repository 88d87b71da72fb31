"""Integer row lattices in Hermite-style echelon form, and the multiplicative
group of nonzero rationals generated by finitely many elements.

A subgroup of Q* generated by q_1..q_k is stored as a sign bit per generator
plus an exponent vector over the primes occurring in the generators.  The
whole group embeds in Z/2 x Z^n; we encode it as a lattice in Z^(n+1) where
the last coordinate holds the sign exponent and (0,...,0,2) is always a
member ((-1)^2 = 1).
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize


def _echelon(rows: list[list[int]]) -> list[list[int]]:
    """Row-echelon form over Z (Hermite style): pivots positive, entries
    below pivots zero, entries above reduced mod the pivot.  Canonical for
    lattice equality."""
    rows = [r[:] for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    basis: list[list[int]] = []
    for col in range(ncols):
        work = [r for r in rows if r[col] != 0 and all(x == 0 for x in r[:col])]
        if not work:
            continue
        # gcd-reduce all rows with this pivot column into one pivot row
        pivot = None
        for r in work:
            if pivot is None:
                pivot = r
                rows.remove(r)
                continue
            a, b = pivot[col], r[col]
            while b:
                q = a // b
                for j in range(ncols):
                    pivot[j], r[j] = r[j], pivot[j] - q * r[j]
                a, b = pivot[col], r[col]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)
        # clear the column in remaining rows
        for r in rows:
            if r[col]:
                q = r[col] // pivot[col]
                for j in range(ncols):
                    r[j] -= q * pivot[j]
        rows = [r for r in rows if any(r)]
    # reduce above-pivot entries for canonicity
    for i in range(len(basis) - 1, -1, -1):
        piv_col = next(j for j, x in enumerate(basis[i]) if x)
        p = basis[i][piv_col]
        for k in range(i):
            q = basis[k][piv_col] // p
            if q:
                for j in range(len(basis[k])):
                    basis[k][j] -= q * basis[i][j]
    return basis


@dataclass(frozen=True)
class IntLattice:
    """Sublattice of Z^n spanned by integer rows, held in echelon form."""

    ncols: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: list[list[int]], ncols: int) -> "IntLattice":
        ech = _echelon([list(r) for r in rows])
        return cls(ncols, tuple(tuple(r) for r in ech))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains(self, vec) -> bool:
        v = list(vec)
        for row in self.basis:
            col = next(j for j, x in enumerate(row) if x)
            if v[col] % row[col] != 0:
                return False
            q = v[col] // row[col]
            for j in range(self.ncols):
                v[j] -= q * row[j]
        return not any(v)


class RationalMultGroup:
    """Finitely generated multiplicative subgroup of Q*."""

    def __init__(self, generators):
        gens = [Fraction(g) for g in generators]
        if any(g == 0 for g in gens):
            raise ValueError("zero generator")
        primes: set[int] = set()
        for g in gens:
            primes |= set(factorize(g.numerator))
            primes |= set(factorize(g.denominator))
        self.primes: tuple[int, ...] = tuple(sorted(primes))
        self.generators: tuple[Fraction, ...] = tuple(gens)
        n = len(self.primes)
        rows = [self._vector(g) for g in gens]
        rows.append([0] * n + [2])  # (-1)^2 = 1
        self._lat = IntLattice.from_rows(rows, n + 1)
        # exponent lattice without the sign coordinate
        self._exp_lat = IntLattice.from_rows([r[:n] for r in rows], n)

    def _vector(self, q: Fraction) -> list[int]:
        """Exponent vector + sign slot; raises KeyError-like ValueError if q
        needs a prime outside the basis."""
        num = factorize(q.numerator)
        den = factorize(q.denominator)
        idx = {p: i for i, p in enumerate(self.primes)}
        vec = [0] * (len(self.primes) + 1)
        for p, e in num.items():
            if p not in idx:
                raise ValueError(f"prime {p} outside group basis")
            vec[idx[p]] += e
        for p, e in den.items():
            if p not in idx:
                raise ValueError(f"prime {p} outside group basis")
            vec[idx[p]] -= e
        vec[-1] = 0 if q > 0 else 1
        return vec

    def contains(self, q) -> bool:
        q = Fraction(q)
        if q == 0:
            return False
        try:
            vec = self._vector(q)
        except ValueError:
            return False
        return self._lat.contains(vec)

    @property
    def exponent_rank(self) -> int:
        return self._exp_lat.rank

    def is_trivial(self) -> bool:
        return all(g == 1 for g in self.generators) or (
            self.exponent_rank == 0 and not self.contains(Fraction(-1))
        )

    def is_subgroup_of_pm1(self) -> bool:
        return self.exponent_rank == 0

    def is_cyclic(self) -> bool:
        """Cyclic as an abstract group: trivial, {+-1}, or infinite cyclic.

        Rank >= 2 is never cyclic; rank 1 is cyclic unless -1 sits in the
        group with trivial exponent vector alongside a rank-1 lattice (then
        the group is Z x Z/2)."""
        r = self.exponent_rank
        if r >= 2:
            return False
        if r == 0:
            return True
        return not self._lat.contains([0] * len(self.primes) + [1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMultGroup):
            return NotImplemented
        if self.primes != other.primes:
            # compare via mutual membership on generators
            return all(other.contains(g) for g in self.generators) and all(
                self.contains(g) for g in other.generators
            )
        return self._lat == other._lat

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators)
        return f"RationalMultGroup({gens})"
