"""Exact arithmetic of finitely generated abelian groups.

Groups are kept in a canonical form: a free rank plus a multiset of prime
power torsion orders, together with a locality tag saying at which set of
primes the group is understood to live.  Equality of canonical forms is
isomorphism, which is the contract every other module relies on.

>>> G = CanonicalGroup.from_orders([12])
>>> print(G)
Z4+Z3
>>> print(direct_sum([G, CanonicalGroup.from_orders([2])]))
Z2+Z4+Z3
>>> print(localize(G, (2,)))
Z4@{2}

Presentations are integer matrices whose rows are relations between the
chosen generators; `normalize` reduces them with the Smith normal form.
All arithmetic is arbitrary precision: SNF intermediate entries can grow
far beyond machine words.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import EnumerationBound, LocalityError

DEFAULT_ENUMERATION_BOUND = 4096


# ---------------------------------------------------------------------------
# small number theory helpers

def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b), g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = 1
    return out


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of n in descending-lex order, parts descending."""
    if n == 0:
        return ((),)
    out = []

    def rec(remaining, largest, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(remaining, largest), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def partition_count(n: int) -> int:
    return len(partitions(n))


# ---------------------------------------------------------------------------
# integer matrices

@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries row major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match dimensions")

    @classmethod
    def from_rows(cls, rows: list[list[int]], cols: int | None = None) -> IntMatrix:
        nrows = len(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in row)
        return cls(nrows, cols, tuple(flat))

    @classmethod
    def zero(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: list[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        ent = [0] * (rows * cols)
        for i, d in enumerate(diag):
            ent[i * cols + i] = int(d)
        return cls(rows, cols, tuple(ent))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def mul(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        ent = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                ent.append(sum(ri[k] * other[k, j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(ent))

    def mul_vec(self, vec: list[int]) -> list[int]:
        if self.cols != len(vec):
            raise ValueError("dimension mismatch in matrix-vector product")
        return [sum(self.row(i)[k] * vec[k] for k in range(self.cols)) for i in range(self.rows)]

    def determinant(self) -> int:
        """Fraction-free Bareiss determinant; square matrices only."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and self.determinant() in (1, -1)

    def __str__(self):
        return "[" + "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows)) + "]"


def smith_normal_form(m: IntMatrix) -> tuple[list[int], IntMatrix, IntMatrix]:
    """Smith normal form of m.

    Returns (invariants, left, right) with left*m*right diagonal, diagonal
    entries the positive invariant factors d1 | d2 | ... followed by zeros,
    and left, right unimodular.
    """
    a = m.to_rows()
    rows, cols = m.rows, m.cols
    left = IntMatrix.identity(rows).to_rows()
    right = IntMatrix.identity(cols).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    def addmul_row(dst, src, q):
        # row[dst] += q * row[src]
        ad, as_ = a[dst], a[src]
        for j in range(cols):
            ad[j] += q * as_[j]
        ld, ls = left[dst], left[src]
        for j in range(rows):
            ld[j] += q * ls[j]

    def addmul_col(dst, src, q):
        for r in a:
            r[dst] += q * r[src]
        for r in right:
            r[dst] += q * r[src]

    def combine_rows(i, j, pivot_col):
        # Replace rows i, j by unimodular combinations so a[i][pivot_col] = gcd.
        ai, aj = a[i][pivot_col], a[j][pivot_col]
        x, y, g = xgcd(ai, aj)
        p, q = ai // g, aj // g
        ri, rj = a[i], a[j]
        for k in range(cols):
            u, v = ri[k], rj[k]
            ri[k] = x * u + y * v
            rj[k] = -q * u + p * v
        li, lj = left[i], left[j]
        for k in range(rows):
            u, v = li[k], lj[k]
            li[k] = x * u + y * v
            lj[k] = -q * u + p * v

    def combine_cols(i, j, pivot_row):
        ai, aj = a[pivot_row][i], a[pivot_row][j]
        x, y, g = xgcd(ai, aj)
        p, q = ai // g, aj // g
        for r in a:
            u, v = r[i], r[j]
            r[i] = x * u + y * v
            r[j] = -q * u + p * v
        for r in right:
            u, v = r[i], r[j]
            r[i] = x * u + y * v
            r[j] = -q * u + p * v

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # find a pivot
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, rows):
                if a[i][t] % a[t][t] != 0:
                    combine_rows(t, i, t)
                elif a[i][t] != 0:
                    addmul_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, cols):
                if a[t][j] % a[t][t] != 0:
                    combine_cols(t, j, t)
                elif a[t][j] != 0:
                    addmul_col(j, t, -(a[t][j] // a[t][t]))
            if all(a[i][t] == 0 for i in range(t + 1, rows)) and \
               all(a[t][j] == 0 for j in range(t + 1, cols)):
                break
        # force divisibility d_t | d_{t+1}: fold offending entries back in
        d = a[t][t]
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % d != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            addmul_row(t, bad, 1)
            continue  # redo elimination at the same t
        if d < 0:
            for j in range(cols):
                a[t][j] = -a[t][j]
            for j in range(rows):
                left[t][j] = -left[t][j]
        t += 1

    invariants = []
    for i in range(limit):
        if a[i][i] != 0:
            invariants.append(abs(a[i][i]))
    return invariants, IntMatrix.from_rows(left, rows), IntMatrix.from_rows(right, cols)


# ---------------------------------------------------------------------------
# localities and canonical groups

@dataclass(frozen=True)
class Locality:
    """Global, or localized at a finite nonempty set of primes."""

    primes: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.primes is not None:
            ps = tuple(self.primes)
            if not ps:
                raise ValueError("localized locality needs at least one prime")
            if any(not is_prime(p) for p in ps):
                raise ValueError(f"not primes: {ps}")
            if list(ps) != sorted(set(ps)):
                raise ValueError("primes must be sorted and distinct")

    @classmethod
    def global_(cls) -> Locality:
        return cls(None)

    @classmethod
    def at(cls, primes) -> Locality:
        return cls(tuple(sorted(set(int(p) for p in primes))))

    @property
    def is_global(self) -> bool:
        return self.primes is None

    def admits(self, p: int) -> bool:
        return self.primes is None or p in self.primes

    def __str__(self):
        if self.is_global:
            return ""
        return "@{" + ",".join(str(p) for p in self.primes) + "}"


GLOBAL = Locality.global_()


@dataclass(frozen=True)
class CanonicalGroup:
    """Isomorphism class of a finitely generated abelian group.

    torsion is a sorted tuple of (prime, exponent) pairs, one per cyclic
    summand of order prime**exponent.  Equal fields mean isomorphic groups;
    this is the canonical-form contract.
    """

    free_rank: int
    torsion: tuple[tuple[int, int], ...]
    locality: Locality = GLOBAL

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for p, e in self.torsion:
            if e < 1 or not is_prime(p):
                raise ValueError(f"bad torsion summand ({p}, {e})")
            if not self.locality.admits(p):
                raise LocalityError(f"torsion prime {p} outside locality {self.locality}")
        if list(self.torsion) != sorted(self.torsion):
            raise ValueError("torsion must be sorted by (prime, exponent)")

    @classmethod
    def trivial(cls, locality: Locality = GLOBAL) -> CanonicalGroup:
        return cls(0, (), locality)

    @classmethod
    def free(cls, rank: int, locality: Locality = GLOBAL) -> CanonicalGroup:
        return cls(rank, (), locality)

    @classmethod
    def cyclic(cls, n: int, locality: Locality = GLOBAL) -> CanonicalGroup:
        """Z/n for n >= 1 (n = 0 means Z)."""
        if n == 0:
            return cls.free(1, locality)
        return cls.from_orders([n], locality)

    @classmethod
    def from_orders(cls, orders, locality: Locality = GLOBAL) -> CanonicalGroup:
        """Group (+) Z/d for the given ds; d = 0 contributes a free summand."""
        rank = 0
        tors = []
        for d in orders:
            d = abs(int(d))
            if d == 0:
                rank += 1
                continue
            for p, e in factorint(d).items():
                tors.append((p, e))
        return cls(rank, tuple(sorted(tors)), locality)

    @classmethod
    def from_torsion(cls, free_rank: int, torsion, locality: Locality = GLOBAL) -> CanonicalGroup:
        tors = []
        for p, e in torsion:
            if e == 0:
                continue
            tors.append((int(p), int(e)))
        return cls(free_rank, tuple(sorted(tors)), locality)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def torsion_orders(self) -> list[int]:
        return [p ** e for p, e in self.torsion]

    def torsion_primes(self) -> list[int]:
        return sorted({p for p, _ in self.torsion})

    def exponent(self) -> int:
        """Exponent of the torsion part (1 if torsion free)."""
        out = 1
        for p in self.torsion_primes():
            out *= p ** max(e for q, e in self.torsion if q == p)
        return out

    def with_locality(self, locality: Locality) -> CanonicalGroup:
        return CanonicalGroup(self.free_rank, self.torsion, locality)

    def untagged(self) -> CanonicalGroup:
        return self.with_locality(GLOBAL)

    def sort_key(self):
        """Canonical enumeration order: per prime, largest exponents first."""
        key = [self.free_rank]
        for p in self.torsion_primes():
            lam = sorted((e for q, e in self.torsion if q == p), reverse=True)
            key.append((p, tuple(-e for e in lam)))
        return tuple(key)

    def __str__(self):
        from .notation import format_group
        return format_group(self)


def order(g: CanonicalGroup):
    """Group order: math.inf for positive free rank, else an integer."""
    if g.free_rank > 0:
        return math.inf
    return math.prod(g.torsion_orders())


def is_isomorphic(g: CanonicalGroup, h: CanonicalGroup) -> bool:
    return g == h


def direct_sum(parts) -> CanonicalGroup:
    """Direct sum; all parts must share one locality (empty sum is trivial)."""
    parts = list(parts)
    if not parts:
        return CanonicalGroup.trivial()
    loc = parts[0].locality
    for g in parts[1:]:
        if g.locality != loc:
            raise LocalityError(f"direct sum mixes localities {loc} and {g.locality}")
    rank = sum(g.free_rank for g in parts)
    tors = []
    for g in parts:
        tors.extend(g.torsion)
    return CanonicalGroup(rank, tuple(sorted(tors)), loc)


def localize(g: CanonicalGroup, primes) -> CanonicalGroup:
    """Localize g at the given prime set; keeps the free rank, filters torsion."""
    loc = Locality.at(primes)
    if not g.locality.is_global:
        if not set(loc.primes) <= set(g.locality.primes):
            raise LocalityError(f"cannot localize {g.locality} group at {loc}")
    tors = tuple(t for t in g.torsion if t[0] in loc.primes)
    return CanonicalGroup(g.free_rank, tors, loc)


def p_component(g: CanonicalGroup, p: int) -> CanonicalGroup:
    """The subgroup of elements of p-power order, as a plain finite group."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    tors = tuple(t for t in g.torsion if t[0] == p)
    return CanonicalGroup(0, tors, GLOBAL)


def normalize_full(generators: int, relations: IntMatrix, locality: Locality = GLOBAL):
    """Canonical form of Z^generators / row-span(relations).

    Returns (group, discarded) where discarded lists the (prime, exponent)
    torsion summands that fell outside a localized prime set.
    """
    if relations.cols != generators:
        raise ValueError("relation matrix must have one column per generator")
    invariants, _, _ = smith_normal_form(relations)
    rank = generators - len(invariants)
    tors = []
    discarded = []
    for d in invariants:
        if d == 1:
            continue
        for p, e in factorint(d).items():
            if locality.admits(p):
                tors.append((p, e))
            else:
                discarded.append((p, e))
    return CanonicalGroup(rank, tuple(sorted(tors)), locality), tuple(sorted(discarded))


def normalize(generators: int, relations: IntMatrix, locality: Locality = GLOBAL) -> CanonicalGroup:
    group, _ = normalize_full(generators, relations, locality)
    return group


def presentation_of(g: CanonicalGroup) -> tuple[int, IntMatrix]:
    """A standard presentation (generator count, relation matrix) of g."""
    orders = g.torsion_orders()
    gens = g.free_rank + len(orders)
    rows = []
    for i, d in enumerate(orders):
        row = [0] * gens
        row[g.free_rank + i] = d
        rows.append(row)
    return gens, IntMatrix.from_rows(rows, gens)


def enumerate_abelian_groups(n: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[CanonicalGroup]:
    """All isomorphism classes of abelian groups of order n, canonically sorted."""
    if n < 1:
        raise ValueError("order must be positive")
    if n > bound:
        raise EnumerationBound(f"order {n} exceeds enumeration bound {bound}")
    per_prime = []
    for p, v in sorted(factorint(n).items()):
        per_prime.append([(p, lam) for lam in partitions(v)])
    out = []
    for combo in product(*per_prime) if per_prime else [()]:
        tors = []
        for p, lam in combo:
            tors.extend((p, e) for e in lam)
        out.append(CanonicalGroup.from_torsion(0, tors))
    return sorted(out, key=CanonicalGroup.sort_key)
