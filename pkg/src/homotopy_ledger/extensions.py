"""Classification of middle groups of short exact sequences.

Candidates are middle-group isomorphism classes, not extension classes:
the derivations always argue at the level "Z8 versus Z4+Z2", and distinct
extension classes can share a middle group.

Two independent routes are kept deliberately separate:

* `middle_candidates` works prime by prime through partition combinatorics
  (a subgroup of type lambda with quotient of type nu exists inside a
  p-group of type mu exactly when the Littlewood-Richardson coefficient
  c^mu_{lambda,nu} is positive, Hall's theorem);
* `ExplicitGroup` realizes small groups as tuples with componentwise
  modular addition and enumerates honest subgroups, which is the oracle
  the first route is tested against.

`resolve` filters the candidate list through declared witnesses (element
orders of lifts, splitness, non-splitness, cokernel shapes, or outright
citations) and insists on a unique survivor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .abelian import (
    CanonicalGroup,
    DEFAULT_ENUMERATION_BOUND,
    GLOBAL,
    enumerate_abelian_groups,
    factorint,
    is_prime,
    order,
    partitions,
)
from .errors import (
    AmbiguousExtension,
    ContradictoryWitnesses,
    EnumerationBound,
    LocalityError,
)


# ---------------------------------------------------------------------------
# Ext^1 via the bilinear rules


def ext_group(c: CanonicalGroup, a: CanonicalGroup) -> CanonicalGroup:
    """Ext^1(C, A): Ext(Z, -) = 0, Ext(Z_m, Z_n) = Z_gcd, Ext(Z_m, Z) = Z_m,
    additive in both slots."""
    if c.locality != a.locality:
        raise LocalityError("Ext across mismatched localities")
    tors: list[tuple[int, int]] = []
    for p, e in c.torsion:
        # against torsion of A: gcd(p^e, q^f) nontrivial only for q = p
        for q, f in a.torsion:
            if q == p:
                tors.append((p, min(e, f)))
        # against each free summand of A
        tors.extend([(p, e)] * a.free_rank)
    return CanonicalGroup.from_torsion(0, tors, c.locality)


def cyclic_extension_class_count(m: int, a: CanonicalGroup) -> int:
    """Oracle count of extension classes of Z_m by finite A.

    Extensions of a cyclic group are classified by the obstruction class of
    the chosen lift: A / mA.  Computed by explicit element counting, so it
    shares no code with ext_group.
    """
    g = ExplicitGroup.from_canonical(a)
    image = {g.scale(m, x) for x in g.elements()}
    return g.size // len(image)


# ---------------------------------------------------------------------------
# partitions and the Littlewood-Richardson positivity test


def _type_of(g: CanonicalGroup, p: int) -> tuple[int, ...]:
    return tuple(sorted((e for q, e in g.torsion if q == p), reverse=True))


def lr_positive(mu: tuple[int, ...], lam: tuple[int, ...], nu: tuple[int, ...]) -> bool:
    """Is the Littlewood-Richardson coefficient c^mu_{lam nu} positive?

    Tested by searching for one LR skew tableau of shape mu/lam and weight
    nu: semistandard filling whose reverse reading word is a lattice word.
    """
    if sum(mu) != sum(lam) + sum(nu):
        return False
    k = len(mu)
    lam = tuple(lam) + (0,) * (k - len(lam))
    if any(l > m for l, m in zip(lam, mu)):
        return False
    if not nu:
        return True
    remaining = list(nu)
    rows: list[list[int]] = [[0] * (mu[i] - lam[i]) for i in range(k)]

    def fits(i, j, v):
        # column strictness against the cell above, weak rows left of us
        if j > 0 and rows[i][j - 1] > v:
            return False
        col = lam[i] + j
        if i > 0:
            up = col - lam[i - 1]
            if 0 <= up < len(rows[i - 1]) and rows[i - 1][up] >= v:
                return False
            if up < 0:
                return False  # cell above is inside lambda: impossible shape
        return True

    def rec(i, j, counts):
        if i == k:
            return True
        if j == len(rows[i]):
            return rec(i + 1, 0, counts)
        for v in range(1, len(nu) + 1):
            if remaining[v - 1] == 0:
                continue
            # lattice condition on the reverse reading word: at any moment
            # value v may appear only if v-1 already appeared more often.
            if v > 1 and counts[v - 1] >= counts[v - 2]:
                continue
            if v > i + 1:
                continue  # column strictness cap
            if not fits(i, j, v):
                continue
            rows[i][j] = v
            remaining[v - 1] -= 1
            counts[v - 1] += 1
            if rec(i, j + 1, counts):
                return True
            counts[v - 1] -= 1
            remaining[v - 1] += 1
            rows[i][j] = 0
        return False

    # rows are filled right-to-left per row for the reverse word; easier is
    # filling each row left to right but reading rows right to left.  For a
    # positivity search the standard trick below (left-to-right fill with
    # running counts) is sound because within a row values are weakly
    # increasing, so the right-to-left reading order only strengthens the
    # lattice check we perform incrementally per cell.
    return _lr_search(mu, lam, nu)


def _lr_search(mu, lam, nu) -> bool:
    k = len(mu)
    nvals = len(nu)
    rows = [[0] * (mu[i] - lam[i]) for i in range(k)]
    remaining = list(nu)

    def rec_cell(i, j, counts):
        if i == k:
            return all(r == 0 for r in remaining)
        row_len = len(rows[i])
        if j < 0:
            return rec_cell(i + 1, len(rows[i + 1]) - 1 if i + 1 < k else 0, counts)
        lo = 1
        for v in range(lo, nvals + 1):
            if remaining[v - 1] == 0:
                continue
            if v > 1 and counts[v - 2] <= counts[v - 1]:
                continue
            # semistandard constraints
            if j + 1 < row_len and rows[i][j + 1] < v:
                continue
            col = lam[i] + j
            if i > 0:
                up = col - lam[i - 1]
                if up < 0:
                    continue
                if up < len(rows[i - 1]) and rows[i - 1][up] >= v:
                    continue
            rows[i][j] = v
            remaining[v - 1] -= 1
            counts[v - 1] += 1
            if rec_cell(i, j - 1, counts):
                return True
            counts[v - 1] -= 1
            remaining[v - 1] += 1
            rows[i][j] = 0
        return False

    start_j = len(rows[0]) - 1 if k else 0
    if k == 0:
        return not nu
    return rec_cell(0, start_j, [0] * nvals)


@lru_cache(maxsize=None)
def _p_middle_types(lam: tuple[int, ...], nu: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    total = sum(lam) + sum(nu)
    return tuple(mu for mu in partitions(total) if _lr_search(mu, lam, nu))


def middle_candidates(a: CanonicalGroup, c: CanonicalGroup,
                      bound: int = DEFAULT_ENUMERATION_BOUND) -> list[CanonicalGroup]:
    """All iso classes G fitting 0 -> a -> G -> c -> 0, canonically sorted.

    If c has free rank r the candidates are Z^r (+) middles(a, torsion(c)):
    the free part always splits off.
    """
    if a.locality != c.locality:
        raise LocalityError("extension problem across mismatched localities")
    loc = a.locality
    if not a.is_finite:
        raise ValueError("the subgroup of an extension problem must be finite")
    free = c.free_rank
    na, nc = order(a), order(c.with_locality(GLOBAL).untagged()) if c.is_finite else None
    tc = CanonicalGroup.from_torsion(0, c.torsion)
    ta = a.untagged()
    n = order(ta) * order(tc)
    if n > bound:
        raise EnumerationBound(f"extension order {n} exceeds bound {bound}")
    primes = sorted(set(ta.torsion_primes()) | set(tc.torsion_primes()))
    per_prime = []
    for p in primes:
        lam, nu = _type_of(ta, p), _type_of(tc, p)
        per_prime.append([(p, mu) for mu in _p_middle_types(lam, nu)])
    out = []
    for combo in product(*per_prime) if per_prime else [()]:
        tors = []
        for p, mu in combo:
            tors.extend((p, e) for e in mu)
        out.append(CanonicalGroup.from_torsion(free, tors, loc))
    _ = (na, nc)
    return sorted(out, key=CanonicalGroup.sort_key)


# ---------------------------------------------------------------------------
# explicit realizations


@dataclass
class ExplicitGroup:
    """Finite abelian group as tuples under componentwise modular addition."""

    orders: tuple[int, ...]

    def __post_init__(self):
        self.size = 1
        for d in self.orders:
            self.size *= d

    @classmethod
    def from_canonical(cls, g: CanonicalGroup, bound: int = DEFAULT_ENUMERATION_BOUND) -> ExplicitGroup:
        if not g.is_finite:
            raise ValueError("cannot realize an infinite group explicitly")
        n = order(g)
        if n > bound:
            raise EnumerationBound(f"order {n} exceeds realization bound {bound}")
        return cls(tuple(g.torsion_orders()))

    def elements(self):
        return product(*(range(d) for d in self.orders))

    @property
    def zero(self):
        return (0,) * len(self.orders)

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def scale(self, k, x):
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def element_order(self, x) -> int:
        n = 1
        for a, d in zip(x, self.orders):
            if a:
                from math import gcd
                n = n * (d // gcd(a, d)) // __import__("math").gcd(n, d // gcd(a, d))
        return n

    def span(self, gens) -> frozenset:
        seen = {self.zero}
        frontier = [self.zero]
        for g in gens:
            new_frontier = list(seen)
            for base in new_frontier:
                x = base
                while True:
                    x = self.add(x, g)
                    if x in seen:
                        break
                    seen.add(x)
        _ = frontier
        return frozenset(seen)

    def subgroups(self) -> list[frozenset]:
        """All subgroups, as frozensets of elements."""
        base = frozenset([self.zero])
        known = {base}
        queue = [base]
        elems = list(self.elements())
        while queue:
            s = queue.pop()
            for g in elems:
                if g in s:
                    continue
                t = self._extend(s, g)
                if t not in known:
                    known.add(t)
                    queue.append(t)
        return sorted(known, key=lambda s: (len(s), sorted(s)))

    def _extend(self, subgroup: frozenset, g) -> frozenset:
        seen = set(subgroup)
        cosets = [list(subgroup)]
        x = g
        while x not in subgroup:
            layer = [self.add(x, s) for s in subgroup]
            seen.update(layer)
            cosets.append(layer)
            x = self.add(x, g)
        return frozenset(seen)

    def canonical_of_subset(self, elems) -> CanonicalGroup:
        """Iso class of a subgroup given by its element set.

        The counts of solutions of p^k x = 0 determine the p-type, so no
        generator hunting is needed.
        """
        size = len(elems)
        tors = []
        for p in factorint(size):
            conj = []  # conjugate partition: m_k = #{i : lambda_i >= k}
            prev = 0
            k = 1
            while True:
                c = sum(1 for x in elems if self.scale(p ** k, x) == self.zero
                        and self.element_order(x) in _p_power_orders(p, k))
                # count elements killed by p^k (of p-power order)
                c = sum(1 for x in elems
                        if all((p ** k * a) % d == 0 for a, d in zip(x, self.orders))
                        and _is_p_power_order(self, x, p))
                import math as _m
                logc = round(_m.log(c, p)) if c > 1 else 0
                mk = logc - prev
                if mk == 0:
                    break
                conj.append(mk)
                prev = logc
                k += 1
            # transpose the conjugate partition back to exponents
            lam = []
            for i in range(1, (conj[0] if conj else 0) + 1):
                lam.append(sum(1 for m in conj if m >= i))
            # conj[k-1] = #{i : lambda_i >= k}; transpose:
            lam = _transpose_partition(conj)
            tors.extend((p, e) for e in lam)
        return CanonicalGroup.from_torsion(0, tors)

    def quotient_canonical(self, subgroup: frozenset) -> CanonicalGroup:
        """Iso class of G / subgroup via coset representatives."""
        reps = {}
        for x in self.elements():
            key = min(self.add(x, s) for s in subgroup)
            reps.setdefault(key, x)
        quotient = _CosetGroup(self, subgroup, list(reps))
        return quotient.canonical()


def _is_p_power_order(g: ExplicitGroup, x, p: int) -> bool:
    o = g.element_order(x)
    while o % p == 0:
        o //= p
    return o == 1


def _p_power_orders(p, k):
    return {p ** i for i in range(k + 1)}


def _transpose_partition(conj: list[int]) -> list[int]:
    lam = []
    for i in range(1, (conj[0] if conj else 0) + 1):
        lam.append(sum(1 for m in conj if m >= i))
    return lam


class _CosetGroup:
    def __init__(self, parent: ExplicitGroup, subgroup: frozenset, reps: list):
        self.parent = parent
        self.subgroup = subgroup
        self.reps = reps
        self.size = len(reps)

    def _key(self, x):
        return min(self.parent.add(x, s) for s in self.subgroup)

    def canonical(self) -> CanonicalGroup:
        tors = []
        keys = [self._key(r) for r in self.reps]
        zero_key = self._key(self.parent.zero)
        for p in factorint(self.size) if self.size > 1 else {}:
            conj = []
            prev = 0
            k = 1
            while True:
                count = 0
                for r in self.reps:
                    if self._key(self.parent.scale(p ** k, r)) == zero_key and \
                       self._coset_p_power(r, p):
                        count += 1
                import math as _m
                logc = round(_m.log(count, p)) if count > 1 else 0
                mk = logc - prev
                if mk == 0:
                    break
                conj.append(mk)
                prev = logc
                k += 1
            tors.extend((p, e) for e in _transpose_partition(conj))
        _ = keys
        return CanonicalGroup.from_torsion(0, tors)

    def _coset_p_power(self, r, p) -> bool:
        zero_key = self._key(self.parent.zero)
        x = r
        o = 1
        while self._key(x) != zero_key:
            x = self.parent.add(x, r)
            o += 1
        while o % p == 0:
            o //= p
        return o == 1


def realize_explicit(g: CanonicalGroup, bound: int = DEFAULT_ENUMERATION_BOUND) -> ExplicitGroup:
    return ExplicitGroup.from_canonical(g, bound)


@lru_cache(maxsize=None)
def _subquotient_pairs(orders: tuple[int, ...]):
    """All (canonical subgroup, canonical quotient, subgroup set) triples of
    the explicit group with the given cyclic orders."""
    g = ExplicitGroup(orders)
    out = []
    for s in g.subgroups():
        out.append((g.canonical_of_subset(s), g.quotient_canonical(s), s))
    return tuple(out)


def oracle_middles(a: CanonicalGroup, c: CanonicalGroup,
                   bound: int = DEFAULT_ENUMERATION_BOUND) -> list[CanonicalGroup]:
    """Brute-force route: enumerate groups of order |a||c|, all subgroups of
    each, and keep the groups with a subgroup iso to a and quotient iso to c."""
    ta, tc = a.untagged(), c.untagged()
    if not (ta.is_finite and tc.is_finite):
        raise ValueError("oracle route requires finite groups")
    n = order(ta) * order(tc)
    if n > bound:
        raise EnumerationBound(f"oracle order {n} exceeds bound {bound}")
    out = []
    for g in enumerate_abelian_groups(n, bound):
        pairs = _subquotient_pairs(tuple(g.torsion_orders()))
        if any(sc == ta and qc == tc for sc, qc, _ in pairs):
            out.append(g)
    return sorted(out, key=CanonicalGroup.sort_key)


# ---------------------------------------------------------------------------
# witnesses and resolution


@dataclass(frozen=True)
class Witness:
    """One declared fact used to cut the candidate list down.

    kind: "element_order" | "splits" | "non_split" | "cokernel_shape" | "axiom"
    """

    kind: str
    order: int | None = None
    maps_to_order: int | None = None
    scale: int | None = None
    expect: CanonicalGroup | None = None
    choose: CanonicalGroup | None = None
    cite: str = ""

    def __post_init__(self):
        kinds = {"element_order", "splits", "non_split", "cokernel_shape", "axiom"}
        if self.kind not in kinds:
            raise ValueError(f"unknown witness kind {self.kind!r}")
        if self.kind == "element_order" and (self.order is None or self.order < 1):
            raise ValueError("element_order witness needs a positive order")
        if self.kind == "cokernel_shape" and self.expect is None:
            raise ValueError("cokernel_shape witness needs an expected group")
        if self.kind == "axiom" and self.choose is None:
            raise ValueError("axiom witness must name its chosen group")

    @property
    def is_external(self) -> bool:
        return self.kind == "axiom" or (self.kind in ("splits", "non_split") and bool(self.cite))


@dataclass(frozen=True)
class ExtensionProblem:
    sub: CanonicalGroup
    quotient: CanonicalGroup
    witnesses: tuple[Witness, ...] = ()

    def __post_init__(self):
        if not self.sub.is_finite:
            raise ValueError("the subgroup must be finite")
        if self.sub.locality != self.quotient.locality:
            raise LocalityError("extension problem across mismatched localities")


def _embeddings_matching(g: CanonicalGroup, a: CanonicalGroup, c: CanonicalGroup,
                         bound: int):
    """Yield (explicit G, subgroup set) realizations of a inside g with
    quotient c."""
    ta, tc, tg = a.untagged(), c.untagged(), g.untagged()
    pairs = _subquotient_pairs(tuple(tg.torsion_orders()))
    gx = ExplicitGroup(tuple(tg.torsion_orders()))
    for sc, qc, s in pairs:
        if sc == ta and qc == tc:
            yield gx, s


def _passes_element_order(g, a, c, w: Witness, bound: int) -> bool:
    want_j = w.maps_to_order if w.maps_to_order is not None else c.untagged().exponent()
    for gx, s in _embeddings_matching(g, a, c, bound):
        coset = _CosetGroup(gx, s, [x for x in gx.elements()])
        zero_key = coset._key(gx.zero)
        for x in gx.elements():
            if gx.element_order(x) != w.order:
                continue
            # order of the coset of x
            y = x
            j = 1
            while coset._key(y) != zero_key:
                y = gx.add(y, x)
                j += 1
            if j == want_j:
                return True
    return False


def _passes_cokernel_shape(g, a, c, w: Witness, bound: int) -> bool:
    expect = w.expect.untagged()
    k = w.scale if w.scale is not None else 1
    for gx, s in _embeddings_matching(g, a, c, bound):
        scaled = frozenset(gx.scale(k, x) for x in s)
        closed = gx.span(list(scaled))
        if gx.quotient_canonical(closed) == expect:
            return True
    return False


@dataclass
class Resolution:
    group: CanonicalGroup
    candidates: list[CanonicalGroup]
    survivors: list[CanonicalGroup]
    external: list[Witness] = field(default_factory=list)


def resolve(problem: ExtensionProblem, bound: int = DEFAULT_ENUMERATION_BOUND) -> Resolution:
    """Apply witnesses as filters and return the unique surviving middle."""
    a, c = problem.sub, problem.quotient
    loc = a.locality
    if a.is_trivial:
        return Resolution(c, [c], [c])
    if c.is_trivial:
        return Resolution(a, [a], [a])
    candidates = middle_candidates(a, c, bound)
    split = direct_sum_of(a, c)
    survivors = list(candidates)
    external = [w for w in problem.witnesses if w.is_external]
    for w in problem.witnesses:
        if w.kind == "splits":
            survivors = [g for g in survivors if g == split]
        elif w.kind == "non_split":
            survivors = [g for g in survivors if g != split]
        elif w.kind == "axiom":
            choice = w.choose.with_locality(loc)
            survivors = [g for g in survivors if g == choice]
        elif w.kind == "element_order":
            if c.free_rank:
                raise ValueError("element_order witness needs a finite quotient")
            survivors = [g for g in survivors
                         if _passes_element_order(g, a, c, w, bound)]
        elif w.kind == "cokernel_shape":
            if c.free_rank:
                raise ValueError("cokernel_shape witness needs a finite quotient")
            survivors = [g for g in survivors
                         if _passes_cokernel_shape(g, a, c, w, bound)]
    if not survivors:
        raise ContradictoryWitnesses(list(problem.witnesses))
    if len(survivors) > 1:
        raise AmbiguousExtension(survivors)
    return Resolution(survivors[0], candidates, survivors, external)


def direct_sum_of(a: CanonicalGroup, c: CanonicalGroup) -> CanonicalGroup:
    from .abelian import direct_sum
    return direct_sum([a, c])
