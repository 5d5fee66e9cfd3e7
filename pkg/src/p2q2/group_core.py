"""Executable finite groups from power/conjugation presentations.

Elements are normal-form exponent vectors over an ordered generating
sequence (one exponent per generator, each below that generator's
relative order).  A rewriting collector moves letters into normal form
and materializes the full Cayley table, after which every group
operation is a table lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

CAYLEY_CAP = 20_000

_ASSOC_EXHAUSTIVE_LIMIT = 400
_ASSOC_SAMPLES = 100_000
_ASSOC_SEED = 0x5EED


class InconsistentPresentationError(ValueError):
    """Collection is not confluent for the given presentation."""


class CayleyCapError(ValueError):
    """Group order exceeds the materialized-table cap."""


@dataclass(frozen=True)
class PcPresentation:
    """Generators with relative orders, plus power and conjugation rules.

    ``conjugation[(i, j)]`` (i < j) is the normal form of g_i^-1 g_j g_i
    and must only involve generators of index > i; missing pairs commute.
    ``powers[i]`` is the normal form of g_i**order_i (identity if absent).
    """

    generators: tuple[tuple[str, int], ...]
    conjugation: tuple[tuple[tuple[int, int], tuple[int, ...]], ...] = ()
    powers: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        n = len(self.generators)
        if n == 0:
            raise ValueError("need at least one generator")
        for _, m in self.generators:
            if m < 2:
                raise ValueError("relative orders must be >= 2")
        for (i, j), rhs in self.conjugation:
            if not 0 <= i < j < n:
                raise ValueError(f"bad conjugation pair ({i}, {j})")
            self._check_word(rhs, min_index=i + 1)
        for i, rhs in self.powers:
            if not 0 <= i < n:
                raise ValueError(f"bad power index {i}")
            self._check_word(rhs, min_index=i + 1)

    def _check_word(self, word: tuple[int, ...], min_index: int) -> None:
        n = len(self.generators)
        if len(word) != n:
            raise ValueError("rule right-hand side has wrong length")
        for k, e in enumerate(word):
            if e == 0:
                continue
            if k < min_index:
                raise ValueError("rule right-hand side touches too-early generators")
            if not 0 <= e < self.generators[k][1]:
                raise ValueError("rule exponent out of range")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def order(self) -> int:
        out = 1
        for _, m in self.generators:
            out *= m
        return out

    def conjugation_map(self) -> dict[tuple[int, int], tuple[int, ...]]:
        return dict(self.conjugation)

    def power_map(self) -> dict[int, tuple[int, ...]]:
        return dict(self.powers)


def presentation(gens, conj=None, powers=None) -> PcPresentation:
    """Convenience constructor taking dicts with sparse exponent words."""
    gens = tuple((str(name), int(m)) for name, m in gens)
    n = len(gens)

    def densify(word: dict[int, int]) -> tuple[int, ...]:
        out = [0] * n
        for k, e in word.items():
            out[k] = e % gens[k][1]
        return tuple(out)

    conj_rules = tuple(sorted(((pair, densify(w)) for pair, w in (conj or {}).items())))
    power_rules = tuple(sorted(((i, densify(w)) for i, w in (powers or {}).items())))
    return PcPresentation(gens, conj_rules, power_rules)


@dataclass(frozen=True)
class SubgroupHandle:
    """A subgroup as a closed set of element indices."""

    members: frozenset[int]
    generators: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, idx: int) -> bool:
        return idx in self.members


class _Collector:
    """Rewrites words over the generating sequence into normal form."""

    def __init__(self, pres: PcPresentation):
        self.n = pres.ngens
        self.orders = [m for _, m in pres.generators]
        self.conj = pres.conjugation_map()
        self.powers = pres.power_map()
        # conj[(i, j)] defaulting to "g_j unchanged"
        self.trivial = {}
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if (i, j) not in self.conj:
                    w = [0] * self.n
                    w[j] = 1
                    self.conj[(i, j)] = tuple(w)
                    self.trivial[(i, j)] = True
                else:
                    w = self.conj[(i, j)]
                    self.trivial[(i, j)] = w[j] == 1 and sum(w) == 1

    def rmul_letter(self, vec: list[int], t: int, e: int = 1) -> None:
        """In place: vec <- normal form of vec * g_t**e."""
        if e == 0:
            return
        # fast path: g_t commutes (trivially) with every letter to its right
        if all(vec[u] == 0 or self.trivial[(t, u)] for u in range(t + 1, self.n)):
            total = vec[t] + e
            wraps, vec[t] = divmod(total, self.orders[t])
            rhs = self.powers.get(t)
            if wraps and rhs is not None and any(rhs):
                for _ in range(wraps):
                    self.rmul_word(vec, rhs)
            return
        # slow path: peel off the suffix, conjugate it by g_t, reappend
        tail = [(k, vec[k]) for k in range(t + 1, self.n) if vec[k]]
        for k, _ in tail:
            vec[k] = 0
        self.rmul_letter(vec, t)  # suffix now clear: takes the fast path
        for k, ek in tail:
            w = self.conj[(t, k)]
            for _ in range(ek):
                self.rmul_word(vec, w)
        if e > 1:
            self.rmul_letter(vec, t, e - 1)

    def rmul_word(self, vec: list[int], word) -> None:
        for k, ek in enumerate(word):
            if ek:
                self.rmul_letter(vec, k, ek)


class PcGroup:
    """A collected group: normal forms, Cayley table, and invariants."""

    def __init__(self, pres: PcPresentation, cap: int = CAYLEY_CAP):
        self.presentation = pres
        self.order = pres.order()
        if self.order > cap:
            raise CayleyCapError(f"group order {self.order} exceeds cap {cap}")
        self._build_tables()
        self._validate()

    # -- construction -------------------------------------------------

    def _build_tables(self):
        n = self.order
        g = self.presentation.ngens
        orders = np.array([m for _, m in self.presentation.generators], dtype=np.int64)
        weights = np.ones(g, dtype=np.int64)
        for k in range(g - 2, -1, -1):
            weights[k] = weights[k + 1] * orders[k + 1]
        self._weights = weights
        self._rel_orders = orders

        vecs = np.zeros((n, g), dtype=np.int32)
        rem = np.arange(n, dtype=np.int64)
        for k in range(g):
            vecs[:, k], rem = np.divmod(rem, weights[k])
        self._vecs = vecs

        coll = _Collector(self.presentation)
        gen_perms = []
        for j in range(g):
            perm = np.empty(n, dtype=np.int32)
            for idx in range(n):
                v = [int(e) for e in vecs[idx]]
                coll.rmul_letter(v, j)
                perm[idx] = int(np.dot(v, weights))
            gen_perms.append(perm)

        # x -> x * g_j**k as index permutations, for every k < order_j
        pow_perms = []
        for j in range(g):
            steps = [np.arange(n, dtype=np.int32)]
            for _ in range(int(orders[j]) - 1):
                steps.append(gen_perms[j][steps[-1]])
            pow_perms.append(steps)

        table = np.empty((n, n), dtype=np.int32)
        for y in range(n):
            col = pow_perms[0][vecs[y, 0]]
            for j in range(1, g):
                e = vecs[y, j]
                if e:
                    col = pow_perms[j][e][col]
            table[:, y] = col
        self.table = table

        self.inverse = np.argmax(table == 0, axis=1).astype(np.int32)
        self.gen_indices = tuple(int(weights[j]) for j in range(g))

        # normal-form parent links: x = parent(x) * g_letter(x)
        parent = np.zeros(n, dtype=np.int32)
        letter = np.zeros(n, dtype=np.int32)
        for x in range(1, n):
            j = max(k for k in range(g) if vecs[x, k])
            parent[x] = x - weights[j]
            letter[x] = j
        self._nf_parent = parent
        self._nf_letter = letter

        # element orders, vectorized over the whole group
        ords = np.zeros(n, dtype=np.int32)
        cur = np.arange(n, dtype=np.int32)
        k = 1
        while True:
            hit = (cur == 0) & (ords == 0)
            ords[hit] = k
            if ords.all():
                break
            cur = table[cur, np.arange(n)]
            k += 1
            if k > n:
                raise InconsistentPresentationError("element order exceeds group order")
        self.element_orders = ords

        maxexp = int(orders.max())
        pow_el = np.empty((n, maxexp + 1), dtype=np.int32)
        pow_el[:, 0] = 0
        for e in range(1, maxexp + 1):
            pow_el[:, e] = table[pow_el[:, e - 1], np.arange(n)]
        self._pow_el = pow_el

    def _validate(self):
        n = self.order
        t = self.table
        ar = np.arange(n, dtype=np.int32)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise InconsistentPresentationError("identity row/column broken")
        if not np.array_equal(np.sort(t, axis=1), np.tile(ar, (n, 1))):
            raise InconsistentPresentationError("a row is not a permutation")
        if not np.array_equal(np.sort(t, axis=0), np.tile(ar[:, None], (1, n))):
            raise InconsistentPresentationError("a column is not a permutation")

        # collector round-trip: g_i^-1 g_j g_i must reproduce each rule
        conj = _Collector(self.presentation).conj
        for (i, j), rhs in conj.items():
            gi, gj = self.gen_indices[i], self.gen_indices[j]
            val = t[t[self.inverse[gi], gj], gi]
            if val != int(np.dot(np.array(rhs), self._weights)):
                raise InconsistentPresentationError(f"conjugation rule ({i},{j}) broken")

        if n <= _ASSOC_EXHAUSTIVE_LIMIT:
            for z in range(n):
                if not np.array_equal(t[t, z], t[:, t[:, z]]):
                    raise InconsistentPresentationError("associativity fails")
        else:
            rng = np.random.default_rng(_ASSOC_SEED)
            xs, ys, zs = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
            if not np.array_equal(t[t[xs, ys], zs], t[xs, t[ys, zs]]):
                raise InconsistentPresentationError("associativity fails on sample")

    # -- element operations -------------------------------------------

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inverse_of(self, x: int) -> int:
        return int(self.inverse[x])

    def power(self, x: int, e: int) -> int:
        d = int(self.element_orders[x])
        e %= d
        if e <= self._pow_el.shape[1] - 1:
            return int(self._pow_el[x, e])
        acc = 0
        while e:
            acc = int(self.table[acc, x])
            e -= 1
        return acc

    def element_order(self, x: int) -> int:
        return int(self.element_orders[x])

    def conjugate(self, x: int, by: int) -> int:
        """by^-1 * x * by."""
        return int(self.table[self.table[self.inverse[by], x], by])

    def exponents(self, x: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self._vecs[x])

    def index_of(self, exponents) -> int:
        vec = np.asarray(exponents, dtype=np.int64) % self._rel_orders
        return int(np.dot(vec, self._weights))

    def generator_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.presentation.generators)

    # -- subgroups and invariants -------------------------------------

    def subgroup_closure(self, gens) -> SubgroupHandle:
        gens = tuple(int(x) for x in gens)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = int(self.table[x, s])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return SubgroupHandle(frozenset(seen), gens)

    def center(self) -> SubgroupHandle:
        mask = (self.table == self.table.T).all(axis=1)
        members = frozenset(int(i) for i in np.flatnonzero(mask))
        return SubgroupHandle(members, tuple(sorted(members - {0})))

    def derived_subgroup(self) -> SubgroupHandle:
        t = self.table
        left = t[np.ix_(self.inverse, self.inverse)]  # x^-1 y^-1
        comms = np.unique(t[left, t])  # (x^-1 y^-1)(x y)
        return self.subgroup_closure(int(c) for c in comms)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def order_histogram(self) -> dict[int, int]:
        counts = np.bincount(self.element_orders)
        return {int(d): int(c) for d, c in enumerate(counts) if c}

    def abelian_invariants(self) -> tuple[int, ...]:
        """Primary decomposition of the abelianization, from order counts."""
        derived = self.derived_subgroup()
        dset = np.array(sorted(derived.members), dtype=np.int32)
        reps = np.unique(self.table[:, dset].min(axis=1))
        member = np.zeros(self.order, dtype=bool)
        member[dset] = True

        coset_orders = []
        for x in reps:
            k, y = 1, int(x)
            while not member[y]:
                y = int(self.table[y, x])
                k += 1
            coset_orders.append(k)
        coset_orders = np.array(coset_orders, dtype=np.int64)
        return _primary_invariants(coset_orders, self.order // derived.order)


def _int_factorization(n: int):
    from .numtheory import _factorize

    return _factorize(n) if n > 1 else ()


def _primary_invariants(element_orders: np.ndarray, group_order: int) -> tuple[int, ...]:
    """Cyclic prime-power factors of an abelian group from its order counts.

    For each prime ell, lams[k-1] = number of cyclic ell-power factors with
    exponent >= k, recovered from counts of elements of order dividing ell**k.
    """
    invariants: list[int] = []
    for ell, _ in _int_factorization(group_order):
        lams = []
        prev = 1
        k = 1
        while True:
            a_k = int(np.sum(ell**k % element_orders == 0))
            lam = round(math.log(a_k / prev, ell))
            if lam == 0:
                break
            lams.append(lam)
            prev = a_k
            k += 1
        for depth, lam in enumerate(lams, start=1):
            nxt = lams[depth] if depth < len(lams) else 0
            invariants.extend([ell**depth] * (lam - nxt))
    return tuple(sorted(invariants))


@lru_cache(maxsize=96)
def collect(pres: PcPresentation, cap: int = CAYLEY_CAP) -> PcGroup:
    """Collect a presentation into a PcGroup with a materialized table."""
    return PcGroup(pres, cap=cap)
