"""Registry of the 36 isomorphism types of groups of order p^2 q^2.

Each type carries an admissibility predicate on the prime pair, a canonical
parameter derivation (action exponents, GF(p^2) data), and a presentation
builder.  Within a semidirect type the convention is that q names the prime
whose Sylow subgroup acts: generators of the acting factor K come first in
the generating sequence, the normal factor H after them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from . import gfp2
from .group_core import CAYLEY_CAP, PcGroup, collect, presentation
from .numtheory import Modulus, element_of_order, is_prime


class UnknownTypeError(ValueError):
    """Type id outside 1..36."""


class ParameterError(ValueError):
    """A type parameter is missing or out of its stated range."""


@dataclass(frozen=True)
class TypeParams:
    """Derived parameters: action exponent r, family exponent n, GF(p^2) data."""

    r: int | None = None
    n_exp: int | None = None
    gf: tuple[int, tuple[int, int], int, int] | None = None  # (D, sigma, m, n)


@dataclass(frozen=True)
class GroupSpec:
    type_id: int
    p: int
    q: int
    params: TypeParams

    def __str__(self) -> str:
        return format_spec(self)


# types whose acting factor K has two generators (a, b); the rest have one
_TWO_GEN_K = {21, 33, 34, 35, 36}

_CONDITIONS = {
    **{t: "pq = 6" for t in range(1, 15)},
    15: "", 16: "", 17: "", 18: "",
    19: "q | p-1",
    20: "q^2 | p-1",
    21: "q | p-1",
    22: "q | p-1",
    23: "q = 2",
    24: "q | p-1, q != 2",
    25: "q | p-1, q != 2",
    26: "q^2 | p-1",
    27: "q | p-1, q != 2, q >= 5",
    28: "q^2 | p-1, q != 2",
    29: "q^2 | p-1",
    30: "q | p+1, q odd",
    31: "q = 2, p = 3 (mod 4)",
    32: "q^2 | p+1, q odd",
    33: "q | p-1",
    34: "q = 2",
    35: "q | p-1",
    36: "q | p+1, q odd, p != 1 (mod q)",
}

_RELATION_SUMMARY = {
    1: "a^4 = b^9 = 1, abelian",
    2: "a^9 = b^2 = c^2 = 1, abelian",
    3: "a^2 = b^2 = c^3 = d^3 = 1, abelian",
    4: "a^4 = b^3 = c^3 = 1, abelian",
    5: "s^2 = r^3 = u^2 = v^3 = 1, r^s = r^-1",
    6: "s^2 = t^2 = r^3 = u^3 = 1, r^s = r^-1, u^t = u^-1",
    7: "s^2 = r^9 = z^2 = 1, r^s = r^-1",
    8: "t^3 = x^2 = y^2 = w^3 = 1, x^t = y, y^t = xy",
    9: "s^2 = u^2 = v^9 = 1, v^s = v^-1",
    10: "a^4 = b^3 = w^3 = 1, b^a = b^-1",
    11: "s^2 = x^3 = y^3 = z^2 = 1, x^s = x^-1, y^s = y^-1",
    12: "c^4 = a^3 = b^3 = 1, a^c = b, b^c = a^-1",
    13: "c^9 = a^2 = b^2 = 1, a^c = b, b^c = ab",
    14: "c^4 = a^3 = b^3 = 1, a^c = a^-1, b^c = b^-1",
    15: "a^(q^2) = b^(p^2) = 1, abelian",
    16: "a^q = b^q = c^(p^2) = 1, abelian",
    17: "a^(q^2) = b^p = c^p = 1, abelian",
    18: "a^q = b^q = c^p = d^p = 1, abelian",
    19: "a^(q^2) = b^(p^2) = 1, b^a = b^r (ord r = q mod p^2)",
    20: "a^(q^2) = b^(p^2) = 1, b^a = b^r (ord r = q^2 mod p^2)",
    21: "a^q = b^q = c^(p^2) = 1, c^a = c^r, c^b = c",
    22: "a^(q^2) = b^p = c^p = 1, b^a = b^r, c^a = c^r (ord r = q mod p)",
    23: "a^4 = b^p = c^p = 1, b^a = b, c^a = c^-1",
    24: "a^(q^2) = b^p = c^p = 1, b^a = b, c^a = c^r (ord r = q mod p)",
    25: "a^(q^2) = b^p = c^p = 1, b^a = b^r, c^a = c^(r^-1) (ord r = q)",
    26: "a^(q^2) = b^p = c^p = 1, b^a = b^r, c^a = c^(r^-1) (ord r = q^2)",
    27: "a^(q^2) = b^p = c^p = 1, b^a = b^r, c^a = c^(r^n) (ord r = q)",
    28: "a^(q^2) = b^p = c^p = 1, b^a = b^r, c^a = c^(r^n) (ord r = q^2)",
    29: "a^(q^2) = b^p = c^p = 1, b^a = b^r, c^a = c^r (ord r = q^2 mod p)",
    30: "a^(q^2) = b^p = c^p = 1, b^a = b^m c^(nD), c^a = b^n c^m",
    31: "a^4 = b^p = c^p = 1, b^a = b^m c^(nD), c^a = b^n c^m",
    32: "a^(q^2) = b^p = c^p = 1, b^a = b^m c^(nD), c^a = b^n c^m (index q^2)",
    33: "a^q = b^q = c^p = d^p = 1, c^b = c^r, d^b = d^r",
    34: "a^2 = b^2 = c^p = d^p = 1, c^b = c^-1",
    35: "a^q = b^q = c^p = d^p = 1, c^a = c^r, d^b = d^r",
    36: "a^q = b^q = c^p = d^p = 1, c^b = c^u d^(vD), d^b = c^v d^u",
}


def _check_primes(p: int, q: int) -> None:
    if not (is_prime(p) and is_prime(q)):
        raise ValueError(f"p={p} and q={q} must both be prime")
    if p == q:
        raise ValueError("p and q must be distinct")


def admissible(type_id: int, p: int, q: int) -> tuple[bool, str]:
    """Whether the type exists at (p, q); the reason names the failed condition."""
    if not 1 <= type_id <= 36:
        raise UnknownTypeError(f"no type {type_id}")
    _check_primes(p, q)
    if type_id <= 14:
        if {p, q} == {2, 3}:
            return True, ""
        return False, "{p,q} = {2,3} required (order-36 catalog)"
    checks: list[tuple[bool, str]] = []
    t = type_id
    if t in (19, 21, 22, 24, 25, 27, 33, 35):
        checks.append(((p - 1) % q == 0, "q must divide p-1"))
    if t in (20, 26, 28, 29):
        checks.append(((p - 1) % (q * q) == 0, "q^2 must divide p-1"))
    if t in (24, 25, 27, 28):
        checks.append((q != 2, "q != 2 required"))
    if t == 27:
        checks.append(((q - 1) // 2 >= 2, "empty exponent range (q >= 5 required)"))
    if t in (23, 31, 34):
        checks.append((q == 2, "q = 2 required"))
    if t == 31:
        checks.append((p % 4 == 3, "p = 3 (mod 4) required"))
    if t in (30, 32, 36):
        checks.append((q % 2 == 1, "q must be odd"))
        checks.append((p != 2, "p must be odd (quadratic non-residue needed)"))
    if t == 30:
        checks.append(((p + 1) % q == 0, "q must divide p+1"))
    if t == 32:
        checks.append(((p + 1) % (q * q) == 0, "q^2 must divide p+1"))
    if t == 36:
        checks.append(((p + 1) % q == 0, "q must divide p+1"))
        checks.append((p % q != 1, "p != 1 (mod q) required"))
    for ok, reason in checks:
        if not ok:
            return False, reason
    return True, ""


def _validate_n(type_id: int, q: int, n: int) -> None:
    if type_id == 27:
        if not 2 <= n <= (q - 1) // 2:
            raise ParameterError(f"n={n} outside 2..{(q - 1) // 2} for type 27")
    elif type_id == 28:
        in_low = 2 <= n <= (q * q - 1) // 2
        in_mult = n % q == 0 and (q + 1) // 2 <= n // q <= q - 1
        if not (in_low or in_mult):
            raise ParameterError(f"n={n} outside the stated range for type 28")
    elif n is not None:
        raise ParameterError(f"type {type_id} takes no exponent n")


# (order of r, modulus is p or p^2) per r-parametrized type
_R_KINDS = {
    19: ("q", 2), 20: ("q2", 2), 21: ("q", 2),
    22: ("q", 1), 24: ("q", 1), 25: ("q", 1), 26: ("q2", 1),
    27: ("q", 1), 28: ("q2", 1), 29: ("q2", 1),
    33: ("q", 1), 35: ("q", 1),
}

_GF_INDEX = {30: "q", 31: "4", 32: "q2", 36: "q"}


def derive_params(type_id: int, p: int, q: int, n: int | None = None) -> TypeParams:
    """Canonical parameters for an admissible (type, p, q)."""
    ok, reason = admissible(type_id, p, q)
    if not ok:
        raise ParameterError(f"type {type_id} not admissible at (p={p}, q={q}): {reason}")
    if type_id in _R_KINDS:
        kind, exp = _R_KINDS[type_id]
        order = q if kind == "q" else q * q
        mod = Modulus.prime_power(p, exp)
        r = element_of_order(order, mod).residue
        if type_id in (27, 28):
            n = 2 if n is None else n
            _validate_n(type_id, q, n)
            return TypeParams(r=r, n_exp=n)
        if n is not None:
            _validate_n(type_id, q, n)
        return TypeParams(r=r)
    if type_id in _GF_INDEX:
        if n is not None:
            _validate_n(type_id, q, n)
        k = {"q": q, "4": 4, "q2": q * q}[_GF_INDEX[type_id]]
        params = gfp2.GfParams.canonical(p)
        sigma = gfp2.primitive_root(params)
        x = gfp2.subgroup_parameter(params, k)
        if x.b == 0:
            raise ParameterError(
                f"type {type_id} at (p={p}, q={q}): sqrt(D)-component vanished"
            )
        return TypeParams(gf=(params.d, (sigma.a, sigma.b), x.a, x.b))
    if n is not None:
        _validate_n(type_id, q, n)
    return TypeParams()


def make_spec(type_id: int, p: int, q: int, n: int | None = None) -> GroupSpec:
    return GroupSpec(type_id, p, q, derive_params(type_id, p, q, n))


# -- presentation builders -----------------------------------------------

def _fixed36_presentation(type_id: int):
    if type_id == 1:
        return presentation([("a", 4), ("b", 9)])
    if type_id == 2:
        return presentation([("a", 9), ("b", 2), ("c", 2)])
    if type_id == 3:
        return presentation([("a", 2), ("b", 2), ("c", 3), ("d", 3)])
    if type_id == 4:
        return presentation([("a", 4), ("b", 3), ("c", 3)])
    if type_id == 5:
        return presentation([("s", 2), ("r", 3), ("u", 2), ("v", 3)], conj={(0, 1): {1: 2}})
    if type_id == 6:
        return presentation(
            [("s", 2), ("t", 2), ("r", 3), ("u", 3)],
            conj={(0, 2): {2: 2}, (1, 3): {3: 2}},
        )
    if type_id == 7:
        return presentation([("s", 2), ("r", 9), ("z", 2)], conj={(0, 1): {1: 8}})
    if type_id == 8:
        return presentation(
            [("t", 3), ("x", 2), ("y", 2), ("w", 3)],
            conj={(0, 1): {2: 1}, (0, 2): {1: 1, 2: 1}},
        )
    if type_id == 9:
        # dihedral of order 36; the reflection fixes the 2-part of the rotation
        return presentation([("s", 2), ("u", 2), ("v", 9)], conj={(0, 2): {2: 8}})
    if type_id == 10:
        return presentation([("a", 4), ("b", 3), ("w", 3)], conj={(0, 1): {1: 2}})
    if type_id == 11:
        return presentation(
            [("s", 2), ("x", 3), ("y", 3), ("z", 2)],
            conj={(0, 1): {1: 2}, (0, 2): {2: 2}},
        )
    if type_id == 12:
        return presentation([("c", 4), ("a", 3), ("b", 3)], conj={(0, 1): {2: 1}, (0, 2): {1: 2}})
    if type_id == 13:
        return presentation(
            [("c", 9), ("a", 2), ("b", 2)], conj={(0, 1): {2: 1}, (0, 2): {1: 1, 2: 1}}
        )
    if type_id == 14:
        return presentation([("c", 4), ("a", 3), ("b", 3)], conj={(0, 1): {1: 2}, (0, 2): {2: 2}})
    raise UnknownTypeError(f"no fixed presentation for type {type_id}")


def _spec_presentation(spec: GroupSpec):
    t, p, q, par = spec.type_id, spec.p, spec.q, spec.params
    q2 = q * q
    if t <= 14:
        return _fixed36_presentation(t)
    if t == 15:
        return presentation([("a", q2), ("b", p * p)])
    if t == 16:
        return presentation([("a", q), ("b", q), ("c", p * p)])
    if t == 17:
        return presentation([("a", q2), ("b", p), ("c", p)])
    if t == 18:
        return presentation([("a", q), ("b", q), ("c", p), ("d", p)])
    if t in (19, 20):
        return presentation([("a", q2), ("b", p * p)], conj={(0, 1): {1: par.r}})
    if t == 21:
        return presentation([("a", q), ("b", q), ("c", p * p)], conj={(0, 2): {2: par.r}})
    if t == 22:
        return presentation(
            [("a", q2), ("b", p), ("c", p)], conj={(0, 1): {1: par.r}, (0, 2): {2: par.r}}
        )
    if t == 23:
        return presentation([("a", 4), ("b", p), ("c", p)], conj={(0, 2): {2: p - 1}})
    if t == 24:
        return presentation([("a", q2), ("b", p), ("c", p)], conj={(0, 2): {2: par.r}})
    if t in (25, 26):
        rinv = pow(par.r, -1, p)
        return presentation(
            [("a", q2), ("b", p), ("c", p)], conj={(0, 1): {1: par.r}, (0, 2): {2: rinv}}
        )
    if t in (27, 28):
        rn = pow(par.r, par.n_exp, p)
        return presentation(
            [("a", q2), ("b", p), ("c", p)], conj={(0, 1): {1: par.r}, (0, 2): {2: rn}}
        )
    if t == 29:
        return presentation(
            [("a", q2), ("b", p), ("c", p)], conj={(0, 1): {1: par.r}, (0, 2): {2: par.r}}
        )
    if t in (30, 31, 32):
        d, _, m, n = par.gf
        ka = 4 if t == 31 else q2
        return presentation(
            [("a", ka), ("b", p), ("c", p)],
            conj={(0, 1): {1: m, 2: n * d % p}, (0, 2): {1: n, 2: m}},
        )
    if t == 33:
        return presentation(
            [("a", q), ("b", q), ("c", p), ("d", p)],
            conj={(1, 2): {2: par.r}, (1, 3): {3: par.r}},
        )
    if t == 34:
        return presentation([("a", 2), ("b", 2), ("c", p), ("d", p)], conj={(1, 2): {2: p - 1}})
    if t == 35:
        return presentation(
            [("a", q), ("b", q), ("c", p), ("d", p)],
            conj={(0, 2): {2: par.r}, (1, 3): {3: par.r}},
        )
    if t == 36:
        d, _, u, v = par.gf
        return presentation(
            [("a", q), ("b", q), ("c", p), ("d", p)],
            conj={(1, 2): {2: u, 3: v * d % p}, (1, 3): {2: v, 3: u}},
        )
    raise UnknownTypeError(f"no type {t}")


def _check_reflection_presentation(G: PcGroup) -> None:
    """Type 11: the three reflections satisfy the involution/triangle relations."""
    s, x, y = G.gen_indices[0], G.gen_indices[1], G.gen_indices[2]
    a, b, c = s, G.mul(s, x), G.mul(s, y)
    for w in (a, b, c, G.mul(G.mul(a, b), c)):
        if G.mul(w, w) != 0:
            raise AssertionError("reflection relation broken in type 11")
    for w in (G.mul(a, b), G.mul(a, c)):
        if G.power(w, 3) != 0:
            raise AssertionError("triangle relation broken in type 11")


@lru_cache(maxsize=96)
def build(spec: GroupSpec, cap: int = CAYLEY_CAP) -> PcGroup:
    """Collect the presentation for spec and run catalog-level sanity checks."""
    G = collect(_spec_presentation(spec), cap=cap)
    expect = spec.p ** 2 * spec.q ** 2
    if G.order != expect:
        raise AssertionError(f"built order {G.order}, expected {expect}")
    for idx, (_, m) in zip(G.gen_indices, G.presentation.generators):
        if G.element_order(idx) != m:
            raise AssertionError("generator order differs from its relative order")
    if spec.type_id == 11:
        _check_reflection_presentation(G)
    return G


def acting_generator_count(type_id: int) -> int:
    """How many leading generators form the acting factor K (types 19-36)."""
    if not 19 <= type_id <= 36:
        raise UnknownTypeError(f"type {type_id} has no K/H split")
    return 2 if type_id in _TWO_GEN_K else 1


def generator_split(spec: GroupSpec) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(K generator positions, H generator positions) for semidirect types."""
    nk = acting_generator_count(spec.type_id)
    pres = _spec_presentation(spec)
    return tuple(range(nk)), tuple(range(nk, pres.ngens))


def conditions(type_id: int) -> str:
    if not 1 <= type_id <= 36:
        raise UnknownTypeError(f"no type {type_id}")
    return _CONDITIONS[type_id]


def relation_summary(type_id: int) -> str:
    if not 1 <= type_id <= 36:
        raise UnknownTypeError(f"no type {type_id}")
    return _RELATION_SUMMARY[type_id]


def enumerate_admissible(p_max: int, q_max: int, cap: int = CAYLEY_CAP) -> list[GroupSpec]:
    """All admissible specs within the bounds, deterministically ordered."""
    if p_max < 2 or q_max < 2:
        raise ValueError("bounds must be >= 2")
    ps = [n for n in range(2, p_max + 1) if is_prime(n)]
    qs = [n for n in range(2, q_max + 1) if is_prime(n)]
    out: list[GroupSpec] = []
    if p_max >= 3 and q_max >= 2:
        out.extend(make_spec(t, 3, 2) for t in range(1, 15))
    for t in range(15, 37):
        for p in ps:
            for q in qs:
                if p == q or p * p * q * q > cap:
                    continue
                if admissible(t, p, q)[0]:
                    out.append(make_spec(t, p, q))
    out.sort(key=lambda s: (s.type_id, s.p, s.q))
    return out


# -- spec strings ----------------------------------------------------------

_SPEC_RE = re.compile(r"^t(\d+):p=(\d+),q=(\d+)(?:,n=(\d+))?$")


def parse_spec(text: str) -> GroupSpec:
    """Parse 't<id>:p=<p>,q=<q>[,n=<k>]' into a validated GroupSpec."""
    m = _SPEC_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad spec string {text!r} (want t<id>:p=<p>,q=<q>[,n=<k>])")
    type_id, p, q = int(m.group(1)), int(m.group(2)), int(m.group(3))
    n = int(m.group(4)) if m.group(4) else None
    return make_spec(type_id, p, q, n)


def format_spec(spec: GroupSpec) -> str:
    base = f"t{spec.type_id}:p={spec.p},q={spec.q}"
    if spec.params.n_exp is not None:
        base += f",n={spec.params.n_exp}"
    return base
