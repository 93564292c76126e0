"""Exact integer arithmetic: primes, factorization, orders, Carmichael's lambda.

Everything works on Python ints, so there is no overflow anywhere. Primality
below 2**64 is deterministic Miller-Rabin; above that the test is
probabilistic and factorizations say so through ``Factorization.certified``.
"""

from __future__ import annotations

import math
import random
import threading
from array import array
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import compress

from .errors import (
    BudgetExceededError,
    DegenerateModulusError,
    FactorizationIncomplete,
    NotAUnitError,
    ParameterError,
    ResourceError,
)

__all__ = [
    "gcd",
    "lcm",
    "is_prime",
    "Factorization",
    "factorize",
    "nth_prime",
    "PrimeTable",
    "euler_phi",
    "carmichael_lambda",
    "multiplicative_order",
    "KorseltCertificate",
    "korselt_check",
    "carmichael_numbers_upto",
    "cyclic_subgroup",
    "subgroup_closure",
    "generates_full_group",
    "generating_primes",
    "ModulusContext",
]

DETERMINISTIC_LIMIT = 1 << 64
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_EXTRA_BASES = 16
_TRIAL_LIMIT = 1 << 10
_SMALL_PRIMES = [p for p in range(2, _TRIAL_LIMIT) if all(p % q for q in range(2, math.isqrt(p) + 1))]

RHO_ITERATIONS = 1 << 22
CLOSURE_BUDGET = 10**6


def gcd(a: int, b: int) -> int:
    """gcd with gcd(0, 0) == 0. Never treat that as coprime."""
    return math.gcd(a, b)


def lcm(*values: int) -> int:
    return reduce(lambda x, y: x * y // math.gcd(x, y), values, 1)


# -- primality --------------------------------------------------------------

def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    if n < 10_000:
        return True
    if not all(_strong_probable_prime(n, a) for a in _MR_BASES):
        return False
    if n < DETERMINISTIC_LIMIT:
        return True
    # Seeded by n so repeated calls agree.
    rng = random.Random(n)
    return all(_strong_probable_prime(n, rng.randrange(2, n - 1)) for _ in range(_EXTRA_BASES))


# -- factorization ----------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """Prime-power factorization as ``((p, e), ...)`` sorted by p."""

    n: int
    pairs: tuple[tuple[int, int], ...]
    certified: bool = True

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    @property
    def square_free(self) -> bool:
        return all(e == 1 for _, e in self.pairs)

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def _brent_rho(n: int, seed: int, budget: int) -> int | None:
    """One Brent cycle-finding run; returns a nontrivial factor or None."""
    rng = random.Random(seed)
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g, r, q = 1, 1, 1
    spent = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
        spent += r
        if spent > budget:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int, budget: int) -> int:
    r = math.isqrt(n)
    if r * r == n:
        return r
    for seed in range(8):
        f = _brent_rho(n, seed, budget)
        if f is not None:
            return f
    raise FactorizationIncomplete(n, n)


def factorize(n: int, budget: int = RHO_ITERATIONS) -> Factorization:
    """Trial division by primes below 1024, then Brent's rho on the cofactor.

    Raises ``FactorizationIncomplete`` if a composite cofactor survives every
    rho attempt within ``budget`` iterations.
    """
    if n < 1:
        raise ParameterError(f"factorize needs n >= 1, got {n}")
    original = n
    counts: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    certified = True
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m < _TRIAL_LIMIT * _TRIAL_LIMIT or is_prime(m):
            # Below 1024**2 a trial-division survivor is prime.
            counts[m] = counts.get(m, 0) + 1
            if m >= DETERMINISTIC_LIMIT:
                certified = False
            continue
        try:
            f = _split(m, budget)
        except FactorizationIncomplete as exc:
            raise FactorizationIncomplete(original, exc.cofactor) from None
        stack.extend((f, m // f))
    return Factorization(original, tuple(sorted(counts.items())), certified)


# -- primes by index --------------------------------------------------------

class PrimeTable:
    """Incrementally extended segmented sieve. ``table[i]`` is the i-th prime."""

    SEGMENT = 1 << 20

    def __init__(self, max_index: int = 2_000_000):
        self.max_index = max_index
        self._lock = threading.Lock()
        self._primes = array("Q", [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
        self._limit = 32  # every prime below _limit is in the table

    def __len__(self):
        return len(self._primes)

    def _extend(self, new_limit: int) -> None:
        lo = self._limit
        new_limit = min(new_limit, lo * lo)
        seg = bytearray([1]) * (new_limit - lo)
        root = math.isqrt(new_limit - 1)
        for p in self._primes:
            if p > root:
                break
            start = max(p * p, -(-lo // p) * p)
            seg[start - lo :: p] = bytes(len(range(start - lo, len(seg), p)))
        self._primes.extend(compress(range(lo, new_limit), seg))
        self._limit = new_limit

    def nth(self, i: int) -> int:
        if i < 1:
            raise ParameterError(f"prime index must be >= 1, got {i}")
        if i > self.max_index:
            raise ResourceError(f"prime index {i} exceeds sieve budget {self.max_index}")
        if i <= len(self._primes):
            return self._primes[i - 1]
        with self._lock:
            while len(self._primes) < i:
                self._extend(self._limit + self.SEGMENT)
            return self._primes[i - 1]


_TABLE = PrimeTable()


def nth_prime(i: int) -> int:
    """p_1 = 2, p_2 = 3, ... from the shared sieve cache."""
    return _TABLE.nth(i)


# -- multiplicative structure ----------------------------------------------

def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out -= out // p
    return out


def _lambda_prime_power(p: int, e: int) -> int:
    if p == 2 and e >= 3:
        return 1 << (e - 2)
    return (p - 1) * p ** (e - 1)


def carmichael_lambda(n: int) -> int:
    """Exponent of (Z/nZ)^x; lambda(1) = 1."""
    if n < 1:
        raise ParameterError(f"carmichael_lambda needs n >= 1, got {n}")
    return lcm(*(_lambda_prime_power(p, e) for p, e in factorize(n)))


def multiplicative_order(a: int, n: int) -> int:
    """Least T > 0 with a**T == 1 (mod n), found by descending from lambda(n)."""
    if n < 2:
        raise ParameterError(f"modulus must be >= 2, got {n}")
    a %= n
    if math.gcd(a, n) != 1:
        raise NotAUnitError(a, n)
    order, primes = _lambda_and_primes(n)
    for q in primes:
        while order % q == 0 and pow(a, order // q, n) == 1:
            order //= q
    return order


@lru_cache(maxsize=4096)
def _lambda_and_primes(n: int) -> tuple[int, tuple[int, ...]]:
    lam = carmichael_lambda(n)
    return lam, tuple(factorize(lam).primes)


@dataclass(frozen=True)
class KorseltCertificate:
    n: int
    is_carmichael: bool
    composite: bool
    square_free: bool
    divisibility: tuple[tuple[int, bool], ...]

    @property
    def reason(self) -> str:
        if self.is_carmichael:
            return "carmichael"
        if not self.composite:
            return "prime"
        if not self.square_free:
            return "not square-free"
        bad = [p for p, ok in self.divisibility if not ok]
        return "p-1 does not divide n-1 for p in " + ",".join(map(str, bad))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "is_carmichael": self.is_carmichael,
            "composite": self.composite,
            "square_free": self.square_free,
            "divisibility": [[p, ok] for p, ok in self.divisibility],
            "reason": self.reason,
        }

    @classmethod
    def from_json(cls, data: dict) -> KorseltCertificate:
        return cls(
            data["n"],
            data["is_carmichael"],
            data["composite"],
            data["square_free"],
            tuple((p, ok) for p, ok in data["divisibility"]),
        )


def korselt_check(n: int) -> KorseltCertificate:
    if n < 2:
        raise ParameterError(f"korselt_check needs n >= 2, got {n}")
    fac = factorize(n)
    composite = not (len(fac) == 1 and fac.pairs[0][1] == 1)
    div = tuple((p, (n - 1) % (p - 1) == 0) for p in fac.primes)
    return KorseltCertificate(
        n=n,
        is_carmichael=composite and fac.square_free and all(ok for _, ok in div),
        composite=composite,
        square_free=fac.square_free,
        divisibility=div,
    )


def carmichael_numbers_upto(limit: int) -> list[int]:
    return [n for n in range(2, limit + 1) if korselt_check(n).is_carmichael]


# -- subgroups --------------------------------------------------------------

def cyclic_subgroup(p: int, q: int) -> set[int]:
    """<p> inside (Z/qZ)^x, by iterating powers until 1 comes back."""
    if not is_prime(q):
        raise ParameterError(f"modulus {q} is not prime")
    base = p % q
    if base == 0:
        raise DegenerateModulusError(f"{q} divides {p}")
    out = {1}
    x = base
    while x != 1:
        out.add(x)
        x = x * base % q
    return out


def subgroup_closure(gens, n: int, budget: int = CLOSURE_BUDGET) -> set[int]:
    """The subgroup of (Z/nZ)^x generated by ``gens``, by BFS over products."""
    gens = sorted({g % n for g in gens})
    for g in gens:
        if math.gcd(g, n) != 1:
            raise NotAUnitError(g, n)
    seen = {1 % n}
    frontier = [1 % n]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % n
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > budget:
            raise BudgetExceededError(f"subgroup closure mod {n} exceeds {budget} elements")
        frontier = nxt
    return seen


def generates_full_group(labels, n: int, budget: int = CLOSURE_BUDGET) -> bool:
    if n < 2:
        raise ParameterError(f"modulus must be >= 2, got {n}")
    phi = euler_phi(n)
    if phi > budget:
        raise BudgetExceededError(f"group order {phi} mod {n} exceeds closure budget {budget}")
    return len(subgroup_closure(labels, n, budget)) == phi


def generating_primes(n: int, budget: int = CLOSURE_BUDGET) -> list[int]:
    """Greedy set of primes not dividing n that generates (Z/nZ)^x.

    Primes are pairwise coprime, so the result is usable as the labels of any
    graph. A prime is kept only if it lies outside the subgroup built so far.
    """
    phi = euler_phi(n)
    if phi > budget:
        raise BudgetExceededError(f"group order {phi} mod {n} exceeds closure budget {budget}")
    chosen: list[int] = []
    group = {1 % n}
    i = 0
    while len(group) < phi:
        i += 1
        p = nth_prime(i)
        if n % p == 0 or p % n in group:
            continue
        chosen.append(p)
        group = subgroup_closure(chosen, n, budget)
    return chosen


@dataclass(frozen=True)
class ModulusContext:
    n: int
    factorization: Factorization
    lam: int
    square_free: bool

    @classmethod
    def of(cls, n: int) -> ModulusContext:
        if n < 2:
            raise ParameterError(f"modulus must be >= 2, got {n}")
        fac = factorize(n)
        lam = lcm(*(_lambda_prime_power(p, e) for p, e in fac))
        return cls(n, fac, lam, fac.square_free)

    @property
    def phi(self) -> int:
        return euler_phi(self.n)
