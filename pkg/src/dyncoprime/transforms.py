"""Transformation maps g: N -> N and checks of their coprime behaviour."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import OverflowPolicyError, ParameterError
from .numtheory import carmichael_lambda, cyclic_subgroup, factorize, is_prime, nth_prime

KINDS = ("power", "prime_index", "modular_power", "affine", "additive_shift")

# Largest exact label, in bits, that iterate_closed_form will materialize.
EXACT_BITS_CAP = 1 << 20


@dataclass(frozen=True)
class TransformSpec:
    """A parameterized map. Build through the helpers below rather than directly."""

    kind: str
    k: int | None = None
    m: int | None = None
    p: int | None = None
    c: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown transform kind {self.kind!r}")
        if self.kind in ("power", "modular_power") and (self.k is None or self.k < 1):
            raise ParameterError(f"{self.kind} requires k >= 1")
        if self.kind == "modular_power" and (self.m is None or self.m < 2):
            raise ParameterError("modular_power requires m >= 2")
        if self.kind == "affine" and (self.p is None or not is_prime(self.p)):
            raise ParameterError(f"affine requires a prime p, got {self.p}")
        if self.kind == "additive_shift" and (self.c is None or self.c < 1):
            raise ParameterError("additive_shift requires c >= 1")

    @property
    def declared_coprime_preserving(self) -> bool:
        # modular_power keeps units as units but not integer coprimality of
        # residues (2**2 == 7**2 == 4 mod 15), so it is not declared.
        return self.kind in ("power", "prime_index")

    @property
    def injective(self) -> bool:
        return self.kind != "modular_power"

    @property
    def domain_restriction(self) -> str | None:
        if self.kind == "modular_power":
            return f"labels are residues mod {self.m}; periodic analysis needs units"
        return None

    def describe(self) -> str:
        return {
            "power": f"x -> x^{self.k}",
            "prime_index": "x -> p_x",
            "modular_power": f"x -> x^{self.k} mod {self.m}",
            "affine": f"x -> {self.p}x + 1",
            "additive_shift": f"x -> x + {self.c}",
        }[self.kind]

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        for key in ("k", "m", "p", "c"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out

    @classmethod
    def from_json(cls, data: dict) -> TransformSpec:
        data = dict(data)
        kind = data.pop("kind", None)
        unknown = set(data) - {"k", "m", "p", "c"}
        if unknown:
            raise ParameterError(f"unexpected transform fields {sorted(unknown)}")
        return cls(kind, **data)


def power(k: int) -> TransformSpec:
    return TransformSpec("power", k=k)


def prime_index() -> TransformSpec:
    return TransformSpec("prime_index")


def modular_power(k: int, m: int) -> TransformSpec:
    return TransformSpec("modular_power", k=k, m=m)


def affine(p: int) -> TransformSpec:
    return TransformSpec("affine", p=p)


def additive_shift(c: int) -> TransformSpec:
    return TransformSpec("additive_shift", c=c)


def parse_spec(text: str) -> TransformSpec:
    """Parse ``power:2``, ``prime_index``, ``modular_power:2:561``, ``affine:2``, ``additive_shift:1``."""
    kind, *args = text.split(":")
    try:
        nums = [int(a) for a in args]
        if kind == "power":
            return power(*nums)
        if kind == "prime_index" and not nums:
            return prime_index()
        if kind == "modular_power":
            return modular_power(*nums)
        if kind == "affine":
            return affine(*nums)
        if kind == "additive_shift":
            return additive_shift(*nums)
    except TypeError:
        pass
    except ValueError as exc:
        raise ParameterError(f"bad transform {text!r}: {exc}") from None
    raise ParameterError(f"bad transform {text!r}")


def apply(spec: TransformSpec, x: int) -> int:
    if spec.kind == "power":
        return x**spec.k
    if spec.kind == "prime_index":
        return nth_prime(x)
    if spec.kind == "modular_power":
        return pow(x, spec.k, spec.m)
    if spec.kind == "affine":
        return spec.p * x + 1
    return x + spec.c


def _modular_iterate(x: int, k: int, m: int, t: int) -> int:
    x %= m
    if math.gcd(x, m) == 1:
        lam = carmichael_lambda(m)
        return pow(x, pow(k, t, lam), m)
    # Non-units: walk the trajectory and jump once it cycles.
    seen: dict[int, int] = {}
    trail: list[int] = []
    for step in range(t):
        if x in seen:
            start = seen[x]
            period = step - start
            return trail[start + (t - start) % period]
        seen[x] = step
        trail.append(x)
        x = pow(x, k, m)
    return x


def iterate_closed_form(spec: TransformSpec, x0: int, t: int, bits_cap: int = EXACT_BITS_CAP) -> int:
    """g applied t times to x0 without looping over t where a closed form exists."""
    if t < 0:
        raise ParameterError("t must be non-negative")
    if t == 0:
        return x0
    if spec.kind == "power":
        if x0 <= 1 or spec.k == 1:
            return x0
        # bits(x0**(k**t)) <= k**t * bits(x0); compare in log space first.
        if t * math.log2(spec.k) + math.log2(x0.bit_length()) > math.log2(bits_cap) + 1:
            raise OverflowPolicyError(
                f"{x0}^({spec.k}^{t}) exceeds the {bits_cap}-bit exact cap; use power-form labels"
            )
        value = x0 ** (spec.k**t)
        if value.bit_length() > bits_cap:
            raise OverflowPolicyError(
                f"{x0}^({spec.k}^{t}) exceeds the {bits_cap}-bit exact cap; use power-form labels"
            )
        return value
    if spec.kind == "affine":
        pt = spec.p**t
        return pt * x0 + (pt - 1) // (spec.p - 1)
    if spec.kind == "modular_power":
        return _modular_iterate(x0, spec.k, spec.m, t)
    if spec.kind == "additive_shift":
        return x0 + spec.c * t
    raise ParameterError(f"{spec.kind} has no closed form; iterate apply instead")


@dataclass(frozen=True)
class MapVerdict:
    preserved: bool
    counterexample: tuple[int, int] | None
    trials: int


def sample_coprime_preservation(spec: TransformSpec, bound: int) -> MapVerdict:
    """Check every coprime pair 1 <= a < b <= bound, stopping at the first failure.

    Pairs are scanned with a ascending, then b ascending. A ``preserved``
    verdict only speaks for the box.
    """
    if bound < 2:
        raise ParameterError("bound must be >= 2")
    images = {x: apply(spec, x) for x in range(1, bound + 1)}
    trials = 0
    for a in range(1, bound + 1):
        for b in range(a + 1, bound + 1):
            if math.gcd(a, b) != 1:
                continue
            trials += 1
            if math.gcd(images[a], images[b]) != 1:
                return MapVerdict(False, (a, b), trials)
    return MapVerdict(True, None, trials)


@dataclass(frozen=True)
class SubgroupTest:
    q: int
    residue: int | None
    member_of_subgroup: bool
    status: str  # "tested", "skipped-q-equals-p", "indeterminate-q-divides-p-minus-1"


@dataclass(frozen=True)
class EdgeHypothesis:
    edge: tuple[int, int]
    d: int
    tests: tuple[SubgroupTest, ...]

    @property
    def prime_divisors(self) -> list[int]:
        return [t.q for t in self.tests]


@dataclass(frozen=True)
class AffineHypothesisReport:
    p: int
    edges: tuple[EdgeHypothesis, ...]
    overall: bool
    indeterminate_edges: tuple[tuple[int, int], ...] = field(default=())

    @property
    def guaranteed(self) -> bool:
        """True when the subgroup condition holds on every edge with no indeterminate prime."""
        return self.overall and not self.indeterminate_edges

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "overall": self.overall,
            "indeterminate_edges": [list(e) for e in self.indeterminate_edges],
            "edges": [
                {
                    "edge": list(e.edge),
                    "d": e.d,
                    "tests": [
                        {"q": t.q, "residue": t.residue, "member_of_subgroup": t.member_of_subgroup, "status": t.status}
                        for t in e.tests
                    ],
                }
                for e in self.edges
            ],
        }


def affine_edge_hypothesis(g, f0, p: int) -> AffineHypothesisReport:
    """Per-edge test of the subgroup condition that makes x -> px+1 safe forever.

    For edge labels a < b and each prime q | b - a, the edge is safe at q when
    (p-1)a + 1 mod q lies outside <p> mod q. q == p never divides an evolved
    label past t = 0 and is skipped. q | p-1 is flagged indeterminate: there
    <p> = {1} and the residue is 1, so it always shows as a member.
    """
    if not is_prime(p):
        raise ParameterError(f"p must be prime, got {p}")
    labels = f0.values if hasattr(f0, "values") else tuple(f0)
    if len(set(labels)) != len(labels):
        raise ParameterError("affine hypothesis needs an injective labeling")
    entries = []
    indeterminate = []
    overall = True
    for u, v in g.edges:
        a, b = sorted((labels[u], labels[v]))
        d = b - a
        tests = []
        for q, _ in factorize(d):
            if q == p:
                tests.append(SubgroupTest(q, None, False, "skipped-q-equals-p"))
                continue
            residue = ((p - 1) * a + 1) % q
            member = residue in cyclic_subgroup(p, q)
            status = "tested"
            if (p - 1) % q == 0:
                status = "indeterminate-q-divides-p-minus-1"
                indeterminate.append((u, v))
            overall = overall and not member
            tests.append(SubgroupTest(q, residue, member, status))
        entries.append(EdgeHypothesis((u, v), d, tuple(tests)))
    return AffineHypothesisReport(p, tuple(entries), overall, tuple(dict.fromkeys(indeterminate)))
