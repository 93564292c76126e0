"""Time evolution f_{t+1} = g(f_t): frames, DCL verification runs, periods."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    BudgetExceededError,
    DomainError,
    NotAUnitError,
    OverflowPolicyError,
    ParameterError,
    ResourceError,
)
from .graphs import Graph
from .labelings import Labeling
from .numtheory import carmichael_lambda, generates_full_group, lcm, multiplicative_order
from .transforms import (
    EXACT_BITS_CAP,
    AffineHypothesisReport,
    TransformSpec,
    affine_edge_hypothesis,
    apply,
    iterate_closed_form,
)

REPRESENTATIONS = ("exact", "power-form", "index-form", "modular")

# verify_run's "auto" mode stops materializing power labels past this size.
AUTO_EXACT_BITS = 1 << 14
DEFAULT_HORIZON = 64


@dataclass(frozen=True)
class PowerFormLabel:
    """``base ** exponent``, kept unevaluated."""

    base: int
    exponent: int

    def materialize(self) -> int:
        return self.base**self.exponent

    def __str__(self):
        return f"{self.base}^{self.exponent}"

    def to_json(self) -> dict:
        return {"base": str(self.base), "exponent": str(self.exponent)}


@dataclass(frozen=True)
class IndexFormLabel:
    """The prime-index map applied ``depth`` times to ``seed``, unevaluated.

    For depth >= 1 the value is a prime, and the map is strictly increasing,
    so two such labels at equal depth are coprime exactly when their seeds
    differ.
    """

    seed: int
    depth: int

    def __str__(self):
        return f"p^({self.depth})({self.seed})"

    def to_json(self) -> dict:
        return {"seed": str(self.seed), "depth": str(self.depth)}


def _label_to_json(x):
    return str(x) if isinstance(x, int) else x.to_json()


def _label_from_json(x):
    if isinstance(x, dict):
        if "base" in x:
            return PowerFormLabel(int(x["base"]), int(x["exponent"]))
        return IndexFormLabel(int(x["seed"]), int(x["depth"]))
    return int(x)


@dataclass(frozen=True)
class Frame:
    t: int
    labels: tuple
    representation: str
    modulus: int | None = None

    def to_json(self) -> dict:
        out = {
            "t": self.t,
            "representation": self.representation,
            "labels": {str(v): _label_to_json(x) for v, x in enumerate(self.labels)},
        }
        if self.modulus is not None:
            out["modulus"] = self.modulus
        return out

    @classmethod
    def from_json(cls, data: dict) -> Frame:
        raw = data["labels"]
        return cls(
            data["t"],
            tuple(_label_from_json(raw[str(v)]) for v in range(len(raw))),
            data["representation"],
            data.get("modulus"),
        )


def _pair_gcd(x, y):
    """gcd of two labels in the same representation, plus an 'equal' flag."""
    if isinstance(x, PowerFormLabel):
        d = math.gcd(x.base, y.base)
        return (1 if d == 1 else PowerFormLabel(d, x.exponent)), x.base == y.base
    if isinstance(x, IndexFormLabel):
        if x.depth == 0:
            return math.gcd(x.seed, y.seed), x.seed == y.seed
        return (1 if x.seed != y.seed else x), x.seed == y.seed
    return math.gcd(x, y), x == y


def frame_violations(g: Graph, frame: Frame):
    """Edge violations ``[((u, v), gcd), ...]`` and the first duplicate pair or None."""
    labels = frame.labels
    if len(labels) != g.n:
        raise DomainError(f"frame has {len(labels)} labels, graph has {g.n}")
    violations = []
    for u, v in g.edges:
        d, _ = _pair_gcd(labels[u], labels[v])
        if d != 1:
            violations.append(((u, v), d))
    key = {
        PowerFormLabel: lambda x: x.base,
        IndexFormLabel: lambda x: x.seed,
    }
    seen: dict = {}
    duplicate = None
    for v, x in enumerate(labels):
        k = key.get(type(x), lambda y: y)(x)
        if k in seen:
            duplicate = (seen[k], v)
            break
        seen[k] = v
    return violations, duplicate


def _initial_frame(f0: Labeling, representation: str, modulus: int | None) -> Frame:
    if representation == "exact":
        return Frame(0, f0.values, "exact")
    if representation == "power-form":
        return Frame(0, tuple(PowerFormLabel(x, 1) for x in f0), "power-form")
    if representation == "index-form":
        return Frame(0, tuple(IndexFormLabel(x, 0) for x in f0), "index-form")
    return Frame(0, tuple(x % modulus for x in f0), "modular", modulus)


def _check_representation(spec: TransformSpec, representation: str, modulus: int | None) -> None:
    if representation not in REPRESENTATIONS:
        raise ParameterError(f"unknown representation {representation!r}")
    if representation == "power-form" and spec.kind != "power":
        raise ParameterError("power-form labels only exist for power maps")
    if representation == "index-form" and spec.kind != "prime_index":
        raise ParameterError("index-form labels only exist for the prime-index map")
    if representation == "modular":
        if modulus is None or modulus < 2:
            raise ParameterError("modular representation needs a modulus >= 2")
        if spec.kind == "prime_index":
            raise ParameterError("the prime-index map does not commute with reduction mod n")
        if spec.kind == "modular_power" and spec.m % modulus:
            raise ParameterError(f"modulus {modulus} must divide the map's modulus {spec.m}")


def _require_units(f0: Labeling, n: int) -> None:
    for v, x in enumerate(f0):
        if math.gcd(x, n) != 1:
            raise NotAUnitError(x, n, vertex=v)


def evolve(
    g: Graph,
    f0: Labeling,
    spec: TransformSpec,
    t: int,
    representation: str = "exact",
    modulus: int | None = None,
    require_units: bool = False,
    bits_cap: int = EXACT_BITS_CAP,
) -> Frame:
    """The frame f_t = g^t(f_0) in the requested representation."""
    if len(f0) != g.n:
        raise DomainError(f"labeling covers {len(f0)} vertices, graph has {g.n}")
    if t < 0:
        raise ParameterError("t must be non-negative")
    _check_representation(spec, representation, modulus)
    if representation == "modular" and require_units:
        _require_units(f0, modulus)
    if representation == "power-form":
        e = spec.k**t
        return Frame(t, tuple(PowerFormLabel(x, e) for x in f0), "power-form")
    if representation == "index-form":
        return Frame(t, tuple(IndexFormLabel(x, t) for x in f0), "index-form")
    if representation == "exact":
        if spec.kind == "prime_index":
            values = []
            for x in f0:
                for _ in range(t):
                    x = apply(spec, x)
                values.append(x)
            return Frame(t, tuple(values), "exact")
        return Frame(t, tuple(iterate_closed_form(spec, x, t, bits_cap) for x in f0), "exact")
    frame = _initial_frame(f0, "modular", modulus)
    for _ in range(t):
        frame = _advance(spec, frame)
    return frame


def _advance(spec: TransformSpec, frame: Frame, bits_cap: int | None = None) -> Frame:
    t = frame.t + 1
    if frame.representation == "power-form":
        return Frame(t, tuple(PowerFormLabel(x.base, x.exponent * spec.k) for x in frame.labels), "power-form")
    if frame.representation == "index-form":
        return Frame(t, tuple(IndexFormLabel(x.seed, t) for x in frame.labels), "index-form")
    if frame.representation == "modular":
        n = frame.modulus
        return Frame(t, tuple(apply(spec, x) % n for x in frame.labels), "modular", n)
    values = tuple(apply(spec, x) for x in frame.labels)
    if bits_cap is not None and any(x.bit_length() > bits_cap for x in values):
        raise OverflowPolicyError(f"exact labels at t={t} exceed {bits_cap} bits; use power-form labels")
    return Frame(t, values, "exact")


def _convert(frame: Frame, f0: Labeling, spec: TransformSpec, representation: str) -> Frame:
    if representation == "power-form":
        e = spec.k**frame.t
        return Frame(frame.t, tuple(PowerFormLabel(x, e) for x in f0), "power-form")
    return Frame(frame.t, tuple(IndexFormLabel(x, frame.t) for x in f0), "index-form")


@dataclass(frozen=True)
class Violation:
    t: int
    edge: tuple[int, int]
    gcd: object

    def to_json(self) -> dict:
        return {"t": self.t, "edge": list(self.edge), "gcd": _label_to_json(self.gcd)}


@dataclass
class DclRun:
    graph: Graph
    transform: TransformSpec
    f0: Labeling
    horizon: int
    status: str = "verified"  # or "violation", "injectivity-violation"
    violations: list[Violation] = field(default_factory=list)
    duplicate: tuple[int, int, int] | None = None  # (t, u, v)
    warnings: list[str] = field(default_factory=list)
    representations: list[tuple[int, str]] = field(default_factory=list)
    guarantee: str | None = None
    hypothesis: AffineHypothesisReport | None = None

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    @property
    def first_violation(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def to_json(self) -> dict:
        out = {
            "graph": self.graph.to_json(),
            "transform": self.transform.to_json(),
            "f0": self.f0.to_json(),
            "horizon": self.horizon,
            "status": self.status,
            "violations": [v.to_json() for v in self.violations],
            "guarantee": self.guarantee,
            "representations": [{"from_t": t, "representation": r} for t, r in self.representations],
            "warnings": list(self.warnings),
        }
        if self.duplicate is not None:
            t, u, v = self.duplicate
            out["duplicate"] = {"t": t, "vertices": [u, v]}
        return out

    @classmethod
    def from_json(cls, data: dict) -> DclRun:
        dup = data.get("duplicate")
        return cls(
            graph=Graph.from_json(data["graph"]),
            transform=TransformSpec.from_json(data["transform"]),
            f0=Labeling.from_json(data["f0"]),
            horizon=data["horizon"],
            status=data["status"],
            violations=[
                Violation(v["t"], tuple(v["edge"]), _label_from_json(v["gcd"])) for v in data["violations"]
            ],
            duplicate=None if dup is None else (dup["t"], *dup["vertices"]),
            warnings=list(data.get("warnings", [])),
            representations=[(r["from_t"], r["representation"]) for r in data.get("representations", [])],
            guarantee=data.get("guarantee"),
        )


def verify_run(
    g: Graph,
    f0: Labeling,
    spec: TransformSpec,
    horizon: int,
    representation: str = "auto",
    modulus: int | None = None,
    allow_modular_collisions: bool = False,
    exact_bits_cap: int = AUTO_EXACT_BITS,
) -> DclRun:
    """Check edge coprimality and injectivity of frames 0..horizon.

    Stops at the first failing frame and records every violation in it. In
    ``auto`` mode power maps are evaluated exactly until labels pass
    ``exact_bits_cap`` bits and then in power form; the prime-index map is
    evaluated exactly until the sieve budget runs out and then in index form.
    """
    if horizon < 0:
        raise ParameterError("horizon must be non-negative")
    if len(f0) != g.n:
        raise DomainError(f"labeling covers {len(f0)} vertices, graph has {g.n}")
    run = DclRun(g, spec, f0, horizon)
    auto = representation == "auto"
    if auto:
        if spec.kind == "modular_power":
            representation, modulus = "modular", spec.m
        else:
            representation = "exact"
    _check_representation(spec, representation, modulus)
    if spec.kind == "affine":
        run.hypothesis = affine_edge_hypothesis(g, f0, spec.p) if f0.injective else None

    frame = _initial_frame(f0, representation, modulus)
    run.representations.append((0, representation))
    while True:
        violations, duplicate = frame_violations(g, frame)
        if violations:
            run.status = "violation"
            run.violations = [Violation(frame.t, e, d) for e, d in violations]
        if duplicate is not None:
            if frame.representation == "modular" and allow_modular_collisions:
                run.warnings.append(f"t={frame.t}: labels of vertices {duplicate} collide mod {frame.modulus}")
            else:
                run.duplicate = (frame.t, *duplicate)
                if run.status == "verified":
                    run.status = "injectivity-violation"
        if run.status != "verified" or frame.t == horizon:
            break
        cap = None
        if spec.kind == "power":
            cap = exact_bits_cap if auto else EXACT_BITS_CAP
        try:
            frame = _advance(spec, frame, cap)
        except (OverflowPolicyError, ResourceError):
            if not auto or frame.representation != "exact" or spec.kind not in ("power", "prime_index"):
                raise
            target = "power-form" if spec.kind == "power" else "index-form"
            frame = _convert(Frame(frame.t + 1, (), "exact"), f0, spec, target)
            run.representations.append((frame.t, target))

    if run.verified:
        if spec.declared_coprime_preserving:
            run.guarantee = "coprime-preserving-map"
        elif run.hypothesis is not None and run.hypothesis.guaranteed:
            run.guarantee = "affine-edge-hypothesis"
    return run


# -- boundedness ------------------------------------------------------------

@dataclass(frozen=True)
class Boundedness:
    kind: str  # "bounded", "unbounded" or "inconclusive"
    period: int | None = None
    preperiod: int | None = None
    label_set: frozenset[int] | None = None
    witness_vertex: int | None = None
    witness: tuple[int, ...] | None = None

    @property
    def periodic(self) -> bool:
        """Bounded with f_{t+T} = f_t from t = 0 on, not just eventually."""
        return self.kind == "bounded" and self.preperiod == 0


def _witness(spec: TransformSpec, x: int, steps: int) -> tuple[int, ...]:
    out = [x]
    for _ in range(steps):
        try:
            x = apply(spec, x)
        except ResourceError:
            break
        out.append(x)
    return tuple(out)


def classify_boundedness(f0: Labeling, spec: TransformSpec, probe: int = 1000) -> Boundedness:
    """Whether the union of all labels over time is finite.

    Residue maps give per-vertex trajectories that enter a cycle; the period
    is the lcm of the cycle lengths and the preperiod the longest tail.
    Growing maps get a strictly increasing trajectory as the witness.
    """
    if probe < 1:
        raise ParameterError("probe must be >= 1")
    labels = tuple(f0)
    if spec.kind == "modular_power":
        period, tail, label_set = 1, 0, set()
        for x in labels:
            seen: dict[int, int] = {}
            step = 0
            while x not in seen:
                seen[x] = step
                label_set.add(x)
                x = pow(x, spec.k, spec.m)
                step += 1
            period = lcm(period, step - seen[x])
            tail = max(tail, seen[x])
        return Boundedness("bounded", period, tail, frozenset(label_set))
    if spec.kind == "power" and (spec.k == 1 or all(x == 1 for x in labels)):
        return Boundedness("bounded", 1, 0, frozenset(labels))
    steps = min(probe, 4)
    for v, x in enumerate(labels):
        if spec.kind == "power" and x == 1:
            continue
        w = _witness(spec, x, steps)
        if len(w) >= 2 and all(a < b for a, b in zip(w, w[1:])):
            return Boundedness("unbounded", witness_vertex=v, witness=w)
    return Boundedness("inconclusive")


# -- periods modulo n -------------------------------------------------------

def vertex_order_profile(f0: Labeling, n: int) -> tuple[int, ...]:
    _require_units(f0, n)
    return tuple(multiplicative_order(x, n) for x in f0)


@dataclass(frozen=True)
class PeriodReport:
    modulus: int
    vertex_orders: tuple[int, ...]
    graph_period: int
    lambda_n: int
    divides: bool
    generates: bool | None
    equality: bool
    certified: bool

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "vertex_orders": {str(v): t for v, t in enumerate(self.vertex_orders)},
            "lambda_G": self.graph_period,
            "lambda": self.lambda_n,
            "divides": self.divides,
            "generates": self.generates,
            "equality": self.equality,
            "certified": self.certified,
        }

    @classmethod
    def from_json(cls, data: dict) -> PeriodReport:
        orders = data["vertex_orders"]
        return cls(
            data["modulus"],
            tuple(orders[str(v)] for v in range(len(orders))),
            data["lambda_G"],
            data["lambda"],
            data["divides"],
            data["generates"],
            data["equality"],
            data["certified"],
        )


def graph_period(f0: Labeling, n: int) -> PeriodReport:
    """lcm of the vertex orders mod n, compared against lambda(n).

    ``certified`` records a direct check that every label raised to the graph
    period is 1 mod n. ``generates`` is None when the group is too large for
    the closure budget.
    """
    orders = vertex_order_profile(f0, n)
    lam_g = lcm(*orders)
    lam = carmichael_lambda(n)
    try:
        gens = generates_full_group(set(f0), n)
    except BudgetExceededError:
        gens = None
    return PeriodReport(
        modulus=n,
        vertex_orders=orders,
        graph_period=lam_g,
        lambda_n=lam,
        divides=lam % lam_g == 0,
        generates=gens,
        equality=lam_g == lam,
        certified=all(pow(x, lam_g, n) == 1 for x in f0),
    )


def verify_modular_period(g: Graph, f0: Labeling, n: int, period: int) -> bool:
    """True iff every label satisfies label**period == 1 mod n."""
    if len(f0) != g.n:
        raise DomainError(f"labeling covers {len(f0)} vertices, graph has {g.n}")
    _require_units(f0, n)
    return all(pow(x, period, n) == 1 for x in f0)
