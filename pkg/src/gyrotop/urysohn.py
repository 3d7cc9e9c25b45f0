"""Constructive Urysohn machinery over dyadic neighborhood schedules.

Given a target neighborhood O of the identity, a schedule of
neighborhoods U_0, U_1, ... with U_{i+1} (+) U_{i+1} inside U_i and
U_0 (+) U_0 inside O is built, the dyadic family V(m/2^n) is populated by
the recursion

    V(1) = U_0,   V(1/2^{n+1}) = U_{n+1},
    V(2m/2^{n+1}) = V(m/2^n),
    V((2m+1)/2^{n+1}) = V(m/2^n) (+) U_{n+1},

and the separating function f(y) = inf {r : y in cl V(r)} (1 outside
cl V(1)) is evaluated at the family's depth.

On the disk the schedule halves rapidities: U_i is the ball of rapidity
artanh(R)/2^{i+1}, so every inclusion in the recursion holds with exact
equality of rapidities and V(m/2^n) is the ball of rapidity
(m/2^n) * artanh(R)/2.  That yields the closed-form evaluation oracle
:func:`urysohn_oracle` and makes all three structure facts decidable in
exact radius calculus.  Finite carriers use exact set products against a
supplied topology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import IO

from .diskbase import DiskBall, ball_add_radius
from .finite import FiniteGyrogroup, Subset
from .topology import FiniteTopology, gyr_set, set_add


class ScheduleError(ValueError):
    """No valid neighborhood chain exists; names the blocking level."""

    def __init__(self, message: str, level: int) -> None:
        super().__init__(message)
        self.level = level


@total_ordering
@dataclass(frozen=True)
class DyadicRational:
    """A dyadic rational m/2^level in (0, 1], stored in lowest form."""

    numerator: int
    level: int

    def __post_init__(self) -> None:
        if self.level < 0 or not 0 < self.numerator <= (1 << self.level):
            raise ValueError(f"{self.numerator}/2^{self.level} is not in (0, 1]")
        if self.level > 0 and self.numerator % 2 == 0:
            raise ValueError(
                f"{self.numerator}/2^{self.level} is not in lowest form; use .of()"
            )

    @classmethod
    def of(cls, numerator: int, level: int) -> "DyadicRational":
        while level > 0 and numerator % 2 == 0:
            numerator //= 2
            level -= 1
        return cls(numerator, level)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.level)

    def __float__(self) -> float:
        return self.numerator / (1 << self.level)

    def __lt__(self, other: "DyadicRational") -> bool:
        return self.numerator << other.level < other.numerator << self.level

    def __str__(self) -> str:
        return f"{self.numerator}/{1 << self.level}"


ONE = DyadicRational(1, 0)


@dataclass(frozen=True)
class UrysohnSchedule:
    """Neighborhood chain U_0..U_depth descending into the target.

    Disk mode: ``levels[i]`` is the ball of rapidity
    ``base_rapidity / 2**i`` where ``base_rapidity = artanh(R)/2``, so
    consecutive squares close up exactly.  Finite mode: explicit open
    sets found greedily; ``context`` carries (gyrogroup, topology).
    """

    mode: str
    target: DiskBall | Subset
    levels: tuple
    depth: int
    base_rapidity: float = 0.0
    context: tuple[FiniteGyrogroup, FiniteTopology] | None = None
    gyr_invariant: bool = True

    def level_radius(self, i: int) -> float:
        if self.mode != "disk":
            raise ValueError("level_radius is only defined in disk mode")
        return math.tanh(self.base_rapidity / (1 << i))


def build_schedule(
    target: DiskBall | Subset,
    depth: int,
    finite: tuple[FiniteGyrogroup, FiniteTopology] | None = None,
) -> UrysohnSchedule:
    """Construct and validate a schedule of the requested depth.

    Disk: the target ball must have radius < 1 (artanh diverges at 1).
    Finite: the target must be an open set containing the identity in
    the supplied topology; the chain is found greedily, preferring large
    neighborhoods, and a :class:`ScheduleError` names the level at which
    no neighborhood squares into its predecessor.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if finite is None:
        if not isinstance(target, DiskBall):
            raise TypeError("disk schedules require a DiskBall target")
        if target.radius >= 1.0:
            raise ValueError("target radius must be < 1; artanh diverges at 1")
        rho0 = math.atanh(target.radius) / 2.0
        levels = tuple(DiskBall(math.tanh(rho0 / (1 << i))) for i in range(depth + 1))
        # rapidity halving is exact in binary floating point
        for i in range(depth):
            assert 2.0 * (rho0 / (1 << (i + 1))) == rho0 / (1 << i)
        return UrysohnSchedule("disk", target, levels, depth, base_rapidity=rho0)

    G, topo = finite
    target = frozenset(target)
    e = G.identity
    if not topo.is_open(target) or e not in target:
        raise ValueError("finite target must be an open set containing the identity")
    candidates = sorted(
        (O for O in topo.opens if e in O), key=lambda s: (-len(s), sorted(s))
    )
    levels: list[Subset] = []
    prev: Subset = target
    for i in range(depth + 1):
        chosen = None
        for V in candidates:
            if set_add(G, V, V) <= prev:
                chosen = V
                break
        if chosen is None:
            raise ScheduleError(
                f"no open neighborhood of the identity squares into level {i - 1}",
                level=i,
            )
        levels.append(chosen)
        prev = chosen
    U0 = levels[0]
    invariant = all(
        gyr_set(G, a, b, U) <= U for U in levels for a in U0 for b in U0
    )
    return UrysohnSchedule(
        "finite", target, tuple(levels), depth, context=finite, gyr_invariant=invariant
    )


@dataclass(frozen=True)
class DyadicVFamily:
    """The populated map r -> V(r) for dyadics of level <= depth."""

    schedule: UrysohnSchedule
    depth: int
    regions: dict
    coefficients: dict = field(default_factory=dict)  # disk: r -> Fraction

    @property
    def mode(self) -> str:
        return self.schedule.mode

    def keys_sorted(self) -> list[DyadicRational]:
        return sorted(self.regions)

    def radius(self, key: DyadicRational) -> float:
        return math.tanh(float(self.coefficients[key]) * self.schedule.base_rapidity)

    def rederive(self, key: DyadicRational):
        """Recompute V(key) from scratch by descending the recursion.

        Disk descent happens in exact rapidity-coefficient arithmetic
        (the recursion adds rapidities), so the result matches the
        stored region bit for bit; :meth:`mobius_descent_radius` is the
        floating-point cross-check of the same recursion.
        """
        if self.mode == "disk":
            return DiskBall(
                math.tanh(float(self._descend_coefficient(key)) * self.schedule.base_rapidity)
            )
        if key == ONE:
            return self.schedule.levels[0]
        m, lev = key.numerator, key.level
        if m == 1:
            return self.schedule.levels[lev]
        left = self.rederive(DyadicRational.of((m - 1) // 2, lev - 1))
        G, _ = self.schedule.context
        return set_add(G, left, self.schedule.levels[lev])

    def _descend_coefficient(self, key: DyadicRational) -> Fraction:
        if key == ONE:
            return Fraction(1)
        m, lev = key.numerator, key.level
        if m == 1:
            return Fraction(1, 1 << lev)
        # canonical keys have odd numerators: V((2k+1)/2^lev) = V(k/2^(lev-1)) + U_lev
        return self._descend_coefficient(DyadicRational.of((m - 1) // 2, lev - 1)) + Fraction(1, 1 << lev)

    def mobius_descent_radius(self, key: DyadicRational) -> float:
        """Radius of V(key) recomputed by actual Mobius ball sums.

        Agrees with the stored closed-form radius up to a few ulp of
        floating-point rounding; a unit test pins the bound.
        """
        if self.mode != "disk":
            raise ValueError("Mobius descent is only defined for disk families")
        if key == ONE:
            return self.schedule.levels[0].radius
        m, lev = key.numerator, key.level
        if m == 1:
            return self.schedule.levels[lev].radius
        left = self.mobius_descent_radius(DyadicRational.of((m - 1) // 2, lev - 1))
        return ball_add_radius(left, self.schedule.levels[lev].radius)


def build_vsets(schedule: UrysohnSchedule, depth: int) -> DyadicVFamily:
    """Populate V(m/2^n) for all n <= depth by the recursion.

    Requires ``schedule.depth >= depth``.  Even numerators reuse the
    lower level's region (lowest-form keys make this automatic); odd
    numerators append one schedule step.  Disk regions carry their exact
    rapidity coefficient as a Fraction, and the recursion is checked to
    reproduce the dyadic index itself at every node.
    """
    if depth > schedule.depth:
        raise ValueError(f"schedule depth {schedule.depth} < requested depth {depth}")
    disk = schedule.mode == "disk"
    regions: dict = {ONE: schedule.levels[0]}
    coeffs: dict = {ONE: Fraction(1)}
    for lev in range(1, depth + 1):
        for m in range(1, (1 << lev) + 1, 2):
            key = DyadicRational(m, lev)
            if m == 1:
                regions[key] = schedule.levels[lev]
                coeffs[key] = Fraction(1, 1 << lev)
                continue
            prev_key = DyadicRational.of((m - 1) // 2, lev - 1)
            if disk:
                c = coeffs[prev_key] + Fraction(1, 1 << lev)
                if c != key.fraction:  # recursion must reproduce the index
                    raise AssertionError(f"coefficient drift at {key}: {c}")
                coeffs[key] = c
                regions[key] = DiskBall(
                    math.tanh(float(c) * schedule.base_rapidity)
                )
            else:
                G, _ = schedule.context
                regions[key] = set_add(G, regions[prev_key], schedule.levels[lev])
    if not disk:
        coeffs = {}
    return DyadicVFamily(schedule, depth, regions, coeffs)


@dataclass(frozen=True)
class FactVerdict:
    fact: int
    passed: bool
    checked: int
    first_failure: dict | None

    def to_finding(self) -> dict:
        names = {
            1: "dyadic_fact_1_step_inclusion",
            2: "dyadic_fact_2_monotonicity",
            3: "dyadic_fact_3_closure_in_interior",
        }
        return {
            "check": names[self.fact],
            "verdict": "pass" if self.passed else "fail",
            "witness": self.first_failure,
            "margin": None,
        }


@dataclass(frozen=True)
class FactsReport:
    verdicts: tuple[FactVerdict, ...]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_findings(self) -> list[dict]:
        return [v.to_finding() for v in self.verdicts]


def verify_vset_facts(fam: DyadicVFamily) -> FactsReport:
    """Check the three structure facts at every applicable index pair.

    1. V(m/2^n) (+) V(1/2^n) inside V((m+1)/2^n), itself inside the target,
    2. V(r1) inside V(r2) whenever r1 < r2,
    3. cl V(r1) inside Int cl V(r2) whenever r1 < r2.

    Disk: exact radius calculus (the closure of an open ball of radius
    rho is the closed ball of radius rho, so fact 3 reduces to a strict
    radius inequality; fact 1 holds with equality, and equality counts
    as inclusion since the target sets are the same open ball).
    Finite: exact set computations against the supplied topology.
    """
    disk = fam.mode == "disk"
    sched = fam.schedule
    keys = fam.keys_sorted()
    if disk:
        radius = {k: fam.radius(k) for k in keys}
    else:
        G, topo = sched.context
        closures = {k: topo.closure(fam.regions[k]) for k in keys}
        hulls = {k: topo.interior(topo.closure(fam.regions[k])) for k in keys}

    checked1 = 0
    fail1 = None
    for lev in range(1, fam.depth + 1):
        step = DyadicRational.of(1, lev)
        for m in range(1, 1 << lev):
            key = DyadicRational.of(m, lev)
            succ = DyadicRational.of(m + 1, lev)
            checked1 += 1
            if disk:
                lhs = ball_add_radius(radius[key], radius[step])
                rhs = radius[succ]
                # coefficient identity makes lhs == rhs up to one final
                # rounding; compare the exact coefficients instead
                exact = fam.coefficients[key] + fam.coefficients[step] == fam.coefficients[succ]
                inside_target = radius[succ] <= sched.target.radius
                ok = exact and inside_target and abs(lhs - rhs) < 1e-12
            else:
                prod = set_add(G, fam.regions[key], fam.regions[step])
                ok = prod <= fam.regions[succ] and fam.regions[succ] <= sched.target
            if not ok and fail1 is None:
                fail1 = {"m": m, "level": lev}
    checked2 = checked3 = 0
    fail2 = fail3 = None
    for i, r1 in enumerate(keys):
        for r2 in keys[i + 1:]:
            checked2 += 1
            checked3 += 1
            if disk:
                rad1, rad2 = radius[r1], radius[r2]
                if not rad1 <= rad2 and fail2 is None:
                    fail2 = {"r1": str(r1), "r2": str(r2)}
                # closed ball inside an open ball needs strictly smaller radius
                if not rad1 < rad2 and fail3 is None:
                    fail3 = {"r1": str(r1), "r2": str(r2)}
            else:
                if not fam.regions[r1] <= fam.regions[r2] and fail2 is None:
                    fail2 = {"r1": str(r1), "r2": str(r2)}
                if not closures[r1] <= hulls[r2] and fail3 is None:
                    fail3 = {"r1": str(r1), "r2": str(r2)}
    return FactsReport((
        FactVerdict(1, fail1 is None, checked1, fail1),
        FactVerdict(2, fail2 is None, checked2, fail2),
        FactVerdict(3, fail3 is None, checked3, fail3),
    ))


def _disk_modulus(y) -> float:
    if isinstance(y, (int, float)):
        val = abs(float(y))
    elif isinstance(y, complex):
        val = abs(y)
    else:  # DiskPoint
        val = abs(y.z)
    if val >= 1.0:
        raise ValueError(f"point with modulus {val} is outside the open disk")
    return val


def urysohn_eval(fam: DyadicVFamily, y) -> float:
    """f(y) at the family's resolution.

    Returns the smallest represented dyadic r with y in cl V(r), or 1.0
    when there is none.  This overestimates the infimum by at most one
    grid step 2**-depth; the identity itself evaluates to 2**-depth at
    finite depth while the true limit is 0.
    """
    if fam.mode == "disk":
        ay = _disk_modulus(y)
        for key in fam.keys_sorted():
            if ay <= fam.radius(key):  # closure of the open ball
                return float(key)
        return 1.0
    _, topo = fam.schedule.context
    for key in fam.keys_sorted():
        if y in topo.closure(fam.regions[key]):
            return float(key)
    return 1.0


@dataclass(frozen=True)
class UrysohnFunction:
    """The separating function as a value: a family plus its depth.

    Values lie in [0, 1]; resolution is one dyadic grid step 2**-depth.
    """

    family: DyadicVFamily

    @property
    def depth(self) -> int:
        return self.family.depth

    def __call__(self, y) -> float:
        return urysohn_eval(self.family, y)


def urysohn_oracle(R: float, y) -> float:
    """Closed-form limit of f on the disk: min(1, artanh|y| / (artanh(R)/2)).

    Independent of the dyadic family; rapidity-linear radii make the
    infimum a ratio of rapidities.
    """
    if not 0.0 < R < 1.0:
        raise ValueError(f"target radius must lie in (0, 1), got {R}")
    ay = _disk_modulus(y)
    return min(1.0, math.atanh(ay) / (math.atanh(R) / 2.0))


@dataclass(frozen=True)
class ClosedExterior:
    """The closed set {y : |y| >= radius} in the disk."""

    radius: float

    def __post_init__(self) -> None:
        if not 0.0 < self.radius < 1.0:
            raise ValueError(f"exterior radius must lie in (0, 1), got {self.radius}")


@dataclass(frozen=True)
class SeparationDemo:
    """Record of one separation demonstration."""

    mode: str
    refused: bool
    reason: str | None
    target: str
    depth: int
    radius: float | None = None
    f_at_base_limit: float | None = None
    f_at_base_depth: float | None = None
    f_at_target: float | None = None

    @property
    def separated(self) -> bool:
        return (not self.refused and self.f_at_base_limit == 0.0
                and self.f_at_target == 1.0)

    def to_finding(self) -> dict:
        witness = {
            "target": self.target,
            "refused": self.refused,
            **({"reason": self.reason} if self.reason else {}),
            **({"radius": self.radius} if self.radius is not None else {}),
            **({"f_at_base_limit": self.f_at_base_limit,
                "f_at_base_depth": self.f_at_base_depth,
                "f_at_target": self.f_at_target} if not self.refused else {}),
        }
        return {
            "check": "separation_function",
            "verdict": "pass" if self.separated else "fail",
            "witness": witness,
            "margin": None,
        }


def _choose_radius(boundary: float) -> float:
    # target must stay outside the closed ball of the chosen radius
    return 0.8 if boundary > 0.8 else 0.875 * boundary


def separation_demo(
    x,
    target,
    depth: int = 10,
    radius: float | None = None,
    finite: tuple[FiniteGyrogroup, FiniteTopology] | None = None,
) -> SeparationDemo:
    """Demonstrate separation of the identity from a point or closed set.

    Homogeneity reduces both separation statements to the identity, so
    ``x`` must be the identity element.  Disk mode picks a target ball
    with the target outside its closure, builds the dyadic family and
    reports f(x) (0 in the limit, 2**-depth at finite depth) and
    f(target) = 1.  Finite mode refuses when the supplied topology is
    not Hausdorff, since no separating function can exist.
    """
    if finite is not None:
        from .topology import check_topology_properties

        G, topo = finite
        if x != G.identity:
            raise ValueError("finite demonstrations start at the identity element")
        if target == x:
            raise ValueError("degenerate input: target equals the base point")
        verdict = check_topology_properties(G, topo, flags=("hausdorff",)).verdicts[0]
        if not verdict.passed:
            return SeparationDemo("finite", True, "not_hausdorff", str(target), depth)
        chosen = None
        for O in sorted(topo.opens, key=lambda s: (len(s), sorted(s))):
            if G.identity in O and target not in topo.closure(O):
                chosen = O
                break
        if chosen is None:
            return SeparationDemo("finite", True, "no_separating_neighborhood",
                                  str(target), depth)
        sched = build_schedule(chosen, depth, finite=finite)
        fam = build_vsets(sched, depth)
        return SeparationDemo(
            "finite", False, None, str(target), depth, radius=None,
            f_at_base_limit=0.0,
            f_at_base_depth=urysohn_eval(fam, G.identity),
            f_at_target=urysohn_eval(fam, target),
        )

    ax = _disk_modulus(x)
    if ax != 0.0:
        raise ValueError("disk demonstrations start at the origin (homogeneity)")
    if isinstance(target, ClosedExterior):
        boundary = target.radius
        target_desc = f"closed exterior |y| >= {target.radius}"
        eval_at = boundary  # the set's closest point to the origin
    else:
        boundary = _disk_modulus(target)
        if boundary == 0.0:
            raise ValueError("degenerate input: target equals the base point")
        target_desc = f"point at |y| = {boundary}"
        eval_at = boundary
    R = radius if radius is not None else _choose_radius(boundary)
    if boundary <= R:
        raise ValueError(
            f"target at modulus {boundary} is not outside the closed ball {R}"
        )
    sched = build_schedule(DiskBall(R), depth)
    fam = build_vsets(sched, depth)
    return SeparationDemo(
        "disk", False, None, target_desc, depth, radius=R,
        f_at_base_limit=0.0,
        f_at_base_depth=urysohn_eval(fam, 0.0),
        f_at_target=urysohn_eval(fam, eval_at),
    )


def export_profile_csv(fam: DyadicVFamily, stream: IO[str], grid=None) -> None:
    """CSV rows (|y|, depth evaluation, oracle, abs error) on a radial grid."""
    import csv

    if fam.mode != "disk":
        raise ValueError("profile export is only defined for disk families")
    R = fam.schedule.target.radius
    if grid is None:
        grid = [i * 0.05 for i in range(20)]
    writer = csv.writer(stream)
    writer.writerow(["abs_y", "eval", "oracle", "abs_error"])
    for ay in grid:
        got = urysohn_eval(fam, ay)
        want = urysohn_oracle(R, ay)
        writer.writerow([repr(float(ay)), repr(got), repr(want), repr(abs(got - want))])
