"""Finite gyrogroups: Cayley-table ingestion, axiom checking, subgyrogroups.

The axioms, in the labels used throughout this package:

* G1 - a two-sided identity exists,
* G2 - every element has a two-sided inverse,
* G3 - gyr[a,b], defined by c -> -(a+b) + (a + (b+c)), satisfies the left
  gyroassociative law and is an automorphism of the table,
* G4 - the left loop property gyr[a+b, b] = gyr[a, b].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

#: A gyration as a permutation of carrier indices: images[c] = gyr[a,b]c.
GyroPermutation = tuple[int, ...]

#: Subsets of a finite carrier are plain frozensets of indices.
Subset = frozenset


class TableParseError(ValueError):
    """Raised for malformed Cayley-table text; carries line/column."""

    def __init__(self, message: str, line: int, column: int | None = None) -> None:
        where = f"line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{message} ({where})")
        self.line = line
        self.column = column


class AxiomError(ValueError):
    """A gyrogroup axiom fails; names the axiom and a witness tuple."""

    def __init__(self, axiom: str, witness: dict, message: str) -> None:
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True)
class CayleyTable:
    """An n-by-n operation table over indices 0..n-1.

    Row a, column b holds a+b.  Construction validates shape and entry
    range only; no axioms are checked here.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if n == 0:
            raise ValueError("empty table")
        for i, row in enumerate(self.rows):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            for j, v in enumerate(row):
                if not 0 <= v < n:
                    raise ValueError(f"entry {v} at ({i},{j}) out of range [0,{n})")

    @classmethod
    def from_rows(cls, rows) -> "CayleyTable":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @property
    def order(self) -> int:
        return len(self.rows)


def load_cayley_table(text: str | bytes) -> CayleyTable:
    """Parse the plain-text table format.

    Line 1 is the order n; the next n lines carry n whitespace-separated
    indices in [0, n).  Index 0 as identity is a convention only; the
    identity is always located by scan later.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise TableParseError("empty input", 1)
    try:
        n = int(lines[0])
    except ValueError:
        raise TableParseError(f"order is not an integer: {lines[0]!r}", 1) from None
    if n <= 0:
        raise TableParseError(f"order must be positive, got {n}", 1)
    body = lines[1:]
    if len(body) != n:
        raise TableParseError(f"expected {n} rows, found {len(body)}: non-square", len(body) + 1)
    rows = []
    for i, ln in enumerate(body):
        tokens = ln.split()
        if len(tokens) != n:
            raise TableParseError(
                f"row has {len(tokens)} entries, expected {n}: non-square", i + 2
            )
        row = []
        for j, tok in enumerate(tokens):
            try:
                v = int(tok)
            except ValueError:
                raise TableParseError(f"non-integer token {tok!r}", i + 2, j + 1) from None
            if not 0 <= v < n:
                raise TableParseError(f"index {v} out of range [0,{n})", i + 2, j + 1)
            row.append(v)
        rows.append(tuple(row))
    return CayleyTable(tuple(rows))


@dataclass(frozen=True)
class FiniteGyrogroup:
    """A validated finite gyrogroup: table, identity, inverses, gyrations.

    ``gyr_table[a][b]`` is the permutation c -> gyr[a,b]c.  Instances
    produced by :func:`check_axioms` satisfy G1-G4; tests may build raw
    instances directly to model corrupted structures.
    """

    table: CayleyTable
    identity: int
    inverse: tuple[int, ...]
    gyr_table: tuple[tuple[GyroPermutation, ...], ...]

    @property
    def order(self) -> int:
        return self.table.order

    def elements(self) -> range:
        return range(self.order)

    def carrier(self) -> Subset:
        return frozenset(self.elements())

    def add(self, a: int, b: int) -> int:
        return self.table.rows[a][b]

    def neg(self, a: int) -> int:
        return self.inverse[a]

    def gyr(self, a: int, b: int, c: int) -> int:
        return self.gyr_table[a][b][c]

    def coadd(self, a: int, b: int) -> int:
        return self.add(a, self.gyr(a, self.neg(b), b))

    def cosub(self, a: int, b: int) -> int:
        return self.coadd(a, self.neg(b))


def _find_identity(t: CayleyTable) -> int | None:
    n = t.order
    for e in range(n):
        if all(t.rows[e][x] == x and t.rows[x][e] == x for x in range(n)):
            return e
    return None


def _find_inverses(t: CayleyTable, e: int) -> tuple[tuple[int, ...] | None, int | None]:
    """Two-sided inverses; returns (inverses, None) or (None, offender)."""
    n = t.order
    inv = []
    for x in range(n):
        found = None
        for y in range(n):
            if t.rows[y][x] == e and t.rows[x][y] == e:
                found = y
                break
        if found is None:
            return None, x
        inv.append(found)
    return tuple(inv), None


def _gyration_images(t: CayleyTable, inv: tuple[int, ...], a: int, b: int) -> tuple[int, ...]:
    ab = t.rows[a][b]
    neg_ab = inv[ab]
    return tuple(t.rows[neg_ab][t.rows[a][t.rows[b][c]]] for c in range(t.order))


def check_axioms(table: CayleyTable) -> FiniteGyrogroup:
    """Verify G1-G4 exhaustively; return the full structure on success.

    Gyrations are derived from the table through the gyrator identity and
    then checked to be table automorphisms (G3) satisfying the left loop
    property (G4).  Raises :class:`AxiomError` naming the first violated
    axiom with a witness tuple.
    """
    n = table.order
    e = _find_identity(table)
    if e is None:
        raise AxiomError("G1", {}, "no two-sided identity element")
    inv, offender = _find_inverses(table, e)
    if inv is None:
        raise AxiomError("G2", {"element": offender},
                         f"element {offender} has no two-sided inverse")

    gyr = tuple(
        tuple(_gyration_images(table, inv, a, b) for b in range(n)) for a in range(n)
    )

    for a in range(n):
        for b in range(n):
            images = gyr[a][b]
            if len(set(images)) != n:
                raise AxiomError(
                    "G3", {"a": a, "b": b, "images": list(images)},
                    f"gyr[{a},{b}] is not a bijection",
                )
            # left gyroassociative law with the derived gyration
            ab = table.rows[a][b]
            for c in range(n):
                lhs = table.rows[a][table.rows[b][c]]
                rhs = table.rows[ab][images[c]]
                if lhs != rhs:
                    raise AxiomError(
                        "G3", {"a": a, "b": b, "c": c, "lhs": lhs, "rhs": rhs},
                        f"left gyroassociativity fails at ({a},{b},{c})",
                    )
            # automorphism: gyr(x+y) = gyr(x) + gyr(y)
            for x in range(n):
                for y in range(n):
                    if images[table.rows[x][y]] != table.rows[images[x]][images[y]]:
                        raise AxiomError(
                            "G3", {"a": a, "b": b, "x": x, "y": y},
                            f"gyr[{a},{b}] does not preserve the operation at ({x},{y})",
                        )

    for a in range(n):
        for b in range(n):
            if gyr[table.rows[a][b]][b] != gyr[a][b]:
                raise AxiomError(
                    "G4", {"a": a, "b": b},
                    f"left loop property fails at ({a},{b})",
                )

    return FiniteGyrogroup(table, e, inv, gyr)


def unchecked_gyrogroup(table: CayleyTable) -> FiniteGyrogroup:
    """Build the structure without G3/G4 validation.

    Used to run the identity verifier against deliberately corrupted
    tables.  Still requires a two-sided identity and inverses, since the
    derived fields would otherwise be meaningless.
    """
    e = _find_identity(table)
    if e is None:
        raise AxiomError("G1", {}, "no two-sided identity element")
    inv, offender = _find_inverses(table, e)
    if inv is None:
        raise AxiomError("G2", {"element": offender},
                         f"element {offender} has no two-sided inverse")
    n = table.order
    gyr = tuple(
        tuple(_gyration_images(table, inv, a, b) for b in range(n)) for a in range(n)
    )
    return FiniteGyrogroup(table, e, inv, gyr)


def is_associative(table: CayleyTable) -> bool:
    n = table.order
    r = table.rows
    return all(
        r[a][r[b][c]] == r[r[a][b]][c]
        for a in range(n) for b in range(n) for c in range(n)
    )


def from_group(table: CayleyTable) -> FiniteGyrogroup:
    """Wrap an associative table as a gyrogroup with identity gyrations."""
    if not is_associative(table):
        raise ValueError(
            "table is not associative; use check_axioms for general tables"
        )
    e = _find_identity(table)
    if e is None:
        raise AxiomError("G1", {}, "no two-sided identity element")
    inv, offender = _find_inverses(table, e)
    if inv is None:
        raise AxiomError("G2", {"element": offender},
                         f"element {offender} has no two-sided inverse")
    n = table.order
    ident = tuple(range(n))
    gyr = tuple(tuple(ident for _ in range(n)) for _ in range(n))
    return FiniteGyrogroup(table, e, inv, gyr)


@dataclass(frozen=True)
class SubgyrogroupInfo:
    """One subgyrogroup with its normality and gyration-invariance verdicts.

    ``gyration_invariant`` is only evaluated for normal subgyrogroups
    (kernel-type subgyrogroups are expected to satisfy gyr[a,b]H = H for
    all a, b); it stays None otherwise.
    """

    members: Subset
    normal: bool
    gyration_invariant: bool | None = field(default=None)

    def sort_key(self) -> tuple:
        return (len(self.members), tuple(sorted(self.members)))


def _is_congruence(G: FiniteGyrogroup, H: Subset) -> bool:
    """Is a ~ b  <=>  -a + b in H a congruence of the operation?"""
    n = G.order
    rel = [[G.add(G.neg(a), b) in H for b in range(n)] for a in range(n)]
    # equivalence: symmetry and transitivity (reflexivity holds, e in H)
    for a in range(n):
        for b in range(n):
            if rel[a][b] != rel[b][a]:
                return False
    for a in range(n):
        for b in range(n):
            if not rel[a][b]:
                continue
            for c in range(n):
                if rel[b][c] and not rel[a][c]:
                    return False
    # compatibility with the operation
    for a in range(n):
        for a2 in range(n):
            if not rel[a][a2]:
                continue
            for b in range(n):
                for b2 in range(n):
                    if rel[b][b2] and not rel[G.add(a, b)][G.add(a2, b2)]:
                        return False
    return True


def find_subgyrogroups(G: FiniteGyrogroup) -> tuple[SubgyrogroupInfo, ...]:
    """Enumerate subsets containing e closed under + and -, classified.

    Normality is decided by the congruence criterion (quotient
    well-definedness of a ~ b <=> -a + b in H).  Every normal H is then
    additionally tested for gyr[a,b]H = H over all pairs; a False there
    is a reportable finding, not an error.  Output is sorted by
    (size, members) and deterministic.
    """
    n = G.order
    if n > 16:
        raise ValueError("subset enumeration capped at carrier order 16")
    e = G.identity
    others = [x for x in range(n) if x != e]
    found = []
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            H = frozenset((e,) + extra)
            if any(G.add(a, b) not in H for a in H for b in H):
                continue
            if any(G.neg(a) not in H for a in H):
                continue
            normal = _is_congruence(G, H)
            invariant = None
            if normal:
                invariant = all(
                    frozenset(G.gyr(a, b, h) for h in H) == H
                    for a in range(n) for b in range(n)
                )
            found.append(SubgyrogroupInfo(H, normal, invariant))
    return tuple(sorted(found, key=SubgyrogroupInfo.sort_key))
