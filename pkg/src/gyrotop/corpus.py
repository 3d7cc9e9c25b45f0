"""Standard finite group tables used as the verification corpus.

Groups are the degenerate gyrogroups (all gyrations trivial); they are
the only finite instances with a canonical construction, so they drive
the exhaustive finite-carrier checks.
"""

from __future__ import annotations

from itertools import permutations

from .finite import CayleyTable, FiniteGyrogroup, check_axioms


def cyclic(n: int) -> CayleyTable:
    """The cyclic group Z_n."""
    return CayleyTable.from_rows([[(a + b) % n for b in range(n)] for a in range(n)])


def klein_four() -> CayleyTable:
    """Z_2 x Z_2; indices composed by xor."""
    return CayleyTable.from_rows([[a ^ b for b in range(4)] for a in range(4)])


def symmetric3() -> CayleyTable:
    """S_3, permutations of {0,1,2} indexed lexicographically."""
    perms = sorted(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    rows = [
        [index[tuple(p[q[i]] for i in range(3))] for q in perms]
        for p in perms
    ]
    return CayleyTable.from_rows(rows)


def dihedral4() -> CayleyTable:
    """D_4 of order 8: r^a s^b with idx = a + 4b, s r s = r^-1."""
    def mul(x: int, y: int) -> int:
        a, bb = x % 4, x // 4
        c, d = y % 4, y // 4
        rot = (a + (c if bb == 0 else -c)) % 4
        return rot + 4 * (bb ^ d)

    return CayleyTable.from_rows([[mul(x, y) for y in range(8)] for x in range(8)])


def quaternion8() -> CayleyTable:
    """Q_8 = {1,-1,i,-i,j,-j,k,-k} with idx = 2*axis + sign."""
    # axis: 0->1, 1->i, 2->j, 3->k; quaternion unit products
    prod = {
        (0, 0): (0, +1), (0, 1): (1, +1), (0, 2): (2, +1), (0, 3): (3, +1),
        (1, 0): (1, +1), (1, 1): (0, -1), (1, 2): (3, +1), (1, 3): (2, -1),
        (2, 0): (2, +1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, +1),
        (3, 0): (3, +1), (3, 1): (2, +1), (3, 2): (1, -1), (3, 3): (0, -1),
    }

    def mul(x: int, y: int) -> int:
        ax, sx = x // 2, 1 - 2 * (x % 2)
        ay, sy = y // 2, 1 - 2 * (y % 2)
        az, sz = prod[(ax, ay)]
        s = sx * sy * sz
        return 2 * az + (0 if s > 0 else 1)

    return CayleyTable.from_rows([[mul(x, y) for y in range(8)] for x in range(8)])


#: Every group table of order <= 8 in the corpus.
GROUP_TABLES: dict[str, CayleyTable] = {
    "z2": cyclic(2),
    "z3": cyclic(3),
    "z4": cyclic(4),
    "klein4": klein_four(),
    "z5": cyclic(5),
    "z6": cyclic(6),
    "s3": symmetric3(),
    "z7": cyclic(7),
    "z8": cyclic(8),
    "d4": dihedral4(),
    "q8": quaternion8(),
}

#: The instances swept by the topology checks.
TOPOLOGY_CORPUS = ("z2", "z3", "z4", "klein4", "z6", "s3")


def corpus_gyrogroup(name: str) -> FiniteGyrogroup:
    """Axiom-checked gyrogroup for a named corpus table."""
    return check_axioms(GROUP_TABLES[name])
