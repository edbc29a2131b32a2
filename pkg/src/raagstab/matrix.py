"""Small exact integer matrices and a finite presentation of GL(n, Z).

Matrices are tuples of row tuples.  Generators of GL(n, Z) are named
``("E", i, j)`` (identity plus the unit at ``(i, j)``) and ``("O", i)``
(identity with ``-1`` at ``(i, i)``); indices are 0-based.
"""

from __future__ import annotations

from typing import Sequence

import sympy

IntMatrix = tuple[tuple[int, ...], ...]
GLGen = tuple


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_inverse(a: IntMatrix) -> IntMatrix:
    m = sympy.Matrix(a)
    d = m.det()
    if d not in (1, -1):
        raise ValueError("matrix is not invertible over the integers")
    inv = m.adjugate() * d
    return tuple(tuple(int(inv[i, j]) for j in range(m.cols)) for i in range(m.rows))


def determinant(a: IntMatrix) -> int:
    return int(sympy.Matrix(a).det())


def block(a: IntMatrix, rows: range, cols: range) -> IntMatrix:
    return tuple(tuple(a[i][j] for j in cols) for i in rows)


def gen_matrix(gen: GLGen, n: int) -> IntMatrix:
    m = [list(r) for r in identity_matrix(n)]
    if gen[0] == "E":
        m[gen[1]][gen[2]] = 1
    else:
        m[gen[1]][gen[1]] = -1
    return tuple(tuple(r) for r in m)


def gen_power(gen: GLGen, e: int, n: int) -> IntMatrix:
    m = [list(r) for r in identity_matrix(n)]
    if gen[0] == "E":
        m[gen[1]][gen[2]] = e
    elif e % 2:
        m[gen[1]][gen[1]] = -1
    return tuple(tuple(r) for r in m)


def word_matrix(word: Sequence[tuple[GLGen, int]], n: int) -> IntMatrix:
    out = identity_matrix(n)
    for gen, e in word:
        out = mat_mul(out, gen_power(gen, e, n))
    return out


def gl_word(a: IntMatrix) -> list[tuple[GLGen, int]]:
    """A word in E and O generators whose matrix product is ``a``.

    Row reduction: left multiplication by ``E(i,j)^c`` adds ``c`` times row
    ``j`` to row ``i``, and ``O(i)`` negates row ``i``.
    """
    n = len(a)
    m = [list(r) for r in a]
    ops: list[tuple[GLGen, int]] = []  # applied on the left, in order

    def add(i: int, j: int, c: int):
        if c:
            for k in range(n):
                m[i][k] += c * m[j][k]
            ops.append((("E", i, j), c))

    for c in range(n):
        while True:
            nz = [r for r in range(c, n) if m[r][c]]
            if not nz:
                raise ValueError("matrix is singular")
            if len(nz) == 1:
                break
            piv = min(nz, key=lambda r: abs(m[r][c]))
            for r in nz:
                if r != piv:
                    add(r, piv, -(m[r][c] // m[piv][c]))
        (r,) = nz
        if r != c:
            add(c, r, 1)
            add(r, c, -1)
        if abs(m[c][c]) != 1:
            raise ValueError("matrix is not in GL(n, Z)")
    for c in range(n - 1, -1, -1):
        for r in range(c):
            add(r, c, -m[r][c] * m[c][c])
    for c in range(n):
        if m[c][c] == -1:
            m[c] = [-x for x in m[c]]
            ops.append((("O", c), 1))
    # L_k ... L_1 a = I, so a = L_1^-1 ... L_k^-1
    return [(gen, -e if gen[0] == "E" else e) for gen, e in ops]


def _commutator(x: tuple[GLGen, int], y: tuple[GLGen, int]) -> list[tuple[GLGen, int]]:
    (gx, ex), (gy, ey) = x, y
    return [(gx, -ex), (gy, -ey), (gx, ex), (gy, ey)]


def gl_presentation(n: int) -> list[tuple[list[tuple[GLGen, int]], str]]:
    """Relators of GL(n, Z) on all E(i,j) and O(i), each tagged with its family.

    SL(2, Z) uses the braid and order-four relations; for n >= 3 the
    Steinberg relations with the fourth power of the Weyl element.  The
    sign matrix O(0) acts by conjugation and each O(i) is defined from O(0).
    """
    rels: list[tuple[list[tuple[GLGen, int]], str]] = []
    if n == 1:
        return [([(("O", 0), 1), (("O", 0), 1)], "GL:sign")]
    E = lambda i, j, e=1: (("E", i, j), e)
    weyl = [E(0, 1), E(1, 0, -1), E(0, 1)]
    if n == 2:
        rels.append((weyl + [E(1, 0), E(0, 1, -1), E(1, 0)], "GL:braid"))
    else:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for k in range(n):
                    for l in range(n):
                        if k == l or (i, j) >= (k, l):
                            continue
                        if j != k and i != l:
                            rels.append((_commutator(E(i, j), E(k, l)), "GL:steinberg"))
                for k in range(n):
                    if k not in (i, j):
                        comm = _commutator(E(i, j), E(j, k))
                        target = word_matrix(comm, n)[i][k]
                        rels.append((comm + [E(i, k, -target)], "GL:steinberg"))
    rels.append((weyl * 4, "GL:weyl"))
    O0 = (("O", 0), 1)
    rels.append(([O0, O0], "GL:sign"))
    for i in range(n):
        for j in range(n):
            if i != j:
                flip = -1 if (i == 0) != (j == 0) else 1
                rels.append(([O0, E(i, j), O0, E(i, j, -flip)], "GL:sign"))
    for i in range(1, n):
        w = [E(0, i), E(i, 0, -1), E(0, i)]
        rels.append(([(("O", i), -1), O0] + w + w, "GL:sign"))
    for word, _ in rels:
        assert word_matrix(word, n) == identity_matrix(n), word
    return rels
