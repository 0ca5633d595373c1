"""Exact Gaussian elimination over any field whose elements support + - * /.

Used with ``Fraction`` and :class:`~abelexp.cyclotomic.Cyclotomic` entries.
Zero tests go through ``bool(x)``.
"""

from __future__ import annotations

import math
from typing import Sequence


def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                fac = m[i][c]
                m[i] = [x - fac * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None, zero=0, one=1) -> list[list]:
    """Basis of {v : rows . v = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = row_reduce(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, zero=0) -> list | None:
    """One solution of rows . x = rhs (free variables set to zero), or None."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_reduce(aug)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


class IncrementalBasis:
    """Echelon basis grown one vector at a time, with coordinate recovery.

    ``vectors`` keeps the inserted (independent) originals; each echelon row
    carries the combination of originals that produced it, so membership
    queries return coordinates with respect to ``vectors``.
    """

    def __init__(self, dim: int, zero=0, one=1):
        self.dim = dim
        self.zero = zero
        self.one = one
        self.vectors: list[list] = []
        self._rows: list[tuple[int, list, list]] = []  # (pivot, reduced row, combination)

    def __len__(self) -> int:
        return len(self.vectors)

    def _reduce(self, v: Sequence) -> tuple[list, list]:
        w = list(v)
        combo = [self.zero] * len(self.vectors)
        for pivot, row, rc in self._rows:
            c = w[pivot]
            if c:
                w = [a - c * b for a, b in zip(w, row)]
                combo = [a + c * b for a, b in zip(combo, rc)]
        return w, combo

    def coordinates(self, v: Sequence) -> list | None:
        """Coefficients expressing v in ``vectors``, or None when v is outside the span."""
        w, combo = self._reduce(v)
        if any(w):
            return None
        return combo

    def contains(self, v: Sequence) -> bool:
        w, _ = self._reduce(v)
        return not any(w)

    def add(self, v: Sequence) -> bool:
        """Insert v if it is independent of the current basis; report whether it was."""
        w, combo = self._reduce(v)
        pivot = next((i for i, a in enumerate(w) if a), None)
        if pivot is None:
            return False
        inv = 1 / w[pivot]
        w = [a * inv for a in w]
        # new row = inv * (v - sum combo_j vectors_j)
        rc = [-(c * inv) for c in combo] + [inv]
        for idx, (p, row, prc) in enumerate(self._rows):
            prc.append(self.zero)
            c = row[pivot]
            if c:
                row[:] = [a - c * b for a, b in zip(row, w)]
                prc[:] = [a - c * b for a, b in zip(prc, rc)]
        self._rows.append((pivot, w, rc))
        self.vectors.append(list(v))
        return True


def _axpy(a: int, x: list[int], terms: list[tuple[int, list[int]]]) -> list[int]:
    """a*x - sum c*y over (c, y) in terms; fused in chunks to limit passes."""
    out = [a * v for v in x] if a != 1 else x
    i = 0
    while i < len(terms):
        chunk = terms[i : i + 4]
        i += 4
        if len(chunk) == 4:
            (c0, y0), (c1, y1), (c2, y2), (c3, y3) = chunk
            out = [v - c0 * b0 - c1 * b1 - c2 * b2 - c3 * b3 for v, b0, b1, b2, b3 in zip(out, y0, y1, y2, y3)]
        elif len(chunk) == 3:
            (c0, y0), (c1, y1), (c2, y2) = chunk
            out = [v - c0 * b0 - c1 * b1 - c2 * b2 for v, b0, b1, b2 in zip(out, y0, y1, y2)]
        elif len(chunk) == 2:
            (c0, y0), (c1, y1) = chunk
            out = [v - c0 * b0 - c1 * b1 for v, b0, b1 in zip(out, y0, y1)]
        else:
            ((c0, y0),) = chunk
            out = [v - c0 * b0 for v, b0 in zip(out, y0)]
    return out


class CyclotomicEchelon:
    """Row echelon form for vectors over Q(zeta_N), packed as integer lists.

    A vector of length m is stored coordinate-major: ``phi`` integer lists of
    length m (coefficient of zeta^j in every entry) over one denominator.
    Stored rows are scaled so their pivot entry is exactly 1, which keeps
    elimination division-free. Same contract as the membership part of
    :class:`IncrementalBasis`, several times faster on wide vectors.
    """

    def __init__(self, order: int, dim: int):
        from .cyclotomic import field

        f = field(order)
        self.order = order
        self.phi = f.phi
        self.dim = dim
        self._table = f.reduce_table
        self.rows: dict[int, tuple] = {}  # pivot -> (zeta-multiples of numerators, denominator)
        self.vectors: list = []

    def __len__(self) -> int:
        return len(self.rows)

    def _pack(self, vec) -> tuple[list[list[int]], int]:
        from .cyclotomic import Cyclotomic

        den = math.lcm(*(Cyclotomic.coerce(c, self.order).den for c in vec)) if vec else 1
        cols = [[0] * self.dim for _ in range(self.phi)]
        for i, c in enumerate(vec):
            c = Cyclotomic.coerce(c, self.order)
            if c:
                s = den // c.den
                for j, a in enumerate(c.nums):
                    if a:
                        cols[j][i] = a * s
        return cols, den

    def _entry(self, cols, i) -> list[int]:
        return [cols[j][i] for j in range(self.phi)]

    def _zeta_multiples(self, cols) -> list[list[list[int]]]:
        """[zeta^s * row for s < phi], each coordinate-major."""
        phi, n, table = self.phi, self.order, self._table
        out = []
        for s in range(phi):
            res = [[0] * self.dim for _ in range(phi)]
            for j in range(phi):
                red = table[(j + s) % n]
                for t in range(phi):
                    if red[t]:
                        m, src, dst = red[t], cols[j], res[t]
                        res[t] = [a + m * b for a, b in zip(dst, src)]
            out.append(res)
        return out

    @staticmethod
    def _content(cols, den) -> tuple[list[list[int]], int]:
        g = den
        for col in cols:
            g = math.gcd(g, *col)
            if g == 1:
                return cols, den
        return [[a // g for a in col] for col in cols], den // g

    def _reduce(self, cols, den):
        phi = self.phi
        for p in sorted(self.rows):
            c = self._entry(cols, p)
            if not any(c):
                continue
            mults, rden = self.rows[p]
            # v - c*row = (rden*V - C*R) / (den*rden)
            live = [(c[s], mults[s]) for s in range(phi) if c[s]]
            cols, den = self._content([_axpy(rden, cols[t], [(cs, m[t]) for cs, m in live]) for t in range(phi)], den * rden)
        return cols, den

    def contains(self, vec) -> bool:
        cols, _ = self._reduce(*self._pack(vec))
        return not any(any(col) for col in cols)

    def add(self, vec) -> bool:
        from .cyclotomic import Cyclotomic

        cols, den = self._reduce(*self._pack(vec))
        pivot = next((i for i in range(self.dim) if any(col[i] for col in cols)), None)
        if pivot is None:
            return False
        # scale so the pivot entry is 1: multiply by den / V[pivot]
        inv = Cyclotomic._make(self.order, self._entry(cols, pivot), 1).inverse()
        scaled = [[0] * self.dim for _ in range(self.phi)]
        mults = self._zeta_multiples(cols)
        for s in range(self.phi):
            if inv.nums[s]:
                for t in range(self.phi):
                    m = inv.nums[s]
                    scaled[t] = [a + m * b for a, b in zip(scaled[t], mults[s][t])]
        # scaled / inv.den is the normalized row (its pivot entry equals 1)
        scaled, rden = self._content(scaled, inv.den)
        self.rows[pivot] = (self._zeta_multiples(scaled), rden)
        self.vectors.append(list(vec))
        return True


def realify(vec, order: int) -> list[int]:
    """Integer Q-coordinates of a scaled copy of a Q(zeta_N) vector (power basis, entry-major)."""
    from .cyclotomic import Cyclotomic

    vals = [Cyclotomic.coerce(c, order) for c in vec]
    den = math.lcm(*(c.den for c in vals)) if vals else 1
    out = []
    for c in vals:
        s = den // c.den
        out.extend(a * s for a in c.nums)
    return out


class RealifiedSpan:
    """Q(zeta_N)-span of vectors, decided over Q with python-flint.

    The K-span of v_1..v_d equals, after realification, the Q-span of
    zeta^s v_l for s < phi(N); that Q-span is stable under zeta, so w lies
    in the K-span iff realify(w) lies in it. Rank over K is the Q-rank
    divided by phi. Vectors go in as columns: flint's rank is much faster
    on tall matrices than on wide ones here.
    """

    def __init__(self, order: int, dim: int, vectors=()):
        from .cyclotomic import Cyclotomic, field

        self.order = order
        self.dim = dim
        self.phi = field(order).phi
        self.vectors: list = []
        self._rows: list[list[int]] = []
        self._rank: int | None = None
        zetas = [Cyclotomic.zeta(order, s) for s in range(self.phi)]
        for v in vectors:
            self.vectors.append(list(v))
            for z in zetas:
                self._rows.append(realify([z * c for c in v], order))

    def _qrank(self, rows) -> int:
        import flint

        if not rows:
            return 0
        return flint.fmpz_mat(rows).transpose().rank()

    def __len__(self) -> int:
        if self._rank is None:
            self._rank = self._qrank(self._rows)
        return self._rank // self.phi

    def contains_all(self, vecs) -> bool:
        vecs = [realify(v, self.order) for v in vecs]
        if not vecs:
            return True
        base = len(self) * self.phi
        return self._qrank(self._rows + vecs) == base

    def contains(self, vec) -> bool:
        return self.contains_all([vec])
