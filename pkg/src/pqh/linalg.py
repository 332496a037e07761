"""Exact dense linear algebra over Q.

All matrices are immutable tuples of row tuples; entries are
``fractions.Fraction`` by default, but any field element supporting
arithmetic with int/Fraction (e.g. :class:`pqh.quadext.QuadExt`) works.
There is no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

F0 = Fraction(0)
F1 = Fraction(1)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    return tuple(c * a for a in u)


def vec_is_zero(u):
    return all(a == 0 for a in u)


def vec_dot(u, v):
    return sum((a * b for a, b in zip(u, v)), F0)


def _entry(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floating point is not allowed in exact matrices")
    return x


class Mat:
    """Immutable dense matrix with exact field entries."""

    __slots__ = ("rows", "_ncols", "_hash")

    def __init__(self, rows, ncols=None):
        self._hash = None
        self.rows = tuple(tuple(_entry(x) for x in r) for r in rows)
        if self.rows:
            self._ncols = len(self.rows[0])
            if any(len(r) != self._ncols for r in self.rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != self._ncols:
                raise ValueError("ncols mismatch")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs an explicit ncols")
            self._ncols = ncols

    @classmethod
    def identity(cls, n):
        return cls(
            tuple(tuple(F1 if i == j else F0 for j in range(n)) for i in range(n)),
            ncols=n,
        )

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(tuple((F0,) * ncols for _ in range(nrows)), ncols=ncols)

    @classmethod
    def from_cols(cls, cols, nrows=None):
        cols = tuple(tuple(c) for c in cols)
        if not cols:
            if nrows is None:
                raise ValueError("empty column list needs nrows")
            return cls(tuple(() for _ in range(nrows)), ncols=0)
        return cls(tuple(zip(*cols)))

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return self._ncols

    @property
    def shape(self):
        return (len(self.rows), self._ncols)

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    @property
    def cols(self):
        return tuple(self.col(j) for j in range(self._ncols))

    @property
    def T(self):
        return Mat(tuple(zip(*self.rows)), ncols=len(self.rows)) if self.rows else Mat(
            tuple(() for _ in range(self._ncols)), ncols=0
        )

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self._ncols == other._ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self._ncols))
        return self._hash

    def __repr__(self):
        return f"Mat({list(map(list, self.rows))!r})"

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat(
            tuple(vec_add(a, b) for a, b in zip(self.rows, other.rows)),
            ncols=self._ncols,
        )

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat(
            tuple(vec_sub(a, b) for a, b in zip(self.rows, other.rows)),
            ncols=self._ncols,
        )

    def __neg__(self):
        return self.scale(-F1)

    def scale(self, c):
        return Mat(tuple(vec_scale(c, r) for r in self.rows), ncols=self._ncols)

    def __matmul__(self, other):
        if self._ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        out = []
        brows = other.rows
        width = other.ncols
        for r in self.rows:
            acc = [F0] * width
            for a, brow in zip(r, brows):
                if a == 0:
                    continue
                for j, b in enumerate(brow):
                    if b != 0:
                        acc[j] += a * b
            out.append(tuple(acc))
        return Mat(out, ncols=width)

    def mul_vec(self, v):
        if len(v) != self._ncols:
            raise ValueError("vector length mismatch")
        return tuple(vec_dot(r, v) for r in self.rows)

    def is_zero(self):
        return all(vec_is_zero(r) for r in self.rows)

    def is_symmetric(self):
        return self.shape[0] == self.shape[1] and self == self.T

    def is_skew(self):
        return self.shape[0] == self.shape[1] and self == -self.T

    def vstack(self, other):
        if self._ncols != other._ncols:
            raise ValueError("column mismatch")
        return Mat(self.rows + other.rows, ncols=self._ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row mismatch")
        return Mat(
            tuple(a + b for a, b in zip(self.rows, other.rows)),
            ncols=self._ncols + other._ncols,
        )

    def submatrix(self, row_idx, col_idx):
        return Mat(
            tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx),
            ncols=len(col_idx),
        )

    # -- elimination ------------------------------------------------------

    def rref(self):
        """Reduced row echelon form.

        Returns ``(R, pivots)`` where R keeps only the nonzero rows and
        pivots is the tuple of pivot column indices.  The result is the
        unique canonical basis of the row space.
        """
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self._ncols):
            sel = None
            for i in range(r, len(rows)):
                if rows[i][c] != 0:
                    sel = i
                    break
            if sel is None:
                continue
            rows[r], rows[sel] = rows[sel], rows[r]
            inv = rows[r][c]
            rows[r] = [x / inv for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return Mat(rows[:r], ncols=self._ncols), tuple(pivots)

    def rank(self):
        return self.rref()[0].nrows

    def kernel(self):
        """Canonical (RREF) basis of {x : A x = 0}, rows of the result."""
        R, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self._ncols) if j not in pivset]
        basis = []
        for j in free:
            v = [F0] * self._ncols
            v[j] = F1
            for i, p in enumerate(pivots):
                v[p] = -R.rows[i][j]
            basis.append(tuple(v))
        if not basis:
            return Mat((), ncols=self._ncols)
        return Mat(basis, ncols=self._ncols).rref()[0]

    def det(self):
        n = self.nrows
        if n != self._ncols:
            raise ValueError("determinant of non-square matrix")
        rows = [list(r) for r in self.rows]
        det = F1
        for c in range(n):
            sel = None
            for i in range(c, n):
                if rows[i][c] != 0:
                    sel = i
                    break
            if sel is None:
                return F0
            if sel != c:
                rows[c], rows[sel] = rows[sel], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = rows[c][c]
            for i in range(c + 1, n):
                if rows[i][c] != 0:
                    f = rows[i][c] / inv
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
        return det

    def inverse(self):
        n = self.nrows
        if n != self._ncols:
            raise ValueError("inverse of non-square matrix")
        aug = self.hstack(Mat.identity(n))
        R, pivots = aug.rref()
        if pivots[:n] != tuple(range(n)):
            raise ValueError("matrix is singular")
        return Mat(tuple(r[n:] for r in R.rows), ncols=n)

    def solve(self, b):
        """One solution x of A x = b, or None if inconsistent."""
        aug = self.hstack(Mat.from_cols((b,), nrows=self.nrows))
        R, pivots = aug.rref()
        if self._ncols in pivots:
            return None
        x = [F0] * self._ncols
        for i, p in enumerate(pivots):
            x[p] = R.rows[i][self._ncols]
        return tuple(x)

    def trace(self):
        if self.nrows != self._ncols:
            raise ValueError("trace of non-square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), F0)

    def charpoly(self):
        """Monic characteristic polynomial det(xI - A), coefficients low to high.

        Faddeev-LeVerrier; exact, needs only division by small integers.
        """
        n = self.nrows
        if n != self._ncols:
            raise ValueError("charpoly of non-square matrix")
        if n == 0:
            return (F1,)
        coeffs = [F1]  # leading coefficient of x^n
        M = Mat.identity(n)
        for k in range(1, n + 1):
            AM = self @ M
            c = -AM.trace() / k
            coeffs.append(c)
            M = AM + Mat.identity(n).scale(c)
        # coeffs is [1, c1, ..., cn] from x^n downward; return low->high
        return tuple(reversed(coeffs))

    def power(self, k):
        if self.nrows != self._ncols:
            raise ValueError("power of non-square matrix")
        result = Mat.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result


def symmetric_signature(M: Mat):
    """Sylvester inertia (p, s, q) of a symmetric matrix, by exact congruence.

    Pivot rule: first nonzero diagonal entry; when the diagonal is all
    zero but the matrix is not, the first nonzero off-diagonal pair is
    split hyperbolically and contributes (1, 0, 1).
    """
    if not M.is_symmetric():
        raise ValueError("signature of non-symmetric matrix")
    idx = list(range(M.nrows))
    a = {
        (i, j): M.rows[i][j] for i in idx for j in idx if M.rows[i][j] != 0
    }
    pos = neg = null = 0
    while idx:
        piv = next((i for i in idx if a.get((i, i), F0) != 0), None)
        if piv is not None:
            d = a[(piv, piv)]
            if d > 0:
                pos += 1
            else:
                neg += 1
            idx.remove(piv)
            col = {k: a[(piv, k)] for k in idx if (piv, k) in a}
            for k in col:
                for l in col:
                    val = a.get((k, l), F0) - col[k] * col[l] / d
                    if val == 0:
                        a.pop((k, l), None)
                    else:
                        a[(k, l)] = val
            continue
        pair = None
        for i in idx:
            for j in idx:
                if j > i and a.get((i, j), F0) != 0:
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            null += len(idx)
            break
        i, j = pair
        b = a[(i, j)]
        pos += 1
        neg += 1
        idx.remove(i)
        idx.remove(j)
        rowi = {k: a.get((i, k), F0) for k in idx}
        rowj = {k: a.get((j, k), F0) for k in idx}
        for k in idx:
            for l in idx:
                val = a.get((k, l), F0) - (rowi[k] * rowj[l] + rowj[k] * rowi[l]) / b
                if val == 0:
                    a.pop((k, l), None)
                else:
                    a[(k, l)] = val
    return (pos, null, neg)
