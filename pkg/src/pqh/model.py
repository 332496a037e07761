"""The standard model: V = H^2 (x) E^{2n} with structure sl(H) and metric
omega^H (x) omega^E.

Coordinates on V are fixed once and for all in the order
(h1(x)e1, ..., h1(x)e_{2n}, h2(x)e1, ..., h2(x)e_{2n}); a vector is the
pair of its two E-components.  Operators a*I + b*J + c*K are stored by
their coordinates relative to the standard admissible basis; basis
changes are explicit values, never hidden state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import MAT_I, MAT_J, MAT_K, ParaQuaternion, phi_from_mat2
from .linalg import F0, F1, Mat, vec_add, vec_is_zero, vec_scale, vec_sub


class StructureError(ValueError):
    """An input violates a structural invariant (relations, symplectic...)."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


def standard_symplectic(dim: int) -> Mat:
    """Block-diagonal symplectic form with omega(e_{2i+1}, e_{2i+2}) = 1."""
    if dim % 2:
        raise StructureError("symplectic form needs even dimension")
    rows = [[F0] * dim for _ in range(dim)]
    for i in range(0, dim, 2):
        rows[i][i + 1] = F1
        rows[i + 1][i] = -F1
    return Mat(rows)


@dataclass(frozen=True)
class Vector:
    """X = h1 (x) e + h2 (x) e' in the fixed coordinates."""

    e_part: tuple
    eprime_part: tuple

    def __post_init__(self):
        if len(self.e_part) != len(self.eprime_part):
            raise ValueError("component length mismatch")
        object.__setattr__(self, "e_part", tuple(map(_frac, self.e_part)))
        object.__setattr__(self, "eprime_part", tuple(map(_frac, self.eprime_part)))

    @classmethod
    def from_coords(cls, coords: Sequence) -> "Vector":
        coords = tuple(coords)
        if len(coords) % 2:
            raise ValueError("coordinate length must be even")
        half = len(coords) // 2
        return cls(coords[:half], coords[half:])

    @property
    def coords(self) -> tuple:
        return self.e_part + self.eprime_part

    @property
    def dim_e(self) -> int:
        return len(self.e_part)

    def __add__(self, other: "Vector") -> "Vector":
        return Vector(
            vec_add(self.e_part, other.e_part),
            vec_add(self.eprime_part, other.eprime_part),
        )

    def __sub__(self, other: "Vector") -> "Vector":
        return Vector(
            vec_sub(self.e_part, other.e_part),
            vec_sub(self.eprime_part, other.eprime_part),
        )

    def scale(self, c) -> "Vector":
        c = _frac(c)
        return Vector(vec_scale(c, self.e_part), vec_scale(c, self.eprime_part))

    def is_zero(self) -> bool:
        return vec_is_zero(self.e_part) and vec_is_zero(self.eprime_part)


def tensor(h: Sequence, e: Sequence) -> Vector:
    """Decomposable vector (h[0]*h1 + h[1]*h2) (x) e."""
    a, b = map(_frac, h)
    return Vector(vec_scale(a, tuple(map(_frac, e))), vec_scale(b, tuple(map(_frac, e))))


@dataclass(frozen=True)
class Operator:
    """A = alpha*I + beta*J + gamma*K in the standard admissible basis."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frac(self.alpha))
        object.__setattr__(self, "beta", _frac(self.beta))
        object.__setattr__(self, "gamma", _frac(self.gamma))

    def q(self) -> Fraction:
        """Conjugation-invariant form q(A) = alpha^2 - beta^2 - gamma^2.

        Positive means complex type, negative para-complex type, zero
        (with A nonzero) nilpotent; always A^2 = -q(A) Id.
        """
        return self.alpha**2 - self.beta**2 - self.gamma**2

    def mat2(self) -> Mat:
        """The 2x2 matrix acting on H-coordinates."""
        return (
            MAT_I.scale(self.alpha) + MAT_J.scale(self.beta) + MAT_K.scale(self.gamma)
        )

    def is_zero(self) -> bool:
        return self.alpha == 0 and self.beta == 0 and self.gamma == 0

    def apply(self, x: Vector) -> Vector:
        a, b, g = self.alpha, self.beta, self.gamma
        e, ep = x.e_part, x.eprime_part
        return Vector(
            vec_add(vec_scale(-g, e), vec_scale(b - a, ep)),
            vec_add(vec_scale(a + b, e), vec_scale(g, ep)),
        )

    def apply_coords(self, coords: tuple) -> tuple:
        return self.apply(Vector.from_coords(coords)).coords

    def as_matrix(self, dim_e: int) -> Mat:
        m = self.mat2()
        rows = []
        for bi in range(2):
            for r in range(dim_e):
                row = [F0] * (2 * dim_e)
                for bj in range(2):
                    row[bj * dim_e + r] = m.rows[bi][bj]
                rows.append(tuple(row))
        return Mat(rows)

    def scale(self, c) -> "Operator":
        c = _frac(c)
        return Operator(c * self.alpha, c * self.beta, c * self.gamma)

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(
            self.alpha + other.alpha, self.beta + other.beta, self.gamma + other.gamma
        )

    def __neg__(self) -> "Operator":
        return self.scale(-1)


OP_I = Operator(1, 0, 0)
OP_J = Operator(0, 1, 0)
OP_K = Operator(0, 0, 1)


def operator_from_mat2(m: Mat) -> Operator:
    """Inverse of :meth:`Operator.mat2`; m must be traceless."""
    if m.shape != (2, 2) or m.rows[0][0] + m.rows[1][1] != 0:
        raise ValueError("operator matrix must be traceless 2x2")
    q = phi_from_mat2(m)
    return Operator(q.q1, q.q2, q.q3)


def apply_operator(a: Operator, x: Vector) -> Vector:
    return a.apply(x)


@dataclass(frozen=True)
class HBasisChange:
    """A symplectic basis change of H; columns are the new basis vectors."""

    mat: Mat

    def __post_init__(self):
        if self.mat.shape != (2, 2):
            raise StructureError("H basis change must be 2x2")
        if self.mat.det() != 1:
            raise StructureError("H basis change must have determinant 1")

    @classmethod
    def identity(cls) -> "HBasisChange":
        return cls(Mat.identity(2))

    @classmethod
    def from_columns(cls, h1: Sequence, h2: Sequence) -> "HBasisChange":
        return cls(Mat.from_cols((tuple(map(_frac, h1)), tuple(map(_frac, h2)))))

    @property
    def h1(self) -> tuple:
        return self.mat.col(0)

    @property
    def h2(self) -> tuple:
        return self.mat.col(1)

    def inverse(self) -> "HBasisChange":
        return HBasisChange(self.mat.inverse())

    def compose(self, other: "HBasisChange") -> "HBasisChange":
        return HBasisChange(self.mat @ other.mat)

    def h_components(self, x: Vector) -> tuple:
        """The two E-components of x relative to this basis of H."""
        inv = self.mat.inverse()
        (p, q), (r, s) = inv.rows
        e, ep = x.e_part, x.eprime_part
        return (
            vec_add(vec_scale(p, e), vec_scale(q, ep)),
            vec_add(vec_scale(r, e), vec_scale(s, ep)),
        )

    def assemble(self, comp1: Sequence, comp2: Sequence) -> Vector:
        """The vector h1'(x)comp1 + h2'(x)comp2 in standard coordinates."""
        return tensor(self.h1, comp1) + tensor(self.h2, comp2)

    def triple(self) -> tuple:
        """The admissible basis (I', J', K') attached to this H-basis."""
        return _triple_of(self.mat)


from functools import lru_cache


@lru_cache(maxsize=1024)
def _triple_of(s: Mat) -> tuple:
    sinv = s.inverse()
    return tuple(operator_from_mat2(s @ m @ sinv) for m in (MAT_I, MAT_J, MAT_K))


def change_admissible_basis(s: HBasisChange, a: Operator) -> Operator:
    """Coordinates of the endomorphism a relative to the new basis."""
    return operator_from_mat2(s.mat.inverse() @ a.mat2() @ s.mat)


def is_admissible_triple(i: Operator, j: Operator, k: Operator) -> bool:
    mi, mj, mk = i.mat2(), j.mat2(), k.mat2()
    one = Mat.identity(2)
    return (
        mi @ mi == -one
        and mj @ mj == one
        and mk @ mk == one
        and mi @ mj == mk
        and mi @ mj == -(mj @ mi)
        and mj @ mk == -(mk @ mj)
        and mi @ mk == -(mk @ mi)
    )


@dataclass(frozen=True)
class ModelSpace:
    """Dimension parameter n and a symplectic form on E = Q^{2n}."""

    n: int
    omega: Mat

    def __post_init__(self):
        if self.n < 1:
            raise StructureError("n must be a positive integer")
        if self.omega.shape != (2 * self.n, 2 * self.n):
            raise StructureError("omega_E must be 2n x 2n")
        if not self.omega.is_skew():
            raise StructureError("omega_E must be skew-symmetric")
        if self.omega.det() == 0:
            raise StructureError("omega_E must be invertible")

    @classmethod
    def standard(cls, n: int) -> "ModelSpace":
        return cls(n, standard_symplectic(2 * n))

    @property
    def dim_e(self) -> int:
        return 2 * self.n

    @property
    def dim_v(self) -> int:
        return 4 * self.n

    def omega_eval(self, e: Sequence, ep: Sequence) -> Fraction:
        return vec_dot_omega(self.omega, e, ep)

    def metric(self, x: Vector, y: Vector) -> Fraction:
        """g = omega^H (x) omega^E; on decomposables
        g(h(x)e, h'(x)e') = omega^H(h,h') omega^E(e,e')."""
        if x.dim_e != self.dim_e or y.dim_e != self.dim_e:
            raise ValueError("vector does not live in this model space")
        return self.omega_eval(x.e_part, y.eprime_part) - self.omega_eval(
            x.eprime_part, y.e_part
        )

    def metric_matrix(self) -> Mat:
        z = Mat.zeros(self.dim_e, self.dim_e)
        top = z.hstack(self.omega)
        bottom = (-self.omega).hstack(z)
        return top.vstack(bottom)

    def hermitian_product(
        self, x: Vector, y: Vector, basis=None
    ) -> ParaQuaternion:
        """X.Y = g(X,Y) + i g(X,IY) - j g(X,JY) - k g(X,KY) for the given
        admissible basis (default: the standard one)."""
        if basis is None:
            i, j, k = OP_I, OP_J, OP_K
        elif isinstance(basis, HBasisChange):
            i, j, k = basis.triple()
        else:
            i, j, k = basis
            if not is_admissible_triple(i, j, k):
                raise StructureError("not an admissible basis triple")
        return ParaQuaternion(
            self.metric(x, y),
            self.metric(x, i.apply(y)),
            -self.metric(x, j.apply(y)),
            -self.metric(x, k.apply(y)),
        )


def vec_dot_omega(omega: Mat, e: Sequence, ep: Sequence) -> Fraction:
    acc = F0
    for i, a in enumerate(e):
        if a == 0:
            continue
        row = omega.rows[i]
        for j, b in enumerate(ep):
            if b != 0 and row[j] != 0:
                acc += a * row[j] * b
    return acc


# -- standardization of abstract para-hypercomplex structures -------------


@dataclass(frozen=True)
class Standardization:
    """Basis matrix P with P^-1 X P equal to the standard block structure."""

    basis: Mat
    pairs: int  # number of 2-dimensional irreducible summands


def _standard_blocks(pairs: int):
    def blockdiag(b: Mat) -> Mat:
        d = 2 * pairs
        rows = [[F0] * d for _ in range(d)]
        for p in range(pairs):
            for r in range(2):
                for c in range(2):
                    rows[2 * p + r][2 * p + c] = b.rows[r][c]
        return Mat(rows)

    return blockdiag(MAT_I), blockdiag(MAT_J), blockdiag(MAT_K)


def standardize(i_mat: Mat, j_mat: Mat, k_mat: Mat) -> Standardization:
    """Find a basis in which an abstract triple becomes the standard one.

    The triple must satisfy -I^2 = J^2 = K^2 = Id, IJ = K and pairwise
    anticommutation exactly.  The +1 eigenspace of J is paired with its
    K-image; tie-breaking uses the lexicographically smallest reduced
    echelon eigenbasis, so the output is deterministic.
    """
    d = i_mat.nrows
    if i_mat.shape != (d, d) or j_mat.shape != (d, d) or k_mat.shape != (d, d):
        raise StructureError("structure matrices must be square of equal size")
    one = Mat.identity(d)
    if (i_mat @ i_mat) != -one or (j_mat @ j_mat) != one or (k_mat @ k_mat) != one:
        raise StructureError("unit relations violated")
    if (i_mat @ j_mat) != k_mat:
        raise StructureError("product relation I J = K violated")
    if (
        i_mat @ j_mat != -(j_mat @ i_mat)
        or j_mat @ k_mat != -(k_mat @ j_mat)
        or i_mat @ k_mat != -(k_mat @ i_mat)
    ):
        raise StructureError("anticommutation relations violated")
    plus = (j_mat - one).kernel()
    minus = (j_mat + one).kernel()
    if plus.nrows != minus.nrows or plus.nrows + minus.nrows != d:
        raise StructureError("J eigenspaces do not split V in halves")
    cols = []
    for e_plus in plus.rows:
        ke = k_mat.mul_vec(e_plus)
        cols.append(vec_sub(e_plus, ke))
        cols.append(vec_add(e_plus, ke))
    basis = Mat.from_cols(cols)
    if basis.det() == 0:
        raise StructureError("eigenbasis pairing is degenerate")
    std_i, std_j, std_k = _standard_blocks(d // 2)
    binv = basis.inverse()
    if (
        binv @ i_mat @ basis != std_i
        or binv @ j_mat @ basis != std_j
        or binv @ k_mat @ basis != std_k
    ):
        raise StructureError("standardization failed to intertwine the triple")
    return Standardization(basis, d // 2)


def model_to_interleaved(n: int) -> Mat:
    """Permutation taking the tensor coordinate order of V to the
    2x2-block order used by the standard structure of Q^{4n}."""
    d = 4 * n
    rows = [[F0] * d for _ in range(d)]
    for r in range(2 * n):
        rows[2 * r][r] = F1  # h1 (x) e_r  ->  slot 2r
        rows[2 * r + 1][2 * n + r] = F1  # h2 (x) e_r  ->  slot 2r+1
    return Mat(rows)


def recover_omega_e(
    g: Callable[[Vector, Vector], Fraction],
    dim_e: int,
    basis: HBasisChange | None = None,
) -> Mat:
    """Reconstruct omega^E from a Hermitian metric given as an oracle.

    omega^E(e, e') = g(h (x) e, h' (x) e') / omega^H(h, h') must not
    depend on the pair (h, h'); the pairs (h1,h2), (h1+h2,h2) and
    (h1,h1+h2) are evaluated in that fixed order, and any disagreement
    (or a non-symplectic result) reports a non-Hermitian input.
    """
    if basis is None:
        basis = HBasisChange.identity()
    h1, h2 = basis.h1, basis.h2
    h12 = vec_add(h1, h2)
    pairs = [(h1, h2), (h12, h2), (h1, h12)]
    results = []
    unit = [F0] * dim_e
    for h, hp in pairs:
        den = h[0] * hp[1] - h[1] * hp[0]
        rows = []
        for r in range(dim_e):
            er = list(unit)
            er[r] = F1
            row = []
            for c in range(dim_e):
                ec = list(unit)
                ec[c] = F1
                row.append(g(tensor(h, er), tensor(hp, ec)) / den)
            rows.append(tuple(row))
        results.append(Mat(rows))
    if results[0] != results[1] or results[0] != results[2]:
        raise StructureError("metric is not Hermitian: pair-independence fails")
    omega = results[0]
    if not omega.is_skew() or omega.det() == 0:
        raise StructureError("recovered form is not symplectic")
    return omega
