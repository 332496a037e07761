"""Deterministic construction of subspace instances of every kind.

Kinds are built constructively from the structure theorems (e.g. a
complex instance is the graph of a conjugated block rotation, which
squares to -Id), then optionally twisted through a random unimodular
change of the H basis, which preserves every classification flag.
"""

from __future__ import annotations

from .linalg import F0, F1, Mat
from .model import HBasisChange, ModelSpace, standard_symplectic, tensor
from .rng import Rng
from .subspace import Subspace, decomposable_subspace, product_subspace

KINDS = (
    "generic",
    "para_quaternionic",
    "complex",
    "totally_complex",
    "para_complex",
    "weakly_para_complex",
    "totally_para_complex",
    "nilpotent",
    "real",
    "totally_real",
    "decomposable",
)


def random_invertible(rng: Rng, size: int) -> Mat:
    while True:
        m = Mat([rng.rationals(size) for _ in range(size)], ncols=size)
        if m.det() != 0:
            return m


def random_subspace(rng: Rng, ambient: int, dim: int) -> Subspace:
    if dim > ambient:
        raise ValueError("dimension exceeds ambient")
    while True:
        u = Subspace.span([rng.rationals(ambient) for _ in range(dim)], ambient)
        if u.dim == dim:
            return u


def random_sl2(rng: Rng) -> HBasisChange:
    while True:
        a, b, c = rng.rational(), rng.rational(), rng.rational()
        if a != 0:
            return HBasisChange(Mat(((a, b), (c, (1 + b * c) / a))))


def twist_h(u: Subspace, s: HBasisChange) -> Subspace:
    """Apply an SL(H) coordinate change to every vector (flag-preserving)."""
    dim_e = u.ambient // 2
    (p, q), (r, t) = s.mat.rows
    rows = []
    for row in u.mat.rows:
        e, ep = row[:dim_e], row[dim_e:]
        new_e = tuple(p * x + q * y for x, y in zip(e, ep))
        new_ep = tuple(r * x + t * y for x, y in zip(e, ep))
        rows.append(new_e + new_ep)
    return Subspace.span(rows, u.ambient)


def _graph(f_sub: Subspace, t_cols: Mat) -> Subspace:
    rows = []
    for j, f in enumerate(f_sub.mat.rows):
        rows.append((tensor((1, 0), f) + tensor((0, 1), t_cols.col(j))).coords)
    return Subspace.span(rows, 2 * f_sub.ambient)


def _lift_t(f_sub: Subspace, t_local: Mat) -> Mat:
    """Turn a matrix on the canonical basis of F into ambient image columns."""
    cols = []
    for j in range(f_sub.dim):
        img = [F0] * f_sub.ambient
        for i, c in enumerate(t_local.col(j)):
            if c != 0:
                for jj, val in enumerate(f_sub.mat.rows[i]):
                    img[jj] += c * val
        cols.append(tuple(img))
    return Mat.from_cols(cols, nrows=f_sub.ambient)


def _block_rotation(k: int) -> Mat:
    rows = [[F0] * k for _ in range(k)]
    for i in range(0, k, 2):
        rows[i][i + 1] = -F1
        rows[i + 1][i] = F1
    return Mat(rows)


def _reflection(k: int, plus: int) -> Mat:
    rows = [[F0] * k for _ in range(k)]
    for i in range(k):
        rows[i][i] = F1 if i < plus else -F1
    return Mat(rows)


def generate(rng: Rng, n: int, kind: str, dim: int | None = None) -> Subspace:
    """One instance of the requested kind in the standard model of size n."""
    dim_e = 2 * n
    dim_v = 4 * n
    if kind == "generic":
        d = dim if dim is not None else 1 + rng.below(dim_v)
        return random_subspace(rng, dim_v, d)
    if kind == "para_quaternionic":
        k = (dim // 2) if dim else 1 + rng.below(dim_e)
        return product_subspace(random_subspace(rng, dim_e, k))
    if kind == "decomposable":
        k = dim if dim is not None else 1 + rng.below(dim_e)
        h = (rng.rational(), rng.nonzero_rational())
        return decomposable_subspace(h, random_subspace(rng, dim_e, k))
    if kind in ("complex", "para_complex", "weakly_para_complex"):
        k = dim if dim is not None else 2 * (1 + rng.below(n))
        if kind == "complex" and k % 2:
            raise ValueError("complex instances need even dimension")
        f_sub = random_subspace(rng, dim_e, k)
        p = random_invertible(rng, k)
        if kind == "complex":
            base = _block_rotation(k)
        elif kind == "para_complex":
            base = _reflection(k, k // 2)
        else:
            plus = 1 + rng.below(k - 1) if k > 1 else 1
            if 2 * plus == k:
                plus = k  # force unequal eigenspace dimensions
            base = _reflection(k, min(plus, k))
        t_local = p @ base @ p.inverse()
        u = _graph(f_sub, _lift_t(f_sub, t_local))
        return twist_h(u, random_sl2(rng))
    if kind in ("totally_complex", "totally_para_complex"):
        m = (dim // 2) if dim else 1 + rng.below(n)
        pairs = sorted(rng_sample_pairs(rng, n, m))
        idx = []
        for p in pairs:
            idx.extend((2 * p, 2 * p + 1))
        rows = []
        for j in idx:
            e = [F0] * dim_e
            e[j] = F1
            rows.append(tuple(e))
        f_sub = Subspace.span(rows, dim_e)
        k = 2 * m
        base = _block_rotation(k) if kind == "totally_complex" else _tpc_blocks(k)
        u = _graph(f_sub, _lift_t(f_sub, base))
        return twist_h(u, random_sl2(rng))
    if kind == "nilpotent":
        k1 = dim if dim is not None else 1 + rng.below(n)
        k1 = min(k1, dim_e - 1)
        e1p = random_subspace(rng, dim_e, k1)
        k2 = rng.below(k1 + 1)
        rows = [tensor((1, 0), f).coords for f in e1p.mat.rows]
        comp = e1p.complement()
        for i in range(k2):
            e2 = e1p.mat.rows[i]
            img = comp.mat.rows[rng.below(comp.dim)] if comp.dim else None
            vec = tensor((0, 1), e2)
            if img is not None:
                vec = vec + tensor((1, 0), img)
            rows.append(vec.coords)
        return Subspace.span(rows, dim_v)
    if kind == "real":
        k = dim if dim is not None else 1 + rng.below(n)
        k = min(k, n)
        # F on the first k coordinates, TF inside a disjoint block
        f_rows = []
        for i in range(k):
            e = [F0] * dim_e
            e[i] = F1
            f_rows.append(tuple(e))
        f_sub = Subspace.span(f_rows, dim_e)
        t_cols = []
        b = random_invertible(rng, k)
        for j in range(k):
            img = [F0] * dim_e
            for i in range(k):
                img[k + i] = b.rows[i][j]
            t_cols.append(tuple(img))
        u = _graph(f_sub, Mat.from_cols(t_cols, nrows=dim_e))
        return twist_h(u, random_sl2(rng))
    if kind == "totally_real":
        k = dim if dim is not None else 1 + rng.below(n)
        k = min(k, n)
        # E1 on odd slots, E2 on even slots, symmetric invertible pairing
        while True:
            b = Mat(
                [
                    [rng.rational() for _ in range(k)]
                    for _ in range(k)
                ],
                ncols=k,
            )
            b = b + b.T
            if b.det() != 0:
                break
        f_rows = []
        for i in range(k):
            e = [F0] * dim_e
            e[2 * i] = F1
            f_rows.append(tuple(e))
        f_sub = Subspace.span(f_rows, dim_e)
        t_cols = []
        for j in range(k):
            img = [F0] * dim_e
            for i in range(k):
                img[2 * i + 1] = b.rows[i][j]
            t_cols.append(tuple(img))
        u = _graph(f_sub, Mat.from_cols(t_cols, nrows=dim_e))
        return twist_h(u, random_sl2(rng))
    raise ValueError(f"unknown kind {kind!r}")


def _tpc_blocks(k: int) -> Mat:
    """T with T^2 = Id, +1 eigenspace on odd slots, -1 on even slots."""
    rows = [[F0] * k for _ in range(k)]
    for i in range(0, k, 2):
        rows[i][i] = F1
        rows[i + 1][i + 1] = -F1
    return Mat(rows)


def rng_sample_pairs(rng: Rng, n: int, m: int):
    pool = list(range(n))
    picked = []
    for _ in range(m):
        picked.append(pool.pop(rng.below(len(pool))))
    return picked


def standard_model(n: int) -> ModelSpace:
    return ModelSpace(n, standard_symplectic(2 * n))
