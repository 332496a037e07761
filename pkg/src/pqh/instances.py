"""Instance files and canonical serialization.

One schema: a JSON object with n, omega_E (2n x 2n entries), vectors
(rows of length 4n in the fixed coordinate order) and an optional
h_basis.  All entries are exact rationals written as "p" or "p/q" with
q > 0; decimal notation is rejected.  Emission is canonical (sorted
keys, lowest-terms strings), so identical data gives identical bytes.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .classify import ClassificationReport
from .linalg import Mat
from .model import HBasisChange, ModelSpace, StructureError
from .subspace import Subspace

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9][0-9]*)?$")


class InstanceError(ValueError):
    """Malformed instance data (CLI exit code 2)."""


def parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _RATIONAL_RE.match(s):
        raise InstanceError(f"not an exact rational: {s!r}")
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    return str(x)


def _parse_matrix(data, nrows, ncols, what) -> Mat:
    if not isinstance(data, list) or len(data) != nrows:
        raise InstanceError(f"{what} must have {nrows} rows")
    rows = []
    for r in data:
        if not isinstance(r, list) or len(r) != ncols:
            raise InstanceError(f"{what} rows must have {ncols} entries")
        rows.append(tuple(parse_rational(x) for x in r))
    return Mat(rows, ncols=ncols)


def format_matrix(m: Mat):
    return [[format_rational(x) for x in row] for row in m.rows]


def parse_instance(text: str):
    """Parse an instance file.

    Returns (model space, subspace, optional h basis, warnings); raises
    InstanceError for malformed input and StructureError when omega_E is
    not symplectic or h_basis is not unimodular.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    unknown = set(data) - {"n", "omega_E", "vectors", "h_basis"}
    if unknown:
        raise InstanceError(f"unknown fields: {sorted(unknown)}")
    n = data.get("n")
    if not isinstance(n, int) or n < 1:
        raise InstanceError("n must be a positive integer")
    omega = _parse_matrix(data.get("omega_E"), 2 * n, 2 * n, "omega_E")
    ms = ModelSpace(n, omega)  # StructureError if not symplectic
    vectors = data.get("vectors", [])
    if not isinstance(vectors, list):
        raise InstanceError("vectors must be a list of rows")
    rows = []
    for r in vectors:
        if not isinstance(r, list) or len(r) != 4 * n:
            raise InstanceError(f"vector rows must have {4 * n} entries")
        rows.append(tuple(parse_rational(x) for x in r))
    u = Subspace.span(rows, 4 * n)
    warnings = []
    if u.dim < len(rows):
        warnings.append(
            f"{len(rows) - u.dim} dependent row(s) removed by canonicalization"
        )
    h_basis = None
    if "h_basis" in data:
        h_basis = HBasisChange(_parse_matrix(data["h_basis"], 2, 2, "h_basis"))
    return ms, u, h_basis, warnings


def load_instance(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text)


def emit_instance(ms: ModelSpace, u: Subspace, h_basis=None) -> str:
    data = {
        "n": ms.n,
        "omega_E": format_matrix(ms.omega),
        "vectors": [[format_rational(x) for x in row] for row in u.mat.rows],
    }
    if h_basis is not None:
        data["h_basis"] = format_matrix(h_basis.mat)
    return canonical_json(data)


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=1) + "\n"


def parse_structure_file(text: str):
    """Parse a standardization input: three square matrices I, J, K."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or set(data) - {"I", "J", "K"}:
        raise InstanceError("structure file needs exactly the fields I, J, K")
    mats = []
    for key in ("I", "J", "K"):
        raw = data.get(key)
        if not isinstance(raw, list) or not raw:
            raise InstanceError(f"{key} must be a nonempty matrix")
        d = len(raw)
        mats.append(_parse_matrix(raw, d, d, key))
    if len({m.shape for m in mats}) != 1:
        raise InstanceError("I, J, K must have equal shapes")
    return tuple(mats)


# -- report serialization ------------------------------------------------------


def subspace_dict(u: Subspace):
    return {
        "ambient": u.ambient,
        "dim": u.dim,
        "basis": [[format_rational(x) for x in row] for row in u.mat.rows],
    }


def _operator_dict(op):
    return {
        "alpha": format_rational(op.alpha),
        "beta": format_rational(op.beta),
        "gamma": format_rational(op.gamma),
        "q": format_rational(op.q()),
    }


def report_to_dict(report: ClassificationReport):
    """Machine-readable form of a classification report."""
    out = {
        "n": report.n,
        "dim": report.dim,
        "signature": list(report.signature.as_tuple()),
        "flags": report.flags.as_dict(),
        "u0": subspace_dict(report.u0),
        "stabilizer": {
            "dim": report.stab.dim,
            "basis": [[format_rational(x) for x in row] for row in report.stab.basis.rows],
        },
        "witnesses": {
            kind: (_operator_dict(op) if op is not None else None)
            for kind, op in (
                ("complex", report.witnesses.complex),
                ("para_complex", report.witnesses.para_complex),
                ("nilpotent", report.witnesses.nilpotent),
            )
        },
    }
    if report.uft is not None:
        out["uft"] = {
            "h_basis": format_matrix(report.uft.h_basis.mat),
            "F": subspace_dict(report.uft.f_space),
            "T": format_matrix(report.uft.t_map),
        }
    else:
        out["uft"] = None
    if report.para_complex_report is not None:
        pc = report.para_complex_report
        out["para_complex_detail"] = {
            "d_plus": pc.d_plus,
            "d_minus": pc.d_minus,
            "m": pc.m_value,
        }
    if report.nilpotent_report is not None:
        nr = report.nilpotent_report
        out["nilpotent_detail"] = {
            "degree": nr.degree,
            "pq_dim": nr.pq_part.dim,
            "decomposable_dim": nr.decomposable_piece.e_space.dim,
            "real_dim": nr.real_part.dim,
            "p2_symplectic": nr.p2_symplectic,
            "nondegenerate_guaranteed": nr.nondegenerate_guaranteed,
        }
    return out


def parse_report(text: str):
    """Inverse of emitting report_to_dict through canonical_json."""
    return json.loads(text)
