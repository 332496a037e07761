"""Exact-arithmetic subspace classification in para-quaternionic
Hermitian vector spaces."""

from .algebra import (
    MAT_I,
    MAT_J,
    MAT_K,
    ParaQuaternion,
    phi_from_mat2,
    phi_to_mat2,
    pq_conj_norm,
    pq_mul,
)
from .classify import (
    ClassificationReport,
    Flags,
    GenericDecomposition,
    KindWitnesses,
    Stabilizer,
    check_complex,
    check_nilpotent,
    check_para_complex,
    check_totally_real,
    classify,
    generic_decompose,
    is_para_quaternionic,
    is_real,
    kind_witnesses,
    maximal_invariant_subspace,
    oracle_check,
    stabilizer,
)
from .linalg import Mat, symmetric_signature
from .model import (
    HBasisChange,
    ModelSpace,
    Operator,
    OP_I,
    OP_J,
    OP_K,
    StructureError,
    Vector,
    apply_operator,
    change_admissible_basis,
    recover_omega_e,
    standard_symplectic,
    standardize,
    tensor,
)
from .subspace import (
    SignatureTriple,
    Subspace,
    decomposable_subspace,
    gram,
    h_fiber,
    image,
    is_pure,
    maximal_pq,
    ortho_complement,
    p1p2,
    product_subspace,
    signature,
)
from .uft import (
    Form1,
    Form2,
    PencilSpectrum,
    UFTForm,
    decomposable_spectrum,
    decompose_form1,
    decompose_form2,
    find_transversal_direction,
    induced_g_f,
    injectivize,
    invariant_core,
    to_uft,
    transversal_basis,
    uft_change_basis,
)

__version__ = "0.1.0"
