"""Finite-dimensional Hilbert C*-correspondences and their quotients.

A correspondence over an algebra A is presented by an abstract basis
e_1..e_m, an A-valued Gram matrix, and right/left action matrices per
algebra basis element. Inner products are linear in the second variable.

Two kinds of quotient appear:

* module-level null quotients (``reduce_null``, ``interior_tensor``), taken
  against the trace of the embedded Gram, which vanishes exactly on null
  vectors of the A-valued semi-inner product;
* Hilbert-space localizations E (x)_sigma H (``localize``), whose quotient
  coordinates carry the standard inner product via a rank-revealing factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cstar
from .cstar import CStarAlgebra
from .errors import InvalidArgumentError
from .linalg import (
    DEFAULT_TOL,
    hermitize,
    null_split,
    opnorm,
    psd_factor,
    require_descent,
)


class Correspondence:
    def __init__(self, algebra: CStarAlgebra, gram, right_action, left_action):
        gram = np.asarray(gram, dtype=complex)
        right_action = np.asarray(right_action, dtype=complex)
        left_action = np.asarray(left_action, dtype=complex)
        if gram.ndim != 3 or gram.shape[0] != gram.shape[1] or gram.shape[2] != algebra.dim:
            raise InvalidArgumentError(f"gram shape {gram.shape} invalid")
        m = gram.shape[0]
        if right_action.shape != (algebra.dim, m, m):
            raise InvalidArgumentError(f"right_action shape {right_action.shape} invalid")
        if left_action.shape != (algebra.dim, m, m):
            raise InvalidArgumentError(f"left_action shape {left_action.shape} invalid")
        self.algebra = algebra
        self.dim = m
        self.gram = gram
        self.right_action = right_action
        self.left_action = left_action

    # -- derived matrices -------------------------------------------------

    def gram_embedded(self) -> np.ndarray:
        """(m n) x (m n) block matrix [embed(<e_i, e_j>)]."""
        n = self.algebra.rep_dim
        blocks = np.einsum("ijp,pkl->ikjl", self.gram, self.algebra.basis_mats)
        return blocks.reshape(self.dim * n, self.dim * n)

    def gram_trace(self) -> np.ndarray:
        """m x m PSD matrix tr(embed(<e_i, e_j>)); kernel = module null space."""
        return np.einsum("ijp,pkk->ij", self.gram, self.algebra.basis_mats)

    def act_left(self, a_coords: np.ndarray) -> np.ndarray:
        """Coordinate matrix of x -> a . x."""
        return np.tensordot(np.asarray(a_coords, dtype=complex), self.left_action, axes=(0, 0))

    def act_right(self, a_coords: np.ndarray) -> np.ndarray:
        """Coordinate matrix of x -> x . a."""
        return np.tensordot(np.asarray(a_coords, dtype=complex), self.right_action, axes=(0, 0))

    def gram_of(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Algebra coordinates of <x, y> for coordinate vectors x, y."""
        return np.einsum("i,j,ijp->p", np.conj(x), y, self.gram)

    def __repr__(self):
        return f"Correspondence(dim={self.dim}, algebra={self.algebra!r})"


@dataclass(frozen=True)
class LocalizedSpace:
    """Quotient of a semi-inner-product raw space onto standard C^rank."""

    source_dim: int
    rank: int
    factor: np.ndarray = field(compare=False)  # (rank, source_dim), F^H F = Gram
    lift: np.ndarray = field(compare=False)  # (source_dim, rank), F @ lift = I
    tol: float = DEFAULT_TOL


# -- constructors ----------------------------------------------------------


def trivial_correspondence(algebra: CStarAlgebra, m: int) -> Correspondence:
    """C^m with identity Gram over the scalars (requires algebra = C)."""
    if algebra.block_sizes != (1,):
        raise InvalidArgumentError("trivial correspondence needs the scalar algebra")
    eye = np.eye(m, dtype=complex)[None, :, :]
    gram = np.eye(m, dtype=complex)[:, :, None]
    return Correspondence(algebra, gram, eye, eye)


def algebra_correspondence(algebra: CStarAlgebra) -> Correspondence:
    """The algebra as a correspondence over itself: <a, b> = a* b."""
    dim = algebra.dim
    mul_table = cstar.multiplication_table(algebra)
    adj = cstar.adjoint_table(algebra)
    # <f_p, f_q> = f_p^* f_q
    gram = np.einsum("pr,rqs->pqs", adj, mul_table)
    # x . f_p : coords of f_q f_p in slot [r, q]
    right = np.transpose(mul_table, (1, 2, 0))  # right[p, r, q] = (f_q f_p)_r
    left = np.transpose(mul_table, (0, 2, 1))  # left[p, r, q] = (f_p f_q)_r
    return Correspondence(algebra, gram, right, left)


# -- validation ------------------------------------------------------------


def validate_correspondence(corr: Correspondence, tol: float = DEFAULT_TOL) -> dict[str, float]:
    """Named residuals for the correspondence axioms; passes iff all <= tol."""
    alg = corr.algebra
    m = corr.dim
    basis = alg.basis_mats
    gram_mats = np.einsum("ijp,pkl->ijkl", corr.gram, basis)  # embed(<e_i,e_j>)

    res: dict[str, float] = {}
    res["gram_hermitian"] = float(
        np.abs(np.conj(np.transpose(gram_mats, (0, 1, 3, 2))) - np.transpose(gram_mats, (1, 0, 2, 3))).max()
    )
    emb = corr.gram_embedded()
    res["gram_psd"] = max(0.0, -float(np.linalg.eigvalsh(hermitize(emb)).min()))

    unit_coords = cstar.unit(alg).coords
    res["right_unital"] = opnorm(corr.act_right(unit_coords) - np.eye(m))
    res["left_unital"] = opnorm(corr.act_left(unit_coords) - np.eye(m))

    mul_table = cstar.multiplication_table(alg)
    r_hom = 0.0
    l_hom = 0.0
    for p in range(alg.dim):
        for q in range(alg.dim):
            combo_r = np.tensordot(mul_table[p, q], corr.right_action, axes=(0, 0))
            r_hom = max(r_hom, opnorm(combo_r - corr.right_action[q] @ corr.right_action[p]))
            combo_l = np.tensordot(mul_table[p, q], corr.left_action, axes=(0, 0))
            l_hom = max(l_hom, opnorm(combo_l - corr.left_action[p] @ corr.left_action[q]))
    res["right_homomorphism"] = r_hom
    res["left_homomorphism"] = l_hom

    # <e_i, e_j . f_p> = <e_i, e_j> f_p
    compat = 0.0
    for p in range(alg.dim):
        lhs = np.einsum("lj,ilst->ijst", corr.right_action[p], gram_mats)
        rhs = np.einsum("ijsu,ut->ijst", gram_mats, basis[p])
        compat = max(compat, float(np.abs(lhs - rhs).max()))
    res["right_compatibility"] = compat

    # <f_p . e_i, e_j> = <e_i, f_p^* . e_j>
    adj = cstar.adjoint_table(alg)
    star = 0.0
    for p in range(alg.dim):
        lhs = np.einsum("li,ljst->ijst", np.conj(corr.left_action[p]), gram_mats)
        act_star = np.tensordot(adj[p], corr.left_action, axes=(0, 0))
        rhs = np.einsum("lj,ilst->ijst", act_star, gram_mats)
        star = max(star, float(np.abs(lhs - rhs).max()))
    res["left_adjointable"] = star

    return res


def passes(report: dict[str, float], tol: float = DEFAULT_TOL) -> bool:
    return all(v <= tol for v in report.values())


# -- quotients -------------------------------------------------------------


def reduce_null(corr: Correspondence, tol: float = DEFAULT_TOL):
    """Quotient by module null vectors. Returns (correspondence, surjection).

    The surjection maps old coordinates onto the quotient basis; the induced
    Gram and actions are computed on the kept eigenvectors of the trace Gram.
    """
    kept, _null = null_split(corr.gram_trace(), tol, "reduce_null")
    w = kept  # (m, p), orthonormal columns
    surjection = w.conj().T
    gram = np.einsum("ia,jb,ijp->abp", np.conj(w), w, corr.gram)
    right = np.einsum("ia,pij,jb->pab", np.conj(w), corr.right_action, w)
    left = np.einsum("ia,pij,jb->pab", np.conj(w), corr.left_action, w)
    reduced = Correspondence(corr.algebra, gram, right, left)
    return reduced, surjection


def _raw_tensor(e: Correspondence, f: Correspondence):
    """Gram/actions of the algebraic tensor E (x) F on raw coordinates."""
    if e.algebra != f.algebra:
        raise InvalidArgumentError("interior tensor requires a common algebra")
    me, mf = e.dim, f.dim
    adim = e.algebra.dim
    gram = np.zeros((me * mf, me * mf, adim), dtype=complex)
    for i in range(me):
        for k in range(me):
            act = f.act_left(e.gram[i, k])  # (mf, mf): coords of <e_i,e_k> . f_l
            # <e_i (x) f_j, e_k (x) f_l> = <f_j, <e_i,e_k> . f_l>
            block = np.einsum("ql,jqp->jlp", act, f.gram)
            gram[i * mf : (i + 1) * mf, k * mf : (k + 1) * mf, :] = block
    right = np.stack([np.kron(np.eye(me), f.right_action[p]) for p in range(adim)])
    left = np.stack([np.kron(e.left_action[p], np.eye(mf)) for p in range(adim)])
    return Correspondence(e.algebra, gram, right, left)


def interior_tensor(e: Correspondence, f: Correspondence, tol: float = DEFAULT_TOL):
    """Balanced tensor product E (x)_A F, quotiented by null vectors.

    Returns (correspondence, surjection from raw m_E * m_F coordinates).
    """
    return reduce_null(_raw_tensor(e, f), tol)


# -- localization ----------------------------------------------------------


def trivial_localized(dim: int, tol: float = DEFAULT_TOL) -> LocalizedSpace:
    eye = np.eye(dim, dtype=complex)
    return LocalizedSpace(dim, dim, eye, eye, tol)


def localize(corr: Correspondence, sigma_mats: np.ndarray, tol: float = DEFAULT_TOL) -> LocalizedSpace:
    """E (x)_sigma H for a *-representation given by matrices per basis element.

    Raw coordinates are (module index major) kron(x, h); the factor F maps
    them isometrically onto C^rank.
    """
    sigma_mats = np.asarray(sigma_mats, dtype=complex)
    d = sigma_mats.shape[1]
    gram_loc = np.einsum("ijp,pkl->ikjl", corr.gram, sigma_mats).reshape(
        corr.dim * d, corr.dim * d
    )
    factor, vals, vecs = psd_factor(gram_loc, tol, "localize")
    lift = vecs / np.sqrt(vals)[None, :] if vals.size else vecs
    return LocalizedSpace(corr.dim * d, factor.shape[0], factor, lift, tol)


def descend_map(
    m: np.ndarray,
    source: LocalizedSpace,
    target: LocalizedSpace,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Quotient-coordinate matrix B with B F_source = F_target M.

    Raises NotWellDefinedError when M does not respect the null spaces.
    """
    b = target.factor @ m @ source.lift
    residual = opnorm(b @ source.factor - target.factor @ m)
    require_descent(residual, tol, "descend_map")
    return b
