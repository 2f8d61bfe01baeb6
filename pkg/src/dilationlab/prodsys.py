"""Product systems over N^k presented by generator correspondences and flips.

Fibers X(s) are realized canonically as the reduced normal-ordered tensor
E_1^{(x) s_1} (x) ... (x) E_k^{(x) s_k}; multiplication isomorphisms are
assembled by bubble-sorting adjacent transpositions through the flips.
Fibers and isomorphisms are memoized per lattice point / pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lattice
from .correspondence import (
    Correspondence,
    algebra_correspondence,
    interior_tensor,
    passes,
    reduce_null,
    validate_correspondence,
    _raw_tensor,
)
from .cstar import CStarAlgebra
from .errors import IncoherentFlipsError, InvalidArgumentError, InvalidFlipError
from .linalg import DEFAULT_TOL, opnorm


@dataclass(frozen=True)
class Fiber:
    point: lattice.Point
    correspondence: Correspondence = field(compare=False)
    surjection: np.ndarray = field(compare=False)  # raw word coords -> quotient


@dataclass(frozen=True)
class MultIso:
    """U_{s,t}: reduced fiber(s) (x) fiber(t) -> fiber(s+t), in coordinates.

    ``tensor_surjection`` maps the p_s * p_t tensor coordinates onto the
    reduced interior tensor; ``matrix`` is the unitary U on the quotient;
    ``mu`` = matrix @ tensor_surjection is the combined multiplication map.
    """

    s: lattice.Point
    t: lattice.Point
    tensor_surjection: np.ndarray = field(compare=False)
    matrix: np.ndarray = field(compare=False)

    @property
    def mu(self) -> np.ndarray:
        return self.matrix @ self.tensor_surjection

    @property
    def matrix_inv(self) -> np.ndarray:
        return np.linalg.pinv(self.matrix)


@dataclass
class _WordData:
    corr: Correspondence
    surj: np.ndarray  # full raw word coords -> quotient coords
    lift: np.ndarray  # quotient coords -> full raw word coords
    last_q: np.ndarray | None  # p_prefix * m_last -> quotient, for len >= 2


class ProductSystem:
    def __init__(self, algebra: CStarAlgebra, generators, flips=None, tol: float = DEFAULT_TOL):
        self.algebra = algebra
        self.generators: tuple[Correspondence, ...] = tuple(generators)
        self.k = len(self.generators)
        if self.k == 0:
            raise InvalidArgumentError("a product system needs at least one generator")
        for idx, gen in enumerate(self.generators, start=1):
            if gen.algebra != algebra:
                raise InvalidArgumentError(f"generator {idx} lives over a different algebra")
        self.tol = tol
        self.flips: dict[tuple[int, int], np.ndarray] = {}
        flips = flips or {}
        for (i, j), mat in flips.items():
            if not (1 <= i < j <= self.k):
                raise InvalidArgumentError(f"flip key {(i, j)} must satisfy 1 <= i < j <= k")
            mi = self.generators[i - 1].dim
            mj = self.generators[j - 1].dim
            mat = np.asarray(mat, dtype=complex)
            if mat.shape != (mj * mi, mi * mj):
                raise InvalidArgumentError(
                    f"flip {(i, j)} has shape {mat.shape}, expected {(mj * mi, mi * mj)}"
                )
            self.flips[(i, j)] = mat
        for i in range(1, self.k + 1):
            for j in range(i + 1, self.k + 1):
                if (i, j) not in self.flips:
                    raise InvalidArgumentError(f"missing flip for generator pair {(i, j)}")

        self._words: dict[tuple[int, ...], _WordData] = {}
        self._appends: dict[tuple[tuple[int, ...], int], np.ndarray] = {}
        self._isos: dict[tuple[lattice.Point, lattice.Point], MultIso] = {}
        self.validation = self._validate()

    # -- construction-time validation --------------------------------------

    def _validate(self) -> dict[str, float]:
        report: dict[str, float] = {}
        for idx, gen in enumerate(self.generators, start=1):
            gen_report = validate_correspondence(gen, self.tol)
            report.update({f"generator_{idx}.{k}": v for k, v in gen_report.items()})
            if not passes(gen_report, self.tol):
                bad = {k: v for k, v in gen_report.items() if v > self.tol}
                raise InvalidArgumentError(f"generator {idx} fails validation: {bad}")
        for (i, j), phi in self.flips.items():
            res = self._flip_residual(i, j, phi)
            report[f"flip_{i}_{j}"] = res
            if res > self.tol:
                raise InvalidFlipError(
                    f"flip {(i, j)} is not a correspondence isomorphism (residual {res:.3e})"
                )
        for i in range(1, self.k + 1):
            for j in range(i + 1, self.k + 1):
                for l in range(j + 1, self.k + 1):
                    res = self._braid_residual(i, j, l)
                    report[f"braid_{i}_{j}_{l}"] = res
                    if res > self.tol:
                        raise IncoherentFlipsError(
                            f"braid check failed for triple {(i, j, l)} (residual {res:.3e})"
                        )
        return report

    def _flip_residual(self, i: int, j: int, phi: np.ndarray) -> float:
        ei = self.generators[i - 1]
        ej = self.generators[j - 1]
        raw_ij = _raw_tensor(ei, ej)
        raw_ji = _raw_tensor(ej, ei)
        lhs = np.einsum("Aa,Bb,ABp->abp", np.conj(phi), phi, raw_ji.gram)
        res = float(np.abs(lhs - raw_ij.gram).max())
        for p in range(self.algebra.dim):
            res = max(res, opnorm(phi @ raw_ij.left_action[p] - raw_ji.left_action[p] @ phi))
            res = max(res, opnorm(phi @ raw_ij.right_action[p] - raw_ji.right_action[p] @ phi))
        return res

    def _braid_residual(self, i: int, j: int, l: int) -> float:
        mi = self.generators[i - 1].dim
        mj = self.generators[j - 1].dim
        ml = self.generators[l - 1].dim
        f_ij = self.flips[(i, j)]
        f_il = self.flips[(i, l)]
        f_jl = self.flips[(j, l)]
        route_a = (
            np.kron(f_jl, np.eye(mi))
            @ np.kron(np.eye(mj), f_il)
            @ np.kron(f_ij, np.eye(ml))
        )
        route_b = (
            np.kron(np.eye(ml), f_ij)
            @ np.kron(f_il, np.eye(mj))
            @ np.kron(np.eye(mi), f_jl)
        )
        src = self._word((i, j, l))
        tgt = self._word((l, j, i))
        return opnorm(tgt.surj @ (route_a - route_b) @ src.lift)

    # -- word machinery -----------------------------------------------------

    def flip_for(self, a: int, b: int) -> np.ndarray:
        """Isomorphism E_a (x) E_b -> E_b (x) E_a in raw coordinates."""
        if a < b:
            return self.flips[(a, b)]
        if a > b:
            return np.linalg.pinv(self.flips[(b, a)])
        ma = self.generators[a - 1].dim
        return np.eye(ma * ma, dtype=complex)

    def _word(self, word: tuple[int, ...]) -> _WordData:
        cached = self._words.get(word)
        if cached is not None:
            return cached
        if len(word) == 0:
            corr = algebra_correspondence(self.algebra)
            eye = np.eye(corr.dim, dtype=complex)
            data = _WordData(corr, eye, eye, None)
        elif len(word) == 1:
            gen = self.generators[word[0] - 1]
            corr, surj = reduce_null(gen, self.tol)
            data = _WordData(corr, surj, surj.conj().T, None)
        else:
            prev = self._word(word[:-1])
            gen = self.generators[word[-1] - 1]
            corr, q = interior_tensor(prev.corr, gen, self.tol)
            surj = q @ np.kron(prev.surj, np.eye(gen.dim))
            lift = np.kron(prev.lift, np.eye(gen.dim)) @ q.conj().T
            data = _WordData(corr, surj, lift, q)
        self._words[word] = data
        return data

    @staticmethod
    def normal_word(s: lattice.Point) -> tuple[int, ...]:
        word: list[int] = []
        for idx, count in enumerate(s, start=1):
            word.extend([idx] * count)
        return tuple(word)

    def fiber(self, s: lattice.Point) -> Fiber:
        data = self._word(self.normal_word(s))
        return Fiber(tuple(s), data.corr, data.surj)

    def fiber_dim(self, s: lattice.Point) -> int:
        return self._word(self.normal_word(s)).corr.dim

    def word_data(self, word: tuple[int, ...]) -> _WordData:
        return self._word(word)

    def _last_q(self, word: tuple[int, ...]) -> np.ndarray:
        """Surjection (reduced prefix) (x) (raw last generator) -> reduced word.

        For a length-1 word the prefix is scalar, so this is the generator's
        null-quotient surjection itself.
        """
        data = self._word(word)
        return data.surj if len(word) == 1 else data.last_q

    def _append_map(self, word: tuple[int, ...], i: int) -> np.ndarray:
        """Reduced map X(word) (x) E_i -> X(sorted(word + (i,))).

        Stays entirely in reduced coordinates: when the letter i has to move
        left past a larger letter j, the last tensor slot is peeled off with
        the word's quotient surjection, flipped, and the recursion continues
        on the shorter prefix.
        """
        word = tuple(word)
        key = (word, i)
        cached = self._appends.get(key)
        if cached is not None:
            return cached
        m_i = self.generators[i - 1].dim
        if not word or word[-1] <= i:
            out = self._last_q(word + (i,))
        else:
            prefix, j = word[:-1], word[-1]
            m_j = self.generators[j - 1].dim
            p_prefix = self._word(prefix).corr.dim if prefix else 1
            peel = np.kron(self._last_q(word).conj().T, np.eye(m_i))
            flip = np.kron(np.eye(p_prefix), self.flip_for(j, i))
            inner = np.kron(self._append_map(prefix, i), np.eye(m_j))
            rejoin = self._append_map(tuple(sorted(prefix + (i,))), j)
            out = rejoin @ inner @ flip @ peel
        self._appends[key] = out
        return out

    # -- multiplication isomorphisms ----------------------------------------

    def mult_iso(self, s: lattice.Point, t: lattice.Point) -> MultIso:
        s = tuple(s)
        t = tuple(t)
        cached = self._isos.get((s, t))
        if cached is not None:
            return cached
        cs = self._word(self.normal_word(s)).corr
        ct = self._word(self.normal_word(t)).corr
        tensor, q = interior_tensor(cs, ct, self.tol)
        if lattice.is_zero(s):
            # left action of A = X(0) on the fiber
            raw = np.transpose(ct.left_action, (1, 0, 2)).reshape(
                ct.dim, self.algebra.dim * ct.dim
            )
            u = raw @ q.conj().T
        elif lattice.is_zero(t):
            # right action of A = X(0) on the fiber
            raw = np.transpose(cs.right_action, (1, 2, 0)).reshape(
                cs.dim, cs.dim * self.algebra.dim
            )
            u = raw @ q.conj().T
        else:
            i = max(lattice.support(t))
            t_prev = lattice.sub(t, lattice.unit(len(t), i))
            p_s = cs.dim
            split = np.kron(np.eye(p_s), self._last_q(self.normal_word(t)).conj().T)
            if lattice.is_zero(t_prev):
                mu = self._append_map(self.normal_word(s), i) @ split
            else:
                m_i = self.generators[i - 1].dim
                mu_prev = self.mult_iso(s, t_prev).mu
                mu = (
                    self._append_map(self.normal_word(lattice.add(s, t_prev)), i)
                    @ np.kron(mu_prev, np.eye(m_i))
                    @ split
                )
            u = mu @ q.conj().T
        iso = MultIso(s, t, q, u)
        self._isos[(s, t)] = iso
        return iso

    def mult_iso_unitarity(self, s: lattice.Point, t: lattice.Point) -> float:
        """Residual of U preserving the embedded interior-tensor inner product."""
        iso = self.mult_iso(s, t)
        n = self.algebra.rep_dim
        cs = self._word(self.normal_word(s)).corr
        ct = self._word(self.normal_word(t)).corr
        tensor_red, _q = interior_tensor(cs, ct, self.tol)
        src = tensor_red.gram_embedded()
        tgt = self._word(self.normal_word(lattice.add(s, t))).corr.gram_embedded()
        u_big = np.kron(iso.matrix, np.eye(n))
        fwd = opnorm(u_big.conj().T @ tgt @ u_big - src)
        # invertibility both ways: U^{-1} must also preserve inner products
        inv_big = np.kron(iso.matrix_inv, np.eye(n))
        bwd = opnorm(inv_big.conj().T @ src @ inv_big - tgt)
        return max(fwd, bwd)

    def check_associativity(
        self, s: lattice.Point, t: lattice.Point, r: lattice.Point
    ) -> float:
        """|| U_{s+t,r}(U_{s,t} (x) I) - U_{s,t+r}(I (x) U_{t,r}) || on quotients."""
        ps = self.fiber_dim(s)
        pr = self.fiber_dim(r)
        mu_st = self.mult_iso(s, t).mu
        mu_tr = self.mult_iso(t, r).mu
        lhs = self.mult_iso(lattice.add(s, t), r).mu @ np.kron(mu_st, np.eye(pr))
        rhs = self.mult_iso(s, lattice.add(t, r)).mu @ np.kron(np.eye(ps), mu_tr)
        # weight by the lift of the reduced triple tensor so null directions
        # of the semi-inner product do not contribute
        cs = self._word(self.normal_word(s)).corr
        ct = self._word(self.normal_word(t)).corr
        cr = self._word(self.normal_word(r)).corr
        c_st, q1 = interior_tensor(cs, ct, self.tol)
        _c_str, q2 = interior_tensor(c_st, cr, self.tol)
        lift3 = np.kron(q1.conj().T, np.eye(cr.dim)) @ q2.conj().T
        return opnorm((lhs - rhs) @ lift3)


def make_product_system(algebra, generators, flips=None, tol: float = DEFAULT_TOL) -> ProductSystem:
    return ProductSystem(algebra, generators, flips, tol)
