import numpy as np
import pytest

from dilationlab import cstar
from dilationlab.correspondence import (
    Correspondence,
    algebra_correspondence,
    descend_map,
    interior_tensor,
    localize,
    passes,
    reduce_null,
    trivial_correspondence,
    validate_correspondence,
)
from dilationlab.errors import InvalidArgumentError, NotWellDefinedError


@pytest.fixture(scope="module")
def m2():
    return cstar.make_algebra([2])


@pytest.fixture(scope="module")
def scalars():
    return cstar.make_algebra([1])


def test_trivial_correspondence_validates(scalars):
    corr = trivial_correspondence(scalars, 3)
    assert corr.dim == 3
    report = validate_correspondence(corr)
    assert passes(report)


def test_trivial_correspondence_needs_scalars(m2):
    with pytest.raises(InvalidArgumentError):
        trivial_correspondence(m2, 2)


def test_algebra_correspondence_validates(m2):
    corr = algebra_correspondence(m2)
    assert corr.dim == 4
    assert passes(validate_correspondence(corr))
    # the embedded Gram [<e_i, e_j>] must be PSD
    vals = np.linalg.eigvalsh(corr.gram_embedded())
    assert vals.min() > -1e-12


def test_gram_of_matches_embedding(m2):
    corr = algebra_correspondence(m2)
    rng = np.random.default_rng(0)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    # <x, y> = x* y inside M_2
    xm = np.tensordot(x, m2.basis_mats, axes=(0, 0))
    ym = np.tensordot(y, m2.basis_mats, axes=(0, 0))
    got = np.tensordot(corr.gram_of(x, y), m2.basis_mats, axes=(0, 0))
    assert np.allclose(got, xm.conj().T @ ym, atol=1e-12)


def test_interior_tensor_m2_quotient(m2):
    corr = algebra_correspondence(m2)
    # M_2 (x)_{M_2} M_2 = M_2: raw dimension 16 collapses to 4
    tensor, surjection = interior_tensor(corr, corr)
    assert surjection.shape == (4, 16)
    assert tensor.dim == 4
    assert passes(validate_correspondence(tensor))


def test_reduce_null_keeps_nondegenerate(m2):
    corr = algebra_correspondence(m2)
    reduced, q = reduce_null(corr)
    assert reduced.dim == corr.dim
    assert q.shape == (4, 4)


def test_localize_trivial_over_scalars(scalars):
    corr = trivial_correspondence(scalars, 3)
    sigma = np.eye(2, dtype=complex)[None, :, :]
    loc = localize(corr, sigma)
    assert loc.rank == 6
    assert np.allclose(loc.factor.conj().T @ loc.factor, np.eye(6), atol=1e-12)
    assert np.allclose(loc.factor @ loc.lift, np.eye(6), atol=1e-12)


def test_localize_m2_over_identity_rep(m2):
    # M_2 (x)_{id} C^2 = C^2: rank 2 out of raw dimension 8
    corr = algebra_correspondence(m2)
    loc = localize(corr, m2.basis_mats)
    assert loc.source_dim == 8
    assert loc.rank == 2
    gram_loc = loc.factor.conj().T @ loc.factor
    assert np.allclose(
        gram_loc,
        np.einsum("ijp,pkl->ikjl", corr.gram, m2.basis_mats).reshape(8, 8),
        atol=1e-12,
    )


def test_localize_zero_gram(scalars):
    eye = np.eye(1, dtype=complex)[None, :, :]
    corr = Correspondence(scalars, np.zeros((1, 1, 1), dtype=complex), eye, eye)
    loc = localize(corr, np.eye(1, dtype=complex)[None, :, :])
    assert loc.rank == 0


def test_descend_map_rejects_bad_map(scalars):
    # Gram [[1, 1], [1, 1]] identifies e_1 with e_2; diag(1, 0) does not descend
    gram = np.ones((2, 2, 1), dtype=complex)
    eye = np.eye(2, dtype=complex)[None, :, :]
    corr = Correspondence(scalars, gram, eye, eye)
    loc = localize(corr, np.eye(1, dtype=complex)[None, :, :])
    assert loc.rank == 1
    with pytest.raises(NotWellDefinedError):
        descend_map(np.diag([1.0, 0.0]).astype(complex), loc, loc)
    # the identity always descends
    b = descend_map(np.eye(2, dtype=complex), loc, loc)
    assert np.allclose(b, np.eye(1), atol=1e-12)


def test_shape_validation(m2):
    eye4 = np.stack([np.eye(4, dtype=complex)] * m2.dim)
    with pytest.raises(InvalidArgumentError):
        Correspondence(m2, np.zeros((4, 4, 3)), eye4, eye4)
    with pytest.raises(InvalidArgumentError):
        Correspondence(m2, np.zeros((4, 4, 4)), np.zeros((2, 4, 4)), eye4)
