import numpy as np
import pytest

from fibtrace import certify

MU = (1 + np.sqrt(5)) / 2


def test_singular_eigenvalues_exact():
    e = certify.singular_eigen()
    expected = np.array([(3 + np.sqrt(5)) / 2, -1.0, (3 - np.sqrt(5)) / 2])
    assert np.allclose(e.eigenvalues, expected, atol=1e-10)
    assert abs(e.eigenvalues[0] - MU**2) < 1e-10
    # eigenvectors actually diagonalize the matrix
    for val, vec in zip(e.eigenvalues, e.eigenvectors.T):
        assert np.allclose(e.matrix @ vec, val * vec, atol=1e-12)


def test_cone_membership():
    assert certify.cone_member_3d([0.0, 0.0, 1.0], 0.5, 1.0)
    assert not certify.cone_member_3d([1.0, 0.0, 0.1], 0.5, 1.0)
    # boundary is inside
    z_p = 0.25
    assert certify.cone_member_3d([1.0, 0.0, np.sqrt(z_p)], z_p, 1.0)
    with pytest.raises(ValueError):
        certify.cone_member_3d(np.zeros(3), 0.5, 1.0)
    with pytest.raises(ValueError):
        certify.cone_member_3d([0, 0, 1], 0.5, 0.0)


def test_model_map_audit_and_plane_invariance():
    m = certify.make_model_map(delta=1e-3, seed=0)
    rep = m.audit(samples=2000, rng=1)
    assert rep["df_ok"] and rep["plane_invariant"]
    p = np.array([0.3, -0.7, 0.0])
    assert m(p)[2] == 0.0


def test_model_map_rejects_bad_params():
    with pytest.raises(ValueError):
        certify.make_model_map(lam=0.9)
    with pytest.raises(ValueError):
        certify.make_model_map(delta=-1e-3)


def test_linear_map_certificate_exact():
    m = certify.ModelMap(lam=certify.LAMBDA_BIG, delta=0.0, c1=1.0)
    z0 = certify.LAMBDA_BIG ** (-30)
    p = np.array([0.1, 0.2, z0])
    v = np.array([1.0, 0.0, np.sqrt(z0)]) / np.sqrt(1 + z0)
    rep = certify.expansion_certificate(m, p, v)
    assert rep.status == "ok"
    assert rep.all_ok
    # z grows by exactly lambda per step; the exit lands on step 30 or
    # 31 depending on which side of 1.0 the rounded lambda^0 falls
    assert rep.exit_time in (30, 31)
    assert rep.expansion_at_exit_ok and rep.thin_cone_ok


def test_perturbed_certificates_pass():
    rng = np.random.default_rng(12)
    m = certify.make_model_map(delta=1e-3, seed=2)
    n0 = 200
    for _ in range(25):
        zp = certify.LAMBDA_BIG ** (-rng.uniform(n0 + 1, n0 + 40))
        p = np.array([rng.uniform(-1, 1), rng.uniform(-1, 1), zp])
        v = certify.sample_cone_vector_3d(zp, 1.0, rng)
        rep = certify.expansion_certificate(m, p, v)
        assert rep.status == "ok"
        assert rep.all_ok


def test_certificate_input_validation():
    m = certify.make_model_map(delta=0.0, seed=3)
    with pytest.raises(ValueError):
        certify.expansion_certificate(m, [0, 0, 2.0], [0, 0, 1])
    with pytest.raises(ValueError):
        # vector far outside the cone at a large z
        certify.expansion_certificate(m, [0, 0, 0.9], [1, 0, 1e-6])


def test_sampled_cone_vectors_are_members():
    rng = np.random.default_rng(13)
    for _ in range(100):
        zp = 10.0 ** rng.uniform(-40, -1)
        v = certify.sample_cone_vector_3d(zp, 1.0, rng)
        assert certify.cone_member_3d(v, zp, 1.0)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12
