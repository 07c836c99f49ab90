import math

import pytest

fb = pytest.importorskip("flatbundle")
np = pytest.importorskip("numpy")


def test_complex_construction():
    tri = fb.build_complex([0, 1, 2], [[0, 1, 2]])
    assert len(tri.simplices) == 7
    assert tri.euler_characteristic() == 1
    assert tri.contains([0, 2])
    torus = fb.torus_complex()
    assert torus.euler_characteristic() == 0
    assert fb.is_closed_oriented_surface(torus)


def test_input_errors_are_value_errors():
    with pytest.raises(ValueError):
        fb.build_complex([0], [[0, 0]])
    with pytest.raises(fb.InputError):
        fb.hc_constants(0)


def test_monopole_chern_number():
    s = fb.sphere_complex(0)
    for q in (-1, 2):
        e = fb.monopole_bundle(s, q)
        r = fb.chern_number(e)
        assert r.chern == q
        assert r.residue < 1e-9
        assert abs(r.total_flux - 2 * math.pi * q) < 1e-9
        assert fb.cocycle_check(e).pass_


def test_chern_needs_a_surface():
    tri = fb.build_complex([0, 1, 2], [[0, 1, 2]])
    with pytest.raises(fb.PreconditionError):
        fb.chern_number(fb.identity_bundle(tri, 1, 4))


def test_transport_and_defect_bound():
    s = fb.sphere_complex(0)
    e = fb.monopole_bundle(s, 1)
    face = s.complex.simplices_of_dim(2)[0]
    loop = [face[0], face[1], face[2], face[0]]
    t = fb.path_transport(e, loop)
    assert t.matrix.shape == (1, 1)
    defect = fb.loop_defect(e, loop)
    # the one-triangle loop defect respects c(1) times the flatness audit
    audit = fb.flatness_audit(e).audit
    assert defect <= fb.hc_constants(1).c * audit + 1e-9


def test_trivialize_contractible_base():
    tet = fb.build_complex([0, 1, 2, 3], [[0, 1, 2, 3]])
    e = fb.random_flat_bundle(tet, 2, 4, 0.005, 7)
    res = fb.trivialize_contractible(e)
    assert res.residual < 1e-10
    assert len(res.certificates) == 3
    assert fb.trivialization_residual(e, res.triv) == res.residual


def test_trivialize_refuses_the_torus():
    e = fb.random_flat_bundle(fb.torus_complex(), 1, 4, 0.01, 3)
    with pytest.raises(fb.PreconditionError):
        fb.trivialize_contractible(e)


def test_skeleton_extension():
    tet = fb.build_complex([0, 1, 2, 3], [[0, 1, 2, 3]])
    e = fb.random_flat_bundle(tet, 2, 4, 0.005, 11)
    e1 = fb.bundle_restrict(e, fb.skeleton(tet, 1))
    e2 = fb.extend_skeleton(e1, fb.skeleton(tet, 2))
    assert e2.base.dim() == 2
    assert fb.cocycle_check(e2).pass_


def test_clock_shift_rep_round_trip():
    uv = fb.clock_shift(6)
    assert abs(fb.defect(uv) - 2 * math.sin(math.pi / 6)) < 1e-12
    setup = fb.torus_setup()
    rep = fb.substitute(uv, setup.pres, setup.substitution)
    e = fb.rep_to_bundle(rep, setup.complex, setup.tree, 4)
    back = fb.bundle_to_rep(e, setup.pres)
    assert fb.closeness(rep, back) < 1e-12
    assert fb.chern_number(e).chern == 1


def test_probe_verdict_requires_a_sequence():
    entries = [fb.ProbeEntry("k=6", 0.3, 1), fb.ProbeEntry("k=12", 0.15, 1)]
    v = fb.probe_verdict(entries)
    assert v.witness and v.chern == 1 and v.depth == 2
    assert not fb.probe_verdict(entries[:1]).witness
    entries[1].chern = 2
    assert not fb.probe_verdict(entries).witness


def test_json_round_trip():
    s = fb.sphere_complex(0)
    e = fb.monopole_bundle(s, 1)
    e2 = fb.bundle_from_json(fb.bundle_to_json(e))
    assert e2.rank == e.rank and e2.depth == e.depth
    assert len(e2.pairs()) == len(e.pairs())
    rho, sigma = e.pairs()[0]
    assert np.array_equal(e2.psi_at(rho, sigma, e.psi(rho, sigma).points()[0]),
                          e.psi_at(rho, sigma, e.psi(rho, sigma).points()[0]))
    with pytest.raises(fb.InputError):
        fb.bundle_from_json("not json")


def test_numpy_interop():
    u = fb.polar_project(np.eye(2) + 0.05j * np.array([[1.0, 0.4], [0.4, -1.0]]))
    assert u.dtype == np.complex128
    assert fb.unitarity_defect(u) < 1e-12
    log = fb.unitary_log(u)
    assert np.allclose(fb.skew_exp(log), u)
    m = fb.constant_map(1, 4, u)
    assert fb.sampled_diameter(m) == 0.0
    assert np.array_equal(m.eval([0.3, 0.7]), u)
