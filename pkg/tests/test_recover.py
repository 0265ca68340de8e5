import numpy as np
import pytest

from speclat.directsum import BlockProfile, DirectSumElement, embed_block
from speclat.errors import DecompositionError
from speclat.isos import (
    DirectSumIso,
    FactorCanonicalIso,
    JordanIso,
    OrderIsoOracle,
    ProjectionIsomorphism,
)
from speclat.monotone import MonotoneBijection
from speclat.order import pos_neg_parts
from speclat.recover import (
    DirectSumIsoDecomposer,
    FactorCanonicalRecovery,
    decompose_effect_iso,
    decompose_sa_iso,
    is_orthoiso,
    recover_factor_canonical,
)
from speclat.sampling import (
    random_direct_sum_iso,
    random_ds_element,
    random_effect,
    random_monotone_bijection,
    random_unitary,
    rng_from,
)
from speclat.validation import max_abs


def single_factor_oracle(block_iso: FactorCanonicalIso) -> OrderIsoOracle:
    profile = BlockProfile((block_iso.n,))
    iso = DirectSumIso(profile, profile, (0,), (block_iso,), block_iso.cone)
    return OrderIsoOracle.from_iso(iso)


def test_recover_identity_oracle():
    oracle = single_factor_oracle(FactorCanonicalIso.identity(3, "eff"))
    rec = FactorCanonicalRecovery(random_state=0).fit(oracle)
    grid = np.linspace(0.0, 1.0, 9)
    np.testing.assert_allclose(rec.scale_function_(grid), grid, atol=1e-9)
    p = np.diag([1.0, 0.0, 0.0]).astype(complex)
    np.testing.assert_allclose(rec.projection_map_.apply(p), p, atol=1e-8)
    assert rec.max_residual_ <= 1e-9


def test_recover_unitary_canonical(rng):
    n = 3
    f = random_monotone_bijection(rng, "eff", grid=128)
    tau = ProjectionIsomorphism(random_unitary(rng, n))
    oracle = single_factor_oracle(FactorCanonicalIso(f, tau, "eff"))
    rec = FactorCanonicalRecovery(random_state=1).fit(oracle)
    # tau is only determined projectively; compare actions on samples
    for _ in range(20):
        x = random_effect(rng, n)
        expected = oracle.forward(embed_block(oracle.domain_profile, 0, x)).blocks[0]
        assert max_abs(rec.canonical_.apply(x) - expected) <= 1e-8
    grid = np.linspace(0.0, 1.0, 129)
    np.testing.assert_allclose(rec.scale_function_(grid), f(grid), atol=1e-9)


def test_recover_shear_canonical(rng):
    from speclat.sampling import random_shear

    f = random_monotone_bijection(rng, "eff", grid=128)
    tau = ProjectionIsomorphism(random_shear(rng, 3))
    oracle = single_factor_oracle(FactorCanonicalIso(f, tau, "eff"))
    rec = FactorCanonicalRecovery(random_state=2).fit(oracle)
    assert rec.max_residual_ <= 1e-8


def test_recover_antilinear_canonical(rng):
    psi = JordanIso(random_unitary(rng, 3), transpose=True)
    f = random_monotone_bijection(rng, "eff", grid=128)
    oracle = single_factor_oracle(FactorCanonicalIso.from_jordan(psi, f, "eff"))
    rec = FactorCanonicalRecovery(random_state=3).fit(oracle)
    assert rec.projection_map_.antilinear
    assert rec.max_residual_ <= 1e-8


def test_recover_square_map_on_grid_with_loose_verification(rng):
    """t^2 is a bijection of [0, 1] outside the piecewise-linear class: the
    grid values are still recovered exactly, and default verification
    rejects the PL interpolant."""
    f = MonotoneBijection.power(2.0)
    tau = ProjectionIsomorphism(random_unitary(rng, 2))
    oracle = single_factor_oracle(FactorCanonicalIso(f, tau, "eff"))
    rec = FactorCanonicalRecovery(verify_tol=1e-3, random_state=4).fit(oracle)
    grid = np.linspace(0.0, 1.0, 129)
    np.testing.assert_allclose(rec.scale_function_(grid), grid**2, atol=1e-6)
    with pytest.raises(DecompositionError):
        FactorCanonicalRecovery(random_state=4).fit(oracle)


def test_recover_rejects_non_isomorphism():
    """A map tearing the central line off the scalars is rejected."""
    profile = BlockProfile((2,))

    def fwd(x):
        return DirectSumElement(profile, [x.blocks[0] @ np.diag([1.0, 0.5])])

    oracle = OrderIsoOracle(profile, profile, "eff", fwd, lambda y: y)
    with pytest.raises(DecompositionError):
        FactorCanonicalRecovery(random_state=0).fit(oracle)


def test_recover_functional_wrapper(rng):
    f = random_monotone_bijection(rng, "eff", grid=128)
    tau = ProjectionIsomorphism(random_unitary(rng, 2))
    oracle = single_factor_oracle(FactorCanonicalIso(f, tau, "eff"))
    canonical = recover_factor_canonical(oracle, random_state=5)
    x = random_effect(rng, 2)
    expected = oracle.forward(embed_block(oracle.domain_profile, 0, x)).blocks[0]
    assert max_abs(canonical.apply(x) - expected) <= 1e-8


def test_get_set_params():
    rec = FactorCanonicalRecovery(grid_points=65)
    params = rec.get_params()
    assert params["grid_points"] == 65
    rec.set_params(n_verify=10)
    assert rec.n_verify == 10
    with pytest.raises(ValueError):
        rec.set_params(bogus=1)


def test_decompose_identity_oracle(rng):
    profile = BlockProfile((2, 3))
    oracle = OrderIsoOracle.from_iso(DirectSumIso.identity(profile, "eff"))
    pi, blocks = decompose_effect_iso(oracle, random_state=0)
    assert pi == (0, 1)
    x = random_effect(rng, 2)
    single = DirectSumElement(BlockProfile((2,)), [x])
    assert max_abs(blocks[0].forward(single).blocks[0] - x) <= 1e-10


def test_decompose_recovers_swap(rng):
    profile = BlockProfile((2, 2))
    for _ in range(5):
        iso = random_direct_sum_iso(rng, profile, "eff")
        oracle = OrderIsoOracle.from_iso(iso)
        pi, _blocks = decompose_effect_iso(oracle, random_state=1)
        assert pi == iso.pi


def test_decompose_dimension_forcing(rng):
    """With distinct block dimensions only the identity assignment respects
    dimensions, whatever the map does inside the blocks."""
    profile = BlockProfile((2, 3))
    iso = random_direct_sum_iso(rng, profile, "eff")
    pi, _ = decompose_effect_iso(OrderIsoOracle.from_iso(iso), random_state=2)
    assert pi == (0, 1)


def test_decompose_positive_cone(rng):
    profile = BlockProfile((2, 2))
    iso = random_direct_sum_iso(rng, profile, "pos")
    dec = DirectSumIsoDecomposer(random_state=3).fit(OrderIsoOracle.from_iso(iso))
    assert dec.permutation_ == iso.pi
    assert dec.shift_ is None


def test_decompose_sa_with_shift(rng):
    profile = BlockProfile((2, 2, 3))
    iso = random_direct_sum_iso(rng, profile, "sa", fix_zero=True)
    cod = iso.codomain_profile
    shift = DirectSumElement(cod, [c * np.eye(d) for c, d in zip([0.5, -1.0, 2.0], cod.dims)])
    base = OrderIsoOracle.from_iso(iso)
    oracle = OrderIsoOracle(
        profile, cod, "sa",
        forward=lambda x: base.forward(x) + shift,
        inverse=lambda y: base.inverse(y - shift),
    )
    got_shift, pi, _blocks = decompose_sa_iso(oracle, random_state=4)
    assert pi == iso.pi
    assert max(max_abs(a - b) for a, b in zip(got_shift.blocks, shift.blocks)) <= 1e-8


def test_decompose_rejects_noncentral_zero_image():
    profile = BlockProfile((2, 2))
    bump = embed_block(profile, 0, np.diag([1.0, 0.0]))

    def fwd(x):
        return x + bump

    oracle = OrderIsoOracle(profile, profile, "sa", fwd, lambda y: y - bump)
    with pytest.raises(DecompositionError):
        decompose_sa_iso(oracle, random_state=0)


def test_decompose_rejects_mismatched_sign_permutations():
    """Tearing positive and negative parts into different slots makes the
    scalar actions disagree on a slot, which the recovery must reject."""
    profile = BlockProfile((2, 2))

    def fwd(x):
        p0, m0 = pos_neg_parts(x.blocks[0])
        p1, m1 = pos_neg_parts(x.blocks[1])
        return DirectSumElement(profile, [p0 - m1, p1 - m0])

    oracle = OrderIsoOracle(profile, profile, "sa", fwd, lambda y: y)
    with pytest.raises(DecompositionError, match="different codomain slots"):
        decompose_sa_iso(oracle, random_state=0)


def test_decompose_rejects_non_blockwise_map():
    """A unitary mixing the two slots sends central atoms off the center."""
    profile = BlockProfile((2, 2))
    u = np.eye(4, dtype=complex)
    u[1, 1] = u[2, 2] = np.sqrt(0.5)
    u[1, 2], u[2, 1] = np.sqrt(0.5), -np.sqrt(0.5)

    def mixing_fwd(x):
        m = u @ x.assemble() @ u.conj().T
        blocks = profile.split(m)
        return DirectSumElement(profile, [(b + b.conj().T) / 2 for b in blocks])

    oracle = OrderIsoOracle(profile, profile, "eff", mixing_fwd, lambda y: y)
    with pytest.raises(DecompositionError):
        decompose_effect_iso(oracle, random_state=0)


def test_effect_iso_preserves_scalar_atom_multiples(rng):
    """Effect-lattice isomorphisms carry scalar multiples of atoms onto the
    same set, and atomic projections (the maximal such elements) onto atomic
    projections."""
    from speclat.linalg import orthonormal_range
    from speclat.order import atom_scalar_decompose
    from speclat.sampling import random_projection_isomorphism

    for _ in range(20):
        n = int(rng.integers(2, 5))
        f = random_monotone_bijection(rng, "eff")
        tau = random_projection_isomorphism(rng, n, "shear")
        phi = FactorCanonicalIso(f, tau, "eff")
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        atom = orthonormal_range([v])
        lam = rng.uniform(0.1, 0.9)
        image = phi.apply(lam * atom)
        found = atom_scalar_decompose(image, "eff")
        assert found is not None
        top = atom_scalar_decompose(phi.apply(atom), "eff")
        assert top is not None
        alpha, e = top
        assert alpha == pytest.approx(1.0, abs=1e-9)
        assert max_abs(e @ e - e) <= 1e-9


def test_is_orthoiso_identity_and_jordan(rng):
    profile = BlockProfile((2, 3))
    ident = OrderIsoOracle.from_iso(DirectSumIso.identity(profile, "eff"))
    assert is_orthoiso(ident, trials=40, random_state=0).ok
    iso = random_direct_sum_iso(rng, profile, "eff", jordan=True)
    check = is_orthoiso(OrderIsoOracle.from_iso(iso), trials=60, random_state=1)
    assert check.ok and check.witness is None
    assert "type-I2" in check.flags


def test_is_orthoiso_flags_shear(rng):
    iso = random_direct_sum_iso(rng, BlockProfile((3,)), "eff", tau_kinds=("shear",))
    check = is_orthoiso(OrderIsoOracle.from_iso(iso), trials=1000, random_state=2)
    assert not check.ok
    assert check.witness is not None
    assert check.witness["image_product_norm"] > 1e-6


def test_decomposer_get_params():
    dec = DirectSumIsoDecomposer(n_verify=7)
    assert dec.get_params()["n_verify"] == 7
