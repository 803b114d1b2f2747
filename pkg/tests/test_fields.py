"""Torus transforms: the pointwise operator, its sphere-scale average, and
weighted radial averages, cross-checked between multiplier and quadrature
routes and against closed forms."""

from math import pi, sin, sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlops.bessel import ball_transform
from nlops.fields import (
    FrequencyMultiplier,
    TorusField,
    apply_local,
    apply_radial_direct,
    apply_radial_spectral,
    apply_spherical_direct,
    apply_spherical_spectral,
    coordinates,
    frequency_grid,
    kernel_check_torus,
    kernel_witness,
    localization_table,
    lp_norm,
    random_trig_field,
    trig_field_from_coeffs,
)
from nlops.operators import (
    FirstOrderOperator,
    adjoint,
    curl3,
    divergence,
    gradient,
    scalar_derivative,
)
from nlops.weights import annulus, annulus_family, bump, gaussian_modification, normalize

D1 = scalar_derivative()


def sine_field(N=64, m=1, amp=1.0):
    """amp * sin(2 pi m x) on the 1D torus."""
    return trig_field_from_coeffs(1, N, 1, [((m,), (-0.5j * amp,))])


def rel_l2(a: TorusField, b: TorusField) -> float:
    diff = TorusField(n=a.n, N=a.N, values=a.values - b.values)
    return lp_norm(diff, 2) / max(lp_norm(b, 2), 1e-300)


class TestLocal:
    def test_derivative_of_sine_exact(self):
        u = sine_field()
        x = coordinates(1, 64)[..., 0]
        got = apply_local(D1, u).values[..., 0]
        assert np.max(np.abs(got - 2 * pi * np.cos(2 * pi * x))) < 1e-12

    def test_gradient_of_plane_wave(self):
        N, m = 32, (2, -1)
        u = trig_field_from_coeffs(2, N, 1, [(m, (-0.5j,))])
        x = coordinates(2, N)
        phase = 2 * pi * (m[0] * x[..., 0] + m[1] * x[..., 1])
        got = apply_local(gradient(2), u).values
        want = 2 * pi * np.cos(phase)[..., None] * np.array(m, float)
        assert np.max(np.abs(got - want)) < 1e-11

    def test_constant_annihilated(self):
        u = TorusField(n=2, N=16, values=np.full((16, 16, 1), 3.7))
        assert lp_norm(apply_local(gradient(2), u), np.inf) == 0.0

    def test_nyquist_row_dropped(self):
        # the alternating-sign grid function lives entirely on the Nyquist
        # row, where the derivative has no well-defined sign
        vals = np.cumprod(np.full(16, -1.0))[:, None]
        u = TorusField(n=1, N=16, values=vals)
        assert lp_norm(apply_local(D1, u), np.inf) == 0.0

    def test_dimension_mismatch_rejected(self):
        u = sine_field(N=16)
        with pytest.raises(ValueError):
            apply_local(gradient(2), u)
        with pytest.raises(ValueError):
            apply_local(divergence(2), TorusField(n=2, N=16, values=np.zeros((16, 16, 1))))


class TestSpherical:
    def test_central_difference_closed_form(self):
        # in 1D the sphere average is the symmetric difference quotient, so
        # sin(2 pi x) maps to cos(2 pi x) sin(2 pi s)/s
        u = sine_field()
        x = coordinates(1, 64)[..., 0]
        for s in (0.3, 0.17):
            got = apply_spherical_spectral(D1, u, s).values[..., 0]
            want = np.cos(2 * pi * x) * sin(2 * pi * s) / s
            assert np.max(np.abs(got - want)) < 1e-12

    @pytest.mark.parametrize(
        "op,n,N,order",
        [
            (scalar_derivative(), 1, 64, 64),
            (gradient(2), 2, 32, 64),
            (divergence(2), 2, 32, 64),
            (curl3(), 3, 16, 32),
        ],
    )
    def test_spectral_matches_direct(self, op, n, N, order):
        rng = np.random.default_rng(7 * n + N)
        for _ in range(3):
            u = random_trig_field(n, N, op.dim_v, rng, max_degree=3)
            for s in (0.3, 0.1):
                a = apply_spherical_spectral(op, u, s)
                b = apply_spherical_direct(op, u, s, quad_order=order)
                assert rel_l2(a, b) < 1e-10

    def test_equals_ball_averaged_local(self):
        # the sphere-scale operator is the solid-ball average of the local
        # one; compose the local route with the ball multiplier and compare
        op, n, N, s = gradient(2), 2, 32, 0.25
        u = random_trig_field(n, N, 1, np.random.default_rng(3))
        norms = np.sqrt(np.sum(frequency_grid(n, N).astype(float) ** 2, axis=-1))
        table = ball_transform(n, s, norms.ravel()).reshape(norms.shape)
        averaged = FrequencyMultiplier(n=n, N=N, table=table).apply(apply_local(op, u))
        assert rel_l2(apply_spherical_spectral(op, u, s), averaged) < 1e-12

    def test_norm_contraction(self):
        rng = np.random.default_rng(11)
        for n, op in ((1, D1), (2, gradient(2))):
            for k in range(5):
                u = random_trig_field(n, 32 if n == 2 else 64, op.dim_v, rng, max_degree=2)
                base = apply_local(op, u)
                for s in (0.3, 0.1):
                    avg = apply_spherical_spectral(op, u, s)
                    for p in (1, 2, np.inf):
                        assert lp_norm(avg, p) <= (1 + 1e-8) * lp_norm(base, p)

    def test_jensen_for_convex_integrands(self):
        # averaging against a probability measure can only shrink the mean
        # of a convex function of the field
        gs = (np.abs, np.square, lambda t: np.sqrt(1.0 + t**2) - 1.0)
        rng = np.random.default_rng(23)
        u = random_trig_field(2, 32, 1, rng, max_degree=2)
        base = np.sqrt(np.sum(apply_local(gradient(2), u).values ** 2, axis=-1))
        for s in (0.3, 0.1):
            avg = np.sqrt(np.sum(apply_spherical_spectral(gradient(2), u, s).values ** 2, axis=-1))
            for g in gs:
                assert np.mean(g(avg)) <= np.mean(g(base)) + 1e-12

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError):
            apply_spherical_spectral(D1, sine_field(N=16), 0.0)
        with pytest.raises(ValueError):
            apply_spherical_direct(D1, sine_field(N=16), -0.2)

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_l2_contraction_random(self, seed):
        u = random_trig_field(1, 32, 1, np.random.default_rng(seed), max_degree=4)
        base = apply_local(D1, u)
        avg = apply_spherical_spectral(D1, u, 0.2)
        assert lp_norm(avg, 2) <= (1 + 1e-8) * lp_norm(base, 2)


class TestRadial:
    WEIGHTS = [
        (1, annulus(0.1)),
        (1, normalize(gaussian_modification(1, 0.5))),
        (1, normalize(bump(1))),
        (2, normalize(bump(2))),
    ]

    @pytest.mark.parametrize("n,w", WEIGHTS, ids=lambda v: getattr(v, "name", str(v)))
    def test_spectral_matches_direct(self, n, w):
        # scale differences by mass * ||A u||: a strongly damping weight can
        # send the output itself to roundoff level
        op = D1 if n == 1 else gradient(2)
        rng = np.random.default_rng(101 + n)
        cache = {}
        for _ in range(3):
            u = random_trig_field(n, 32, op.dim_v, rng, max_degree=3)
            a = apply_radial_spectral(op, u, w, cache)
            b = apply_radial_direct(op, u, w)
            diff = TorusField(n=n, N=32, values=a.values - b.values)
            scale = w.mass * lp_norm(apply_local(op, u), 2)
            assert lp_norm(diff, 2) < 1e-4 * scale

    def test_mu_cache_is_honored(self):
        # poisoning a cache entry must change the output, proving the cache
        # is read rather than recomputed
        u = sine_field(N=32)
        w = annulus(0.1)
        cache = {}
        first = apply_radial_spectral(D1, u, w, cache)
        assert cache
        poisoned = {k: 0.0 for k in cache}
        second = apply_radial_spectral(D1, u, w, poisoned)
        assert lp_norm(first, np.inf) > 1.0
        assert lp_norm(second, np.inf) == 0.0

    def test_single_mode_matches_multiplier_value(self):
        from nlops.weights import mu_hat

        u = sine_field(N=64)
        w = annulus(0.05)
        got = apply_radial_spectral(D1, u, w)
        x = coordinates(1, 64)[..., 0]
        want = 2 * pi * mu_hat(w, 1.0) * np.cos(2 * pi * x)
        assert np.max(np.abs(got.values[..., 0] - want)) < 1e-12

    def test_norm_bound_with_weight_mass(self):
        rng = np.random.default_rng(19)
        w = gaussian_modification(1, 0.5)
        bound = w.mass
        for _ in range(5):
            u = random_trig_field(1, 64, 1, rng, max_degree=2)
            base = apply_local(D1, u)
            out = apply_radial_spectral(D1, u, w)
            for p in (1, 2, np.inf):
                assert lp_norm(out, p) <= (1 + 1e-8) * bound * lp_norm(base, p)

    def test_weight_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_radial_spectral(D1, sine_field(N=16), normalize(bump(2)))


class TestLocalization:
    def test_annulus_single_mode_frozen(self):
        # with one Fourier mode the table reduces to ||A u||_2 |1 - mu(1)|;
        # values pinned from the sine-integral closed form
        u = sine_field()
        table = localization_table(D1, u, annulus_family(), 2, [0.05, 0.025])
        amp = 2 * pi / sqrt(2.0)
        assert abs(table[0][1] - amp * 3.788196056994253e-02) < 1e-12
        assert abs(table[1][1] - amp * 9.564047721086988e-03) < 1e-12
        assert abs(table[1][1] / table[0][1] - 0.252469713214252) < 1e-9

    def test_errors_decrease_along_family(self):
        # scales small enough that 2 pi eps |m| stays left of the first
        # oscillation of the annulus multiplier
        rng = np.random.default_rng(5)
        u = random_trig_field(1, 64, 1, rng, max_degree=2)
        table = localization_table(D1, u, annulus_family(), 2, [0.1, 0.05, 0.025])
        errs = [row[1] for row in table]
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_cache_reuse_is_consistent(self):
        u = sine_field(N=32)
        cache = {}
        t1 = localization_table(D1, u, annulus_family(), 2, [0.2, 0.1], mu_cache=cache)
        assert cache and all(cache.values())
        t2 = localization_table(D1, u, annulus_family(), 2, [0.2, 0.1], mu_cache=cache)
        assert t1 == t2


class TestKernelScan:
    def test_unit_scale_flags_all_integer_frequencies(self):
        scan = kernel_check_torus(D1, 1.0, max_degree=4)
        assert set(scan.flagged) == {(m,) for m in range(-4, 5) if m}
        assert "kernel frequencies found" in scan.verdict

    def test_half_scale_flags_all_integer_frequencies(self):
        # J_{1/2}(pi m) = 0 for every integer m, so s = 1/2 degenerates too
        scan = kernel_check_torus(D1, 0.5, max_degree=4)
        assert set(scan.flagged) == {(m,) for m in range(-4, 5) if m}

    def test_generic_scale_flags_nothing(self):
        scan = kernel_check_torus(D1, 0.123, max_degree=4)
        assert scan.flagged == ()
        assert scan.verdict.startswith("no kernel frequencies")

    def test_two_dimensions_no_integer_zeros(self):
        scan = kernel_check_torus(gradient(2), 0.5, max_degree=3)
        assert scan.flagged == ()
        line = next(l for l in scan.lines if l.m == (1, 0))
        assert line.symbol_rank == 1
        assert line.j_error > 0.0

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(ValueError):
            kernel_check_torus(D1, 0.0)


class TestWitness:
    def test_half_scale_witness_separates_kernels(self):
        rep = kernel_witness(D1, 0.5, (1,), (1.0,))
        assert rep.sup_spherical < 1e-10
        assert abs(rep.sup_local - 2 * pi) < 1e-6
        assert rep.symbol_rank == 1
        assert rep.advisories == ()

    def test_non_kernel_scale_is_advisory_not_error(self):
        rep = kernel_witness(D1, 0.3, (1,), (1.0,))
        assert rep.sup_spherical > 1e-3
        assert any("not a kernel frequency" in a for a in rep.advisories)

    def test_symbol_kernel_fiber_is_advisory(self):
        # divergence annihilates the fiber orthogonal to m, but other fibers
        # at the same frequency still witness, so this only warns
        rep = kernel_witness(divergence(2), 0.5, (1, 0), (0.0, 1.0))
        assert any("symbol kernel" in a for a in rep.advisories)
        assert rep.symbol_image_norm < 1e-12

    def test_rank_zero_frequency_is_an_error(self):
        one_direction = FirstOrderOperator(
            2, 1, 1, (np.array([[1.0]]), np.array([[0.0]])), name="x1-derivative"
        )
        with pytest.raises(ValueError):
            kernel_witness(one_direction, 0.5, (0, 1), (1.0,))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            kernel_witness(D1, 0.5, (0,), (1.0,))
        with pytest.raises(ValueError):
            kernel_witness(D1, 0.5, (1,), (1.0, 2.0))


class TestConstruction:
    def test_coefficient_roundtrip(self):
        N, terms = 16, [((1,), (0.3 - 0.2j,)), ((5,), (0.1j,))]
        u = trig_field_from_coeffs(1, N, 1, terms)
        uhat = np.fft.fft(u.values[:, 0]) / N
        assert abs(uhat[1] - (0.3 - 0.2j)) < 1e-12
        assert abs(uhat[-1] - (0.3 + 0.2j)) < 1e-12
        assert abs(uhat[5] - 0.1j) < 1e-12

    def test_constant_term_real_part_only(self):
        u = trig_field_from_coeffs(1, 8, 1, [((0,), (2.0 + 5.0j,))])
        assert np.allclose(u.values, 2.0)

    def test_nyquist_frequency_rejected(self):
        with pytest.raises(ValueError):
            trig_field_from_coeffs(1, 16, 1, [((8,), (1.0,))])

    def test_bad_term_shapes_rejected(self):
        with pytest.raises(ValueError):
            trig_field_from_coeffs(2, 16, 1, [((1,), (1.0,))])
        with pytest.raises(ValueError):
            trig_field_from_coeffs(1, 16, 2, [((1,), (1.0,))])

    def test_random_field_is_reproducible(self):
        a = random_trig_field(2, 16, 3, np.random.default_rng(42))
        b = random_trig_field(2, 16, 3, np.random.default_rng(42))
        assert np.array_equal(a.values, b.values)

    def test_random_field_degree_guard(self):
        with pytest.raises(ValueError):
            random_trig_field(1, 16, 1, np.random.default_rng(0), max_degree=8)

    def test_field_shape_validation(self):
        with pytest.raises(ValueError):
            TorusField(n=2, N=16, values=np.zeros((16, 8, 1)))
        with pytest.raises(ValueError):
            TorusField(n=1, N=15, values=np.zeros((15, 1)))

    def test_values_are_frozen(self):
        u = sine_field(N=16)
        with pytest.raises(ValueError):
            u.values[0, 0] = 1.0


class TestNormsAndDuality:
    def test_lp_norm_values(self):
        u = TorusField(n=1, N=8, values=np.full((8, 2), 3.0))
        assert abs(lp_norm(u, 2) - 3.0 * sqrt(2.0)) < 1e-14
        assert abs(lp_norm(u, np.inf) - 3.0 * sqrt(2.0)) < 1e-14

    def test_lp_norm_rejects_small_p(self):
        with pytest.raises(ValueError):
            lp_norm(sine_field(N=16), 0.5)

    @pytest.mark.parametrize("op", [gradient(2), divergence(2), curl3()])
    def test_integration_by_parts(self, op):
        # the adjoint's coefficients carry the sign flip, so on the torus
        # <A u, psi> = <u, A* psi> with the uniform grid measure
        N = 16
        rng = np.random.default_rng(id(op) % 1000)
        u = random_trig_field(op.n, N, op.dim_v, rng, max_degree=3)
        psi = random_trig_field(op.n, N, op.dim_w, rng, max_degree=3)
        left = np.mean(np.sum(apply_local(op, u).values * psi.values, axis=-1))
        right = np.mean(np.sum(u.values * apply_local(adjoint(op), psi).values, axis=-1))
        scale = lp_norm(u, 2) * lp_norm(psi, 2)
        assert abs(left - right) < 1e-8 * scale

    def test_spherical_integration_by_parts(self):
        # the ball multiplier is even, so the sphere-scale operators of A
        # and A* stay adjoint to each other
        op, N, s = gradient(2), 16, 0.3
        rng = np.random.default_rng(77)
        u = random_trig_field(2, N, 1, rng, max_degree=3)
        psi = random_trig_field(2, N, 2, rng, max_degree=3)
        left = np.mean(np.sum(apply_spherical_spectral(op, u, s).values * psi.values, axis=-1))
        right = np.mean(np.sum(u.values * apply_spherical_spectral(adjoint(op), psi, s).values, axis=-1))
        assert abs(left - right) < 1e-8 * lp_norm(u, 2) * lp_norm(psi, 2)
