import math

import numpy as np
import pytest

from timebin_cphase.fock import MODES, FockState, attenuate
from timebin_cphase.gate import (
    ATT1_DEFAULT,
    THETA2_DEFAULT,
    EmptyPostselectionError,
    SwitchProfile,
    TimeBinQubitSpec,
    apply_switch,
    effective_conditional_gate,
    fix_global_phase,
    gate_success_probability,
    ideal_cphase_apply,
    postselect_coincidence,
    prepare_input_pair,
    prepare_qubit,
    run_gate,
)

A1, A2, B1, B2, C1, C2, D1, D2 = MODES
H = 1 / math.sqrt(2)


def occ(*modes):
    o = [0] * 8
    for m in modes:
        o[m.index] += 1
    return tuple(o)


def equal_up_to_phase(a, b, atol):
    return np.allclose(fix_global_phase(a), fix_global_phase(b), atol=atol, rtol=0)


def closed_form(a: TimeBinQubitSpec, b: TimeBinQubitSpec) -> np.ndarray:
    """Heralded output written out term by term, renormalized."""
    v = np.array([
        a.c1 * b.c1,
        a.c1 * b.c2 * np.exp(1j * b.phi),
        a.c2 * b.c1 * np.exp(1j * a.phi),
        -a.c2 * b.c2 * np.exp(1j * (a.phi + b.phi)),
    ])
    return v / np.linalg.norm(v)


class TestSpecs:
    def test_defaults(self):
        assert ATT1_DEFAULT == pytest.approx(math.sqrt(1 / 3))
        p = SwitchProfile()
        assert p.theta_t1 == 0
        assert math.cos(p.theta_t2 / 2) == pytest.approx(1 / math.sqrt(3))

    def test_normalization_enforced(self):
        with pytest.raises(ValueError):
            TimeBinQubitSpec(0.5, 0.5)
        with pytest.raises(ValueError):
            TimeBinQubitSpec(-H, H)
        with pytest.raises(ValueError):
            TimeBinQubitSpec(H, H, att1=1.5)


class TestPrepare:
    def test_plus_unattenuated(self):
        s = prepare_qubit(TimeBinQubitSpec.plus(att1=1.0), "A")
        assert s.amplitude([A1]) == pytest.approx(H)
        assert s.amplitude([A2]) == pytest.approx(H)
        assert s.norm() == pytest.approx(1.0)

    def test_plus_attenuated(self):
        s = prepare_qubit(TimeBinQubitSpec.plus(), "A")
        assert s.amplitude([A1]) == pytest.approx(1 / math.sqrt(6))
        assert s.amplitude([A2]) == pytest.approx(H)
        assert s.norm() ** 2 == pytest.approx(2 / 3)
        # normalized form sqrt(3/4) (sqrt(1/3)|t1> + |t2>) = (1/2, sqrt(3)/2)
        v = np.array([s.amplitude([A1]), s.amplitude([A2])]) / s.norm()
        assert np.allclose(v, [0.5, math.sqrt(3) / 2], atol=1e-15)

    def test_early_only_attenuated(self):
        s = prepare_qubit(TimeBinQubitSpec.early(), "B")
        assert s.amplitude([B1]) == pytest.approx(math.sqrt(1 / 3))
        assert s.norm() ** 2 == pytest.approx(1 / 3)

    def test_bad_port(self):
        with pytest.raises(ValueError):
            prepare_qubit(TimeBinQubitSpec.plus(), "C")

    def test_pair_plus_plus_unattenuated(self):
        s = prepare_input_pair(TimeBinQubitSpec.plus(att1=1), TimeBinQubitSpec.plus(att1=1))
        assert len(s.terms) == 4
        assert all(a == pytest.approx(0.5) for a in s.terms.values())

    def test_pair_plus_plus_attenuated(self):
        s = prepare_input_pair(TimeBinQubitSpec.plus(), TimeBinQubitSpec.plus())
        expected = {
            occ(A1, B1): 1 / 6,
            occ(A1, B2): 1 / math.sqrt(12),
            occ(A2, B1): 1 / math.sqrt(12),
            occ(A2, B2): 1 / 2,
        }
        for k, v in expected.items():
            assert s.terms[k] == pytest.approx(v, abs=1e-15)
        assert s.norm() ** 2 == pytest.approx((2 / 3) ** 2, abs=1e-15)

    def test_pair_early_late(self):
        phi_b = 0.7
        s = prepare_input_pair(TimeBinQubitSpec.early(att1=1), TimeBinQubitSpec.late(phi_b, att1=1))
        assert list(s.terms) == [occ(A1, B2)]
        assert s.terms[occ(A1, B2)] == pytest.approx(np.exp(1j * phi_b))


class TestSwitch:
    def test_zero_profile_passes_everything(self, rng):
        from timebin_cphase.fock import random_state
        s = random_state(rng, 2, "input")
        out = apply_switch(s, SwitchProfile(0.0, 0.0))
        relabel = {0: 4, 1: 5, 2: 6, 3: 7}
        for o, amp in s.terms.items():
            new = [0] * 8
            for i, n in enumerate(o[:4]):
                new[relabel[i]] = n
            assert out.terms[tuple(new)] == amp

    def test_late_photon_at_b(self):
        out = apply_switch(FockState.single(B2), SwitchProfile())
        assert out.amplitude([C2]) == pytest.approx(math.sqrt(2 / 3), abs=1e-15)
        assert out.amplitude([D2]) == pytest.approx(math.sqrt(1 / 3), abs=1e-15)

    def test_two_late_photons_coincidence_is_minus_third(self):
        out = apply_switch(FockState(2, {occ(A2, B2): 1.0}), SwitchProfile())
        assert out.amplitude([C2, D2]) == pytest.approx(-1 / 3, abs=1e-15)

    def test_output_modes_rejected(self):
        with pytest.raises(ValueError):
            apply_switch(FockState.single(C1), SwitchProfile())


class TestPostselect:
    def test_plus_plus_operating_point(self):
        res = run_gate(TimeBinQubitSpec.plus(), TimeBinQubitSpec.plus())
        assert np.allclose(res.canonical_state(), [0.5, 0.5, 0.5, -0.5], atol=1e-12, rtol=0)
        assert res.probability == pytest.approx(1 / 9, abs=1e-12)

    def test_early_early_unattenuated(self):
        res = run_gate(TimeBinQubitSpec.early(att1=1), TimeBinQubitSpec.early(att1=1))
        assert np.allclose(res.state, [1, 0, 0, 0])
        assert res.probability == pytest.approx(1.0)

    def test_late_late_unattenuated(self):
        res = run_gate(TimeBinQubitSpec.late(att1=1), TimeBinQubitSpec.late(att1=1))
        assert equal_up_to_phase(res.state, [0, 0, 0, 1], 1e-12)
        assert res.probability == pytest.approx(1 / 9, abs=1e-12)

    def test_empty_postselection(self):
        # balanced splitter, both photons late: perfect bunching
        with pytest.raises(EmptyPostselectionError):
            run_gate(TimeBinQubitSpec.late(att1=1), TimeBinQubitSpec.late(att1=1),
                     SwitchProfile(0.0, math.pi / 2))

    def test_input_side_rejected(self):
        with pytest.raises(ValueError):
            postselect_coincidence(FockState(2, {occ(A1, B1): 1.0}))

    def test_matches_closed_form_for_random_inputs(self, rng):
        for _ in range(200):
            c1a, c1b = rng.uniform(0, 1, size=2)
            a = TimeBinQubitSpec.from_c1(c1a, rng.uniform(0, 2 * np.pi))
            b = TimeBinQubitSpec.from_c1(c1b, rng.uniform(0, 2 * np.pi))
            res = run_gate(a, b)
            assert equal_up_to_phase(res.state, closed_form(a, b), 1e-10)

    def test_attenuation_placement_equivalence(self, rng):
        # attenuating t1 before the switch or after it gives the same herald
        for _ in range(50):
            a = TimeBinQubitSpec.from_c1(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
            b = TimeBinQubitSpec.from_c1(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
            before = run_gate(a, b)
            raw = apply_switch(prepare_input_pair(
                TimeBinQubitSpec(a.c1, a.c2, a.phi, 1.0), TimeBinQubitSpec(b.c1, b.c2, b.phi, 1.0)
            ), SwitchProfile())
            after = postselect_coincidence(attenuate(raw, {C1: ATT1_DEFAULT, D1: ATT1_DEFAULT}))
            assert np.allclose(before.state, after.state, atol=1e-10)
            assert before.probability == pytest.approx(after.probability, abs=1e-12)


class TestSuccessProbability:
    def test_operating_point(self):
        p = gate_success_probability(TimeBinQubitSpec.plus(), TimeBinQubitSpec.plus())
        assert p == pytest.approx(1 / 9, abs=1e-12)

    def test_early_early_attenuated(self):
        p = gate_success_probability(TimeBinQubitSpec.early(), TimeBinQubitSpec.early())
        assert p == pytest.approx(1 / 9, abs=1e-12)

    def test_early_early_unattenuated(self):
        p = gate_success_probability(TimeBinQubitSpec.early(att1=1), TimeBinQubitSpec.early(att1=1))
        assert p == pytest.approx(1.0, abs=1e-12)

    def test_bounded(self, rng):
        for _ in range(100):
            a = TimeBinQubitSpec.from_c1(rng.uniform(), rng.uniform(0, 6), rng.uniform())
            b = TimeBinQubitSpec.from_c1(rng.uniform(), rng.uniform(0, 6), rng.uniform())
            p = gate_success_probability(a, b, SwitchProfile(0.0, rng.uniform(0, 2 * np.pi)))
            assert 0 <= p <= 1


class TestIdealCPhase:
    def test_uniform_matrix(self):
        out = ideal_cphase_apply(np.full((4, 4), 0.25))
        expected = 0.25 * np.array([
            [1, 1, 1, -1],
            [1, 1, 1, -1],
            [1, 1, 1, -1],
            [-1, -1, -1, 1],
        ])
        assert np.array_equal(out, expected)

    def test_diagonal_unchanged(self):
        d = np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex)
        assert np.array_equal(ideal_cphase_apply(d), d)

    def test_involution_and_spectrum(self, rng):
        from oracles import random_density
        for _ in range(20):
            rho = random_density(rng)
            out = ideal_cphase_apply(rho)
            assert np.allclose(ideal_cphase_apply(out), rho, atol=1e-14)
            assert np.trace(out) == pytest.approx(np.trace(rho), abs=1e-12)
            assert np.allclose(out, out.conj().T, atol=1e-12)
            assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho), atol=1e-12)


class TestEffectiveGate:
    def test_operating_point(self):
        g = effective_conditional_gate()
        assert np.allclose(g, np.diag([1, 1, 1, -1]) / 3, atol=1e-15)

    def test_identity(self):
        assert np.allclose(effective_conditional_gate(SwitchProfile(0, 0), 1.0), np.eye(4))

    def test_balanced_splitter(self):
        g = effective_conditional_gate(SwitchProfile(0, math.pi / 2), 1.0)
        assert np.allclose(g, np.diag([1, H, H, 0]), atol=1e-15)

    def test_agrees_with_fock_pipeline(self, rng):
        for _ in range(50):
            theta2 = rng.uniform(0, 2 * np.pi)
            att1 = rng.uniform(0.1, 1)
            p = SwitchProfile(0.0, theta2)
            a = TimeBinQubitSpec.from_c1(rng.uniform(), rng.uniform(0, 6), att1)
            b = TimeBinQubitSpec.from_c1(rng.uniform(), rng.uniform(0, 6), att1)
            v = effective_conditional_gate(p, att1) @ np.kron(a.vector(), b.vector())
            res = run_gate(a, b, p)
            assert np.vdot(v, v).real == pytest.approx(res.probability, abs=1e-12)
            assert equal_up_to_phase(v / np.linalg.norm(v), res.state, 1e-10)

    def test_nonzero_early_phase_agrees_with_pipeline(self, rng):
        # with theta_t1 != 0 the map is no longer diagonal
        p = SwitchProfile(0.4, THETA2_DEFAULT)
        g = effective_conditional_gate(p, 1.0)
        assert abs(g[2, 1]) > 0
        for k in range(4):
            i, j = divmod(k, 2)
            a = TimeBinQubitSpec.early(att1=1) if i == 0 else TimeBinQubitSpec.late(att1=1)
            b = TimeBinQubitSpec.early(att1=1) if j == 0 else TimeBinQubitSpec.late(att1=1)
            res = run_gate(a, b, p)
            assert np.allclose(res.state * math.sqrt(res.probability), g[:, k], atol=1e-12)
