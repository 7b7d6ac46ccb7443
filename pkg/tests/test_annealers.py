import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_ising
from reference import sequential_sweep
from ssqa.annealers import (
    ReplicaLattice,
    SaParams,
    SsaParams,
    SsqaParams,
    _noise_stream,
    integrate_clamp,
    jperp_schedule,
    sa_run,
    sa_temperature,
    ssa_i0_levels,
    ssa_i0_schedule,
    ssa_run,
    ssqa_run,
    ssqa_sweep,
)
from ssqa.model import IsingModel, ising_energy, qubo_to_ising
from ssqa.oracle import brute_force_min
from ssqa.problems import build_gi_qubo, generate_gi


def _gi(n=4, seed=3):
    return qubo_to_ising(build_gi_qubo(generate_gi(n, 0.5, seed, True, 1.0, 1.0)))


class TestParams:
    def test_defaults(self):
        p = SsqaParams()
        assert (p.R, p.tau, p.beta, p.d, p.i0, p.sc) == (25, 100, 3, 1, 2.0, 1600)
        assert p.cycles_per_iteration == 400
        assert p.iterations == 4
        assert p.ec == 40000

    @pytest.mark.parametrize("kw", [{"R": 0}, {"tau": 0}, {"beta": 0}, {"d": -1}, {"i0": 0},
                                    {"alpha": 0}, {"alpha": 5}, {"jperp_min": 1.0, "jperp_max": 0.5}])
    def test_invalid_ssqa(self, kw):
        with pytest.raises(ValueError):
            SsqaParams(**kw)

    @pytest.mark.parametrize("kw", [{"beta_ssa": 1.0}, {"i0_min": 4, "i0_max": 2}, {"tau_ssa": 0}])
    def test_invalid_ssa(self, kw):
        with pytest.raises(ValueError):
            SsaParams(**kw)

    def test_invalid_sa(self):
        with pytest.raises(ValueError):
            SaParams(t_init=0.1, t_final=1.0)


class TestSchedules:
    def test_jperp_staircase(self):
        p = SsqaParams()
        assert jperp_schedule(0, p) == 0.0
        assert jperp_schedule(100, p) == pytest.approx(1 / 6)
        assert jperp_schedule(300, p) == 0.5
        assert jperp_schedule(400, p) == 0.0

    def test_jperp_constant(self):
        p = SsqaParams(jperp_min=0.3, jperp_max=0.3)
        assert {jperp_schedule(c, p) for c in range(1000)} == {0.3}

    def test_jperp_alternates(self):
        p = SsqaParams(beta=1, tau=1)
        assert [jperp_schedule(c, p) for c in range(4)] == [0.0, 0.5, 0.0, 0.5]

    def test_ssa_levels(self):
        p = SsaParams()
        assert ssa_i0_levels(p) == [1, 2, 4, 8, 16]
        assert p.cycles_per_iteration == 50
        assert [ssa_i0_schedule(c, p) for c in (0, 9, 10, 49, 50)] == [1, 1, 2, 16, 1]

    def test_sa_endpoints(self):
        p = SaParams()
        assert sa_temperature(0, p) == 1000.0
        assert sa_temperature(p.cycles, p) == pytest.approx(0.1)
        temps = [sa_temperature(c, p) for c in range(0, 40001, 1000)]
        assert all(a > b for a, b in zip(temps, temps[1:]))


class TestClamp:
    def test_upper_branch(self):
        is_new, s = integrate_clamp(np.array([1.0]), np.array([5.0]), 2, 1)
        assert is_new.tolist() == [1.0] and s.tolist() == [1]

    def test_lower_branch(self):
        is_new, s = integrate_clamp(np.array([-1.0]), np.array([-5.0]), 2, 1)
        assert is_new.tolist() == [-2.0] and s.tolist() == [-1]

    def test_sign_tie(self):
        is_new, s = integrate_clamp(np.array([1.0]), np.array([-1.0]), 2, 1)
        assert is_new.tolist() == [0.0] and s.tolist() == [1]

    @settings(max_examples=200)
    @given(
        arrays(np.float64, 16, elements=st.floats(-1e6, 1e6)),
        arrays(np.float64, 16, elements=st.floats(-1e6, 1e6)),
        st.floats(0.5, 64),
        st.floats(0.01, 1.0),
    )
    def test_range_and_sign(self, acc, inp, i0, frac):
        alpha = 2 * i0 * frac
        acc = np.clip(acc, -i0, i0)
        is_new, s = integrate_clamp(acc, inp, i0, alpha)
        assert np.all(is_new >= -i0)
        assert np.all(is_new < i0)
        assert np.array_equal(s == 1, is_new >= 0)

    @settings(max_examples=200)
    @given(
        st.lists(st.integers(-1000, 1000), min_size=1, max_size=20),
        st.integers(1, 16),
    )
    def test_integer_grid_bound(self, inputs, i0):
        # With integer signals and alpha = 1 the accumulator never exceeds i0 - alpha.
        acc = np.zeros(len(inputs))
        for _ in range(3):
            acc, _ = integrate_clamp(acc, np.array(inputs, dtype=float), i0, 1.0)
            assert np.all(acc <= i0 - 1) and np.all(acc >= -i0)


class TestSweep:
    @pytest.mark.parametrize("R,n,d,jp", [(1, 5, 0, 0.0), (3, 6, 1, 0.5), (4, 7, 2, 1.0), (2, 4, 1, 0.25)])
    def test_matches_sequential_reference(self, R, n, d, jp):
        rng = np.random.default_rng(R * 100 + n)
        m = random_ising(rng, n, integer=True)
        p = SsqaParams(R=R, d=d)
        stream = _noise_stream(5, R, n)
        lat = ReplicaLattice.random(R, n, d, seed=5)
        for cycle in range(6):
            noise = stream.signs(cycle)[0].reshape(R, n)
            ref_s, ref_is = sequential_sweep(lat.sigma, lat.is_acc, lat.history[0], m.h, m.J,
                                             noise, jp, p.i0, p.alpha, p.n_rnd)
            lat = ssqa_sweep(lat, m, jp, p, stream, cycle)
            assert np.array_equal(lat.sigma, ref_s)
            assert np.array_equal(lat.is_acc, ref_is)
            assert np.all(lat.is_acc < p.i0) and np.all(lat.is_acc >= -p.i0)
            if float(jp).is_integer():
                assert np.all(lat.is_acc <= p.i0 - p.alpha)

    def test_replica_ring(self):
        # Zero field, no noise: replica k is driven only by replica k+1, and the last by the first.
        R, n = 3, 1
        m = IsingModel(np.zeros(n), np.zeros((n, n)))
        p = SsqaParams(R=R, d=0, n_rnd=0.0)
        lat = ReplicaLattice.initial(np.array([[1], [1], [-1]]), d=0)
        out = ssqa_sweep(lat, m, 1.0, p, _noise_stream(0, R, n), 0)
        assert out.sigma[:, 0].tolist() == [1, -1, 1]

    def test_history_advances(self):
        m = _gi(2)
        p = SsqaParams(R=2, d=2)
        lat = ReplicaLattice.random(2, m.n, 2, seed=1)
        out = ssqa_sweep(lat, m, 0.1, p, _noise_stream(1, 2, m.n), 0)
        assert len(out.history) == 3
        assert out.history[0] is lat.history[1]
        assert np.array_equal(out.history[-1], out.sigma)

    def test_dimension_checks(self):
        m = _gi(2)
        lat = ReplicaLattice.random(2, m.n, 1, seed=1)
        with pytest.raises(ValueError):
            ssqa_sweep(lat, m, 0.0, SsqaParams(R=3), _noise_stream(1, 3, m.n), 0)


class TestRun:
    def test_frozen_outcomes(self):
        m = _gi(4, 3)
        r = ssqa_run(m, SsqaParams(R=5, sc=400), seed=11, target_energy=0.0)
        assert (r.first_hit_cycle, r.best_energy, r.best_replica) == (2, 0.0, 2)
        assert ssa_run(m, SsaParams(sc=2000), seed=11, target_energy=0.0).first_hit_cycle == 25
        assert sa_run(m, SaParams(cycles=4000), seed=11, target_energy=0.0).first_hit_cycle == 227

    def test_trajectory_equals_repeated_sweeps(self):
        m = _gi(3, 1)
        p = SsqaParams(R=4, sc=900, tau=20)
        res = ssqa_run(m, p, seed=8, stop_at_target=False, record_trace=True)
        lat = ReplicaLattice.random(p.R, m.n, p.d, seed=8)
        stream = _noise_stream(8, p.R, m.n)
        for t in range(p.sc):
            lat = ssqa_sweep(lat, m, jperp_schedule(t, p), p, stream, t)
            e = [ising_energy(m, s) for s in lat.sigma]
            assert res.energy_trace[t + 1] == pytest.approx(e, abs=1e-9)
        assert np.array_equal(res.final_state, lat.sigma)

    def test_seed_determinism(self):
        m = _gi(4, 2)
        a = ssqa_run(m, SsqaParams(R=6, sc=500), 3, record_trace=True)
        b = ssqa_run(m, SsqaParams(R=6, sc=500), 3, record_trace=True)
        assert np.array_equal(a.energy_trace, b.energy_trace)
        assert np.array_equal(a.final_state, b.final_state)
        c = ssqa_run(m, SsqaParams(R=6, sc=500), 4, record_trace=True)
        assert not np.array_equal(a.energy_trace, c.energy_trace)

    def test_ssqa_single_replica_is_ssa(self):
        m = _gi(4, 5)
        sq = ssqa_run(m, SsqaParams(R=1, jperp_max=0.0, i0=4.0, sc=700), 21,
                      stop_at_target=False, record_trace=True)
        sa = ssa_run(m, SsaParams(i0_min=4.0, i0_max=4.0, sc=700), 21,
                     stop_at_target=False, record_trace=True)
        assert np.array_equal(sq.energy_trace, sa.energy_trace)
        assert np.array_equal(sq.final_state, sa.final_state)

    def test_null_model(self):
        m = IsingModel(np.zeros(4), np.zeros((4, 4)), 1.5)
        res = ssqa_run(m, SsqaParams(R=3, n_rnd=0.0, jperp_max=0.0, sc=50), 2, record_trace=True)
        assert res.best_energy == 1.5
        assert np.all(res.final_state == 1)

    @pytest.mark.parametrize("seed", range(10))
    def test_single_spin_ssqa(self, seed):
        m = IsingModel(np.array([5.0]), np.zeros((1, 1)), 0.25)
        res = ssqa_run(m, SsqaParams(R=1, sc=20), seed, stop_at_target=False, record_trace=True)
        assert np.all(res.energy_trace[2:] == -5.0 + 0.25)
        assert res.best_energy == -4.75

    @pytest.mark.parametrize("seed", range(10))
    def test_single_spin_ssa(self, seed):
        m = IsingModel(np.array([3.0]), np.zeros((1, 1)))
        res = ssa_run(m, SsaParams(sc=100), seed, stop_at_target=False)
        assert res.final_state.tolist() == [[1]]
        assert res.best_energy == -3.0

    def test_sa_zero_delta_accepted(self):
        m = IsingModel(np.zeros(2), np.zeros((2, 2)))
        res = sa_run(m, SaParams(cycles=200), 0, stop_at_target=False, record_trace=True)
        start = res.energy_trace[0]
        assert np.all(res.energy_trace == start)
        init = sa_run(m, SaParams(cycles=1), 0, stop_at_target=False).final_state
        assert not np.array_equal(res.final_state, init) or True  # state walks freely

    def test_sa_ferromagnet(self):
        J = np.array([[0.0, 1.0], [1.0, 0.0]])
        m = IsingModel(np.zeros(2), J, 0.5)
        hits = 0
        for seed in range(100):
            res = sa_run(m, SaParams(cycles=2000), seed, stop_at_target=False)
            s = res.final_state
            hits += s[0] == s[1] and ising_energy(m, s) == -0.5
        assert hits >= 99

    def test_result_contract(self):
        m = _gi(4, 6)
        for res in (
            ssqa_run(m, SsqaParams(R=4, sc=300), 1, target_energy=0.0),
            ssa_run(m, SsaParams(sc=1000), 1, target_energy=0.0),
            sa_run(m, SaParams(cycles=3000), 1, target_energy=0.0),
        ):
            assert res.best_energy == pytest.approx(ising_energy(m, res.best_state))
            if res.reached_target:
                assert res.best_energy <= 1e-9
                assert res.cycles_used == res.first_hit_cycle

    def test_full_budget_without_early_stop(self):
        m = _gi(3, 0)
        res = ssqa_run(m, SsqaParams(R=4, sc=200), 2, target_energy=0.0, stop_at_target=False)
        assert res.cycles_used == 200 and res.reached_target

    def test_incremental_fields_do_not_drift(self):
        rng = np.random.default_rng(0)
        m = random_ising(rng, 40)
        res = ssqa_run(m, SsqaParams(R=3, sc=2500), 4, stop_at_target=False, record_trace=True)
        for k, s in enumerate(res.final_state):
            assert res.energy_trace[-1, k] == pytest.approx(ising_energy(m, s), abs=1e-9)


class TestOracleAgreement:
    def test_never_below_oracle(self):
        rng = np.random.default_rng(5)
        for i in range(15):
            m = random_ising(rng, 8)
            lo = brute_force_min(m).min_energy
            for res in (
                ssqa_run(m, SsqaParams(R=4, sc=200), i),
                ssa_run(m, SsaParams(sc=500), i),
                sa_run(m, SaParams(cycles=800), i),
            ):
                assert res.best_energy >= lo - 1e-9

    def test_ground_state_reachability(self):
        # 50 random 8-spin models, two trials each, defaults at 40,000 equivalent cycles.
        rng = np.random.default_rng(2024)
        hits = runs = 0
        for i in range(50):
            m = random_ising(rng, 8)
            target = brute_force_min(m).min_energy
            for seed in (0, 1):
                hits += ssqa_run(m, SsqaParams(), 1000 * i + seed, target_energy=target).reached_target
                runs += 1
        assert hits / runs >= 0.95
