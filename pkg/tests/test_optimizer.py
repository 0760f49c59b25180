import numpy as np
import pytest

from freqherald.circuit import FrequencyLattice
from freqherald.errors import ConfigError, InvalidArgumentsError
from freqherald.hafnian import precompute_tables
from freqherald.herald import cat_target
from freqherald.optimizer import (
    SENTINEL_COST,
    DesignSpace,
    PsoConfig,
    decode_params,
    encode_params,
    evaluate_design,
    pso_run,
)


def small_space(n_cutoff=10):
    lattice = FrequencyLattice(n_modes=8, passband=8, center_index=4)
    return DesignSpace(
        n_components=3, lattice=lattice, n_squeezed=3, n_s=1, n_cutoff=n_cutoff
    )


@pytest.fixture(scope="module")
def small_problem():
    space = small_space()
    tables = precompute_tables(1, 3, space.n_cutoff)
    target = cat_target(1.0, space.n_cutoff)
    return space, target, tables


class TestDesignSpace:
    def test_parameter_count(self):
        space = small_space()
        # 2 EOMs x (m, theta) + 1 shaper x 8 phases + 3 squeezers
        assert space.n_eoms == 2
        assert space.n_shapers == 1
        assert space.n_params == 4 + 8 + 3

    def test_bounds_layout(self):
        space = small_space()
        lo, hi = space.bounds()
        assert np.all(lo == 0)
        assert hi[0] == space.m_max
        assert hi[1] == pytest.approx(2 * np.pi)
        assert hi[-1] == space.r_max

    def test_rejects_even_component_count(self):
        lattice = FrequencyLattice(n_modes=8, passband=8, center_index=4)
        with pytest.raises(ConfigError):
            DesignSpace(n_components=4, lattice=lattice, n_squeezed=3)

    def test_rejects_even_squeezed_count(self):
        lattice = FrequencyLattice(n_modes=8, passband=8, center_index=4)
        with pytest.raises(ConfigError):
            DesignSpace(n_components=3, lattice=lattice, n_squeezed=2)

    def test_squeezed_bins_must_fit(self):
        lattice = FrequencyLattice(n_modes=8, passband=8, center_index=0)
        with pytest.raises(ConfigError):
            DesignSpace(n_components=3, lattice=lattice, n_squeezed=3)


class TestCodec:
    def test_round_trip(self):
        space = small_space()
        rng = np.random.default_rng(0)
        lo, hi = space.bounds()
        vec = lo + (hi - lo) * rng.random(space.n_params)
        circuit, r, clamped = decode_params(vec, space)
        assert not clamped
        assert np.allclose(encode_params(circuit, r, space), vec)

    def test_clamping_flagged(self):
        space = small_space()
        vec = np.zeros(space.n_params)
        vec[0] = 99.0
        circuit, _, clamped = decode_params(vec, space)
        assert clamped
        assert circuit.eoms[0].modulation_index == space.m_max

    def test_length_check(self):
        space = small_space()
        with pytest.raises(InvalidArgumentsError):
            decode_params(np.zeros(3), space)


class TestEvaluate:
    def test_valid_design_has_negative_cost(self, small_problem):
        space, target, tables = small_problem
        rng = np.random.default_rng(1)
        lo, hi = space.bounds()
        found = False
        for _ in range(20):
            vec = lo + (hi - lo) * rng.random(space.n_params)
            d = evaluate_design(vec, space, target, tables)
            if d.valid:
                found = True
                assert d.cost < 0
                assert d.state.fidelity is not None
                assert 0 < d.state.probability <= 1
        assert found

    def test_zero_squeezing_is_sentinel(self, small_problem):
        space, target, tables = small_problem
        vec = np.zeros(space.n_params)
        d = evaluate_design(vec, space, target, tables)
        assert not d.valid
        assert d.cost == SENTINEL_COST

    def test_lossy_design_is_sentinel(self):
        # narrow passband and hard modulation: squeezed light hits the filter
        lattice = FrequencyLattice(n_modes=16, passband=4, center_index=8)
        space = DesignSpace(n_components=3, lattice=lattice, n_squeezed=3, n_cutoff=8)
        tables = precompute_tables(1, 3, 8)
        target = cat_target(1.0, 8)
        vec = np.zeros(space.n_params)
        vec[0] = 5.0  # first EOM at full depth
        vec[-3:] = 0.5
        d = evaluate_design(vec, space, target, tables)
        assert not d.valid and d.cost == SENTINEL_COST


class TestPso:
    def test_deterministic_for_fixed_seed(self, small_problem):
        space, target, tables = small_problem
        cfg = PsoConfig(swarm_size=8, iterations=5, seed=123)
        r1 = pso_run(space, target, cfg, tables=tables)
        r2 = pso_run(space, target, cfg, tables=tables)
        assert np.array_equal(r1.best_by_cost.params, r2.best_by_cost.params)
        assert r1.best_by_cost.cost == r2.best_by_cost.cost
        assert np.array_equal(r1.trace, r2.trace)

    def test_trace_monotone_nonincreasing(self, small_problem):
        space, target, tables = small_problem
        cfg = PsoConfig(swarm_size=10, iterations=15, seed=5)
        res = pso_run(space, target, cfg, tables=tables)
        assert np.all(np.diff(res.trace) <= 0)
        assert res.evaluations == 10 * 16

    def test_improves_over_random_init(self, small_problem):
        space, target, tables = small_problem
        cfg = PsoConfig(swarm_size=12, iterations=25, seed=7)
        res = pso_run(space, target, cfg, tables=tables)
        assert res.trace[-1] < res.trace[0]
        assert res.best_by_cost.valid

    def test_threads_match_serial(self, small_problem):
        space, target, tables = small_problem
        serial = pso_run(space, target, PsoConfig(swarm_size=6, iterations=4, seed=9), tables=tables)
        parallel = pso_run(
            space, target, PsoConfig(swarm_size=6, iterations=4, seed=9, threads=3), tables=tables
        )
        assert np.array_equal(serial.best_by_cost.params, parallel.best_by_cost.params)
        assert np.array_equal(serial.trace, parallel.trace)

    def test_initial_positions_are_used(self, small_problem):
        space, target, tables = small_problem
        rng = np.random.default_rng(11)
        lo, hi = space.bounds()
        seed_vec = None
        for _ in range(50):
            vec = lo + (hi - lo) * rng.random(space.n_params)
            d = evaluate_design(vec, space, target, tables)
            if d.valid and d.cost < -0.001:
                seed_vec = vec
                seed_cost = d.cost
                break
        assert seed_vec is not None
        cfg = PsoConfig(swarm_size=5, iterations=1, seed=13)
        res = pso_run(space, target, cfg, tables=tables, initial_positions=seed_vec)
        assert res.best_by_cost.cost <= seed_cost

    def test_positions_stay_in_box(self, small_problem):
        space, target, tables = small_problem
        cfg = PsoConfig(swarm_size=6, iterations=10, seed=17)
        res = pso_run(space, target, cfg, tables=tables)
        lo, hi = space.bounds()
        assert np.all(res.best_by_cost.params >= lo)
        assert np.all(res.best_by_cost.params <= hi)

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            PsoConfig(swarm_size=0)
        with pytest.raises(ConfigError):
            PsoConfig(iterations=0)
        with pytest.raises(ConfigError):
            PsoConfig(threads=0)
