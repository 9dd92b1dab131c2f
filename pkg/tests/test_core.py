"""Engine behaviour: configuration, sampling, single steps, and full runs."""

from dataclasses import dataclass

import numpy as np
import pytest
from scipy import stats

from eda_lab import (
    DEFAULT_ITERATION_CAP,
    CgaConfig,
    ConfigurationError,
    Relation,
    StepKind,
    init,
    make_comparator,
    run,
    sample_offspring,
    step,
    transition_kernel,
)
from eda_lab.benchmarks import Comparator, ComparisonOutcome


@dataclass(frozen=True)
class _ForcedComparator(Comparator):
    """Test double that declares a fixed winner regardless of the strings."""

    relation: Relation = Relation.X_WINS

    def compare(self, x, y, rng):
        return ComparisonOutcome(self.relation)


def _replay_state(n, k, pbar, freqs, x_want, y_want, max_seed=200_000):
    """Fresh state whose first two offspring equal the wanted pair.

    Scans seeds until the sampler produces the pair, then rebuilds the state
    so the caller replays it from an untouched stream.
    """
    x_want = np.asarray(x_want, dtype=bool)
    y_want = np.asarray(y_want, dtype=bool)
    for seed in range(max_seed):
        config = CgaConfig(n=n, k=k, pbar=pbar, seed=seed)
        state = init(config)
        if freqs is not None:
            state.freqs[:] = freqs
        x = sample_offspring(state)
        y = sample_offspring(state)
        if np.array_equal(x, x_want) and np.array_equal(y, y_want):
            fresh = init(config)
            if freqs is not None:
                fresh.freqs[:] = freqs
            return fresh
    pytest.fail("no seed produced the wanted offspring pair")


def test_init_starts_at_one_half():
    state = init(CgaConfig(n=4, k=10, seed=1))
    assert state.iteration == 0
    assert state.freqs.dtype == np.float64
    np.testing.assert_array_equal(state.freqs, np.full(4, 0.5))


def test_init_single_bit():
    state = init(CgaConfig(n=1, k=2, pbar=0.25, seed=0))
    np.testing.assert_array_equal(state.freqs, [0.5])


def test_margin_default_is_one_over_n():
    assert CgaConfig(n=300, k=10).margin == 1.0 / 300
    assert CgaConfig(n=300, k=10, pbar=0.05).margin == 0.05


def test_default_iteration_cap():
    assert DEFAULT_ITERATION_CAP == 200_000
    assert CgaConfig(n=5, k=2).iteration_cap == 200_000


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 0, "k": 10},
        {"n": 10, "k": 0.5},
        {"n": 10, "k": 10, "iteration_cap": 0},
        {"n": 10, "k": 10, "seed": -1},
        {"n": 10, "k": 10, "seed": 2**64},
        {"n": 10, "k": 10, "pbar": 0.6},
        {"n": 10, "k": 10, "pbar": 0.0},
        {"n": 10, "k": 10, "pbar": 0.5},
    ],
)
def test_config_rejects_bad_parameters(kwargs):
    with pytest.raises(ConfigurationError):
        CgaConfig(**kwargs)


def test_config_rejects_default_margin_below_n3():
    # 1/n >= 1/2 for n <= 2, so the default margin is only defined from n=3 on.
    with pytest.raises(ConfigurationError, match="pass pbar explicitly"):
        CgaConfig(n=2, k=10)
    assert CgaConfig(n=2, k=10, pbar=0.1).margin == 0.1
    assert CgaConfig(n=3, k=10).margin == pytest.approx(1 / 3)


def test_config_accepts_fractional_k():
    assert CgaConfig(n=5, k=2.5).k == 2.5
    assert CgaConfig(n=5, k=1).k == 1


def test_configuration_error_is_value_error():
    assert issubclass(ConfigurationError, ValueError)


def test_sampling_frequency_at_margin():
    # With every frequency pinned at pbar the per-bit one-rate is exactly
    # pbar; check the count over 10^6 Bernoulli draws at five sigma.
    pbar = 0.01
    state = init(CgaConfig(n=10, k=10, pbar=pbar, seed=3))
    state.freqs[:] = pbar
    draws = 100_000
    ones = sum(int(sample_offspring(state).sum()) for _ in range(draws))
    total = draws * 10
    sigma = np.sqrt(total * pbar * (1 - pbar))
    assert abs(ones - total * pbar) <= 5 * sigma


def test_all_ones_rate_near_upper_margin():
    # Frequencies at 1 - pbar with pbar = 1/(n ln^7 n) make the optimum
    # probability (1 - pbar)^n per offspring, which is nearly 1 for n=50.
    n = 50
    pbar = 1.0 / (n * np.log(n) ** 7)
    state = init(CgaConfig(n=n, k=10, pbar=pbar, seed=4))
    state.freqs[:] = 1 - pbar
    draws = 2000
    hits = sum(bool(sample_offspring(state).all()) for _ in range(draws))
    q = (1 - pbar) ** n
    assert hits >= draws * q - 5 * np.sqrt(draws * q * (1 - q))


def test_step_moves_disagreeing_bit_by_one_over_k():
    state = _replay_state(2, 10, 0.1, None, (1, 0), (0, 0))
    record = step(state, make_comparator("dynbv", 2))
    assert record.outcome.relation is Relation.X_WINS
    assert record.outcome.decisive_index == 0
    assert state.iteration == 1
    assert state.freqs[0] == 0.5 + 1.0 / 10
    assert state.freqs[1] == 0.5
    np.testing.assert_array_equal(record.step_kind, [StepKind.SIGNAL, StepKind.NONE])


def test_step_clamps_at_upper_margin():
    freqs = [1.0 - 0.1, 0.5]
    state = _replay_state(2, 10, 0.1, freqs, (1, 0), (0, 0))
    step(state, make_comparator("dynbv", 2))
    assert state.freqs[0] == 1.0 - 0.1
    assert state.freqs[1] == 0.5


def test_step_clamps_at_lower_margin():
    freqs = [0.1, 0.5]
    state = _replay_state(2, 10, 0.1, freqs, (1, 0), (0, 0))
    record = step(state, _ForcedComparator(kind="forced", n=2, relation=Relation.Y_WINS))
    assert record.outcome.relation is Relation.Y_WINS
    assert state.freqs[0] == 0.1
    assert state.freqs[1] == 0.5


def test_value_tie_changes_nothing_but_counts():
    state = _replay_state(2, 10, 0.1, None, (1, 0), (0, 1))
    record = step(state, make_comparator("onemax", 2))
    assert record.outcome.relation is Relation.TIE
    assert state.iteration == 1
    np.testing.assert_array_equal(state.freqs, [0.5, 0.5])
    np.testing.assert_array_equal(record.step_kind, [StepKind.NONE, StepKind.NONE])


def test_identical_offspring_tag_none_everywhere():
    state = _replay_state(2, 10, 0.1, None, (1, 0), (1, 0))
    record = step(state, make_comparator("dynbv", 2))
    assert record.outcome.relation is Relation.TIE
    assert not record.optimum_sampled
    np.testing.assert_array_equal(state.freqs, [0.5, 0.5])
    assert (record.step_kind == StepKind.NONE).all()


def test_optimum_flag_reports_all_ones():
    state = _replay_state(2, 10, 0.1, None, (1, 1), (0, 1))
    record = step(state, make_comparator("onemax", 2))
    assert record.optimum_sampled
    # The update is still applied: bit 0 moves toward the winner's one.
    assert state.freqs[0] == 0.5 + 1.0 / 10


def test_step_rejects_dimension_mismatch():
    state = init(CgaConfig(n=3, k=10, seed=0))
    with pytest.raises(ValueError, match="n=4"):
        step(state, make_comparator("dynbv", 4))


def test_run_rejects_dimension_mismatch():
    with pytest.raises(ValueError, match="n=4"):
        run(CgaConfig(n=3, k=10, seed=0), make_comparator("dynbv", 4))


def test_margins_and_step_sizes_hold_along_a_run():
    config = CgaConfig(n=12, k=7, pbar=0.08, seed=5)
    state = init(config)
    comparator = make_comparator("dynbv", 12)
    stride = 1.0 / config.k
    for _ in range(1500):
        before = state.freqs.copy()
        record = step(state, comparator)
        delta = state.freqs - before
        assert (state.freqs >= config.margin).all()
        assert (state.freqs <= 1 - config.margin).all()
        assert (np.abs(delta) <= stride + 1e-12).all()
        # Bits that agreed this iteration never move.
        agree = record.x == record.y
        assert (delta[agree] == 0).all()


def test_frequencies_stay_on_the_step_lattice():
    # Away from the margins every frequency is 1/2 plus an integer number of
    # 1/k strides; accumulated float error stays below 1e-9 per iteration.
    config = CgaConfig(n=30, k=50, pbar=0.001, seed=11)
    state = init(config)
    comparator = make_comparator("dynbv", 30)
    steps = 200
    for _ in range(steps):
        step(state, comparator)
    stride = 1.0 / config.k
    lo, hi = config.margin, 1 - config.margin
    offsets = (state.freqs - 0.5) / stride
    lattice_dist = np.abs(state.freqs - (0.5 + np.round(offsets) * stride))
    on_lattice = lattice_dist <= 1e-9 * steps
    at_bound = (state.freqs == lo) | (state.freqs == hi)
    assert (on_lattice | at_bound).all()


@pytest.mark.parametrize("benchmark", ["dynbv", "dynbv-exact", "onemax", "binval"])
def test_runs_replay_bit_identically(benchmark):
    config = CgaConfig(n=20, k=5, pbar=0.03, iteration_cap=3000, seed=321)
    first = run(config, benchmark)
    second = run(config, benchmark)
    assert first == second


@pytest.mark.parametrize("benchmark", ["dynbv", "dynbv-exact", "onemax", "binval"])
def test_fast_and_instrumented_paths_agree(benchmark):
    config = CgaConfig(n=15, k=4, pbar=0.05, iteration_cap=2500, seed=123)
    fast = run(config, benchmark)
    instrumented, metrics = run(config, benchmark, return_metrics=True)
    assert fast == instrumented
    assert metrics.min_freq.min() >= config.margin


def test_run_matches_manual_stepping():
    config = CgaConfig(n=18, k=6, pbar=0.05, iteration_cap=4000, seed=9)
    state = init(config)
    comparator = make_comparator("dynbv", 18)
    min_freq = state.freqs.copy()
    found = False
    while state.iteration < config.iteration_cap:
        record = step(state, comparator)
        np.minimum(min_freq, state.freqs, out=min_freq)
        if record.optimum_sampled:
            found = True
            break
    result, metrics = run(config, "dynbv", return_metrics=True)
    assert result.iterations_used == state.iteration
    assert result.optimum_found == found
    np.testing.assert_array_equal(metrics.freqs, state.freqs)
    np.testing.assert_array_equal(metrics.min_freq, min_freq)
    assert result == run(config, "dynbv")


def test_single_bit_run_terminates_fast():
    result = run(CgaConfig(n=1, k=4, pbar=0.25, seed=2), "onemax")
    assert result.optimum_found
    assert not result.hit_cap
    assert result.iterations_used <= 50


def test_cap_is_exclusive_with_optimum():
    capped = run(CgaConfig(n=300, k=80, iteration_cap=10, seed=7), "dynbv")
    assert capped.iterations_used == 10
    assert capped.hit_cap and not capped.optimum_found
    solved = run(CgaConfig(n=1, k=4, pbar=0.25, seed=2), "onemax")
    for result in (capped, solved):
        assert result.optimum_found != result.hit_cap


def test_run_accepts_comparator_instance():
    config = CgaConfig(n=10, k=3, iteration_cap=500, seed=44)
    assert run(config, make_comparator("onemax", 10)) == run(config, "onemax")


def test_one_step_distribution_matches_kernel():
    # Freeze an interior state, execute many single dynamic-binval steps from
    # it, and chi-square the up/down/stay counts of one bit against the
    # analytic kernel.
    n = 8
    k = 25.0
    rng = np.random.default_rng(12345)
    freqs = rng.uniform(0.3, 0.7, size=n)
    bit = 3
    kernel = transition_kernel(freqs, bit, k)
    config = CgaConfig(n=n, k=k, pbar=0.001, seed=99)
    state = init(config)
    comparator = make_comparator("dynbv", n)
    trials = 30_000
    counts = np.zeros(3, dtype=np.int64)  # up, down, stay
    for _ in range(trials):
        state.freqs[:] = freqs
        step(state, comparator)
        moved = state.freqs[bit] - freqs[bit]
        counts[0 if moved > 0 else (1 if moved < 0 else 2)] += 1
    expected = trials * np.array([kernel.p_up, kernel.p_down, kernel.p_stay])
    assert stats.chisquare(counts, expected).pvalue >= 1e-3
