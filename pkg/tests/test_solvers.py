import numpy as np
import pytest

from isinglearn import (
    AnnealSchedule,
    CapacityLimit,
    ExactSolver,
    IsingMachine,
    IsingProblem,
    SimulatedAnnealer,
    SpinConfiguration,
    Topology,
    UnknownBackend,
    complete_topology,
    energy,
    exact_solve,
    make_backend,
    sa_solve,
)


def pair(bias0, bias1, coupling):
    return IsingProblem(Topology(2, ((0, 1),)), [bias0, bias1], [coupling])


def random_problem(n, seed):
    rng = np.random.default_rng(seed)
    topo = complete_topology(n)
    return IsingProblem(topo, rng.uniform(-1, 1, n), rng.uniform(-1, 1, topo.n_edges))


class TestExactSolve:
    def test_antiferromagnetic_pair_tie_break(self):
        result = exact_solve(pair(0.0, 0.0, 1.0))
        assert result.configuration.spins.tolist() == [-1, 1]
        assert result.energy == -1.0

    def test_biased_pair(self):
        result = exact_solve(pair(2.0, 0.0, 1.0))
        assert result.configuration.spins.tolist() == [-1, 1]
        assert result.energy == -3.0

    def test_zero_coupling_closed_form(self):
        result = exact_solve(pair(1.0, -2.0, 0.0))
        assert result.energy == -3.0
        assert result.configuration.spins.tolist() == [-1, 1]

    def test_capacity_guard_suggests_annealer(self):
        topo = Topology(25, ())
        with pytest.raises(CapacityLimit, match="simulated-annealing"):
            exact_solve(IsingProblem(topo, np.zeros(25), ()))

    def test_energy_recomputable(self):
        for seed in range(5):
            p = random_problem(8, seed)
            result = exact_solve(p)
            assert result.energy == energy(p, result.configuration)

    def test_chunked_enumeration_matches_small(self):
        # n above the chunk width exercises the multi-chunk path
        p = random_problem(15, 3)
        result = exact_solve(p)
        brute = min(
            energy(p, [(m >> (14 - i) & 1) * 2 - 1 for i in range(15)])
            for m in range(1 << 15)
        )
        assert result.energy == brute


class TestSimulatedAnnealing:
    def test_pair_ground_energy_any_seed(self):
        p = pair(0.0, 0.0, 1.0)
        for seed in range(10):
            assert sa_solve(p, seed=seed).energy == -1.0

    def test_greedy_descent_single_flip(self):
        p = IsingProblem(Topology(1, ()), [5.0], ())
        schedule = AnnealSchedule(t_initial=1e-9, t_final=1e-12, sweeps=1)
        result = sa_solve(p, schedule, seed=0, initial=SpinConfiguration([1]))
        assert result.configuration.spins.tolist() == [-1]
        assert result.energy == -5.0

    def test_deterministic_for_fixed_seed(self):
        p = random_problem(10, 0)
        a = sa_solve(p, seed=123)
        b = sa_solve(p, seed=123)
        assert a.energy == b.energy
        assert a.configuration == b.configuration

    def test_never_below_exact(self):
        for seed in range(20):
            p = random_problem(9, seed)
            assert sa_solve(p, seed=seed).energy >= exact_solve(p).energy

    def test_default_schedule_finds_small_ground_states(self):
        hits = sum(
            sa_solve(random_problem(8, s), seed=s).energy
            == exact_solve(random_problem(8, s)).energy
            for s in range(20)
        )
        assert hits >= 19

    def test_energy_recomputable(self):
        p = random_problem(12, 1)
        result = sa_solve(p, seed=5)
        assert result.energy == energy(p, result.configuration)

    def test_metadata(self):
        result = sa_solve(random_problem(4, 2), seed=9)
        assert result.backend == "simulated-annealing"
        assert result.seed == 9
        assert result.wall_time > 0


class TestAnnealSchedule:
    def test_requires_positive_decreasing_temperatures(self):
        with pytest.raises(ValueError):
            AnnealSchedule(t_initial=-1.0, t_final=0.5)
        with pytest.raises(ValueError):
            AnnealSchedule(t_initial=1.0, t_final=2.0)
        with pytest.raises(ValueError):
            AnnealSchedule(t_initial=1.0, t_final=0.5, sweeps=0)

    def test_geometric_cooling_hits_final_temperature(self):
        s = AnnealSchedule(t_initial=8.0, t_final=0.002, sweeps=500)
        assert s.t_initial * s.cooling ** (s.sweeps - 1) == pytest.approx(s.t_final)

    def test_default_scales_with_coefficients(self):
        p = pair(0.5, -3.0, 1.0)
        s = AnnealSchedule.for_problem(p)
        assert s.t_initial == 30.0
        assert s.t_final == pytest.approx(0.03)
        assert AnnealSchedule.for_problem(pair(0.1, 0.1, 0.1)).t_initial == 10.0


class TestBackends:
    def test_exact_backend(self):
        backend = make_backend("exact", {})
        assert isinstance(backend, IsingMachine)
        result = backend.solve(pair(2.0, 0.0, 1.0), seed=4)
        assert result.energy == -3.0
        assert result.seed == 4

    def test_sa_backend_with_params(self):
        backend = make_backend("simulated-annealing", {"sweeps": 1000})
        assert isinstance(backend, IsingMachine)
        assert backend.sweeps == 1000
        assert backend.solve(pair(0.0, 0.0, 1.0), seed=0).energy == -1.0

    def test_unknown_backend_lists_registered(self):
        with pytest.raises(UnknownBackend, match="exact, simulated-annealing"):
            make_backend("quantum", {})

    def test_unknown_param_rejected_by_name(self):
        with pytest.raises(ValueError, match="temperature"):
            make_backend("simulated-annealing", {"temperature": 3.0})
        with pytest.raises(ValueError, match="sweeps"):
            make_backend("exact", {"sweeps": 10})

    def test_same_problem_and_seed_reproduces(self):
        backend = make_backend("simulated-annealing", {})
        p = random_problem(10, 5)
        first = backend.solve(p, seed=11)
        second = backend.solve(p, seed=11)
        assert first.energy == second.energy
        assert first.configuration == second.configuration

    def test_multiple_reads_keep_best(self):
        p = random_problem(12, 8)
        single = make_backend("simulated-annealing", {"sweeps": 30})
        multi = make_backend("simulated-annealing", {"sweeps": 30, "reads": 8})
        seeds = range(10)
        best_single = [single.solve(p, seed=s).energy for s in seeds]
        best_multi = [multi.solve(p, seed=s).energy for s in seeds]
        assert all(m <= s for m, s in zip(best_multi, best_single))

    def test_explicit_temperatures(self):
        backend = make_backend(
            "simulated-annealing", {"t_initial": 5.0, "t_final": 0.01, "sweeps": 200}
        )
        assert backend.solve(pair(0.0, 0.0, 1.0), seed=1).energy == -1.0
