import numpy as np
import pytest

from wtanet import (
    ExpansionSpec,
    FitnessEvaluator,
    GaConfig,
    ModelShape,
    WtaModel,
    decode,
    encode,
    evolve_generation,
    expand,
    fitness,
    gen_function,
    gen_noisy,
    train,
)


def tiny_dataset(seed=0, n=20):
    return gen_function("f1", n, seed=seed)


def tiny_shape(order=1, n_units=2):
    return ModelShape(spec=ExpansionSpec(input_dim=1, order=order), n_units=n_units)


class TestEncodeDecode:
    def test_gene_order_by_definition(self):
        spec = ExpansionSpec(input_dim=1, order=0)
        model = WtaModel(spec, [[1.0, 2.0]], [[3.0, 4.0]])
        np.testing.assert_array_equal(encode(model), [1, 2, 3, 4])

    def test_round_trip_bit_identical(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            shape = ModelShape(
                spec=ExpansionSpec(
                    input_dim=int(rng.integers(1, 4)),
                    order=int(rng.integers(0, 4)),
                ),
                n_units=int(rng.integers(1, 5)),
            )
            genes = rng.uniform(-2, 2, size=shape.n_genes)
            back = encode(decode(genes, shape))
            assert back.tobytes() == genes.tobytes()

    def test_wrong_length_rejected(self):
        shape = ModelShape(
            spec=ExpansionSpec(input_dim=1, order=0, include_bias=False),
            n_units=1,
        )
        with pytest.raises(ValueError, match="expected 2"):
            decode(np.zeros(5), shape)


class TestFitness:
    def test_all_zero_chromosome_scores_negative_mean_square(self):
        ds = tiny_dataset()
        shape = tiny_shape()
        value = fitness(np.zeros(shape.n_genes), ds, shape)
        assert value == -float(np.mean(ds.targets ** 2))

    def test_perfect_predictor_scores_zero(self):
        # with K=0 and no bias the model is y = (v - w) * x; fit y = 2x
        spec = ExpansionSpec(input_dim=1, order=0, include_bias=False)
        shape = ModelShape(spec=spec, n_units=1)
        rng = np.random.default_rng(1)
        x = rng.uniform(0, 1, size=(30, 1))
        from wtanet import Dataset
        ds = Dataset(
            inputs=x, targets=2.0 * x[:, 0], mode="regression",
            normalization=np.array([[0.0, 1.0]]), provenance="test",
        )
        assert fitness(np.array([2.0, 0.0]), ds, shape) == 0.0

    def test_matches_hand_looped_mse(self):
        rng = np.random.default_rng(2)
        ds = tiny_dataset(seed=3, n=20)
        shape = tiny_shape(order=2, n_units=3)
        genes = rng.uniform(-1, 1, size=shape.n_genes)
        model = decode(genes, shape)
        total = 0.0
        for i in range(ds.n_samples):
            p = expand(shape.spec, ds.inputs[i])
            excitations = [float(np.dot(model.excitatory[j], p)) for j in range(3)]
            winner = excitations.index(max(excitations))
            out = excitations[winner] - float(np.dot(model.inhibitory[winner], p))
            total += (out - float(ds.targets[i])) ** 2
        assert fitness(genes, ds, shape) == pytest.approx(-total / 20, rel=1e-12)

    def test_classification_error_rate(self):
        rng = np.random.default_rng(3)
        from wtanet import Dataset
        x = rng.uniform(0, 1, size=(40, 2))
        y = (x[:, 0] > 0.5).astype(int)
        ds = Dataset(
            inputs=x, targets=y, mode="classification",
            normalization=np.array([[0.0, 1.0], [0.0, 1.0]]),
            provenance="test", label_names=("lo", "hi"),
        )
        spec = ExpansionSpec(input_dim=2, order=0)
        shape = ModelShape.for_classification(spec, n_classes=2)
        evaluator = FitnessEvaluator(ds, shape)
        genes = rng.uniform(-1, 1, size=shape.n_genes)
        model = decode(genes, shape)
        wrong = 0
        for i in range(ds.n_samples):
            p = expand(spec, ds.inputs[i])
            winner = int(np.argmax(model.excitatory @ p))
            if shape.class_of_unit[winner] != y[i]:
                wrong += 1
        assert evaluator(genes) == -wrong / 40

    def test_non_finite_prediction_gets_worst_sentinel(self):
        ds = tiny_dataset()
        shape = tiny_shape(order=0)
        genes = np.full(shape.n_genes, 1e308)  # finite genes, overflowing dot
        assert fitness(genes, ds, shape) == -np.inf


class TestEvolveGeneration:
    def test_blx_child_genes_stay_in_extended_interval(self):
        # parents 0 and 1 with alpha 0.5 bound children to [-0.5, 1.5]
        config = GaConfig(
            population_size=2, crossover_rate=1.0, blx_alpha=0.5,
            mutation_rate=0.0, elitism_count=0, tournament_size=1, seed=0,
        )
        population = np.array([[0.0] * 8, [1.0] * 8])
        rng = np.random.default_rng(0)
        for _ in range(200):
            children = evolve_generation(
                population, lambda genes: 0.0, config, rng
            )
            assert np.all(children >= -0.5) and np.all(children <= 1.5)

    def test_no_crossover_no_mutation_yields_clones(self):
        rng_pop = np.random.default_rng(4)
        population = rng_pop.uniform(-1, 1, size=(6, 4))
        config = GaConfig(
            population_size=6, crossover_rate=0.0, mutation_rate=0.5,
            mutation_sigma_initial=0.0, elitism_count=0, seed=0,
        )
        scores = {genes.tobytes(): float(i) for i, genes in enumerate(population)}
        children = evolve_generation(
            population, lambda genes: scores[genes.tobytes()],
            config, np.random.default_rng(1),
        )
        existing = {genes.tobytes() for genes in population}
        for child in children:
            assert child.tobytes() in existing

    def test_same_seed_same_next_population(self):
        rng_pop = np.random.default_rng(5)
        population = rng_pop.uniform(-1, 1, size=(8, 6))
        config = GaConfig(population_size=8, elitism_count=2, seed=0)
        evaluator = lambda genes: -float(np.sum(genes ** 2))
        a = evolve_generation(population, evaluator, config, np.random.default_rng(7))
        b = evolve_generation(population, evaluator, config, np.random.default_rng(7))
        assert a.tobytes() == b.tobytes()

    def test_elites_survive_unchanged(self):
        rng_pop = np.random.default_rng(6)
        population = rng_pop.uniform(-1, 1, size=(10, 4))
        evaluator = lambda genes: -float(np.sum(genes ** 2))
        fits = np.array([evaluator(g) for g in population])
        best_two = population[np.argsort(-fits, kind="stable")[:2]]
        config = GaConfig(population_size=10, elitism_count=2, seed=0)
        children = evolve_generation(
            population, evaluator, config, np.random.default_rng(8)
        )
        assert children[0].tobytes() == best_two[0].tobytes()
        assert children[1].tobytes() == best_two[1].tobytes()


class TestTrain:
    def test_zero_generations_returns_initial_best(self):
        ds = tiny_dataset()
        shape = tiny_shape()
        config = GaConfig(population_size=10, generations=0, seed=42)
        trace = train(shape, ds, config)
        assert trace.best_fitness == [] and trace.mean_fitness == []
        assert trace.generations_run == 0
        assert trace.best_generation == -1
        # reproduce the draw: best of the random initial population
        rng = np.random.default_rng(42)
        population = rng.uniform(-1, 1, size=(10, shape.n_genes))
        evaluator = FitnessEvaluator(ds, shape)
        fits = [evaluator(g) for g in population]
        assert trace.best_fitness_value == max(fits)

    def test_fixed_seed_reproduces_model_bit_exactly(self):
        ds = tiny_dataset(seed=9, n=30)
        shape = tiny_shape(order=2, n_units=2)
        config = GaConfig(population_size=12, generations=15, seed=7)
        a = train(shape, ds, config)
        b = train(shape, ds, config)
        assert a.best_genes.tobytes() == b.best_genes.tobytes()
        assert a.best_fitness == b.best_fitness
        assert a.model.excitatory.tobytes() == b.model.excitatory.tobytes()

    def test_parallel_fitness_equals_sequential(self):
        ds = tiny_dataset(seed=10, n=40)
        shape = tiny_shape(order=2, n_units=3)
        config = GaConfig(population_size=14, generations=12, seed=3)
        seq = train(shape, ds, config, n_jobs=1)
        par = train(shape, ds, config, n_jobs=4)
        assert seq.best_genes.tobytes() == par.best_genes.tobytes()
        assert seq.best_fitness == par.best_fitness
        assert seq.mean_fitness == par.mean_fitness

    def test_elitism_makes_best_fitness_non_decreasing(self):
        ds = tiny_dataset(seed=11, n=25)
        shape = tiny_shape(order=1, n_units=2)
        config = GaConfig(population_size=10, generations=40, seed=5)
        trace = train(shape, ds, config)
        diffs = np.diff(trace.best_fitness)
        assert np.all(diffs >= 0)

    def test_stagnation_stops_early(self):
        ds = tiny_dataset(seed=12, n=15)
        shape = tiny_shape(order=0, n_units=1)
        config = GaConfig(
            population_size=8, generations=500, seed=1,
            fitness_stagnation_patience=5, mutation_sigma_initial=0.0,
            crossover_rate=0.0, mutation_rate=0.0,
        )
        trace = train(shape, ds, config)
        # pure cloning cannot improve, so patience cuts the run short
        assert trace.stopped_early
        assert trace.generations_run <= 10

    def test_training_improves_over_initial_population(self):
        ds = gen_noisy("f1", 0.05, 60, seed=13)
        shape = ModelShape(spec=ExpansionSpec(input_dim=1, order=2), n_units=2)
        config = GaConfig(population_size=30, generations=60, seed=2)
        trace = train(shape, ds, config)
        assert trace.best_fitness[-1] > trace.best_fitness[0]
        assert trace.best_fitness_value >= -0.05

    def test_snapshot_cadence_records_best_genes(self):
        ds = tiny_dataset(seed=14, n=20)
        shape = tiny_shape()
        config = GaConfig(population_size=8, generations=20, seed=4)
        trace = train(shape, ds, config, snapshot_every=5)
        assert [gen for gen, _ in trace.snapshots] == [4, 9, 14, 19]
        # the last snapshot is the best-so-far chromosome at that point
        assert trace.snapshots[-1][1].tobytes() == trace.best_genes.tobytes()

    def test_empty_dataset_impossible_but_mode_mismatch_rejected(self):
        ds = tiny_dataset()
        spec = ExpansionSpec(input_dim=1, order=1)
        clf_shape = ModelShape.for_classification(spec, n_classes=2)
        with pytest.raises(ValueError, match="mode"):
            train(clf_shape, ds, GaConfig(population_size=4, generations=1))


class TestGaConfigValidation:
    def test_bad_values_rejected(self):
        with pytest.raises(ValueError):
            GaConfig(population_size=1)
        with pytest.raises(ValueError):
            GaConfig(elitism_count=60, population_size=60)
        with pytest.raises(ValueError):
            GaConfig(crossover_rate=1.5)
        with pytest.raises(ValueError):
            GaConfig(sigma_decay=0.0)

    def test_dict_round_trip(self):
        config = GaConfig(population_size=30, seed=11)
        clone = GaConfig.from_dict(config.to_dict())
        assert clone == config
