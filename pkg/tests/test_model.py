import json

import numpy as np
import pytest

from wtanet import (
    EmotionalUnit,
    ExpansionSpec,
    WtaModel,
    expand,
    forward,
    load_model,
    model_from_dict,
    model_to_dict,
    predict_batch,
    save_model,
)


def raw_passthrough_spec(n):
    return ExpansionSpec(input_dim=n, order=0, include_bias=False)


def random_model(rng, n=2, order=2, n_units=3, **kwargs):
    spec = ExpansionSpec(input_dim=n, order=order)
    m = n * (2 * order + 1) + 1
    return WtaModel(
        spec,
        rng.uniform(-1, 1, size=(n_units, m)),
        rng.uniform(-1, 1, size=(n_units, m)),
        **kwargs,
    )


class TestForward:
    def test_hand_worked_example(self):
        spec = raw_passthrough_spec(2)
        model = WtaModel(spec, [[1, 0], [0, 1]], np.zeros((2, 2)))
        pred = forward(model, [0.2, 0.9])
        np.testing.assert_array_equal(pred.excitation, [0.2, 0.9])
        assert pred.winner == 1
        assert pred.output == 0.9

    def test_tie_breaks_to_smallest_index(self):
        spec = raw_passthrough_spec(2)
        model = WtaModel(spec, [[1, 1], [1, 1]], np.zeros((2, 2)))
        assert forward(model, [0.3, 0.4]).winner == 0

    def test_inhibition_subtracts_from_winner(self):
        spec = raw_passthrough_spec(1)
        model = WtaModel(spec, [[2.0]], [[0.5]])
        assert forward(model, [1.0]).output == 1.5

    def test_logistic_activation(self):
        spec = raw_passthrough_spec(1)
        model = WtaModel(spec, [[0.0]], [[0.0]], output_activation="logistic")
        assert forward(model, [5.0]).output == 0.5

    def test_classification_outputs_winner_class(self):
        spec = raw_passthrough_spec(2)
        model = WtaModel(
            spec, [[1, 0], [0, 1]], np.zeros((2, 2)),
            mode="classification", class_of_unit=[4, 9],
        )
        assert forward(model, [0.1, 0.8]).output == 9
        assert forward(model, [0.8, 0.1]).output == 4

    def test_dimension_mismatch_names_dims(self):
        rng = np.random.default_rng(0)
        model = random_model(rng, n=3)
        with pytest.raises(ValueError, match="expected 3"):
            forward(model, [0.1, 0.2])

    def test_purity_bit_identical(self):
        rng = np.random.default_rng(1)
        model = random_model(rng)
        s = rng.uniform(0, 1, size=2)
        a = forward(model, s)
        b = forward(model, s)
        assert a.output == b.output
        assert a.excitation.tobytes() == b.excitation.tobytes()


class TestCompetitionInvariances:
    def test_scaling_excitatory_weights_keeps_winner(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            model = random_model(rng, n_units=int(rng.integers(1, 6)))
            s = rng.uniform(0, 1, size=2)
            base = forward(model, s).winner
            c = float(rng.uniform(0.01, 20))
            scaled = WtaModel(
                model.spec, model.excitatory * c, model.inhibitory,
            )
            assert forward(scaled, s).winner == base

    def test_perturbing_losers_leaves_prediction_unchanged(self):
        rng = np.random.default_rng(3)
        checked = 0
        while checked < 200:
            model = random_model(rng, n_units=4)
            s = rng.uniform(0, 1, size=2)
            pred = random_forward = forward(model, s)
            winner = pred.winner
            loser = int(rng.integers(0, 4))
            if loser == winner:
                continue
            p = expand(model.spec, s)
            v = model.excitatory.copy()
            w = model.inhibitory.copy()
            v[loser] += rng.uniform(-0.5, 0.5, size=v.shape[1])
            w[loser] = rng.uniform(-1, 1, size=w.shape[1])
            if float(v[loser] @ p) >= float(pred.excitation[winner]):
                continue  # perturbation must keep the loser strictly below
            perturbed = forward(WtaModel(model.spec, v, w), s)
            assert perturbed.winner == winner
            assert perturbed.output == pred.output
            checked += 1

    def test_single_unit_reduces_to_affine_in_basis(self):
        rng = np.random.default_rng(4)
        spec = ExpansionSpec(input_dim=1, order=0)
        for _ in range(100):
            v = rng.uniform(-1, 1, size=(1, 2))
            w = rng.uniform(-1, 1, size=(1, 2))
            model = WtaModel(spec, v, w)
            s = rng.uniform(0, 1, size=1)
            # K=0 expansion plus one linear unit is plain affine regression
            expected = (v[0, 0] - w[0, 0]) * s[0] + (v[0, 1] - w[0, 1])
            assert forward(model, s).output == pytest.approx(expected, abs=1e-12)


class TestPredictBatch:
    def test_empty_sequence(self):
        rng = np.random.default_rng(5)
        assert predict_batch(random_model(rng), []) == []

    def test_singleton_matches_forward(self):
        rng = np.random.default_rng(6)
        model = random_model(rng)
        s = rng.uniform(0, 1, size=2)
        batch = predict_batch(model, [s])
        single = forward(model, s)
        assert batch[0].output == single.output
        assert batch[0].winner == single.winner

    def test_batch_equals_loop(self):
        rng = np.random.default_rng(7)
        model = random_model(rng)
        inputs = rng.uniform(0, 1, size=(100, 2))
        batch = predict_batch(model, inputs)
        for i in range(100):
            assert batch[i].output == forward(model, inputs[i]).output

    def test_first_invalid_input_aborts_with_index(self):
        rng = np.random.default_rng(8)
        model = random_model(rng)
        inputs = [np.array([0.1, 0.2]), np.array([np.nan, 0.2])]
        with pytest.raises(ValueError, match="input 1"):
            predict_batch(model, inputs)


class TestModelValidation:
    def test_unit_weight_lengths_must_match_spec(self):
        spec = ExpansionSpec(input_dim=2, order=1)
        with pytest.raises(ValueError, match=r"\(M, 7\)"):
            WtaModel(spec, np.zeros((2, 5)), np.zeros((2, 5)))

    def test_classification_requires_unit_classes(self):
        spec = raw_passthrough_spec(2)
        with pytest.raises(ValueError, match="class_of_unit"):
            WtaModel(spec, np.zeros((2, 2)), np.zeros((2, 2)), mode="classification")

    def test_non_finite_weights_rejected(self):
        spec = raw_passthrough_spec(1)
        with pytest.raises(ValueError, match="finite"):
            WtaModel(spec, [[np.inf]], [[0.0]])

    def test_units_view(self):
        rng = np.random.default_rng(9)
        model = random_model(rng, n_units=2)
        units = model.units
        assert len(units) == 2
        assert isinstance(units[0], EmotionalUnit)
        np.testing.assert_array_equal(units[1].v, model.excitatory[1])


class TestSerialization:
    def test_round_trip_reproduces_forward_bit_exactly(self, tmp_path):
        rng = np.random.default_rng(10)
        model = random_model(rng, n=2, order=3, n_units=4)
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        for _ in range(50):
            s = rng.uniform(0, 1, size=2)
            a = forward(model, s)
            b = forward(loaded, s)
            assert a.output == b.output and a.winner == b.winner

    def test_classification_round_trip_keeps_labels(self, tmp_path):
        spec = raw_passthrough_spec(2)
        model = WtaModel(
            spec, [[1, 0], [0, 1]], np.zeros((2, 2)),
            mode="classification", class_of_unit=[0, 1],
            class_names=["cat", "dog"],
        )
        path = tmp_path / "clf.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.class_of_unit == (0, 1)
        assert loaded.class_names == ("cat", "dog")

    def test_save_is_byte_stable(self, tmp_path):
        rng = np.random.default_rng(11)
        model = random_model(rng)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_model(model, p1)
        save_model(model, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_format_version_checked(self):
        doc = model_to_dict(WtaModel(
            raw_passthrough_spec(1), [[1.0]], [[0.0]]
        ))
        doc["format_version"] = 99
        with pytest.raises(ValueError, match="format_version"):
            model_from_dict(doc)

    def test_dict_round_trip_is_exact(self):
        rng = np.random.default_rng(12)
        model = random_model(rng)
        clone = model_from_dict(json.loads(json.dumps(model_to_dict(model))))
        assert clone.excitatory.tobytes() == model.excitatory.tobytes()
        assert clone.inhibitory.tobytes() == model.inhibitory.tobytes()
