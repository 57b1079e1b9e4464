"""Config validation and request logic, exercised without a socket."""

import numpy as np
import pytest

from finsift_bridge import (
    ASPECT_LABELS,
    Bridge,
    BridgeConfig,
    ConfigError,
    HashBackend,
    load_answers,
    load_backend,
    validate_answers,
)


def stub(**kwargs) -> Bridge:
    return Bridge(BridgeConfig(model="hash-8", **kwargs))


class TestBridgeConfig:
    def test_defaults(self):
        config = BridgeConfig()
        assert config.model == "hash-64"
        assert config.max_batch == 64
        assert config.normalize is True
        assert config.host == "127.0.0.1"

    def test_batch_size_floor(self):
        with pytest.raises(ConfigError):
            BridgeConfig(max_batch=0)

    def test_inline_and_file_answers_conflict(self, tmp_path):
        path = tmp_path / "a.json"
        path.write_text("{}")
        with pytest.raises(ConfigError):
            BridgeConfig(answers={"aspect": ["Transactions"]}, answers_path=path)


class TestBackends:
    def test_hash_id_parses_dims(self):
        backend = load_backend("hash-32")
        assert backend.dims == 32
        assert backend.name == "hash-32"

    def test_same_text_same_vector(self):
        backend = HashBackend("hash-8", 8)
        a, b = backend.encode(["loan approval", "loan approval"])
        assert a == b

    def test_different_models_differ(self):
        # model identity participates in the seed
        a = HashBackend("hash-8", 8).encode(["loan"])[0]
        b = HashBackend("other-model", 8).encode(["loan"])[0]
        assert a != b

    def test_unit_norm_when_normalizing(self):
        vecs = HashBackend("hash-8", 8, normalize=True).encode(["x", "y"])
        for v in vecs:
            assert abs(np.linalg.norm(v) - 1.0) <= 1e-4

    def test_raw_norm_without_normalizing(self):
        vecs = HashBackend("hash-8", 8, normalize=False).encode(["x"])
        assert abs(np.linalg.norm(vecs[0]) - 1.0) > 1e-4

    def test_unknown_transformer_model_fails_startup(self):
        with pytest.raises(ConfigError):
            load_backend("no/such-model-anywhere")


class TestAnswers:
    def test_valid_round_trip(self):
        checked = validate_answers({"aspect": list(ASPECT_LABELS)})
        assert checked["aspect"] == list(ASPECT_LABELS)

    def test_foreign_aspect_label_refused(self):
        """Startup validation, not request-time surprise."""
        with pytest.raises(ConfigError, match="taxonomy"):
            validate_answers({"aspect": ["Sentiment"]})

    def test_unknown_task_refused(self):
        with pytest.raises(ConfigError):
            validate_answers({"moderation": ["ok"]})

    def test_empty_list_refused(self):
        with pytest.raises(ConfigError):
            validate_answers({"aspect": []})

    def test_file_loading(self, tmp_path):
        path = tmp_path / "answers.json"
        path.write_text('{"relevance": ["Relevant"]}')
        assert load_answers(path) == {"relevance": ["Relevant"]}

    def test_bad_file_refused(self, tmp_path):
        path = tmp_path / "answers.json"
        path.write_text("not json")
        with pytest.raises(ConfigError):
            load_answers(path)

    def test_bad_file_fails_bridge_startup(self, tmp_path):
        path = tmp_path / "answers.json"
        path.write_text('{"aspect": ["Sentiment"]}')
        with pytest.raises(ConfigError):
            Bridge(BridgeConfig(model="hash-8", answers_path=path))


class TestEmbedRequest:
    def test_happy_path_shape(self):
        code, body = stub().embed_request({"texts": ["a", "b"]})
        assert code == 200
        assert len(body["vectors"]) == 2
        assert body["dims"] == 8
        assert body["model"] == "hash-8"

    def test_order_preserved(self):
        bridge = stub()
        _, fwd = bridge.embed_request({"texts": ["a", "b"]})
        _, rev = bridge.embed_request({"texts": ["b", "a"]})
        assert fwd["vectors"] == rev["vectors"][::-1]

    def test_empty_batch_rejected(self):
        code, body = stub().embed_request({"texts": []})
        assert code == 400

    def test_non_string_rejected(self):
        code, _ = stub().embed_request({"texts": ["a", 3]})
        assert code == 400

    def test_oversize_batch_gets_413(self):
        code, body = stub(max_batch=2).embed_request({"texts": ["a", "b", "c"]})
        assert code == 413
        assert "max 2" in body["error"]

    def test_unknown_model_lists_available(self):
        code, body = stub().embed_request({"texts": ["a"], "model": "gpt-9"})
        assert code == 400
        assert body["available"] == ["hash-8"]

    def test_matching_model_accepted(self):
        code, _ = stub().embed_request({"texts": ["a"], "model": "hash-8"})
        assert code == 200

    def test_deterministic_across_requests(self):
        bridge = stub()
        _, first = bridge.embed_request({"texts": ["loan approval"]})
        _, second = bridge.embed_request({"texts": ["loan approval"]})
        assert first["vectors"] == second["vectors"]


class TestClassifyRequest:
    ANSWERS = {"aspect": list(ASPECT_LABELS), "relevance": ["Relevant", "Irrelevant"]}

    def test_labels_in_order(self):
        code, body = stub(answers=self.ANSWERS).classify_request(
            {"task": "aspect", "texts": ["x"] * 3}
        )
        assert code == 200
        assert body["labels"] == list(ASPECT_LABELS[:3])
        assert body["confidences"] == [1.0, 1.0, 1.0]

    def test_six_label_round_trip(self):
        _, body = stub(answers=self.ANSWERS).classify_request(
            {"task": "aspect", "texts": ["x"] * 6}
        )
        assert body["labels"] == list(ASPECT_LABELS)

    def test_script_cycles_past_its_length(self):
        _, body = stub(answers={"relevance": ["Relevant", "Irrelevant"]}).classify_request(
            {"task": "relevance", "texts": ["x"] * 5}
        )
        assert body["labels"] == ["Relevant", "Irrelevant"] * 2 + ["Relevant"]

    def test_unknown_task_rejected(self):
        code, body = stub(answers=self.ANSWERS).classify_request(
            {"task": "sentiment", "texts": ["x"]}
        )
        assert code == 400
        assert body["available"] == ["relevance", "aspect"]

    def test_unconfigured_task_rejected(self):
        code, _ = stub().classify_request({"task": "aspect", "texts": ["x"]})
        assert code == 400
