"""Wire-protocol validation for the external classifier client."""

import pytest

from finsift.client import ClassifierClient
from finsift.errors import ArgumentError, RemoteError


class TestClassify:
    def test_labels_round_trip_in_order(self, classify_server):
        classify_server.push({"labels": ["relevant", "irrelevant", "relevant"]})
        client = ClassifierClient(classify_server.endpoint)
        got = client.classify("relevance", ["a", "b", "c"])
        assert got == [("relevant", None), ("irrelevant", None), ("relevant", None)]
        assert classify_server.seen == [
            {"task": "relevance", "texts": ["a", "b", "c"]}
        ]

    def test_confidences_attached(self, classify_server):
        classify_server.push({"labels": ["relevant"], "confidences": [0.83]})
        client = ClassifierClient(classify_server.endpoint)
        assert client.classify("relevance", ["x"]) == [("relevant", 0.83)]

    def test_empty_input_skips_network(self, classify_server):
        client = ClassifierClient(classify_server.endpoint)
        assert client.classify("aspect", []) == []
        assert classify_server.seen == []

    def test_unknown_task_rejected_locally(self, classify_server):
        client = ClassifierClient(classify_server.endpoint)
        with pytest.raises(ArgumentError):
            client.classify("sentiment", ["x"])
        assert classify_server.seen == []

    def test_label_count_mismatch(self, classify_server):
        classify_server.push({"labels": ["relevant"]})
        client = ClassifierClient(classify_server.endpoint)
        with pytest.raises(RemoteError):
            client.classify("relevance", ["a", "b"])

    def test_missing_labels_field(self, classify_server):
        classify_server.push({"result": "ok"})
        client = ClassifierClient(classify_server.endpoint)
        with pytest.raises(RemoteError):
            client.classify("relevance", ["a"])

    def test_confidence_out_of_range(self, classify_server):
        classify_server.push({"labels": ["relevant"], "confidences": [1.2]})
        client = ClassifierClient(classify_server.endpoint)
        with pytest.raises(RemoteError):
            client.classify("relevance", ["a"])

    def test_confidence_length_mismatch(self, classify_server):
        classify_server.push({"labels": ["relevant", "relevant"], "confidences": [0.5]})
        client = ClassifierClient(classify_server.endpoint)
        with pytest.raises(RemoteError):
            client.classify("relevance", ["a", "b"])

    def test_http_error(self, classify_server):
        client = ClassifierClient(classify_server.endpoint)  # nothing scripted -> 500
        with pytest.raises(RemoteError):
            client.classify("relevance", ["a"])

    def test_invalid_json_body(self, classify_server):
        classify_server.push(b"not json {")
        client = ClassifierClient(classify_server.endpoint)
        with pytest.raises(RemoteError):
            client.classify("relevance", ["a"])

    def test_unreachable_endpoint(self):
        client = ClassifierClient("http://127.0.0.1:9", timeout=0.3)
        with pytest.raises(RemoteError):
            client.classify("relevance", ["a"])

    def test_empty_endpoint_rejected(self):
        with pytest.raises(ArgumentError):
            ClassifierClient("")
