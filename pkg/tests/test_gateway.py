import json

import pytest
import requests

from svalign.gateway import (
    BackendConfig,
    BackendKind,
    BackendUnavailable,
    Effort,
    MalformedResponse,
    PathSample,
    PromptRequest,
    RemoteBackend,
    RetryPolicy,
    ScriptedBackend,
)


def make_request(**kwargs):
    defaults = dict(
        system_prompt="judge", user_content="item X", k=1,
        stage="check", item_id="x1",
    )
    defaults.update(kwargs)
    return PromptRequest(**defaults)


class TestPromptRequest:
    def test_rejects_empty_system_prompt(self):
        with pytest.raises(ValueError):
            make_request(system_prompt="")

    def test_rejects_nonpositive_k(self):
        with pytest.raises(ValueError):
            make_request(k=0)


class TestScriptedBackend:
    def test_keyed_verdicts(self):
        backend = ScriptedBackend(
            {"rules": [{"stage": "check", "item_id": "x1", "final": "1"}]}
        )
        samples = backend.sample_paths(make_request(k=3))
        assert [s.final_text for s in samples] == ["1", "1", "1"]

    def test_path_index_contract(self):
        backend = ScriptedBackend(
            {"rules": [{"final": ["a", "b", "c"], "trace": ["t0", "t1", "t2"]}]}
        )
        samples = backend.sample_paths(make_request(k=3))
        assert [s.path_index for s in samples] == [0, 1, 2]
        assert [s.final_text for s in samples] == ["a", "b", "c"]
        assert [s.reasoning_trace for s in samples] == ["t0", "t1", "t2"]

    def test_sample_count_matches_k(self):
        backend = ScriptedBackend({"default": {"final": "1"}})
        assert len(backend.sample_paths(make_request(k=5))) == 5

    def test_fixture_file_loading(self, tmp_path):
        path = tmp_path / "fixture.json"
        path.write_text(json.dumps({"default": {"final": "2", "trace": "why"}}))
        backend = ScriptedBackend(path)
        sample = backend.complete(make_request())
        assert sample == PathSample("why", "2", 0)

    def test_determinism(self):
        fixture = {"rules": [{"contains": "X", "final": "0 {hash8}"}]}
        first = ScriptedBackend(fixture).sample_paths(make_request(k=3))
        second = ScriptedBackend(fixture).sample_paths(make_request(k=3))
        assert first == second

    def test_hash_substitution_varies_with_content(self):
        backend = ScriptedBackend({"default": {"final": "r {hash8}"}})
        a = backend.complete(make_request(user_content="one"))
        b = backend.complete(make_request(user_content="two"))
        assert a.final_text != b.final_text
        assert a == backend.complete(make_request(user_content="one"))

    def test_first_matching_rule_wins(self):
        backend = ScriptedBackend(
            {
                "rules": [
                    {"contains": "refined", "final": "1"},
                    {"item_id": "x1", "final": "0"},
                ]
            }
        )
        assert backend.complete(make_request(user_content="refined X")).final_text == "1"
        assert backend.complete(make_request(user_content="plain X")).final_text == "0"

    def test_empty_reply_is_malformed(self):
        backend = ScriptedBackend({"default": {"final": ""}})
        with pytest.raises(MalformedResponse):
            backend.complete(make_request())

    def test_no_matching_rule_is_malformed(self):
        backend = ScriptedBackend({"rules": [{"stage": "other", "final": "1"}]})
        with pytest.raises(MalformedResponse):
            backend.complete(make_request())

    def test_complete_requires_k_1(self):
        backend = ScriptedBackend({"default": {"final": "1"}})
        with pytest.raises(ValueError):
            backend.complete(make_request(k=2))


class _FakeResponse:
    def __init__(self, status_code, body):
        self.status_code = status_code
        self._body = body
        self.text = json.dumps(body)

    def json(self):
        return self._body


class _FakeSession:
    def __init__(self, outcomes):
        self.outcomes = list(outcomes)
        self.calls = 0

    def post(self, *args, **kwargs):
        self.calls += 1
        outcome = self.outcomes.pop(0)
        if isinstance(outcome, Exception):
            raise outcome
        return outcome


def _chat_body(content, reasoning=None):
    message = {"content": content}
    if reasoning is not None:
        message["reasoning"] = reasoning
    return {"choices": [{"message": message}]}


def _remote(session, attempts=3):
    return RemoteBackend(
        endpoint="https://example.invalid/v1/chat/completions",
        model="judge-model",
        api_key="key",
        retry=RetryPolicy(max_attempts=attempts, backoff_seconds=0.0),
        session=session,
    )


class TestRemoteBackend:
    def test_retry_exhaustion(self):
        session = _FakeSession([requests.ConnectionError("down")] * 3)
        with pytest.raises(BackendUnavailable):
            _remote(session).complete(make_request())
        assert session.calls == 3

    def test_recovers_within_retry_budget(self):
        session = _FakeSession(
            [requests.ConnectionError("down"), _FakeResponse(200, _chat_body(" 1 ", "because"))]
        )
        sample = _remote(session).complete(make_request())
        assert sample.final_text == "1"
        assert sample.reasoning_trace == "because"

    def test_server_errors_are_retried(self):
        session = _FakeSession([_FakeResponse(503, {})] * 3)
        with pytest.raises(BackendUnavailable):
            _remote(session).complete(make_request())
        assert session.calls == 3

    def test_client_error_fails_fast(self):
        session = _FakeSession([_FakeResponse(401, {"error": "denied"})])
        with pytest.raises(BackendUnavailable):
            _remote(session).complete(make_request())
        assert session.calls == 1

    def test_malformed_body(self):
        session = _FakeSession([_FakeResponse(200, {"unexpected": True})])
        with pytest.raises(MalformedResponse):
            _remote(session).complete(make_request())

    def test_empty_content_is_malformed(self):
        session = _FakeSession([_FakeResponse(200, _chat_body(""))])
        with pytest.raises(MalformedResponse):
            _remote(session).complete(make_request())

    def test_k_independent_calls(self):
        session = _FakeSession(
            [_FakeResponse(200, _chat_body("1")), _FakeResponse(200, _chat_body("0"))]
        )
        samples = _remote(session).sample_paths(make_request(k=2))
        assert session.calls == 2
        assert [s.final_text for s in samples] == ["1", "0"]
        assert [s.path_index for s in samples] == [0, 1]


class TestBackendConfig:
    def test_scripted_requires_fixture(self):
        with pytest.raises(ValueError):
            BackendConfig(kind=BackendKind.SCRIPTED)

    def test_remote_requires_endpoint(self):
        with pytest.raises(ValueError):
            BackendConfig(kind=BackendKind.REMOTE)

    def test_build_scripted(self, tmp_path):
        path = tmp_path / "f.json"
        path.write_text(json.dumps({"default": {"final": "1"}}))
        backend = BackendConfig(
            kind=BackendKind.SCRIPTED, fixture_path=str(path)
        ).build()
        assert isinstance(backend, ScriptedBackend)

    def test_build_remote_reads_env_key(self, monkeypatch):
        monkeypatch.setenv("SVALIGN_API_KEY", "secret")
        backend = BackendConfig(
            kind=BackendKind.REMOTE, endpoint="https://example.invalid", model="m"
        ).build()
        assert isinstance(backend, RemoteBackend)
        assert backend.api_key == "secret"

    def test_effort_passthrough(self):
        assert Effort("high") is Effort.HIGH
