"""Shared fixtures: tiny corpora, hand-made word vectors, an HTTP stub."""

from __future__ import annotations

import json
import math
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from commentscore.corpus import CodeCommentPair, Language


GOOD_PAIRS = [
    CodeCommentPair(
        id="py-good",
        language=Language.PYTHON,
        code=(
            "def get_user(user_id):\n"
            "    if user_id is None:\n"
            "        raise ValueError(\"missing id\")\n"
            "    return registry.find(user_id)\n"
        ),
        comment=(
            "Gets a user record from the registry.\n\n"
            ":param user_id: the user identifier\n"
            ":returns: the stored user record\n"
            ":rtype: User\n"
            ":raises ValueError: if user_id is missing\n"
        ),
        label=True,
    ),
    CodeCommentPair(
        id="java-good",
        language=Language.JAVA,
        code="int add(int a, int b){ return a+b; }",
        comment="/** Adds two numbers. @param a first @param b second @return the sum */",
        label=True,
    ),
    CodeCommentPair(
        id="go-good",
        language=Language.GO,
        code="func Get(id string) (string, error) { return lookup(id), nil }",
        comment="// Get returns the stored record for id.",
        label=True,
    ),
    CodeCommentPair(
        id="cs-good",
        language=Language.CSHARP,
        code="public int Add(int a, int b) => a + b;",
        comment=(
            "/// <summary>Adds two integers.</summary>\n"
            "/// <param name=\"a\">first operand</param>\n"
            "/// <param name=\"b\">second operand</param>\n"
            "/// <returns>the sum</returns>"
        ),
        label=True,
    ),
    CodeCommentPair(
        id="js-good",
        language=Language.JAVASCRIPT,
        code="function scale(value, factor) {\n  return value * factor;\n}",
        comment=(
            "/**\n * Scales a value by a factor.\n"
            " * @param {number} value the input value\n"
            " * @param {number} factor the multiplier\n"
            " * @returns {number} the scaled value\n */"
        ),
        label=True,
    ),
]

BAD_PAIRS = [
    CodeCommentPair(
        id="py-bad",
        language=Language.PYTHON,
        code="def f(x):\n    return x * 2\n",
        comment="",
        label=False,
    ),
    CodeCommentPair(
        id="java-bad",
        language=Language.JAVA,
        code="void log(String msg){ System.out.println(msg); }",
        comment="/** x */",
        label=False,
    ),
    CodeCommentPair(
        id="go-bad",
        language=Language.GO,
        code="func Close() error { return c.conn.Close() }",
        comment="// shuts things down",
        label=False,
    ),
    CodeCommentPair(
        id="cs-bad",
        language=Language.CSHARP,
        code="public void Reset() { counter = 0; }",
        comment="// reset",
        label=False,
    ),
    CodeCommentPair(
        id="js-bad",
        language=Language.JAVASCRIPT,
        code="const mul = (a, b) => a * b;",
        comment="multiply",
        label=False,
    ),
]


def write_corpus_file(path, pairs):
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            obj = {
                "id": p.id,
                "language": p.language.value,
                "code": p.code,
                "comment": p.comment,
            }
            if p.label is not None:
                obj["label"] = p.label
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return path


@pytest.fixture
def fixture_pairs():
    return GOOD_PAIRS + BAD_PAIRS


@pytest.fixture
def corpus_file(tmp_path, fixture_pairs):
    return write_corpus_file(tmp_path / "corpus.jsonl", fixture_pairs)


def write_word_vectors(path, rows, dim):
    """rows: list of (token, vector) in the plain text format."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(rows)} {dim}\n")
        for token, vec in rows:
            fh.write(token + " " + " ".join(repr(float(v)) for v in vec) + "\n")
    return path


@pytest.fixture
def angle_vectors(tmp_path):
    """2-d vectors on the unit circle; cos(angle difference) is the cosine."""

    def vec(deg):
        rad = math.radians(deg)
        return (math.cos(rad), math.sin(rad))

    rows = [
        ("player", vec(0)),
        ("gamer", vec(30)),      # cos 30 ~ 0.866 to player
        ("athlete", vec(55)),    # cos 55 ~ 0.574 to player
        ("rock", vec(90)),       # cos 90 = 0 to player
        ("/c/en/score", vec(10)),
        ("/c/ru/очки", vec(20)),  # cos 10 ~ 0.985 to score
    ]
    return write_word_vectors(tmp_path / "vectors.txt", rows, 2)


class _StubHandler(BaseHTTPRequestHandler):
    """Canned sidecar responses for provider client tests."""

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length))
        if self.path == "/v1/term-weights":
            weights = [float(len(t)) for t in body["terms"]]
            payload = {"weights": weights, "model_id": "stub"}
        elif self.path == "/v1/embed":
            payload = {
                "vectors": [[1.0, 0.0] if "code" in t else [0.0, 1.0] for t in body["texts"]],
                "dim": 2,
                "model_id": "stub",
            }
        else:
            self.send_response(404)
            self.end_headers()
            return
        data = json.dumps(payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_sidecar():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()
