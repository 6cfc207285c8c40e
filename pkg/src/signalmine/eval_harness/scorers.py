"""Model oracles.

The harness only needs two capabilities: per-token log-likelihoods of a
candidate continuation given a source, and free-form generation.
Tokenization is the scorer's own business. The bundled reference scorer is a
deterministic unigram-overlap model so the whole suite runs with no neural
model anywhere near it.
"""

from __future__ import annotations

import json
import math
import re
import subprocess
from typing import Protocol


class ScorerError(Exception):
    """The oracle failed; the affected question counts as unanswered."""


class ModelScorer(Protocol):
    def score(self, source: str, candidate: str) -> list[float]:
        """One log-likelihood per candidate token (scorer's tokenization)."""
        ...

    def generate(self, source: str) -> str:
        ...


_TOKEN_RE = re.compile(r"[a-z0-9']+")
_CAP_RUN_RE = re.compile(r"\b([A-Z][\w'-]*(?:\s+[A-Z][\w'-]*)*)")


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class ReferenceScorer:
    """Unigram-frequency oracle: a candidate token is likely when it occurs in
    the source; smoothing keeps everything finite and deterministic."""

    vocabulary_size = 1000.0
    alpha = 0.5

    def score(self, source: str, candidate: str) -> list[float]:
        source_tokens = _tokens(source)
        counts: dict[str, int] = {}
        for t in source_tokens:
            counts[t] = counts.get(t, 0) + 1
        denom = len(source_tokens) + self.alpha * self.vocabulary_size
        out = []
        for t in _tokens(candidate):
            out.append(math.log((counts.get(t, 0) + self.alpha) / denom))
        return out

    def generate(self, source: str) -> str:
        body = source.split("QUERY:")[0]
        body = body.split("TEXT:", 1)[-1].strip()
        query = source.split("QUERY:")[-1].lower()
        if "entit" in query:
            runs = []
            for m in _CAP_RUN_RE.finditer(body):
                run = m.group(1)
                if m.start() == 0 or body[max(0, m.start() - 2) : m.start()] in (". ", "! ", "? "):
                    words = run.split()
                    if len(words) > 1:
                        run = " ".join(words[1:])
                    else:
                        continue
                if run and run not in runs:
                    runs.append(run)
            return ", ".join(runs)
        return " ".join(body.split()[:12])


class ExternalCommandScorer:
    """Bridges to a user-supplied program over a line protocol: one JSON
    request per line on stdin, one JSON response per line on stdout.

    Requests: {"op": "score", "source": ..., "candidate": ...} ->
              {"logprobs": [...]}
              {"op": "generate", "source": ...} -> {"text": ...}
    """

    def __init__(self, command: list[str]):
        if not command:
            raise ScorerError("external scorer needs a command")
        self.command = command
        self._proc: subprocess.Popen | None = None

    def _ensure(self) -> subprocess.Popen:
        if self._proc is None or self._proc.poll() is not None:
            try:
                self._proc = subprocess.Popen(
                    self.command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    text=True,
                    bufsize=1,
                )
            except OSError as exc:
                raise ScorerError(f"cannot start scorer command: {exc}") from exc
        return self._proc

    def _roundtrip(self, request: dict) -> dict:
        proc = self._ensure()
        try:
            proc.stdin.write(json.dumps(request) + "\n")
            proc.stdin.flush()
            line = proc.stdout.readline()
        except (OSError, ValueError) as exc:
            raise ScorerError(f"scorer pipe failure: {exc}") from exc
        if not line:
            raise ScorerError("scorer produced no response")
        try:
            return json.loads(line)
        except json.JSONDecodeError as exc:
            raise ScorerError(f"scorer response is not JSON: {line[:80]}") from exc

    def score(self, source: str, candidate: str) -> list[float]:
        resp = self._roundtrip({"op": "score", "source": source, "candidate": candidate})
        try:
            return [float(x) for x in resp["logprobs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ScorerError("scorer response missing 'logprobs'") from exc

    def generate(self, source: str) -> str:
        resp = self._roundtrip({"op": "generate", "source": source})
        try:
            return str(resp["text"])
        except KeyError as exc:
            raise ScorerError("scorer response missing 'text'") from exc

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            self._proc.stdin.close()
            self._proc.wait(timeout=5)
