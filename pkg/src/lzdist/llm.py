"""Synthetic edits through a chat-completion HTTP endpoint.

Wire format (one request per prompt)::

    POST {api_base}/chat/completions
    Authorization: Bearer {api_key}
    {"model": ..., "messages": [{"role": "user", "content": prompt}],
     "temperature": 0.0, "max_tokens": ...}        # max_tokens only if set

The completion text is read from ``choices[0].message.content``.
Nothing here touches the network unless a ``ClientConfig`` is built,
normally via ``ClientConfig.from_env()``.
"""
from __future__ import annotations

import logging
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

import httpx

from .dataset import EDIT_SCENARIOS, EditRecord
from .symbols import InvalidInputError

log = logging.getLogger(__name__)

PROMPT_SCENARIOS = ("initial",) + EDIT_SCENARIOS
SLOTS = ("QUESTION", "LLM_ANSWER", "KNOWLEDGE")
_SLOT_RE = re.compile(r"<(QUESTION|LLM_ANSWER|KNOWLEDGE)>")

ENV_API_BASE = "LZDIST_API_BASE"
ENV_API_KEY = "LZDIST_API_KEY"
ENV_MODEL = "LZDIST_MODEL"


class ConfigError(RuntimeError):
    pass


class TransportError(RuntimeError):
    def __init__(self, message: str, status: Optional[int] = None, body: str = ""):
        super().__init__(message)
        self.status = status
        self.body = body


class AuthError(TransportError):
    pass


@dataclass(frozen=True)
class ScenarioPrompt:
    scenario: str
    template: str

    def slots(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(_SLOT_RE.findall(self.template)))


@lru_cache(maxsize=None)
def load_prompt(scenario: str) -> ScenarioPrompt:
    if scenario not in PROMPT_SCENARIOS:
        raise InvalidInputError(f"unknown scenario {scenario!r}; expected one of {PROMPT_SCENARIOS}")
    text = resources.files("lzdist").joinpath("prompts", f"{scenario}.txt").read_text(encoding="utf-8")
    return ScenarioPrompt(scenario, text)


def render_prompt(
    scenario: str,
    question: str,
    llm_answer: Optional[str] = None,
    knowledge: Optional[str] = None,
) -> str:
    prompt = load_prompt(scenario)
    values = {"QUESTION": question, "LLM_ANSWER": llm_answer, "KNOWLEDGE": knowledge}
    for slot in prompt.slots():
        if values[slot] is None:
            raise InvalidInputError(f"scenario {scenario!r} requires <{slot}>")
    # single pass, so slot-like text inside payloads is never re-expanded
    return _SLOT_RE.sub(lambda m: values[m.group(1)], prompt.template)


@dataclass(frozen=True)
class ClientConfig:
    api_base: str
    model: str
    api_key: Optional[str] = None
    max_retries: int = 3
    timeout_s: float = 60.0
    temperature: float = 0.0
    max_tokens: Optional[int] = None
    backoff_s: float = 1.0
    concurrency: int = 4

    def __post_init__(self) -> None:
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")
        if self.timeout_s <= 0:
            raise ConfigError("timeout_s must be > 0")
        if self.concurrency < 1:
            raise ConfigError("concurrency must be >= 1")

    @classmethod
    def from_env(cls, **overrides) -> "ClientConfig":
        base = os.environ.get(ENV_API_BASE)
        model = os.environ.get(ENV_MODEL)
        if not base or not model:
            raise ConfigError(f"set {ENV_API_BASE} and {ENV_MODEL} to enable generation")
        return cls(api_base=base, model=model, api_key=os.environ.get(ENV_API_KEY), **overrides)


def complete(prompt: str, config: ClientConfig, client: Optional[httpx.Client] = None) -> str:
    """Send one prompt; retry failures with exponential backoff."""
    url = config.api_base.rstrip("/") + "/chat/completions"
    headers = {"Content-Type": "application/json"}
    if config.api_key:
        headers["Authorization"] = f"Bearer {config.api_key}"
    payload: dict = {
        "model": config.model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": config.temperature,
    }
    if config.max_tokens is not None:
        payload["max_tokens"] = config.max_tokens

    own_client = client is None
    client = client or httpx.Client(timeout=config.timeout_s)
    last: TransportError = TransportError("no attempt made")
    try:
        for attempt in range(config.max_retries + 1):
            if attempt:
                time.sleep(config.backoff_s * 2 ** (attempt - 1))
            try:
                resp = client.post(url, json=payload, headers=headers)
            except httpx.HTTPError as exc:
                last = TransportError(f"request to {url} failed: {exc}")
                log.warning("attempt %d: %s", attempt + 1, last)
                continue
            if 200 <= resp.status_code < 300:
                try:
                    return resp.json()["choices"][0]["message"]["content"]
                except (ValueError, KeyError, IndexError, TypeError) as exc:
                    last = TransportError(f"unexpected response shape: {exc}", resp.status_code, resp.text[:500])
                    continue
            kind = AuthError if resp.status_code in (401, 403) else TransportError
            last = kind(f"HTTP {resp.status_code} from {url}", resp.status_code, resp.text[:500])
            log.warning("attempt %d: %s", attempt + 1, last)
    finally:
        if own_client:
            client.close()
    raise last


@dataclass(frozen=True)
class SyntheticJob:
    id: str
    question: str
    initial_answer: str
    knowledge: str
    scenario: str = "normal"

    def __post_init__(self) -> None:
        for name in ("question", "initial_answer", "knowledge"):
            if not getattr(self, name):
                raise InvalidInputError(f"job {self.id!r}: {name} must be nonempty")
        if self.scenario not in EDIT_SCENARIOS:
            raise InvalidInputError(f"job {self.id!r}: unknown scenario {self.scenario!r}")


def edit_record_id(question_id: str, scenario: str) -> str:
    return f"{question_id}:{scenario}"


def question_key(record: EditRecord) -> str:
    """Question id of a scenario record (its id minus a ``:<scenario>`` suffix)."""
    suffix = f":{record.scenario}"
    if record.scenario and record.id.endswith(suffix):
        return record.id[: -len(suffix)]
    return record.id


def generate_initial_answer(question: str, config: ClientConfig, client: Optional[httpx.Client] = None) -> str:
    return complete(render_prompt("initial", question), config, client)


def generate_edit(job: SyntheticJob, config: ClientConfig, client: Optional[httpx.Client] = None) -> EditRecord:
    prompt = render_prompt(job.scenario, job.question, job.initial_answer, job.knowledge)
    edited = complete(prompt, config, client)
    return EditRecord(
        id=edit_record_id(job.id, job.scenario),
        source=job.initial_answer,
        target=edited,
        context=job.knowledge,
        scenario=job.scenario,
    )


@dataclass
class SuiteResult:
    records: list[EditRecord] = field(default_factory=list)
    failures: list[tuple[str, str, str]] = field(default_factory=list)  # (job id, scenario, error)


def run_scenario_suite(
    jobs: Sequence[SyntheticJob], scenarios: Sequence[str], config: ClientConfig
) -> SuiteResult:
    """Every job under every scenario, ordered job-major regardless of completion order."""
    if not jobs or not scenarios:
        raise InvalidInputError("need at least one job and one scenario")
    for s in scenarios:
        if s not in EDIT_SCENARIOS:
            raise InvalidInputError(f"unknown scenario {s!r}")
    tasks = [
        SyntheticJob(j.id, j.question, j.initial_answer, j.knowledge, s) for j in jobs for s in scenarios
    ]

    with httpx.Client(timeout=config.timeout_s) as client:

        def run(task: SyntheticJob):
            try:
                return generate_edit(task, config, client), None
            except TransportError as exc:
                return None, str(exc)

        with ThreadPoolExecutor(max_workers=config.concurrency) as pool:
            outcomes = list(pool.map(run, tasks))

    result = SuiteResult()
    for task, (record, err) in zip(tasks, outcomes):
        if record is not None:
            result.records.append(record)
        else:
            result.failures.append((task.id, task.scenario, err))
    return result
