"""Batch command line front end.

    treecoder --input parses.jsonl --output events.jsonl --default-date 20150601

Input lines are JSON records ``{"id", "date", "parse"}`` or bare bracketed
parses.  Dictionaries default to the files in ``$TREECODER_DICTS`` and then
to the samples shipped with the package.  Any flag may also be given in a
JSON file passed with ``--config``; the command line wins over the file.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import itertools
import json
import logging
import os
import sys
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, TextIO

from .dictionaries import DictionaryError, DictionaryStore, load_dictionaries
from .pipeline import CodedSentence, Status, code_line, format_date, parse_date

log = logging.getLogger(__name__)

DICT_FILES = {
    "actors": "actors.txt",
    "agents": "agents.txt",
    "verbs": "verbs.txt",
    "discard": "discard.txt",
    "code_map": "cameo_map.tsv",
}
ENV_DICTS = "TREECODER_DICTS"
BATCH = 64


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    inputs: list[str] = field(default_factory=lambda: ["-"])
    output: str = "-"
    actors: Optional[str] = None
    agents: Optional[str] = None
    verbs: Optional[str] = None
    discard: Optional[str] = None
    code_map: Optional[str] = None
    default_date: Optional[dt.date] = None
    format: str = "jsonl"
    require_source: bool = True
    require_target: bool = True
    workers: int = 1
    trace: bool = False

    def validate(self) -> None:
        if self.format not in ("jsonl", "csv"):
            raise ConfigError(f"unknown output format {self.format!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("--workers must be at least 1")
        for path in self.inputs:
            if path != "-" and not Path(path).is_file():
                raise ConfigError(f"input file not found: {path}")


@dataclass
class Summary:
    counts: Counter = field(default_factory=Counter)

    def add(self, status: Status) -> None:
        self.counts[status] += 1

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __str__(self) -> str:
        return (
            f"coded={self.counts[Status.CODED]} no_events={self.counts[Status.NO_EVENTS]} "
            f"discarded={self.counts[Status.DISCARDED]} parse_error={self.counts[Status.PARSE_ERROR]} "
            f"total={self.total}"
        )


def shipped_data_dir() -> Path:
    return Path(__file__).parent / "data"


def default_dictionaries(env: Optional[dict] = None) -> dict[str, str]:
    env = os.environ if env is None else env
    dirs = [shipped_data_dir()]
    if env.get(ENV_DICTS):
        dirs.insert(0, Path(env[ENV_DICTS]))
    out = {}
    for key, name in DICT_FILES.items():
        for d in dirs:
            if (d / name).is_file():
                out[key] = str(d / name)
                break
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="treecoder",
        description="Code parsed sentences into (source, target, CAMEO) event triples.",
        argument_default=argparse.SUPPRESS,
    )
    p.add_argument("--input", dest="inputs", action="append", help="input file, '-' for stdin (repeatable)")
    p.add_argument("--output", help="output file, '-' for stdout")
    p.add_argument("--actors")
    p.add_argument("--agents")
    p.add_argument("--verbs")
    p.add_argument("--discard")
    p.add_argument("--code-map", dest="code_map")
    p.add_argument("--default-date", dest="default_date", help="YYYYMMDD for records without a date")
    p.add_argument("--format", choices=["jsonl", "csv"])
    p.add_argument("--require-source", dest="require_source", action=argparse.BooleanOptionalAction)
    p.add_argument("--require-target", dest="require_target", action=argparse.BooleanOptionalAction)
    p.add_argument("--workers", type=int)
    p.add_argument("--trace", action="store_true", help="print per-sentence derivations to stderr")
    p.add_argument("--config", help="JSON file supplying any of the above")
    return p


def _normalise_keys(raw: dict) -> dict:
    out = {}
    for key, value in raw.items():
        key = key.lstrip("-").replace("-", "_")
        if key == "input":
            key = "inputs"
        out[key] = value
    return out


def make_config(argv: Optional[list[str]] = None, env: Optional[dict] = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    settings: dict = dict(default_dictionaries(env))
    config_path = args.pop("config", None)
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                from_file = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {config_path}: {err}") from None
        if not isinstance(from_file, dict):
            raise ConfigError(f"config {config_path} must hold a JSON object")
        settings.update(_normalise_keys(from_file))
    settings.update(args)

    known = set(RunConfig.__dataclass_fields__)
    unknown = set(settings) - known
    if unknown:
        raise ConfigError(f"unknown setting(s): {', '.join(sorted(unknown))}")
    if isinstance(settings.get("inputs"), str):
        settings["inputs"] = [settings["inputs"]]
    if settings.get("default_date") is not None and not isinstance(settings["default_date"], dt.date):
        try:
            settings["default_date"] = parse_date(settings["default_date"])
        except ValueError:
            raise ConfigError(f"bad --default-date {settings['default_date']!r}") from None
    config = RunConfig(**settings)
    config.validate()
    return config


def load_store(config: RunConfig) -> DictionaryStore:
    if config.verbs is None:
        raise DictionaryError("no verbs dictionary configured")
    return load_dictionaries(
        actors=config.actors,
        agents=config.agents,
        verbs=config.verbs,
        discard=config.discard,
        code_map=config.code_map,
    )


def _read_lines(paths: Iterable[str], stdin: TextIO) -> Iterator[str]:
    for path in paths:
        if path == "-":
            yield from stdin
            continue
        with open(path, encoding="utf-8") as fh:
            yield from fh


def _records(paths, stdin) -> Iterator[tuple[int, str]]:
    n = 0
    for line in _read_lines(paths, stdin):
        if line.strip():
            n += 1
            yield n, line


def _code_one(store, item, config: RunConfig) -> tuple[CodedSentence, Optional[str]]:
    n, line = item
    trace = [] if config.trace else None
    result = code_line(
        line, n, store, config.default_date, trace, config.require_source, config.require_target
    )
    text = None
    if trace is not None:
        text = f"== {result.sentence_id} ==\n" + "\n".join(trace) + "\n"
    return result, text


_worker_store: Optional[DictionaryStore] = None


def _init_worker(store: DictionaryStore) -> None:
    global _worker_store
    _worker_store = store


def _code_batch(batch, config: RunConfig):
    return [_code_one(_worker_store, item, config) for item in batch]


def _batched(items: Iterable, size: int) -> Iterator[list]:
    it = iter(items)
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield chunk


def code_stream(store: DictionaryStore, records: Iterable[tuple[int, str]], config: RunConfig):
    """Coded records in input order, fanned out over ``config.workers`` processes."""
    if config.workers == 1:
        for item in records:
            yield _code_one(store, item, config)
        return
    with ProcessPoolExecutor(config.workers, initializer=_init_worker, initargs=(store,)) as pool:
        pending: deque = deque()
        for batch in _batched(records, BATCH):
            pending.append(pool.submit(_code_batch, batch, config))
            if len(pending) >= 4 * config.workers:
                yield from pending.popleft().result()
        while pending:
            yield from pending.popleft().result()


class _Writer:
    def __init__(self, fh: TextIO, fmt: str):
        self.fh = fh
        self.csv = None
        if fmt == "csv":
            self.csv = csv.writer(fh, lineterminator="\n")
            self.csv.writerow(["id", "date", "source", "target", "code"])

    def write(self, result: CodedSentence) -> None:
        if self.csv is None:
            self.fh.write(result.to_json() + "\n")
            return
        for source, target, code in result.events:
            self.csv.writerow([result.sentence_id, format_date(result.date) or "", source, target, code])


def run(config: RunConfig, stdin: TextIO = None, stdout: TextIO = None, stderr: TextIO = None) -> Summary:
    """Code every input record and write the results.

    Raises:
        ConfigError, DictionaryError: before any input is read.
    """
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    config.validate()
    store = load_store(config)
    summary = Summary()

    out = stdout if config.output == "-" else open(config.output, "w", encoding="utf-8", newline="")
    try:
        writer = _Writer(out, config.format)
        for result, trace in code_stream(store, _records(config.inputs, stdin), config):
            writer.write(result)
            summary.add(result.status)
            if trace:
                stderr.write(trace)
            if result.status is Status.PARSE_ERROR:
                log.warning("record %s: %s", result.sentence_id, result.error)
    finally:
        if out is not stdout:
            out.close()
    print(summary, file=stderr)
    return summary


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        config = make_config(argv)
        run(config)
    except ConfigError as err:
        print(f"treecoder: configuration error: {err}", file=sys.stderr)
        return 2
    except DictionaryError as err:
        print(f"treecoder: dictionary error: {err}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
