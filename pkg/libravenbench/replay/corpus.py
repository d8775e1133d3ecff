# -*- coding: utf-8 -*-
# Copyright 2026 The ravenbench authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Fuzzing campaign ingestion.

A trial directory looks like::

  <trial>/queue/<seed>       inputs the fuzzer kept
  <trial>/crashes/<seed>     inputs the fuzzer flagged as crashing
  <trial>/fuzz_log.jsonl     {"file": relpath, "t": seconds, "kind": ...}

A seed may also be a directory holding one file per input stream plus an
``order.json`` access order; it is flattened into one byte stream.
"""

import dataclasses
import json
import os
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from libravenbench import errors
from libravenbench import logging_utils

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

QUEUE_DIR = 'queue'
CRASH_DIR = 'crashes'
LOG_FILE = 'fuzz_log.jsonl'
ORDER_FILE = 'order.json'
MTIME_FALLBACK_ENV = 'FRB_SEED_MTIME_FALLBACK'

LABEL_QUEUE = 'queue'
LABEL_CRASH = 'crash'
_LABELS_BY_DIR = {QUEUE_DIR: LABEL_QUEUE, CRASH_DIR: LABEL_CRASH}

TIMESTAMP_FROM_LOG = 'log'
TIMESTAMP_FROM_MTIME = 'mtime'


@dataclasses.dataclass(frozen=True)
class InputRecord:
  """One saved fuzz input.

  Attributes:
    input_id (str): Path relative to the trial directory, e.g. 'queue/id0'.
    data (bytes): The canonical input byte stream.
    timestamp_s (float): Seconds since campaign start.
    label (str): 'queue' or 'crash', from the directory the input is in.
    fuzzer (str): Fuzzer name.
    trial (int): Trial index.
    timestamp_source (str): 'log' or 'mtime'.
  """
  input_id: str
  data: bytes
  timestamp_s: float
  label: str
  fuzzer: str = ''
  trial: int = 0
  timestamp_source: str = TIMESTAMP_FROM_LOG


@dataclasses.dataclass
class IngestResult:
  """Output of IngestCampaign.

  Attributes:
    records (List[InputRecord]): Sorted by (timestamp_s, input_id).
    malformed_lines (int): Log lines skipped as malformed.
    warnings (List[str]): Provenance warnings.
  """
  records: List[InputRecord]
  malformed_lines: int = 0
  warnings: List[str] = dataclasses.field(default_factory=list)


# Adapters: pure functions from a stored seed to the canonical byte stream.

def RawBytes(data: bytes) -> bytes:
  """Passthrough adapter for fuzzers storing the MMIO stream directly."""
  return bytes(data)


def FlattenMultiStream(streams: Dict[str, bytes],
                       order: Sequence[Union[str, Sequence[Any]]]) -> bytes:
  """Flattens per-stream seed files into one stream in access order.

  Each access names a stream and a size; it consumes the next size bytes
  of that stream. Flattening stops at the first access its stream cannot
  satisfy.

  Args:
    streams (Dict[str, bytes]): Stream contents by name.
    order (Sequence): Accesses as [name, size] pairs, or bare names for
        1-byte accesses.

  Returns:
    bytes: The flattened input.

  Raises:
    CorpusError: If an access is malformed or names an unknown stream.
  """
  cursors = dict.fromkeys(streams, 0)
  flat = bytearray()
  for access in order:
    if isinstance(access, str):
      name, size = access, 1
    elif (isinstance(access, (list, tuple)) and len(access) == 2 and
          isinstance(access[0], str) and isinstance(access[1], int) and
          access[1] > 0):
      name, size = access[0], access[1]
    else:
      raise errors.CorpusError(
          'Malformed stream access {0!r}'.format(access), __name__)
    if name not in streams:
      raise errors.CorpusError(
          'Access order names unknown stream {0:s}'.format(name), __name__)
    start = cursors[name]
    chunk = streams[name][start:start + size]
    if len(chunk) < size:
      break
    flat.extend(chunk)
    cursors[name] = start + size
  return bytes(flat)


def LoadMultiStreamSeed(path: str) -> bytes:
  """Reads a multi-stream seed directory and flattens it.

  Args:
    path (str): Directory with stream files and order.json.

  Returns:
    bytes: The flattened input.

  Raises:
    CorpusError: If order.json is missing or malformed.
  """
  order_path = os.path.join(path, ORDER_FILE)
  try:
    with open(order_path, 'r', encoding='utf-8') as order_file:
      document = json.load(order_file)
  except (OSError, ValueError) as exception:
    raise errors.CorpusError(
        'Cannot read {0:s}: {1!s}'.format(order_path, exception),
        __name__) from exception
  order = document.get('order') if isinstance(document, dict) else document
  if not isinstance(order, list):
    raise errors.CorpusError(
        '{0:s} must hold a list of accesses'.format(order_path), __name__)
  streams = {}  # type: Dict[str, bytes]
  for name in sorted(os.listdir(path)):
    stream_path = os.path.join(path, name)
    if name != ORDER_FILE and os.path.isfile(stream_path):
      streams[name] = _ReadBytes(stream_path)
  return FlattenMultiStream(streams, order)


def _ReadBytes(path: str) -> bytes:
  try:
    with open(path, 'rb') as seed_file:
      return seed_file.read()
  except OSError as exception:
    raise errors.CorpusError(
        'Cannot read {0:s}: {1!s}'.format(path, exception),
        __name__) from exception


def MtimeFallbackEnabled() -> bool:
  """Returns False if FRB_SEED_MTIME_FALLBACK is set to 0."""
  return os.environ.get(MTIME_FALLBACK_ENV, '1').strip() != '0'


def ParseLog(lines: Sequence[str]
            ) -> Tuple[Dict[str, Tuple[float, str]], int, List[str]]:
  """Parses fuzzing log lines.

  Args:
    lines (Sequence[str]): The JSON Lines log.

  Returns:
    Tuple[Dict[str, Tuple[float, str]], int, List[str]]: (t, kind) per
        relative path keeping the earliest entry, the number of malformed
        lines, and warnings.
  """
  entries = {}  # type: Dict[str, Tuple[float, str]]
  malformed = 0
  warnings = []  # type: List[str]
  for number, line in enumerate(lines, start=1):
    if not line.strip():
      continue
    try:
      entry = json.loads(line)
    except ValueError:
      entry = None
    if not (isinstance(entry, dict) and isinstance(entry.get('file'), str) and
            isinstance(entry.get('t'), (int, float)) and
            not isinstance(entry.get('t'), bool) and entry['t'] >= 0 and
            entry.get('kind') in (LABEL_QUEUE, LABEL_CRASH)):
      malformed += 1
      warnings.append('Skipping malformed log line {0:d}'.format(number))
      continue
    path = entry['file'].replace(os.sep, '/')
    if path in entries and entries[path][0] <= entry['t']:
      continue
    entries[path] = (float(entry['t']), entry['kind'])
  return entries, malformed, warnings


def _ListSeeds(corpus_dir: str) -> List[Tuple[str, str, str]]:
  """Returns (input_id, path, label) for every seed on disk, sorted."""
  seeds = []
  for directory in (QUEUE_DIR, CRASH_DIR):
    root = os.path.join(corpus_dir, directory)
    if not os.path.isdir(root):
      continue
    for name in sorted(os.listdir(root)):
      if name.startswith('.'):
        continue
      seeds.append(('{0:s}/{1:s}'.format(directory, name),
                    os.path.join(root, name), _LABELS_BY_DIR[directory]))
  return seeds


def _LoadSeed(path: str) -> Optional[bytes]:
  if os.path.isdir(path):
    if not os.path.exists(os.path.join(path, ORDER_FILE)):
      return None
    return LoadMultiStreamSeed(path)
  return RawBytes(_ReadBytes(path))


def _CampaignStart(seeds: List[Tuple[str, str, str]],
                   entries: Dict[str, Tuple[float, str]]) -> float:
  """Mtime the fallback timestamps are measured from."""
  implied = [os.path.getmtime(path) - entries[input_id][0]
             for input_id, path, _ in seeds if input_id in entries]
  if implied:
    return min(implied)
  return min((os.path.getmtime(path) for _, path, _ in seeds), default=0.0)


def IngestCampaign(corpus_dir: str,
                   log_path: Optional[str] = None,
                   fuzzer: str = '',
                   trial: int = 0) -> IngestResult:
  """Reads one trial's corpus and fuzzing log.

  Inputs on disk but absent from the log are timestamped with their mtime,
  unless FRB_SEED_MTIME_FALLBACK=0 in which case they are dropped. Mtimes
  are measured from the campaign start implied by the logged seeds (the
  smallest mtime minus logged time), or from the oldest seed when no seed
  is logged. Log entries without a file are dropped.

  Args:
    corpus_dir (str): The trial directory.
    log_path (str): Optional. Fuzzing log; defaults to
        <corpus_dir>/fuzz_log.jsonl when present.
    fuzzer (str): Optional. Fuzzer name stored in the records.
    trial (int): Optional. Trial index stored in the records.

  Returns:
    IngestResult: Records sorted by timestamp, plus diagnostics.

  Raises:
    CorpusError: If the corpus directory or a seed cannot be read.
  """
  if not os.path.isdir(corpus_dir):
    raise errors.CorpusError(
        'Corpus directory {0:s} does not exist'.format(corpus_dir), __name__)
  if log_path is None:
    default_log = os.path.join(corpus_dir, LOG_FILE)
    log_path = default_log if os.path.exists(default_log) else None
  entries = {}  # type: Dict[str, Tuple[float, str]]
  result = IngestResult(records=[])
  if log_path is not None:
    try:
      with open(log_path, 'r', encoding='utf-8') as log_file:
        lines = log_file.read().splitlines()
    except OSError as exception:
      raise errors.CorpusError(
          'Cannot read log {0:s}: {1!s}'.format(log_path, exception),
          __name__) from exception
    entries, result.malformed_lines, result.warnings = ParseLog(lines)

  seeds = _ListSeeds(corpus_dir)
  on_disk = {input_id for input_id, _, _ in seeds}
  for missing in sorted(set(entries) - on_disk):
    result.warnings.append(
        'Log references missing file {0:s}; dropped'.format(missing))

  unlogged = [path for input_id, path, _ in seeds if input_id not in entries]
  fallback = MtimeFallbackEnabled()
  start = _CampaignStart(seeds, entries)
  for input_id, path, label in seeds:
    if input_id in entries:
      timestamp, kind = entries[input_id]
      source = TIMESTAMP_FROM_LOG
      if kind != label:
        result.warnings.append(
            '{0:s} is logged as {1:s} but stored as {2:s}'.format(
                input_id, kind, label))
    elif fallback:
      timestamp = max(0.0, os.path.getmtime(path) - start)
      source = TIMESTAMP_FROM_MTIME
    else:
      result.warnings.append(
          '{0:s} is not in the log; dropped'.format(input_id))
      continue
    data = _LoadSeed(path)
    if data is None:
      result.warnings.append(
          '{0:s} is a directory without {1:s}; skipped'.format(
              input_id, ORDER_FILE))
      continue
    result.records.append(
        InputRecord(input_id, data, timestamp, label, fuzzer, trial, source))

  if unlogged and fallback:
    anchor = ('the logged campaign start' if len(unlogged) < len(seeds)
              else 'the oldest seed')
    result.warnings.append(
        '{0:d} input(s) not in the log use file mtime timestamps relative '
        'to {1:s}'.format(len(unlogged), anchor))
  for warning in result.warnings:
    logger.warning(warning)
  result.records.sort(key=lambda record: (record.timestamp_s,
                                          record.input_id))
  logger.info('Ingested {0:d} input(s) from {1:s}'.format(
      len(result.records), corpus_dir))
  return result
