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
"""Replays saved inputs through minivm with the bug oracle attached."""

import dataclasses
import json
import multiprocessing
from concurrent import futures
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, \
  Set, Tuple

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.emulation import api
from libravenbench.emulation.minivm import image as image_lib
from libravenbench.emulation.minivm import machine
from libravenbench.oracle import metadata as metadata_lib
from libravenbench.oracle import session as session_lib
from libravenbench.oracle import states
from libravenbench.raven import interpreter
from libravenbench.raven import nodes
from libravenbench.replay import corpus
from libravenbench.replay import signatures

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

OUTCOMES_FILE = 'outcomes.jsonl'
REPLAY_META_FILE = 'replay_meta.json'


@dataclasses.dataclass(frozen=True)
class ReplayOptions:
  """Replay settings.

  Attributes:
    mode (Mode): Oracle mode.
    active (Optional[FrozenSet[str]]): Live-Mode active bugs; None uses the
        metadata flags.
    metadata (Dict[str, BugMetadata]): Raven sidecar entries.
    jobs (int): Worker processes.
    limits (ExecutionLimits): Per-input emulator bounds.
    step_budget (int): Raven AST steps per hook call.
  """
  mode: session_lib.Mode = session_lib.Mode.REPLAY
  active: Optional[FrozenSet[str]] = None
  metadata: Dict[str, metadata_lib.BugMetadata] = dataclasses.field(
      default_factory=dict)
  jobs: int = 1
  limits: api.ExecutionLimits = api.ExecutionLimits()
  step_budget: int = interpreter.DEFAULT_STEP_BUDGET


@dataclasses.dataclass
class ReplayOutcome:
  """Result of replaying one input.

  Attributes:
    input_id (str): The input.
    observations (Dict[str, BugState]): Final state per known bug.
    termination (Optional[Termination]): How the replay ended; None if the
        replay itself failed.
    instructions_executed (int): Instructions executed.
    crash_sig_pc_lr (Optional[Tuple[int, int]]): Set iff the run crashed.
    crash_sig_stack (Optional[int]): Set iff the run crashed.
    covered_blocks (List[int]): Sorted block starts.
    first_triggered (Optional[str]): First bug to reach Triggered.
    flags (Dict[str, Any]): multi_bug, label_mismatch, raven_errors, error.
  """
  input_id: str
  observations: Dict[str, states.BugState]
  termination: Optional[api.Termination]
  instructions_executed: int = 0
  crash_sig_pc_lr: Optional[Tuple[int, int]] = None
  crash_sig_stack: Optional[int] = None
  covered_blocks: List[int] = dataclasses.field(default_factory=list)
  first_triggered: Optional[str] = None
  flags: Dict[str, Any] = dataclasses.field(default_factory=dict)

  @property
  def is_crash(self) -> bool:
    return self.termination is not None and self.termination.is_crash

  @property
  def error(self) -> Optional[str]:
    return self.flags.get('error')

  def State(self, bug_id: str) -> states.BugState:
    return self.observations.get(bug_id, states.BugState.NOT_REACHED)

  def AsDict(self) -> Dict[str, Any]:
    """Returns the JSON view, field names as in the outcome dump."""
    termination = None  # type: Optional[Dict[str, Any]]
    if self.termination is not None:
      termination = dict(self.termination.AsDict())
      termination['instructions_executed'] = self.instructions_executed
    return {
        'input_id': self.input_id,
        'observations': {bug_id: state.label
                         for bug_id, state in self.observations.items()},
        'termination': termination,
        'crash_sig_pc_lr': (list(self.crash_sig_pc_lr)
                            if self.crash_sig_pc_lr else None),
        'crash_sig_stack': self.crash_sig_stack,
        'covered_blocks': list(self.covered_blocks),
        'first_triggered': self.first_triggered,
        'flags': dict(self.flags),
    }

  def ToJson(self) -> str:
    return json.dumps(self.AsDict(), sort_keys=True, separators=(',', ':'))

  @classmethod
  def FromDict(cls, data: Dict[str, Any]) -> 'ReplayOutcome':
    """Parses the JSON view.

    Raises:
      ReportFormatError: If a field is missing or invalid.
    """
    try:
      termination = None
      executed = 0
      if data['termination'] is not None:
        termination = api.Termination.FromDict(data['termination'])
        executed = int(data['termination'].get('instructions_executed', 0))
      pc_lr = data.get('crash_sig_pc_lr')
      return cls(
          input_id=data['input_id'],
          observations={
              bug_id: states.BugState.FromLabel(label)
              for bug_id, label in data['observations'].items()},
          termination=termination,
          instructions_executed=executed,
          crash_sig_pc_lr=(int(pc_lr[0]), int(pc_lr[1])) if pc_lr else None,
          crash_sig_stack=data.get('crash_sig_stack'),
          covered_blocks=[int(block) for block in data['covered_blocks']],
          first_triggered=data.get('first_triggered'),
          flags=dict(data.get('flags') or {}))
    except (KeyError, TypeError, ValueError, IndexError) as exception:
      raise errors.ReportFormatError(
          'Malformed outcome: {0!s}'.format(exception),
          __name__) from exception


def _Failed(record: corpus.InputRecord, bug_ids: Sequence[str],
            message: str) -> ReplayOutcome:
  return ReplayOutcome(
      input_id=record.input_id,
      observations={bug_id: states.BugState.NOT_REACHED for bug_id in bug_ids},
      termination=None,
      flags={'multi_bug': False, 'label_mismatch': False, 'raven_errors': 0,
             'error': message})


def ReplayRecord(oracle: session_lib.OracleSession,
                 record: corpus.InputRecord,
                 limits: Optional[api.ExecutionLimits] = None
                ) -> ReplayOutcome:
  """Replays one input on a loaded oracle session.

  Args:
    oracle (OracleSession): Ravens bound to a backend session.
    record (InputRecord): The input.
    limits (ExecutionLimits): Optional. Emulator bounds.

  Returns:
    ReplayOutcome: The outcome; failures are recorded in flags['error'].
  """
  try:
    result, verdict = oracle.RunInput(record.data, limits, record.input_id,
                                      record.label)
  except errors.RBError as exception:
    return _Failed(record, oracle.bug_ids, exception.message)
  except Exception as exception:  # pylint: disable=broad-except
    logger.error('Replay of {0:s} failed: {1!s}'.format(record.input_id,
                                                         exception))
    return _Failed(record, oracle.bug_ids, str(exception))
  termination = result.termination
  flags = dict(verdict.flags)
  flags['error'] = None
  return ReplayOutcome(
      input_id=record.input_id,
      observations={observation.bug_id: observation.state
                    for observation in verdict.observations},
      termination=termination,
      instructions_executed=result.instructions_executed,
      crash_sig_pc_lr=signatures.PcLrSignature(termination),
      crash_sig_stack=signatures.StackSignature(termination),
      covered_blocks=sorted(result.covered_blocks),
      first_triggered=verdict.first_triggered,
      flags=flags)


def OpenSession(target: image_lib.TargetImage,
                programs: List[nodes.RavenProgram],
                options: ReplayOptions) -> session_lib.OracleSession:
  """Loads a target and binds Ravens to it.

  Raises:
    InvalidImageError: If the image is invalid.
    RavenLoadError: If a reflection point is rejected.
  """
  backend = machine.LoadTarget(target)
  return session_lib.LoadRavens(programs, backend, options.mode,
                                options.metadata, options.active,
                                options.step_budget)


# Per-process session for parallel replay.
_WORKER = {}  # type: Dict[str, Any]


def _InitWorker(target: image_lib.TargetImage,
                programs: List[nodes.RavenProgram],
                options: ReplayOptions) -> None:
  _WORKER['oracle'] = OpenSession(target, programs, options)
  _WORKER['limits'] = options.limits


def _ReplayInWorker(record: corpus.InputRecord) -> ReplayOutcome:
  return ReplayRecord(_WORKER['oracle'], record, _WORKER['limits'])


def ReplayAll(records: Sequence[corpus.InputRecord],
              target: image_lib.TargetImage,
              programs: List[nodes.RavenProgram],
              options: Optional[ReplayOptions] = None) -> List[ReplayOutcome]:
  """Replays every record.

  Outcomes are in record order and do not depend on options.jobs.

  Args:
    records (Sequence[InputRecord]): The inputs.
    target (TargetImage): The firmware image.
    programs (List[RavenProgram]): The Ravens.
    options (ReplayOptions): Optional. Replay settings.

  Returns:
    List[ReplayOutcome]: One outcome per record.

  Raises:
    InvalidImageError: If the image is invalid.
    RavenLoadError: If a reflection point is rejected.
  """
  options = options or ReplayOptions()
  oracle = OpenSession(target, programs, options)
  if not records:
    return []
  if options.jobs <= 1 or len(records) == 1:
    outcomes = [ReplayRecord(oracle, record, options.limits)
                for record in records]
  else:
    chunk = max(1, len(records) // (options.jobs * 4))
    with futures.ProcessPoolExecutor(
        max_workers=options.jobs,
        mp_context=multiprocessing.get_context('spawn'),
        initializer=_InitWorker,
        initargs=(target, programs, options)) as executor:
      outcomes = list(executor.map(_ReplayInWorker, records, chunksize=chunk))
  failed = sum(1 for outcome in outcomes if outcome.error)
  logger.info('Replayed {0:d} input(s), {1:d} crash(es), {2:d} failure(s)'
              .format(len(outcomes),
                      sum(1 for outcome in outcomes if outcome.is_crash),
                      failed))
  return outcomes


def CoverageUnion(outcomes: Iterable[ReplayOutcome]) -> FrozenSet[int]:
  """Union of covered blocks over a corpus."""
  blocks = set()  # type: Set[int]
  for outcome in outcomes:
    blocks.update(outcome.covered_blocks)
  return frozenset(blocks)


def WriteOutcomes(outcomes: Iterable[ReplayOutcome], path: str) -> None:
  """Writes outcomes as JSON Lines."""
  with open(path, 'w', encoding='utf-8') as outcomes_file:
    for outcome in outcomes:
      outcomes_file.write(outcome.ToJson() + '\n')


def ReadOutcomes(path: str) -> List[ReplayOutcome]:
  """Reads an outcomes JSON Lines file.

  Raises:
    ReportFormatError: If the file cannot be read or a line is malformed.
  """
  outcomes = []
  try:
    with open(path, 'r', encoding='utf-8') as outcomes_file:
      lines = outcomes_file.read().splitlines()
  except OSError as exception:
    raise errors.ReportFormatError(
        'Cannot read {0:s}: {1!s}'.format(path, exception),
        __name__) from exception
  for number, line in enumerate(lines, start=1):
    if not line.strip():
      continue
    try:
      data = json.loads(line)
    except ValueError as exception:
      raise errors.ReportFormatError(
          '{0:s}:{1:d}: invalid JSON'.format(path, number),
          __name__) from exception
    if not isinstance(data, dict):
      raise errors.ReportFormatError(
          '{0:s}:{1:d}: expected an object'.format(path, number), __name__)
    outcomes.append(ReplayOutcome.FromDict(data))
  return outcomes


@dataclasses.dataclass
class ReplayMeta:
  """Per-trial context written next to outcomes.jsonl.

  Attributes:
    target_sha256 (str): Hash of the replayed image.
    fuzzer (str): Fuzzer name.
    trial (int): Trial index.
    inputs (Dict[str, Dict[str, Any]]): {'t', 'label', 'timestamp_source'}
        per input ID.
  """
  target_sha256: str
  fuzzer: str
  trial: int
  inputs: Dict[str, Dict[str, Any]] = dataclasses.field(default_factory=dict)

  @classmethod
  def FromRecords(cls, target: image_lib.TargetImage, fuzzer: str,
                  trial: int,
                  records: Iterable[corpus.InputRecord]) -> 'ReplayMeta':
    return cls(target.sha256, fuzzer, trial, {
        record.input_id: {'t': record.timestamp_s, 'label': record.label,
                          'timestamp_source': record.timestamp_source}
        for record in records})

  def ToRecords(self) -> List[corpus.InputRecord]:
    """Rebuilds the records without their bytes, for analysis."""
    records = [
        corpus.InputRecord(input_id, b'', float(entry['t']), entry['label'],
                           self.fuzzer, self.trial,
                           entry.get('timestamp_source',
                                     corpus.TIMESTAMP_FROM_LOG))
        for input_id, entry in self.inputs.items()]
    records.sort(key=lambda record: (record.timestamp_s, record.input_id))
    return records

  def Write(self, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as meta_file:
      json.dump(dataclasses.asdict(self), meta_file, sort_keys=True, indent=2)
      meta_file.write('\n')

  @classmethod
  def Read(cls, path: str) -> 'ReplayMeta':
    """Reads replay_meta.json.

    Raises:
      ReportFormatError: If the file is missing or malformed.
    """
    try:
      with open(path, 'r', encoding='utf-8') as meta_file:
        data = json.load(meta_file)
      return cls(str(data['target_sha256']), str(data['fuzzer']),
                 int(data['trial']), dict(data['inputs']))
    except (OSError, ValueError, KeyError, TypeError) as exception:
      raise errors.ReportFormatError(
          'Cannot read {0:s}: {1!s}'.format(path, exception),
          __name__) from exception
