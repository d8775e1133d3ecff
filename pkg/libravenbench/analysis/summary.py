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
"""Per-trial bug timing."""

import dataclasses
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set

from libravenbench import logging_utils
from libravenbench.oracle import states
from libravenbench.replay import corpus
from libravenbench.replay import engine

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

DEFAULT_HORIZON_S = 86400.0


@dataclasses.dataclass(frozen=True)
class BugTimes:
  """Earliest times a bug reached each state in one trial.

  Attributes:
    reached_s (Optional[float]): Earliest input at Reached or above.
    triggered_s (Optional[float]): Earliest input at Triggered or above.
    detected_s (Optional[float]): Earliest input at Detected.
  """
  reached_s: Optional[float] = None
  triggered_s: Optional[float] = None
  detected_s: Optional[float] = None

  def Get(self, state: states.BugState) -> Optional[float]:
    """Returns the time for Reached, Triggered or Detected."""
    return {
        states.BugState.REACHED: self.reached_s,
        states.BugState.TRIGGERED: self.triggered_s,
        states.BugState.DETECTED: self.detected_s,
    }[state]


@dataclasses.dataclass
class TrialSummary:
  """One fuzzer trial reduced to bug timings.

  Attributes:
    fuzzer (str): Fuzzer name.
    trial (int): Trial index.
    horizon_s (float): Campaign length; later times are censored.
    bugs (Dict[str, BugTimes]): Timings per known bug.
    target_sha256 (str): Image the trial was replayed against.
    crash_counts (Dict[str, int]): Crashing inputs per first-triggered bug.
    unattributed_crashes (int): Crashing inputs no Raven triggered on.
    coverage (FrozenSet[int]): Union of covered blocks.
  """
  fuzzer: str
  trial: int
  horizon_s: float
  bugs: Dict[str, BugTimes]
  target_sha256: str = ''
  crash_counts: Dict[str, int] = dataclasses.field(default_factory=dict)
  unattributed_crashes: int = 0
  coverage: FrozenSet[int] = frozenset()

  def Triggered(self) -> List[str]:
    """Bugs triggered within the horizon, sorted."""
    return sorted(bug_id for bug_id, times in self.bugs.items()
                  if times.triggered_s is not None)

  def Detected(self) -> List[str]:
    """Bugs detected within the horizon, sorted."""
    return sorted(bug_id for bug_id, times in self.bugs.items()
                  if times.detected_s is not None)


def _Earliest(current: Optional[float], candidate: float) -> float:
  return candidate if current is None else min(current, candidate)


def SummarizeTrial(outcomes: Iterable[engine.ReplayOutcome],
                   records: Sequence[corpus.InputRecord],
                   fuzzer: str = '',
                   trial: int = 0,
                   horizon_s: float = DEFAULT_HORIZON_S,
                   bug_ids: Optional[Sequence[str]] = None,
                   target_sha256: str = '') -> TrialSummary:
  """Computes earliest reached, triggered and detected times per bug.

  Args:
    outcomes (Iterable[ReplayOutcome]): Replay outcomes of the trial.
    records (Sequence[InputRecord]): The trial's inputs, for timestamps.
    fuzzer (str): Optional. Fuzzer name.
    trial (int): Optional. Trial index.
    horizon_s (float): Optional. Times after the horizon are left unset.
    bug_ids (Sequence[str]): Optional. Bugs to report even if absent from
        every observation.
    target_sha256 (str): Optional. Replayed image hash.

  Returns:
    TrialSummary: The trial's bug timings.
  """
  timestamps = {record.input_id: record.timestamp_s for record in records}
  reached = {}  # type: Dict[str, Optional[float]]
  triggered = {}  # type: Dict[str, Optional[float]]
  detected = {}  # type: Dict[str, Optional[float]]
  for bug_id in bug_ids or ():
    reached[bug_id] = triggered[bug_id] = detected[bug_id] = None
  crash_counts = {}  # type: Dict[str, int]
  unattributed = 0
  coverage = set()  # type: Set[int]
  for outcome in outcomes:
    for bug_id in outcome.observations:
      reached.setdefault(bug_id, None)
      triggered.setdefault(bug_id, None)
      detected.setdefault(bug_id, None)
    if outcome.input_id not in timestamps:
      logger.warning('No timestamp for {0:s}; ignored'.format(
          outcome.input_id))
      continue
    t = timestamps[outcome.input_id]
    coverage.update(outcome.covered_blocks)
    if outcome.is_crash:
      if outcome.first_triggered:
        crash_counts[outcome.first_triggered] = crash_counts.get(
            outcome.first_triggered, 0) + 1
      else:
        unattributed += 1
    if t > horizon_s:
      continue
    for bug_id, state in outcome.observations.items():
      if state >= states.BugState.REACHED:
        reached[bug_id] = _Earliest(reached[bug_id], t)
      if state >= states.BugState.TRIGGERED:
        triggered[bug_id] = _Earliest(triggered[bug_id], t)
      if state == states.BugState.DETECTED:
        detected[bug_id] = _Earliest(detected[bug_id], t)
  bugs = {bug_id: BugTimes(reached[bug_id], triggered[bug_id],
                           detected[bug_id])
          for bug_id in sorted(reached)}
  return TrialSummary(fuzzer, trial, horizon_s, bugs, target_sha256,
                      crash_counts, unattributed, frozenset(coverage))
