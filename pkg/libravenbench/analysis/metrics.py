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
"""Bug counts, consistency and fuzzer intersections."""

import dataclasses
import fractions
import itertools
from typing import Callable, Dict, Iterable, List, Mapping, Optional, \
  Sequence, Set, Tuple

from libravenbench.analysis import summary as summary_lib
from libravenbench.oracle import metadata as metadata_lib
from libravenbench.oracle import states

Fraction = fractions.Fraction


def Consistency(trigger_counts: Mapping[str, int], trials: int,
                bug_ids: Sequence[str]) -> Fraction:
  """Mean over bugs of the fraction of trials that triggered each bug.

  Args:
    trigger_counts (Mapping[str, int]): Trials triggering each bug; missing
        bugs count 0.
    trials (int): Number of trials T.
    bug_ids (Sequence[str]): The bug set B.

  Returns:
    Fraction: (1/|B|) * sum over B of count/T.

  Raises:
    ValueError: If B is empty, T < 1 or a count is outside [0, T].
  """
  if not bug_ids:
    raise ValueError('Consistency needs a non-empty bug set')
  if trials < 1:
    raise ValueError('Consistency needs at least one trial')
  total = Fraction(0)
  for bug_id in bug_ids:
    count = trigger_counts.get(bug_id, 0)
    if not 0 <= count <= trials:
      raise ValueError('Count {0:d} for {1:s} outside [0, {2:d}]'.format(
          count, bug_id, trials))
    total += Fraction(count, trials)
  return total / len(bug_ids)


def TrialCounts(summaries: Iterable[summary_lib.TrialSummary],
                state: states.BugState = states.BugState.TRIGGERED
               ) -> Dict[str, int]:
  """Counts, per bug, the trials that reached the given state."""
  counts = {}  # type: Dict[str, int]
  for trial in summaries:
    for bug_id, times in trial.bugs.items():
      counts.setdefault(bug_id, 0)
      if times.Get(state) is not None:
        counts[bug_id] += 1
  return counts


@dataclasses.dataclass(frozen=True)
class BugCounts:
  """Unique bugs a fuzzer found at least once across its trials.

  Attributes:
    triggered (List[str]): Bugs triggered in some trial.
    detected (List[str]): Bugs detected in some trial.
    tp_triggered (int): Triggered true positives.
    fp_triggered (int): Triggered false positives.
    tp_detected (int): Detected true positives.
    fp_detected (int): Detected false positives.
  """
  triggered: List[str]
  detected: List[str]
  tp_triggered: int
  fp_triggered: int
  tp_detected: int
  fp_detected: int


def CountBugs(summaries: Iterable[summary_lib.TrialSummary],
              metadata: Optional[Mapping[str,
                                         metadata_lib.BugMetadata]] = None
             ) -> BugCounts:
  """Counts unique triggered and detected bugs with a TP/FP split."""
  triggered = set()  # type: Set[str]
  detected = set()  # type: Set[str]
  for trial in summaries:
    triggered.update(trial.Triggered())
    detected.update(trial.Detected())
  meta = dict(metadata or {})

  def _Split(bugs: Set[str]) -> Tuple[int, int]:
    fp = sum(1 for bug_id in bugs if metadata_lib.IsFalsePositive(bug_id,
                                                                  meta))
    return len(bugs) - fp, fp

  tp_triggered, fp_triggered = _Split(triggered)
  tp_detected, fp_detected = _Split(detected)
  return BugCounts(sorted(triggered), sorted(detected), tp_triggered,
                   fp_triggered, tp_detected, fp_detected)


@dataclasses.dataclass(frozen=True)
class IntersectionGroup:
  """Bugs found by exactly one subset of fuzzers.

  Attributes:
    fuzzers (Tuple[str, ...]): The subset, sorted.
    bugs (List[str]): Bugs triggered by exactly these fuzzers.
    tp (int): True-positive bugs in the group.
    fp (int): False-positive bugs in the group.
  """
  fuzzers: Tuple[str, ...]
  bugs: List[str]
  tp: int
  fp: int


def Intersections(found: Mapping[str, Iterable[str]],
                  is_false_positive: Optional[Callable[[str], bool]] = None
                 ) -> List[IntersectionGroup]:
  """Groups bugs by the exact set of fuzzers that found them.

  Every non-empty subset of fuzzers gets a group, possibly empty. Groups are
  ordered by subset size, then by fuzzer names.

  Args:
    found (Mapping[str, Iterable[str]]): Bugs per fuzzer.
    is_false_positive (Callable[[str], bool]): Optional. FP marker; defaults
        to the FP_ prefix.

  Returns:
    List[IntersectionGroup]: 2^n - 1 disjoint groups covering every bug.

  Raises:
    ValueError: If there are no fuzzers.
  """
  if not found:
    raise ValueError('Intersections need at least one fuzzer')
  is_false_positive = is_false_positive or metadata_lib.IsFalsePositive
  fuzzers = sorted(found)
  sets = {fuzzer: set(found[fuzzer]) for fuzzer in fuzzers}
  finders = {}  # type: Dict[str, Tuple[str, ...]]
  for bug_id in sorted(set().union(*sets.values())):
    finders[bug_id] = tuple(f for f in fuzzers if bug_id in sets[f])
  groups = []
  for size in range(1, len(fuzzers) + 1):
    for subset in itertools.combinations(fuzzers, size):
      bugs = [bug_id for bug_id, who in finders.items() if who == subset]
      fp = sum(1 for bug_id in bugs if is_false_positive(bug_id))
      groups.append(IntersectionGroup(subset, bugs, len(bugs) - fp, fp))
  return groups
