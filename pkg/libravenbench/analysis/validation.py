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
"""Raven set validation against crashing seeds."""

import dataclasses
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from libravenbench import logging_utils
from libravenbench.oracle import states
from libravenbench.replay import engine

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)


@dataclasses.dataclass(frozen=True)
class CrossMatch:
  """A crash attributed to one bug that another Raven also claims.

  Attributes:
    input_id (str): The crashing input.
    attributed (str): The bug it was attributed to.
    also_matched (str): The other bug detected on it.
  """
  input_id: str
  attributed: str
  also_matched: str


@dataclasses.dataclass
class ValidationReport:
  """Result of replaying crashing seeds against a Raven set.

  Attributes:
    crashes (int): Crashing seeds replayed.
    unlabeled (List[str]): Crash seeds no Raven detected.
    cross_matches (List[CrossMatch]): Crashes claimed by several bugs.
    matched (Dict[str, int]): Crashes detected, per bug.
    failed (List[str]): Inputs whose replay itself failed.
    not_reproduced (List[str]): Seeds labelled as crashes that did not
        crash on replay. They are also unlabeled.
  """
  crashes: int
  unlabeled: List[str]
  cross_matches: List[CrossMatch]
  matched: Dict[str, int]
  failed: List[str] = dataclasses.field(default_factory=list)
  not_reproduced: List[str] = dataclasses.field(default_factory=list)

  @property
  def complete(self) -> bool:
    """True iff every crash seed is explained by a Raven."""
    return not self.unlabeled

  def Render(self) -> str:
    """Human-readable verdict."""
    lines = ['{0:d} crash(es), {1:d} unlabeled, {2:d} cross-match(es)'.format(
        self.crashes, len(self.unlabeled), len(self.cross_matches))]
    for input_id in self.unlabeled:
      suffix = ' (not reproduced)' if input_id in self.not_reproduced else ''
      lines.append('  unlabeled: {0:s}{1:s}'.format(input_id, suffix))
    for match in self.cross_matches:
      lines.append('  cross-match: {0:s} attributed to {1:s} also matches '
                   '{2:s}'.format(match.input_id, match.attributed,
                                  match.also_matched))
    for input_id in self.failed:
      lines.append('  replay failed: {0:s}'.format(input_id))
    for bug_id, count in sorted(self.matched.items()):
      lines.append('  {0:s}: {1:d} seed(s)'.format(bug_id, count))
    lines.append('complete' if self.complete else 'incomplete')
    return '\n'.join(lines)


def ValidateRavens(outcomes: Iterable[engine.ReplayOutcome],
                   bug_ids: Sequence[str] = (),
                   previous_attribution: Optional[Mapping[str, str]] = None
                  ) -> ValidationReport:
  """Checks that every crashing seed is detected by exactly one Raven.

  Without a previous attribution, a crash detected by several bugs is a
  cross-match between its first-triggered bug and each other bug.

  Args:
    outcomes (Iterable[ReplayOutcome]): Replays of the crashing seeds.
    bug_ids (Sequence[str]): Optional. Bugs to list even with no match.
    previous_attribution (Mapping[str, str]): Optional. Bug each input was
        attributed to before the Raven set changed.

  Returns:
    ValidationReport: Unlabeled crashes, cross-matches and counts.
  """
  previous = dict(previous_attribution or {})
  matched = {bug_id: 0 for bug_id in bug_ids}  # type: Dict[str, int]
  unlabeled = []  # type: List[str]
  cross = []  # type: List[CrossMatch]
  failed = []  # type: List[str]
  not_reproduced = []  # type: List[str]
  crashes = 0
  for outcome in sorted(outcomes, key=lambda item: item.input_id):
    if outcome.error:
      failed.append(outcome.input_id)
      continue
    if not outcome.is_crash:
      if outcome.flags.get('label_mismatch'):
        not_reproduced.append(outcome.input_id)
        unlabeled.append(outcome.input_id)
      continue
    crashes += 1
    detected = sorted(bug_id for bug_id, state in outcome.observations.items()
                      if state == states.BugState.DETECTED)
    for bug_id in detected:
      matched[bug_id] = matched.get(bug_id, 0) + 1
    if not detected:
      unlabeled.append(outcome.input_id)
      continue
    attributed = previous.get(outcome.input_id)
    if attributed is None:
      if len(detected) < 2:
        continue
      attributed = outcome.first_triggered or detected[0]
    for bug_id in detected:
      if bug_id != attributed:
        cross.append(CrossMatch(outcome.input_id, attributed, bug_id))
  report = ValidationReport(crashes, unlabeled, cross, matched, failed,
                            not_reproduced)
  logger.info('Validated {0:d} crash(es): {1:d} unlabeled, {2:d} '
              'cross-match(es), {3:d} not reproduced'.format(
                  crashes, len(unlabeled), len(cross), len(not_reproduced)))
  return report
