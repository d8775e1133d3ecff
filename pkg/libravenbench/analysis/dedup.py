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
"""Compares fuzzer-style crash bucketing against oracle bug IDs."""

import dataclasses
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, \
  Set

from libravenbench.replay import engine

PC_LR = 'pc_lr'
STACK_HASH = 'stack_hash'

_KEYS = {
    PC_LR: lambda outcome: outcome.crash_sig_pc_lr,
    STACK_HASH: lambda outcome: outcome.crash_sig_stack,
}  # type: Dict[str, Callable[[engine.ReplayOutcome], Optional[Hashable]]]
HEURISTICS = tuple(_KEYS)


@dataclasses.dataclass(frozen=True)
class DedupRow:
  """How one heuristic buckets the attributed crashes.

  Attributes:
    heuristic (str): 'pc_lr' or 'stack_hash'.
    crashes (int): Crashes with an oracle bug ID.
    groups (int): Buckets the heuristic forms.
    oracle_bugs (int): Distinct oracle bug IDs.
    conflations (int): Buckets holding two or more oracle bugs.
    splits (int): Oracle bugs spread over two or more buckets.
  """
  heuristic: str
  crashes: int
  groups: int
  oracle_bugs: int
  conflations: int
  splits: int

  def AsDict(self) -> Dict[str, Any]:
    return dataclasses.asdict(self)


def DedupCompare(outcomes: Iterable[engine.ReplayOutcome]) -> List[DedupRow]:
  """Groups crashes by each heuristic and counts disagreements.

  Only crashing outcomes with a first-triggered bug are compared.

  Args:
    outcomes (Iterable[ReplayOutcome]): Replay outcomes.

  Returns:
    List[DedupRow]: One row per heuristic, in HEURISTICS order.
  """
  crashes = [outcome for outcome in outcomes
             if outcome.is_crash and outcome.first_triggered]
  oracle_ids = {outcome.first_triggered for outcome in crashes}
  rows = []
  for heuristic in HEURISTICS:
    key = _KEYS[heuristic]
    bugs_per_group = {}  # type: Dict[Hashable, Set[str]]
    groups_per_bug = {}  # type: Dict[str, Set[Hashable]]
    for outcome in crashes:
      group = key(outcome)
      bug_id = outcome.first_triggered
      assert bug_id is not None
      bugs_per_group.setdefault(group, set()).add(bug_id)
      groups_per_bug.setdefault(bug_id, set()).add(group)
    rows.append(DedupRow(
        heuristic=heuristic,
        crashes=len(crashes),
        groups=len(bugs_per_group),
        oracle_bugs=len(oracle_ids),
        conflations=sum(1 for bugs in bugs_per_group.values()
                        if len(bugs) >= 2),
        splits=sum(1 for groups in groups_per_bug.values()
                   if len(groups) >= 2)))
  return rows
