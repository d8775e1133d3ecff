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
"""Bug state lattice."""

import dataclasses
import enum


class BugState(enum.IntEnum):
  """NotReached < Reached < Triggered < Detected."""
  NOT_REACHED = 0
  REACHED = 1
  TRIGGERED = 2
  DETECTED = 3

  @property
  def label(self) -> str:
    """The serialized name, e.g. 'NotReached'."""
    return _LABELS[self]

  @classmethod
  def FromLabel(cls, label: str) -> 'BugState':
    """Parses a serialized state name.

    Raises:
      ValueError: If label is not a state name.
    """
    for state, name in _LABELS.items():
      if name == label:
        return state
    raise ValueError('Unknown bug state {0:s}'.format(label))


_LABELS = {
    BugState.NOT_REACHED: 'NotReached',
    BugState.REACHED: 'Reached',
    BugState.TRIGGERED: 'Triggered',
    BugState.DETECTED: 'Detected',
}


@dataclasses.dataclass(frozen=True)
class BugObservation:
  """The final state of one bug for one input."""
  input_id: str
  bug_id: str
  state: BugState
