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
"""Tests for the analysis module - summary.py"""

import typing
import unittest

from libravenbench.analysis import summary
from libravenbench.oracle import states
from libravenbench.replay import engine
from tests import bench_mocks


def _ExploitOutcomes():
  bundle = bench_mocks.Fixtures()['exploit']
  return bundle, engine.ReplayAll(
      bundle.Records(), bundle.image, bundle.ravens.programs,
      engine.ReplayOptions(metadata=bundle.ravens.metadata,
                           limits=bundle.limits))


class SummarizeTrialTest(unittest.TestCase):
  """Test per-trial bug timing."""

  @typing.no_type_check
  def testEarliestTimes(self):
    """Test earliest reached, triggered and detected times."""
    bundle, outcomes = _ExploitOutcomes()
    trial = summary.SummarizeTrial(outcomes, bundle.Records('afl', 1), 'afl',
                                   1, target_sha256=bundle.image.sha256)
    self.assertEqual(summary.BugTimes(5.0, 1300.0, 2600.0),
                     trial.bugs['FRB_OVF1'])
    self.assertEqual(['FRB_OVF1'], trial.Triggered())
    self.assertEqual(['FRB_OVF1'], trial.Detected())
    self.assertEqual({'FRB_OVF1': 4}, trial.crash_counts)
    self.assertEqual(0, trial.unattributed_crashes)
    self.assertEqual(frozenset(bundle.expected['coverage_union']),
                     trial.coverage)
    self.assertEqual(('afl', 1, bundle.image.sha256),
                     (trial.fuzzer, trial.trial, trial.target_sha256))

  @typing.no_type_check
  def testHorizon(self):
    """Test that events after the horizon are left unset."""
    bundle, outcomes = _ExploitOutcomes()
    trial = summary.SummarizeTrial(outcomes, bundle.Records(), horizon_s=2000)
    self.assertEqual(summary.BugTimes(5.0, 1300.0, None),
                     trial.bugs['FRB_OVF1'])
    self.assertEqual([], trial.Detected())
    trial = summary.SummarizeTrial(outcomes, bundle.Records(time_offset=100),
                                   horizon_s=100)
    self.assertEqual(summary.BugTimes(), trial.bugs['FRB_OVF1'])

  @typing.no_type_check
  def testKnownBugsAndMissingTimestamps(self):
    """Test listed bugs without observations and untimed outcomes."""
    bundle, outcomes = _ExploitOutcomes()
    records = bundle.Records()[:6]
    trial = summary.SummarizeTrial(outcomes, records,
                                   bug_ids=['FRB_OVF1', 'GHOST'])
    self.assertEqual(['FRB_OVF1', 'GHOST'], sorted(trial.bugs))
    self.assertEqual(summary.BugTimes(), trial.bugs['GHOST'])
    self.assertEqual(summary.BugTimes(5.0, 1300.0, None),
                     trial.bugs['FRB_OVF1'])
    self.assertEqual({}, trial.crash_counts)

  @typing.no_type_check
  def testUnattributedCrashes(self):
    """Test crashes that no Raven triggered on."""
    bundle = bench_mocks.Fixtures()['exploit']
    outcomes = engine.ReplayAll(bundle.Records(), bundle.image, [],
                                engine.ReplayOptions(limits=bundle.limits))
    trial = summary.SummarizeTrial(outcomes, bundle.Records())
    self.assertEqual({}, trial.bugs)
    self.assertEqual(4, trial.unattributed_crashes)

  @typing.no_type_check
  def testBugTimesGet(self):
    """Test the per-state accessor."""
    times = summary.BugTimes(1.0, 2.0, 3.0)
    self.assertEqual(
        [1.0, 2.0, 3.0],
        [times.Get(state) for state in (states.BugState.REACHED,
                                       states.BugState.TRIGGERED,
                                       states.BugState.DETECTED)])


if __name__ == '__main__':
  unittest.main()
