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
"""Tests for the replay module - engine.py"""

import os
import tempfile
import typing
import unittest

import mock

from libravenbench import errors
from libravenbench.emulation import api
from libravenbench.oracle import session
from libravenbench.oracle import states
from libravenbench.replay import corpus
from libravenbench.replay import engine
from tests import bench_mocks


class _InlineExecutor:
  """Runs the worker initializer and map in the calling process."""

  def __init__(self, max_workers, mp_context, initializer, initargs):
    del max_workers, mp_context  # Unused.
    initializer(*initargs)

  def __enter__(self):
    return self

  def __exit__(self, *args):
    return False

  @staticmethod
  def map(func, iterable, chunksize=1):
    del chunksize  # Unused.
    return [func(item) for item in iterable]


def _Replay(name, **kwargs):
  bundle = bench_mocks.Fixtures()[name]
  options = engine.ReplayOptions(metadata=bundle.ravens.metadata,
                                 limits=bundle.limits, **kwargs)
  return engine.ReplayAll(bundle.Records(), bundle.image,
                          bundle.ravens.programs, options)


class ReplayAllTest(unittest.TestCase):
  """Test replaying corpora."""

  @typing.no_type_check
  def testExploitCorpus(self):
    """Test that seeds 7 to 10 crash and carry signatures."""
    outcomes = _Replay('exploit')
    self.assertEqual(10, len(outcomes))
    crashed = [outcome.input_id for outcome in outcomes if outcome.is_crash]
    self.assertEqual(['crashes/id_{0:06d}'.format(index)
                      for index in range(7, 11)], crashed)
    for outcome in outcomes:
      self.assertEqual(outcome.is_crash, outcome.crash_sig_pc_lr is not None)
      self.assertEqual(outcome.is_crash, outcome.crash_sig_stack is not None)
      self.assertIsNone(outcome.error)
    self.assertEqual(0x41414141, outcomes[6].crash_sig_pc_lr[0])

  @typing.no_type_check
  def testEmptyCorpus(self):
    """Test that an empty corpus replays to nothing."""
    bundle = bench_mocks.Fixtures()['exploit']
    self.assertEqual([], engine.ReplayAll([], bundle.image,
                                          bundle.ravens.programs))

  @typing.no_type_check
  def testDeterminism(self):
    """Test that two replays produce identical outcome lines."""
    first = [outcome.ToJson() for outcome in _Replay('irq_timing')]
    second = [outcome.ToJson() for outcome in _Replay('irq_timing')]
    self.assertEqual(first, second)

  @typing.no_type_check
  @mock.patch('libravenbench.replay.engine.futures.ProcessPoolExecutor',
              _InlineExecutor)
  def testJobsDoNotChangeOutcomes(self):
    """Test that the parallel path returns outcomes in record order."""
    serial = _Replay('gateway')
    parallel = _Replay('gateway', jobs=3)
    self.assertEqual([outcome.ToJson() for outcome in serial],
                     [outcome.ToJson() for outcome in parallel])

  @typing.no_type_check
  def testIsolation(self):
    """Test that Ravens leave terminations, counts and coverage unchanged."""
    for name in bench_mocks.Fixtures().names:
      bundle = bench_mocks.Fixtures()[name]
      options = engine.ReplayOptions(limits=bundle.limits)
      records = bundle.Records() + bundle.Mutations(8)
      with_ravens = engine.ReplayAll(records, bundle.image,
                                     bundle.ravens.programs, options)
      without = engine.ReplayAll(records, bundle.image, [], options)
      for loaded, bare in zip(with_ravens, without):
        self.assertEqual(
            (bare.termination, bare.instructions_executed,
             bare.covered_blocks),
            (loaded.termination, loaded.instructions_executed,
             loaded.covered_blocks), loaded.input_id)
        self.assertEqual({}, bare.observations)

  @typing.no_type_check
  def testCoverageUnion(self):
    """Test the corpus coverage union and its monotonicity."""
    bundle = bench_mocks.Fixtures()['exploit']
    outcomes = _Replay('exploit')
    union = engine.CoverageUnion(outcomes)
    self.assertEqual(frozenset(bundle.expected['coverage_union']), union)
    for outcome in outcomes:
      self.assertLessEqual(set(outcome.covered_blocks), union)

  @typing.no_type_check
  def testLiveModeCoverage(self):
    """Test that an active exploit bug reduces coverage to the patched set."""
    exploit = bench_mocks.Fixtures()['exploit']
    patched = engine.CoverageUnion(_Replay('exploit_patched'))
    unpatched = engine.CoverageUnion(_Replay('exploit'))
    self.assertLess(patched, unpatched)
    live = _Replay('exploit', mode=session.Mode.LIVE,
                   active=frozenset(exploit.expected['live_active']))
    self.assertEqual(patched, engine.CoverageUnion(live))
    aborted = [outcome.input_id for outcome in live
               if outcome.termination.kind == api.TerminationKind.ORACLE_ABORT]
    self.assertEqual(exploit.expected['live_aborted'], aborted)

  @typing.no_type_check
  def testReplayRecordFailure(self):
    """Test that a failing input is recorded, not raised."""
    record = corpus.InputRecord('queue/bad', b'', 0.0, corpus.LABEL_QUEUE)
    oracle = mock.Mock(bug_ids=['A', 'B'])
    oracle.RunInput.side_effect = errors.InvalidAccessError(
        'backend failure', __name__)
    outcome = engine.ReplayRecord(oracle, record)
    self.assertEqual('backend failure', outcome.error)
    self.assertIsNone(outcome.termination)
    self.assertEqual({'A': states.BugState.NOT_REACHED,
                      'B': states.BugState.NOT_REACHED}, outcome.observations)
    oracle.RunInput.side_effect = RuntimeError('unexpected')
    self.assertEqual('unexpected', engine.ReplayRecord(oracle, record).error)


class OutcomeFileTest(unittest.TestCase):
  """Test outcomes.jsonl and replay_meta.json."""

  @typing.no_type_check
  def testOutcomesRoundTrip(self):
    """Test writing and reading outcomes, including a failed one."""
    outcomes = _Replay('irq_timing')
    outcomes.append(engine.ReplayRecord(
        mock.Mock(bug_ids=['IRQ_PTR'],
                  RunInput=mock.Mock(side_effect=RuntimeError('boom'))),
        corpus.InputRecord('queue/broken', b'', 0.0, corpus.LABEL_QUEUE)))
    with tempfile.TemporaryDirectory() as tmp_dir:
      path = os.path.join(tmp_dir, engine.OUTCOMES_FILE)
      engine.WriteOutcomes(outcomes, path)
      self.assertEqual(outcomes, engine.ReadOutcomes(path))

  @typing.no_type_check
  def testOutcomeJson(self):
    """Test the field names of the outcome dump."""
    outcome = _Replay('irq_timing')[1]
    data = outcome.AsDict()
    self.assertEqual(
        ['covered_blocks', 'crash_sig_pc_lr', 'crash_sig_stack',
         'first_triggered', 'flags', 'input_id', 'observations',
         'termination'], sorted(data))
    self.assertEqual({'IRQ_PTR': 'Detected'}, data['observations'])
    self.assertEqual([0xb8, 0xa8], data['crash_sig_pc_lr'])
    self.assertEqual('UnmappedRead', data['termination']['reason'])
    self.assertGreater(data['termination']['instructions_executed'], 0)

  @typing.no_type_check
  def testReadOutcomesErrors(self):
    """Test malformed outcome files."""
    with tempfile.TemporaryDirectory() as tmp_dir:
      path = os.path.join(tmp_dir, engine.OUTCOMES_FILE)
      for content in ('{\n', '[]\n', '{"input_id": "a"}\n'):
        with open(path, 'w', encoding='utf-8') as outcomes_file:
          outcomes_file.write(content)
        with self.assertRaises(errors.ReportFormatError):
          engine.ReadOutcomes(path)
      with self.assertRaises(errors.ReportFormatError):
        engine.ReadOutcomes(os.path.join(tmp_dir, 'missing.jsonl'))

  @typing.no_type_check
  def testReplayMeta(self):
    """Test the per-trial context file."""
    bundle = bench_mocks.Fixtures()['magic']
    records = bundle.Records('hoedur', 2)
    meta = engine.ReplayMeta.FromRecords(bundle.image, 'hoedur', 2, records)
    with tempfile.TemporaryDirectory() as tmp_dir:
      path = os.path.join(tmp_dir, engine.REPLAY_META_FILE)
      meta.Write(path)
      loaded = engine.ReplayMeta.Read(path)
      with self.assertRaises(errors.ReportFormatError):
        engine.ReplayMeta.Read(os.path.join(tmp_dir, 'missing.json'))
    self.assertEqual(meta, loaded)
    self.assertEqual(bundle.image.sha256, loaded.target_sha256)
    rebuilt = loaded.ToRecords()
    self.assertEqual([record.input_id for record in records],
                     [record.input_id for record in rebuilt])
    self.assertEqual([record.timestamp_s for record in records],
                     [record.timestamp_s for record in rebuilt])
    self.assertEqual(b'', rebuilt[0].data)
    self.assertEqual(('hoedur', 2), (rebuilt[0].fuzzer, rebuilt[0].trial))


if __name__ == '__main__':
  unittest.main()
