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
"""Tests for the replay module - corpus.py"""

import json
import os
import tempfile
import typing
import unittest

import mock

from libravenbench import errors
from libravenbench.replay import corpus
from tests import bench_mocks


def _Write(root, relpath, data=b'x'):
  path = os.path.join(root, relpath)
  os.makedirs(os.path.dirname(path), exist_ok=True)
  with open(path, 'wb') as seed_file:
    seed_file.write(data)
  return path


def _Log(root, entries, name=corpus.LOG_FILE):
  path = os.path.join(root, name)
  with open(path, 'w', encoding='utf-8') as log_file:
    for entry in entries:
      if not isinstance(entry, str):
        entry = json.dumps(entry)
      log_file.write(entry + '\n')
  return path


class IngestCampaignTest(unittest.TestCase):
  """Test reading trial corpora and fuzzing logs."""

  @typing.no_type_check
  def testSortedByLogTime(self):
    """Test that records follow the logged timestamps."""
    with tempfile.TemporaryDirectory() as trial:
      for name in ('queue/c', 'queue/a', 'queue/b', 'crashes/d'):
        _Write(trial, name, name.encode('utf-8'))
      _Log(trial, [
          {'file': 'crashes/d', 't': 40, 'kind': 'crash'},
          {'file': 'queue/b', 't': 20.0, 'kind': 'queue'},
          {'file': 'queue/c', 't': 10, 'kind': 'queue'},
          {'file': 'queue/a', 't': 30.5, 'kind': 'queue'},
      ])
      result = corpus.IngestCampaign(trial, fuzzer='afl', trial=3)
    self.assertEqual(['queue/c', 'queue/b', 'queue/a', 'crashes/d'],
                     [record.input_id for record in result.records])
    self.assertEqual([10.0, 20.0, 30.5, 40.0],
                     [record.timestamp_s for record in result.records])
    crash = result.records[-1]
    self.assertEqual(corpus.LABEL_CRASH, crash.label)
    self.assertEqual(b'crashes/d', crash.data)
    self.assertEqual(('afl', 3), (crash.fuzzer, crash.trial))
    self.assertEqual(corpus.TIMESTAMP_FROM_LOG, crash.timestamp_source)
    self.assertEqual(0, result.malformed_lines)
    self.assertEqual([], result.warnings)

  @typing.no_type_check
  def testFixtureCorpus(self):
    """Test ingesting a corpus written by a fixture bundle."""
    bundle = bench_mocks.Fixtures()['exploit']
    with tempfile.TemporaryDirectory() as trial:
      bundle.WriteCorpus(trial)
      result = corpus.IngestCampaign(trial, os.path.join(trial,
                                                         corpus.LOG_FILE))
    self.assertEqual(bundle.Records(), result.records)

  @typing.no_type_check
  def testMissingAndMalformed(self):
    """Test log lines naming missing files and malformed lines."""
    with tempfile.TemporaryDirectory() as trial:
      _Write(trial, 'queue/a')
      _Log(trial, [
          {'file': 'queue/a', 't': 5, 'kind': 'queue'},
          {'file': 'queue/gone', 't': 6, 'kind': 'queue'},
          'not json',
          {'file': 'queue/a', 't': -1, 'kind': 'queue'},
          {'file': 'queue/a', 't': True, 'kind': 'queue'},
          {'file': 'queue/a', 't': 1, 'kind': 'hang'},
          {'t': 1, 'kind': 'queue'},
          '',
      ])
      result = corpus.IngestCampaign(trial)
    self.assertEqual(['queue/a'], [record.input_id
                                   for record in result.records])
    self.assertEqual(5, result.malformed_lines)
    self.assertIn('Log references missing file queue/gone; dropped',
                  result.warnings)

  @typing.no_type_check
  def testEarliestLogEntryWins(self):
    """Test duplicate log entries and label disagreements."""
    with tempfile.TemporaryDirectory() as trial:
      _Write(trial, 'crashes/a')
      log_path = _Log(trial, [
          {'file': 'crashes/a', 't': 90, 'kind': 'crash'},
          {'file': 'crashes/a', 't': 70, 'kind': 'queue'},
      ], name='other_log.jsonl')
      result = corpus.IngestCampaign(trial, log_path)
    self.assertEqual(70.0, result.records[0].timestamp_s)
    self.assertEqual(corpus.LABEL_CRASH, result.records[0].label)
    self.assertIn('crashes/a is logged as queue but stored as crash',
                  result.warnings)

  @typing.no_type_check
  @mock.patch.dict(os.environ, {corpus.MTIME_FALLBACK_ENV: '1'})
  def testMtimeFallback(self):
    """Test that unlogged seeds are timed from the logged campaign start."""
    with tempfile.TemporaryDirectory() as trial:
      os.utime(_Write(trial, 'queue/late'), (1060, 1060))
      os.utime(_Write(trial, 'queue/early'), (1000, 1000))
      os.utime(_Write(trial, 'queue/logged'), (1030, 1030))
      _Log(trial, [{'file': 'queue/logged', 't': 30, 'kind': 'queue'}])
      result = corpus.IngestCampaign(trial)
    self.assertEqual(
        [('queue/early', 0.0, corpus.TIMESTAMP_FROM_MTIME),
         ('queue/logged', 30.0, corpus.TIMESTAMP_FROM_LOG),
         ('queue/late', 60.0, corpus.TIMESTAMP_FROM_MTIME)],
        [(record.input_id, record.timestamp_s, record.timestamp_source)
         for record in result.records])
    self.assertIn('2 input(s) not in the log use file mtime timestamps '
                  'relative to the logged campaign start', result.warnings)

  @typing.no_type_check
  @mock.patch.dict(os.environ, {corpus.MTIME_FALLBACK_ENV: '1'})
  def testMtimeFallbackSharesLogTimebase(self):
    """Test that mtime and logged timestamps interleave on one timebase."""
    with tempfile.TemporaryDirectory() as trial:
      os.utime(_Write(trial, 'queue/early'), (1000, 1000))
      os.utime(_Write(trial, 'queue/late'), (1060, 1060))
      os.utime(_Write(trial, 'queue/logged'), (1010, 1010))
      _Log(trial, [{'file': 'queue/logged', 't': 50, 'kind': 'queue'}])
      result = corpus.IngestCampaign(trial)
    self.assertEqual(
        [('queue/early', 40.0), ('queue/logged', 50.0), ('queue/late', 100.0)],
        [(record.input_id, record.timestamp_s) for record in result.records])

  @typing.no_type_check
  @mock.patch.dict(os.environ, {corpus.MTIME_FALLBACK_ENV: '1'})
  def testMtimeFallbackWithoutLog(self):
    """Test that without a log seeds are timed from the oldest seed."""
    with tempfile.TemporaryDirectory() as trial:
      os.utime(_Write(trial, 'queue/b'), (1045, 1045))
      os.utime(_Write(trial, 'crashes/a'), (1000, 1000))
      result = corpus.IngestCampaign(trial)
    self.assertEqual(
        [('crashes/a', 0.0), ('queue/b', 45.0)],
        [(record.input_id, record.timestamp_s) for record in result.records])
    self.assertIn('2 input(s) not in the log use file mtime timestamps '
                  'relative to the oldest seed', result.warnings)

  @typing.no_type_check
  @mock.patch.dict(os.environ, {corpus.MTIME_FALLBACK_ENV: '0'})
  def testMtimeFallbackDisabled(self):
    """Test that FRB_SEED_MTIME_FALLBACK=0 drops unlogged seeds."""
    self.assertFalse(corpus.MtimeFallbackEnabled())
    with tempfile.TemporaryDirectory() as trial:
      _Write(trial, 'queue/unlogged')
      _Write(trial, 'queue/logged')
      _Log(trial, [{'file': 'queue/logged', 't': 1, 'kind': 'queue'}])
      result = corpus.IngestCampaign(trial)
    self.assertEqual(['queue/logged'], [record.input_id
                                        for record in result.records])
    self.assertIn('queue/unlogged is not in the log; dropped',
                  result.warnings)

  @typing.no_type_check
  def testMissingCorpus(self):
    """Test that a missing trial directory is an error."""
    with tempfile.TemporaryDirectory() as tmp_dir:
      with self.assertRaises(errors.CorpusError):
        corpus.IngestCampaign(os.path.join(tmp_dir, 'missing'))


class AdapterTest(unittest.TestCase):
  """Test seed format adapters."""

  @typing.no_type_check
  def testRawBytes(self):
    """Test the passthrough adapter."""
    self.assertEqual(b'\x00\x01', corpus.RawBytes(bytearray(b'\x00\x01')))

  @typing.no_type_check
  def testFlattenMultiStream(self):
    """Test flattening in access order, stopping at a short stream."""
    streams = {'uart': b'\x01\x02\x03', 'gpio': b'\x10\x20\x30'}
    order = [['uart', 1], ['gpio', 2], 'uart', ['gpio', 1], ['uart', 4],
             'gpio']
    self.assertEqual(b'\x01\x10\x20\x02\x30',
                     corpus.FlattenMultiStream(streams, order))
    self.assertEqual(b'', corpus.FlattenMultiStream(streams, []))

  @typing.no_type_check
  def testFlattenMultiStreamErrors(self):
    """Test malformed accesses and unknown streams."""
    for order in ([['uart', 0]], [['uart']], [3], [['spi', 1]]):
      with self.assertRaises(errors.CorpusError):
        corpus.FlattenMultiStream({'uart': b'\x01'}, order)

  @typing.no_type_check
  def testMultiStreamSeed(self):
    """Test that a multi-stream seed directory becomes one record."""
    with tempfile.TemporaryDirectory() as trial:
      seed_dir = os.path.join(trial, corpus.QUEUE_DIR, 'id_000001')
      _Write(seed_dir, 'uart', b'AB')
      _Write(seed_dir, 'timer', b'\x07')
      with open(os.path.join(seed_dir, corpus.ORDER_FILE), 'w',
                encoding='utf-8') as order_file:
        json.dump({'order': [['uart', 1], 'timer', ['uart', 1]]}, order_file)
      os.makedirs(os.path.join(trial, corpus.QUEUE_DIR, 'no_order'))
      _Log(trial, [{'file': 'queue/id_000001', 't': 2, 'kind': 'queue'},
                   {'file': 'queue/no_order', 't': 3, 'kind': 'queue'}])
      result = corpus.IngestCampaign(trial)
    self.assertEqual(1, len(result.records))
    self.assertEqual(b'A\x07B', result.records[0].data)
    self.assertIn('queue/no_order is a directory without order.json; skipped',
                  result.warnings)

  @typing.no_type_check
  def testMultiStreamSeedErrors(self):
    """Test seed directories with a broken order file."""
    with tempfile.TemporaryDirectory() as seed_dir:
      order_path = os.path.join(seed_dir, corpus.ORDER_FILE)
      with self.assertRaises(errors.CorpusError):
        corpus.LoadMultiStreamSeed(seed_dir)
      with open(order_path, 'w', encoding='utf-8') as order_file:
        json.dump({'order': 'uart'}, order_file)
      with self.assertRaises(errors.CorpusError):
        corpus.LoadMultiStreamSeed(seed_dir)


if __name__ == '__main__':
  unittest.main()
