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
"""Tests for the ravenbench CLI - cli.py and bench_cli.py"""

import argparse
import glob
import json
import logging
import os
import shutil
import tempfile
import typing
import unittest

import mock

from libravenbench.analysis import report
from libravenbench.replay import engine
from tests import bench_mocks
from tools import bench_cli
from tools import cli


class ParserTest(unittest.TestCase):
  """Test argument parsing and usage errors."""

  @typing.no_type_check
  def testNoArguments(self):
    """Test that running without a command is a usage error."""
    with mock.patch('sys.stdout'), mock.patch(
        'tools.cli.logging_utils.SetLogLevel') as mock_level:
      self.assertEqual(bench_cli.EXIT_USAGE, cli.Main([]))
      self.assertEqual(bench_cli.EXIT_USAGE, cli.Main(['--verbose']))
    mock_level.assert_called_once_with(logging.DEBUG)

  @typing.no_type_check
  def testBadArguments(self):
    """Test unknown commands, unknown flags and missing required flags."""
    for argv in (['bogus'], ['chart', '--report', 'r.json'],
                 ['replay', '--target', 't.mvm', '--nope', '1'],
                 ['analyze', '--outcomes', '*', '--out', 'x',
                  '--horizon', 'soon']):
      with mock.patch('sys.stderr'):
        with self.assertRaises(SystemExit) as context:
          cli.Main(argv)
      self.assertEqual(bench_cli.EXIT_USAGE, context.exception.code, argv)

  @typing.no_type_check
  def testParserDefaults(self):
    """Test flag types and defaults."""
    args = cli.BuildParser().parse_args(
        ['validate', '--target', 't.asm', '--ravens', 'r', '--crashes', 'c',
         '--add_raven', 'a.raven', '--add_raven', 'b.raven', '--jobs', '4'])
    self.assertEqual(['a.raven', 'b.raven'], args.add_raven)
    self.assertEqual(4, args.jobs)
    self.assertIsNone(args.previous)
    self.assertEqual(bench_cli.Validate, args.func)
    args = cli.BuildParser().parse_args(
        ['replay', '--target', 't', '--ravens', 'r', '--corpus', 'c',
         '--live'])
    self.assertTrue(args.live)
    self.assertEqual(('unknown', 0), (args.fuzzer, args.trial))

  @typing.no_type_check
  def testAddParserUnknownCommand(self):
    """Test that only implemented commands can be added."""
    subparsers = argparse.ArgumentParser().add_subparsers()
    with self.assertRaises(NotImplementedError):
      cli.AddParser(subparsers, 'fuzz', 'Not a command.')


class PipelineTest(unittest.TestCase):
  """Test the commands end to end on materialized fixtures."""

  def setUp(self):
    super().setUp()
    self.tmp_dir = tempfile.mkdtemp()

  def tearDown(self):
    shutil.rmtree(self.tmp_dir)
    super().tearDown()

  def _Path(self, *parts):
    return os.path.join(self.tmp_dir, *parts)

  def _Fixture(self, name):
    self.assertEqual(bench_cli.EXIT_OK, cli.Main(
        ['fixtures', '--out', self._Path('fixtures'), '--bundle', name]))
    return self._Path('fixtures', name)

  def _Replay(self, bundle_dir, corpus_dir, fuzzer, trial):
    return cli.Main([
        'replay', '--target', os.path.join(bundle_dir, 'target.mvm'),
        '--ravens', os.path.join(bundle_dir, 'ravens'),
        '--corpus', corpus_dir, '--fuzzer', fuzzer, '--trial', str(trial),
        '--out', self._Path('trials', '{0:s}_{1:d}'.format(fuzzer, trial))])

  @typing.no_type_check
  def testExploitPipeline(self):
    """Test fixtures, replay, analyze and chart on the exploit bundle."""
    bundle_dir = self._Fixture('exploit')
    bundle = bench_mocks.Fixtures()['exploit']
    self.assertEqual(bench_cli.EXIT_OK, self._Replay(
        bundle_dir, os.path.join(bundle_dir, 'corpus'), 'afl', 0))
    later = bundle.WriteCorpus(self._Path('corpus_afl_1'), time_offset=200.0)
    self.assertEqual(bench_cli.EXIT_OK, self._Replay(bundle_dir, later,
                                                     'afl', 1))
    early = bundle.WriteCorpus(self._Path('corpus_hoedur_0'),
                               seeds=bundle.seeds[:5])
    self.assertEqual(bench_cli.EXIT_OK, self._Replay(bundle_dir, early,
                                                     'hoedur', 0))
    outcomes = engine.ReadOutcomes(self._Path('trials', 'afl_0',
                                              engine.OUTCOMES_FILE))
    self.assertEqual(10, len(outcomes))
    meta = engine.ReplayMeta.Read(self._Path('trials', 'afl_0',
                                             engine.REPLAY_META_FILE))
    self.assertEqual(bundle.image.sha256, meta.target_sha256)

    self.assertEqual(bench_cli.EXIT_OK, cli.Main([
        'analyze', '--outcomes', self._Path('trials', '*'),
        '--ravens', os.path.join(bundle_dir, 'ravens'),
        '--out', self._Path('report')]))
    campaign = report.ReadReport(self._Path('report', report.REPORT_FILE))
    self.assertEqual(['afl', 'hoedur'], campaign.fuzzers)
    self.assertEqual(1300.0, campaign.per_bug['afl']['FRB_OVF1'][
        'median_triggered_s'])
    self.assertEqual('CWE-121', campaign.bugs[0]['cwe'])
    self.assertEqual(
        ['afl__FRB_OVF1.csv', 'hoedur__FRB_OVF1.csv'],
        sorted(os.listdir(self._Path('report', report.SURVIVAL_DIR))))

    self.assertEqual(bench_cli.EXIT_OK, cli.Main([
        'chart', '--report', self._Path('report', report.REPORT_FILE),
        '--out', self._Path('charts')]))
    self.assertEqual(
        ['consistency.svg', 'intersections.svg', 'survival_FRB_OVF1.svg'],
        sorted(os.listdir(self._Path('charts'))))

  @typing.no_type_check
  def testLiveReplay(self):
    """Test Live mode from the command line."""
    bundle_dir = self._Fixture('exploit')
    self.assertEqual(bench_cli.EXIT_OK, cli.Main([
        'replay', '--target', os.path.join(bundle_dir, 'target.asm'),
        '--ravens', os.path.join(bundle_dir, 'ravens'),
        '--corpus', os.path.join(bundle_dir, 'corpus'), '--live',
        '--active', 'FRB_OVF1', '--out', self._Path('live')]))
    outcomes = engine.ReadOutcomes(self._Path('live', engine.OUTCOMES_FILE))
    self.assertEqual(
        bench_mocks.Fixtures()['exploit'].expected['live_coverage_union'],
        sorted(engine.CoverageUnion(outcomes)))

  @typing.no_type_check
  def testReplayDefaultsToCorpusDirectory(self):
    """Test that outcomes land in the corpus without --out."""
    bundle_dir = self._Fixture('magic')
    corpus_dir = os.path.join(bundle_dir, 'corpus')
    self.assertEqual(bench_cli.EXIT_OK, cli.Main([
        'replay', '--target', os.path.join(bundle_dir, 'target.mvm'),
        '--ravens', os.path.join(bundle_dir, 'ravens'),
        '--corpus', corpus_dir]))
    self.assertTrue(os.path.exists(os.path.join(corpus_dir,
                                                engine.OUTCOMES_FILE)))
    self.assertTrue(os.path.exists(os.path.join(corpus_dir,
                                                engine.REPLAY_META_FILE)))

  @typing.no_type_check
  @mock.patch('builtins.print')
  def testValidate(self, mock_print):
    """Test complete, incomplete and extended Raven sets."""
    bundle_dir = self._Fixture('gateway')
    ravens_dir = os.path.join(bundle_dir, 'ravens')
    crashes = os.path.join(bundle_dir, 'corpus')
    target = os.path.join(bundle_dir, 'target.mvm')
    self.assertEqual(bench_cli.EXIT_OK, cli.Main([
        'validate', '--target', target, '--ravens', ravens_dir,
        '--crashes', crashes]))
    self.assertEqual('complete',
                     mock_print.call_args[0][0].splitlines()[-1])

    partial = self._Path('partial_ravens')
    os.makedirs(partial)
    shutil.copy(os.path.join(ravens_dir, 'gw_pins.raven'), partial)
    self.assertEqual(bench_cli.EXIT_VALIDATION, cli.Main([
        'validate', '--target', target, '--ravens', partial,
        '--crashes', os.path.join(crashes, 'crashes')]))
    self.assertIn('unlabeled: crashes/id_000003',
                  mock_print.call_args[0][0])

    self.assertEqual(bench_cli.EXIT_OK, cli.Main([
        'validate', '--target', target, '--ravens', ravens_dir,
        '--crashes', crashes, '--add_raven',
        os.path.join(bundle_dir, 'extra_ravens', 'broad.raven')]))
    self.assertIn('also matches GW_BROAD', mock_print.call_args[0][0])

  @typing.no_type_check
  @mock.patch('builtins.print')
  def testValidateNonCrashingSeed(self, mock_print):
    """Test that a crash seed that no longer crashes fails validation."""
    bundle_dir = self._Fixture('exploit')
    crashes = self._Path('stale_crashes')
    os.makedirs(crashes)
    shutil.copy(os.path.join(bundle_dir, 'corpus', 'queue', 'id_000001'),
                crashes)
    self.assertEqual(bench_cli.EXIT_VALIDATION, cli.Main([
        'validate', '--target', os.path.join(bundle_dir, 'target.mvm'),
        '--ravens', os.path.join(bundle_dir, 'ravens'), '--crashes', crashes]))
    rendered = mock_print.call_args[0][0]
    self.assertIn('unlabeled: crashes/id_000001 (not reproduced)', rendered)
    self.assertEqual('incomplete', rendered.splitlines()[-1])

  @typing.no_type_check
  @mock.patch('builtins.print')
  @mock.patch('tools.bench_cli.engine.ReplayAll')
  def testValidateFailedReplay(self, mock_replay, mock_print):
    """Test that a crash seed whose replay failed is a data error."""
    bundle_dir = self._Fixture('exploit')
    failed = bench_mocks.Outcome('crashes/id_000007',
                                 {'FRB_OVF1': 'NOT_REACHED'})
    failed.flags['error'] = 'backend failure'
    mock_replay.return_value = [failed]
    self.assertEqual(bench_cli.EXIT_DATA, cli.Main([
        'validate', '--target', os.path.join(bundle_dir, 'target.mvm'),
        '--ravens', os.path.join(bundle_dir, 'ravens'),
        '--crashes', os.path.join(bundle_dir, 'corpus')]))
    self.assertIn('replay failed: crashes/id_000007',
                  mock_print.call_args[0][0])

  @typing.no_type_check
  def testInconsistentTargets(self):
    """Test that mixing targets in one analysis is a data error."""
    exploit_dir = self._Fixture('exploit')
    patched_dir = self._Fixture('exploit_patched')
    corpus_dir = os.path.join(exploit_dir, 'corpus')
    self.assertEqual(bench_cli.EXIT_OK,
                     self._Replay(exploit_dir, corpus_dir, 'afl', 0))
    self.assertEqual(bench_cli.EXIT_OK,
                     self._Replay(patched_dir, corpus_dir, 'afl', 1))
    self.assertEqual(bench_cli.EXIT_DATA, cli.Main([
        'analyze', '--outcomes', self._Path('trials', '*'),
        '--out', self._Path('report')]))

  @typing.no_type_check
  def testMissingInputs(self):
    """Test missing files and unmatched globs."""
    self.assertEqual(bench_cli.EXIT_USAGE, cli.Main([
        'replay', '--target', self._Path('none.mvm'), '--ravens',
        self._Path('ravens'), '--corpus', self._Path('corpus')]))
    self.assertEqual(bench_cli.EXIT_USAGE, cli.Main([
        'analyze', '--outcomes', self._Path('nothing', '*'),
        '--out', self._Path('report')]))
    self.assertEqual(bench_cli.EXIT_USAGE, cli.Main([
        'chart', '--report', self._Path('report.json'),
        '--out', self._Path('charts')]))
    self.assertEqual(bench_cli.EXIT_USAGE, cli.Main([
        'fixtures', '--out', self._Path('fixtures'), '--bundle', 'nope']))

  @typing.no_type_check
  def testDataErrors(self):
    """Test malformed reports and sources."""
    report_path = self._Path('report.json')
    with open(report_path, 'w', encoding='utf-8') as report_file:
      json.dump({'schema': 'frb_report_v0'}, report_file)
    self.assertEqual(bench_cli.EXIT_DATA, cli.Main([
        'chart', '--report', report_path, '--out', self._Path('charts')]))
    source = self._Path('bad.asm')
    with open(source, 'w', encoding='utf-8') as source_file:
      source_file.write('  FROB r1\n')
    self.assertEqual(bench_cli.EXIT_DATA, cli.Main(['assemble', source]))

  @typing.no_type_check
  def testAssemble(self):
    """Test assembling a source with a listing."""
    source = self._Path('tiny.asm')
    with open(source, 'w', encoding='utf-8') as source_file:
      source_file.write('start:\n  MOVI r1, 7\n  HALT\n')
    listing = self._Path('tiny.lst')
    self.assertEqual(bench_cli.EXIT_OK, cli.Main(
        ['assemble', source, '--listing', listing]))
    self.assertEqual([self._Path('tiny.mvm')],
                     glob.glob(self._Path('*.mvm')))
    with open(listing, 'r', encoding='utf-8') as listing_file:
      self.assertEqual(2, len(listing_file.read().splitlines()))
    self.assertEqual(bench_cli.EXIT_USAGE, cli.Main(
        ['assemble', self._Path('missing.asm')]))


if __name__ == '__main__':
  unittest.main()
