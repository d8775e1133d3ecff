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
"""Command functions of the ravenbench CLI.

Every command returns an exit code: 0 on success, 1 on usage errors and
missing files, 2 on data errors, 3 when Raven validation fails.
"""

import glob
import os
from typing import TYPE_CHECKING, Dict, List, Optional

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.analysis import report as report_lib
from libravenbench.analysis import summary as summary_lib
from libravenbench.analysis import validation
from libravenbench.charting import charts
from libravenbench.emulation import api
from libravenbench.emulation.minivm import assembler
from libravenbench.emulation.minivm import image as image_lib
from libravenbench.fixtures import suite
from libravenbench.oracle import metadata as metadata_lib
from libravenbench.oracle import session as session_lib
from libravenbench.raven import parser
from libravenbench.replay import corpus
from libravenbench.replay import engine

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

if TYPE_CHECKING:
  import argparse

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VALIDATION = 3

ASSEMBLY_EXTENSION = '.asm'


def _Missing(*paths: Optional[str]) -> bool:
  """Logs and returns True if any given path does not exist."""
  missing = [path for path in paths if path and not os.path.exists(path)]
  for path in missing:
    logger.error('No such file or directory: {0:s}'.format(path))
  return bool(missing)


def _LoadTarget(path: str) -> image_lib.TargetImage:
  """Loads an MVM1 image, assembling it first if given a source file."""
  if path.endswith(ASSEMBLY_EXTENSION):
    return assembler.AssembleFile(path).image
  return image_lib.LoadImage(path)


def _LoadRavens(ravens_dir: str,
                extra: Optional[List[str]] = None) -> metadata_lib.RavenSet:
  ravens = metadata_lib.LoadRavenDirectory(ravens_dir)
  for raven_file in extra or []:
    ravens.programs.append(parser.ParseRavenFile(raven_file))
  return ravens


def _Limits(args: 'argparse.Namespace') -> api.ExecutionLimits:
  return api.ExecutionLimits(int(args.max_instructions))


def Replay(args: 'argparse.Namespace') -> int:
  """Replays a trial corpus and writes outcomes.jsonl.

  Args:
    args (argparse.Namespace): Arguments from ArgumentParser.

  Returns:
    int: 0 on success, 1 on missing inputs, 2 if any input failed to
        replay.
  """
  if _Missing(args.target, args.ravens, args.corpus, args.log):
    return EXIT_USAGE
  target = _LoadTarget(args.target)
  ravens = _LoadRavens(args.ravens)
  ingested = corpus.IngestCampaign(args.corpus, args.log, args.fuzzer,
                                   int(args.trial))
  active = None
  if args.active:
    active = frozenset(bug_id.strip() for bug_id in args.active.split(',')
                       if bug_id.strip())
  options = engine.ReplayOptions(
      mode=session_lib.Mode.LIVE if args.live else session_lib.Mode.REPLAY,
      active=active,
      metadata=ravens.metadata,
      jobs=int(args.jobs),
      limits=_Limits(args))
  outcomes = engine.ReplayAll(ingested.records, target, ravens.programs,
                              options)

  out_dir = args.out or args.corpus
  os.makedirs(out_dir, exist_ok=True)
  engine.WriteOutcomes(outcomes, os.path.join(out_dir, engine.OUTCOMES_FILE))
  engine.ReplayMeta.FromRecords(target, args.fuzzer, int(args.trial),
                                ingested.records).Write(
                                    os.path.join(out_dir,
                                                 engine.REPLAY_META_FILE))
  logger.info('Wrote {0:d} outcome(s) to {1:s}'.format(
      len(outcomes), os.path.join(out_dir, engine.OUTCOMES_FILE)))
  failed = [outcome.input_id for outcome in outcomes if outcome.error]
  if failed:
    logger.error('{0:d} input(s) failed to replay: {1:s}'.format(
        len(failed), ', '.join(failed)))
    return EXIT_DATA
  return EXIT_OK


def _TrialDirectories(pattern: str) -> List[str]:
  """Trial directories matched by a glob of directories or outcome files."""
  directories = set()
  for match in glob.glob(pattern):
    if os.path.isdir(match):
      if os.path.exists(os.path.join(match, engine.OUTCOMES_FILE)):
        directories.add(match)
    elif os.path.basename(match) == engine.OUTCOMES_FILE:
      directories.add(os.path.dirname(match) or '.')
  return sorted(directories)


def Analyze(args: 'argparse.Namespace') -> int:
  """Aggregates replayed trials into the campaign report files.

  Args:
    args (argparse.Namespace): Arguments from ArgumentParser.

  Returns:
    int: 0 on success, 1 if nothing matched, 2 on data errors such as
        trials replayed on different targets.
  """
  if _Missing(args.ravens):
    return EXIT_USAGE
  directories = _TrialDirectories(args.outcomes)
  if not directories:
    logger.error('No replayed trials match {0:s}'.format(args.outcomes))
    return EXIT_USAGE
  metadata = {}  # type: Dict[str, metadata_lib.BugMetadata]
  if args.ravens:
    metadata_path = os.path.join(args.ravens, metadata_lib.METADATA_FILE)
    if os.path.exists(metadata_path):
      metadata = metadata_lib.LoadMetadata(metadata_path)

  horizon = float(args.horizon)
  summaries = []
  outcomes_by_fuzzer = {}  # type: Dict[str, List[engine.ReplayOutcome]]
  for directory in directories:
    outcomes = engine.ReadOutcomes(os.path.join(directory,
                                                engine.OUTCOMES_FILE))
    meta = engine.ReplayMeta.Read(os.path.join(directory,
                                               engine.REPLAY_META_FILE))
    bug_ids = sorted({bug_id for outcome in outcomes
                      for bug_id in outcome.observations})
    summaries.append(summary_lib.SummarizeTrial(
        outcomes, meta.ToRecords(), meta.fuzzer, meta.trial, horizon,
        bug_ids, meta.target_sha256))
    outcomes_by_fuzzer.setdefault(meta.fuzzer, []).extend(outcomes)

  report = report_lib.BuildReport(summaries, metadata, outcomes_by_fuzzer,
                                  horizon, float(args.confidence))
  report_lib.WriteReportFiles(report, args.out)
  logger.info('Median time to trigger:\n{0:s}'.format(
      report_lib.MediansMarkdown(report)))
  return EXIT_OK


def Chart(args: 'argparse.Namespace') -> int:
  """Renders the SVG charts of a report file.

  Args:
    args (argparse.Namespace): Arguments from ArgumentParser.

  Returns:
    int: 0 on success, 1 if the report is missing, 2 if it is malformed.
  """
  if _Missing(args.report):
    return EXIT_USAGE
  report = report_lib.ReadReport(args.report)
  charts.RenderCharts(report, args.out)
  return EXIT_OK


def _CrashRecords(crashes_dir: str) -> List[corpus.InputRecord]:
  """Records for every file of a crash directory or a trial's crashes/."""
  nested = os.path.join(crashes_dir, corpus.CRASH_DIR)
  if os.path.isdir(nested):
    crashes_dir = nested
  records = []
  for name in sorted(os.listdir(crashes_dir)):
    path = os.path.join(crashes_dir, name)
    if name.startswith('.') or not os.path.isfile(path):
      continue
    with open(path, 'rb') as seed_file:
      data = seed_file.read()
    records.append(corpus.InputRecord(
        '{0:s}/{1:s}'.format(corpus.CRASH_DIR, name), data, 0.0,
        corpus.LABEL_CRASH))
  return records


def Validate(args: 'argparse.Namespace') -> int:
  """Replays crashing seeds and checks every crash is explained.

  Args:
    args (argparse.Namespace): Arguments from ArgumentParser.

  Returns:
    int: 0 if the Raven set is complete, 3 if not, 2 if a replay failed,
        1 on missing inputs.
  """
  extra = args.add_raven or []
  if _Missing(args.target, args.ravens, args.crashes, args.previous, *extra):
    return EXIT_USAGE
  target = _LoadTarget(args.target)
  ravens = _LoadRavens(args.ravens, extra)
  records = _CrashRecords(args.crashes)
  previous = None
  if args.previous:
    previous = {outcome.input_id: outcome.first_triggered
                for outcome in engine.ReadOutcomes(args.previous)
                if outcome.is_crash and outcome.first_triggered}
  options = engine.ReplayOptions(metadata=ravens.metadata,
                                 jobs=int(args.jobs), limits=_Limits(args))
  outcomes = engine.ReplayAll(records, target, ravens.programs, options)
  result = validation.ValidateRavens(outcomes, ravens.bug_ids, previous)
  print(result.Render())
  if result.failed:
    logger.warning('{0:d} crash seed(s) could not be replayed'.format(
        len(result.failed)))
    return EXIT_DATA
  return EXIT_OK if result.complete else EXIT_VALIDATION


def Assemble(args: 'argparse.Namespace') -> int:
  """Assembles a minivm source into an MVM1 image.

  Args:
    args (argparse.Namespace): Arguments from ArgumentParser.

  Returns:
    int: 0 on success, 1 if the source is missing, 2 on assembler errors.
  """
  if _Missing(args.source):
    return EXIT_USAGE
  program = assembler.AssembleFile(args.source)
  output = args.output or os.path.splitext(args.source)[0] + '.mvm'
  image_lib.SaveImage(program.image, output)
  if args.listing:
    with open(args.listing, 'w', encoding='utf-8') as listing_file:
      listing_file.write(''.join(line.Format() + '\n'
                                 for line in program.listing))
  logger.info('Wrote {0:s} ({1:d} bytes of ROM, sha256 {2:s})'.format(
      output, len(program.image.rom), program.image.sha256))
  return EXIT_OK


def Fixtures(args: 'argparse.Namespace') -> int:
  """Materializes the fixture suite: images, Ravens and corpora.

  Args:
    args (argparse.Namespace): Arguments from ArgumentParser.

  Returns:
    int: 0 on success.
  """
  fixture_suite = suite.BuildFixtures()
  if args.bundle:
    if args.bundle not in fixture_suite.bundles:
      logger.error('Unknown fixture bundle {0:s}; choose from {1:s}'.format(
          args.bundle, ', '.join(fixture_suite.names)))
      return EXIT_USAGE
    fixture_suite[args.bundle].Materialize(os.path.join(args.out,
                                                        args.bundle))
    return EXIT_OK
  fixture_suite.Materialize(args.out)
  return EXIT_OK


def ErrorExitCode(exception: errors.RBError) -> int:
  """Exit code for an error escaping a command."""
  del exception  # Every library error is a data error.
  return EXIT_DATA
