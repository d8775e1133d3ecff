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
"""Campaign reports: the frb_report_v1 JSON document and its CSV views."""

import csv
import dataclasses
import io
import json
import os
import re
from typing import Any, Dict, List, Mapping, Optional, Sequence, Set

from libravenbench import errors
from libravenbench import logging_utils
from libravenbench.analysis import dedup
from libravenbench.analysis import metrics
from libravenbench.analysis import summary as summary_lib
from libravenbench.analysis import survival
from libravenbench.oracle import metadata as metadata_lib
from libravenbench.oracle import states
from libravenbench.replay import engine

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

SCHEMA = 'frb_report_v1'
REPORT_FILE = 'report.json'
BUGS_CSV = 'bugs.csv'
MEDIANS_MD = 'medians.md'
SURVIVAL_DIR = 'survival'
SURVIVAL_CSV_HEADER = ('time_s', 'prob', 'ci_low', 'ci_high')
BUGS_CSV_HEADER = (
    'fuzzer', 'bug_id', 'false_positive', 'trials', 'reached_trials',
    'triggered_trials', 'detected_trials', 'hit_rate', 'median_reached',
    'median_triggered', 'median_detected', 'median_reached_s',
    'median_triggered_s', 'median_detected_s')

_TIMED_STATES = (
    ('reached', states.BugState.REACHED),
    ('triggered', states.BugState.TRIGGERED),
    ('detected', states.BugState.DETECTED),
)
_REQUIRED_KEYS = ('schema', 'horizon_s', 'confidence', 'target_sha256',
                  'fuzzers', 'bugs', 'per_fuzzer', 'per_bug', 'survival',
                  'intersections', 'dedup')


@dataclasses.dataclass
class CampaignReport:
  """The machine-readable campaign report.

  Attributes:
    horizon_s (float): Campaign length.
    confidence (float): Survival confidence level.
    target_sha256 (str): The single image every trial replayed.
    fuzzers (List[str]): Fuzzer names, sorted.
    bugs (List[Dict[str, Any]]): {bug_id, cwe, false_positive} per bug.
    per_fuzzer (Dict[str, Dict[str, Any]]): Counts and consistency.
    per_bug (Dict[str, Dict[str, Dict[str, Any]]]): Medians and hit rates
        by fuzzer then bug.
    survival (Dict[str, Dict[str, Dict[str, Any]]]): Triggered survival
        curves by fuzzer then bug.
    intersections (List[Dict[str, Any]]): {fuzzers, bugs, tp, fp} groups.
    dedup (Dict[str, List[Dict[str, Any]]]): Dedup rows per fuzzer.
    schema (str): Always frb_report_v1.
  """
  horizon_s: float
  confidence: float
  target_sha256: str
  fuzzers: List[str]
  bugs: List[Dict[str, Any]]
  per_fuzzer: Dict[str, Dict[str, Any]]
  per_bug: Dict[str, Dict[str, Dict[str, Any]]]
  survival: Dict[str, Dict[str, Dict[str, Any]]]
  intersections: List[Dict[str, Any]]
  dedup: Dict[str, List[Dict[str, Any]]]
  schema: str = SCHEMA

  def AsDict(self) -> Dict[str, Any]:
    return dataclasses.asdict(self)

  def IsFalsePositive(self, bug_id: str) -> bool:
    for bug in self.bugs:
      if bug['bug_id'] == bug_id:
        return bool(bug['false_positive'])
    return metadata_lib.IsFalsePositive(bug_id)


def _Seconds(value: Optional[float]) -> Optional[float]:
  return None if value is None else float(value)


def _CurveDict(curve: survival.SurvivalCurve) -> Dict[str, Any]:
  return {
      'n_trials': curve.n_trials,
      'n_events': curve.n_events,
      'median_s': _Seconds(curve.median_s),
      'points': [[point.time_s, float(point.prob), float(point.ci_low),
                  float(point.ci_high)] for point in curve.points],
  }


def BuildReport(summaries: Sequence[summary_lib.TrialSummary],
                metadata: Optional[Mapping[str,
                                           metadata_lib.BugMetadata]] = None,
                outcomes: Optional[Mapping[
                    str, Sequence[engine.ReplayOutcome]]] = None,
                horizon_s: float = summary_lib.DEFAULT_HORIZON_S,
                confidence: float = survival.DEFAULT_CONFIDENCE
               ) -> CampaignReport:
  """Aggregates trial summaries into a campaign report.

  Args:
    summaries (Sequence[TrialSummary]): Every trial of every fuzzer.
    metadata (Mapping[str, BugMetadata]): Optional. Raven sidecar entries.
    outcomes (Mapping[str, Sequence[ReplayOutcome]]): Optional. Outcomes
        per fuzzer for the dedup comparison.
    horizon_s (float): Optional. Campaign length.
    confidence (float): Optional. Survival confidence level.

  Returns:
    CampaignReport: The report.

  Raises:
    InconsistentCampaignError: If trials were replayed on different images
        or there are no trials.
  """
  if not summaries:
    raise errors.InconsistentCampaignError('No trials to analyze', __name__)
  hashes = sorted({trial.target_sha256 for trial in summaries})
  if len(hashes) > 1:
    raise errors.InconsistentCampaignError(
        'Trials were replayed on {0:d} different targets: {1:s}'.format(
            len(hashes), ', '.join(h[:12] for h in hashes)), __name__)
  meta = dict(metadata or {})
  bug_ids = sorted({bug_id for trial in summaries for bug_id in trial.bugs})
  fuzzers = sorted({trial.fuzzer for trial in summaries})
  by_fuzzer = {fuzzer: [trial for trial in summaries
                        if trial.fuzzer == fuzzer] for fuzzer in fuzzers}

  bugs = []
  for bug_id in bug_ids:
    entry = meta.get(bug_id)
    bugs.append({
        'bug_id': bug_id,
        'cwe': entry.cwe if entry else None,
        'false_positive': metadata_lib.IsFalsePositive(bug_id, meta),
    })

  per_fuzzer = {}  # type: Dict[str, Dict[str, Any]]
  per_bug = {}  # type: Dict[str, Dict[str, Dict[str, Any]]]
  curves = {}  # type: Dict[str, Dict[str, Dict[str, Any]]]
  found = {}  # type: Dict[str, List[str]]
  for fuzzer, trials in by_fuzzer.items():
    counts = metrics.CountBugs(trials, meta)
    triggered = metrics.TrialCounts(trials, states.BugState.TRIGGERED)
    detected = metrics.TrialCounts(trials, states.BugState.DETECTED)
    crash_counts = {}  # type: Dict[str, int]
    coverage = set()  # type: Set[int]
    for trial in trials:
      coverage.update(trial.coverage)
      for bug_id, count in trial.crash_counts.items():
        crash_counts[bug_id] = crash_counts.get(bug_id, 0) + count
    per_fuzzer[fuzzer] = {
        'trials': len(trials),
        'triggered': counts.triggered,
        'detected': counts.detected,
        'triggered_count': len(counts.triggered),
        'detected_count': len(counts.detected),
        'tp_triggered': counts.tp_triggered,
        'fp_triggered': counts.fp_triggered,
        'tp_detected': counts.tp_detected,
        'fp_detected': counts.fp_detected,
        'consistency_triggered': (float(metrics.Consistency(
            triggered, len(trials), bug_ids)) if bug_ids else None),
        'consistency_detected': (float(metrics.Consistency(
            detected, len(trials), bug_ids)) if bug_ids else None),
        'crash_counts': {bug_id: crash_counts[bug_id]
                         for bug_id in sorted(crash_counts)},
        'unattributed_crashes': sum(trial.unattributed_crashes
                                    for trial in trials),
        'coverage_blocks': len(coverage),
    }
    found[fuzzer] = counts.triggered

    per_bug[fuzzer] = {}
    curves[fuzzer] = {}
    for bug_id in bug_ids:
      row = {'trials': len(trials)}  # type: Dict[str, Any]
      for name, state in _TIMED_STATES:
        times = [trial.bugs[bug_id].Get(state) if bug_id in trial.bugs
                 else None for trial in trials]
        curve = survival.KaplanMeier(times, horizon_s, confidence)
        row['{0:s}_trials'.format(name)] = curve.n_events
        row['median_{0:s}_s'.format(name)] = _Seconds(curve.median_s)
        if state == states.BugState.TRIGGERED:
          row['hit_rate'] = float(curve.hit_rate)
          curves[fuzzer][bug_id] = _CurveDict(curve)
      per_bug[fuzzer][bug_id] = row

  intersections = [{
      'fuzzers': list(group.fuzzers),
      'bugs': group.bugs,
      'tp': group.tp,
      'fp': group.fp,
  } for group in metrics.Intersections(
      found, lambda bug_id: metadata_lib.IsFalsePositive(bug_id, meta))]

  dedup_rows = {}  # type: Dict[str, List[Dict[str, Any]]]
  for fuzzer in fuzzers:
    fuzzer_outcomes = (outcomes or {}).get(fuzzer, ())
    dedup_rows[fuzzer] = [row.AsDict()
                          for row in dedup.DedupCompare(fuzzer_outcomes)]

  logger.info('Report covers {0:d} fuzzer(s), {1:d} trial(s), {2:d} bug(s)'
              .format(len(fuzzers), len(summaries), len(bug_ids)))
  return CampaignReport(
      horizon_s=float(horizon_s),
      confidence=float(confidence),
      target_sha256=hashes[0],
      fuzzers=fuzzers,
      bugs=bugs,
      per_fuzzer=per_fuzzer,
      per_bug=per_bug,
      survival=curves,
      intersections=intersections,
      dedup=dedup_rows)


def EmitReport(report: CampaignReport) -> str:
  """Serializes a report; the output is canonical."""
  return json.dumps(report.AsDict(), sort_keys=True, indent=2) + '\n'


def ParseReport(text: str) -> CampaignReport:
  """Parses a report document.

  Raises:
    ReportFormatError: If the text is not a frb_report_v1 document.
  """
  try:
    data = json.loads(text)
  except ValueError as exception:
    raise errors.ReportFormatError(
        'Report is not valid JSON: {0!s}'.format(exception),
        __name__) from exception
  if not isinstance(data, dict):
    raise errors.ReportFormatError('Report must be a JSON object', __name__)
  if data.get('schema') != SCHEMA:
    raise errors.ReportFormatError(
        'Unsupported report schema {0!r}'.format(data.get('schema')),
        __name__)
  missing = [key for key in _REQUIRED_KEYS if key not in data]
  if missing:
    raise errors.ReportFormatError(
        'Report is missing {0:s}'.format(', '.join(missing)), __name__)
  unknown = sorted(set(data) - set(_REQUIRED_KEYS))
  if unknown:
    raise errors.ReportFormatError(
        'Report has unknown field(s) {0:s}'.format(', '.join(unknown)),
        __name__)
  for fuzzer in data['fuzzers']:
    for section in ('per_fuzzer', 'per_bug', 'survival', 'dedup'):
      if fuzzer not in data[section]:
        raise errors.ReportFormatError(
            'Report {0:s} has no entry for {1:s}'.format(section, fuzzer),
            __name__)
  return CampaignReport(**data)


def ReadReport(path: str) -> CampaignReport:
  """Reads and parses a report file.

  Raises:
    ReportFormatError: If the file cannot be read or is malformed.
  """
  try:
    with open(path, 'r', encoding='utf-8') as report_file:
      text = report_file.read()
  except OSError as exception:
    raise errors.ReportFormatError(
        'Cannot read {0:s}: {1!s}'.format(path, exception),
        __name__) from exception
  return ParseReport(text)


def _Csv(rows: Sequence[Sequence[Any]]) -> str:
  buffer = io.StringIO()
  writer = csv.writer(buffer, lineterminator='\n')
  writer.writerows(rows)
  return buffer.getvalue()


def BugsCsv(report: CampaignReport) -> str:
  """Per-fuzzer, per-bug table with HH:MM medians and seconds."""
  rows = [list(BUGS_CSV_HEADER)]  # type: List[List[Any]]
  for fuzzer in report.fuzzers:
    for bug in report.bugs:
      row = report.per_bug[fuzzer][bug['bug_id']]
      rows.append([
          fuzzer, bug['bug_id'], str(bug['false_positive']).lower(),
          row['trials'], row['reached_trials'], row['triggered_trials'],
          row['detected_trials'], row['hit_rate'],
          survival.FormatHhMm(row['median_reached_s']),
          survival.FormatHhMm(row['median_triggered_s']),
          survival.FormatHhMm(row['median_detected_s']),
          _Blank(row['median_reached_s']),
          _Blank(row['median_triggered_s']),
          _Blank(row['median_detected_s']),
      ])
  return _Csv(rows)


def _Blank(value: Optional[float]) -> str:
  return '' if value is None else repr(float(value))


def SurvivalCsv(curve: Mapping[str, Any]) -> str:
  """One survival curve as time_s, prob, ci_low, ci_high rows."""
  rows = [list(SURVIVAL_CSV_HEADER)]  # type: List[List[Any]]
  rows.extend([repr(float(value)) for value in point]
              for point in curve['points'])
  return _Csv(rows)


def MediansMarkdown(report: CampaignReport) -> str:
  """Median time to trigger per bug and fuzzer, HH:MM with hit rate."""
  lines = ['| Bug | ' + ' | '.join(report.fuzzers) + ' |',
           '|---|' + '---|' * len(report.fuzzers)]
  for bug in report.bugs:
    bug_id = bug['bug_id']
    label = bug_id + (' (FP)' if bug['false_positive'] else '')
    cells = []
    for fuzzer in report.fuzzers:
      row = report.per_bug[fuzzer][bug_id]
      cells.append('{0:s} {1:s}'.format(
          survival.FormatHhMm(row['median_triggered_s']),
          survival.FormatPercent(row['hit_rate'])))
    lines.append('| ' + label + ' | ' + ' | '.join(cells) + ' |')
  return '\n'.join(lines) + '\n'


def SafeName(name: str) -> str:
  """File-name-safe version of a fuzzer or bug name."""
  return re.sub(r'[^A-Za-z0-9_.-]', '_', name)


def WriteReportFiles(report: CampaignReport, out_dir: str) -> List[str]:
  """Writes report.json, bugs.csv, medians.md and survival CSVs.

  Args:
    report (CampaignReport): The report.
    out_dir (str): Output directory, created if needed.

  Returns:
    List[str]: Paths written.
  """
  os.makedirs(os.path.join(out_dir, SURVIVAL_DIR), exist_ok=True)
  outputs = {
      REPORT_FILE: EmitReport(report),
      BUGS_CSV: BugsCsv(report),
      MEDIANS_MD: MediansMarkdown(report),
  }
  for fuzzer in report.fuzzers:
    for bug_id, curve in report.survival[fuzzer].items():
      name = os.path.join(SURVIVAL_DIR, '{0:s}__{1:s}.csv'.format(
          SafeName(fuzzer), SafeName(bug_id)))
      outputs[name] = SurvivalCsv(curve)
  written = []
  for name in sorted(outputs):
    path = os.path.join(out_dir, name)
    with open(path, 'w', encoding='utf-8', newline='') as output:
      output.write(outputs[name])
    written.append(path)
  logger.info('Wrote {0:d} report file(s) to {1:s}'.format(len(written),
                                                           out_dir))
  return written
