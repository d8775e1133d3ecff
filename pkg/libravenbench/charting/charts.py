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
"""SVG charts rendered from a campaign report file only.

Output is byte-stable: the SVG hash salt is fixed, text is emitted as text
and no creation date is written.
"""

import os
from typing import Any, List

import matplotlib
matplotlib.use('Agg')
# pylint: disable=wrong-import-position
from matplotlib import pyplot as plt  # noqa: E402

from libravenbench import logging_utils  # noqa: E402
from libravenbench.analysis import report as report_lib  # noqa: E402

logging_utils.SetUpLogger(__name__)
logger = logging_utils.GetLogger(__name__)

SVG_SALT = 'ravenbench'
TP_COLOR = '#4c72b0'
FP_COLOR = '#dd8452'
_RC = {
    'svg.hashsalt': SVG_SALT,
    'svg.fonttype': 'none',
    'font.family': 'DejaVu Sans',
    'font.size': 9,
}


def _Save(figure: Any, path: str) -> str:
  figure.savefig(path, format='svg', metadata={'Date': None})
  plt.close(figure)
  logger.debug('Wrote {0:s}'.format(path))
  return path


def SurvivalChart(report: report_lib.CampaignReport, bug_id: str,
                  path: str) -> str:
  """Plots one bug's survival step function per fuzzer with CI bands.

  Args:
    report (CampaignReport): The report.
    bug_id (str): The bug.
    path (str): Output SVG path.

  Returns:
    str: The path written.
  """
  with matplotlib.rc_context(_RC):
    figure, axes = plt.subplots(figsize=(6, 3.5))
    for fuzzer in report.fuzzers:
      curve = report.survival[fuzzer].get(bug_id)
      if curve is None:
        continue
      times = [point[0] / 3600.0 for point in curve['points']]
      probs = [point[1] for point in curve['points']]
      lows = [point[2] for point in curve['points']]
      highs = [point[3] for point in curve['points']]
      line, = axes.step(times, probs, where='post', label=fuzzer,
                        gid='survival-{0:s}'.format(
                            report_lib.SafeName(fuzzer)))
      axes.fill_between(times, lows, highs, step='post', alpha=0.2,
                        color=line.get_color(), linewidth=0)
    title = bug_id
    if report.IsFalsePositive(bug_id):
      title += ' (false positive)'
    axes.set_title(title)
    axes.set_xlabel('time (h)')
    axes.set_ylabel('survival probability')
    axes.set_xlim(0, report.horizon_s / 3600.0)
    axes.set_ylim(-0.02, 1.02)
    axes.legend(loc='lower left')
    figure.tight_layout()
    return _Save(figure, path)


def IntersectionChart(report: report_lib.CampaignReport, path: str) -> str:
  """Upset-style chart: bug counts per exclusive fuzzer subset.

  Bars stack true positives under false positives; FP bar elements carry
  'fp-' ids and TP ones 'tp-' ids. The dot matrix below shows the subset.

  Args:
    report (CampaignReport): The report.
    path (str): Output SVG path.

  Returns:
    str: The path written.
  """
  groups = report.intersections
  positions = list(range(len(groups)))
  with matplotlib.rc_context(_RC):
    figure, (bars, matrix) = plt.subplots(
        2, 1, sharex=True, figsize=(max(4, 0.6 * len(groups) + 2), 4),
        gridspec_kw={'height_ratios': [3, max(1, len(report.fuzzers))]})
    tp = [group['tp'] for group in groups]
    fp = [group['fp'] for group in groups]
    tp_bars = bars.bar(positions, tp, color=TP_COLOR, label='true positive')
    fp_bars = bars.bar(positions, fp, bottom=tp, color=FP_COLOR,
                       hatch='//', label='false positive')
    for index, patch in enumerate(tp_bars.patches):
      patch.set_gid('tp-{0:d}'.format(index))
    for index, patch in enumerate(fp_bars.patches):
      patch.set_gid('fp-{0:d}'.format(index))
    bars.set_ylabel('bugs')
    bars.legend(loc='upper right')
    for row, fuzzer in enumerate(report.fuzzers):
      for column, group in enumerate(groups):
        member = fuzzer in group['fuzzers']
        matrix.plot([column], [row], marker='o', markersize=7,
                    color='black' if member else '#d0d0d0')
    matrix.set_yticks(list(range(len(report.fuzzers))))
    matrix.set_yticklabels(report.fuzzers)
    matrix.set_ylim(-0.5, len(report.fuzzers) - 0.5)
    matrix.set_xticks(positions)
    matrix.set_xticklabels([''] * len(positions))
    figure.tight_layout()
    return _Save(figure, path)


def ConsistencyChart(report: report_lib.CampaignReport, path: str) -> str:
  """Bar chart of triggered and detected consistency per fuzzer."""
  fuzzers = report.fuzzers
  triggered = [report.per_fuzzer[f]['consistency_triggered'] or 0.0
               for f in fuzzers]
  detected = [report.per_fuzzer[f]['consistency_detected'] or 0.0
              for f in fuzzers]
  positions = list(range(len(fuzzers)))
  with matplotlib.rc_context(_RC):
    figure, axes = plt.subplots(figsize=(max(4, 1.2 * len(fuzzers) + 2), 3))
    axes.bar([p - 0.2 for p in positions], triggered, width=0.4,
             color=TP_COLOR, label='triggered')
    axes.bar([p + 0.2 for p in positions], detected, width=0.4,
             color=FP_COLOR, label='detected')
    axes.set_xticks(positions)
    axes.set_xticklabels(fuzzers)
    axes.set_ylim(0, 1)
    axes.set_ylabel('consistency')
    axes.legend(loc='upper right')
    figure.tight_layout()
    return _Save(figure, path)


def RenderCharts(report: report_lib.CampaignReport,
                 out_dir: str) -> List[str]:
  """Renders every chart of a report.

  Args:
    report (CampaignReport): The report.
    out_dir (str): Output directory, created if needed.

  Returns:
    List[str]: Paths written, sorted.
  """
  os.makedirs(out_dir, exist_ok=True)
  bug_ids = sorted({bug_id for fuzzer in report.fuzzers
                    for bug_id in report.survival[fuzzer]})
  written = []
  for bug_id in bug_ids:
    written.append(SurvivalChart(report, bug_id, os.path.join(
        out_dir, 'survival_{0:s}.svg'.format(report_lib.SafeName(bug_id)))))
  written.append(IntersectionChart(
      report, os.path.join(out_dir, 'intersections.svg')))
  written.append(ConsistencyChart(
      report, os.path.join(out_dir, 'consistency.svg')))
  logger.info('Rendered {0:d} chart(s) to {1:s}'.format(len(written),
                                                        out_dir))
  return sorted(written)
