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
"""Kaplan-Meier bug survival with right-censoring at the campaign horizon.

Survival probabilities are exact fractions. Confidence bounds use
Greenwood's variance with the log-log transform:

  theta = exp(z * sqrt(sum d / (n (n - d))) / log S)
  [low, high] = [S ** (1 / theta), S ** theta]

Bounds collapse to S when S is 0 or 1.
"""

import dataclasses
import decimal
import fractions
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

DEFAULT_CONFIDENCE = 0.95
UNAVAILABLE = '--'

Fraction = fractions.Fraction


@dataclasses.dataclass(frozen=True)
class SurvivalPoint:
  """The survival estimate from time_s on.

  Attributes:
    time_s (float): Step time.
    prob (Fraction): Probability the bug is still untriggered.
    ci_low (Fraction): Lower confidence bound.
    ci_high (Fraction): Upper confidence bound.
  """
  time_s: float
  prob: Fraction
  ci_low: Fraction
  ci_high: Fraction


@dataclasses.dataclass(frozen=True)
class SurvivalCurve:
  """A step function starting at (0, 1).

  Attributes:
    points (List[SurvivalPoint]): Steps in time order. The first is at 0
        and the last at the horizon.
    n_trials (int): Trials in the estimate.
    n_events (int): Trials where the bug happened within the horizon.
    horizon_s (float): Censoring time.
    median_s (Optional[float]): Smallest time with prob <= 1/2.
  """
  points: List[SurvivalPoint]
  n_trials: int
  n_events: int
  horizon_s: float
  median_s: Optional[float]

  @property
  def hit_rate(self) -> Fraction:
    """Fraction of trials with an event."""
    if not self.n_trials:
      return Fraction(0)
    return Fraction(self.n_events, self.n_trials)

  def At(self, time_s: float) -> Fraction:
    """Returns S(time_s)."""
    prob = Fraction(1)
    for point in self.points:
      if point.time_s > time_s:
        break
      prob = point.prob
    return prob


def _Bounds(prob: Fraction, greenwood: float,
            z: float) -> Tuple[Fraction, Fraction]:
  if prob in (0, 1) or greenwood <= 0:
    return prob, prob
  log_prob = np.log(float(prob))
  theta = float(np.exp(z * np.sqrt(greenwood) / log_prob))
  low = Fraction(float(np.clip(float(prob) ** (1.0 / theta), 0.0, 1.0)))
  high = Fraction(float(np.clip(float(prob) ** theta, 0.0, 1.0)))
  return min(low, prob), max(high, prob)


def KaplanMeier(times: Sequence[Optional[float]],
                horizon_s: float,
                confidence: float = DEFAULT_CONFIDENCE) -> SurvivalCurve:
  """Estimates the survival function of a bug across trials.

  Args:
    times (Sequence[Optional[float]]): Event time per trial; None or a time
        beyond the horizon means censored at the horizon.
    horizon_s (float): Censoring time.
    confidence (float): Optional. Confidence level of the bounds.

  Returns:
    SurvivalCurve: The step function, its median and counts.

  Raises:
    ValueError: If there are no trials or the confidence is not in (0, 1).
  """
  if not times:
    raise ValueError('Survival needs at least one trial')
  if not 0 < confidence < 1:
    raise ValueError('Confidence must be in (0, 1)')
  z = float(stats.norm.ppf(1 - (1 - confidence) / 2))
  observed = np.array([horizon_s if t is None or t > horizon_s else t
                       for t in times], dtype=float)
  is_event = np.array([t is not None and t <= horizon_s for t in times],
                      dtype=bool)
  event_times, deaths = np.unique(observed[is_event], return_counts=True)

  prob = Fraction(1)
  greenwood = 0.0
  median = None  # type: Optional[float]
  points = [SurvivalPoint(0.0, prob, prob, prob)]
  for event_time, died in zip(event_times, deaths):
    at_risk = int(np.sum(observed >= event_time))
    died = int(died)
    prob *= Fraction(at_risk - died, at_risk)
    if at_risk > died:
      greenwood += died / (at_risk * (at_risk - died))
    low, high = _Bounds(prob, greenwood, z)
    points.append(SurvivalPoint(float(event_time), prob, low, high))
    if median is None and prob <= Fraction(1, 2):
      median = float(event_time)
  if points[-1].time_s < horizon_s:
    last = points[-1]
    points.append(SurvivalPoint(float(horizon_s), last.prob, last.ci_low,
                                last.ci_high))
  return SurvivalCurve(points, len(times), int(is_event.sum()),
                       float(horizon_s), median)


def EmpiricalSurvival(times: Sequence[float], time_s: float) -> Fraction:
  """Fraction of samples strictly later than time_s."""
  return Fraction(sum(1 for t in times if t > time_s), len(times))


def FormatHhMm(seconds: Optional[float]) -> str:
  """Renders seconds as HH:MM, rounding down; None renders '--'."""
  if seconds is None:
    return UNAVAILABLE
  minutes = int(seconds // 60)
  return '{0:02d}:{1:02d}'.format(minutes // 60, minutes % 60)


def FormatPercent(value: Union[Fraction, float]) -> str:
  """Renders a rate as a whole percentage, e.g. '40%'. Halves round up."""
  if isinstance(value, Fraction):
    exact = (decimal.Decimal(value.numerator) /
             decimal.Decimal(value.denominator))
  else:
    exact = decimal.Decimal(repr(float(value)))
  percent = (exact * 100).quantize(decimal.Decimal(1),
                                   rounding=decimal.ROUND_HALF_UP)
  return '{0:d}%'.format(int(percent))
