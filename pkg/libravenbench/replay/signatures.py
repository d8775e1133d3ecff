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
"""Baseline crash signatures used by fuzzers to bucket crashes."""

from typing import Iterable, Optional, Tuple

from libravenbench.emulation import api

FNV_OFFSET_BASIS = 0xcbf29ce484222325
FNV_PRIME = 0x100000001b3
_MASK64 = (1 << 64) - 1


def StackHash(shadow_stack: Iterable[int]) -> int:
  """FNV-1a 64 over the frames as 8-byte little-endian addresses.

  Args:
    shadow_stack (Iterable[int]): Return addresses, entry to fault.

  Returns:
    int: The 64-bit hash. An empty stack hashes to FNV_OFFSET_BASIS.
  """
  digest = FNV_OFFSET_BASIS
  for frame in shadow_stack:
    for byte in (frame & _MASK64).to_bytes(8, 'little'):
      digest ^= byte
      digest = (digest * FNV_PRIME) & _MASK64
  return digest


def PcLrSignature(termination: api.Termination) -> Optional[Tuple[int, int]]:
  """Returns (pc, lr) for a crash, None otherwise."""
  if not termination.is_crash:
    return None
  return (termination.pc or 0, termination.lr or 0)


def StackSignature(termination: api.Termination) -> Optional[int]:
  """Returns the stack hash for a crash, None otherwise."""
  if not termination.is_crash:
    return None
  return StackHash(termination.shadow_stack)
