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
"""minivm target images and the MVM1 file format.

Layout: the magic ``MVM1`` followed by four little-endian 32-bit fields
(entry, handler, period, ram_size) and the raw ROM bytes. A handler of
0xFFFFFFFF means no interrupt handler; a period of 0 means no timer.
"""

import dataclasses
import hashlib
import struct
from typing import Optional

from libravenbench import errors
from libravenbench.emulation.minivm import isa

MAGIC = b'MVM1'
_HEADER = struct.Struct('<4sIIII')
DEFAULT_RAM_SIZE = 0x1000


def RomOffset(address: int, rom_size: int) -> Optional[int]:
  """Maps an address to an offset into ROM, through either ROM alias.

  Args:
    address (int): A guest address.
    rom_size (int): Size of the ROM in bytes.

  Returns:
    Optional[int]: The ROM offset, or None if address is not in ROM.
  """
  for base in (isa.ROM_BASE, isa.ROM_MIRROR_BASE):
    if base <= address < base + rom_size:
      return address - base
  return None


@dataclasses.dataclass(frozen=True)
class TargetImage:
  """A firmware image for minivm.

  Attributes:
    rom (bytes): ROM contents, mapped at ROM_BASE and ROM_MIRROR_BASE.
    entry (int): Address of the first instruction.
    handler (Optional[int]): Timer interrupt handler address.
    period (Optional[int]): Instructions between timer interrupts.
    ram_size (int): Bytes of RAM mapped at RAM_BASE.
  """
  rom: bytes
  entry: int = 0
  handler: Optional[int] = None
  period: Optional[int] = None
  ram_size: int = DEFAULT_RAM_SIZE

  def Validate(self) -> None:
    """Checks the image invariants.

    Raises:
      InvalidImageError: If ROM is empty, entry or handler is outside ROM,
          the period is set without a handler, or RAM size is out of range.
    """
    if not self.rom:
      raise errors.InvalidImageError('Image has an empty ROM', __name__)
    if not self._Fetchable(self.entry):
      raise errors.InvalidImageError(
          'Entry 0x{0:x} is outside ROM'.format(self.entry), __name__)
    if self.handler is not None and not self._Fetchable(self.handler):
      raise errors.InvalidImageError(
          'Interrupt handler 0x{0:x} is outside ROM'.format(self.handler),
          __name__)
    if self.period is not None:
      if self.period <= 0:
        raise errors.InvalidImageError(
            'Interrupt period must be positive', __name__)
      if self.handler is None:
        raise errors.InvalidImageError(
            'Interrupt period set without a handler', __name__)
    if not 0 < self.ram_size <= isa.MAX_RAM_SIZE:
      raise errors.InvalidImageError(
          'RAM size 0x{0:x} out of range'.format(self.ram_size), __name__)

  def _Fetchable(self, address: int) -> bool:
    offset = RomOffset(address, len(self.rom))
    return offset is not None and offset + isa.INSTRUCTION_SIZE <= len(
        self.rom)

  def Serialize(self) -> bytes:
    """Returns the MVM1 encoding of the image."""
    handler = isa.NO_HANDLER if self.handler is None else self.handler
    header = _HEADER.pack(MAGIC, self.entry, handler, self.period or 0,
                          self.ram_size)
    return header + self.rom

  @property
  def sha256(self) -> str:
    """Hex SHA-256 of the serialized image."""
    return hashlib.sha256(self.Serialize()).hexdigest()

  def WithPeriod(self, period: Optional[int]) -> 'TargetImage':
    """Returns a copy with another interrupt period."""
    return dataclasses.replace(self, period=period)

  @classmethod
  def Parse(cls, data: bytes) -> 'TargetImage':
    """Decodes an MVM1 image.

    Args:
      data (bytes): The file contents.

    Returns:
      TargetImage: The validated image.

    Raises:
      InvalidImageError: If the header is malformed or the image is invalid.
    """
    if len(data) < _HEADER.size:
      raise errors.InvalidImageError('Image shorter than its header', __name__)
    magic, entry, handler, period, ram_size = _HEADER.unpack_from(data)
    if magic != MAGIC:
      raise errors.InvalidImageError(
          'Bad image magic {0!r}'.format(magic), __name__)
    image = cls(
        rom=bytes(data[_HEADER.size:]),
        entry=entry,
        handler=None if handler == isa.NO_HANDLER else handler,
        period=period or None,
        ram_size=ram_size)
    image.Validate()
    return image


def LoadImage(path: str) -> TargetImage:
  """Reads an MVM1 image file.

  Args:
    path (str): Path to the image.

  Returns:
    TargetImage: The validated image.

  Raises:
    InvalidImageError: If the file is not a valid image.
  """
  with open(path, 'rb') as image_file:
    return TargetImage.Parse(image_file.read())


def SaveImage(image: TargetImage, path: str) -> None:
  """Writes an image in MVM1 format."""
  with open(path, 'wb') as image_file:
    image_file.write(image.Serialize())
