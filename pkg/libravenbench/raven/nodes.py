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
"""Abstract syntax tree of a Raven program.

Nodes are immutable. Source positions are kept for diagnostics but do not
take part in equality, so two parses of differently formatted but
equivalent sources compare equal.
"""

import dataclasses
from typing import Any, Dict, List, Optional, Tuple, Union

from libravenbench.raven import values


def _Position() -> Any:
  return dataclasses.field(default=0, compare=False, repr=False)


# Expressions


@dataclasses.dataclass(frozen=True)
class IntLiteral:
  text: str
  value: int
  type: values.IntType
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class StringLiteral:
  value: str
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Name:
  name: str
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Index:
  """Subscript of a global array, or the frb_reg_state[id] form."""
  name: str
  index: 'Expression'
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Call:
  name: str
  args: Tuple['Expression', ...]
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Unary:
  op: str
  operand: 'Expression'
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Binary:
  op: str
  left: 'Expression'
  right: 'Expression'
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Conditional:
  condition: 'Expression'
  then: 'Expression'
  otherwise: 'Expression'
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Cast:
  type_name: str
  operand: 'Expression'
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Assign:
  """Plain ('=') or compound ('+=', ...) assignment."""
  op: str
  target: Union[Name, Index]
  value: 'Expression'
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class IncDec:
  op: str
  prefix: bool
  target: Union[Name, Index]
  line: int = _Position()
  column: int = _Position()


Expression = Union[IntLiteral, StringLiteral, Name, Index, Call, Unary,
                   Binary, Conditional, Cast, Assign, IncDec]

# Statements


@dataclasses.dataclass(frozen=True)
class ExprStmt:
  expr: Expression
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class LocalDecl:
  type_name: str
  name: str
  init: Optional[Expression]
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Block:
  statements: Tuple['Statement', ...]
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class If:
  condition: Expression
  then: 'Statement'
  otherwise: Optional['Statement']
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class While:
  condition: Expression
  body: 'Statement'
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class For:
  init: Optional[Union[ExprStmt, LocalDecl]]
  condition: Optional[Expression]
  step: Optional[Expression]
  body: 'Statement'
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Break:
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Continue:
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Return:
  value: Optional[Expression]
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class Empty:
  line: int = _Position()
  column: int = _Position()


Statement = Union[ExprStmt, LocalDecl, Block, If, While, For, Break,
                  Continue, Return, Empty]

# Top level


@dataclasses.dataclass(frozen=True)
class GlobalDecl:
  """A global scalar (size None) or array declaration.

  Attributes:
    type_name (str): Declared type spelling, e.g. 'uint32_t'.
    name (str): Variable name.
    size (Optional[int]): Element count for arrays, None for scalars.
    init (Tuple[Expression, ...]): Initialiser expressions; one element for
        an initialised scalar, any number up to size for arrays.
  """
  type_name: str
  name: str
  size: Optional[int]
  init: Tuple[Expression, ...]
  line: int = _Position()
  column: int = _Position()

  @property
  def int_type(self) -> values.IntType:
    return values.TYPE_NAMES[self.type_name]


@dataclasses.dataclass(frozen=True)
class Function:
  return_type: str
  name: str
  body: Block
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class HookEntry:
  address: int
  function_name: str
  line: int = _Position()
  column: int = _Position()


@dataclasses.dataclass(frozen=True)
class RavenProgram:
  """A parsed Raven: reflection table, introspection functions, globals.

  Attributes:
    table_name (str): Name of the context_struct hook table.
    hooks (Tuple[HookEntry, ...]): Reflection entries in source order.
    functions (Tuple[Function, ...]): Function definitions in source order.
    globals (Tuple[GlobalDecl, ...]): Global declarations in source order.
    bug_ids (Tuple[str, ...]): Bug IDs named by report_* calls, in order of
        first appearance.
    origin (str): Source label, e.g. the .raven file path.
    warnings (Tuple[str, ...]): Non-fatal validation findings.
  """
  table_name: str
  hooks: Tuple[HookEntry, ...]
  functions: Tuple[Function, ...]
  globals: Tuple[GlobalDecl, ...]
  bug_ids: Tuple[str, ...]
  origin: str = dataclasses.field(default='<raven>', compare=False)
  warnings: Tuple[str, ...] = dataclasses.field(default=(), compare=False)

  @property
  def reflection_table(self) -> List[Tuple[int, str]]:
    """(address, function name) pairs in declaration order."""
    return [(hook.address, hook.function_name) for hook in self.hooks]

  @property
  def function_map(self) -> Dict[str, Function]:
    """Function definitions keyed by name."""
    return {function.name: function for function in self.functions}

  def GetFunction(self, name: str) -> Optional[Function]:
    """Returns the named function, or None."""
    for function in self.functions:
      if function.name == name:
        return function
    return None
