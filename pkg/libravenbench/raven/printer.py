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
"""Canonical pretty-printer for Raven programs.

The output re-parses to a program equal to the input. Nested expressions are
fully parenthesized.
"""

from typing import List

from libravenbench.raven import nodes

INDENT = '  '

_ESCAPES = {'\n': '\\n', '\t': '\\t', '\\': '\\\\', '"': '\\"', '\0': '\\0'}


def _Quote(text: str) -> str:
  return '"{0:s}"'.format(''.join(_ESCAPES.get(char, char) for char in text))


def PrintExpression(expr: nodes.Expression, top: bool = False) -> str:
  """Renders an expression.

  Args:
    expr (Expression): The expression node.
    top (bool): Optional. True when the expression is a whole statement, in
        which case an outer assignment is not parenthesized.

  Returns:
    str: C source text.
  """
  if isinstance(expr, nodes.IntLiteral):
    return expr.text
  if isinstance(expr, nodes.StringLiteral):
    return _Quote(expr.value)
  if isinstance(expr, nodes.Name):
    return expr.name
  if isinstance(expr, nodes.Index):
    return '{0:s}[{1:s}]'.format(expr.name, PrintExpression(expr.index, True))
  if isinstance(expr, nodes.Call):
    return '{0:s}({1:s})'.format(
        expr.name, ', '.join(PrintExpression(arg, True) for arg in expr.args))
  if isinstance(expr, nodes.Unary):
    return '{0:s}({1:s})'.format(expr.op, PrintExpression(expr.operand, True))
  if isinstance(expr, nodes.Binary):
    return '({0:s} {1:s} {2:s})'.format(
        PrintExpression(expr.left), expr.op, PrintExpression(expr.right))
  if isinstance(expr, nodes.Conditional):
    return '({0:s} ? {1:s} : {2:s})'.format(
        PrintExpression(expr.condition), PrintExpression(expr.then),
        PrintExpression(expr.otherwise))
  if isinstance(expr, nodes.Cast):
    return '(({0:s})({1:s}))'.format(
        expr.type_name, PrintExpression(expr.operand, True))
  if isinstance(expr, nodes.Assign):
    text = '{0:s} {1:s} {2:s}'.format(
        PrintExpression(expr.target), expr.op, PrintExpression(expr.value))
    return text if top else '(' + text + ')'
  if isinstance(expr, nodes.IncDec):
    target = PrintExpression(expr.target)
    if expr.prefix:
      return expr.op + target
    return target + expr.op
  raise TypeError('Unknown expression node {0!r}'.format(expr))


def _PrintLocal(local: nodes.LocalDecl) -> str:
  if local.init is None:
    return '{0:s} {1:s}'.format(local.type_name, local.name)
  return '{0:s} {1:s} = {2:s}'.format(
      local.type_name, local.name, PrintExpression(local.init, True))


def _PrintStatement(statement: nodes.Statement, depth: int,
                    lines: List[str]) -> None:
  pad = INDENT * depth
  if isinstance(statement, nodes.Block):
    lines.append(pad + '{')
    for inner in statement.statements:
      _PrintStatement(inner, depth + 1, lines)
    lines.append(pad + '}')
  elif isinstance(statement, nodes.ExprStmt):
    lines.append(pad + PrintExpression(statement.expr, True) + ';')
  elif isinstance(statement, nodes.LocalDecl):
    lines.append(pad + _PrintLocal(statement) + ';')
  elif isinstance(statement, nodes.If):
    lines.append(pad + 'if ({0:s})'.format(
        PrintExpression(statement.condition, True)))
    _PrintStatement(statement.then, depth + 1, lines)
    if statement.otherwise is not None:
      lines.append(pad + 'else')
      _PrintStatement(statement.otherwise, depth + 1, lines)
  elif isinstance(statement, nodes.While):
    lines.append(pad + 'while ({0:s})'.format(
        PrintExpression(statement.condition, True)))
    _PrintStatement(statement.body, depth + 1, lines)
  elif isinstance(statement, nodes.For):
    init = ''
    if isinstance(statement.init, nodes.LocalDecl):
      init = _PrintLocal(statement.init)
    elif statement.init is not None:
      init = PrintExpression(statement.init.expr, True)
    condition = ('' if statement.condition is None else
                 PrintExpression(statement.condition, True))
    step = ('' if statement.step is None else
            PrintExpression(statement.step, True))
    lines.append(pad + 'for ({0:s}; {1:s}; {2:s})'.format(
        init, condition, step))
    _PrintStatement(statement.body, depth + 1, lines)
  elif isinstance(statement, nodes.Break):
    lines.append(pad + 'break;')
  elif isinstance(statement, nodes.Continue):
    lines.append(pad + 'continue;')
  elif isinstance(statement, nodes.Return):
    if statement.value is None:
      lines.append(pad + 'return;')
    else:
      lines.append(pad + 'return {0:s};'.format(
          PrintExpression(statement.value, True)))
  elif isinstance(statement, nodes.Empty):
    lines.append(pad + ';')
  else:
    raise TypeError('Unknown statement node {0!r}'.format(statement))


def PrintProgram(program: nodes.RavenProgram) -> str:
  """Renders a whole Raven program as canonical source text.

  Args:
    program (RavenProgram): The program.

  Returns:
    str: Source text; parsing it yields a program equal to the input.
  """
  lines = []  # type: List[str]
  for decl in program.globals:
    text = decl.type_name + ' ' + decl.name
    if decl.size is not None:
      text += '[{0:d}]'.format(decl.size)
      if decl.init:
        text += ' = {' + ', '.join(
            PrintExpression(item, True) for item in decl.init) + '}'
    elif decl.init:
      text += ' = ' + PrintExpression(decl.init[0], True)
    lines.append(text + ';')
  if program.globals:
    lines.append('')

  if program.hooks:
    lines.append('context_struct {0:s}[] = {{'.format(program.table_name))
    for hook in program.hooks:
      lines.append('{0:s}{{0x{1:x}, {2:s}}},'.format(
          INDENT * 2, hook.address, hook.function_name))
    lines.append('};')
  else:
    lines.append('context_struct {0:s}[] = {{}};'.format(program.table_name))

  for function in program.functions:
    lines.append('')
    lines.append('{0:s} {1:s}()'.format(function.return_type, function.name))
    _PrintStatement(function.body, 0, lines)
  return '\n'.join(lines) + '\n'
