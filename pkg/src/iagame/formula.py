"""Boolean functions as truth tables.

A formula over ``n`` variables is identified with its truth table, stored as
an integer bitset of length ``2**n``.  Bit ``a`` of the table holds the value
of the formula under the assignment encoded by ``a``, where bit ``i`` of ``a``
is the truth value of variable ``v{i+1}``.  Variable indices in the Python API
are 0-based (index ``i`` is ``v{i+1}``); formula text uses the 1-based names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

MAX_VARS = 16


@lru_cache(maxsize=None)
def _full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def var_mask(n: int, i: int) -> int:
    """Bitset of the assignments (over ``n`` variables) that set ``v{i+1}``."""
    block = 1 << i
    unit = ((1 << block) - 1) << block  # one run of `block` ones after `block` zeros
    mask = 0
    for start in range(0, 1 << n, 2 * block):
        mask |= unit << start
    return mask


@dataclass(frozen=True, order=True)
class TruthTable:
    num_vars: int
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.num_vars <= MAX_VARS:
            raise ValueError(f"num_vars must be in [0, {MAX_VARS}], got {self.num_vars}")
        if self.bits < 0 or self.bits > _full_mask(self.num_vars):
            raise ValueError(f"table bits out of range for n={self.num_vars}")

    # constructors

    @classmethod
    def constant(cls, n: int, value: bool) -> TruthTable:
        return cls(n, _full_mask(n) if value else 0)

    @classmethod
    def variable(cls, n: int, i: int) -> TruthTable:
        _check_index(n, i)
        return cls(n, var_mask(n, i))

    @classmethod
    def xor(cls, n: int) -> TruthTable:
        """Parity of all ``n`` variables (the constant F when ``n == 0``)."""
        bits = 0
        for i in range(n):
            bits ^= var_mask(n, i)
        return cls(n, bits)

    @classmethod
    def from_function(cls, n: int, fn) -> TruthTable:
        """Tabulate ``fn(a)`` over all assignment indices ``a``."""
        bits = 0
        for a in range(1 << n):
            if fn(a):
                bits |= 1 << a
        return cls(n, bits)

    # boolean algebra

    @property
    def size(self) -> int:
        return 1 << self.num_vars

    def __invert__(self) -> TruthTable:
        return TruthTable(self.num_vars, self.bits ^ _full_mask(self.num_vars))

    def _same_arity(self, other: TruthTable) -> None:
        if other.num_vars != self.num_vars:
            raise ValueError("truth tables have different numbers of variables")

    def __and__(self, other: TruthTable) -> TruthTable:
        self._same_arity(other)
        return TruthTable(self.num_vars, self.bits & other.bits)

    def __or__(self, other: TruthTable) -> TruthTable:
        self._same_arity(other)
        return TruthTable(self.num_vars, self.bits | other.bits)

    def __xor__(self, other: TruthTable) -> TruthTable:
        self._same_arity(other)
        return TruthTable(self.num_vars, self.bits ^ other.bits)

    def __call__(self, a: int) -> bool:
        return evaluate(self, a)

    def satisfying(self) -> list[int]:
        return [a for a in range(self.size) if self.bits >> a & 1]

    def bitstring(self) -> str:
        """Table bits listed from assignment index 0 upwards (``v1 | v2`` is ``0111``)."""
        return format(self.bits, f"0{self.size}b")[::-1]

    @classmethod
    def from_bitstring(cls, text: str) -> TruthTable:
        """Inverse of :meth:`bitstring`; the length must be a power of two."""
        size = len(text)
        n = size.bit_length() - 1
        if size == 0 or 1 << n != size or set(text) - {"0", "1"}:
            raise ValueError(f"not a truth-table bit string: {text!r}")
        return cls(n, int(text[::-1], 2))

    def __str__(self) -> str:
        return f"TruthTable(n={self.num_vars}, bits={self.bitstring()})"


def _check_index(n: int, i: int) -> None:
    if not 0 <= i < n:
        raise IndexError(f"variable index {i} out of range for n={n}")


def evaluate(tt: TruthTable, a: int) -> bool:
    if not 0 <= a < tt.size:
        raise ValueError(f"assignment {a} does not fit {tt.num_vars} variables")
    return bool(tt.bits >> a & 1)


def assignment(*values: bool) -> int:
    """Encode truth values of ``v1, v2, ...`` as an assignment index."""
    return sum(1 << i for i, v in enumerate(values) if v)


def assignment_values(n: int, a: int) -> tuple[bool, ...]:
    return tuple(bool(a >> i & 1) for i in range(n))


def project(tt: TruthTable, i: int, value: bool) -> TruthTable:
    """The table of ``phi[v_i -> value]``, still over ``n`` variables."""
    n = tt.num_vars
    _check_index(n, i)
    shift = 1 << i
    m = var_mask(n, i)
    if value:
        half = tt.bits & m
        return TruthTable(n, half | (half >> shift))
    half = tt.bits & ~m & _full_mask(n)
    return TruthTable(n, half | (half << shift))


def relevance_count(tt: TruthTable, i: int) -> int:
    """Number of assignments at which flipping ``v_i`` flips the formula."""
    diff = project(tt, i, True).bits ^ project(tt, i, False).bits
    return bin(diff).count("1")


def relevance_counts(tt: TruthTable) -> tuple[int, ...]:
    return tuple(relevance_count(tt, i) for i in range(tt.num_vars))


def relevance_leq(tt: TruthTable, i: int, j: int) -> bool:
    """``v_i <=_phi v_j``: ``v_j`` is at least as relevant as ``v_i``."""
    return relevance_count(tt, i) <= relevance_count(tt, j)


def antisymmetric_in(tt: TruthTable, i: int) -> bool:
    return project(tt, i, True) == ~project(tt, i, False)


def antisymmetrize(tt: TruthTable, i: int) -> TruthTable:
    """``(v & phi[v->T]) | (!v & !phi[v->T])`` for ``v = v_i``."""
    v = TruthTable.variable(tt.num_vars, i)
    high = project(tt, i, True)
    return (v & high) | (~v & ~high)


def v_count(tt: TruthTable) -> int:
    """Number of variables the formula is not antisymmetric in."""
    return sum(not antisymmetric_in(tt, i) for i in range(tt.num_vars))


def is_xor_or_negation(tt: TruthTable) -> bool:
    return v_count(tt) == 0


def enumerate_truth_tables(n: int) -> Iterator[TruthTable]:
    if not 0 <= n <= MAX_VARS:
        raise ValueError(f"n must be in [0, {MAX_VARS}]")
    for bits in range(_full_mask(n) + 1):
        yield TruthTable(n, bits)


# symmetry group used to share work across equivalent tables


def negate_input(tt: TruthTable, i: int) -> TruthTable:
    """The table of ``phi[v_i -> !v_i]``."""
    n = tt.num_vars
    shift = 1 << i
    m = var_mask(n, i)
    return TruthTable(n, ((tt.bits & m) >> shift) | ((tt.bits & ~m & _full_mask(n)) << shift))


def swap_inputs(tt: TruthTable, i: int, j: int) -> TruthTable:
    """Exchange the roles of ``v_i`` and ``v_j``."""
    if i == j:
        return tt
    if i > j:
        i, j = j, i
    n = tt.num_vars
    # assignments with v_i = 1, v_j = 0 trade places with v_i = 0, v_j = 1
    delta = (1 << j) - (1 << i)
    lo = var_mask(n, i) & ~var_mask(n, j) & _full_mask(n)
    bits = tt.bits
    moved = (bits ^ (bits >> delta)) & lo
    return TruthTable(n, bits ^ moved ^ (moved << delta))


def permute_inputs(tt: TruthTable, perm: tuple[int, ...]) -> TruthTable:
    """Rename variables: the result at ``A`` is ``phi`` at ``A`` with ``v_perm[i]`` read as ``v_i``."""
    n = tt.num_vars
    bits = 0
    for a in range(1 << n):
        src = 0
        for i in range(n):
            if a >> i & 1:
                src |= 1 << perm[i]
        if tt.bits >> src & 1:
            bits |= 1 << a
    return TruthTable(n, bits)


def npn_neighbours(tt: TruthTable) -> list[TruthTable]:
    """Generators of the input-permutation, input-negation and output-negation group."""
    out = [~tt]
    n = tt.num_vars
    if n >= 1:
        out.append(negate_input(tt, 0))
    for i in range(n - 1):
        out.append(swap_inputs(tt, i, i + 1))
    return out


def npn_classes(n: int) -> Iterator[tuple[TruthTable, list[int]]]:
    """Yield ``(representative, member_bits)`` for every NPN class over ``n`` variables.

    Representatives are the smallest table in each class, emitted in increasing order.
    """
    total = _full_mask(n) + 1
    seen = bytearray(total)
    for bits in range(total):
        if seen[bits]:
            continue
        seen[bits] = 1
        stack = [TruthTable(n, bits)]
        members = [bits]
        while stack:
            cur = stack.pop()
            for nxt in npn_neighbours(cur):
                if not seen[nxt.bits]:
                    seen[nxt.bits] = 1
                    members.append(nxt.bits)
                    stack.append(nxt)
        yield TruthTable(n, bits), members


def npn_orbits(n: int) -> Iterator[tuple[TruthTable, int]]:
    """Yield ``(representative, orbit_size)`` for every NPN class over ``n`` variables."""
    for rep, members in npn_classes(n):
        yield rep, len(members)


# formula syntax

_TOKEN = re.compile(r"\s*(?:(v(\d+))|([TF])|([!&^|()]))")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Var:
    index: int  # 1-based, as written


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "FormulaAst"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of "&", "^", "|"
    left: "FormulaAst"
    right: "FormulaAst"


FormulaAst = Union[Var, Const, Not, BinOp]

# binding strength, tighter first: ! > & > ^ > |
_LEVELS = ("|", "^", "&")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("var", int(m.group(2)), start))
        elif m.group(3):
            tokens.append(("const", m.group(3) == "T", start))
        else:
            tokens.append(("op", m.group(4), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def binary(self, level: int) -> FormulaAst:
        if level == len(_LEVELS):
            return self.unary()
        op = _LEVELS[level]
        node = self.binary(level + 1)
        while self.peek()[:2] == ("op", op):
            self.take()
            node = BinOp(op, node, self.binary(level + 1))
        return node

    def unary(self) -> FormulaAst:
        kind, value, pos = self.take()
        if kind == "op" and value == "!":
            return Not(self.unary())
        if kind == "op" and value == "(":
            node = self.binary(0)
            kind, value, pos = self.take()
            if (kind, value) != ("op", ")"):
                raise FormulaSyntaxError("expected ')'", pos)
            return node
        if kind == "var":
            if value < 1:
                raise FormulaSyntaxError("variables are numbered from v1", pos)
            return Var(value)
        if kind == "const":
            return Const(value)
        if kind == "end":
            raise FormulaSyntaxError("unexpected end of formula", pos)
        raise FormulaSyntaxError(f"unexpected {value!r}", pos)


def parse_formula(text: str) -> FormulaAst:
    """Parse ``v1..vN``, ``T``, ``F``, ``!``, ``&``, ``^``, ``|`` and parentheses."""
    p = _Parser(text)
    node = p.binary(0)
    kind, value, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {value!r}", pos)
    return node


def lower(ast: FormulaAst, n: int) -> TruthTable:
    if isinstance(ast, Var):
        if ast.index > n:
            raise ValueError(f"v{ast.index} exceeds the declared {n} variables")
        return TruthTable.variable(n, ast.index - 1)
    if isinstance(ast, Const):
        return TruthTable.constant(n, ast.value)
    if isinstance(ast, Not):
        return ~lower(ast.arg, n)
    left, right = lower(ast.left, n), lower(ast.right, n)
    if ast.op == "&":
        return left & right
    if ast.op == "|":
        return left | right
    return left ^ right


def max_var_index(ast: FormulaAst) -> int:
    if isinstance(ast, Var):
        return ast.index
    if isinstance(ast, Const):
        return 0
    if isinstance(ast, Not):
        return max_var_index(ast.arg)
    return max(max_var_index(ast.left), max_var_index(ast.right))


def formula(text: str, n: int | None = None) -> TruthTable:
    """Parse and tabulate; ``n`` defaults to the largest variable mentioned."""
    ast = parse_formula(text)
    return lower(ast, max_var_index(ast) if n is None else n)
