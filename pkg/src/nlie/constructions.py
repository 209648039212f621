"""Builders for the classical families: the (n+1)-dimensional vector product
bracket, Jacobian-determinant brackets from commuting derivations, and the
variant whose determinant keeps the arguments themselves in the first row.

Derivation matrices are validated, never trusted: getting their semantics
wrong silently would poison every downstream structural computation.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

from .algebra import (
    NLieAlgebra,
    NLiePoissonAlgebra,
    SkewBracketTensor,
    SymProductTensor,
    Verdict,
    Witness,
)
from .fields import QQ, Field, PrimeField
from .guards import DEFAULT_MAX_ENUM, check_instances
from .linalg import Matrix, is_zero_vector, unit_vector, vec_add, zero_vector

# Determinants are expanded over all permutations; beyond this arity the
# factorial blowup is no longer desk scale.
_MAX_DET_ARITY = 6


def _signed_permutations(n: int):
    for perm in itertools.permutations(range(n)):
        inv = 0
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    inv += 1
        yield perm, (-1) ** inv


def check_derivation(product: SymProductTensor, d_matrix: Matrix) -> Verdict:
    """Check D(ei*ej) == D(ei)*ej + ei*D(ej) on all basis pairs."""
    if d_matrix.field != product.field:
        raise ValueError("derivation matrix field does not match the product")
    if d_matrix.nrows != product.dim or d_matrix.ncols != product.dim:
        raise ValueError("derivation matrix shape does not match the dimension")
    dim, f = product.dim, product.field
    total = dim * dim
    basis = [unit_vector(f, dim, i) for i in range(dim)]
    images = [d_matrix.matvec(basis[i]) for i in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            lhs = d_matrix.matvec(product.entry(i, j))
            rhs = vec_add(f, product.eval(images[i], basis[j]), product.eval(basis[i], images[j]))
            if lhs != rhs:
                return Verdict(
                    False, Witness("derivation", {"pair": (i, j), "lhs": lhs, "rhs": rhs}), total
                )
    return Verdict(True, None, total)


def check_commuting(maps: Sequence[Matrix]) -> Verdict:
    """Check Dr*Ds == Ds*Dr for every pair of maps."""
    total = len(maps) * (len(maps) - 1) // 2
    for r in range(len(maps)):
        for s in range(r + 1, len(maps)):
            if maps[r].mul(maps[s]) != maps[s].mul(maps[r]):
                return Verdict(False, Witness("commuting", {"pair": (r, s)}), total)
    return Verdict(True, None, total)


class DerivationSet:
    """Commuting derivations of a fixed commutative unital product.

    Construction re-derives both properties from the matrices; a violation
    raises with the offending witness.
    """

    __slots__ = ("product", "unit", "maps")

    def __init__(self, product: SymProductTensor, unit: Sequence, maps: Sequence[Matrix]):
        unit = tuple(unit)
        if len(unit) != product.dim:
            raise ValueError("unit vector has the wrong length")
        maps = tuple(maps)
        for k, m in enumerate(maps):
            verdict = check_derivation(product, m)
            if not verdict.ok:
                raise ValueError(f"map {k} is not a derivation: witness {verdict.witness.data}")
        verdict = check_commuting(maps)
        if not verdict.ok:
            raise ValueError(f"maps do not commute: witness {verdict.witness.data}")
        self.product = product
        self.unit = unit
        self.maps = maps

    @property
    def dim(self) -> int:
        return self.product.dim

    @property
    def field(self) -> Field:
        return self.product.field

    def __repr__(self):
        return f"DerivationSet({len(self.maps)} maps, dim={self.dim}, {self.field})"


def vector_product_algebra(n: int, field: Field = QQ) -> NLieAlgebra:
    """The alternating n-ary bracket on F^(n+1) defined by the formal
    determinant whose first n rows are the arguments and whose last row is
    the basis itself.

    On the increasing basis tuple omitting index m the value is
    (-1)^(n+m) * e_m (0-based).  The sign convention follows from placing
    the basis row last; the generalized Jacobi checker certifies the axioms
    independently of that choice.
    """
    if n < 2:
        raise ValueError("the vector product bracket needs arity >= 2")
    d = n + 1
    table = {}
    for m in range(d):
        key = tuple(i for i in range(d) if i != m)
        coeff = field.one if (n + m) % 2 == 0 else field.neg(field.one)
        value = [field.zero] * d
        value[m] = coeff
        table[key] = tuple(value)
    names = tuple(f"e{i + 1}" for i in range(d))
    return NLieAlgebra(SkewBracketTensor(d, n, field, table), names)


def _det_bracket_table(
    dim: int,
    arity: int,
    field: Field,
    product: SymProductTensor,
    entry_vec,
) -> dict:
    """Expand det[entry(r, s)] over permutations for every increasing tuple.

    entry_vec(r, col_index) returns the (r, s) determinant entry as a
    coefficient vector, where col_index is the basis index in slot s.
    """
    table = {}
    perms = list(_signed_permutations(arity))
    for key in itertools.combinations(range(dim), arity):
        acc = zero_vector(field, dim)
        for perm, sign in perms:
            term = entry_vec(0, key[perm[0]])
            if is_zero_vector(term):
                continue
            for r in range(1, arity):
                nxt = entry_vec(r, key[perm[r]])
                if is_zero_vector(nxt):
                    term = None
                    break
                term = product.eval(term, nxt)
                if is_zero_vector(term):
                    term = None
                    break
            if term is None:
                continue
            if sign < 0:
                term = tuple(field.neg(c) for c in term)
            acc = vec_add(field, acc, term)
        if not is_zero_vector(acc):
            table[key] = acc
    return table


def jacobian_from_derivations(ds: DerivationSet) -> NLiePoissonAlgebra:
    """Bracket of arity n = number of maps, with structure constants
    det[D_r(e_{i_s})]_{r,s} multiplied out in the carrier algebra; paired
    with the carrier's product and unit.
    """
    n = len(ds.maps)
    if n < 1:
        raise ValueError("need at least one derivation")
    if n > _MAX_DET_ARITY:
        raise ValueError(f"determinant expansion is limited to arity {_MAX_DET_ARITY}")
    dim, f = ds.dim, ds.field
    basis = [unit_vector(f, dim, i) for i in range(dim)]
    images = [[ds.maps[r].matvec(basis[i]) for i in range(dim)] for r in range(n)]

    def entry_vec(r: int, col: int):
        return images[r][col]

    table = _det_bracket_table(dim, n, f, ds.product, entry_vec)
    bracket = SkewBracketTensor(dim, n, f, table)
    return NLiePoissonAlgebra(ds.product, ds.unit, bracket)


def w_from_derivations(ds: DerivationSet, arity: int) -> NLieAlgebra:
    """Bracket of the given arity from arity-1 commuting derivations: the
    determinant's first row is the arguments themselves, row r+1 applies
    map r.  Returned as a bare n-Lie algebra: this bracket genuinely
    violates the Leibniz pairing with the carrier product, so no Poisson
    container is offered.
    """
    if arity < 2:
        raise ValueError("need arity >= 2")
    if arity > _MAX_DET_ARITY:
        raise ValueError(f"determinant expansion is limited to arity {_MAX_DET_ARITY}")
    if len(ds.maps) != arity - 1:
        raise ValueError(f"need exactly {arity - 1} maps for arity {arity}, got {len(ds.maps)}")
    dim, f = ds.dim, ds.field
    basis = [unit_vector(f, dim, i) for i in range(dim)]
    images = [[ds.maps[r].matvec(basis[i]) for i in range(dim)] for r in range(arity - 1)]

    def entry_vec(r: int, col: int):
        if r == 0:
            return basis[col]
        return images[r - 1][col]

    table = _det_bracket_table(dim, arity, f, ds.product, entry_vec)
    return NLieAlgebra(SkewBracketTensor(dim, arity, f, table))


@dataclass(frozen=True)
class TruncatedCarrier:
    """Monomial-basis truncated polynomial algebra with its partials."""

    product: SymProductTensor
    unit: tuple
    derivations: DerivationSet
    names: tuple[str, ...]
    exponents: tuple[tuple[int, ...], ...]


def _grlex_key(e: tuple[int, ...]) -> tuple:
    return (sum(e), tuple(-c for c in e))


def _monomial_name(e: tuple[int, ...], var_names: Sequence[str]) -> str:
    parts = []
    for v, a in zip(var_names, e):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append(f"{v}^{a}")
    return "*".join(parts) if parts else "1"


def truncated_polynomial_algebra(nvars: int, p: int, max_dim: int | None = None) -> TruncatedCarrier:
    """F_p[x1..xk] with every variable's p-th power set to zero: dimension
    p^k, monomial basis in graded lexicographic order (constant first).

    This carrier makes the formal partials honest derivations: the boundary
    term p*x^(p-1) vanishes in characteristic p.
    """
    if nvars < 1:
        raise ValueError("need at least one variable")
    field = PrimeField(p)
    dim = p**nvars
    check_instances(dim, max_dim, DEFAULT_MAX_ENUM, "truncated polynomial basis")
    exps = sorted(itertools.product(range(p), repeat=nvars), key=_grlex_key)
    index = {e: i for i, e in enumerate(exps)}
    var_names = _default_vars(nvars)

    table = {}
    for i, a in enumerate(exps):
        for j in range(i, dim):
            b = exps[j]
            s = tuple(x + y for x, y in zip(a, b))
            if all(c < p for c in s):
                vec = [field.zero] * dim
                vec[index[s]] = field.one
                table[(i, j)] = tuple(vec)
    product = SymProductTensor(dim, field, table)
    unit = unit_vector(field, dim, index[(0,) * nvars])

    maps = []
    for t in range(nvars):
        cols = []
        for e in exps:
            vec = [field.zero] * dim
            if e[t] > 0:
                lower = e[:t] + (e[t] - 1,) + e[t + 1 :]
                vec[index[lower]] = field.from_int(e[t])
            cols.append(vec)
        rows = tuple(tuple(cols[j][i] for j in range(dim)) for i in range(dim))
        maps.append(Matrix(field, rows))
    ds = DerivationSet(product, unit, maps)
    names = tuple(_monomial_name(e, var_names) for e in exps)
    return TruncatedCarrier(product, unit, ds, names, tuple(exps))


def _default_vars(k: int) -> tuple[str, ...]:
    if k <= 3:
        return ("x", "y", "z")[:k]
    return tuple(f"x{i + 1}" for i in range(k))
