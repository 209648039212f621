"""Structural analysis of skew brackets and their companion products:
adjoint operators, derived series, centers, ideal closures, nilradicals,
quotients, certified simplicity verdicts, statement probes, and the
derived-modulo-center pipeline.

Subspaces are the working currency; everything returns canonical
SubspaceBasis values so results compare by value.  Over prime fields the
closure engine runs on int64 arrays; over the rationals it stays on exact
fractions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from collections.abc import Sequence

import numpy as np

from .algebra import (
    NLieAlgebra,
    NLiePoissonAlgebra,
    SkewBracketTensor,
    SymProductTensor,
    Verdict,
    Witness,
    check_assoc_comm_unital,
    check_generalized_jacobi,
    check_leibniz,
)
from .fields import Field, PrimeField, RationalField
from .guards import (
    DEFAULT_MAX_ENUM,
    DEFAULT_MAX_SUBSPACES,
    GuardExceeded,
    effective_limit,
)
from .linalg import (
    EchelonAccumulator,
    Matrix,
    SubspaceBasis,
    kernel,
    span,
    unit_vector,
    vec_add,
    zero_vector,
)

AlgebraLike = NLieAlgebra | NLiePoissonAlgebra | SkewBracketTensor

DEFAULT_REDUCTION_PRIMES = (5, 7, 11, 13, 17, 19, 23, 29)
_COMBO_TRIALS = 200


class IdealKind(Enum):
    NLIE = "nlie"
    ASSOCIATIVE = "associative"
    POISSON = "poisson"


def _bracket_of(alg: AlgebraLike) -> SkewBracketTensor:
    if isinstance(alg, SkewBracketTensor):
        return alg
    return alg.bracket


def _product_of(alg: AlgebraLike, product: SymProductTensor | None) -> SymProductTensor | None:
    if product is not None:
        return product
    if isinstance(alg, NLiePoissonAlgebra):
        return alg.product
    return None


def _char_flags(field: Field) -> tuple[str, ...]:
    if isinstance(field, PrimeField):
        return (f"characteristic {field.p}: outside the characteristic-0 hypotheses",)
    return ()


# ---------------------------------------------------------------------------
# adjoint and multiplication operators


def ad_operator(alg: AlgebraLike, args: Sequence[Sequence]) -> Matrix:
    """Matrix of b -> bracket(b, args...) in the standard basis."""
    t = _bracket_of(alg)
    if len(args) != t.arity - 1:
        raise ValueError(f"expected {t.arity - 1} arguments, got {len(args)}")
    cols = [t.eval([unit_vector(t.field, t.dim, k), *args]) for k in range(t.dim)]
    return Matrix(t.field, [[cols[k][i] for k in range(t.dim)] for i in range(t.dim)])


def _ad_from_indices(t: SkewBracketTensor, idx: tuple[int, ...]) -> Matrix:
    cols = [t.component((k, *idx)) for k in range(t.dim)]
    return Matrix(t.field, [[cols[k][i] for k in range(t.dim)] for i in range(t.dim)])


def ad_basis_operators(alg: AlgebraLike) -> list[tuple[tuple[int, ...], Matrix]]:
    """All adjoint operators from strictly increasing basis tuples, in
    lexicographic tuple order."""
    t = _bracket_of(alg)
    return [
        (idx, _ad_from_indices(t, idx))
        for idx in itertools.combinations(range(t.dim), t.arity - 1)
    ]


def mult_operators(product: SymProductTensor) -> list[Matrix]:
    """Left-multiplication matrix of every basis element (commutative, so
    one side covers both)."""
    d = product.dim
    ops = []
    for k in range(d):
        cols = [product.entry(k, j) for j in range(d)]
        ops.append(Matrix(product.field, [[cols[j][i] for j in range(d)] for i in range(d)]))
    return ops


def _labeled_ops(
    t: SkewBracketTensor, kind: IdealKind, product: SymProductTensor | None
) -> list[tuple[dict, Matrix]]:
    labeled: list[tuple[dict, Matrix]] = []
    if kind in (IdealKind.NLIE, IdealKind.POISSON):
        for idx, m in ad_basis_operators(t):
            if not m.is_zero():
                labeled.append(({"op": "ad", "args": list(idx)}, m))
    if kind in (IdealKind.ASSOCIATIVE, IdealKind.POISSON):
        if product is None:
            raise ValueError(f"{kind.value} ideal operations require the product")
        for k, m in enumerate(mult_operators(product)):
            if not m.is_zero():
                labeled.append(({"op": "mult", "index": k}, m))
    return labeled


def _ops_for_kind(
    t: SkewBracketTensor, kind: IdealKind, product: SymProductTensor | None
) -> list[Matrix]:
    return [m for _, m in _labeled_ops(t, kind, product)]


# ---------------------------------------------------------------------------
# derived series and center


def derived_subspace(alg: AlgebraLike, S: SubspaceBasis | None = None) -> SubspaceBasis:
    """Span of all bracket values on tuples from S (the whole space when S
    is omitted)."""
    t = _bracket_of(alg)
    if S is None or S.is_full():
        return span(t.field, t.dim, [vec for _, vec in t.sorted_items()])
    if S.ambient_dim != t.dim:
        raise ValueError("subspace lives in the wrong ambient dimension")
    acc = EchelonAccumulator(t.field, t.dim)
    for combo in itertools.combinations(S.rows, t.arity):
        acc.add(t.eval(list(combo)))
        if acc.dim == t.dim:
            break
    return acc.to_subspace()


def derived_series(alg: AlgebraLike, S: SubspaceBasis | None = None) -> list[SubspaceBasis]:
    """S, bracket(S,...,S), ... down to stabilization.  The stabilizing
    repeat is included; a zero term ends the list immediately."""
    t = _bracket_of(alg)
    if S is None:
        S = SubspaceBasis.full(t.field, t.dim)
    series = [S]
    while not series[-1].is_zero():
        nxt = derived_subspace(t, series[-1])
        series.append(nxt)
        if nxt == series[-2]:
            break
    return series


def center(alg: AlgebraLike) -> SubspaceBasis:
    """Elements whose bracket against every basis tuple vanishes."""
    t = _bracket_of(alg)
    K = SubspaceBasis.full(t.field, t.dim)
    for idx in itertools.combinations(range(t.dim), t.arity - 1):
        m = _ad_from_indices(t, idx)
        if m.is_zero():
            continue
        K = K.intersect(kernel(m))
        if K.is_zero():
            break
    return K


# ---------------------------------------------------------------------------
# ideal predicates and closures


def is_nlie_ideal(alg: AlgebraLike, S: SubspaceBasis) -> bool:
    t = _bracket_of(alg)
    for _, m in ad_basis_operators(t):
        for row in S.rows:
            if not S.contains(m.matvec(row)):
                return False
    return True


def is_associative_ideal(product: SymProductTensor, S: SubspaceBasis) -> bool:
    for m in mult_operators(product):
        for row in S.rows:
            if not S.contains(m.matvec(row)):
                return False
    return True


def is_poisson_ideal(
    alg: AlgebraLike, S: SubspaceBasis, product: SymProductTensor | None = None
) -> bool:
    product = _product_of(alg, product)
    if product is None:
        raise ValueError("a Poisson ideal check requires the product")
    return is_nlie_ideal(alg, S) and is_associative_ideal(product, S)


class _FpEchelon:
    """Forward-echelon accumulator on int64 rows mod p.  Stored rows stay
    mutually reduced (each pivot column is zero in every other row), so
    membership tests are a single pass and conversion to the canonical
    SubspaceBasis is a sort."""

    __slots__ = ("p", "dim", "rows", "pivots")

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce_batch(self, batch: np.ndarray) -> np.ndarray:
        b = np.mod(batch, self.p)
        for r, j in zip(self.rows, self.pivots):
            c = b[:, j]
            hit = c != 0
            if hit.any():
                b[hit] = np.mod(b[hit] - c[hit, None] * r, self.p)
        return b

    def add_batch(self, batch: np.ndarray) -> list[np.ndarray]:
        """Insert the independent rows of the batch; returns them."""
        added: list[np.ndarray] = []
        b = self.reduce_batch(batch)
        while self.rank < self.dim:
            live = np.nonzero(b.any(axis=1))[0]
            if live.size == 0:
                break
            row = b[live[0]]
            j = int(np.nonzero(row)[0][0])
            row = np.mod(row * pow(int(row[j]), self.p - 2, self.p), self.p)
            for k, r in enumerate(self.rows):
                if r[j] != 0:
                    self.rows[k] = np.mod(r - r[j] * row, self.p)
            self.rows.append(row)
            self.pivots.append(j)
            added.append(row)
            b = b[live[0] + 1 :]
            if b.shape[0] == 0:
                break
            c = b[:, j]
            hit = c != 0
            if hit.any():
                b[hit] = np.mod(b[hit] - c[hit, None] * row, self.p)
        return added

    def to_subspace(self, field: PrimeField) -> SubspaceBasis:
        order = sorted(range(self.rank), key=lambda i: self.pivots[i])
        rows = [tuple(int(c) for c in self.rows[i]) for i in order]
        pivots = [self.pivots[i] for i in order]
        return SubspaceBasis._trusted(field, self.dim, rows, pivots)


def _ops_tensor(ops: list[Matrix]) -> np.ndarray:
    if not ops:
        return np.zeros((0, 0, 0), dtype=np.int64)
    d = ops[0].nrows
    return np.array([[list(row) for row in m.rows] for m in ops], dtype=np.int64).reshape(
        len(ops), d, d
    )


def _fp_closure(p: int, dim: int, seeds: np.ndarray, ops_tensor: np.ndarray) -> _FpEchelon:
    ech = _FpEchelon(p, dim)
    queue = ech.add_batch(seeds)
    if ops_tensor.shape[0] == 0:
        return ech
    while queue and ech.rank < dim:
        v = queue.pop()
        queue.extend(ech.add_batch(np.mod(ops_tensor @ v, p)))
    return ech


def _closure(
    field: Field, dim: int, seed_vectors: Sequence[Sequence], ops: list[Matrix]
) -> SubspaceBasis:
    seed_vectors = list(seed_vectors)
    if not ops:
        return span(field, dim, seed_vectors)
    if isinstance(field, PrimeField):
        seeds = np.array([[int(c) for c in v] for v in seed_vectors], dtype=np.int64)
        seeds = seeds.reshape(len(seed_vectors), dim)
        return _fp_closure(field.p, dim, seeds, _ops_tensor(ops)).to_subspace(field)
    acc = EchelonAccumulator(field, dim)
    queue = [r for v in seed_vectors if (r := acc.add(v)) is not None]
    while queue and acc.dim < dim:
        v = queue.pop()
        for m in ops:
            r = acc.add(m.matvec(v))
            if r is not None:
                queue.append(r)
        if acc.dim == dim:
            break
    return acc.to_subspace()


def ideal_closure(
    alg: AlgebraLike,
    S: SubspaceBasis | Sequence[Sequence],
    kind: IdealKind = IdealKind.NLIE,
    product: SymProductTensor | None = None,
) -> SubspaceBasis:
    """Smallest subspace containing S closed under the kind's operations
    (adjoints, multiplications, or both)."""
    t = _bracket_of(alg)
    product = _product_of(alg, product)
    vectors = list(S.rows) if isinstance(S, SubspaceBasis) else list(S)
    return _closure(t.field, t.dim, vectors, _ops_for_kind(t, kind, product))


# ---------------------------------------------------------------------------
# nilradical and radicals of ideals


def _require_unit(product: SymProductTensor, unit: Sequence) -> tuple:
    unit = tuple(unit)
    for k in range(product.dim):
        e = unit_vector(product.field, product.dim, k)
        if product.eval(unit, e) != e:
            raise ValueError("the supplied vector is not a unit for the product")
    return unit


def element_power(product: SymProductTensor, unit: Sequence, v: Sequence, k: int) -> tuple:
    """v^k under the product, by binary powering (k >= 0; v^0 = unit)."""
    if k < 0:
        raise ValueError("negative power")
    result = tuple(unit)
    base = tuple(v)
    while k:
        if k & 1:
            result = product.eval(result, base)
        base = product.eval(base, base)
        k >>= 1
    return result


def nilradical(product: SymProductTensor, unit: Sequence) -> SubspaceBasis:
    """The subspace of nilpotent elements of a commutative associative
    unital algebra.

    Over the rationals this is the radical of the trace form
    (a,b) -> trace(L_ab).  Over F_p the p-th-power map is additive and
    F_p-linear, and an element is nilpotent iff enough iterates of it
    vanish, so the nilpotent set is the kernel of an iterated power map;
    both routes compute the same saturated set {v : v^dim = 0}.
    """
    field = product.field
    d = product.dim
    unit = _require_unit(product, unit)
    if isinstance(field, RationalField):
        taus = [sum((product.entry(k, j)[j] for j in range(d)), field.zero) for k in range(d)]
        gram = [
            [
                sum((product.entry(i, j)[k] * taus[k] for k in range(d)), field.zero)
                for j in range(d)
            ]
            for i in range(d)
        ]
        nil = kernel(Matrix(field, gram))
    else:
        cols = [element_power(product, unit, unit_vector(field, d, k), field.p) for k in range(d)]
        frob = Matrix(field, [[cols[k][i] for k in range(d)] for i in range(d)])
        steps, size = 1, field.p
        while size < d:
            size *= field.p
            steps += 1
        power = frob
        for _ in range(steps - 1):
            power = power.mul(frob)
        nil = kernel(power)
    if not is_associative_ideal(product, nil):
        raise AssertionError("nilpotent set is not an ideal; the product is not associative")
    return nil


@dataclass(frozen=True)
class QuotientMap:
    """Projection data for a quotient by a subspace: representatives are
    the standard basis vectors at the non-pivot coordinates."""

    ideal: SubspaceBasis
    rep_indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.rep_indices)

    def project(self, vec: Sequence) -> tuple:
        reduced = self.ideal.reduce(vec)
        return tuple(reduced[j] for j in self.rep_indices)

    def lift(self, qvec: Sequence) -> tuple:
        field = self.ideal.field
        out = list(zero_vector(field, self.ideal.ambient_dim))
        for j, c in zip(self.rep_indices, qvec):
            out[j] = c
        return tuple(out)


def _quotient_map(I: SubspaceBasis) -> QuotientMap:
    reps = tuple(j for j in range(I.ambient_dim) if j not in I.pivots)
    return QuotientMap(I, reps)


def radical_of_ideal(product: SymProductTensor, unit: Sequence, I: SubspaceBasis) -> SubspaceBasis:
    """Elements with some power inside I: the preimage of the nilradical
    of the quotient algebra."""
    field = product.field
    d = product.dim
    unit = _require_unit(product, unit)
    if not is_associative_ideal(product, I):
        raise ValueError("the subspace is not an associative ideal")
    if I.is_full():
        return I
    qm = _quotient_map(I)
    table: dict[tuple[int, int], tuple] = {}
    for a in range(qm.dim):
        ea = unit_vector(field, d, qm.rep_indices[a])
        for b in range(a, qm.dim):
            value = qm.project(product.eval(ea, unit_vector(field, d, qm.rep_indices[b])))
            if any(c != field.zero for c in value):
                table[(a, b)] = value
    qprod = SymProductTensor(qm.dim, field, table)
    qnil = nilradical(qprod, qm.project(unit))
    vectors = list(I.rows) + [qm.lift(row) for row in qnil.rows]
    radical = span(field, d, vectors)
    if not is_associative_ideal(product, radical):
        raise AssertionError("radical failed to close under multiplication")
    return radical


# ---------------------------------------------------------------------------
# quotients and restrictions


def quotient_algebra(alg: AlgebraLike, I: SubspaceBasis) -> tuple[NLieAlgebra, QuotientMap]:
    """Bracket on coset representatives at the non-pivot coordinates of I.

    I must be an ideal; on top of that guarantee the construction
    re-expands a sample of representatives shifted by ideal elements and
    confirms the projected values agree.
    """
    t = _bracket_of(alg)
    if I.ambient_dim != t.dim:
        raise ValueError("ideal lives in the wrong ambient dimension")
    if not is_nlie_ideal(t, I):
        raise ValueError("the subspace is not an ideal: some bracket image escapes it")
    qm = _quotient_map(I)
    field = t.field
    combos = list(itertools.combinations(range(qm.dim), t.arity))
    table: dict[tuple[int, ...], tuple] = {}
    for combo in combos:
        raw = tuple(qm.rep_indices[c] for c in combo)
        value = qm.project(t.component(raw))
        if any(c != field.zero for c in value):
            table[combo] = value
    qt = SkewBracketTensor(qm.dim, t.arity, field, table)
    spot = combos if len(combos) * max(I.dim, 1) <= 2000 else combos[:50]
    for combo in spot:
        raw = tuple(qm.rep_indices[c] for c in combo)
        expected = qm.project(t.component(raw))
        rest = [unit_vector(field, t.dim, r) for r in raw[1:]]
        for shift in I.rows:
            first = vec_add(field, unit_vector(field, t.dim, raw[0]), shift)
            if qm.project(t.eval([first, *rest])) != expected:
                raise AssertionError("quotient bracket is not well defined on cosets")
    return NLieAlgebra(qt), qm


def subalgebra_on(alg: AlgebraLike, S: SubspaceBasis) -> NLieAlgebra:
    """The bracket re-expressed in the coordinates of S; S must be closed
    under it."""
    t = _bracket_of(alg)
    if S.ambient_dim != t.dim:
        raise ValueError("subspace lives in the wrong ambient dimension")
    field = t.field
    k = S.dim
    table: dict[tuple[int, ...], tuple] = {}
    for combo in itertools.combinations(range(k), t.arity):
        value = t.eval([S.rows[c] for c in combo])
        coords = S.coordinates_of(value)
        if coords is None:
            raise ValueError("the subspace is not closed under the bracket")
        if any(c != field.zero for c in coords):
            table[combo] = coords
    return NLieAlgebra(SkewBracketTensor(k, t.arity, field, table))


# ---------------------------------------------------------------------------
# simplicity


@dataclass(frozen=True)
class SimplicityVerdict:
    status: str  # "simple" | "not_simple" | "unknown"
    kind: IdealKind
    certificate: dict | None = None
    witness: SubspaceBasis | None = None
    reason: str | None = None
    seed: int = 0


def _projective_coeffs(p: int, k: int):
    """Representatives of projective classes: first nonzero coordinate 1."""
    for lead in range(k):
        for tail in itertools.product(range(p), repeat=k - 1 - lead):
            yield (0,) * lead + (1,) + tail


def _projective_count(p: int, k: int) -> int:
    return (p**k - 1) // (p - 1)


def _exhaustive_projective(
    t: SkewBracketTensor, kind: IdealKind, ops: list[Matrix], seed: int
) -> SimplicityVerdict:
    p, d = t.field.p, t.dim
    tensor = _ops_tensor(ops)
    for point in _projective_coeffs(p, d):
        ech = _fp_closure(p, d, np.array([point], dtype=np.int64), tensor)
        if ech.rank < d:
            return SimplicityVerdict(
                "not_simple",
                kind,
                None,
                ech.to_subspace(t.field),
                "a projective point generates a proper invariant subspace",
                seed,
            )
    certificate = {
        "method": "ExhaustiveProjective",
        "p": p,
        "dim": d,
        "points": _projective_count(p, d),
    }
    return SimplicityVerdict("simple", kind, certificate, None, None, seed)


def _fp_nullspace(field: PrimeField, m: np.ndarray) -> SubspaceBasis:
    return kernel(Matrix(field, [[int(c) for c in row] for row in m]))


def _assert_invariant(S: SubspaceBasis, ops: list[Matrix]) -> None:
    for m in ops:
        for row in S.rows:
            if not S.contains(m.matvec(row)):
                raise AssertionError("claimed invariant subspace is not invariant")


def _kernel_seeds(
    t: SkewBracketTensor,
    kind: IdealKind,
    labeled: list[tuple[dict, Matrix]],
    limit: int,
    seed: int,
) -> SimplicityVerdict:
    """Singular-operator seed certificate, the full-enumeration escape
    hatch.

    Take any singular operator T from the invariant-operation set (or a
    random 2-term combination).  A proper invariant subspace U either
    meets ker T (T restricted to U is singular), or satisfies T(U) = U and
    then ker T^t annihilates a complement, i.e. lies inside the
    annihilator of U, which is invariant under the transposed operations.
    So closing every projective kernel point on the primal side and every
    transposed-kernel point on the dual side finds a proper invariant
    subspace whenever one exists; if nothing traps, the algebra is simple.
    """
    field = t.field
    p, d = field.p, t.dim
    ops = [m for _, m in labeled]
    tensor = _ops_tensor(ops)

    def nullity(arr: np.ndarray) -> int:
        ech = _FpEchelon(p, d)
        ech.add_batch(arr)
        return d - ech.rank

    candidates = sorted(
        (n, i)
        for i, m in enumerate(tensor)
        if 1 <= (n := nullity(m.copy())) < d
    )
    chosen: np.ndarray | None = None
    label: dict | None = None
    chosen_nullity = 0
    for n, i in candidates:
        if 2 * _projective_count(p, n) <= limit:
            chosen, label, chosen_nullity = tensor[i], dict(labeled[i][0]), n
            break
    if chosen is None and len(ops) >= 2:
        rng = random.Random(seed)
        for _ in range(_COMBO_TRIALS):
            i, j = rng.sample(range(len(ops)), 2)
            c = rng.randrange(1, p) if p > 2 else 1
            combo = np.mod(tensor[i] + c * tensor[j], p)
            n = nullity(combo.copy())
            if 1 <= n < d and 2 * _projective_count(p, n) <= limit:
                if chosen is None or n < chosen_nullity:
                    chosen, chosen_nullity = combo, n
                    label = {
                        "op": "combination",
                        "first": dict(labeled[i][0]),
                        "second": dict(labeled[j][0]),
                        "coefficient": c,
                    }
    if chosen is None:
        raise GuardExceeded(
            "no invariant operation has a kernel small enough to enumerate "
            f"within {limit} closures; raise the enumeration limit"
        )
    ker = _fp_nullspace(field, chosen)
    ker_rows = np.array([[int(c) for c in row] for row in ker.rows], dtype=np.int64)
    for coeffs in _projective_coeffs(p, ker.dim):
        point = np.mod(np.array(coeffs, dtype=np.int64) @ ker_rows, p)
        ech = _fp_closure(p, d, point[None, :], tensor)
        if ech.rank < d:
            witness = ech.to_subspace(field)
            return SimplicityVerdict(
                "not_simple",
                kind,
                None,
                witness,
                "a kernel point of a singular invariant operation generates a proper subspace",
                seed,
            )
    tensor_t = tensor.transpose(0, 2, 1).copy()
    ker_t = _fp_nullspace(field, chosen.T)
    ker_t_rows = np.array([[int(c) for c in row] for row in ker_t.rows], dtype=np.int64)
    for coeffs in _projective_coeffs(p, ker_t.dim):
        point = np.mod(np.array(coeffs, dtype=np.int64) @ ker_t_rows, p)
        ech = _fp_closure(p, d, point[None, :], tensor_t)
        if ech.rank < d:
            dual = ech.to_subspace(field)
            witness = kernel(Matrix(field, [list(row) for row in dual.rows]))
            _assert_invariant(witness, ops)
            return SimplicityVerdict(
                "not_simple",
                kind,
                None,
                witness,
                "the annihilator of a transposed-operation closure is a proper invariant subspace",
                seed,
            )
    certificate = {
        "method": "KernelSeeds",
        "p": p,
        "dim": d,
        "operator": label,
        "nullity": chosen_nullity,
        "points_per_side": _projective_count(p, chosen_nullity),
    }
    return SimplicityVerdict("simple", kind, certificate, None, None, seed)


def _zero_bracket_verdict(
    t: SkewBracketTensor, kind: IdealKind, product: SymProductTensor | None, seed: int
) -> SimplicityVerdict:
    d = t.dim
    reason = "the bracket is zero; abelian algebras are not simple by convention"
    ops = _ops_for_kind(t, kind, product)
    witness = None
    if not ops:
        if d >= 2:
            witness = span(t.field, d, [unit_vector(t.field, d, 0)])
    else:
        for k in range(d):
            closure = _closure(t.field, d, [unit_vector(t.field, d, k)], ops)
            if 0 < closure.dim < d:
                witness = closure
                break
    if witness is None:
        reason += "; no proper nonzero invariant subspace exists to exhibit"
    return SimplicityVerdict("not_simple", kind, None, witness, reason, seed)


def _reduce_mod_p(
    t: SkewBracketTensor, product: SymProductTensor | None, p: int
) -> tuple[SkewBracketTensor, SymProductTensor | None, int] | None:
    """Clear bracket denominators by their lcm (a nonzero scale does not
    change the invariant-subspace lattice) and reduce mod p; the product
    must be p-integral as it stands.  None when p is inadmissible."""
    scale = 1
    for _, vec in t.sorted_items():
        for c in vec:
            scale = scale * Fraction(c).denominator // _gcd(scale, Fraction(c).denominator)
    if scale % p == 0:
        return None
    field = PrimeField(p)
    table: dict[tuple[int, ...], tuple] = {}
    for key, vec in t.sorted_items():
        row = tuple(int(Fraction(c) * scale) % p for c in vec)
        if any(row):
            table[key] = row
    if not table:
        return None
    reduced_t = SkewBracketTensor(t.dim, t.arity, field, table)
    reduced_product = None
    if product is not None:
        ptable: dict[tuple[int, int], tuple] = {}
        for key, vec in product.sorted_items():
            row = []
            for c in vec:
                frac = Fraction(c)
                if frac.denominator % p == 0:
                    return None
                row.append(frac.numerator % p * pow(frac.denominator % p, p - 2, p) % p)
            if any(row):
                ptable[key] = tuple(row)
        reduced_product = SymProductTensor(product.dim, field, ptable)
    return reduced_t, reduced_product, scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _is_simple_fp(
    t: SkewBracketTensor,
    kind: IdealKind,
    product: SymProductTensor | None,
    limit: int,
    seed: int,
    method: str,
) -> SimplicityVerdict:
    labeled = _labeled_ops(t, kind, product)
    ops = [m for _, m in labeled]
    points = _projective_count(t.field.p, t.dim)
    if method == "auto":
        method = "exhaustive" if points <= limit else "kernel_seeds"
    if method == "exhaustive":
        if points > limit:
            raise GuardExceeded(
                f"exhaustive projective enumeration needs {points} closures > limit {limit}"
            )
        return _exhaustive_projective(t, kind, ops, seed)
    if method == "kernel_seeds":
        return _kernel_seeds(t, kind, labeled, limit, seed)
    raise ValueError(f"method {method!r} does not apply over a prime field")


def is_simple(
    alg: AlgebraLike,
    kind: IdealKind | None = None,
    *,
    product: SymProductTensor | None = None,
    mod_p: int | None = None,
    max_enum: int | None = None,
    seed: int = 0,
    method: str = "auto",
) -> SimplicityVerdict:
    """Certified simplicity verdict.

    Over F_p: exhaustive projective closure when the point count fits the
    enumeration limit, singular-operator kernel seeding otherwise; both
    decide.  Over Q: proper ideals are searched by closing basis and
    seeded random vectors (sound for not-simple), and simplicity is
    certified through a mod-p reduction (sound direction only), so
    "unknown" is a possible honest outcome.  A zero bracket is never
    simple, by convention.
    """
    t = _bracket_of(alg)
    product = _product_of(alg, product)
    if kind is None:
        kind = IdealKind.POISSON if product is not None else IdealKind.NLIE
    if kind is not IdealKind.NLIE and product is None:
        raise ValueError(f"{kind.value} simplicity requires the product")
    limit = effective_limit(max_enum, DEFAULT_MAX_ENUM)
    if t.is_zero():
        return _zero_bracket_verdict(t, kind, product, seed)
    if isinstance(t.field, PrimeField):
        if method == "mod_p":
            raise ValueError("mod-p reduction applies to rational algebras only")
        return _is_simple_fp(t, kind, product, limit, seed, method)
    if method in ("exhaustive", "kernel_seeds"):
        raise ValueError(f"method {method!r} needs a prime field")
    ops = _ops_for_kind(t, kind, product)
    rng = random.Random(seed)
    probes = [unit_vector(t.field, t.dim, k) for k in range(t.dim)]
    for _ in range(8):
        v = tuple(Fraction(rng.randint(-2, 2)) for _ in range(t.dim))
        if any(v):
            probes.append(v)
    for v in probes:
        closure = _closure(t.field, t.dim, [v], ops)
        if 0 < closure.dim < t.dim:
            return SimplicityVerdict(
                "not_simple",
                kind,
                None,
                closure,
                "a probed vector generates a proper invariant subspace",
                seed,
            )
    primes = (mod_p,) if mod_p is not None else DEFAULT_REDUCTION_PRIMES
    attempts = []
    for p in primes:
        reduced = _reduce_mod_p(t, product if kind is not IdealKind.NLIE else None, p)
        if reduced is None:
            attempts.append(f"p={p}: inadmissible reduction")
            continue
        reduced_t, reduced_product, scale = reduced
        try:
            inner = _is_simple_fp(reduced_t, kind, reduced_product, limit, seed, "auto")
        except GuardExceeded:
            attempts.append(f"p={p}: enumeration limit hit")
            continue
        if inner.status == "simple":
            certificate = {
                "method": "ModPReduction",
                "p": p,
                "scale": str(scale),
                "inner": inner.certificate,
            }
            return SimplicityVerdict("simple", kind, certificate, None, None, seed)
        attempts.append(f"p={p}: reduction is {inner.status}")
    return SimplicityVerdict(
        "unknown",
        kind,
        None,
        None,
        "no admissible prime certified simplicity (" + "; ".join(attempts) + ")",
        seed,
    )


def verify_simplicity_certificate(
    alg: AlgebraLike,
    verdict: SimplicityVerdict,
    *,
    product: SymProductTensor | None = None,
    max_enum: int | None = None,
) -> bool:
    """Replay a verdict: witnesses are re-checked for invariance, simple
    certificates re-execute their stated method from scratch."""
    t = _bracket_of(alg)
    product = _product_of(alg, product)
    kind = verdict.kind
    limit = effective_limit(max_enum, DEFAULT_MAX_ENUM)
    if verdict.status == "unknown":
        return True
    if verdict.status == "not_simple":
        witness = verdict.witness
        if witness is None:
            return t.is_zero() or t.dim == 0
        if not 0 < witness.dim < t.dim:
            return False
        ops = _ops_for_kind(t, kind, product)
        return all(witness.contains(m.matvec(row)) for m in ops for row in witness.rows)
    certificate = verdict.certificate or {}
    method = certificate.get("method")
    if method == "ExhaustiveProjective":
        if not isinstance(t.field, PrimeField):
            return False
        if t.field.p != certificate.get("p") or t.dim != certificate.get("dim"):
            return False
        redo = _is_simple_fp(t, kind, product, limit, verdict.seed, "exhaustive")
        return redo.status == "simple"
    if method == "KernelSeeds":
        if not isinstance(t.field, PrimeField) or t.field.p != certificate.get("p"):
            return False
        redo = _is_simple_fp(t, kind, product, limit, verdict.seed, "kernel_seeds")
        return redo.status == "simple"
    if method == "ModPReduction":
        if not isinstance(t.field, RationalField):
            return False
        reduced = _reduce_mod_p(
            t, product if kind is not IdealKind.NLIE else None, certificate["p"]
        )
        if reduced is None:
            return False
        reduced_t, reduced_product, scale = reduced
        if str(scale) != certificate.get("scale"):
            return False
        inner = _is_simple_fp(reduced_t, kind, reduced_product, limit, verdict.seed, "auto")
        return inner.status == "simple"
    return False


def brute_force_ideals(
    alg: AlgebraLike,
    kind: IdealKind = IdealKind.NLIE,
    product: SymProductTensor | None = None,
    max_subspaces: int | None = None,
) -> list[SubspaceBasis]:
    """Every subspace closed under the kind's operations, by enumerating
    all echelon normal forms.  Test oracle; finite fields only."""
    t = _bracket_of(alg)
    product = _product_of(alg, product)
    field = t.field
    if not isinstance(field, PrimeField):
        raise ValueError("subspace enumeration requires a finite field")
    p, d = field.p, t.dim
    limit = effective_limit(max_subspaces, DEFAULT_MAX_SUBSPACES)
    total = sum(_gaussian_binomial(d, r, p) for r in range(d + 1))
    if total > limit:
        raise GuardExceeded(f"{total} subspaces exceed the limit {limit}")
    ops = _ops_for_kind(t, kind, product)
    found = []
    for r in range(d + 1):
        for pivots in itertools.combinations(range(d), r):
            free = [
                (i, j)
                for i in range(r)
                for j in range(pivots[i] + 1, d)
                if j not in pivots
            ]
            for assignment in itertools.product(range(p), repeat=len(free)):
                grid = [[0] * d for _ in range(r)]
                for i in range(r):
                    grid[i][pivots[i]] = 1
                for (i, j), c in zip(free, assignment):
                    grid[i][j] = c
                S = SubspaceBasis._trusted(
                    field, d, [tuple(row) for row in grid], list(pivots)
                )
                if all(S.contains(m.matvec(row)) for m in ops for row in S.rows):
                    found.append(S)
    return found


def _gaussian_binomial(d: int, r: int, p: int) -> int:
    num = den = 1
    for i in range(r):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


# ---------------------------------------------------------------------------
# statement probes


PROBE_IDS = ("L1", "L2", "L3", "L5", "L6_0", "L6", "L7", "L8")

_PROBE_TEXT = {
    "L1": (
        "the algebra is simple",
        "there are no nonzero nilpotent elements (the nilradical is zero)",
    ),
    "L2": (
        "U is an ideal of the derived subalgebra; the algebra is simple",
        "brackets of the associative ideal generated by the third derived term "
        "of U against arbitrary tuples land inside U",
    ),
    "L3": (
        "I is a nonzero associative ideal stable under bracketing with the "
        "derived subalgebra; the algebra is simple",
        "I is the whole algebra",
    ),
    "L5": (
        "the algebra is simple",
        "every nilpotent adjoint operator from a basis tuple is zero",
    ),
    "L6_0": (
        "U is an abelian ideal of the derived subalgebra; the algebra is simple",
        "brackets with one free slot, derived-subalgebra slots, and a U slot vanish",
    ),
    "L6": (
        "U is an abelian ideal of the derived subalgebra; the algebra is simple",
        "brackets of arbitrary tuples against U vanish",
    ),
    "L7": (
        "U is an ideal of the derived subalgebra whose third derived term is "
        "zero; the algebra is simple",
        "brackets of arbitrary tuples against the first derived term of U vanish",
    ),
    "L8": (
        "U is an ideal of the derived subalgebra whose third derived term is "
        "zero; the algebra is simple",
        "brackets of arbitrary tuples against U vanish",
    ),
}


@dataclass(frozen=True)
class ProbeReport:
    probe: str
    hypothesis: str
    conclusion: str
    hypotheses_hold: bool
    hypothesis_notes: tuple[str, ...]
    conclusion_holds: bool
    witness: Witness | None
    flags: tuple[str, ...]
    seed: int


def _require_derived_ideal(t: SkewBracketTensor, U: SubspaceBasis, B: SubspaceBasis) -> None:
    for u in U.rows:
        for combo in itertools.combinations(B.rows, t.arity - 1):
            if not U.contains(t.eval([u, *combo])):
                raise ValueError(
                    "the subspace is not an ideal of the derived subalgebra: "
                    "a bracket image escapes it"
                )


def _is_abelian(t: SkewBracketTensor, U: SubspaceBasis) -> bool:
    return all(
        not any(c != t.field.zero for c in t.eval(list(combo)))
        for combo in itertools.combinations(U.rows, t.arity)
    )


def _vanishing_against(
    t: SkewBracketTensor, free_slots: int, mids: SubspaceBasis | None, last: SubspaceBasis
) -> Witness | None:
    """First nonzero value of bracket(e_i1..e_i<free>, mids..., u), scanning
    increasing index tuples, then increasing mid combinations, then rows of
    the last subspace.  None when everything vanishes."""
    field = t.field
    mid_count = t.arity - 1 - free_slots
    mid_rows = mids.rows if mids is not None else ()
    for idx in itertools.combinations(range(t.dim), free_slots):
        head = [unit_vector(field, t.dim, i) for i in idx]
        for mid_combo in itertools.combinations(mid_rows, mid_count):
            for u in last.rows:
                value = t.eval([*head, *mid_combo, u])
                if any(c != field.zero for c in value):
                    return Witness(
                        "nonzero_bracket",
                        {
                            "basis_indices": idx,
                            "middle": tuple(mid_combo),
                            "last": u,
                            "value": value,
                        },
                    )
    return None


def _contained_images(
    t: SkewBracketTensor, source: SubspaceBasis, target: SubspaceBasis
) -> Witness | None:
    """First bracket(source row, basis tuple) escaping the target."""
    for v in source.rows:
        for idx in itertools.combinations(range(t.dim), t.arity - 1):
            value = t.eval([v, *(unit_vector(t.field, t.dim, i) for i in idx)])
            if not target.contains(value):
                return Witness(
                    "escaping_bracket",
                    {"source": v, "basis_indices": idx, "value": value},
                )
    return None


def probe_lemma(
    alg: AlgebraLike,
    which: str,
    subspace: SubspaceBasis | None = None,
    *,
    seed: int = 0,
    max_enum: int | None = None,
) -> ProbeReport:
    """Evaluate one probe's hypothesis and conclusion independently and
    exactly; the report never asserts the implication itself.

    L1 and L5 take no subspace; L2/L6_0/L6/L7/L8 take a candidate U
    (validated as an ideal of the derived subalgebra); L3 takes a candidate
    I (validated as an associative ideal stable under bracketing with the
    derived subalgebra).
    """
    which = which.upper()
    if which not in PROBE_IDS:
        raise ValueError(f"unknown probe {which!r}; expected one of {PROBE_IDS}")
    t = _bracket_of(alg)
    product = _product_of(alg, None)
    unit = alg.unit if isinstance(alg, NLiePoissonAlgebra) else None
    field = t.field
    needs_subspace = which not in ("L1", "L5")
    if needs_subspace and subspace is None:
        raise ValueError(f"probe {which} requires a subspace")
    if not needs_subspace and subspace is not None:
        raise ValueError(f"probe {which} takes no subspace")
    if subspace is not None and subspace.ambient_dim != t.dim:
        raise ValueError("subspace lives in the wrong ambient dimension")
    if which in ("L1", "L2", "L3") and product is None:
        raise ValueError(f"probe {which} requires a product")

    kind = IdealKind.POISSON if product is not None else IdealKind.NLIE
    simplicity = is_simple(alg, kind, seed=seed, max_enum=max_enum)
    simple_ok = simplicity.status == "simple"
    notes = [f"simplicity ({kind.value}): {simplicity.status}"]
    hyp_ok = simple_ok
    flags = _char_flags(field)
    hypothesis, conclusion = _PROBE_TEXT[which]
    witness: Witness | None = None

    if which == "L1":
        nil = nilradical(product, unit)
        conclusion_ok = nil.is_zero()
        if not conclusion_ok:
            v = nil.rows[0]
            power, k = tuple(v), 1
            while any(c != field.zero for c in power):
                power = product.eval(power, v)
                k += 1
            witness = Witness("nilpotent_element", {"vector": v, "power": k})
    elif which == "L5":
        conclusion_ok = True
        for idx, m in ad_basis_operators(t):
            if m.is_zero():
                continue
            step, k = m, 1
            while k < t.dim and not step.is_zero():
                step = step.mul(m)
                k += 1
            if step.is_zero():
                conclusion_ok = False
                witness = Witness("nilpotent_ad", {"args": idx, "power": k})
                break
    else:
        B = derived_subspace(t)
        U = subspace
        if which == "L3":
            if not is_associative_ideal(product, U):
                raise ValueError("the subspace is not an associative ideal")
            for v in U.rows:
                for combo in itertools.combinations(B.rows, t.arity - 1):
                    if not U.contains(t.eval([v, *combo])):
                        raise ValueError(
                            "the subspace is not stable under bracketing with "
                            "the derived subalgebra"
                        )
            nonzero = not U.is_zero()
            notes.append(f"I nonzero: {nonzero}")
            hyp_ok = hyp_ok and nonzero
            conclusion_ok = U.is_full()
            if not conclusion_ok:
                witness = Witness("proper_ideal", {"dim": U.dim})
        else:
            _require_derived_ideal(t, U, B)
            if which in ("L6_0", "L6"):
                abelian = _is_abelian(t, U)
                notes.append(f"U abelian: {abelian}")
                hyp_ok = hyp_ok and abelian
                if which == "L6_0":
                    witness = _vanishing_against(t, 1, B, U)
                else:
                    witness = _vanishing_against(t, t.arity - 1, None, U)
                conclusion_ok = witness is None
            else:
                u1 = derived_subspace(t, U)
                u2 = derived_subspace(t, u1)
                u3 = derived_subspace(t, u2)
                if which == "L2":
                    generated = ideal_closure(
                        t, u3, IdealKind.ASSOCIATIVE, product=product
                    )
                    witness = _contained_images(t, generated, U)
                    conclusion_ok = witness is None
                else:
                    notes.append(f"U^(3) zero: {u3.is_zero()}")
                    hyp_ok = hyp_ok and u3.is_zero()
                    target = u1 if which == "L7" else U
                    witness = _vanishing_against(t, t.arity - 1, None, target)
                    conclusion_ok = witness is None

    return ProbeReport(
        which,
        hypothesis,
        conclusion,
        hyp_ok,
        tuple(notes),
        conclusion_ok,
        witness,
        flags,
        seed,
    )


# ---------------------------------------------------------------------------
# the derived-modulo-center pipeline


@dataclass(frozen=True)
class PipelineReport:
    axioms: dict[str, Verdict]
    poisson_simple: SimplicityVerdict
    dims: dict[str, int]
    quotient_jacobi: Verdict
    quotient_simple: SimplicityVerdict
    hypotheses_met: bool
    conclusion_holds: bool
    flags: tuple[str, ...]
    notes: tuple[str, ...]
    seed: int


def theorem1_pipeline(
    alg: NLiePoissonAlgebra, *, seed: int = 0, max_enum: int | None = None
) -> PipelineReport:
    """Full run: axiom checks, Poisson simplicity, derived subspace and
    center, then the quotient of the derived subalgebra by its central part
    with a fresh Jacobi check and simplicity verdict.

    The characteristic-0 hypothesis is reported as a flag, never silently
    assumed; a nonzero characteristic does not stop the computation.
    """
    if not isinstance(alg, NLiePoissonAlgebra):
        raise ValueError("the pipeline needs a product and unit alongside the bracket")
    t = alg.bracket
    field = t.field
    axioms = {
        "associative_commutative_unital": check_assoc_comm_unital(alg.product, alg.unit),
        "generalized_jacobi": check_generalized_jacobi(t),
        "leibniz": check_leibniz(alg),
    }
    poisson_simple = is_simple(alg, IdealKind.POISSON, seed=seed, max_enum=max_enum)
    derived = derived_subspace(t)
    Z = center(t)
    inter = derived.intersect(Z)
    dims = {
        "algebra": t.dim,
        "derived": derived.dim,
        "center": Z.dim,
        "intersection": inter.dim,
        "quotient": derived.dim - inter.dim,
    }
    assert dims["intersection"] <= min(dims["derived"], dims["center"])
    notes = [name for name, v in axioms.items() if not v.ok]
    notes = [f"axiom failed: {name}" for name in notes]
    if poisson_simple.status != "simple":
        notes.append(f"poisson simplicity: {poisson_simple.status}")
    if dims["quotient"] == 0:
        quotient_jacobi = Verdict(True, None, 0)
        quotient_simple = SimplicityVerdict(
            "not_simple",
            IdealKind.NLIE,
            None,
            None,
            "the quotient is zero-dimensional",
            seed,
        )
        notes.append("the derived subalgebra is central; the quotient collapses")
    else:
        sub = subalgebra_on(t, derived)
        inter_rows = [derived.coordinates_of(row) for row in inter.rows]
        inter_sub = span(field, derived.dim, inter_rows)
        quotient, _ = quotient_algebra(sub, inter_sub)
        quotient_jacobi = check_generalized_jacobi(quotient.bracket)
        quotient_simple = is_simple(
            quotient, IdealKind.NLIE, seed=seed, max_enum=max_enum
        )
    hypotheses_met = all(v.ok for v in axioms.values()) and poisson_simple.status == "simple"
    conclusion_holds = quotient_simple.status == "simple"
    return PipelineReport(
        axioms,
        poisson_simple,
        dims,
        quotient_jacobi,
        quotient_simple,
        hypotheses_met,
        conclusion_holds,
        _char_flags(field),
        tuple(notes),
        seed,
    )
