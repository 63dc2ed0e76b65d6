"""Sparse walk states and local (position-diagonal) operators.

A walk state lives on H_S (x) H_C: finitely many group elements each carrying
a coin vector. States are stored as a lexicographically sorted array of
encoded positions plus a matching matrix of coin amplitudes, which keeps the
evolution hot paths vectorized while tests and callers see plain elements.
"""

from __future__ import annotations

import warnings

import numpy as np

from .errors import EncodingError, NonUnitaryError, SpecError
from .groups import CayleyGroup
from .linalg import as_complex_matrix, require_unitary

# Amplitudes below this magnitude are dropped after inexact operations.
PRUNE_TOL = 1e-15


def _unique_rows(rows: np.ndarray):
    """Sorted unique rows plus the inverse index map."""
    if rows.shape[1] == 1:
        vals, inverse = np.unique(rows[:, 0], return_inverse=True)
        return vals[:, None], inverse.reshape(-1)
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


def _sorted_order(rows: np.ndarray) -> np.ndarray:
    # lexsort's last key is primary, so feed columns right-to-left
    return np.lexsort(rows.T[::-1])


class WalkState:
    """Finitely supported amplitude map on (group element, coin index) pairs."""

    __slots__ = ("group", "positions", "amps", "_elements", "_index")

    def __init__(self, group: CayleyGroup, positions: np.ndarray, amps: np.ndarray):
        self.group = group
        self.positions = positions
        self.amps = amps
        self._elements = None
        self._index = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_terms(cls, group: CayleyGroup, terms) -> "WalkState":
        """Build from {(x, c): amplitude}, ((x, c), amp) pairs, or
        (x, c, amp) triples."""
        if isinstance(terms, dict):
            terms = terms.items()
        by_pos: dict[tuple, np.ndarray] = {}
        dim = group.coin_dim
        for term in terms:
            if len(term) == 3:
                x, c, amp = term
            else:
                (x, c), amp = term
            c = int(c)
            if not 0 <= c < dim:
                raise EncodingError(f"coin index {c} out of range [0, {dim})")
            row = group.encode(x)
            vec = by_pos.setdefault(row, np.zeros(dim, dtype=complex))
            vec[c] += complex(amp)
        if not by_pos:
            return cls.zero(group)
        positions = np.array(sorted(by_pos), dtype=np.int64)
        amps = np.array([by_pos[tuple(r)] for r in positions], dtype=complex)
        return cls(group, positions, amps)

    @classmethod
    def localized(cls, group: CayleyGroup, x, coin_vector) -> "WalkState":
        vec = np.asarray(coin_vector, dtype=complex).reshape(-1)
        if vec.shape[0] != group.coin_dim:
            raise EncodingError(
                f"coin vector length {vec.shape[0]} != coin dimension {group.coin_dim}")
        positions = np.array([group.encode(x)], dtype=np.int64)
        return cls(group, positions, vec[None, :].copy())

    @classmethod
    def basis_state(cls, group: CayleyGroup, x, c: int) -> "WalkState":
        vec = np.zeros(group.coin_dim, dtype=complex)
        vec[int(c)] = 1.0
        return cls.localized(group, x, vec)

    @classmethod
    def zero(cls, group: CayleyGroup) -> "WalkState":
        return cls(group,
                   np.empty((0, group.width), dtype=np.int64),
                   np.empty((0, group.coin_dim), dtype=complex))

    # -- inspection -----------------------------------------------------------

    def elements(self) -> list:
        if self._elements is None:
            self._elements = [self.group.decode(row) for row in self.positions]
        return self._elements

    def _position_index(self) -> dict:
        if self._index is None:
            self._index = {tuple(row): i for i, row in enumerate(self.positions)}
        return self._index

    def amplitude(self, x, c: int) -> complex:
        c = int(c)
        if not 0 <= c < self.group.coin_dim:
            raise EncodingError(f"coin index {c} out of range")
        i = self._position_index().get(self.group.encode(x))
        return 0j if i is None else complex(self.amps[i, c])

    def terms(self) -> dict:
        out = {}
        for x, row in zip(self.elements(), self.amps):
            for c, amp in enumerate(row):
                if amp != 0:
                    out[(x, c)] = complex(amp)
        return out

    def items(self):
        return iter(self.terms().items())

    @property
    def n_positions(self) -> int:
        return self.positions.shape[0]

    def support(self) -> list:
        """Positions holding any amplitude above the pruning threshold."""
        mask = np.abs(self.amps).max(axis=1) > PRUNE_TOL
        return [x for x, keep in zip(self.elements(), mask) if keep]

    # -- algebra ----------------------------------------------------------------

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalized(self) -> "WalkState":
        n = self.norm()
        if n < 1e-12:
            raise SpecError("cannot normalize a (near-)zero state")
        return WalkState(self.group, self.positions, self.amps / n)

    def inner(self, other: "WalkState") -> complex:
        """Inner product, conjugate-linear in self."""
        if self.group != other.group:
            raise SpecError("inner product requires states on the same group")
        small, big = (self, other) if self.n_positions <= other.n_positions else (other, self)
        index = big._position_index()
        total = 0j
        for i, row in enumerate(small.positions):
            j = index.get(tuple(row))
            if j is not None:
                a = self.amps[i] if small is self else self.amps[j]
                b = other.amps[j] if big is other else other.amps[i]
                total += np.vdot(a, b)
        return complex(total)

    def scale(self, z) -> "WalkState":
        return WalkState(self.group, self.positions, self.amps * complex(z))

    def __add__(self, other: "WalkState") -> "WalkState":
        return _combine(self, other, 1.0)

    def __sub__(self, other: "WalkState") -> "WalkState":
        return _combine(self, other, -1.0)

    def distance(self, other: "WalkState") -> float:
        return (self - other).norm()

    # -- observables -------------------------------------------------------------

    def position_distribution(self, warn_unnormalized: bool = True) -> dict:
        total = float(np.sum(np.abs(self.amps) ** 2))
        if warn_unnormalized and abs(total - 1.0) > 1e-6:
            warnings.warn(f"state norm^2 = {total:.6f}; distribution computed anyway",
                          stacklevel=2)
        probs = np.sum(np.abs(self.amps) ** 2, axis=1)
        return {x: float(p) for x, p in zip(self.elements(), probs) if p > PRUNE_TOL}

    # -- serialization ------------------------------------------------------------

    def to_records(self) -> list[dict]:
        recs = []
        for x, row in zip(self.elements(), self.amps):
            for c, amp in enumerate(row):
                if amp != 0:
                    recs.append({"x": list(x) if isinstance(x, tuple) else x, "c": c,
                                 "re": float(amp.real), "im": float(amp.imag)})
        return recs

    @classmethod
    def from_records(cls, group: CayleyGroup, records) -> "WalkState":
        terms = {}
        for rec in records:
            x = rec["x"]
            if isinstance(x, list):
                x = tuple(x)
            key = (group.validate(x), int(rec["c"]))
            terms[key] = terms.get(key, 0j) + complex(float(rec.get("re", 0.0)),
                                                      float(rec.get("im", 0.0)))
        return cls.from_terms(group, terms)

    def __repr__(self):
        return (f"WalkState({self.group.kind}, positions={self.n_positions}, "
                f"norm={self.norm():.6f})")


def _clean(group: CayleyGroup, positions: np.ndarray, amps: np.ndarray,
           prune: float = PRUNE_TOL) -> WalkState:
    """Zero out sub-threshold amplitudes and drop empty rows."""
    if prune > 0.0 and amps.size:
        amps = np.where(np.abs(amps) < prune, 0.0, amps)
    keep = np.abs(amps).max(axis=1) > 0 if amps.size else np.zeros(0, dtype=bool)
    if not keep.all():
        positions, amps = positions[keep], amps[keep]
    return WalkState(group, positions, amps)


def _combine(a: WalkState, b: WalkState, sign: float) -> WalkState:
    if a.group != b.group:
        raise SpecError("cannot combine states on different groups")
    positions = np.concatenate([a.positions, b.positions], axis=0)
    amps = np.concatenate([a.amps, sign * b.amps], axis=0)
    uniq, inverse = _unique_rows(positions)
    out = np.zeros((uniq.shape[0], amps.shape[1]), dtype=complex)
    np.add.at(out, inverse, amps)
    return WalkState(a.group, uniq, out)


class LocalUnitary:
    """Position-controlled unitary: a coin-space unitary for every element.

    Three storage kinds: a single shared matrix ("uniform"), a rule producing
    a diagonal phase vector per position ("diagonal"), or a general rule
    producing a matrix per position ("rule").
    """

    __slots__ = ("group", "_kind", "_matrix", "_rule", "validate_components")

    def __init__(self, group: CayleyGroup, kind: str, matrix=None, rule=None,
                 validate_components: bool = True):
        self.group = group
        self._kind = kind
        self._matrix = matrix
        self._rule = rule
        self.validate_components = validate_components

    @classmethod
    def uniform(cls, group: CayleyGroup, matrix, validate: bool = True) -> "LocalUnitary":
        m = as_complex_matrix(matrix, group.coin_dim)
        if validate:
            require_unitary(m, what="local unitary component")
        return cls(group, "uniform", matrix=m, validate_components=False)

    @classmethod
    def identity(cls, group: CayleyGroup) -> "LocalUnitary":
        return cls.uniform(group, np.eye(group.coin_dim, dtype=complex), validate=False)

    @classmethod
    def from_rule(cls, group: CayleyGroup, rule, validate: bool = True) -> "LocalUnitary":
        return cls(group, "rule", rule=rule, validate_components=validate)

    @classmethod
    def diagonal(cls, group: CayleyGroup, diag_rule, validate: bool = True) -> "LocalUnitary":
        """diag_rule(x) returns the length-dim vector of diagonal phases."""
        return cls(group, "diagonal", rule=diag_rule, validate_components=validate)

    @property
    def uniform_flag(self) -> bool:
        return self._kind == "uniform"

    @property
    def diagonal_flag(self) -> bool:
        return self._kind == "diagonal"

    def diag_at(self, x) -> np.ndarray:
        if self._kind != "diagonal":
            raise SpecError("diag_at is only defined for diagonal local unitaries")
        vec = np.asarray(self._rule(x), dtype=complex).reshape(-1)
        if vec.shape[0] != self.group.coin_dim:
            raise NonUnitaryError("diagonal rule returned a vector of wrong length")
        if self.validate_components and np.abs(np.abs(vec) - 1.0).max() > 1e-12:
            raise NonUnitaryError(f"diagonal entries at {x!r} are not complex units")
        return vec

    def component(self, x) -> np.ndarray:
        if self._kind == "uniform":
            return self._matrix
        if self._kind == "diagonal":
            return np.diag(self.diag_at(x))
        m = as_complex_matrix(self._rule(x), self.group.coin_dim)
        if self.validate_components:
            require_unitary(m, what=f"local unitary component at {x!r}")
        return m

    def apply(self, state: WalkState) -> WalkState:
        if state.group != self.group:
            raise SpecError("operator and state live on different groups")
        if self._kind == "uniform":
            amps = state.amps @ self._matrix.T
        elif self._kind == "diagonal":
            phases = np.array([self.diag_at(x) for x in state.elements()], dtype=complex)
            amps = state.amps * phases if state.n_positions else state.amps.copy()
        else:
            amps = np.empty_like(state.amps)
            for i, x in enumerate(state.elements()):
                amps[i] = self.component(x) @ state.amps[i]
        return _clean(self.group, state.positions, amps)


def apply_local(op: LocalUnitary, state: WalkState) -> WalkState:
    """Apply a local operation; position distributions are preserved."""
    return op.apply(state)


def inner_product(a: WalkState, b: WalkState) -> complex:
    return a.inner(b)


def position_distribution(state: WalkState) -> dict:
    return state.position_distribution()
