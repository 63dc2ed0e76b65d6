"""Walk symmetries: dressed evolutions that reproduce a walk step for step.

A symmetry sends (coin, initial state) to (transformed coin, transformed
state) such that the transformed evolution equals the original one dressed by
a local unitary at every step. The dressing at step 0 is an arbitrary local
unitary U0; at steps n >= 1 it is diagonal in the position/coin basis and is
stored as a phase field u(n, x, c).

Three constructor families restrict the phase field so that the transform
preserves space homogeneity, time homogeneity, or both. Their closed forms
hang on the decomposition x = xt * c0^k (xt in the zero-net-exponent
subgroup, k the coset index) and a window sequence eta evaluated at n - k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FamilyPreconditionError, NonUnitaryError, SpecError
from .groups import CayleyGroup
from .linalg import as_complex_matrix, require_unit, require_unitary
from .states import LocalUnitary, WalkState
from .walk import QuantumCoin

UNIT_TOL = 1e-12


def _as_unit(value, what: str = "phase") -> complex:
    u = complex(value)
    if abs(abs(u) - 1.0) > UNIT_TOL:
        raise NonUnitaryError(f"{what} has modulus {abs(u):.6f}, expected 1")
    return u


class PhaseField:
    """Diagonal dressing phases u(n, x, c) for steps n >= 1.

    Step 0 is excluded on purpose: the step-0 dressing is a general local
    unitary and lives in SymmetryTransform.u0.
    """

    __slots__ = ("group", "_rule")

    def __init__(self, group: CayleyGroup, rule):
        self.group = group
        self._rule = rule

    def at(self, n: int, x, c: int) -> complex:
        n = int(n)
        if n < 1:
            raise SpecError(
                "phase field is defined for n >= 1; the step-0 dressing is U0")
        return _as_unit(self._rule(n, x, int(c)), f"u({n}, {x!r}, {c})")

    @classmethod
    def ones(cls, group: CayleyGroup) -> "PhaseField":
        return cls(group, lambda n, x, c: 1.0 + 0j)

    @classmethod
    def from_table(cls, group: CayleyGroup, table: dict,
                   default: complex = 1.0 + 0j) -> "PhaseField":
        """Tabulated phases keyed by (n, x, c); `default` fills the rest."""
        default = _as_unit(default, "default phase")
        norm_table = {}
        for (n, x, c), u in table.items():
            key = (int(n), group.validate(x), int(c))
            if key[0] < 1:
                raise SpecError("phase tables start at n = 1")
            norm_table[key] = _as_unit(u, f"table phase at {key}")

        def rule(n, x, c):
            return norm_table.get((n, group.validate(x), c), default)

        return cls(group, rule)


@dataclass(frozen=True, eq=False)
class SymmetryTransform:
    """A step-0 local unitary plus a diagonal phase field for later steps."""

    group: CayleyGroup
    u0: LocalUnitary
    phases: PhaseField
    family: str = "general"
    params: dict = field(default_factory=dict)


class UnitaryCharacter:
    """Multiplicative map from group elements to complex units.

    domain is "full_group" or "causal_subgroup"; the latter promises the rule
    is only ever evaluated on zero-net-exponent elements.
    """

    __slots__ = ("group", "domain", "_rule", "descriptor")

    def __init__(self, group: CayleyGroup, domain: str, rule, descriptor=None,
                 validate: bool = True):
        if domain not in ("full_group", "causal_subgroup"):
            raise SpecError(f"unknown character domain {domain!r}")
        self.group = group
        self.domain = domain
        self._rule = rule
        self.descriptor = descriptor
        if validate:
            self._check_multiplicative()

    def __call__(self, x) -> complex:
        return _as_unit(self._rule(x), f"character value at {x!r}")

    def _domain_elements(self, rng, count: int) -> list:
        xs = self.group.random_elements(rng, count)
        if self.domain == "causal_subgroup":
            xs = [self.group.decompose(x)[0] for x in xs]
        return xs

    def _check_multiplicative(self) -> None:
        group = self.group
        if group.is_finite and group.order <= 128:
            pool = list(group.elements())
            if self.domain == "causal_subgroup":
                pool = [x for x in pool if group.coset_index(x) == 0]
            pairs = [(a, b) for a in pool for b in pool]
        else:
            rng = np.random.default_rng(20240917)
            a_list = self._domain_elements(rng, 1000)
            b_list = self._domain_elements(rng, 1000)
            pairs = list(zip(a_list, b_list))
        for a, b in pairs:
            lhs = self(group.mul(a, b))
            if abs(lhs - self(a) * self(b)) > UNIT_TOL:
                raise SpecError(
                    f"character is not multiplicative at ({a!r}, {b!r})")


def trivial_character(group: CayleyGroup, domain: str = "full_group") -> UnitaryCharacter:
    return UnitaryCharacter(group, domain, lambda x: 1.0 + 0j,
                            descriptor={"kind": "trivial"}, validate=False)


def exp_character(group: CayleyGroup, phi, domain: str = "full_group",
                  validate: bool = True) -> UnitaryCharacter:
    """Character exp(i * phi . x) on integer-vector-like groups.

    phi is a scalar for line/cyclic and a length-d vector for lattice and
    hypercube groups. Periodic groups require phi commensurate with the
    period; incommensurate values are rejected.
    """
    kind = group.kind
    if kind in ("line", "cyclic"):
        phi = float(phi)
        if kind == "cyclic" and abs(np.exp(1j * phi * group.n) - 1.0) > 1e-9:
            raise SpecError(
                f"exp character needs phi * {group.n} to be a multiple of 2*pi")
        rule = lambda x: np.exp(1j * phi * x)
        descriptor = {"kind": "exp_linear", "phi": phi}
    elif kind in ("lattice", "hypercube"):
        vec = np.asarray(phi, dtype=float).reshape(-1)
        if vec.shape[0] != group.d:
            raise SpecError(f"phi must have length {group.d}")
        period = 2 if kind == "hypercube" else group.period
        if period is not None:
            if np.abs(np.exp(1j * vec * period) - 1.0).max() > 1e-9:
                raise SpecError(
                    f"exp character needs each phi component commensurate with period {period}")
        rule = lambda x: np.exp(1j * float(np.dot(vec, x)))
        descriptor = {"kind": "exp_linear", "phi": [float(v) for v in vec]}
    else:
        raise SpecError(f"exp character not defined for group kind {kind!r}")
    return UnitaryCharacter(group, domain, rule, descriptor, validate=validate)


def sign_character(group: CayleyGroup, mask, domain: str = "full_group",
                   validate: bool = True) -> UnitaryCharacter:
    """Character (-1)^(mask . x); mask entries are 0 or 1."""
    kind = group.kind
    if kind in ("line", "cyclic"):
        m = int(mask)
        if kind == "cyclic" and (m * group.n) % 2:
            raise SpecError("sign character requires an even period")
        rule = lambda x: complex((-1) ** ((m * x) % 2))
        descriptor = {"kind": "sign", "mask": m}
    elif kind in ("lattice", "hypercube"):
        vec = tuple(int(v) % 2 for v in mask)
        if len(vec) != group.d:
            raise SpecError(f"mask must have length {group.d}")
        if kind == "lattice" and group.period is not None and group.period % 2:
            if any(vec):
                raise SpecError("sign character requires an even period")
        rule = lambda x: complex((-1) ** (sum(m * v for m, v in zip(vec, x)) % 2))
        descriptor = {"kind": "sign", "mask": list(vec)}
    else:
        raise SpecError(f"sign character not defined for group kind {kind!r}")
    return UnitaryCharacter(group, domain, rule, descriptor, validate=validate)


def cyclic_character(group: CayleyGroup, j: int, domain: str = "full_group") -> UnitaryCharacter:
    """Character exp(2*pi*i*j*x/N) of the order-N cyclic group."""
    if group.kind != "cyclic":
        raise SpecError("cyclic characters need a cyclic group")
    return exp_character(group, 2.0 * np.pi * int(j) / group.n, domain)


def _eta_extension(group: CayleyGroup, eta, rho0: complex = 1.0 + 0j):
    """Normalize an eta window into a callable on all integers.

    For finite coset count chi the window has length chi and extends by
    eta(m - chi) = eta(m) * rho0 (plain periodicity when rho0 = 1). For
    infinite chi any callable (or None, or a plain periodic list) is allowed.
    """
    rho0 = _as_unit(rho0, "eta extension factor")
    if eta is None:
        # The trivial window still needs the rho0 twist across wraps.
        eta = [1.0 + 0j] * (group.chi or 1)
    if callable(eta):
        return lambda m: _as_unit(eta(int(m)), f"eta({m})")
    seq = [_as_unit(v, "eta entry") for v in eta]
    chi = group.chi
    if chi is not None:
        if len(seq) != chi:
            raise SpecError(
                f"eta window must have length chi = {chi}, got {len(seq)}")
        def extension(m):
            j, m0 = divmod(int(m), chi)
            return seq[m0] * rho0 ** (-j)
        return extension
    period = len(seq)
    return lambda m: seq[int(m) % period]


def _require_nonseparating(group: CayleyGroup) -> None:
    if not group.nonseparating:
        raise FamilyPreconditionError(
            "homogeneity-preserving families need a nonseparating graph")


def _check_epsilon(group: CayleyGroup, epsilon) -> complex:
    eps = _as_unit(epsilon, "epsilon")
    if group.chi is None and abs(eps - 1.0) > UNIT_TOL:
        raise FamilyPreconditionError(
            "epsilon must be 1 when the coset count is infinite")
    return eps


def make_general_symmetry(u0: LocalUnitary, phases: PhaseField) -> SymmetryTransform:
    """Unrestricted symmetry: any local U0 plus any diagonal phase field."""
    if u0.group != phases.group:
        raise SpecError("U0 and phase field must share one group")
    return SymmetryTransform(u0.group, u0, phases, "general", {})


def identity_symmetry(group: CayleyGroup) -> SymmetryTransform:
    t = SymmetryTransform(group, LocalUnitary.identity(group),
                          PhaseField.ones(group), "general", {"identity": True})
    return t


def _normalize_uprime_sequence(group: CayleyGroup, uprime):
    """Split a space-homogeneous U' argument into (U'_0 matrix, diag rule).

    Accepted forms: None (all identity); a unit vector (constant diagonal);
    a diagonal matrix (same); a non-diagonal matrix (U'_0 only, identity
    afterwards); a pair (U'_0, diag part); a callable n -> matrix/vector,
    whose n >= 1 values must be diagonal.
    """
    dim = group.coin_dim
    ones = np.ones(dim, dtype=complex)

    def as_diag_vector(value, ctx):
        arr = np.asarray(value, dtype=complex)
        if arr.ndim == 1:
            vec = arr.reshape(-1)
        elif arr.ndim == 2:
            if np.abs(arr - np.diag(np.diagonal(arr))).max() > UNIT_TOL:
                raise FamilyPreconditionError(
                    f"U' must be diagonal {ctx}")
            vec = np.diagonal(arr).copy()
        else:
            raise SpecError("U' entries must be vectors or matrices")
        if vec.shape[0] != dim:
            raise SpecError(f"U' has size {vec.shape[0]}, expected {dim}")
        for v in vec:
            _as_unit(v, "U' diagonal entry")
        return vec

    if uprime is None:
        return np.eye(dim, dtype=complex), lambda n: ones
    if callable(uprime):
        cache: dict[int, np.ndarray] = {}
        def diag_rule(n):
            n = int(n)
            vec = cache.get(n)
            if vec is None:
                vec = as_diag_vector(uprime(n), f"for steps n >= 1 (n = {n})")
                cache[n] = vec
            return vec
        u0m = as_complex_matrix(uprime(0), dim)
        require_unitary(u0m, what="U'(0)")
        return u0m, diag_rule
    if isinstance(uprime, tuple) and len(uprime) == 2:
        u0m = as_complex_matrix(uprime[0], dim)
        require_unitary(u0m, what="U'(0)")
        rest = uprime[1]
        if rest is None:
            return u0m, lambda n: ones
        if callable(rest):
            return u0m, lambda n: as_diag_vector(rest(n), f"for n = {n}")
        vec = as_diag_vector(rest, "for steps n >= 1")
        return u0m, lambda n: vec
    arr = np.asarray(uprime, dtype=complex)
    if arr.ndim == 2 and np.abs(arr - np.diag(np.diagonal(arr))).max() > UNIT_TOL:
        require_unitary(as_complex_matrix(arr, dim), what="U'(0)")
        return arr.astype(complex), lambda n: ones
    vec = as_diag_vector(arr, "when given as a single vector")
    return np.diag(vec), lambda n: vec


def make_space_homog_symmetry(group: CayleyGroup, eta=None, rho=None,
                              uprime=None) -> SymmetryTransform:
    """Symmetry preserving space homogeneity of the coin.

    Phases follow u(n, x, c) = eta(n - k) * rho(xt) * U'(n)[c, c] with
    x = xt * c0^k; rho is a character of the zero-net-exponent subgroup, U'(0)
    may be any coin-space unitary while U'(n) is diagonal for n >= 1, and eta
    extends by eta(m - chi) = eta(m) * rho(c0^chi).
    """
    _require_nonseparating(group)
    if rho is None:
        rho = trivial_character(group, "causal_subgroup")
    if rho.domain != "causal_subgroup":
        raise FamilyPreconditionError(
            "space-homogeneous symmetries need a character of the "
            "zero-net-exponent subgroup")
    u0_mat, diag_rule = _normalize_uprime_sequence(group, uprime)
    rho0 = rho(group.pow_c0(group.chi)) if group.chi is not None else 1.0 + 0j
    eta_fn = _eta_extension(group, eta, rho0)

    def phase_rule(n, x, c):
        xt, k = group.decompose(x)
        return eta_fn(n - k) * rho(xt) * diag_rule(n)[c]

    def u0_rule(x):
        xt, k = group.decompose(x)
        return eta_fn(-k) * rho(xt) * u0_mat

    u0 = LocalUnitary.from_rule(group, u0_rule, validate=False)
    params = {"eta": eta_fn, "rho": rho, "uprime0": u0_mat,
              "uprime_diag": diag_rule, "rho0": rho0}
    return SymmetryTransform(group, u0, PhaseField(group, phase_rule),
                             "space_homog", params)


def _normalize_delta(group: CayleyGroup, delta):
    if delta is None:
        return lambda x, c: 1.0 + 0j
    if callable(delta):
        return lambda x, c: _as_unit(delta(x, c), f"delta({x!r}, {c})")
    table = {}
    for (x, c), value in delta.items():
        table[(group.validate(x), int(c))] = _as_unit(value, "delta entry")
    return lambda x, c: table.get((group.validate(x), c), 1.0 + 0j)


def make_time_homog_symmetry(group: CayleyGroup, epsilon=1.0, eta=None,
                             delta=None) -> SymmetryTransform:
    """Symmetry preserving time homogeneity of the coin.

    Phases follow u(n, x, c) = epsilon^n * eta(n - k) * delta(x, c) for all
    n, with the step-0 dressing the diagonal local unitary given by the same
    formula at n = 0. delta maps (element, coin index) to a unit; epsilon
    must be 1 when the coset count is infinite; eta is plain chi-periodic.
    """
    _require_nonseparating(group)
    eps = _check_epsilon(group, epsilon)
    eta_fn = _eta_extension(group, eta)
    delta_fn = _normalize_delta(group, delta)

    def phase_rule(n, x, c):
        k = group.coset_index(x)
        return eps ** n * eta_fn(n - k) * delta_fn(x, c)

    def u0_diag(x):
        k = group.coset_index(x)
        return np.array([eta_fn(-k) * delta_fn(x, c)
                         for c in range(group.coin_dim)], dtype=complex)

    u0 = LocalUnitary.diagonal(group, u0_diag, validate=False)
    params = {"epsilon": eps, "eta": eta_fn, "delta": delta_fn}
    return SymmetryTransform(group, u0, PhaseField(group, phase_rule),
                             "time_homog", params)


def make_full_homog_symmetry(group: CayleyGroup, eta=None, epsilon=1.0,
                             gamma=None, uprime=None) -> SymmetryTransform:
    """Symmetry preserving both space and time homogeneity.

    Phases follow u(n, x, c) = eta(n - k) * epsilon^n * gamma(x) * U'[c, c]
    for all n, with gamma a character of the whole group and U' one constant
    diagonal coin-space unitary; the step-0 dressing uses the same formula.
    """
    _require_nonseparating(group)
    eps = _check_epsilon(group, epsilon)
    if gamma is None:
        gamma = trivial_character(group, "full_group")
    if gamma.domain != "full_group":
        raise FamilyPreconditionError(
            "fully homogeneous symmetries need a character of the whole group")
    if uprime is None:
        uvec = np.ones(group.coin_dim, dtype=complex)
    else:
        arr = np.asarray(uprime, dtype=complex)
        if arr.ndim == 2:
            if np.abs(arr - np.diag(np.diagonal(arr))).max() > UNIT_TOL:
                raise FamilyPreconditionError("U' must be diagonal")
            arr = np.diagonal(arr).copy()
        uvec = arr.reshape(-1)
        if uvec.shape[0] != group.coin_dim:
            raise SpecError(f"U' has size {uvec.shape[0]}, expected {group.coin_dim}")
        for v in uvec:
            _as_unit(v, "U' diagonal entry")
    eta_fn = _eta_extension(group, eta)

    def phase_rule(n, x, c):
        k = group.coset_index(x)
        return eta_fn(n - k) * eps ** n * gamma(x) * uvec[c]

    def u0_diag(x):
        k = group.coset_index(x)
        return eta_fn(-k) * gamma(x) * uvec

    u0 = LocalUnitary.diagonal(group, u0_diag, validate=False)
    params = {"epsilon": eps, "eta": eta_fn, "gamma": gamma, "uprime": uvec}
    return SymmetryTransform(group, u0, PhaseField(group, phase_rule),
                             "full_homog", params)


def symmetry_phase_at(t: SymmetryTransform, n: int, x, c: int) -> complex:
    """Evaluate the dressing phase u(n, x, c); n must be >= 1."""
    if int(n) < 1:
        raise SpecError("step-0 dressing is U0, not a diagonal phase")
    return t.phases.at(n, x, c)


def transform_state(t: SymmetryTransform, psi0: WalkState) -> WalkState:
    """Transformed initial state: U0 applied to the original."""
    if psi0.group != t.group:
        raise SpecError("symmetry and state live on different groups")
    return t.u0.apply(psi0)


def transform_coin(t: SymmetryTransform, coin: QuantumCoin) -> QuantumCoin:
    """Transformed coin rule built from the dressing.

    Component at (n, x) is V C(n, x) U(n, x)^dagger, where V holds the
    step-(n+1) phases at the shifted positions x * s_c and U(n, x) is U0 for
    n = 0 and the diagonal step-n phases otherwise.
    """
    group = t.group
    if coin.group != group:
        raise SpecError("symmetry and coin live on different groups")
    if t.family == "general" and t.params.get("identity"):
        return coin
    gens = group.generators
    dim = group.coin_dim

    def rule(n, x):
        c_mat = coin.matrix_at(n, x)
        v = np.array([t.phases.at(n + 1, group.mul(x, gens[c]), c)
                      for c in range(dim)], dtype=complex)
        if n == 0:
            return (v[:, None] * c_mat) @ t.u0.component(x).conj().T
        u = np.array([t.phases.at(n, x, d) for d in range(dim)], dtype=complex)
        return (v[:, None] * c_mat) * np.conj(u)[None, :]

    new_time = coin.time_homogeneous and t.family in ("time_homog", "full_homog")
    new_space = coin.space_homogeneous and t.family in ("space_homog", "full_homog")
    return QuantumCoin(group, rule, time_homogeneous=new_time,
                       space_homogeneous=new_space, validate=True)


def apply_dressing(t: SymmetryTransform, n: int, state: WalkState) -> WalkState:
    """Dress a step-n state: U0 for n = 0, diagonal phases for n >= 1."""
    n = int(n)
    if n == 0:
        return t.u0.apply(state)
    phases = t.phases
    dim = t.group.coin_dim
    op = LocalUnitary.diagonal(
        t.group, lambda x: [phases.at(n, x, c) for c in range(dim)],
        validate=False)
    return op.apply(state)
