"""Concrete finite-dimensional JB*-algebra models.

Three model kinds are provided: the full complex matrix algebra with the
Jordan product (whose self-adjoint part is the hermitian matrices), spin
factors over a complex n-space with componentwise conjugation, and finite
direct sums of models.  A fourth, derived kind carries Peirce-2 algebras of
tripotents; it is constructed by :mod:`jbstar.peirce`.

Every element is a complex coordinate vector over the model's fixed basis,
tagged with the algebra identity.  Handles are immutable and operations are
pure, so values are safe to share between workers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import AlgebraMismatch, EmptyParts, SizeOutOfRange
from .kernel import Tolerance, operator_norm

__all__ = [
    "AlgebraHandle",
    "Element",
    "SpinVector",
    "build_hermitian_matrix_algebra",
    "build_spin_factor",
    "build_direct_sum",
    "jordan_product",
    "involution",
    "jbstar_norm",
    "random_element",
    "element",
    "element_to_json",
    "element_from_json",
    "algebra_from_descriptor",
    "algebra_to_descriptor",
    "selfadjoint_basis",
    "sa_coords",
    "sa_from_coords",
]


@dataclass(frozen=True)
class Element:
    """Coordinate vector over a fixed algebra basis."""

    algebra_id: str
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex)
        if not np.all(np.isfinite(c.view(float))):
            raise ValueError("element coordinates must be finite")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    def _check_same(self, other: "Element"):
        if self.algebra_id != other.algebra_id:
            raise AlgebraMismatch(f"{self.algebra_id} vs {other.algebra_id}")

    def __add__(self, other: "Element") -> "Element":
        self._check_same(other)
        return Element(self.algebra_id, self.coords + other.coords)

    def __sub__(self, other: "Element") -> "Element":
        self._check_same(other)
        return Element(self.algebra_id, self.coords - other.coords)

    def __neg__(self) -> "Element":
        return Element(self.algebra_id, -self.coords)

    def __mul__(self, scalar) -> "Element":
        return Element(self.algebra_id, self.coords * complex(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpinVector:
    """Split of a spin-factor element into its unit coefficient and H-part."""

    lam: complex
    hpart: np.ndarray

    @classmethod
    def from_element(cls, a: Element) -> "SpinVector":
        return cls(complex(a.coords[0]), np.asarray(a.coords[1:]))

    def is_self_adjoint(self, tol: Tolerance = Tolerance()) -> bool:
        # self-adjoint iff the unit coefficient is real and the H-part is
        # purely imaginary componentwise (an H^- element)
        return (
            abs(self.lam.imag) <= tol.abs_eps
            and float(np.max(np.abs(self.hpart.real), initial=0.0)) <= tol.abs_eps
        )


class AlgebraHandle:
    """Immutable descriptor of a concrete JB*-algebra model.

    The handle owns the product, involution and norm for its kind; every
    other module works through these three plus the unit.
    """

    def __init__(self, kind, dim, tol, ident, *, n=None, parts=None, payload=None):
        self.kind = kind
        self.dim = dim
        self.tol = tol
        self.id = ident
        self.n = n
        self.parts = tuple(parts) if parts is not None else None
        self._payload = payload or {}
        if self.parts is not None:
            offs = np.cumsum([0] + [p.dim for p in self.parts])
            self._slices = [slice(int(offs[i]), int(offs[i + 1])) for i in range(len(self.parts))]
        u = np.zeros(dim, dtype=complex)
        if kind == "hermitian_matrix":
            u = np.eye(n, dtype=complex).ravel()
        elif kind == "spin":
            u[0] = 1.0
        elif kind == "direct_sum":
            u = np.concatenate([p.unit.coords for p in self.parts])
        elif kind == "peirce2":
            u = self._payload["unit_sub"]
        else:
            raise ValueError(f"unknown algebra kind {kind!r}")
        self._unit = Element(self.id, u)

    # -- carrier ----------------------------------------------------------

    @property
    def unit(self) -> Element:
        return self._unit

    @property
    def basis(self) -> list[Element]:
        eye = np.eye(self.dim, dtype=complex)
        return [Element(self.id, eye[j]) for j in range(self.dim)]

    def element(self, coords) -> Element:
        c = np.asarray(coords, dtype=complex)
        if c.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coordinates, got shape {c.shape}")
        return Element(self.id, c)

    def zero(self) -> Element:
        return Element(self.id, np.zeros(self.dim, dtype=complex))

    # -- coordinate-level operations --------------------------------------

    def _prod(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if self.kind == "hermitian_matrix":
            a = x.reshape(self.n, self.n)
            b = y.reshape(self.n, self.n)
            return (0.5 * (a @ b + b @ a)).ravel()
        if self.kind == "spin":
            # x o y = <x|1> y + <y|1> x - <x|conj(y)> 1, inner product linear
            # in the first slot and conjugate-linear in the second; the
            # bilinear form is averaged over both operand orders so the
            # product commutes bit-exactly despite FMA in complex multiply
            out = x[0] * y + y[0] * x
            out[0] -= 0.5 * (np.sum(x * y) + np.sum(y * x))
            return out
        if self.kind == "direct_sum":
            return np.concatenate(
                [p._prod(x[s], y[s]) for p, s in zip(self.parts, self._slices)]
            )
        amb, e, B = self._payload["ambient"], self._payload["e"], self._payload["embed"]
        return B.conj().T @ amb._triple(B @ x, e, B @ y)

    def _inv(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "hermitian_matrix":
            return x.reshape(self.n, self.n).conj().T.ravel()
        if self.kind == "spin":
            out = -np.conj(x)
            out[0] += 2.0 * np.conj(x[0])
            return out
        if self.kind == "direct_sum":
            return np.concatenate([p._inv(x[s]) for p, s in zip(self.parts, self._slices)])
        amb, e, B = self._payload["ambient"], self._payload["e"], self._payload["embed"]
        return B.conj().T @ amb._triple(e, B @ x, e)

    def _norm(self, x: np.ndarray) -> float:
        if self.kind == "hermitian_matrix":
            return operator_norm(x.reshape(self.n, self.n))
        if self.kind == "spin":
            n2sq = float(np.sum(np.abs(x) ** 2))
            inner = np.sum(x * x)  # <x|conj(x)>
            val = max(n2sq * n2sq - abs(inner) ** 2, 0.0)
            return float(np.sqrt(n2sq + np.sqrt(val)))
        if self.kind == "direct_sum":
            return max(p._norm(x[s]) for p, s in zip(self.parts, self._slices))
        amb, B = self._payload["ambient"], self._payload["embed"]
        return amb._norm(B @ x)

    def _triple(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        """{x,y,z} = (x o y*) o z + (z o y*) o x - (x o z) o y*."""
        ys = self._inv(y)
        return self._prod(self._prod(x, ys), z) + self._prod(self._prod(z, ys), x) - self._prod(
            self._prod(x, z), ys
        )

    def __repr__(self):
        return f"AlgebraHandle({self.id}, dim={self.dim})"


# -- builders --------------------------------------------------------------


def build_hermitian_matrix_algebra(n: int, tol: Tolerance = Tolerance()) -> AlgebraHandle:
    """Full matrix algebra M_n(C) with Jordan product (ab+ba)/2.

    The basis is the matrix units E_jk in row-major order, so coordinates
    reshape directly to the matrix.
    """
    if not (1 <= n <= 12):
        raise SizeOutOfRange(f"hermitian_matrix size must be in [1, 12], got {n}")
    return AlgebraHandle("hermitian_matrix", n * n, tol, f"hermitian_matrix({n})", n=n)


def build_spin_factor(n: int, tol: Tolerance = Tolerance()) -> AlgebraHandle:
    """Spin factor on C^n with componentwise conjugation and unit e_0.

    Needs n >= 3 so that H^- = {(0, i t_2, ..., i t_n) : t real} has real
    dimension at least 2.
    """
    if n < 3:
        raise SizeOutOfRange(f"spin factor needs n >= 3, got {n}")
    return AlgebraHandle("spin", n, tol, f"spin({n})", n=n)


def build_direct_sum(parts) -> AlgebraHandle:
    """Componentwise direct sum; norm is the max over parts."""
    parts = list(parts)
    if not parts:
        raise EmptyParts("direct sum needs at least one part")
    dim = sum(p.dim for p in parts)
    ident = "direct_sum[" + ",".join(p.id for p in parts) + "]"
    return AlgebraHandle("direct_sum", dim, parts[0].tol, ident, parts=parts)


def _peirce2_handle(ambient: AlgebraHandle, e_coords: np.ndarray, embed: np.ndarray) -> AlgebraHandle:
    """Internal constructor used by jbstar.peirce for Peirce-2 algebras."""
    tag = hashlib.sha1(np.ascontiguousarray(e_coords).tobytes()).hexdigest()[:12]
    unit_sub = embed.conj().T @ e_coords
    return AlgebraHandle(
        "peirce2",
        embed.shape[1],
        ambient.tol,
        f"peirce2[{ambient.id};{tag}]",
        payload={"ambient": ambient, "e": e_coords, "embed": embed, "unit_sub": unit_sub},
    )


# -- element operations -----------------------------------------------------


def _owned(A: AlgebraHandle, a: Element) -> np.ndarray:
    if a.algebra_id != A.id:
        raise AlgebraMismatch(f"element of {a.algebra_id} used in {A.id}")
    return a.coords


def jordan_product(A: AlgebraHandle, a: Element, b: Element) -> Element:
    return Element(A.id, A._prod(_owned(A, a), _owned(A, b)))


def involution(A: AlgebraHandle, a: Element) -> Element:
    return Element(A.id, A._inv(_owned(A, a)))


def jbstar_norm(A: AlgebraHandle, a: Element) -> float:
    return A._norm(_owned(A, a))


def element(A: AlgebraHandle, coords) -> Element:
    return A.element(coords)


def random_element(A: AlgebraHandle, seed: int, flavor: str = "general") -> Element:
    """Deterministic random element of the requested flavor.

    Flavors: ``general``, ``self_adjoint``, ``positive`` (b o b for random
    self-adjoint b), ``projection`` (sum of a random subset of spectral
    idempotents), ``unitary`` (exp_i of a random self-adjoint).
    """
    return _random(A, np.random.default_rng(seed), flavor)


def _random(A: AlgebraHandle, rng: np.random.Generator, flavor: str = "general") -> Element:
    g = Element(A.id, rng.standard_normal(A.dim) + 1j * rng.standard_normal(A.dim))
    if flavor == "general":
        return g
    sa = 0.5 * (g + involution(A, g))
    if flavor == "self_adjoint":
        return sa
    if flavor == "positive":
        return jordan_product(A, sa, sa)
    from . import calculus  # lazy: spectral machinery lives downstream

    if flavor == "projection":
        dec = calculus.spectral_decomposition(A, sa)
        m = len(dec.pairs)
        bits = rng.integers(0, 2, size=m)
        if m >= 2 and (bits.sum() == 0 or bits.sum() == m):
            bits[int(rng.integers(0, m))] ^= 1
        p = A.zero()
        for take, (_, idem) in zip(bits, dec.pairs):
            if take:
                p = p + idem
        return p
    if flavor == "unitary":
        scale = rng.uniform(0.3, 2.2)
        return calculus.exp_i(A, scale * sa, 1.0)
    raise ValueError(f"unknown flavor {flavor!r}")


# -- self-adjoint real structure --------------------------------------------


def _realify(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag])


def _unrealify(r: np.ndarray) -> np.ndarray:
    d = r.size // 2
    return r[:d] + 1j * r[d:]


def selfadjoint_basis(A: AlgebraHandle) -> list[Element]:
    """Orthonormal real basis of the self-adjoint part.

    Orthonormality is with respect to the real coordinate inner product
    Re<x, y>; the basis is the SVD null space of (involution - id) acting on
    the realified coordinates, so it is deterministic per handle.
    """
    d = A.dim
    M = np.zeros((2 * d, 2 * d))
    eye = np.eye(d, dtype=complex)
    for j in range(d):
        M[:, j] = _realify(A._inv(eye[j]))
        M[:, d + j] = _realify(A._inv(1j * eye[j]))
    u, s, vt = np.linalg.svd(M - np.eye(2 * d))
    rank = int(np.sum(s > 1e-10 * max(s[0], 1.0)))
    null = vt[rank:].T
    return [Element(A.id, _unrealify(null[:, j])) for j in range(null.shape[1])]


def sa_coords(A: AlgebraHandle, a: Element, basis: list[Element] | None = None) -> np.ndarray:
    """Real coordinates of a self-adjoint element in a self-adjoint basis."""
    basis = basis if basis is not None else selfadjoint_basis(A)
    r = _realify(_owned(A, a))
    B = np.stack([_realify(b.coords) for b in basis], axis=1)
    return B.T @ r


def sa_from_coords(A: AlgebraHandle, rho, basis: list[Element] | None = None) -> Element:
    basis = basis if basis is not None else selfadjoint_basis(A)
    out = A.zero()
    for c, b in zip(np.asarray(rho, dtype=float), basis):
        out = out + float(c) * b
    return out


# -- JSON interfaces ---------------------------------------------------------


def element_to_json(a: Element) -> dict:
    return {"coords": [[float(z.real), float(z.imag)] for z in a.coords]}


def element_from_json(A: AlgebraHandle, doc: dict) -> Element:
    coords = [complex(re, im) for re, im in doc["coords"]]
    return A.element(coords)


def algebra_from_descriptor(doc: dict, tol: Tolerance = Tolerance()) -> AlgebraHandle:
    """Build a handle from the JSON descriptor format used by the CLI."""
    kind = doc.get("kind")
    if kind == "hermitian_matrix":
        return build_hermitian_matrix_algebra(int(doc["n"]), tol)
    if kind == "spin":
        return build_spin_factor(int(doc["n"]), tol)
    if kind == "direct_sum":
        return build_direct_sum([algebra_from_descriptor(p, tol) for p in doc["parts"]])
    raise ValueError(f"unknown algebra descriptor kind {kind!r}")


def algebra_to_descriptor(A: AlgebraHandle) -> dict:
    if A.kind in ("hermitian_matrix", "spin"):
        return {"kind": A.kind, "n": A.n}
    if A.kind == "direct_sum":
        return {"kind": "direct_sum", "parts": [algebra_to_descriptor(p) for p in A.parts]}
    raise ValueError(f"algebra kind {A.kind!r} has no descriptor form")
