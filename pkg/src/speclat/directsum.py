"""Direct sums of matrix factors: profiles, elements, and blockwise
spectral-order operations.

Spectral families, order tests and lattice operations on a direct sum all
act block by block; assembling the blocks into one block-diagonal matrix
gives the same answers, which the test suite uses as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConeError, DimensionMismatchError
from .family import SpectralFamily, family_of
from .order import check_cone, pos_neg_parts, spec_join, spec_leq, spec_meet
from .tolerances import DEFAULT_TOL, ToleranceConfig
from .validation import check_hermitian, max_abs


@dataclass(frozen=True)
class BlockProfile:
    """Dimensions (m_j) of the matrix factors of a direct sum."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d <= 0 for d in dims):
            raise DimensionMismatchError(f"profile must list positive dimensions, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return sum(self.dims)

    @property
    def offsets(self) -> tuple[int, ...]:
        out = [0]
        for d in self.dims:
            out.append(out[-1] + d)
        return tuple(out)

    def __len__(self) -> int:
        return len(self.dims)

    def split(self, matrix: np.ndarray) -> list[np.ndarray]:
        """Diagonal blocks of a total-dimension matrix."""
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (self.total, self.total):
            raise DimensionMismatchError(
                f"matrix of shape {m.shape} does not fit profile {self.dims}"
            )
        off = self.offsets
        return [m[off[j] : off[j + 1], off[j] : off[j + 1]] for j in range(len(self))]


class DirectSumElement:
    """A self-adjoint element (x_j) of a direct sum of matrix factors."""

    def __init__(
        self, profile: BlockProfile, blocks, tol: ToleranceConfig = DEFAULT_TOL,
        validate: bool = True,
    ):
        self.profile = profile
        blocks = [np.asarray(b, dtype=np.complex128) for b in blocks]
        if len(blocks) != len(profile):
            raise DimensionMismatchError(
                f"{len(blocks)} blocks for a {len(profile)}-factor profile"
            )
        for j, (b, d) in enumerate(zip(blocks, profile.dims)):
            if b.shape != (d, d):
                raise DimensionMismatchError(f"blocks[{j}] has shape {b.shape}, expected ({d},{d})")
            if validate:
                check_hermitian(b, tol, name=f"blocks[{j}]")
        self.blocks = tuple(blocks)

    @classmethod
    def zero(cls, profile: BlockProfile) -> "DirectSumElement":
        return cls(profile, [np.zeros((d, d)) for d in profile.dims], validate=False)

    @classmethod
    def from_matrix(cls, profile: BlockProfile, matrix, tol: ToleranceConfig = DEFAULT_TOL):
        """Split a block-diagonal matrix; off-diagonal mass above eps_proj is
        rejected."""
        m = np.asarray(matrix, dtype=np.complex128)
        blocks = profile.split(m)
        assembled = _assemble(profile, blocks)
        if max_abs(m - assembled) > tol.eps_proj:
            raise DimensionMismatchError("matrix is not block-diagonal for the profile")
        return cls(profile, blocks, tol)

    def assemble(self) -> np.ndarray:
        """The block-diagonal matrix over the total dimension."""
        return _assemble(self.profile, self.blocks)

    def norm(self) -> float:
        """Direct-sum norm: the largest block operator norm."""
        return max(
            float(np.linalg.norm(b, ord=2)) if b.size else 0.0 for b in self.blocks
        )

    def embed(self, j: int, block: np.ndarray) -> "DirectSumElement":
        """Copy of self with block j replaced."""
        blocks = list(self.blocks)
        blocks[j] = block
        return DirectSumElement(self.profile, blocks)

    def map_blocks(self, fn) -> "DirectSumElement":
        return DirectSumElement(self.profile, [fn(b) for b in self.blocks])

    def __add__(self, other: "DirectSumElement") -> "DirectSumElement":
        _check_profiles(self.profile, other.profile)
        return DirectSumElement(
            self.profile, [a + b for a, b in zip(self.blocks, other.blocks)], validate=False
        )

    def __sub__(self, other: "DirectSumElement") -> "DirectSumElement":
        _check_profiles(self.profile, other.profile)
        return DirectSumElement(
            self.profile, [a - b for a, b in zip(self.blocks, other.blocks)], validate=False
        )

    def __neg__(self) -> "DirectSumElement":
        return DirectSumElement(self.profile, [-b for b in self.blocks], validate=False)

    def __mul__(self, scalar: float) -> "DirectSumElement":
        return DirectSumElement(self.profile, [float(scalar) * b for b in self.blocks], validate=False)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"DirectSumElement(profile={self.profile.dims})"


def _assemble(profile: BlockProfile, blocks) -> np.ndarray:
    n = profile.total
    out = np.zeros((n, n), dtype=np.complex128)
    off = profile.offsets
    for j, b in enumerate(blocks):
        out[off[j] : off[j + 1], off[j] : off[j + 1]] = b
    return out


def _check_profiles(a: BlockProfile, b: BlockProfile) -> None:
    if a.dims != b.dims:
        raise DimensionMismatchError(f"profile mismatch: {a.dims} vs {b.dims}")


def embed_block(profile: BlockProfile, j: int, block) -> DirectSumElement:
    """The element with the given block in slot j and zeros elsewhere."""
    block = check_hermitian(block, name=f"blocks[{j}]")
    blocks = [
        block if i == j else np.zeros((d, d), dtype=np.complex128)
        for i, d in enumerate(profile.dims)
    ]
    return DirectSumElement(profile, blocks, validate=False)


def central_atoms(profile: BlockProfile) -> list[DirectSumElement]:
    """The atomic central projections z_j: identity in slot j, zero
    elsewhere. They sum to the identity and are mutually orthogonal."""
    return [embed_block(profile, j, np.eye(d)) for j, d in enumerate(profile.dims)]


def ds_family(x: DirectSumElement, tol: ToleranceConfig = DEFAULT_TOL) -> list[SpectralFamily]:
    """Blockwise spectral families; evaluating every block at a common l
    yields the spectral projection of the direct sum."""
    return [family_of(b, tol) for b in x.blocks]


def ds_spec_leq(x: DirectSumElement, y: DirectSumElement, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Spectral order on the direct sum holds iff it holds in every block."""
    _check_profiles(x.profile, y.profile)
    return all(spec_leq(a, b, tol) for a, b in zip(x.blocks, y.blocks))


def ds_check_cone(x: DirectSumElement, cone: str, tol: ToleranceConfig = DEFAULT_TOL) -> None:
    for j, b in enumerate(x.blocks):
        try:
            check_cone(b, cone, tol, name=f"blocks[{j}]")
        except ConeError as exc:
            raise ConeError(str(exc)) from None


def ds_spec_join(xs, cone: str = "sa", tol: ToleranceConfig = DEFAULT_TOL) -> DirectSumElement:
    """Blockwise supremum of a nonempty list of direct-sum elements."""
    profile = xs[0].profile
    for x in xs:
        _check_profiles(profile, x.profile)
    blocks = [
        spec_join([x.blocks[j] for x in xs], cone, tol) for j in range(len(profile))
    ]
    return DirectSumElement(profile, blocks)


def ds_spec_meet(xs, cone: str = "sa", tol: ToleranceConfig = DEFAULT_TOL) -> DirectSumElement:
    """Blockwise infimum of a nonempty list of direct-sum elements."""
    profile = xs[0].profile
    for x in xs:
        _check_profiles(profile, x.profile)
    blocks = [
        spec_meet([x.blocks[j] for x in xs], cone, tol) for j in range(len(profile))
    ]
    return DirectSumElement(profile, blocks)


def ds_pos_neg_parts(x: DirectSumElement, tol: ToleranceConfig = DEFAULT_TOL):
    """Blockwise positive and negative parts."""
    parts = [pos_neg_parts(b, tol) for b in x.blocks]
    plus = DirectSumElement(x.profile, [p for p, _ in parts])
    minus = DirectSumElement(x.profile, [m for _, m in parts])
    return plus, minus


def ds_central_scalars(x: DirectSumElement, tol: ToleranceConfig = DEFAULT_TOL) -> list[float] | None:
    """Per-block scalars when every block is a real multiple of its identity,
    else None."""
    scalars = []
    for b, d in zip(x.blocks, x.profile.dims):
        c = float(np.real(np.trace(b))) / d
        if max_abs(b - c * np.eye(d)) > tol.eps_proj:
            return None
        scalars.append(c)
    return scalars


def ds_atom_scalar_decompose(
    x: DirectSumElement, cone: str, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[float, int, np.ndarray] | None:
    """Write x as alpha * e for an atomic projection e of the direct sum.

    Atoms of a direct sum live in a single factor, so this succeeds exactly
    when one block is a positive scalar multiple of a rank-one projection
    and every other block vanishes. Returns (alpha, block index, e) or None.
    """
    from .order import atom_scalar_decompose

    ds_check_cone(x, cone, tol)
    supported = [j for j, b in enumerate(x.blocks) if max_abs(b) > tol.eps_proj]
    if not supported:
        raise ConeError("x = 0 admits no atomic decomposition")
    if len(supported) != 1:
        return None
    j = supported[0]
    found = atom_scalar_decompose(x.blocks[j], cone, tol)
    if found is None:
        return None
    alpha, e = found
    return alpha, j, e
