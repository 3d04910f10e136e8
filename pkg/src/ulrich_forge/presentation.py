"""Candidate Ulrich bundles presented as cokernels of matrices of linear forms.

A presentation is a b x a matrix M of linear forms giving the sheaf map
O(d-2)^a -> O(d-1)^b on the projective plane; the candidate bundle is its
cokernel.  The sizes are forced: a = r(d-1)/2 and b = r(d+1)/2 for a rank-r
candidate on the degree-d Veronese surface, which also forces r even
whenever d is even.

The module provides seeded random generation, the generic-rank (injectivity)
witness check, a sampling falsifier for local freeness over small extension
fields, a direct-sum constructor, and a canonical byte-stable JSON format.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .field import DEFAULT_PRIME, ExtensionField, PrimeField, ext_matrix_rank
from .linalg import rank_dense
from .poly import LinearForm

PRESENTATION_FORMAT = "ulrich-presentation/1"

# Affine charts used in rotation when sampling points of P^2: z=1, y=1, x=1.
CHART_ROTATION = (2, 1, 0)


class ParityError(ValueError):
    """Raised for (d, r) with no integral presentation shape."""


class PresentationFormatError(ValueError):
    """Raised when a presentation file violates the format invariants."""


class Shape(NamedTuple):
    a: int
    b: int
    alpha: int


def shape(d: int, r: int) -> Shape:
    """Presentation sizes a = r(d-1)/2, b = r(d+1)/2 and the number of
    certification twists alpha = ceil((r+2)/2).

    Raises ParityError when r(d-1) is odd: an even-degree Veronese surface
    carries no odd-rank Ulrich bundles.
    """
    if d < 1:
        raise ValueError(f"degree d must be >= 1, got {d}")
    if r < 1:
        raise ValueError(f"rank r must be >= 1, got {r}")
    if r * (d - 1) % 2 != 0:
        raise ParityError(
            f"no presentation shape for d={d}, r={r}: r(d-1)/2 is not an "
            f"integer (for even degree d the rank must be even)"
        )
    return Shape(a=r * (d - 1) // 2, b=r * (d + 1) // 2, alpha=(r + 3) // 2)


@dataclass(frozen=True)
class UlrichPresentation:
    """A b x a matrix of linear forms presenting E = coker(O(d-2)^a -> O(d-1)^b)."""

    field: PrimeField
    d: int
    r: int
    entries: tuple[tuple[LinearForm, ...], ...]

    def __post_init__(self):
        s = shape(self.d, self.r)
        if len(self.entries) != s.b:
            raise ValueError(f"expected {s.b} rows of entries, got {len(self.entries)}")
        for row in self.entries:
            if len(row) != s.a:
                raise ValueError(f"expected {s.a} entries per row, got {len(row)}")
            for e in row:
                if e.field.p != self.field.p:
                    raise ValueError("mixed moduli inside a presentation")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def a(self) -> int:
        return self.r * (self.d - 1) // 2

    @property
    def b(self) -> int:
        return self.r * (self.d + 1) // 2

    @property
    def alpha(self) -> int:
        return (self.r + 3) // 2

    @cached_property
    def coeff_array(self) -> np.ndarray:
        """Coefficients as a (b, a, 3) int64 array."""
        arr = np.array(
            [[e.coeffs for e in row] for row in self.entries], dtype=np.int64
        ).reshape(self.b, self.a, 3)
        arr.setflags(write=False)
        return arr

    @cached_property
    def canonical_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_json_dict())

    @cached_property
    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_bytes).hexdigest()

    def to_json_dict(self) -> dict:
        return {
            "format": PRESENTATION_FORMAT,
            "p": self.p,
            "d": self.d,
            "r": self.r,
            "a": self.a,
            "b": self.b,
            "entries": [[list(e.coeffs) for e in row] for row in self.entries],
        }

    def evaluate_at(self, point) -> np.ndarray:
        """The scalar b x a matrix M(point) over F_p."""
        vals = np.array([int(v) % self.p for v in point], dtype=np.int64)
        return (self.coeff_array @ vals) % self.p

    def __repr__(self):
        return (f"UlrichPresentation(p={self.p}, d={self.d}, r={self.r}, "
                f"{self.b}x{self.a})")


def canonical_json_bytes(obj) -> bytes:
    """Byte-stable canonical serialization shared by every file format."""
    return (json.dumps(obj, sort_keys=True, separators=(",", ":"),
                       ensure_ascii=True) + "\n").encode("ascii")


def random_presentation(d: int, r: int, rng: np.random.Generator,
                        p: int = DEFAULT_PRIME) -> UlrichPresentation:
    """Presentation with i.i.d. uniform coefficients, deterministic under rng."""
    s = shape(d, r)
    field = PrimeField(p)
    coeffs = rng.integers(0, p, size=(s.b, s.a, 3), dtype=np.int64)
    entries = tuple(
        tuple(LinearForm(field, tuple(int(c) for c in coeffs[i, j])) for j in range(s.a))
        for i in range(s.b)
    )
    return UlrichPresentation(field=field, d=d, r=r, entries=entries)


def direct_sum(p1: UlrichPresentation, p2: UlrichPresentation) -> UlrichPresentation:
    """Block-diagonal sum, presenting the direct sum of the two cokernels."""
    if p1.p != p2.p:
        raise ValueError("mixed moduli in direct sum")
    if p1.d != p2.d:
        raise ValueError("direct sum needs equal polarization degrees")
    field = p1.field
    zero = LinearForm.zero(field)
    top = tuple(row + (zero,) * p2.a for row in p1.entries)
    bot = tuple((zero,) * p1.a + row for row in p2.entries)
    return UlrichPresentation(field=field, d=p1.d, r=p1.r + p2.r, entries=top + bot)


def linear_span_dimension(pres: UlrichPresentation) -> int:
    """Dimension of the span of all entries inside the 3-space of linear forms."""
    flat = pres.coeff_array.reshape(-1, 3)
    return rank_dense(flat, pres.p)


# ---------------------------------------------------------------------------
# Generic rank (injectivity) and local freeness sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GenericRankResult:
    status: str                    # "injective" | "undetermined"
    trials: int
    witness: Optional[tuple[int, int, int]] = None

    @property
    def passed(self) -> bool:
        return self.status == "injective"


def _chart_point_fp(p: int, chart: int, rng: np.random.Generator) -> tuple[int, int, int]:
    coords = [int(v) for v in rng.integers(0, p, size=3)]
    coords[chart] = 1
    return tuple(coords)


def generic_rank_check(pres: UlrichPresentation, trials: int = 3,
                       rng: Optional[np.random.Generator] = None) -> GenericRankResult:
    """Look for one point of P^2(F_p) where M evaluates to full column rank.

    A single witness certifies injectivity of the sheaf map (pointwise rank
    bounds generic rank from below); exhausting the trials proves nothing
    and reports "undetermined".
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(0) if rng is None else rng
    for i in range(trials):
        point = _chart_point_fp(pres.p, CHART_ROTATION[i % 3], rng)
        if rank_dense(pres.evaluate_at(point), pres.p) == pres.a:
            return GenericRankResult(status="injective", trials=i + 1, witness=point)
    return GenericRankResult(status="undetermined", trials=trials)


@dataclass(frozen=True)
class LocalFreenessResult:
    verdict: str                   # "no-degeneracy-found" | "falsified"
    k_max: int
    trials_per_k: int
    degree: Optional[int] = None   # extension degree of the falsifying point
    point: Optional[tuple] = None

    @property
    def falsified(self) -> bool:
        return self.verdict == "falsified"

    def describe(self) -> str:
        if self.falsified:
            return f"falsified at point {self.point} over F_(p^{self.degree})"
        return "no degeneracy found (incomplete)"


def local_freeness_sample(pres: UlrichPresentation, k_max: int = 2,
                          trials_per_k: int = 20,
                          rng: Optional[np.random.Generator] = None) -> LocalFreenessResult:
    """Best-effort falsifier for local freeness of the cokernel.

    Samples points of P^2 over F_{p^k}, k = 1..k_max, looking for a point
    where M drops below full column rank.  The cokernel is locally free on
    the complement of such points, so a hit falsifies local freeness; no
    hit certifies nothing, and every certificate says so.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    rng = np.random.default_rng(0) if rng is None else rng
    for k in range(1, k_max + 1):
        if k == 1:
            for i in range(trials_per_k):
                point = _chart_point_fp(pres.p, CHART_ROTATION[i % 3], rng)
                if rank_dense(pres.evaluate_at(point), pres.p) < pres.a:
                    return LocalFreenessResult("falsified", k_max, trials_per_k,
                                               degree=1, point=point)
            continue
        ext = ExtensionField(pres.field, k)
        for i in range(trials_per_k):
            point = [ext.random(rng) for _ in range(3)]
            point[CHART_ROTATION[i % 3]] = ext.one()
            mat = [[e.evaluate_ext(ext, point) for e in row] for row in pres.entries]
            if ext_matrix_rank(ext, mat) < pres.a:
                return LocalFreenessResult("falsified", k_max, trials_per_k,
                                           degree=k, point=tuple(point))
    return LocalFreenessResult("no-degeneracy-found", k_max, trials_per_k)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def save(pres: UlrichPresentation, path) -> None:
    with open(path, "wb") as fh:
        fh.write(pres.canonical_bytes)


def load(path) -> UlrichPresentation:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise PresentationFormatError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise PresentationFormatError(f"not valid JSON: {exc}") from exc
    return from_json_dict(doc)


def from_json_dict(doc) -> UlrichPresentation:
    if not isinstance(doc, dict):
        raise PresentationFormatError("top-level value must be an object")
    if doc.get("format") != PRESENTATION_FORMAT:
        raise PresentationFormatError(
            f"format tag must be {PRESENTATION_FORMAT!r}, got {doc.get('format')!r}")
    for key in ("p", "d", "r", "a", "b", "entries"):
        if key not in doc:
            raise PresentationFormatError(f"missing field {key!r}")
    p, d, r = doc["p"], doc["d"], doc["r"]
    if not all(isinstance(v, int) for v in (p, d, r)):
        raise PresentationFormatError("p, d, r must be integers")
    try:
        field = PrimeField(p)
    except ValueError as exc:
        raise PresentationFormatError(str(exc)) from exc
    try:
        s = shape(d, r)
    except ValueError as exc:
        raise PresentationFormatError(str(exc)) from exc
    if doc["a"] != s.a or doc["b"] != s.b:
        raise PresentationFormatError(
            f"inconsistent shape: file says {doc['b']}x{doc['a']}, but "
            f"(d={d}, r={r}) forces {s.b}x{s.a} (b-a must equal r)")
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != s.b:
        raise PresentationFormatError(f"entries must be a list of {s.b} rows")
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != s.a:
            raise PresentationFormatError(f"row {i} must hold {s.a} linear forms")
        forms = []
        for j, coeffs in enumerate(row):
            if (not isinstance(coeffs, list) or len(coeffs) != 3
                    or not all(isinstance(c, int) for c in coeffs)):
                raise PresentationFormatError(
                    f"entry ({i}, {j}) must be a list of 3 integers")
            if not all(0 <= c < p for c in coeffs):
                raise PresentationFormatError(
                    f"entry ({i}, {j}) has coefficients outside [0, {p})")
            forms.append(LinearForm(field, tuple(coeffs)))
        rows.append(tuple(forms))
    return UlrichPresentation(field=field, d=d, r=r, entries=tuple(rows))
