"""Gaussian and spherical ensembles of SU(2) polynomials and spherical harmonics.

Every random draw comes from its own labeled Philox substream, keyed by
``(seed, family, measure, degree, index)``.  Samples are therefore pure
functions of their labels: batches can be produced in any order or in
parallel and still reproduce bit-for-bit.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import gammaln

_MASK64 = (1 << 64) - 1


class Family(str, Enum):
    SU2_POLY = "SU2_POLY"
    SPHERICAL_HARMONIC_S2 = "SPHERICAL_HARMONIC_S2"


class Measure(str, Enum):
    GAUSSIAN = "GAUSSIAN"
    SPHERICAL = "SPHERICAL"


class Field(str, Enum):
    REAL = "REAL"
    COMPLEX = "COMPLEX"


# substream labels; the ONB label keeps orthonormal-basis draws disjoint
# from coefficient draws under the same user seed
_FAMILY_LABEL = {Family.SU2_POLY: 0, Family.SPHERICAL_HARMONIC_S2: 1}
_MEASURE_LABEL = {Measure.GAUSSIAN: 0, Measure.SPHERICAL: 1}
_ONB_LABEL = 7
# log of the largest double; binomial(N, N/2) passes it near N = 1020
MAX_LOG_WEIGHT = np.log(np.finfo(float).max)


@dataclass(frozen=True)
class EnsembleSpec:
    family: Family
    degree: int
    measure: Measure = Measure.GAUSSIAN
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "measure", Measure(self.measure))
        if int(self.degree) < 0:
            raise ValueError("degree must be nonnegative")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "seed", int(self.seed) & _MASK64)

    @property
    def dimension(self):
        return dimension(self.family, self.degree)

    @property
    def is_complex(self):
        return self.family is Family.SU2_POLY

    def replace(self, **kw):
        d = dict(family=self.family, degree=self.degree, measure=self.measure, seed=self.seed)
        d.update(kw)
        return EnsembleSpec(**d)


@dataclass
class SectionSample:
    """One random section, as coefficients in the orthonormal basis."""

    spec: EnsembleSpec
    coeffs: np.ndarray
    norm_sq: float
    index: int = 0

    def __post_init__(self):
        if len(self.coeffs) != self.spec.dimension:
            raise ValueError(
                f"expected {self.spec.dimension} coefficients, got {len(self.coeffs)}"
            )

    @property
    def degree(self):
        return self.spec.degree

    def polynomial(self):
        """Monomial coefficients a_k of s(z) = sum a_k z^k (SU(2) family only)."""
        if self.spec.family is not Family.SU2_POLY:
            raise ValueError("only SU(2) samples have a monomial expansion")
        return self.coeffs * np.sqrt(monomial_weights(self.degree))


@dataclass
class SequenceSample:
    degrees: list
    samples: list = field(default_factory=list)
    seed: int = 0

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)


def dimension(family, N):
    """Dimension of the degree-N space: N+1 for SU(2), 2N+1 for harmonics on S^2."""
    family = Family(family)
    if family is Family.SU2_POLY:
        return N + 1
    return 2 * N + 1


def monomial_weights(N):
    """Weights w_k with {sqrt(w_k) z^k} orthonormal in degree N.

    The inner product is the Fubini-Study L2 product on the projective line
    with total volume 1, under which ||z^k||^2 = k!(N-k)!/(N+1)!.  Hence
    w_k = (N+1) * binomial(N, k).
    """
    if N < 0:
        raise ValueError("degree must be nonnegative")
    k = np.arange(N + 1)
    logw = np.log(N + 1.0) + gammaln(N + 1.0) - gammaln(k + 1.0) - gammaln(N - k + 1.0)
    if logw.max() > MAX_LOG_WEIGHT:
        raise OverflowError(f"monomial weights overflow double precision at degree {N}")
    return np.exp(logw)


def substream(seed, *labels):
    """Independent Philox generator for a labeled substream of ``seed``."""
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(int(l) for l in labels))
    return np.random.Generator(np.random.Philox(ss))


def _stream_for(spec, index):
    return substream(
        spec.seed, _FAMILY_LABEL[spec.family], _MEASURE_LABEL[spec.measure], spec.degree, index
    )


def _gaussian_vector(rng, d, is_complex):
    if is_complex:
        z = rng.standard_normal((2, d))
        return (z[0] + 1j * z[1]) / np.sqrt(2.0)
    return rng.standard_normal(d)


def _draw(spec, index):
    rng = _stream_for(spec, index)
    c = _gaussian_vector(rng, spec.dimension, spec.is_complex)
    if spec.measure is Measure.SPHERICAL:
        nrm = np.linalg.norm(c)
        while nrm == 0.0:
            c = _gaussian_vector(rng, spec.dimension, spec.is_complex)
            nrm = np.linalg.norm(c)
        c = c / nrm
        return SectionSample(spec, c, 1.0, index)
    return SectionSample(spec, c, float(np.vdot(c, c).real), index)


def sample_gaussian(spec, count, start=0):
    """Draw ``count`` samples with i.i.d. standard Gaussian coefficients.

    Complex coefficients have E|c|^2 = 1.  Sample ``i`` comes from
    substream ``start + i``.
    """
    if spec.measure is not Measure.GAUSSIAN:
        raise ValueError("sample_gaussian needs a GAUSSIAN spec")
    return [_draw(spec, start + i) for i in range(count)]


def sample_spherical(spec, count, start=0):
    """Draw ``count`` samples uniformly from the unit sphere of the space."""
    if spec.measure is not Measure.SPHERICAL:
        raise ValueError("sample_spherical needs a SPHERICAL spec")
    return [_draw(spec, start + i) for i in range(count)]


def sample(spec, count, start=0):
    """Dispatch on ``spec.measure``."""
    if spec.measure is Measure.GAUSSIAN:
        return sample_gaussian(spec, count, start)
    return sample_spherical(spec, count, start)


def coefficient_matrix(spec, count, start=0):
    """Coefficients of ``count`` samples stacked as rows."""
    return np.stack([s.coeffs for s in sample(spec, count, start)]) if count else np.empty((0, spec.dimension))


def sample_sequence(degrees, base_spec, seed=None):
    """One independent sample per degree, drawn from the product ensemble.

    The sample at degree N is the index-0 draw of ``base_spec`` at degree N,
    so a singleton sequence coincides with a single call to :func:`sample`.
    """
    degrees = [int(d) for d in degrees]
    if not degrees:
        raise ValueError("degree list is empty")
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValueError("degrees must be strictly increasing")
    seed = base_spec.seed if seed is None else seed
    samples = [_draw(base_spec.replace(degree=N, seed=seed), 0) for N in degrees]
    return SequenceSample(degrees, samples, seed)


def sample_random_onb(d, field=Field.REAL, seed=0, index=0):
    """Haar-distributed d x d orthogonal (REAL) or unitary (COMPLEX) matrix.

    QR of a Gaussian matrix with the phases of diag(R) moved into Q; without
    that correction the distribution of Q is not Haar.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    field = Field(field)
    rng = substream(seed, _ONB_LABEL, d, 1 if field is Field.COMPLEX else 0, index)
    if field is Field.COMPLEX:
        z = rng.standard_normal((2, d, d))
        g = (z[0] + 1j * z[1]) / np.sqrt(2.0)
    else:
        g = rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    ph = diag / np.abs(diag)
    return q * ph[None, :]
