"""Computation rates for compute-and-forward with number-field lattices.

A relay observing n fading blocks with L users decodes an integer-ring
combination of the users' codewords. The achievable rate of a coefficient
vector is governed by a positive-definite quadratic form built from the
per-block MMSE matrices; good coefficients are short vectors of the
associated nL-dimensional lattice that stay linearly independent over the
field.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import AlgebraicInt, rank_over_K
from .lattices import ZLattice, hermite_constant, successive_minima


class PathologicalChannelError(ValueError):
    """Raised for non-finite or degenerate channel inputs."""


def log2_plus(x):
    """max(0, log2(x)), with nonpositive arguments clamped to 0."""
    if x <= 1.0:
        return 0.0
    return math.log2(x)


@dataclass(frozen=True)
class ChannelRealization:
    """Real block-fading channel: row j holds the L user gains of block j."""

    h: np.ndarray
    snr: float

    def __post_init__(self):
        h = np.atleast_2d(np.asarray(self.h, dtype=float))
        if not np.all(np.isfinite(h)):
            raise PathologicalChannelError("channel gains must be finite")
        if not (self.snr > 0 and math.isfinite(self.snr)):
            raise PathologicalChannelError("snr must be positive and finite")
        object.__setattr__(self, "h", h)

    @property
    def n_blocks(self):
        return self.h.shape[0]

    @property
    def users(self):
        return self.h.shape[1]

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        snr = 10.0 ** (float(doc["snr_db"]) / 10.0)
        return cls(h=np.array(doc["h"], dtype=float), snr=snr)

    def to_json(self):
        return {"h": self.h.tolist(), "snr_db": 10.0 * math.log10(self.snr)}


@dataclass
class HumbertForm:
    """Block-diagonal quadratic form of the relay's effective noise.

    M[j] is the L x L MMSE matrix of block j, M_chol[j] an upper-triangular
    factor with M_chol[j].T @ M_chol[j] = M[j], and phi_M the nL x nL lattice
    basis whose squared vector lengths realize the form.
    """

    field: object
    channel: ChannelRealization
    M: list
    M_chol: list
    phi_M: np.ndarray

    def value(self, coeffs):
        """Quadratic form of a coefficient vector (length-L AlgebraicInts)."""
        sigma = _embed_vector(self.field, coeffs)
        return float(sum(sigma[j] @ self.M[j] @ sigma[j] for j in range(len(self.M))))

    def chol_det(self):
        return float(np.prod([np.prod(np.diag(c)) for c in self.M_chol]))


def _embed_vector(field, coeffs):
    """Matrix with row j = (sigma_j applied entrywise to the vector)."""
    coord_mat = np.array([a.coords for a in coeffs], dtype=float).T
    return field.embeddings @ coord_mat


def build_humbert(field, channel):
    """MMSE quadratic form for a channel with n_blocks = field degree."""
    n, L = channel.n_blocks, channel.users
    if n != field.degree:
        raise ValueError("channel has %d blocks but field degree is %d"
                         % (n, field.degree))
    P = channel.snr
    M, M_chol = [], []
    for j in range(n):
        hj = channel.h[j]
        g = P * float(hj @ hj) + 1.0
        Mj = np.eye(L) - (P / g) * np.outer(hj, hj)
        M.append(Mj)
        try:
            low = np.linalg.cholesky(Mj)
        except np.linalg.LinAlgError as e:
            raise PathologicalChannelError("MMSE matrix not positive definite") from e
        M_chol.append(low.T)
    blocks = np.zeros((n * L, n * L))
    for j in range(n):
        blocks[j * L:(j + 1) * L, j * L:(j + 1) * L] = M_chol[j]
    phi_M = blocks @ np.kron(field.embeddings, np.eye(L))
    return HumbertForm(field=field, channel=channel, M=M, M_chol=M_chol, phi_M=phi_M)


def psi_map(field, int_vec):
    """Integer vector of length n*L -> length-L vector of ring elements.

    Entry (k-1)*L + l of the integer vector is coordinate k of element l.
    """
    n = field.degree
    if len(int_vec) % n != 0:
        raise ValueError("vector length must be a multiple of the degree")
    L = len(int_vec) // n
    return [field.element([int(int_vec[k * L + l]) for k in range(n)])
            for l in range(L)]


def psi_inverse(coeffs):
    """Inverse of psi_map: ring-element vector -> flat integer vector."""
    field = coeffs[0].field
    n, L = field.degree, len(coeffs)
    out = [0] * (n * L)
    for l, a in enumerate(coeffs):
        for k in range(n):
            out[k * L + l] = a.coords[k]
    return out


def rate_am(field, f_value):
    """Computation rate from the quadratic form value (arithmetic-mean form)."""
    n = field.degree
    if f_value <= 0:
        raise ValueError("quadratic form value must be positive")
    return (n / 2.0) * log2_plus(n / f_value)


def rate_gm(humbert, coeffs):
    """Geometric-mean variant: product of per-block quadratic forms."""
    sigma = _embed_vector(humbert.field, coeffs)
    prod = 1.0
    for j, Mj in enumerate(humbert.M):
        prod *= float(sigma[j] @ Mj @ sigma[j])
    if prod <= 0:
        raise ValueError("degenerate per-block form")
    return 0.5 * log2_plus(1.0 / prod)


def mmse_scaling(humbert, coeffs):
    """Optimal per-block receiver scaling for a coefficient vector."""
    P = humbert.channel.snr
    sigma = _embed_vector(humbert.field, coeffs)
    out = []
    for j in range(humbert.channel.n_blocks):
        hj = humbert.channel.h[j]
        out.append(P * float(sigma[j] @ hj) / (P * float(hj @ hj) + 1.0))
    return out


def minkowski_rate_bounds(field, channel):
    """Coefficient-independent lower bounds on best and sum computation rate.

    Derived from Minkowski's theorems via the Hermite-constant convention of
    the lattice module. Returns (best_rate_lb, sum_rate_lb) in bits.
    """
    n, L = field.degree, channel.users
    P = channel.snr
    disc = float(field.discriminant)
    kappa = hermite_constant(n * L)
    cap_terms = [log2_plus(1.0 + P * float(channel.h[j] @ channel.h[j]))
                 for j in range(n)]
    best = (sum(cap_terms) / (2.0 * L)
            - (n / 2.0) * log2_plus((kappa / n) * disc ** (1.0 / n)))
    sum_lb = (0.5 * sum(cap_terms)
              - 0.5 * log2_plus((kappa / n) ** (n * L) * disc ** L))
    return best, sum_lb


def mac_capacity(channel):
    """Sum capacity of the multiple-access channel across the fading blocks."""
    P = channel.snr
    return 0.5 * sum(log2_plus(1.0 + P * float(hj @ hj)) for hj in channel.h)


@dataclass
class RateReport:
    """Best ring coefficient vectors for one channel realization."""

    field_name: str
    channel: ChannelRealization
    coeffs: list                 # list of length-L AlgebraicInt vectors
    f_values: list               # quadratic form values, ascending
    rates_am: list               # per-vector computation rates, nonincreasing
    rate_gm: float               # geometric-mean rate of the best vector
    b_opt: list                  # per-block MMSE scalings of the best vector
    lower_bounds: tuple          # (best_rate_lb, sum_rate_lb)

    @property
    def best_rate(self):
        return self.rates_am[0]

    @property
    def sum_rate(self):
        return sum(self.rates_am)

    def to_json(self):
        return {
            "field": self.field_name,
            "channel": self.channel.to_json(),
            "coeffs": [[list(a.coords) for a in vec] for vec in self.coeffs],
            "f_values": list(self.f_values),
            "rates_am": list(self.rates_am),
            "rate_gm": self.rate_gm,
            "b_opt": list(self.b_opt),
            "lower_bounds": {"best_rate": self.lower_bounds[0],
                             "sum_rate": self.lower_bounds[1]},
        }


def best_coefficients(field, channel, k=None):
    """Find the k best field-independent coefficient vectors for a relay.

    Enumerates the successive minima of the MMSE-weighted embedding lattice
    and greedily keeps vectors whose images stay linearly independent over
    the field (exact rank test). k defaults to the number of users.
    """
    n, L = field.degree, channel.users
    if k is None:
        k = L
    if not (1 <= k <= L):
        raise ValueError("need 1 <= k <= users")
    hf = build_humbert(field, channel)
    lat = ZLattice(hf.phi_M)
    minima = successive_minima(lat, n * L)
    selected = []
    for vec in minima.vectors:
        cand = psi_map(field, vec)
        if rank_over_K(field, [[a for a in v] for v in selected + [cand]]) == len(selected) + 1:
            selected.append(cand)
            if len(selected) == k:
                break
    if len(selected) < k:
        raise RuntimeError("successive minima did not contain %d independent vectors" % k)
    f_values = [hf.value(v) for v in selected]
    rates = [rate_am(field, f) for f in f_values]
    return RateReport(
        field_name=field.name,
        channel=channel,
        coeffs=selected,
        f_values=f_values,
        rates_am=rates,
        rate_gm=rate_gm(hf, selected[0]),
        b_opt=mmse_scaling(hf, selected[0]),
        lower_bounds=minkowski_rate_bounds(field, channel),
    )


# ---------------------------------------------------------------------------
# Plain-integer baseline: coefficients in Z instead of the ring of integers.
# ---------------------------------------------------------------------------

def integer_baseline(channel, k=None):
    """Rates with coefficient vectors restricted to Z^L (no ring structure).

    The form collapses to a^T (sum_j M_j) a on an L-dimensional lattice;
    returns (rates list, coefficient vectors). Rates use the same n-block
    normalization as the ring scheme.
    """
    n, L = channel.n_blocks, channel.users
    if k is None:
        k = L
    P = channel.snr
    G = np.zeros((L, L))
    for j in range(n):
        hj = channel.h[j]
        g = P * float(hj @ hj) + 1.0
        G += np.eye(L) - (P / g) * np.outer(hj, hj)
    low = np.linalg.cholesky(G)
    lat = ZLattice(low.T)
    minima = successive_minima(lat, k)
    f_values = [l * l for l in minima.lengths]
    rates = [(n / 2.0) * log2_plus(n / f) for f in f_values]
    return rates, minima.vectors


# ---------------------------------------------------------------------------
# Integer-forcing MIMO receiver with ring coefficients.
# ---------------------------------------------------------------------------

@dataclass
class IFReport:
    """Integer-forcing linear receiver result for one MIMO realization."""

    field_name: str
    coeffs: list          # L vectors, each a length-L AlgebraicInt vector
    rates: list           # per-stream rates
    rate: float           # min over streams (the achievable symmetric rate)
    ml_capacity: float    # joint ML upper benchmark

    def to_json(self):
        return {
            "field": self.field_name,
            "coeffs": [[list(a.coords) for a in vec] for vec in self.coeffs],
            "rates": list(self.rates),
            "rate": self.rate,
            "ml_capacity": self.ml_capacity,
        }


def _if_whiteners(h_mats, P):
    """Per-block whitening matrices F_j = (P^-1 I + H_j^T H_j)^(-1/2)."""
    out = []
    for H in h_mats:
        H = np.asarray(H, dtype=float)
        if not np.all(np.isfinite(H)):
            raise PathologicalChannelError("channel matrix must be finite")
        A = np.eye(H.shape[1]) / P + H.T @ H
        w, v = np.linalg.eigh(A)
        w = np.clip(w, 1e-300, None)
        out.append(v @ np.diag(w ** -0.5) @ v.T)
    return out


def ml_capacity(h_mats, P):
    """Joint ML benchmark: worst-case normalized subset sum capacity."""
    h_mats = [np.asarray(H, dtype=float) for H in h_mats]
    n = len(h_mats)
    L = h_mats[0].shape[1]
    best = math.inf
    for size in range(1, L + 1):
        for subset in itertools.combinations(range(L), size):
            tot = 0.0
            for H in h_mats:
                Hs = H[:, subset]
                sign, logdet = np.linalg.slogdet(np.eye(H.shape[0]) + P * Hs @ Hs.T)
                tot += logdet / math.log(2.0)
            best = min(best, tot / (2.0 * n * size))
    return best


def if_rate(field, h_mats, P):
    """Ring integer-forcing rate for n = field degree MIMO blocks.

    h_mats lists one receive matrix per block (columns are users). The
    receiver decodes L ring combinations that are independent over the field.
    """
    n = field.degree
    if len(h_mats) != n:
        raise ValueError("need one channel matrix per fading block")
    L = np.asarray(h_mats[0]).shape[1]
    F = _if_whiteners(h_mats, P)
    blocks = np.zeros((n * L, n * L))
    for j in range(n):
        blocks[j * L:(j + 1) * L, j * L:(j + 1) * L] = F[j]
    lat = ZLattice(blocks @ np.kron(field.embeddings, np.eye(L)))
    minima = successive_minima(lat, n * L)
    selected, lengths = [], []
    for vec, length in zip(minima.vectors, minima.lengths):
        cand = psi_map(field, vec)
        if rank_over_K(field, selected + [cand]) == len(selected) + 1:
            selected.append(cand)
            lengths.append(length)
            if len(selected) == L:
                break
    if len(selected) < L:
        raise RuntimeError("no full set of field-independent coefficient vectors")
    rates = [0.5 * log2_plus(n * P / (l * l)) for l in lengths]
    return IFReport(field_name=field.name, coeffs=selected, rates=rates,
                    rate=min(rates), ml_capacity=ml_capacity(h_mats, P))


def integer_if_rate(h_mats, P):
    """Plain-integer integer-forcing baseline over the same blocks."""
    h_mats = [np.asarray(H, dtype=float) for H in h_mats]
    n = len(h_mats)
    L = h_mats[0].shape[1]
    F = _if_whiteners(h_mats, P)
    G = sum(f @ f for f in F)
    low = np.linalg.cholesky(G)
    minima = successive_minima(ZLattice(low.T), L)
    rates = [0.5 * log2_plus(n * P / (l * l)) for l in minima.lengths]
    return min(rates)


# ---------------------------------------------------------------------------
# Degrees-of-freedom slope estimate.
# ---------------------------------------------------------------------------

def dof_estimate(field, h, snr_db_grid, z_baseline=False):
    """Least-squares slope of the best rate against (1/2) log2(1 + P).

    The channel matrix h stays fixed while the SNR sweeps the grid, which
    must span at least 30 dB. Returns (slope, rates list).
    """
    snr_db_grid = [float(s) for s in snr_db_grid]
    if len(snr_db_grid) < 2 or max(snr_db_grid) - min(snr_db_grid) < 30.0 - 1e-9:
        raise ValueError("SNR grid must span at least 30 dB")
    xs, ys = [], []
    for s in snr_db_grid:
        P = 10.0 ** (s / 10.0)
        ch = ChannelRealization(h=h, snr=P)
        if z_baseline:
            rates, _ = integer_baseline(ch, k=1)
            r = rates[0]
        else:
            r = best_coefficients(field, ch, k=1).best_rate
        xs.append(0.5 * math.log2(1.0 + P))
        ys.append(r)
    xs, ys = np.array(xs), np.array(ys)
    slope = float(np.polyfit(xs, ys, 1)[0])
    return slope, list(ys)
