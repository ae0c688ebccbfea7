"""Nested lattice codes from linear codes over a prime-ideal quotient.

The fine and coarse lattices are preimages of linear codes over O/p under
reduction modulo a degree-one prime ideal p above a rational prime. Encoding
lifts a codeword to minimal coset representatives and reduces modulo the
coarse lattice; relays quantize noisy ring combinations back onto the fine
lattice and forward finite-field equations that a destination solves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .fields import AlgebraicInt
from .lattices import ZLattice, closest_vector


class CodecError(ValueError):
    """Raised for inconsistent code or ideal parameters."""


@dataclass
class PrimeIdealData:
    """Degree-one prime ideal p | (p) with reduction map O -> F_p.

    basis_coords holds a Z-basis of the ideal as integer coordinate columns
    over the field's integral basis; residues[i] is the image of the i-th
    integral basis element under reduction.
    """

    field: object
    p: int
    root: int
    basis_coords: list      # n columns, each a length-n integer list
    residues: list          # length n, images of the integral basis in F_p
    coset_reps: list        # coset_reps[c] is the minimal lift of c in O

    def rho(self, elem):
        """Reduce a ring element to F_p."""
        return sum(int(c) * r for c, r in zip(elem.coords, self.residues)) % self.p

    def contains(self, elem):
        return self.rho(elem) == 0

    def embedded_basis(self):
        return self.field.embeddings @ np.array(self.basis_coords, dtype=float).T


def prime_ideal(field, p, root):
    """Construct the degree-one prime ideal p*O + (theta - root)*O.

    `root` must satisfy min_poly(root) = 0 mod p. Coset representatives are
    minimal-norm lifts under the canonical embedding; ties resolve to the
    lexicographically smallest embedded representative.
    """
    n = field.degree
    if exact.poly_eval([int(c) for c in field.min_poly], root) % p != 0:
        raise CodecError("root %d is not a zero of the minimal polynomial mod %d"
                         % (root, p))
    theta = field.theta()
    gen = theta - root * field.one()
    cols = []
    for j in range(n):
        basis_j = field.element([1 if i == j else 0 for i in range(n)])
        cols.append([p * c for c in basis_j.coords])
        cols.append(list((gen * basis_j).coords))
    basis_coords = exact.column_basis(cols)
    norm = abs(exact.int_mat_det(basis_coords))
    # transpose: column_basis returns columns as row-lists already
    basis_cols = [list(c) for c in basis_coords]
    if norm != p:
        raise CodecError("ideal above %d has norm %d; inertial degree must be one"
                         % (p, norm))
    # residue map: basis element -> value of its polynomial at `root` mod p
    residues = []
    for bp in field.basis_polys:
        val = exact.poly_eval(list(bp), Fraction(root))
        residues.append((val.numerator * exact.inv_mod(val.denominator, p)) % p)
    ideal = PrimeIdealData(field=field, p=p, root=root, basis_coords=basis_cols,
                           residues=residues, coset_reps=[])
    lat = ZLattice(ideal.embedded_basis())
    reps = []
    for c in range(p):
        target = field.element([c] + [0] * (n - 1))
        coeffs, _, _ = closest_vector(lat, target.embed())
        shift = _coords_combination(basis_cols, coeffs)
        rep = field.element([a - b for a, b in zip(target.coords, shift)])
        if ideal.rho(rep) != c:
            raise CodecError("coset representative reduction mismatch")
        reps.append(rep)
    ideal.coset_reps = reps
    return ideal


def _coords_combination(basis_cols, coeffs):
    n = len(basis_cols[0])
    out = [0] * n
    for col, z in zip(basis_cols, coeffs):
        z = int(z)
        if z:
            for i in range(n):
                out[i] += z * col[i]
    return out


@dataclass
class NestedLatticePair:
    """Fine/coarse lattice pair from nested linear codes over F_p.

    Codes are in canonical systematic form: G_fine = [I; A] stacked over the
    T positions, and G_coarse is its first k_coarse columns. gen_fine and
    gen_coarse give exact integer coordinate generators (nT x nT): column z
    of the lattice corresponds to the ring vector with coordinate block t
    equal to rows [t*n, (t+1)*n).
    """

    field: object
    ideal: PrimeIdealData
    G_coarse: np.ndarray
    G_fine: np.ndarray
    T: int
    gamma: float
    gen_fine: list
    gen_coarse: list

    @property
    def p(self):
        return self.ideal.p

    @property
    def k_fine(self):
        return self.G_fine.shape[1]

    @property
    def k_coarse(self):
        return self.G_coarse.shape[1]

    @property
    def G_msg(self):
        """Columns of G_fine carrying fresh message symbols."""
        return self.G_fine[:, self.k_coarse:]

    def embedded(self, gen):
        n, T = self.field.degree, self.T
        emb = np.zeros((n * T, n * T))
        for t in range(T):
            emb[t * n:(t + 1) * n, :] = self.field.embeddings @ np.array(
                [col[t * n:(t + 1) * n] for col in gen], dtype=float).T
        return emb

    def fine_lattice(self):
        return ZLattice(self.gamma * self.embedded(self.gen_fine))

    def coarse_lattice(self):
        return ZLattice(self.gamma * self.embedded(self.gen_coarse))

    def ring_vector(self, coord_blocks):
        return [self.field.element(coord_blocks[t * self.field.degree:
                                                (t + 1) * self.field.degree])
                for t in range(self.T)]

    def reduce_vector(self, ring_vec):
        """Finite-field image of a ring vector, one symbol per position."""
        return [self.ideal.rho(a) for a in ring_vec]

    def in_fine_code(self, symbols):
        """Membership of an F_p^T word in the fine code (syndrome check)."""
        kf = self.k_fine
        A = self.G_fine[kf:, :]
        head = np.array(symbols[:kf]) % self.p
        tail = (A @ head) % self.p
        return all(int(tail[i]) == symbols[kf + i] % self.p for i in range(self.T - kf))

    def fine_coords_of(self, ring_vec):
        """Exact generator coordinates of a ring vector lying in the fine lattice."""
        flat = [Fraction(c) for a in ring_vec for c in a.coords]
        rows = [[Fraction(self.gen_fine[j][i]) for j in range(len(self.gen_fine))]
                for i in range(len(flat))]
        sol = exact.mat_solve(rows, [flat])[0]
        if any(z.denominator != 1 for z in sol):
            raise CodecError("vector is not a fine lattice point")
        return [int(z) for z in sol]


def _validate_canonical(G, name):
    T, k = G.shape
    if k > T:
        raise CodecError("%s has more columns than positions" % name)
    if not np.array_equal(G[:k, :], np.eye(k, dtype=int)):
        raise CodecError("%s is not in canonical systematic form" % name)


def build_nested_pair(field, ideal, G_coarse, G_fine, T, gamma=1.0):
    """Assemble the nested pair and verify volumes and nesting exactly."""
    G_fine = np.array(G_fine, dtype=int).reshape(T, -1) % ideal.p
    G_coarse = np.array(G_coarse, dtype=int).reshape(T, -1) % ideal.p
    kf, kc = G_fine.shape[1], G_coarse.shape[1]
    if kc > kf:
        raise CodecError("coarse code cannot have more generators than fine")
    _validate_canonical(G_fine, "fine generator")
    if kc and not np.array_equal(G_coarse, G_fine[:, :kc]):
        raise CodecError("coarse generator must be a prefix of the fine generator")
    if gamma <= 0 or not math.isfinite(gamma):
        raise CodecError("gamma must be positive and finite")
    n = field.degree

    def generators(G):
        k = G.shape[1]
        cols = []
        for s in range(k):
            for i in range(n):
                col = [0] * (n * T)
                for t in range(T):
                    g = int(G[t, s])
                    if t == s:
                        col[t * n + i] = 1
                    elif t >= k and g:
                        basis_i = field.element([1 if q == i else 0 for q in range(n)])
                        lifted = g * basis_i
                        for q in range(n):
                            col[t * n + q] = lifted.coords[q]
                cols.append(col)
        for s in range(k, T):
            for i in range(n):
                col = [0] * (n * T)
                for q in range(n):
                    col[s * n + q] = ideal.basis_coords[i][q]
                cols.append(col)
        return cols

    gen_fine = generators(G_fine)
    gen_coarse = generators(G_coarse) if kc else [
        col for s in range(T) for col in
        [[0] * (s * n) + list(ideal.basis_coords[i]) + [0] * ((T - s - 1) * n)
         for i in range(n)]]
    pair = NestedLatticePair(field=field, ideal=ideal, G_coarse=G_coarse,
                             G_fine=G_fine, T=T, gamma=float(gamma),
                             gen_fine=gen_fine, gen_coarse=gen_coarse)

    # exact volume identities: |det gen| = p^(T - k)
    det_f = abs(exact.int_mat_det([[gen_fine[j][i] for j in range(n * T)]
                                   for i in range(n * T)]))
    det_c = abs(exact.int_mat_det([[gen_coarse[j][i] for j in range(n * T)]
                                   for i in range(n * T)]))
    if det_f != ideal.p ** (T - kf) or det_c != ideal.p ** (T - kc):
        raise CodecError("lattice volume identity failed")
    # exact nesting: every coarse generator is an integer combination of fine ones
    for col in gen_coarse:
        ring_vec = pair.ring_vector(col)
        pair.fine_coords_of(ring_vec)
    return pair


@dataclass
class Codeword:
    """Transmitted signal matrix with its exact ring coordinates."""

    X: np.ndarray           # n x T real signal, embedding columns per position
    ring_coords: list       # T ring elements (exact, unscaled by gamma)
    message: list

    def power(self):
        return float(np.sum(self.X ** 2)) / self.X.size


def _embed_ring_vector(field, ring_vec):
    return np.array([a.embed() for a in ring_vec], dtype=float).T


def sample_dither(pair, rng):
    """Dither uniform over the coarse Voronoi region (embedded coordinates)."""
    m = pair.field.degree * pair.T
    coarse = pair.coarse_lattice()
    u = coarse.basis @ rng.uniform(size=m)
    _, point, _ = closest_vector(coarse, u)
    return u - point


def encode(pair, message, dither=None):
    """Map message symbols to a transmit signal.

    message has k_fine - k_coarse symbols in F_p. The codeword is the
    minimal-lift of the linear-code word, reduced modulo the coarse lattice;
    an optional embedded-space dither is added before the reduction.
    """
    p, n, T = pair.p, pair.field.degree, pair.T
    message = [int(w) % p for w in message]
    if len(message) != pair.k_fine - pair.k_coarse:
        raise CodecError("message length must be %d" % (pair.k_fine - pair.k_coarse))
    word = exact.mat_vec_mod(pair.G_msg.tolist(), message, p)
    lift = [pair.ideal.coset_reps[c] for c in word]
    emb = _embed_ring_vector(pair.field, lift).flatten(order="F") * pair.gamma
    if dither is not None:
        emb = emb + np.asarray(dither, dtype=float)
    coarse = pair.coarse_lattice()
    zc, point, _ = closest_vector(coarse, emb)
    shift = _coords_combination(pair.gen_coarse, zc)
    ring = [a - pair.field.element(shift[t * n:(t + 1) * n])
            for t, a in enumerate(lift)]
    X = emb.reshape((n, T), order="F") - point.reshape((n, T), order="F")
    return Codeword(X=X, ring_coords=ring, message=message)


def scale_by_ring(pair, a, codeword):
    """Ring-scale a codeword: per-block diagonal action of sigma(a).

    Returns (scaled signal matrix, exact scaled ring coordinates). The
    scaled vector provably stays in the fine lattice; checked exactly.
    """
    ring = [a * x for x in codeword.ring_coords]
    symbols = pair.reduce_vector(ring)
    if not pair.in_fine_code(symbols):
        raise CodecError("scaled vector left the fine code")
    D = np.diag(a.embed())
    return D @ codeword.X, ring


@dataclass
class LatticeEquation:
    """Decoded fine-lattice point reduced modulo the coarse lattice."""

    ring_coords: list       # T exact ring elements (unscaled by gamma)
    signal: np.ndarray      # n x T embedded representative, scaled by gamma
    coeff_residues: list    # finite-field images of the combining coefficients


def decode_equation(pair, Y, b, coeff_vector):
    """Quantize scaled observations onto the fine lattice, mod the coarse one.

    Y is the n x T relay observation, b the per-block scaling, coeff_vector
    the ring coefficients the relay aims at (forwarded as residues).
    """
    n, T = pair.field.degree, pair.T
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (n, T):
        raise CodecError("observation must be %d x %d" % (n, T))
    scaled = (np.diag(np.asarray(b, dtype=float)) @ Y).flatten(order="F")
    fine = pair.fine_lattice()
    zf, _, _ = closest_vector(fine, scaled)
    coords = _coords_combination(pair.gen_fine, zf)
    coarse = pair.coarse_lattice()
    point = fine.basis @ np.array(zf, dtype=float)
    zc, cpoint, _ = closest_vector(coarse, point)
    shift = _coords_combination(pair.gen_coarse, zc)
    ring = [pair.field.element([coords[t * n + i] - shift[t * n + i]
                                for i in range(n)]) for t in range(T)]
    signal = (point - cpoint).reshape((n, T), order="F")
    return LatticeEquation(ring_coords=ring, signal=signal,
                           coeff_residues=[pair.ideal.rho(a) for a in coeff_vector])


def extract_ff_equation(pair, equation):
    """Finite-field message combination carried by a lattice equation.

    Reduces the equation modulo the prime ideal, strips the coarse-code
    component, and inverts the message generator via its pseudo-inverse.
    """
    p = pair.p
    v = pair.reduce_vector(equation.ring_coords)
    if not pair.in_fine_code(v):
        raise CodecError("equation does not reduce into the fine code")
    kc, kf = pair.k_coarse, pair.k_fine
    if kc:
        coarse_part = exact.mat_vec_mod(pair.G_coarse.tolist(), v[:kc], p)
        v = [(x - y) % p for x, y in zip(v, coarse_part)]
    # v now equals G_msg @ u mod p; the canonical systematic rows expose u
    # directly, matching the Gram pseudo-inverse whenever that is defined.
    u = v[kc:kf]
    Gm = pair.G_msg.tolist()
    check = exact.mat_vec_mod(Gm, u, p)
    if check != [x % p for x in v]:
        raise CodecError("equation is not in the message-code coset")
    return u


def destination_solve(coeff_matrix, equations, p):
    """Solve the relay equation system for the original messages mod p.

    coeff_matrix[r][l] is relay r's residue coefficient for user l;
    equations[r] the finite-field combination it forwarded (one symbol per
    message stream). Raises CodecError when the system is singular.
    """
    try:
        inv = exact.mat_inv_mod(coeff_matrix, p)
    except ZeroDivisionError as e:
        raise CodecError("relay coefficient matrix is singular mod %d" % p) from e
    eq = np.array(equations, dtype=int).reshape(len(equations), -1)
    out = []
    for col in range(eq.shape[1]):
        out.append(exact.mat_vec_mod(inv, [int(x) for x in eq[:, col]], p))
    return [[out[c][r] for c in range(eq.shape[1])] for r in range(len(equations))]
