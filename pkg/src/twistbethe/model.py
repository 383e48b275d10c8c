"""Spin-chain operators on the full 2^N space and the exact-diagonalization oracle.

Site 1 is the most significant bit of the basis index, so basis state
|s_1 ... s_N> has index sum_j s_j 2^{N-j} with s=0 for spin up.  The
twisted chain closes through a spin-x rotation, so its boundary bond is
sx.sx - sy.sy - cosh(eta) sz.sz while every bulk bond (and every periodic
bond) is sx.sx + sy.sy + cosh(eta) sz.sz.

Hamiltonians are kept real symmetric; the three-site charge and the
transfer matrix are complex.  Dense realizations stop at N = 12 (this is
a 5 GB class machine); beyond that only matrix-free bitwise application
is offered, which ARPACK consumes up to N = 20.
"""

from __future__ import annotations

import math
import cmath
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .common import Boundary, Parity

DENSE_MAX = 12
ITERATIVE_MAX = 20
DEGENERACY_TOL = 1e-8

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_SP = np.array([[0.0, 1.0], [0.0, 0.0]])   # sigma^+ = |up><down|
_SM = np.array([[0.0, 0.0], [1.0, 0.0]])


@dataclass(frozen=True)
class ModelParams:
    """Chain length, anisotropy eta > 0 (Delta = cosh eta), boundary kind,
    and per-site inhomogeneities (zero in every physical statement; nonzero
    values only feed transfer-matrix fuzz checks)."""

    N: int
    eta: float
    boundary: Boundary = Boundary.ANTIPERIODIC
    theta: tuple[float, ...] = ()

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("need at least two sites")
        if not self.eta > 0:
            raise ValueError("eta must be positive (massive regime)")
        object.__setattr__(self, "boundary", Boundary.coerce(self.boundary))
        th = tuple(float(t) for t in self.theta) if self.theta else (0.0,) * self.N
        if len(th) != self.N:
            raise ValueError("theta must have exactly N entries")
        object.__setattr__(self, "theta", th)

    @property
    def parity(self) -> Parity:
        return Parity.of(self.N)

    @property
    def dim(self) -> int:
        return 1 << self.N


class ChainOperator:
    """Linear operator on the 2^N space: a matvec plus an optional dense
    realization.  Immutable after construction."""

    def __init__(self, n_sites, matvec, dense=None, hermitian=False,
                 dtype=np.float64, label=""):
        self.n_sites = n_sites
        self.dim = 1 << n_sites
        self._matvec = matvec
        self._dense = dense
        self.hermitian = hermitian
        self.dtype = np.dtype(dtype)
        self.label = label

    def matvec(self, v):
        v = np.asarray(v)
        if v.shape != (self.dim,):
            raise ValueError(f"vector length must be {self.dim}")
        if self._matvec is not None:
            return self._matvec(v)
        return self._dense @ v

    @property
    def dense(self):
        """Dense matrix, or None when the operator is matvec-only."""
        d = self._dense
        if sp.issparse(d):
            d = d.toarray()
        return d

    def as_scipy(self):
        return spla.LinearOperator((self.dim, self.dim), matvec=self.matvec,
                                   dtype=self.dtype)


def _site(N: int, j: int, m: np.ndarray) -> sp.csr_matrix:
    """Single-site operator m at 1-based site j as a sparse 2^N matrix."""
    left = sp.identity(1 << (j - 1), format="csr", dtype=m.dtype)
    right = sp.identity(1 << (N - j), format="csr", dtype=m.dtype)
    return sp.kron(sp.kron(left, sp.csr_matrix(m)), right, format="csr")


def _bonds(params: ModelParams):
    """(j, k, twisted) for all N bonds; the last bond closes the ring and is
    the twisted one on the antiperiodic chain."""
    out = [(j, j + 1, False) for j in range(1, params.N)]
    out.append((params.N, 1, params.boundary is Boundary.ANTIPERIODIC))
    return out


def _hamiltonian_sparse(params: ModelParams) -> sp.csr_matrix:
    N, ch = params.N, math.cosh(params.eta)
    H = sp.csr_matrix((1 << N, 1 << N))
    for j, k, twisted in _bonds(params):
        sx = _site(N, j, _SX) @ _site(N, k, _SX)
        sy = (_site(N, j, _SY) @ _site(N, k, _SY)).real
        sz = _site(N, j, _SZ) @ _site(N, k, _SZ)
        if twisted:
            H = H + sx - sy - ch * sz
        else:
            H = H + sx + sy + ch * sz
    return H.real


class _BitwiseH:
    """Matrix-free H application via spin-flip rules.

    Per bond, the xy part maps a basis state to the one with both bond
    spins flipped, with amplitude 2 on antiparallel pairs (bulk) or on
    parallel pairs (twisted bond, where sxsx - sysy raises/lowers both).
    The zz part is diagonal.
    """

    def __init__(self, params: ModelParams):
        N, ch = params.N, math.cosh(params.eta)
        dim = 1 << N
        i = np.arange(dim, dtype=np.intp)
        diag = np.zeros(dim)
        hops = []
        for j, k, twisted in _bonds(params):
            p1, p2 = N - j, N - k
            mask = (1 << p1) | (1 << p2)
            equal = ((i >> p1) & 1) == ((i >> p2) & 1)
            zz = np.where(equal, 1.0, -1.0)
            diag += (-ch if twisted else ch) * zz
            active = equal if twisted else ~equal
            dst = i[active]
            hops.append((dst, dst ^ mask))
        self.diag = diag
        self.hops = hops

    def __call__(self, v):
        out = self.diag * v
        for dst, src in self.hops:
            out[dst] += 2.0 * v[src]
        return out


def build_hamiltonian(params: ModelParams) -> ChainOperator:
    """H = sum_bonds sx.sx + sy.sy + cosh(eta) sz.sz with the closing bond
    sign-twisted on the antiperiodic chain.  Real symmetric; dense matrix
    attached for N <= 12, matrix-free application at any N <= 20."""
    if any(params.theta):
        raise ValueError("the Hamiltonian is defined at zero inhomogeneities")
    mv = _BitwiseH(params)
    dense = _hamiltonian_sparse(params).toarray() if params.N <= DENSE_MAX else None
    return ChainOperator(params.N, mv, dense=dense, hermitian=True,
                         label=f"H[{params.boundary.value},N={params.N}]")


def _rotation_index(N: int) -> np.ndarray:
    """src[i] = index of the basis state whose right-rotation-and-flip is i,
    so that (t0 v)[i] = v[src[i]]."""
    dim = 1 << N
    i = np.arange(dim, dtype=np.intp)
    # t(0)|s_1..s_N> = |sbar_N, s_1, .., s_{N-1}>: new index j has MSB = ~old LSB
    # and the rest shifted.  Invert: from j, old state is (j without MSB) << 1 | ~MSB.
    msb = (i >> (N - 1)) & 1
    src = ((i & ((1 << (N - 1)) - 1)) << 1) | (1 - msb)
    return src


def build_momentum_charge(params: ModelParams) -> ChainOperator:
    """The translation-like unitary t(0) of the twisted chain: cyclic right
    shift followed by a spin flip on the first site.  Its eigenvalue logs
    are the momentum charge; t(0)^{2N} = 1 exactly."""
    if params.boundary is not Boundary.ANTIPERIODIC:
        raise ValueError("momentum charge is defined for the antiperiodic chain")
    if any(params.theta):
        raise ValueError("momentum charge requires zero inhomogeneities")
    src = _rotation_index(params.N)

    def mv(v):
        return v[src]

    dense = None
    if params.N <= DENSE_MAX:
        dim = 1 << params.N
        dense = sp.csr_matrix(
            (np.ones(dim), (np.arange(dim), src)), shape=(dim, dim))
    return ChainOperator(params.N, mv, dense=dense, hermitian=False,
                         label=f"t0[N={params.N}]")


def build_h2_charge(params: ModelParams) -> ChainOperator:
    """Three-site conserved charge from the second logarithmic derivative of
    the transfer matrix:

    H2 = sum_j [ -ch sx sy sz + ch sy sx sz - sy sz sx
                 + ch sz sy sx - ch sz sx sy + sx sz sy ]_{j,j+1,j+2}

    with ch = cosh(eta) and the twisted wrap s_{N+k} = sx_k s_k sx_k.
    Hermitian; commutes with H and t(u)."""
    if params.boundary is not Boundary.ANTIPERIODIC:
        raise ValueError("H2 charge is defined for the antiperiodic chain")
    if params.N < 3:
        raise ValueError("three-site charge needs N >= 3")
    if params.N > DENSE_MAX:
        raise ValueError(f"H2 charge is built densely; N <= {DENSE_MAX} only")
    N, ch = params.N, math.cosh(params.eta)
    dim = 1 << N

    def wrapped(j, m):
        # site index folded into 1..N; crossing the seam conjugates by sx
        if j <= N:
            return _site(N, j, m)
        jj = j - N
        return _site(N, jj, _SX @ m @ _SX)

    terms = [(-ch, _SX, _SY, _SZ), (ch, _SY, _SX, _SZ), (-1.0, _SY, _SZ, _SX),
             (ch, _SZ, _SY, _SX), (-ch, _SZ, _SX, _SY), (1.0, _SX, _SZ, _SY)]
    H2 = sp.csr_matrix((dim, dim), dtype=complex)
    for j in range(1, N + 1):
        for coeff, m1, m2, m3 in terms:
            H2 = H2 + coeff * (wrapped(j, m1) @ wrapped(j + 1, m2) @ wrapped(j + 2, m3))
    return ChainOperator(N, None, dense=H2.toarray(), hermitian=True,
                         dtype=np.complex128, label=f"H2[N={N}]")


def transfer_matrix(u: complex, params: ModelParams) -> ChainOperator:
    """Twisted transfer matrix t(u) = tr_0 [ sx_0 R_{0N}(u-th_N)...R_{01}(u-th_1) ]
    (trace without the twist for the periodic chain), built densely by
    contracting the 2x2 auxiliary structure site by site.

    R blocks in the auxiliary basis: [[a P+ + b P-, s^-], [s^+, b P+ + a P-]]
    with a = sinh(u-th+eta)/sinh(eta), b = sinh(u-th)/sinh(eta) and
    P+- = (1 +- sz)/2, so R(0) at th=0 is the permutation.
    """
    if params.N > DENSE_MAX:
        raise ValueError(f"transfer matrix is dense-only; N <= {DENSE_MAX}")
    N, eta = params.N, params.eta
    sh = cmath.sinh(eta)
    # accumulated monodromy blocks [[A, B], [C, D]], starting from R_{01};
    # blocks are dense from the first step (the product fills in anyway),
    # site factors stay sparse so each step is a cheap sparse @ dense
    A = B = C = D = None
    for j in range(1, N + 1):
        a = cmath.sinh(u - params.theta[j - 1] + eta) / sh
        b = cmath.sinh(u - params.theta[j - 1]) / sh
        pz = _site(N, j, np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex))
        mz = _site(N, j, np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex))
        r11 = a * pz + b * mz
        r12 = _site(N, j, _SM.astype(complex))
        r21 = _site(N, j, _SP.astype(complex))
        r22 = b * pz + a * mz
        if A is None:
            A, B, C, D = (m.toarray() for m in (r11, r12, r21, r22))
        else:
            A, B, C, D = (r11 @ A + r12 @ C, r11 @ B + r12 @ D,
                          r21 @ A + r22 @ C, r21 @ B + r22 @ D)
    t = (B + C) if params.boundary is Boundary.ANTIPERIODIC else (A + D)
    return ChainOperator(N, None, dense=np.asarray(t), hermitian=False,
                         dtype=np.complex128, label=f"t[u={u},N={N}]")


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    degeneracies: list[int] = field(default_factory=list)
    method: str = "dense"

    def cluster_starts(self):
        out, pos = [], 0
        for d in self.degeneracies:
            out.append(pos)
            pos += d
        return out


def _cluster(vals: np.ndarray, tol: float = DEGENERACY_TOL) -> list[int]:
    degs = []
    for i, v in enumerate(vals):
        if i > 0 and abs(v - vals[i - 1]) < tol:
            degs[-1] += 1
        else:
            degs.append(1)
    return degs


def ed_spectrum(op: ChainOperator, count: int, *, seed: int = 0,
                method: str | None = None, return_vectors: bool = False):
    """Lowest `count` eigenvalues of a Hermitian chain operator, with
    degeneracy multiplicities clustered at 1e-8.

    Dense path (numpy/scipy eigh) when a dense realization exists, ARPACK
    otherwise or when forced with method="iterative"; the ARPACK start
    vector is derived from `seed` so repeated runs are identical.  For a
    non-Hermitian operator (the unitary t(0)) the full dense spectrum is
    returned sorted by real part, `count` permitting truncation.
    """
    if count < 1 or count > op.dim:
        raise ValueError("count out of range")
    if not op.hermitian:
        d = op.dense
        if d is None:
            raise ValueError("non-Hermitian spectra need a dense realization")
        vals, vecs = np.linalg.eig(d)
        order = np.lexsort((vals.imag, vals.real))
        vals, vecs = vals[order], vecs[:, order]
        if count < op.dim:
            vals, vecs = vals[:count], vecs[:, :count]
        res = SpectrumResult(vals, _cluster(vals), "dense")
        return (res, vecs) if return_vectors else res

    use_iter = method == "iterative" or (method is None and op.dense is None)
    if method == "dense" and op.dense is None:
        raise ValueError("no dense realization available")
    if use_iter:
        if count >= op.dim - 1:
            raise ValueError("iterative path needs count < dim-1")
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(op.dim)
        vals, vecs = spla.eigsh(op.as_scipy(), k=count, which="SA", v0=v0)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        res = SpectrumResult(vals, _cluster(vals), "iterative")
    else:
        d = op.dense
        if count < op.dim:
            vals, vecs = scipy.linalg.eigh(d, subset_by_index=(0, count - 1))
        else:
            vals, vecs = scipy.linalg.eigh(d)
        res = SpectrumResult(vals, _cluster(vals), "dense")
    return (res, vecs) if return_vectors else res


@dataclass
class GroundSpace:
    """Ground doublet of the twisted chain: energy, an orthonormal basis of
    the two-dimensional eigenspace, and the t(0) eigendata on it."""

    energy: float
    vectors: np.ndarray          # (dim, 2)
    t0_eigenvalues: np.ndarray   # the two unimodular eigenvalues
    t0_vectors: np.ndarray       # (dim, 2), t(0)-diagonal combinations

    def branch_vector(self, target: complex) -> np.ndarray:
        """Doublet member whose t(0) eigenvalue is nearest `target`."""
        i = int(np.argmin(np.abs(self.t0_eigenvalues - target)))
        return self.t0_vectors[:, i]


def ground_space(params: ModelParams, *, seed: int = 0) -> GroundSpace:
    """Ground doublet with the t(0) branch resolved.

    The twisted-chain ground level is exactly doubly degenerate; the
    degenerate pair is split by diagonalizing the 2x2 block of t(0), whose
    eigenvalues are +-i (even N) or +-1 (odd N).
    """
    if params.boundary is not Boundary.ANTIPERIODIC:
        raise ValueError("ground_space resolves the twisted-chain doublet")
    H = build_hamiltonian(params)
    res, vecs = ed_spectrum(H, 2, seed=seed, return_vectors=True)
    if res.degeneracies[0] != 2:
        raise RuntimeError(
            f"ground level not doubly degenerate at clustering tol: {res.eigenvalues}")
    V = np.linalg.qr(vecs[:, :2])[0]
    t0 = build_momentum_charge(params)
    block = V.conj().T @ np.column_stack([t0.matvec(V[:, 0]), t0.matvec(V[:, 1])])
    w, s = np.linalg.eig(block)
    return GroundSpace(energy=float(res.eigenvalues[0]), vectors=V,
                       t0_eigenvalues=w, t0_vectors=V @ s)


def doublet_block(op: ChainOperator, vectors: np.ndarray) -> np.ndarray:
    """2x2 projection <v_i| op |v_j> of an operator onto a doublet basis."""
    cols = [op.matvec(vectors[:, j].astype(complex)) for j in range(vectors.shape[1])]
    return vectors.conj().T @ np.column_stack(cols)
