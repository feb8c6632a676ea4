"""Reference NumPy implementations of the simulator's inner-loop kernels.

The compiled module ``doflab._kernels_cy`` exposes the same two functions;
``doflab.kernels`` picks whichever is available. Keep the semantics here
authoritative: the parity test holds the compiled path to this one.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularCovariance


def logdet_rate_bits(g: np.ndarray, sigma: np.ndarray) -> float:
    """log2 det(I + G^H Sigma^{-1} G) for complex G (m, k) and Hermitian
    positive definite Sigma (m, m): the mutual information in bits of
    y = G s + n with unit-power symbols and noise covariance Sigma.
    """
    g = np.asarray(g, dtype=np.complex128)
    sigma = np.asarray(sigma, dtype=np.complex128)
    m, k = g.shape
    if sigma.shape != (m, m):
        raise ValueError(f"covariance shape {sigma.shape} does not match {m} rows")
    if m == 0 or k == 0:
        return 0.0
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise SingularCovariance("noise covariance is not positive definite") from exc
    white = np.linalg.solve(chol, g)
    gram = np.eye(k, dtype=np.complex128) + white.conj().T @ white
    # gram is PD by construction; its Cholesky diagonal gives the log-det
    cg = np.linalg.cholesky(gram)
    return float(2.0 * np.sum(np.log2(np.diag(cg).real)))


def numerical_rank(a: np.ndarray, rtol: float = 1e-9) -> int:
    """Singular values above rtol times the largest one."""
    a = np.asarray(a, dtype=np.complex128)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))
