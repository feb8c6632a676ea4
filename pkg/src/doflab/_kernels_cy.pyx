# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner-loop kernels: whitened log-det rates and numerical rank.

Same contract as ``doflab._kernels_np``; built directly on BLAS/LAPACK so
the Monte Carlo sweeps skip the per-call NumPy dispatch and temporaries.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport log2
from scipy.linalg.cython_blas cimport zherk, ztrsm
from scipy.linalg.cython_lapack cimport zgesvd, zpotrf

from .errors import SingularCovariance

cnp.import_array()

ctypedef double complex zcomplex


def logdet_rate_bits(g, sigma):
    """log2 det(I + G^H Sigma^{-1} G); Sigma must be Hermitian PD."""
    cdef cnp.ndarray[zcomplex, ndim=2, mode="fortran"] a = np.array(
        sigma, dtype=np.complex128, order="F", copy=True
    )
    cdef cnp.ndarray[zcomplex, ndim=2, mode="fortran"] b = np.array(
        g, dtype=np.complex128, order="F", copy=True
    )
    cdef int m = b.shape[0]
    cdef int k = b.shape[1]
    if a.shape[0] != m or a.shape[1] != m:
        raise ValueError(
            f"covariance shape ({a.shape[0]}, {a.shape[1]}) does not match {m} rows"
        )
    if m == 0 or k == 0:
        return 0.0

    cdef char side = b"L"
    cdef char uplo = b"L"
    cdef char transn = b"N"
    cdef char transc = b"C"
    cdef char diag = b"N"
    cdef int info = 0
    cdef zcomplex one = 1.0
    cdef double oned = 1.0

    # Sigma = L L^H
    zpotrf(&uplo, &m, &a[0, 0], &m, &info)
    if info != 0:
        raise SingularCovariance("noise covariance is not positive definite")
    # B <- L^{-1} G
    ztrsm(&side, &uplo, &transn, &diag, &m, &k, &one, &a[0, 0], &m, &b[0, 0], &m)

    cdef cnp.ndarray[zcomplex, ndim=2, mode="fortran"] gram = np.eye(
        k, dtype=np.complex128, order="F"
    )
    # gram <- I + B^H B (lower triangle)
    zherk(&uplo, &transc, &k, &m, &oned, &b[0, 0], &m, &oned, &gram[0, 0], &k)
    zpotrf(&uplo, &k, &gram[0, 0], &k, &info)
    if info != 0:
        raise SingularCovariance("whitened Gram matrix lost positive definiteness")

    cdef double acc = 0.0
    cdef int i
    for i in range(k):
        acc += 2.0 * log2(gram[i, i].real)
    return acc


def numerical_rank(a, double rtol=1e-9):
    """Singular values above rtol times the largest one."""
    cdef cnp.ndarray[zcomplex, ndim=2, mode="fortran"] work_a = np.array(
        np.atleast_2d(a), dtype=np.complex128, order="F", copy=True
    )
    cdef int m = work_a.shape[0]
    cdef int n = work_a.shape[1]
    cdef int minmn = min(m, n)
    if m == 0 or n == 0:
        return 0

    cdef char jobn = b"N"
    cdef int info = 0
    cdef int lwork = -1
    cdef int ldu = 1
    cdef zcomplex wkopt
    cdef zcomplex udummy
    cdef cnp.ndarray[double, ndim=1] s = np.empty(minmn, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] rwork = np.empty(5 * minmn, dtype=np.float64)

    zgesvd(&jobn, &jobn, &m, &n, &work_a[0, 0], &m, &s[0], &udummy, &ldu,
           &udummy, &ldu, &wkopt, &lwork, &rwork[0], &info)
    lwork = <int> wkopt.real
    cdef cnp.ndarray[zcomplex, ndim=1] work = np.empty(lwork, dtype=np.complex128)
    zgesvd(&jobn, &jobn, &m, &n, &work_a[0, 0], &m, &s[0], &udummy, &ldu,
           &udummy, &ldu, &work[0], &lwork, &rwork[0], &info)
    if info != 0:
        raise np.linalg.LinAlgError(f"SVD failed to converge (info={info})")

    if s[0] == 0.0:
        return 0
    cdef int rank = 0
    cdef int i
    for i in range(minmn):
        if s[i] > rtol * s[0]:
            rank += 1
    return rank
