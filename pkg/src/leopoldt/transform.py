"""The mod-p Leopoldt transform Gamma_delta.

Gamma_delta sends (1+T)^a to a^delta (1+T)^{ell(a)} for p not dividing a and
kills (1+T)^a for p | a, where ell(a) = log_p(a) / log_p(kappa0).  Since
(1+T)^{p^{m+1}} = 1 + T^{p^{m+1}} mod p and ell(b + p^{m+1} t) = ell(b) mod
p^m, an input known mod T^{p^{m+1}} determines the output mod T^{p^m}.
"""

from __future__ import annotations

import numpy as np

from .arith import ell_table
from .errors import InvalidParameter, PrecisionError
from .pseries import TruncSeries, _to_t_basis, _to_x_basis


def gamma_transform(delta: int, F: TruncSeries, ictx, m: int) -> TruncSeries:
    """Gamma_delta(F) mod T^{p^m} from F mod T^{p^(m+1)}."""
    p = F.p
    if m < 1:
        raise InvalidParameter("level m must be at least 1")
    n_in = p ** (m + 1)
    if F.prec < n_in:
        raise PrecisionError(f"level {m} needs precision {n_in}, series has {F.prec}")
    mu = _to_x_basis(F.coeffs[:n_in], p, n_in)
    return TruncSeries(F.ctx, _to_t_basis(transform_x_basis(delta, mu, p, ictx.kappa0, m), p))


def transform_x_basis(delta: int, mu: np.ndarray, p: int, kappa0: int, m: int) -> np.ndarray:
    """Gamma_delta on (1+T)-basis coefficients: length p^(m+1) in, p^m out."""
    n_in, n_out = p ** (m + 1), p ** m
    mu = mu[:n_in]
    ell = ell_table(p, kappa0, m)
    b = np.arange(n_in, dtype=np.int64)
    units = b % p != 0
    weights = np.array([pow(r, delta % (p - 1), p) for r in range(p)], dtype=np.int64)
    nu = np.zeros((n_out, mu.shape[1]), dtype=np.int64)
    np.add.at(nu, ell[units], mu[units] * weights[b[units] % p][:, None])
    return nu % p
